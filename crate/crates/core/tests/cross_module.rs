//! Checks that tie independently built pieces together.

use barrel_core::graph::{build_graph, count_matchings_brute, BarrelGraph, BarrelParams, EdgeKind};
use barrel_core::paths::total_via_paths;
use barrel_core::transfer::{
    build_transfer, closed_form_345, count_matchings_transfer, OperatorMode, TransferCounter,
};
use barrel_core::Subset;

/// Perfect matchings of the subgraph induced by `alive` using only big-cycle
/// edges of the explicit graph.
fn cycle_matchings(g: &BarrelGraph, alive: &mut Vec<bool>) -> u64 {
    let Some(v) = alive.iter().position(|&a| a) else {
        return 1;
    };
    alive[v] = false;
    let mut total = 0;
    for &(w, e) in g.neighbours(v) {
        let big = matches!(g.edge(e).kind, EdgeKind::BigCycleUp | EdgeKind::BigCycleDown);
        if big && alive[w] {
            alive[w] = false;
            total += cycle_matchings(g, alive);
            alive[w] = true;
        }
    }
    alive[v] = true;
    total
}

#[test]
fn transfer_entries_match_the_explicit_cycle() {
    for m in 3..=7 {
        let g = build_graph(BarrelParams::new(m, 1).unwrap()).unwrap();
        let op = build_transfer(m, OperatorMode::Exact).unwrap();
        let cycle: Vec<usize> = (0..g.vertex_count())
            .filter(|&v| g.label(v).to_string().starts_with("C:1:"))
            .collect();
        for s in 0u32..1 << m {
            for t in 0u32..1 << m {
                let mut alive = vec![false; g.vertex_count()];
                for &v in &cycle {
                    alive[v] = true;
                }
                for (layer, set) in [(0, Subset(s)), (1, Subset(t))] {
                    for l in set.members() {
                        let e = g.edge(g.horizontal_edge(layer, l));
                        alive[e.u] = false;
                        alive[e.v] = false;
                    }
                }
                assert_eq!(
                    cycle_matchings(&g, &mut alive),
                    op.count(Subset(s), Subset(t)),
                    "m={m} S={} T={}",
                    Subset(s),
                    Subset(t)
                );
            }
        }
    }
}

#[test]
fn three_counting_routes_agree() {
    for m in 3..=6 {
        for k in 0..=3 {
            let g = build_graph(BarrelParams::new(m, k).unwrap()).unwrap();
            if g.vertex_count() > 72 {
                continue;
            }
            let brute = count_matchings_brute(&g).unwrap();
            assert_eq!(brute, count_matchings_transfer(m, k).unwrap(), "m={m} k={k}");
            assert_eq!(brute, total_via_paths(m, k).unwrap(), "m={m} k={k}");
        }
    }
    for m in 7..=10 {
        let counts = TransferCounter::new(m).unwrap().counts_up_to(8);
        for (k, c) in counts.iter().enumerate() {
            assert_eq!(*c, total_via_paths(m, k).unwrap(), "m={m} k={k}");
        }
    }
}

#[test]
fn closed_forms_far_out() {
    for m in 3..=5 {
        let counts = TransferCounter::new(m).unwrap().counts_up_to(60);
        for k in (0..=60).step_by(7) {
            assert_eq!(counts[k], closed_form_345(m, k).unwrap());
        }
    }
}
