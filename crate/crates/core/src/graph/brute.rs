use num_bigint::BigUint;
use rayon::prelude::*;

use super::{BarrelGraph, Matching};
use crate::error::{Error, Result};

pub const DEFAULT_VERTEX_CAP: usize = 72;
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Frontier size at which the search tree is handed to worker threads.
const PARALLEL_FRONTIER: usize = 64;

/// Counts perfect matchings by backtracking, always matching the
/// lowest-index uncovered vertex.
pub fn count_matchings_brute(g: &BarrelGraph) -> Result<BigUint> {
    count_matchings_brute_with_cap(g, DEFAULT_VERTEX_CAP)
}

pub fn count_matchings_brute_with_cap(g: &BarrelGraph, vertex_cap: usize) -> Result<BigUint> {
    if g.vertex_count() > vertex_cap {
        return Err(Error::TooLarge(format!(
            "{} vertices exceed the brute-force cap of {vertex_cap}",
            g.vertex_count()
        )));
    }
    // Expand the top of the tree breadth-first, then count the subtrees in parallel.
    let mut frontier = vec![vec![false; g.vertex_count()]];
    while frontier.len() < PARALLEL_FRONTIER {
        let mut next = Vec::new();
        let mut finished = 0usize;
        for covered in &frontier {
            match covered.iter().position(|&c| !c) {
                None => finished += 1,
                Some(v) => {
                    for &(w, _) in g.neighbours(v) {
                        if !covered[w] {
                            let mut child = covered.clone();
                            child[v] = true;
                            child[w] = true;
                            next.push(child);
                        }
                    }
                }
            }
        }
        if finished > 0 || next.is_empty() {
            // Only happens once everything is covered; the tree is tiny.
            let rest: u64 = next.iter_mut().map(|c| count_from(g, c, 0)).sum();
            return Ok(BigUint::from(finished as u64 + rest));
        }
        frontier = next;
    }
    let total: u64 = frontier
        .into_par_iter()
        .map(|mut covered| count_from(g, &mut covered, 0))
        .sum();
    Ok(BigUint::from(total))
}

fn count_from(g: &BarrelGraph, covered: &mut [bool], hint: usize) -> u64 {
    let Some(v) = (hint..covered.len()).find(|&v| !covered[v]) else {
        return 1;
    };
    covered[v] = true;
    let mut total = 0;
    for &(w, _) in g.neighbours(v) {
        if !covered[w] {
            covered[w] = true;
            total += count_from(g, covered, v + 1);
            covered[w] = false;
        }
    }
    covered[v] = false;
    total
}

/// Streams every perfect matching exactly once, in the deterministic order of
/// the lowest-uncovered-vertex search.
pub fn enumerate_matchings(g: &BarrelGraph) -> Result<MatchingIter<'_>> {
    enumerate_matchings_with_cap(g, DEFAULT_ENUMERATION_CAP, DEFAULT_VERTEX_CAP)
}

pub fn enumerate_matchings_with_cap(
    g: &BarrelGraph,
    matching_cap: u64,
    vertex_cap: usize,
) -> Result<MatchingIter<'_>> {
    let count = count_matchings_brute_with_cap(g, vertex_cap)?;
    if count > BigUint::from(matching_cap) {
        return Err(Error::TooMany { count: count.to_string(), cap: matching_cap });
    }
    Ok(MatchingIter::new(g))
}

struct Frame {
    vertex: usize,
    next: usize,
    partner: Option<usize>,
}

pub struct MatchingIter<'g> {
    g: &'g BarrelGraph,
    covered: Vec<bool>,
    chosen: Vec<usize>,
    frames: Vec<Frame>,
    descend: bool,
    done: bool,
}

impl<'g> MatchingIter<'g> {
    fn new(g: &'g BarrelGraph) -> Self {
        MatchingIter {
            g,
            covered: vec![false; g.vertex_count()],
            chosen: Vec::new(),
            frames: Vec::new(),
            descend: true,
            done: false,
        }
    }
}

impl Iterator for MatchingIter<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        loop {
            if self.done {
                return None;
            }
            if self.descend {
                self.descend = false;
                let start = self.frames.last().map_or(0, |f| f.vertex + 1);
                match (start..self.covered.len()).find(|&v| !self.covered[v]) {
                    None => return Some(Matching::from_edges(self.chosen.clone())),
                    Some(v) => self.frames.push(Frame { vertex: v, next: 0, partner: None }),
                }
            }
            let Some(top) = self.frames.last_mut() else {
                self.done = true;
                return None;
            };
            let v = top.vertex;
            if let Some(w) = top.partner.take() {
                self.covered[v] = false;
                self.covered[w] = false;
                self.chosen.pop();
            }
            let nbrs = self.g.neighbours(v);
            while top.next < nbrs.len() {
                let (w, e) = nbrs[top.next];
                top.next += 1;
                if !self.covered[w] {
                    self.covered[v] = true;
                    self.covered[w] = true;
                    self.chosen.push(e);
                    top.partner = Some(w);
                    self.descend = true;
                    break;
                }
            }
            if top.partner.is_none() {
                self.frames.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, BarrelParams};

    fn graph(m: usize, k: usize) -> BarrelGraph {
        build_graph(BarrelParams::new(m, k).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_values_at_small_k() {
        assert_eq!(count_matchings_brute(&graph(3, 0)).unwrap(), BigUint::from(10u32));
        assert_eq!(count_matchings_brute(&graph(5, 0)).unwrap(), BigUint::from(36u32));
        assert_eq!(count_matchings_brute(&graph(4, 1)).unwrap(), BigUint::from(41u32));
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let g = graph(6, 5);
        assert!(matches!(count_matchings_brute(&g), Err(Error::TooLarge(_))));
        assert!(count_matchings_brute_with_cap(&g, 100).is_ok());
    }

    #[test]
    fn enumeration_is_complete_and_valid() {
        let g = graph(3, 0);
        let all: Vec<Matching> = enumerate_matchings(&g).unwrap().collect();
        assert_eq!(all.len(), 10);
        for mm in &all {
            mm.validate(&g).unwrap();
        }
        let g = graph(4, 0);
        assert_eq!(enumerate_matchings(&g).unwrap().count(), 17);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let g = graph(4, 1);
        let mut all: Vec<Matching> = enumerate_matchings(&g).unwrap().collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
        assert_eq!(n, 41);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let g = graph(4, 1);
        assert!(matches!(
            enumerate_matchings_with_cap(&g, 40, DEFAULT_VERTEX_CAP),
            Err(Error::TooMany { .. })
        ));
    }

    #[test]
    fn enumeration_order_is_deterministic() {
        let g = graph(5, 1);
        let a: Vec<Matching> = enumerate_matchings(&g).unwrap().collect();
        let b: Vec<Matching> = enumerate_matchings(&g).unwrap().collect();
        assert_eq!(a, b);
    }
}
