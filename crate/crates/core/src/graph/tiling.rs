use serde::Serialize;

use super::{BarrelGraph, EdgeKind};
use crate::error::{Error, Result};
use crate::subset::Subset;

/// A set of edges of a [`BarrelGraph`], kept sorted by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matching {
    edges: Vec<usize>,
}

impl Matching {
    pub fn from_edges(mut edges: Vec<usize>) -> Matching {
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// Checks that every vertex of `g` is covered exactly once.
    pub fn validate(&self, g: &BarrelGraph) -> Result<()> {
        let mut covered = vec![false; g.vertex_count()];
        for &e in &self.edges {
            if e >= g.edge_count() {
                return Err(Error::NotPerfect(format!("edge id {e} out of range")));
            }
            let edge = g.edge(e);
            for x in [edge.u, edge.v] {
                if std::mem::replace(&mut covered[x], true) {
                    return Err(Error::NotPerfect(format!("vertex {} covered twice", g.label(x))));
                }
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::NotPerfect(format!("vertex {} uncovered", g.label(v))));
        }
        Ok(())
    }

    /// The partner of every vertex.
    pub(crate) fn partners(&self, g: &BarrelGraph) -> Vec<usize> {
        let mut partner = vec![usize::MAX; g.vertex_count()];
        for &e in &self.edges {
            let edge = g.edge(e);
            partner[edge.u] = edge.v;
            partner[edge.v] = edge.u;
        }
        partner
    }
}

/// Matched horizontal edges per layer: `layers[j] = { l : e_{j,l} matched }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HorizontalProfile {
    pub layers: Vec<Subset>,
}

impl HorizontalProfile {
    /// The common cardinality of all layers.
    pub fn cardinality(&self) -> usize {
        self.layers[0].len()
    }
}

pub fn horizontal_profile(g: &BarrelGraph, mm: &Matching) -> Result<HorizontalProfile> {
    mm.validate(g)?;
    let layers = (0..g.k() + 2)
        .map(|j| Subset::from_members((0..g.m()).filter(|&l| mm.contains(g.horizontal_edge(j, l)))))
        .collect::<Vec<_>>();
    let p = layers[0].len();
    if layers.iter().any(|s| s.len() != p) {
        return Err(Error::InternalMismatch(format!(
            "horizontal profile cardinality not conserved: {layers:?}"
        )));
    }
    if p % 2 != g.m() % 2 {
        return Err(Error::InternalMismatch(format!("profile cardinality {p} has the wrong parity")));
    }
    Ok(HorizontalProfile { layers })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhombusKind {
    Horizontal,
    /// Big-cycle edge rising from left to right.
    UpDiagonal,
    /// Big-cycle edge falling from left to right.
    DownDiagonal,
    /// Cap-cycle edge: the rhombus sticks out of the cylinder through a pentagon.
    Boundary,
}

impl RhombusKind {
    pub fn of(kind: EdgeKind) -> RhombusKind {
        match kind {
            EdgeKind::Horizontal { .. } => RhombusKind::Horizontal,
            EdgeKind::BigCycleUp => RhombusKind::UpDiagonal,
            EdgeKind::BigCycleDown => RhombusKind::DownDiagonal,
            EdgeKind::MgonCycle => RhombusKind::Boundary,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Rhombus {
    pub edge: usize,
    pub kind: RhombusKind,
}

/// A rhombus tiling of the cylinder, one rhombus per matched edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tiling {
    pub rhombi: Vec<Rhombus>,
}

impl Tiling {
    pub fn count(&self, kind: RhombusKind) -> usize {
        self.rhombi.iter().filter(|r| r.kind == kind).count()
    }
}

pub fn matching_to_tiling(g: &BarrelGraph, mm: &Matching) -> Result<Tiling> {
    mm.validate(g)?;
    let rhombi = mm
        .edges()
        .iter()
        .map(|&e| Rhombus { edge: e, kind: RhombusKind::of(g.edge(e).kind) })
        .collect();
    Ok(Tiling { rhombi })
}

/// Inverse of [`matching_to_tiling`]; rejects tilings whose rhombus kinds do
/// not match the underlying edges or that do not tile the whole cylinder.
pub fn tiling_to_matching(g: &BarrelGraph, tiling: &Tiling) -> Result<Matching> {
    for r in &tiling.rhombi {
        if r.edge >= g.edge_count() || RhombusKind::of(g.edge(r.edge).kind) != r.kind {
            return Err(Error::NotPerfect(format!("rhombus {r:?} does not match its edge")));
        }
    }
    let mm = Matching::from_edges(tiling.rhombi.iter().map(|r| r.edge).collect());
    mm.validate(g)?;
    Ok(mm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, enumerate_matchings, BarrelParams};

    fn graph(m: usize, k: usize) -> BarrelGraph {
        build_graph(BarrelParams::new(m, k).unwrap()).unwrap()
    }

    fn all_horizontal(g: &BarrelGraph) -> Matching {
        Matching::from_edges(
            (0..g.k() + 2)
                .flat_map(|j| (0..g.m()).map(move |l| (j, l)))
                .map(|(j, l)| g.horizontal_edge(j, l))
                .collect(),
        )
    }

    #[test]
    fn profile_sizes_follow_parity() {
        for (m, k, allowed) in [(3, 1, vec![1, 3]), (4, 1, vec![0, 2, 4]), (4, 2, vec![0, 2, 4])] {
            let g = graph(m, k);
            for mm in enumerate_matchings(&g).unwrap() {
                let profile = horizontal_profile(&g, &mm).unwrap();
                assert!(allowed.contains(&profile.cardinality()));
            }
        }
    }

    #[test]
    fn conservation_exhaustive_small() {
        for m in 3..=6 {
            for k in 0..=2 {
                let g = graph(m, k);
                if g.vertex_count() > 72 {
                    continue;
                }
                for mm in enumerate_matchings(&g).unwrap() {
                    horizontal_profile(&g, &mm).unwrap();
                }
            }
        }
    }

    #[test]
    fn all_horizontal_matching() {
        let g = graph(3, 0);
        let mm = all_horizontal(&g);
        let profile = horizontal_profile(&g, &mm).unwrap();
        assert!(profile.layers.iter().all(|&s| s == Subset::full(3)));
        let tiling = matching_to_tiling(&g, &mm).unwrap();
        assert_eq!(tiling.rhombi.len(), 6);
        assert_eq!(tiling.count(RhombusKind::Horizontal), 6);
    }

    #[test]
    fn rhombus_count_is_half_the_vertices() {
        let g = graph(6, 5);
        let tiling = matching_to_tiling(&g, &all_horizontal(&g)).unwrap();
        assert_eq!(tiling.rhombi.len(), 42);
    }

    #[test]
    fn tiling_round_trip_on_f_4_1() {
        let g = graph(4, 1);
        let mut seen = 0;
        for mm in enumerate_matchings(&g).unwrap() {
            let tiling = matching_to_tiling(&g, &mm).unwrap();
            assert_eq!(tiling_to_matching(&g, &tiling).unwrap(), mm);
            seen += 1;
        }
        assert_eq!(seen, 41);
    }

    #[test]
    fn imperfect_matchings_are_rejected() {
        let g = graph(3, 0);
        let mut edges = all_horizontal(&g).edges().to_vec();
        edges.pop();
        let partial = Matching::from_edges(edges);
        assert!(matches!(horizontal_profile(&g, &partial), Err(Error::NotPerfect(_))));
        assert!(matches!(matching_to_tiling(&g, &partial), Err(Error::NotPerfect(_))));
    }
}
