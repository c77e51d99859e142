//! Matchings as families of non-intersecting paths on a circle of `2m` sites.
//!
//! At time `t` (horizontal layer `E_t`) the particles sit on the unmatched
//! horizontal edges, at sites `2l + t (mod 2m)`. Cycle `t` moves each particle
//! one site up or down.

mod dp;
mod krattenthaler;
mod sites;

pub use dp::{admissible_boundaries, path_dp_count, total_via_paths, Boundary, PathDp, PATH_CAP};
pub use krattenthaler::{
    eigenterm, krattenthaler_aggregate, krattenthaler_estimate, krattenthaler_ratio, leading_n_consistency,
    shift_summed_estimate, AggregateEstimate, AggregateTerm, AsymptoticEstimate, LeadingReport, LeadingRow,
    ThetaCoordinates,
};
pub use sites::SiteSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{horizontal_profile, BarrelGraph, Matching, VertexLabel};

/// `n` trajectories over times `0 ..= k+1`, sorted by starting site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathFamily {
    pub m: usize,
    pub k: usize,
    pub paths: Vec<Vec<usize>>,
}

impl PathFamily {
    pub fn n(&self) -> usize {
        self.paths.len()
    }

    /// Occupied sites at time `t`.
    pub fn sites_at(&self, t: usize) -> SiteSet {
        SiteSet::from_sites(self.m, self.paths.iter().map(|p| p[t]))
    }

    pub fn validate(&self) -> Result<()> {
        let n2 = 2 * self.m;
        for path in &self.paths {
            if path.len() != self.k + 2 {
                return Err(Error::InvalidParams(format!("path of length {} for k={}", path.len(), self.k)));
            }
            for w in path.windows(2) {
                if (w[1] + n2 - w[0]) % n2 != 1 && (w[0] + n2 - w[1]) % n2 != 1 {
                    return Err(Error::InvalidParams(format!("step {} -> {} is not a unit step", w[0], w[1])));
                }
            }
        }
        for t in 0..self.k + 2 {
            if self.sites_at(t).len() != self.n() {
                return Err(Error::InvalidParams(format!("two particles share a site at time {t}")));
            }
        }
        Ok(())
    }
}

/// Traces the particles of a perfect matching through the cycles.
pub fn matching_to_paths(g: &BarrelGraph, mm: &Matching) -> Result<PathFamily> {
    let profile = horizontal_profile(g, mm)?;
    let (m, k) = (g.m(), g.k());
    let partner = mm.partners(g);
    let mut paths: Vec<Vec<usize>> = profile.layers[0]
        .complement(m)
        .members()
        .map(|l| vec![2 * l])
        .collect();
    for path in &mut paths {
        let mut slot = path[0] / 2;
        for j in 1..=k + 1 {
            let v = g.index_of(VertexLabel::Cycle { layer: j, pos: 2 * slot });
            let pos = match g.label(partner[v]) {
                VertexLabel::Cycle { layer, pos } if layer == j && pos % 2 == 1 => pos,
                other => {
                    return Err(Error::InternalMismatch(format!(
                        "particle at {} matched to {other}",
                        g.label(v)
                    )))
                }
            };
            slot = (pos - 1) / 2;
            path.push((pos + j - 1) % (2 * m));
        }
    }
    paths.sort();
    Ok(PathFamily { m, k, paths })
}

/// A matching split into its two cap configurations and its path family.
/// Cap configurations list the slots `l` whose m-gon edge `(l, l+1)` is matched.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathEncoding {
    pub left_cap: Vec<usize>,
    pub right_cap: Vec<usize>,
    pub family: PathFamily,
}

fn cap_edges(g: &BarrelGraph, mm: &Matching, cap: fn(usize) -> VertexLabel) -> Vec<usize> {
    let m = g.m();
    (0..m)
        .filter(|&l| {
            let e = g.edge_between(g.index_of(cap(l)), g.index_of(cap((l + 1) % m)));
            e.is_some_and(|e| mm.contains(e))
        })
        .collect()
}

pub fn encode_matching(g: &BarrelGraph, mm: &Matching) -> Result<PathEncoding> {
    let family = matching_to_paths(g, mm)?;
    Ok(PathEncoding {
        left_cap: cap_edges(g, mm, VertexLabel::LeftCap),
        right_cap: cap_edges(g, mm, VertexLabel::RightCap),
        family,
    })
}

pub fn decode_paths(g: &BarrelGraph, enc: &PathEncoding) -> Result<Matching> {
    let (m, k) = (g.m(), g.k());
    let family = &enc.family;
    if family.m != m || family.k != k {
        return Err(Error::InvalidParams(format!(
            "family for F({},{}) decoded on F({m},{k})",
            family.m, family.k
        )));
    }
    family.validate()?;
    let edge = |a: VertexLabel, b: VertexLabel| {
        g.edge_between(g.index_of(a), g.index_of(b))
            .ok_or_else(|| Error::InvalidParams(format!("no edge {a} {b}")))
    };
    let mut edges = Vec::with_capacity(m * (k + 2));
    for &l in &enc.left_cap {
        edges.push(edge(VertexLabel::LeftCap(l), VertexLabel::LeftCap((l + 1) % m))?);
    }
    for &l in &enc.right_cap {
        edges.push(edge(VertexLabel::RightCap(l), VertexLabel::RightCap((l + 1) % m))?);
    }
    for t in 0..k + 2 {
        let occupied = family.sites_at(t).slots(t);
        edges.extend(occupied.complement(m).members().map(|l| g.horizontal_edge(t, l)));
    }
    let n2 = 2 * m;
    for path in &family.paths {
        for j in 1..=k + 1 {
            let a = (path[j - 1] + n2 - (j - 1) % n2) % n2;
            let b = (path[j] + n2 - (j - 1) % n2) % n2;
            edges.push(edge(VertexLabel::Cycle { layer: j, pos: a }, VertexLabel::Cycle { layer: j, pos: b })?);
        }
    }
    let mm = Matching::from_edges(edges);
    mm.validate(g)?;
    Ok(mm)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::graph::{build_graph, enumerate_matchings, BarrelParams, EdgeKind};

    fn graph(m: usize, k: usize) -> BarrelGraph {
        build_graph(BarrelParams::new(m, k).unwrap()).unwrap()
    }

    #[test]
    fn all_horizontal_matching_has_no_paths() {
        let g = graph(5, 2);
        let edges: Vec<usize> = (0..g.edge_count())
            .filter(|&e| matches!(g.edge(e).kind, EdgeKind::Horizontal { .. }))
            .collect();
        let mm = Matching::from_edges(edges);
        let fam = matching_to_paths(&g, &mm).unwrap();
        assert_eq!(fam.n(), 0);
        let enc = encode_matching(&g, &mm).unwrap();
        assert_eq!(decode_paths(&g, &enc).unwrap(), mm);
    }

    #[test]
    fn encoding_is_a_bijection() {
        for (m, k, total) in [(3, 1, 28), (4, 1, 41), (3, 0, 10), (5, 0, 36)] {
            let g = graph(m, k);
            let mut seen = BTreeSet::new();
            for mm in enumerate_matchings(&g).unwrap() {
                let p = horizontal_profile(&g, &mm).unwrap().cardinality();
                let enc = encode_matching(&g, &mm).unwrap();
                enc.family.validate().unwrap();
                assert_eq!(enc.family.n(), m - p);
                assert_eq!(decode_paths(&g, &enc).unwrap(), mm);
                assert!(seen.insert(enc));
            }
            assert_eq!(seen.len(), total);
        }
    }

    #[test]
    fn f4_paths_with_two_horizontals_per_layer() {
        let g = graph(4, 2);
        for mm in enumerate_matchings(&g).unwrap() {
            if horizontal_profile(&g, &mm).unwrap().cardinality() == 2 {
                assert_eq!(matching_to_paths(&g, &mm).unwrap().n(), 2);
            }
        }
    }

    #[test]
    fn cap_multiplicities_match_enumeration() {
        for (m, k) in [(3, 1), (4, 1), (5, 0), (6, 0)] {
            let g = graph(m, k);
            let mut caps: BTreeMap<SiteSet, BTreeSet<Vec<usize>>> = BTreeMap::new();
            let mut right: BTreeMap<SiteSet, BTreeSet<Vec<usize>>> = BTreeMap::new();
            for mm in enumerate_matchings(&g).unwrap() {
                let enc = encode_matching(&g, &mm).unwrap();
                caps.entry(enc.family.sites_at(0)).or_default().insert(enc.left_cap);
                right.entry(enc.family.sites_at(k + 1)).or_default().insert(enc.right_cap);
            }
            let bounds = admissible_boundaries(m);
            assert_eq!(caps.len(), bounds.len());
            for b in &bounds {
                assert_eq!(caps[&b.sites].len() as u64, b.multiplicity, "m={m} {:?}", b.sites);
                assert_eq!(right[&b.sites.shifted(k + 1)].len() as u64, b.multiplicity);
            }
        }
    }

    #[test]
    fn invalid_family_rejected() {
        let fam = PathFamily { m: 3, k: 0, paths: vec![vec![0, 3]] };
        assert!(fam.validate().is_err());
        let fam = PathFamily { m: 3, k: 0, paths: vec![vec![0, 1], vec![2, 1]] };
        assert!(fam.validate().is_err());
        let fam = PathFamily { m: 3, k: 0, paths: vec![vec![0, 5], vec![2, 1]] };
        fam.validate().unwrap();
    }
}
