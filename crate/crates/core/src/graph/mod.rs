//! The m-barrel fullerene `F(m,k)` drawn on a cylinder.
//!
//! Vertices are laid out in layers: the left cap cycle `u_0 .. u_{m-1}`, the
//! big cycles `w_{j,0} .. w_{j,2m-1}` for `j = 1 ..= k+1`, and the right cap
//! cycle `u'_0 .. u'_{m-1}`. Horizontal edges come in `k+2` layers of `m`:
//!
//! * `e_{0,l}` joins `u_l` to `w_{1,2l}`,
//! * `e_{j,l}` joins `w_{j,2l+1}` to `w_{j+1,2l}` for `1 <= j <= k`,
//! * `e_{k+1,l}` joins `w_{k+1,2l+1}` to `u'_l`.
//!
//! Big-cycle edge `(w_{j,2s}, w_{j,2s+1})` is "up", `(w_{j,2s+1}, w_{j,2s+2})` is "down".
//! Vertex `w_{j,i}` sits at height `i + j - 1` (mod `2m`) on the cylinder, which
//! makes every horizontal edge level.

mod brute;
mod faces;
mod io;
mod tiling;

pub use brute::{
    count_matchings_brute, count_matchings_brute_with_cap, enumerate_matchings,
    enumerate_matchings_with_cap, MatchingIter, DEFAULT_ENUMERATION_CAP, DEFAULT_VERTEX_CAP,
};
pub use faces::{validate_structure, FaceCensusReport};
pub use io::{export_graph, parse_graph, GraphFormat};
pub use tiling::{
    horizontal_profile, matching_to_tiling, tiling_to_matching, HorizontalProfile, Matching,
    Rhombus, RhombusKind, Tiling,
};

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BarrelParams {
    pub m: usize,
    pub k: usize,
}

impl BarrelParams {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParams(format!("m must be at least 3, got {m}")));
        }
        Ok(BarrelParams { m, k })
    }

    /// Accepts signed input (as parsed from the command line) and rejects negatives.
    pub fn from_signed(m: i64, k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::InvalidParams(format!("k must be non-negative, got {k}")));
        }
        if m < 3 {
            return Err(Error::InvalidParams(format!("m must be at least 3, got {m}")));
        }
        BarrelParams::new(m as usize, k as usize)
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.m * (self.k + 2)
    }

    pub fn edge_count(&self) -> usize {
        3 * self.m * (self.k + 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    LeftCap(usize),
    /// `w_{layer,pos}` with `layer` in `1 ..= k+1` and `pos` in `0 .. 2m`.
    Cycle { layer: usize, pos: usize },
    RightCap(usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexLabel::LeftCap(l) => write!(f, "L:{l}"),
            VertexLabel::Cycle { layer, pos } => write!(f, "C:{layer}:{pos}"),
            VertexLabel::RightCap(l) => write!(f, "R:{l}"),
        }
    }
}

impl std::str::FromStr for VertexLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| format!("bad index in label `{s}`"));
        match parts.as_slice() {
            ["L", l] => Ok(VertexLabel::LeftCap(num(l)?)),
            ["R", l] => Ok(VertexLabel::RightCap(num(l)?)),
            ["C", j, i] => Ok(VertexLabel::Cycle { layer: num(j)?, pos: num(i)? }),
            _ => Err(format!("malformed vertex label `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    MgonCycle,
    BigCycleUp,
    BigCycleDown,
    Horizontal { layer: usize, pos: usize },
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EdgeKind::MgonCycle => f.write_str("mgon"),
            EdgeKind::BigCycleUp => f.write_str("up"),
            EdgeKind::BigCycleDown => f.write_str("down"),
            EdgeKind::Horizontal { layer, pos } => write!(f, "h:{layer}:{pos}"),
        }
    }
}

impl std::str::FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mgon" => Ok(EdgeKind::MgonCycle),
            "up" => Ok(EdgeKind::BigCycleUp),
            "down" => Ok(EdgeKind::BigCycleDown),
            _ => {
                let parts: Vec<&str> = s.split(':').collect();
                match parts.as_slice() {
                    ["h", j, l] => {
                        let layer = j.parse().map_err(|_| format!("bad edge kind `{s}`"))?;
                        let pos = l.parse().map_err(|_| format!("bad edge kind `{s}`"))?;
                        Ok(EdgeKind::Horizontal { layer, pos })
                    }
                    _ => Err(format!("unknown edge kind `{s}`")),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrelGraph {
    params: BarrelParams,
    labels: Vec<VertexLabel>,
    edges: Vec<Edge>,
    /// `(neighbour, edge id)` pairs per vertex, sorted by neighbour.
    adjacency: Vec<Vec<(usize, usize)>>,
    /// `horizontal[j][l]` is the edge id of `e_{j,l}`.
    horizontal: Vec<Vec<usize>>,
}

/// Builds `F(m,k)` with the canonical labeling described in the module docs.
pub fn build_graph(params: BarrelParams) -> Result<BarrelGraph> {
    let BarrelParams { m, k } = BarrelParams::new(params.m, params.k)?;
    let labels = canonical_labels(params);
    let index = |label: VertexLabel| label_index(params, label);
    let mut pairs = Vec::with_capacity(params.edge_count());
    for l in 0..m {
        pairs.push((VertexLabel::LeftCap(l), VertexLabel::LeftCap((l + 1) % m)));
        pairs.push((VertexLabel::LeftCap(l), VertexLabel::Cycle { layer: 1, pos: 2 * l }));
        pairs.push((VertexLabel::RightCap(l), VertexLabel::RightCap((l + 1) % m)));
        pairs.push((
            VertexLabel::Cycle { layer: k + 1, pos: 2 * l + 1 },
            VertexLabel::RightCap(l),
        ));
    }
    for j in 1..=k + 1 {
        for i in 0..2 * m {
            pairs.push((
                VertexLabel::Cycle { layer: j, pos: i },
                VertexLabel::Cycle { layer: j, pos: (i + 1) % (2 * m) },
            ));
        }
        if j <= k {
            for l in 0..m {
                pairs.push((
                    VertexLabel::Cycle { layer: j, pos: 2 * l + 1 },
                    VertexLabel::Cycle { layer: j + 1, pos: 2 * l },
                ));
            }
        }
    }
    let mut edges = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let kind = infer_edge_kind(params, a, b).ok_or_else(|| {
            Error::StructuralViolation(format!("no edge kind for {a} -- {b}"))
        })?;
        edges.push(Edge { u: index(a), v: index(b), kind });
    }
    BarrelGraph::from_parts(params, labels, edges)
}

fn canonical_labels(params: BarrelParams) -> Vec<VertexLabel> {
    let BarrelParams { m, k } = params;
    let mut labels = Vec::with_capacity(params.vertex_count());
    labels.extend((0..m).map(VertexLabel::LeftCap));
    for j in 1..=k + 1 {
        labels.extend((0..2 * m).map(|i| VertexLabel::Cycle { layer: j, pos: i }));
    }
    labels.extend((0..m).map(VertexLabel::RightCap));
    labels
}

fn label_index(params: BarrelParams, label: VertexLabel) -> usize {
    let BarrelParams { m, k } = params;
    match label {
        VertexLabel::LeftCap(l) => l,
        VertexLabel::Cycle { layer, pos } => m + (layer - 1) * 2 * m + pos,
        VertexLabel::RightCap(l) => m + (k + 1) * 2 * m + l,
    }
}

/// The kind of the edge joining two labelled vertices, or `None` if they are not adjacent.
pub fn infer_edge_kind(params: BarrelParams, a: VertexLabel, b: VertexLabel) -> Option<EdgeKind> {
    use VertexLabel::*;
    let BarrelParams { m, k } = params;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match (a, b) {
        (LeftCap(x), LeftCap(y)) | (RightCap(x), RightCap(y)) => {
            ((x + 1) % m == y || (y + 1) % m == x).then_some(EdgeKind::MgonCycle)
        }
        (LeftCap(l), Cycle { layer: 1, pos }) => {
            (pos == 2 * l).then_some(EdgeKind::Horizontal { layer: 0, pos: l })
        }
        (Cycle { layer, pos }, RightCap(l)) => (layer == k + 1 && pos == 2 * l + 1)
            .then_some(EdgeKind::Horizontal { layer: k + 1, pos: l }),
        (Cycle { layer: j1, pos: p1 }, Cycle { layer: j2, pos: p2 }) => {
            let n = 2 * m;
            if j1 == j2 {
                let low = if (p1 + 1) % n == p2 {
                    p1
                } else if (p2 + 1) % n == p1 {
                    p2
                } else {
                    return None;
                };
                Some(if low % 2 == 0 { EdgeKind::BigCycleUp } else { EdgeKind::BigCycleDown })
            } else if j2 == j1 + 1 && p1 % 2 == 1 && p2 == p1 - 1 {
                Some(EdgeKind::Horizontal { layer: j1, pos: p2 / 2 })
            } else {
                None
            }
        }
        _ => None,
    }
}

impl BarrelGraph {
    /// Assembles a graph from labelled parts. Edges are put in canonical
    /// order (by sorted endpoint pair), so any edge listing of the same graph
    /// yields an identical value.
    pub(crate) fn from_parts(
        params: BarrelParams,
        labels: Vec<VertexLabel>,
        mut edges: Vec<Edge>,
    ) -> Result<BarrelGraph> {
        for e in edges.iter_mut() {
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        let mut adjacency = vec![Vec::with_capacity(3); labels.len()];
        let mut horizontal = vec![vec![usize::MAX; params.m]; params.k + 2];
        for (id, e) in edges.iter().enumerate() {
            if e.u >= labels.len() || e.v >= labels.len() {
                return Err(Error::StructuralViolation(format!("edge {id} has an out-of-range endpoint")));
            }
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
            if let EdgeKind::Horizontal { layer, pos } = e.kind {
                if layer > params.k + 1 || pos >= params.m || horizontal[layer][pos] != usize::MAX {
                    return Err(Error::StructuralViolation(format!(
                        "horizontal edge h:{layer}:{pos} out of range or duplicated"
                    )));
                }
                horizontal[layer][pos] = id;
            }
        }
        for row in adjacency.iter_mut() {
            row.sort_unstable();
        }
        Ok(BarrelGraph { params, labels, edges, adjacency, horizontal })
    }

    pub fn params(&self) -> BarrelParams {
        self.params
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: VertexLabel) -> usize {
        label_index(self.params, label)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edge id of `e_{layer,pos}`.
    pub fn horizontal_edge(&self, layer: usize, pos: usize) -> usize {
        self.horizontal[layer][pos]
    }

    /// Edge id joining `a` and `b`, if adjacent.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// Height on the cylinder, in units where adjacent big-cycle vertices differ by 1.
    /// Values live in `[0, 2m)`.
    pub fn height(&self, v: usize) -> usize {
        let n = 2 * self.params.m;
        match self.labels[v] {
            VertexLabel::LeftCap(l) => 2 * l,
            VertexLabel::Cycle { layer, pos } => (pos + layer - 1) % n,
            VertexLabel::RightCap(l) => (2 * l + self.params.k + 1) % n,
        }
    }

    /// Position of a vertex on the unrolled cylinder: `x` along the axis and
    /// `y` as the height from [`BarrelGraph::height`] (not yet scaled).
    /// Big cycles are zigzags so that hexagons come out regular once `y` is
    /// multiplied by `sqrt(3)/2`.
    pub fn position(&self, v: usize) -> (f64, f64) {
        let y = self.height(v) as f64;
        let x = match self.labels[v] {
            VertexLabel::LeftCap(_) => -1.25,
            VertexLabel::Cycle { layer, pos } => {
                let centre = 1.5 * (layer as f64 - 1.0);
                if pos % 2 == 0 {
                    centre - 0.25
                } else {
                    centre + 0.25
                }
            }
            VertexLabel::RightCap(_) => 1.5 * self.params.k as f64 + 1.25,
        };
        (x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph_sizes() {
        let g = build_graph(BarrelParams::new(3, 0).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 18);
        let g = build_graph(BarrelParams::new(8, 2).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 64);
        assert!((0..64).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn rejects_small_m_and_negative_k() {
        assert!(matches!(BarrelParams::new(2, 0), Err(Error::InvalidParams(_))));
        assert!(matches!(BarrelParams::from_signed(4, -1), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn horizontal_edges_are_level() {
        let g = build_graph(BarrelParams::new(5, 3).unwrap()).unwrap();
        for e in g.edges() {
            if let EdgeKind::Horizontal { .. } = e.kind {
                assert_eq!(g.height(e.u), g.height(e.v));
            }
        }
    }

    #[test]
    fn labels_round_trip_through_text() {
        for label in [
            VertexLabel::LeftCap(2),
            VertexLabel::Cycle { layer: 3, pos: 7 },
            VertexLabel::RightCap(0),
        ] {
            assert_eq!(label.to_string().parse::<VertexLabel>().unwrap(), label);
        }
        let kind = EdgeKind::Horizontal { layer: 2, pos: 1 };
        assert_eq!(kind.to_string().parse::<EdgeKind>().unwrap(), kind);
    }
}
