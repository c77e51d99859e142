//! Plain-text graph formats.
//!
//! * `edges`: one line per edge, `u v kind`, e.g. `L:0 C:1:0 h:0:0`.
//! * `adj`: one line per vertex, `label: n1 n2 n3`.
//!
//! Vertex labels are `L:l`, `C:j:i` and `R:l`; lines come in canonical order.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use super::{canonical_labels, infer_edge_kind, label_index, BarrelGraph, BarrelParams, Edge, EdgeKind, VertexLabel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Edges,
    Adjacency,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(GraphFormat::Edges),
            "adj" => Ok(GraphFormat::Adjacency),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn export_graph(g: &BarrelGraph, format: GraphFormat) -> String {
    let mut out = String::new();
    match format {
        GraphFormat::Edges => {
            for e in g.edges() {
                let _ = writeln!(out, "{} {} {}", g.label(e.u), g.label(e.v), e.kind);
            }
        }
        GraphFormat::Adjacency => {
            for v in 0..g.vertex_count() {
                let _ = write!(out, "{}:", g.label(v));
                for &(w, _) in g.neighbours(v) {
                    let _ = write!(out, " {}", g.label(w));
                }
                out.push('\n');
            }
        }
    }
    out
}

fn parse_label(token: &str, line: usize) -> Result<VertexLabel> {
    token.parse().map_err(|msg| Error::Parse { line, msg })
}

/// Recovers `(m, k)` from the set of labels and checks that it is exactly the
/// canonical label set of `F(m,k)`.
fn infer_params(labels: &BTreeSet<VertexLabel>) -> Result<BarrelParams> {
    let mut m = 0;
    let mut k = 0;
    for label in labels {
        match *label {
            VertexLabel::LeftCap(l) | VertexLabel::RightCap(l) => m = m.max(l + 1),
            VertexLabel::Cycle { layer, pos } => {
                m = m.max(pos / 2 + 1);
                k = k.max(layer.saturating_sub(1));
            }
        }
    }
    let params = BarrelParams::new(m, k).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    let expected: BTreeSet<VertexLabel> = canonical_labels(params).into_iter().collect();
    if &expected != labels {
        return Err(Error::Parse {
            line: 0,
            msg: format!("vertex labels do not form F({m},{k})"),
        });
    }
    Ok(params)
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<BarrelGraph> {
    let mut pairs: Vec<(VertexLabel, VertexLabel, Option<EdgeKind>, usize)> = Vec::new();
    let mut labels = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        match format {
            GraphFormat::Edges => {
                let tokens: Vec<&str> = raw.split_whitespace().collect();
                let [u, v, kind] = tokens.as_slice() else {
                    return Err(Error::Parse { line, msg: "expected `u v kind`".into() });
                };
                let (u, v) = (parse_label(u, line)?, parse_label(v, line)?);
                let kind = kind.parse::<EdgeKind>().map_err(|msg| Error::Parse { line, msg })?;
                labels.insert(u);
                labels.insert(v);
                pairs.push((u, v, Some(kind), line));
            }
            GraphFormat::Adjacency => {
                let (head, rest) = match raw.split_once(": ") {
                    Some(pair) => pair,
                    None => match raw.strip_suffix(':') {
                        Some(head) => (head, ""),
                        None => {
                            return Err(Error::Parse { line, msg: "expected `label: neighbours`".into() })
                        }
                    },
                };
                let u = parse_label(head, line)?;
                labels.insert(u);
                for tok in rest.split_whitespace() {
                    let v = parse_label(tok, line)?;
                    labels.insert(v);
                    pairs.push((u, v, None, line));
                }
            }
        }
    }
    let params = infer_params(&labels)?;
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut directed = BTreeSet::new();
    for (u, v, kind, line) in pairs {
        let inferred = infer_edge_kind(params, u, v).ok_or_else(|| Error::Parse {
            line,
            msg: format!("{u} and {v} are not adjacent in F({},{})", params.m, params.k),
        })?;
        if let Some(kind) = kind {
            if kind != inferred {
                return Err(Error::Parse { line, msg: format!("edge kind {kind} should be {inferred}") });
            }
        }
        let (a, b) = (label_index(params, u), label_index(params, v));
        directed.insert((a, b));
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            edges.push(Edge { u: key.0, v: key.1, kind: inferred });
        } else if format == GraphFormat::Edges {
            return Err(Error::Parse { line, msg: format!("duplicate edge {u} {v}") });
        }
    }
    if format == GraphFormat::Adjacency && directed.iter().any(|&(a, b)| !directed.contains(&(b, a))) {
        return Err(Error::Parse { line: 0, msg: "adjacency rows are not symmetric".into() });
    }
    BarrelGraph::from_parts(params, canonical_labels(params), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn graph(m: usize, k: usize) -> BarrelGraph {
        build_graph(BarrelParams::new(m, k).unwrap()).unwrap()
    }

    #[test]
    fn edge_list_has_one_line_per_edge() {
        let text = export_graph(&graph(3, 0), GraphFormat::Edges);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 18);
        assert!(lines.iter().all(|l| l.split_whitespace().count() == 3));
        assert_eq!(lines[0], "L:0 L:1 mgon");
    }

    #[test]
    fn adjacency_rows_have_three_entries() {
        let text = export_graph(&graph(8, 2), GraphFormat::Adjacency);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 64);
        for row in rows {
            let (_, rest) = row.split_once(": ").unwrap();
            assert_eq!(rest.split_whitespace().count(), 3);
        }
    }

    #[test]
    fn round_trips() {
        for (m, k) in [(3, 0), (4, 1), (7, 3)] {
            let g = graph(m, k);
            for format in [GraphFormat::Edges, GraphFormat::Adjacency] {
                assert_eq!(parse_graph(&export_graph(&g, format), format).unwrap(), g);
            }
        }
    }

    #[test]
    fn unknown_format_and_bad_input() {
        assert!(matches!("dot".parse::<GraphFormat>(), Err(Error::UnknownFormat(_))));
        let mut text = export_graph(&graph(3, 0), GraphFormat::Edges);
        text = text.replacen("mgon", "up", 1);
        assert!(matches!(parse_graph(&text, GraphFormat::Edges), Err(Error::Parse { .. })));
    }
}
