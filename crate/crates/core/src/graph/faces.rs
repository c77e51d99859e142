use serde::Serialize;

use super::{BarrelGraph, VertexLabel};
use crate::error::{Error, Result};

/// Outcome of a structural check of `F(m,k)`: regularity and the face census
/// obtained by walking the faces of the cylinder embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceCensusReport {
    pub m: usize,
    pub k: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub cubic: bool,
    /// Faces made only of cap vertices (the two m-gons).
    pub cap_faces: usize,
    pub pentagons: usize,
    pub hexagons: usize,
    pub other_faces: usize,
    pub euler_characteristic: i64,
}

/// Traces every face of the cylinder embedding. Each face is returned as its
/// cyclic vertex sequence.
pub(crate) fn trace_faces(g: &BarrelGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let half = g.m() as f64;
    let circumference = 2.0 * half;
    // Neighbours of each vertex in counter-clockwise order.
    let rotation: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let (xv, yv) = g.position(v);
            let mut nbrs: Vec<(f64, usize)> = g
                .neighbours(v)
                .iter()
                .map(|&(w, _)| {
                    let (xw, yw) = g.position(w);
                    let mut dy = yw - yv;
                    if dy > half {
                        dy -= circumference;
                    } else if dy <= -half {
                        dy += circumference;
                    }
                    ((dy * 3f64.sqrt() / 2.0).atan2(xw - xv), w)
                })
                .collect();
            nbrs.sort_by(|a, b| a.0.total_cmp(&b.0));
            nbrs.into_iter().map(|(_, w)| w).collect()
        })
        .collect();

    let dart = |u: usize, v: usize| -> usize {
        let e = g.edge_between(u, v).expect("dart along an edge");
        2 * e + usize::from(g.edge(e).u != u)
    };
    let mut seen = vec![false; 2 * g.edge_count()];
    let mut faces = Vec::new();
    for e in 0..g.edge_count() {
        for dir in 0..2 {
            if seen[2 * e + dir] {
                continue;
            }
            let edge = g.edge(e);
            let (mut u, mut v) = if dir == 0 { (edge.u, edge.v) } else { (edge.v, edge.u) };
            let mut face = Vec::new();
            while !seen[dart(u, v)] {
                seen[dart(u, v)] = true;
                face.push(u);
                let rot = &rotation[v];
                let at = rot.iter().position(|&w| w == u).expect("rotation contains u");
                let w = rot[(at + 1) % rot.len()];
                u = v;
                v = w;
            }
            faces.push(face);
        }
    }
    faces
}

fn is_cap(label: VertexLabel) -> bool {
    matches!(label, VertexLabel::LeftCap(_) | VertexLabel::RightCap(_))
}

/// Checks regularity, vertex/edge counts, the face census (2 caps, `2m`
/// pentagons, `mk` hexagons), Euler's formula and the horizontal layer
/// partition. The first violated invariant is returned as an error.
pub fn validate_structure(g: &BarrelGraph) -> Result<FaceCensusReport> {
    let (m, k) = (g.m(), g.k());
    let fail = |what: String| Err(Error::StructuralViolation(what));
    let cubic = (0..g.vertex_count()).all(|v| g.degree(v) == 3);
    if !cubic {
        return fail("graph is not 3-regular".into());
    }
    if g.vertex_count() != 2 * m * (k + 2) {
        return fail(format!("vertex count {} != 2m(k+2)", g.vertex_count()));
    }
    if g.edge_count() != 3 * m * (k + 2) {
        return fail(format!("edge count {} != 3m(k+2)", g.edge_count()));
    }
    let faces = trace_faces(g);
    let mut report = FaceCensusReport {
        m,
        k,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        faces: faces.len(),
        cubic,
        cap_faces: 0,
        pentagons: 0,
        hexagons: 0,
        other_faces: 0,
        euler_characteristic: g.vertex_count() as i64 - g.edge_count() as i64 + faces.len() as i64,
    };
    for face in &faces {
        if face.iter().all(|&v| is_cap(g.label(v))) {
            if face.len() != m {
                return fail(format!("cap face of length {} (expected {m})", face.len()));
            }
            report.cap_faces += 1;
        } else {
            match face.len() {
                5 => report.pentagons += 1,
                6 => report.hexagons += 1,
                _ => report.other_faces += 1,
            }
        }
    }
    if report.cap_faces != 2 {
        return fail(format!("{} cap faces (expected 2)", report.cap_faces));
    }
    if report.pentagons != 2 * m {
        return fail(format!("{} pentagons (expected {})", report.pentagons, 2 * m));
    }
    if report.hexagons != m * k {
        return fail(format!("{} hexagons (expected {})", report.hexagons, m * k));
    }
    if report.other_faces != 0 {
        return fail(format!("{} faces that are neither caps, pentagons nor hexagons", report.other_faces));
    }
    if report.euler_characteristic != 2 {
        return fail(format!("V - E + F = {} (expected 2)", report.euler_characteristic));
    }
    for layer in 0..k + 2 {
        for pos in 0..m {
            if g.horizontal_edge(layer, pos) == usize::MAX {
                return fail(format!("horizontal edge e_{{{layer},{pos}}} missing"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, BarrelParams};

    fn census(m: usize, k: usize) -> FaceCensusReport {
        validate_structure(&build_graph(BarrelParams::new(m, k).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn triangle_barrel_has_no_hexagons() {
        let r = census(3, 0);
        assert_eq!((r.cap_faces, r.pentagons, r.hexagons), (2, 6, 0));
    }

    #[test]
    fn f_6_5_face_census() {
        let r = census(6, 5);
        assert_eq!((r.cap_faces, r.pentagons, r.hexagons), (2, 12, 30));
    }

    #[test]
    fn f_4_1_euler() {
        let r = census(4, 1);
        assert_eq!((r.vertices, r.edges, r.faces), (24, 36, 14));
        assert_eq!(r.euler_characteristic, 2);
    }

    #[test]
    fn dodecahedron_and_f_8_2() {
        let r = census(5, 0);
        // Both caps are pentagons as well: 12 pentagonal faces in total.
        assert_eq!((r.cap_faces, r.pentagons, r.hexagons), (2, 10, 0));
        let r = census(8, 2);
        assert_eq!((r.vertices, r.cap_faces, r.pentagons, r.hexagons), (64, 2, 16, 16));
    }

    #[test]
    fn census_holds_on_a_grid() {
        for m in 3..=9 {
            for k in 0..=4 {
                let r = census(m, k);
                assert_eq!(r.faces, m * k + 2 * m + 2);
            }
        }
    }
}
