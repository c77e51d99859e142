//! SVG drawings of the unrolled cylinder.

use std::fmt::Write;

use barrel_core::graph::{matching_to_tiling, BarrelGraph, EdgeKind, Matching, RhombusKind};
use barrel_core::paths::matching_to_paths;
use barrel_core::Result;

use crate::What;

const SCALE: f64 = 24.0;
const MARGIN: f64 = 1.5;
const ROW: f64 = 0.866_025_403_784_438_6;

struct Canvas {
    m: usize,
    x0: f64,
    body: String,
}

impl Canvas {
    fn px(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.x0 + MARGIN) * SCALE, (y * ROW + MARGIN) * SCALE)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.px(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `v` moved by a full turn so that it sits next to `u`.
    fn unwrap(&self, u: (f64, f64), v: (f64, f64)) -> (f64, f64) {
        let turn = 2.0 * self.m as f64;
        let dy = v.1 - u.1;
        if dy > self.m as f64 {
            (v.0, v.1 - turn)
        } else if dy < -(self.m as f64) {
            (v.0, v.1 + turn)
        } else {
            v
        }
    }
}

fn edge_class(kind: EdgeKind) -> &'static str {
    match kind {
        EdgeKind::MgonCycle => "mgon",
        EdgeKind::BigCycleUp => "up",
        EdgeKind::BigCycleDown => "down",
        EdgeKind::Horizontal { .. } => "horizontal",
    }
}

fn rhombus_fill(kind: RhombusKind) -> &'static str {
    match kind {
        RhombusKind::Horizontal => "#e8b04a",
        RhombusKind::UpDiagonal => "#4a90d9",
        RhombusKind::DownDiagonal => "#7cc47c",
        RhombusKind::Boundary => "#c05050",
    }
}

/// The rhombus made of the two triangles whose centres are `u` and `v`, in
/// scaled coordinates (height multiplied by `sqrt(3)/2`).
fn rhombus(u: (f64, f64), v: (f64, f64)) -> [(f64, f64); 4] {
    let (ux, uy) = (u.0, u.1 * ROW);
    let (vx, vy) = (v.0, v.1 * ROW);
    let (mx, my) = ((ux + vx) / 2.0, (uy + vy) / 2.0);
    let len = ((vx - ux).powi(2) + (vy - uy).powi(2)).sqrt();
    let (nx, ny) = (-(vy - uy) / len, (vx - ux) / len);
    let apothem = ROW * len;
    let back = |x: f64, y: f64| (x, y / ROW);
    [
        back(mx + nx * apothem, my + ny * apothem),
        back(mx + 3.0 * (ux - mx), my + 3.0 * (uy - my)),
        back(mx - nx * apothem, my - ny * apothem),
        back(mx + 3.0 * (vx - mx), my + 3.0 * (vy - my)),
    ]
}

pub fn svg(g: &BarrelGraph, what: What, matching: Option<&Matching>) -> Result<String> {
    let (m, k) = (g.m(), g.k());
    let x0 = -1.25;
    let x1 = 1.5 * k as f64 + 1.25;
    let width = (x1 - x0 + 2.0 * MARGIN) * SCALE;
    let height = (2.0 * m as f64 * ROW + 2.0 * MARGIN) * SCALE;
    let mut c = Canvas { m, x0, body: String::new() };
    let title = match what {
        What::Graph => "graph",
        What::Tiling => "tiling",
        What::Paths => "paths",
    };

    match (what, matching) {
        (What::Graph, _) | (_, None) => {
            let _ = writeln!(c.body, "<g class=\"edges\" stroke=\"#333\" stroke-width=\"1.5\">");
            for e in g.edges() {
                let (pu, pv) = (g.position(e.u), g.position(e.v));
                let mut segments = vec![(pu, c.unwrap(pu, pv))];
                if segments[0].1 != pv {
                    segments.push((c.unwrap(pv, pu), pv));
                }
                for (a, b) in segments {
                    let ((ax, ay), (bx, by)) = (c.px(a), c.px(b));
                    let _ = writeln!(
                        c.body,
                        "<line class=\"{}\" x1=\"{ax:.3}\" y1=\"{ay:.3}\" x2=\"{bx:.3}\" y2=\"{by:.3}\"/>",
                        edge_class(e.kind)
                    );
                }
            }
            let _ = writeln!(c.body, "</g>\n<g class=\"vertices\" fill=\"#111\">");
            for v in 0..g.vertex_count() {
                let (x, y) = c.px(g.position(v));
                let _ = writeln!(c.body, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\"><title>{}</title></circle>", g.label(v));
            }
            let _ = writeln!(c.body, "</g>");
        }
        (_, Some(mm)) => {
            let tiling = matching_to_tiling(g, mm)?;
            let opacity = if what == What::Paths { 0.35 } else { 1.0 };
            let _ = writeln!(
                c.body,
                "<g class=\"rhombi\" stroke=\"#222\" stroke-width=\"1\" fill-opacity=\"{opacity}\">"
            );
            for r in &tiling.rhombi {
                let e = g.edge(r.edge);
                let pu = g.position(e.u);
                let pv = c.unwrap(pu, g.position(e.v));
                let _ = writeln!(
                    c.body,
                    "<polygon class=\"{:?}\" fill=\"{}\" points=\"{}\"/>",
                    r.kind,
                    rhombus_fill(r.kind),
                    c.points(&rhombus(pu, pv))
                );
            }
            let _ = writeln!(c.body, "</g>");
            if what == What::Paths {
                let family = matching_to_paths(g, mm)?;
                let _ = writeln!(c.body, "<g class=\"paths\" stroke=\"#000\" stroke-width=\"2.5\" fill=\"none\">");
                let turn = 2.0 * m as f64;
                for path in &family.paths {
                    let mut piece: Vec<(f64, f64)> = Vec::new();
                    for (t, &y) in path.iter().enumerate() {
                        let (x, y) = (1.5 * t as f64 - 0.75, y as f64);
                        if let Some(&(px, py)) = piece.last() {
                            // A step across the seam is drawn on both sides of it.
                            let crossing = if py == turn - 1.0 && y == 0.0 {
                                Some((turn, -1.0))
                            } else if py == 0.0 && y == turn - 1.0 {
                                Some((-1.0, turn))
                            } else {
                                None
                            };
                            if let Some((end, restart)) = crossing {
                                piece.push((x, end));
                                let _ = writeln!(c.body, "<polyline points=\"{}\"/>", c.points(&piece));
                                piece = vec![(px, restart)];
                            }
                        }
                        piece.push((x, y));
                    }
                    let _ = writeln!(c.body, "<polyline points=\"{}\"/>", c.points(&piece));
                }
                let _ = writeln!(c.body, "</g>");
            }
        }
    }

    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.3} {height:.3}\">\n<title>F({m},{k}) {title}</title>\n{}</svg>\n",
        c.body
    ))
}
