//! SVG drawing: 100 px per unit, class faces filled, leaving edges dashed.

use std::fmt::Write as _;

use matchstick_core::geometry::Point2;
use matchstick_core::graph::Graph;
use matchstick_core::tq::decompose;

const SCALE: f64 = 100.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 8] = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45"];

pub struct Drawing {
    pub svg: String,
    pub classes: usize,
}

pub fn render(g: &Graph, eps: f64) -> Drawing {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &g.points {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    if g.points.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let w = (x1 - x0) * SCALE + 2.0 * MARGIN;
    let h = (y1 - y0) * SCALE + 2.0 * MARGIN;
    // y axis points up in the graph, down in SVG
    let px = |p: Point2| ((p.x - x0) * SCALE + MARGIN, (y1 - p.y) * SCALE + MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Classes need a plane embedding; without one only the drawing is shown.
    let emb = g.embed(eps).ok();
    let classes = emb.as_ref().and_then(|e| decompose(e).ok()).unwrap_or_default();
    let mut class_edges = std::collections::BTreeSet::new();
    let mut class_vertices = std::collections::BTreeSet::new();
    if let Some(emb) = &emb {
        for (i, c) in classes.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            for &f in &c.faces {
                let pts: Vec<String> = emb
                    .face_vertices(f)
                    .iter()
                    .map(|&v| {
                        let (x, y) = px(g.points[v]);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="0.45" stroke="none"/>"#,
                    pts.join(" ")
                );
            }
            class_edges.extend(c.inner_edges.iter().chain(&c.outer_edges).copied());
            class_vertices.extend(c.vertices.iter().copied());
        }
    }
    for &(i, j) in &g.edges {
        let ((ax, ay), (bx, by)) = (px(g.points[i]), px(g.points[j]));
        let key = (i.min(j), i.max(j));
        let leaving = !class_edges.contains(&key) && (class_vertices.contains(&i) || class_vertices.contains(&j));
        let dash = if leaving { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="black" stroke-width="2"{dash}/>"#
        );
    }
    for p in &g.points {
        let (x, y) = px(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
    }
    s.push_str("</svg>\n");
    Drawing { svg: s, classes: classes.len() }
}
