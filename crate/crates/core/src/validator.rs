//! Matchstick-graph checks: simplicity, unit edges, distinct points, no crossings,
//! plus degree and angle-sum checks on built embeddings.
//!
//! Every violation is collected; nothing short-circuits.

use std::f64::consts::PI;

use serde::Serialize;

use crate::geometry::{segments_cross, Point2};
use crate::planar::PlanarEmbedding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    PlanarSimple,
    UnitEdge,
    DistinctPoints,
    Crossing,
    Degree,
    AngleSum,
}

impl Condition {
    pub fn tag(self) -> &'static str {
        match self {
            Condition::PlanarSimple => "planar-simple",
            Condition::UnitEdge => "unit-edge",
            Condition::DistinctPoints => "distinct-points",
            Condition::Crossing => "crossing",
            Condition::Degree => "degree",
            Condition::AngleSum => "angle-sum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub condition: Condition,
    /// Vertex ids involved (edge endpoints for edge conditions).
    pub witnesses: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        Verdict { valid: violations.is_empty(), violations }
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn has(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }

    /// Merges another verdict into this one.
    pub fn merge(self, other: Verdict) -> Verdict {
        let mut all = self.violations;
        all.extend(other.violations);
        Verdict::from_violations(all)
    }
}

fn violation(condition: Condition, witnesses: Vec<usize>, detail: String) -> Violation {
    Violation { condition, witnesses, detail }
}

fn on_segment(p: Point2, a: Point2, b: Point2, eps: f64) -> bool {
    let ab = b - a;
    let len = ab.dot(ab).sqrt();
    let dist_line = ab.cross(p - a).abs() / len;
    let t = ab.dot(p - a) / (len * len);
    dist_line <= eps && t > -eps && t < 1.0 + eps
}

pub fn validate_matchstick(points: &[Point2], edges: &[(usize, usize)], eps: f64) -> Verdict {
    let n = points.len();
    let mut out = Vec::new();
    let mut good: Vec<(usize, usize)> = Vec::new();
    for &(u, v) in edges {
        if u >= n || v >= n {
            out.push(violation(
                Condition::PlanarSimple,
                vec![u.min(v), u.max(v)],
                format!("edge {u}-{v} references a missing vertex"),
            ));
        } else if u == v {
            out.push(violation(Condition::PlanarSimple, vec![u], format!("self-loop at {u}")));
        } else {
            good.push((u.min(v), u.max(v)));
        }
    }
    good.sort_unstable();
    for w in good.windows(2).filter(|w| w[0] == w[1]) {
        let (u, v) = w[0];
        out.push(violation(Condition::PlanarSimple, vec![u, v], format!("duplicate edge {u}-{v}")));
    }
    good.dedup();

    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].dist(points[j]) <= eps {
                out.push(violation(Condition::DistinctPoints, vec![i, j], format!("vertices {i} and {j} coincide")));
            }
        }
    }

    for &(u, v) in &good {
        let len = points[u].dist(points[v]);
        if (len - 1.0).abs() > eps {
            out.push(violation(Condition::UnitEdge, vec![u, v], format!("edge {u}-{v} has length {len}")));
        }
    }

    for (a, &(u1, v1)) in good.iter().enumerate() {
        for &(u2, v2) in &good[a + 1..] {
            if u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2 {
                continue;
            }
            let s1 = (points[u1], points[v1]);
            let s2 = (points[u2], points[v2]);
            // zero-length segments are already reported as coincident points
            if let Ok(true) = segments_cross(s1, s2, eps) {
                out.push(violation(
                    Condition::Crossing,
                    vec![u1, v1, u2, v2],
                    format!("edges {u1}-{v1} and {u2}-{v2} share a point"),
                ));
            }
        }
    }

    for (w, &p) in points.iter().enumerate() {
        for &(u, v) in &good {
            if w == u || w == v || points[u].dist(points[v]) <= eps {
                continue;
            }
            if on_segment(p, points[u], points[v], eps) && p.dist(points[u]) > eps && p.dist(points[v]) > eps {
                out.push(violation(Condition::Crossing, vec![u, v, w], format!("vertex {w} lies on edge {u}-{v}")));
            }
        }
    }

    Verdict::from_violations(out)
}

pub fn check_degree_cap(emb: &PlanarEmbedding, cap: usize) -> Verdict {
    let out = (0..emb.vertex_count())
        .filter(|&v| emb.degree(v) > cap)
        .map(|v| violation(Condition::Degree, vec![v], format!("vertex {v} has degree {} > {cap}", emb.degree(v))))
        .collect();
    Verdict::from_violations(out)
}

pub fn check_regular(emb: &PlanarEmbedding, r: usize) -> Verdict {
    check_regular_on(emb, r, 0..emb.vertex_count())
}

/// Regularity restricted to the given vertices.
pub fn check_regular_on(emb: &PlanarEmbedding, r: usize, vertices: impl IntoIterator<Item = usize>) -> Verdict {
    let out = vertices
        .into_iter()
        .filter(|&v| emb.degree(v) != r)
        .map(|v| violation(Condition::Degree, vec![v], format!("vertex {v} has degree {} != {r}", emb.degree(v))))
        .collect();
    Verdict::from_violations(out)
}

/// Face-arc angles at each vertex must sum to 2π, with no zero-width arcs.
/// For 5-regular embeddings every face set must also contain an entry of at least 4.
pub fn check_angle_sum(emb: &PlanarEmbedding, eps: f64) -> Verdict {
    let mut out = Vec::new();
    if emb.is_abstract() {
        out.push(violation(Condition::AngleSum, vec![], "embedding has no coordinates".into()));
        return Verdict::from_violations(out);
    }
    let regular = emb.is_regular(5);
    for v in 0..emb.vertex_count() {
        if emb.degree(v) == 0 {
            continue;
        }
        let arcs = emb.arcs_at(v);
        let angles: Vec<f64> = arcs.iter().filter_map(|a| emb.arc_angle(a)).collect();
        let sum: f64 = angles.iter().sum();
        let degenerate = emb.degree(v) > 1 && angles.iter().any(|&t| t <= eps || t >= 2.0 * PI - eps);
        if angles.len() != arcs.len() || (sum - 2.0 * PI).abs() > eps.max(1e-9) || degenerate {
            out.push(violation(Condition::AngleSum, vec![v], format!("angles at vertex {v} sum to {sum}")));
        }
        if regular {
            let fs = emb.face_set(v).expect("vertex exists");
            if fs.iter().all(|&g| g < 4) {
                out.push(violation(Condition::AngleSum, vec![v], format!("face set at vertex {v} has no entry >= 4")));
            }
        }
    }
    Verdict::from_violations(out)
}
