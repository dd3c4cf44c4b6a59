//! Closed simple lattice walks and their interior angles.
//!
//! A walk is a sequence of lattice directions (multiples of π/3). Steps of a
//! closed simple walk meet only at consecutive vertices on the lattice, so a
//! walk is simple exactly when its vertices are distinct.

use std::collections::HashSet;

use serde::Serialize;

use crate::geometry::{LatticePoint, LATTICE_DIRS};

/// Interior angle in units of π/3, per vertex, for a counterclockwise polygon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePolygon {
    pub directions: Vec<usize>,
    pub vertices: Vec<(i64, i64)>,
    pub angles: Vec<u8>,
}

impl LatticePolygon {
    pub fn max_angle(&self) -> u8 {
        self.angles.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PentagonReport {
    pub steps: usize,
    /// Direction sequences tried (6^steps).
    pub walks_examined: u64,
    /// Closed simple walks, counting each start vertex and orientation separately.
    pub simple_closed: u64,
    /// Distinct polygons up to translation.
    pub distinct_polygons: usize,
    /// Polygons whose interior angles are all at most 2π/3.
    pub counterexamples: Vec<LatticePolygon>,
    /// Polygon with the largest interior angle seen, in units of π/3.
    pub witness: Option<LatticePolygon>,
}

fn signed_area2(pts: &[LatticePoint]) -> i64 {
    // twice the area in units of the lattice parallelogram
    (0..pts.len())
        .map(|i| {
            let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
            p.a * q.b - p.b * q.a
        })
        .sum()
}

/// Closed simple walks of `steps` unit lattice steps, normalised to run
/// counterclockwise; `None` if the walk is not closed and simple.
fn polygon(dirs: &[usize]) -> Option<LatticePolygon> {
    let mut pts = vec![LatticePoint::new(0, 0)];
    for &d in dirs {
        pts.push(pts.last()?.step(d));
    }
    if pts.pop()? != LatticePoint::new(0, 0) {
        return None;
    }
    let distinct: HashSet<LatticePoint> = pts.iter().copied().collect();
    if distinct.len() != pts.len() {
        return None;
    }
    let area = signed_area2(&pts);
    if area == 0 {
        return None;
    }
    let n = dirs.len();
    let angles = (0..n)
        .map(|i| {
            let turn = (dirs[i] + 6 - dirs[(i + n - 1) % n]) % 6;
            // left turn by `turn` sixths leaves an interior angle of (3 - turn) on the left
            let left = (3 + 6 - turn as i64) % 6;
            let inner = if area > 0 { left } else { 6 - left };
            inner as u8
        })
        .collect();
    Some(LatticePolygon { directions: dirs.to_vec(), vertices: pts.iter().map(|p| (p.a, p.b)).collect(), angles })
}

fn canonical_vertices(poly: &LatticePolygon) -> Vec<(i64, i64)> {
    let min = poly.vertices.iter().copied().min().unwrap_or((0, 0));
    let mut v: Vec<(i64, i64)> = poly.vertices.iter().map(|&(a, b)| (a - min.0, b - min.1)).collect();
    v.sort();
    v
}

/// Enumerates every closed simple lattice walk with `steps` steps and collects
/// those whose interior angles are all ≤ 2π/3.
pub fn polygon_check(steps: usize) -> PentagonReport {
    let total = 6u64.pow(steps as u32);
    let mut simple_closed = 0;
    let mut shapes = HashSet::new();
    let mut counterexamples = Vec::new();
    let mut witness: Option<LatticePolygon> = None;
    let mut dirs = vec![0usize; steps];
    for code in 0..total {
        let mut c = code;
        for d in dirs.iter_mut() {
            *d = (c % 6) as usize;
            c /= 6;
        }
        let Some(poly) = polygon(&dirs) else { continue };
        simple_closed += 1;
        if !shapes.insert(canonical_vertices(&poly)) {
            continue;
        }
        if poly.max_angle() <= 2 {
            counterexamples.push(poly.clone());
        }
        if witness.as_ref().is_none_or(|w| poly.max_angle() > w.max_angle()) {
            witness = Some(poly);
        }
    }
    PentagonReport {
        steps,
        walks_examined: total,
        simple_closed,
        distinct_polygons: shapes.len(),
        counterexamples,
        witness,
    }
}

/// Every closed simple 5-step lattice walk has an interior angle ≥ π.
pub fn pentagon_check() -> PentagonReport {
    polygon_check(5)
}

/// Whether a multiset of lattice directions contains two opposite directions.
pub fn has_antipodal_pair(dirs: &[usize]) -> bool {
    dirs.iter().any(|&d| dirs.contains(&((d + 3) % 6)))
}

/// Sum of the step vectors.
pub fn walk_displacement(dirs: &[usize]) -> (i64, i64) {
    dirs.iter().fold((0, 0), |(a, b), &d| (a + LATTICE_DIRS[d].0, b + LATTICE_DIRS[d].1))
}
