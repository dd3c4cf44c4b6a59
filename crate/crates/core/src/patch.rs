//! Finite windows of an infinite 5-regular matchstick pattern: horizontal vertex
//! lines separated by strips that alternate between unit triangles and unit
//! parallelograms (squares when unsheared).
//!
//! Every vertex away from the window boundary has degree 5 and face set
//! {3,3,3,4,4}. The parallelogram strips can be sheared freely, which slides
//! everything above them sideways without changing that local picture.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Point2, SQRT3_2};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatchError {
    #[error("patch needs at least 3 rows and 3 columns, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("{given} shifts given for {strips} strips")]
    ShiftCount { given: usize, strips: usize },
    #[error("shift {shift} on strip {strip} collapses its parallelograms")]
    Collision { strip: usize, shift: i32 },
    #[error("triangle strip {strip} only accepts shifts 0 or -4, got {shift}")]
    TriangleShift { strip: usize, shift: i32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct Patch {
    pub graph: Graph,
    pub rows: usize,
    pub cols: usize,
    /// Vertices off the window boundary; each has all five faces bounded.
    pub interior: Vec<usize>,
}

/// Builds a `rows` x `cols` window.
///
/// Strip `r` lies between vertex lines `r` and `r + 1`; even strips are
/// triangles, odd strips parallelograms. `shifts[r]` is an extra horizontal
/// offset of line `r + 1` in quarter units. A triangle strip leans right by
/// default and leans left with shift -4; a parallelogram strip accepts any
/// shift strictly between -4 and 4, where ±2 makes it a strip of 60° rhombi.
/// An empty slice means no shifts.
pub fn periodic_patch(rows: usize, cols: usize, shifts: &[i32]) -> Result<Patch, PatchError> {
    if rows < 3 || cols < 3 {
        return Err(PatchError::TooSmall { rows, cols });
    }
    let strips = rows - 1;
    let shifts: Vec<i32> = if shifts.is_empty() {
        vec![0; strips]
    } else if shifts.len() == strips {
        shifts.to_vec()
    } else {
        return Err(PatchError::ShiftCount { given: shifts.len(), strips });
    };

    let id = |r: usize, j: usize| r * cols + j;
    let mut points = Vec::with_capacity(rows * cols);
    let mut edges = Vec::new();
    let (mut x0, mut y) = (0.0f64, 0.0f64);
    // neighbor offset of the upper line per strip: +1 means upper j touches lower j+1
    let mut lean = Vec::with_capacity(strips);
    for r in 0..rows {
        for j in 0..cols {
            points.push(Point2::new(x0 + j as f64, y));
        }
        let Some(&s) = shifts.get(r) else { break };
        if r % 2 == 0 {
            let d = match s {
                0 => 0.5,
                -4 => -0.5,
                _ => return Err(PatchError::TriangleShift { strip: r, shift: s }),
            };
            lean.push(if d > 0.0 { 1i64 } else { -1 });
            x0 += d;
            y += SQRT3_2;
        } else {
            if s.abs() >= 4 {
                return Err(PatchError::Collision { strip: r, shift: s });
            }
            let d = s as f64 / 4.0;
            lean.push(0);
            x0 += d;
            y += (1.0 - d * d).sqrt();
        }
    }

    for r in 0..rows {
        for j in 0..cols - 1 {
            edges.push((id(r, j), id(r, j + 1)));
        }
    }
    for (r, &l) in lean.iter().enumerate() {
        for j in 0..cols {
            edges.push((id(r, j), id(r + 1, j)));
            let k = j as i64 + l;
            if l != 0 && (0..cols as i64).contains(&k) {
                edges.push((id(r, k as usize), id(r + 1, j)));
            }
        }
    }

    let graph = Graph::new(points, edges);
    let emb = graph.embed(1e-9).expect("patch is a plane drawing");
    let interior = (0..graph.vertex_count()).filter(|&v| !emb.on_outer_face(v)).collect();
    Ok(Patch { graph, rows, cols, interior })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contribution::vertex_contribution;
    use crate::geometry::Rational;

    #[test]
    fn unshifted_patch() {
        let p = periodic_patch(4, 5, &[]).unwrap();
        assert!(p.graph.validate(1e-9).valid);
        let emb = p.graph.embed(1e-9).unwrap();
        assert!(!p.interior.is_empty());
        for &v in &p.interior {
            assert_eq!(emb.degree(v), 5);
            assert_eq!(emb.face_set(v).unwrap(), vec![3, 3, 3, 4, 4]);
            assert_eq!(vertex_contribution(&emb, v).unwrap(), Rational::from_integer(0));
        }
    }

    #[test]
    fn shifted_patches_stay_valid() {
        for shifts in [[0, 1, -4, -3, 0], [-4, 2, 0, -2, -4], [0, -1, 0, 3, 0]] {
            let p = periodic_patch(6, 8, &shifts).unwrap();
            assert!(p.graph.validate(1e-9).valid, "{shifts:?}");
            let emb = p.graph.embed(1e-9).unwrap();
            for &v in &p.interior {
                assert_eq!(emb.face_set(v).unwrap(), vec![3, 3, 3, 4, 4]);
            }
        }
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(periodic_patch(2, 2, &[]).unwrap_err(), PatchError::TooSmall { rows: 2, cols: 2 });
        assert!(matches!(periodic_patch(4, 4, &[0, 4, 0]), Err(PatchError::Collision { .. })));
        assert!(matches!(periodic_patch(4, 4, &[1, 0, 0]), Err(PatchError::TriangleShift { .. })));
        assert!(matches!(periodic_patch(4, 4, &[0]), Err(PatchError::ShiftCount { .. })));
    }
}
