//! Exact face contributions: c(a) = (10 - 3a)/a per face arc, summed per vertex.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::Rational;
use crate::planar::PlanarEmbedding;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContributionError {
    #[error("face size {0} is below 3")]
    GonTooSmall(usize),
}

pub fn c_of_gon(a: usize) -> Result<Rational, ContributionError> {
    if a < 3 {
        return Err(ContributionError::GonTooSmall(a));
    }
    let a = a as i64;
    Ok(Rational::new(10 - 3 * a, a))
}

pub fn c_of_face_set(fs: &[usize]) -> Result<Rational, ContributionError> {
    fs.iter().try_fold(Rational::from_integer(0), |acc, &a| Ok(acc + c_of_gon(a)?))
}

/// Σ (10 - 3i) F_i over all faces, outer face included.
pub fn euler_contribution_sum(emb: &PlanarEmbedding) -> Rational {
    let s: i64 = emb.face_histogram().iter().map(|(&gon, &count)| (10 - 3 * gon as i64) * count as i64).sum();
    Rational::from_integer(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexContribution {
    pub vertex: usize,
    pub face_set: Vec<usize>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContributionReport {
    pub per_vertex: Vec<VertexContribution>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub total: Rational,
}

pub fn vertex_contribution(emb: &PlanarEmbedding, v: usize) -> Result<Rational, ContributionError> {
    let fs = emb.face_set(v).expect("vertex id in range");
    c_of_face_set(&fs)
}

pub fn total_contribution(emb: &PlanarEmbedding) -> Result<ContributionReport, ContributionError> {
    let mut per_vertex = Vec::with_capacity(emb.vertex_count());
    let mut total = Rational::from_integer(0);
    for v in 0..emb.vertex_count() {
        let face_set = emb.face_set(v).expect("vertex id in range");
        let c = c_of_face_set(&face_set)?;
        total += c;
        per_vertex.push(VertexContribution { vertex: v, face_set, c });
    }
    Ok(ContributionReport { per_vertex, total })
}

/// c(U) for an arbitrary vertex subset.
pub fn c_of_vertices(emb: &PlanarEmbedding, vertices: &[usize]) -> Result<Rational, ContributionError> {
    vertices.iter().try_fold(Rational::from_integer(0), |acc, &v| Ok(acc + vertex_contribution(emb, v)?))
}

#[derive(Debug, Clone, Copy)]
pub struct FaceSetQuery {
    pub max_entry: usize,
    /// Keep only sets with c > 0 instead of c >= 0.
    pub strict: bool,
    /// Require an entry of at least 4 (a vertex cannot be surrounded by five triangles).
    pub angle_filter: bool,
}

impl Default for FaceSetQuery {
    fn default() -> Self {
        FaceSetQuery { max_entry: 12, strict: false, angle_filter: true }
    }
}

/// Sorted 5-element face sets with non-negative (or positive) contribution.
pub fn enumerate_face_sets(q: FaceSetQuery) -> Vec<(Vec<usize>, Rational)> {
    fn rec(q: &FaceSetQuery, start: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Rational)>) {
        if cur.len() == 5 {
            let c = c_of_face_set(cur).expect("entries >= 3");
            let zero = Rational::from_integer(0);
            let keep_c = if q.strict { c > zero } else { c >= zero };
            let keep_angle = !q.angle_filter || cur.iter().any(|&a| a >= 4);
            if keep_c && keep_angle {
                out.push((cur.clone(), c));
            }
            return;
        }
        for a in start..=q.max_entry {
            cur.push(a);
            rec(q, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&q, 3, &mut Vec::new(), &mut out);
    out
}

/// The non-negative face sets of a degree-5 vertex.
///
/// Any entry of 7 or more already forces c < 0 (four triangles give 4/3, while
/// c(7) = -11/7), so 6 is the real cutoff; the scan runs to 12 and checks that
/// nothing new appears.
pub fn enumerate_nonneg_face_sets() -> Vec<(Vec<usize>, Rational)> {
    let tight = enumerate_face_sets(FaceSetQuery { max_entry: 6, ..Default::default() });
    let wide = enumerate_face_sets(FaceSetQuery::default());
    assert_eq!(tight, wide, "face sets beyond the analytic cutoff");
    wide
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn gon_values() {
        assert_eq!(c_of_gon(3).unwrap(), r(1, 3));
        assert_eq!(c_of_gon(4).unwrap(), r(-1, 2));
        assert_eq!(c_of_gon(10).unwrap(), r(-2, 1));
        assert_eq!(c_of_gon(2), Err(ContributionError::GonTooSmall(2)));
    }

    #[test]
    fn face_set_values() {
        assert_eq!(c_of_face_set(&[3, 3, 3, 3, 4]).unwrap(), r(5, 6));
        assert_eq!(c_of_face_set(&[3, 3, 3, 3, 5]).unwrap(), r(1, 3));
        assert_eq!(c_of_face_set(&[3, 3, 3, 3, 6]).unwrap(), r(0, 1));
        assert_eq!(c_of_face_set(&[3, 3, 3, 4, 4]).unwrap(), r(0, 1));
        assert!(c_of_face_set(&[3, 1]).is_err());
    }

    #[test]
    fn nonneg_sets() {
        let sets: Vec<Vec<usize>> = enumerate_nonneg_face_sets().into_iter().map(|(s, _)| s).collect();
        assert_eq!(sets, vec![vec![3, 3, 3, 3, 4], vec![3, 3, 3, 3, 5], vec![3, 3, 3, 3, 6], vec![3, 3, 3, 4, 4]]);
        let unfiltered = enumerate_face_sets(FaceSetQuery { angle_filter: false, ..Default::default() });
        assert_eq!(unfiltered.len(), 5);
        assert_eq!(unfiltered[0], (vec![3, 3, 3, 3, 3], r(5, 3)));
        let positive: Vec<Vec<usize>> = enumerate_face_sets(FaceSetQuery { strict: true, ..Default::default() })
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        assert_eq!(positive, vec![vec![3, 3, 3, 3, 4], vec![3, 3, 3, 3, 5]]);
    }

    #[test]
    fn euler_sums() {
        assert_eq!(euler_contribution_sum(&gallery::icosahedron()), r(20, 1));
        let tri = gallery::triangle().embed(1e-9).unwrap();
        assert_eq!(euler_contribution_sum(&tri), r(2, 1));
        let fig = gallery::mixed_wheel().embed(1e-9).unwrap();
        assert_eq!(euler_contribution_sum(&fig), r(-12, 1));
    }

    #[test]
    fn totals() {
        let ico = total_contribution(&gallery::icosahedron()).unwrap();
        assert_eq!(ico.total, r(20, 1));
        assert!(ico.per_vertex.iter().all(|v| v.c == r(5, 3)));

        let tri = total_contribution(&gallery::triangle().embed(1e-9).unwrap()).unwrap();
        assert_eq!(tri.total, r(2, 1));
        assert!(tri.per_vertex.iter().all(|v| v.c == r(2, 3)));

        let patch = crate::patch::periodic_patch(4, 5, &[]).unwrap();
        let emb = patch.graph.embed(1e-9).unwrap();
        for &v in &patch.interior {
            assert_eq!(vertex_contribution(&emb, v).unwrap(), r(0, 1));
        }
    }

    #[test]
    fn subset_sum() {
        let emb = gallery::icosahedron();
        assert_eq!(c_of_vertices(&emb, &[0, 1, 2]).unwrap(), r(5, 1));
        assert_eq!(c_of_vertices(&emb, &[]).unwrap(), r(0, 1));
    }

    #[test]
    fn everything_else_is_negative() {
        let keep = enumerate_nonneg_face_sets();
        let all = enumerate_face_sets(FaceSetQuery { max_entry: 12, strict: false, angle_filter: false });
        assert_eq!(all.len(), keep.len() + 1);
        // walk every 5-multiset with entries up to 12
        let mut count = 0;
        for a in 3..=12usize {
            for b in a..=12 {
                for c in b..=12 {
                    for d in c..=12 {
                        for e in d..=12 {
                            let fs = [a, b, c, d, e];
                            if e < 4 || keep.iter().any(|(s, _)| s[..] == fs[..]) {
                                continue;
                            }
                            count += 1;
                            assert!(c_of_face_set(&fs).unwrap() < r(0, 1), "{fs:?}");
                        }
                    }
                }
            }
        }
        assert!(count > 1000);
    }

    proptest! {
        #[test]
        fn gon_contribution_is_decreasing(a in 3usize..500) {
            let ca = c_of_gon(a).unwrap();
            prop_assert!(c_of_gon(a + 1).unwrap() < ca);
            prop_assert!(ca > r(-3, 1));
            if a >= 5 {
                prop_assert!(ca <= r(-1, 1));
            }
        }

        #[test]
        fn five_regular_totals_are_twenty(seed in 0u64..100, copies in 1usize..4) {
            let emb = gallery::random_five_regular(seed, copies);
            let report = total_contribution(&emb).unwrap();
            prop_assert_eq!(report.total, r(20, 1));
            prop_assert_eq!(euler_contribution_sum(&emb), r(20, 1));
        }
    }
}
