//! Class parameter vectors (σ, k, τ, b₁, b₂) and the linear identity relating them.

use std::fmt;

use serde::Serialize;

use crate::geometry::Rational;
use crate::report::ser_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ClassParams {
    /// Sum of c over the face arcs of class faces.
    #[serde(serialize_with = "ser_rational")]
    pub sigma: Rational,
    /// Outer edges.
    pub k: i64,
    /// Σ (5 - class degree) over class vertices.
    pub tau: i64,
    /// Special-type vertices.
    pub b1: i64,
    /// 2π/3 class angles at outer vertices.
    pub b2: i64,
}

fn identity(sigma: Rational, k: i64, tau: i64, b: i64) -> Rational {
    sigma - Rational::from_integer(k) + Rational::new(tau - k, 3) + Rational::new(5 * b, 3)
}

impl ClassParams {
    pub fn new(sigma: Rational, k: i64, tau: i64, b1: i64, b2: i64) -> Self {
        ClassParams { sigma, k, tau, b1, b2 }
    }

    pub fn from_ints(sigma: i64, k: i64, tau: i64, b1: i64, b2: i64) -> Self {
        Self::new(Rational::from_integer(sigma), k, tau, b1, b2)
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0, 0)
    }

    /// σ - k + (τ - k)/3 + 5/3·b₁ + 5/3·b₂; zero for every valid class.
    pub fn residual(&self) -> Rational {
        identity(self.sigma, self.k, self.tau, self.b1 + self.b2)
    }

    pub fn delta_from(&self, before: &ClassParams) -> Delta {
        Delta {
            d_sigma: self.sigma - before.sigma,
            d_k: self.k - before.k,
            d_tau: self.tau - before.tau,
            d_b: (self.b1 + self.b2) - (before.b1 + before.b2),
        }
    }

    pub fn as_tuple(&self) -> (Rational, i64, i64, i64, i64) {
        (self.sigma, self.k, self.tau, self.b1, self.b2)
    }
}

impl fmt::Display for ClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ={} k={} τ={} b1={} b2={}", self.sigma, self.k, self.tau, self.b1, self.b2)
    }
}

/// Parameter change caused by adding one face; `d_b` is Δb₁ + Δb₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Delta {
    #[serde(serialize_with = "ser_rational")]
    pub d_sigma: Rational,
    pub d_k: i64,
    pub d_tau: i64,
    pub d_b: i64,
}

impl Delta {
    pub fn residual(&self) -> Rational {
        identity(self.d_sigma, self.d_k, self.d_tau, self.d_b)
    }

    pub fn signature(&self) -> (i64, i64, i64, i64) {
        (self.d_sigma.to_integer(), self.d_k, self.d_tau, self.d_b)
    }
}

/// Rows of the triangle (1-8) and rhombus (9-27) addition tables:
/// (case, Δσ, Δk, Δτ, Δb₁+Δb₂).
pub const ADDITION_CASES: [(u8, i64, i64, i64, i64); 27] = [
    (1, 1, 3, 9, 0),
    (2, 1, 3, 4, 1),
    (3, 1, 3, -1, 2),
    (4, 1, 3, -6, 3),
    (5, 1, 1, 1, 0),
    (6, 1, 1, -4, 1),
    (7, 1, -1, -2, -1),
    (8, 1, -3, 0, -3),
    (9, -2, 4, 12, 2),
    (10, -2, 4, 7, 3),
    (11, -2, 4, 7, 3),
    (12, -2, 4, 2, 4),
    (13, -2, 4, 2, 4),
    (14, -2, 4, 2, 4),
    (15, -2, 4, -3, 5),
    (16, -2, 4, -8, 6),
    (17, -2, 2, 4, 2),
    (18, -2, 2, -1, 3),
    (19, -2, 2, -1, 3),
    (20, -2, 2, -6, 4),
    (21, -2, 0, -4, 2),
    (22, -2, 0, 1, 1),
    (23, -2, 0, 1, 1),
    (24, -2, 0, -4, 2),
    (25, -2, 0, -4, 2),
    (26, -2, -2, -2, 0),
    (27, -2, -4, 0, -2),
];

/// Table rows whose signature matches; several rows can share one signature.
pub fn case_candidates(delta: &Delta) -> Vec<u8> {
    let (s, k, t, b) = delta.signature();
    if Rational::from_integer(s) != delta.d_sigma {
        return Vec::new();
    }
    ADDITION_CASES.iter().filter(|row| (row.1, row.2, row.3, row.4) == (s, k, t, b)).map(|row| row.0).collect()
}
