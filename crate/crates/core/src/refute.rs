//! End-to-end check of a candidate finite 5-regular matchstick graph.
//!
//! The pipeline validates the drawing, checks 5-regularity, computes c(V) two
//! ways (it must be 20), then tries to certify c(V) ≤ 0 from the class ledgers
//! and the off-class vertices. The first failing stage decides the verdict.

use serde::Serialize;

use crate::contribution::{c_of_gon, euler_contribution_sum, total_contribution};
use crate::geometry::{Point2, Rational};
use crate::planar::PlanarEmbedding;
use crate::report::{fmt_rational, ser_opt_rational};
use crate::tq::{decompose, TQClassRecord};
use crate::validator::{check_angle_sum, check_regular, validate_matchstick, Condition, Verdict, Violation};
use crate::weights::{class_contribution_bound, union_contribution_bound, WeightLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateVerdict {
    ContradictionEstablished,
    InputInvalid,
    Inconclusive,
}

impl CertificateVerdict {
    pub fn tag(self) -> &'static str {
        match self {
            CertificateVerdict::ContradictionEstablished => "contradiction-established",
            CertificateVerdict::InputInvalid => "input-invalid",
            CertificateVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub check: &'static str,
    pub passed: bool,
    #[serde(serialize_with = "ser_opt_rational")]
    pub value: Option<Rational>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: CertificateVerdict,
    pub chain: Vec<ChainStep>,
    /// Violated matchstick or degree conditions, for input-invalid.
    pub violations: Vec<Violation>,
    /// Set when every stage passed: a real input can never get here, so some
    /// earlier check must have accepted a defect.
    pub unreachable: bool,
}

impl Certificate {
    /// Condition tags of the recorded violations, deduplicated.
    pub fn conditions(&self) -> Vec<Condition> {
        let mut c: Vec<Condition> = self.violations.iter().map(|v| v.condition).collect();
        c.dedup();
        c
    }

    pub fn failing_step(&self) -> Option<&ChainStep> {
        self.chain.iter().find(|s| !s.passed)
    }
}

struct Chain {
    steps: Vec<ChainStep>,
}

impl Chain {
    fn push(&mut self, check: &'static str, passed: bool, value: Option<Rational>, detail: impl Into<String>) {
        self.steps.push(ChainStep { check, passed, value, detail: detail.into() });
    }

    fn finish(self, verdict: CertificateVerdict, violations: Vec<Violation>) -> Certificate {
        Certificate { verdict, chain: self.steps, violations, unreachable: false }
    }
}

fn summarize(v: &Verdict) -> String {
    let shown: Vec<&str> = v.violations.iter().take(5).map(|x| x.detail.as_str()).collect();
    let more = v.violations.len().saturating_sub(shown.len());
    let mut s = shown.join("; ");
    if more > 0 {
        s.push_str(&format!("; {more} more"));
    }
    s
}

/// Runs the full pipeline on a drawing. Never panics on bad input; every
/// outcome is a certificate.
pub fn refute_candidate(points: &[Point2], edges: &[(usize, usize)], eps: f64) -> Certificate {
    let mut chain = Chain { steps: Vec::new() };
    let zero = Rational::from_integer(0);
    let twenty = Rational::from_integer(20);

    let verdict = validate_matchstick(points, edges, eps);
    if !verdict.valid {
        chain.push("matchstick", false, None, summarize(&verdict));
        return chain.finish(CertificateVerdict::InputInvalid, verdict.violations);
    }
    chain.push("matchstick", true, None, format!("{} vertices, {} unit edges", points.len(), edges.len()));

    let emb = match PlanarEmbedding::from_coordinates(points.to_vec(), edges, eps) {
        Ok(e) => e,
        Err(e) => {
            chain.push("embedding", false, None, e.to_string());
            let v = Violation { condition: Condition::PlanarSimple, witnesses: Vec::new(), detail: e.to_string() };
            return chain.finish(CertificateVerdict::InputInvalid, vec![v]);
        }
    };
    chain.push("embedding", true, None, format!("{} faces", emb.faces().len()));

    let regular = check_regular(&emb, 5);
    if !regular.valid {
        chain.push("5-regular", false, None, summarize(&regular));
        return chain.finish(CertificateVerdict::InputInvalid, regular.violations);
    }
    chain.push("5-regular", true, None, "every vertex has degree 5");

    let angles = check_angle_sum(&emb, eps.max(1e-9));
    if !angles.valid {
        chain.push("angle-sum", false, None, summarize(&angles));
        return chain.finish(CertificateVerdict::InputInvalid, angles.violations);
    }
    chain.push("angle-sum", true, None, "every vertex sums to 2π with a face of 4 or more corners");

    let euler = euler_contribution_sum(&emb);
    let total = match total_contribution(&emb) {
        Ok(r) => r.total,
        Err(e) => {
            chain.push("c(V)", false, None, e.to_string());
            return chain.finish(CertificateVerdict::Inconclusive, Vec::new());
        }
    };
    let identity = euler == twenty && total == twenty;
    chain.push(
        "c(V)",
        identity,
        Some(total),
        format!("per-vertex sum {}, Euler face sum {}", fmt_rational(&total), fmt_rational(&euler)),
    );
    if !identity {
        return chain.finish(CertificateVerdict::Inconclusive, Vec::new());
    }

    let classes = match decompose(&emb) {
        Ok(c) => c,
        Err(e) => {
            chain.push("tq-classes", false, None, e.to_string());
            return chain.finish(CertificateVerdict::Inconclusive, Vec::new());
        }
    };
    chain.push("tq-classes", true, None, format!("{} classes", classes.len()));

    let mut ledgers: Vec<(&TQClassRecord, WeightLedger)> = Vec::new();
    for (i, cls) in classes.iter().enumerate() {
        match class_contribution_bound(&emb, cls) {
            Ok((bound, ledger)) => {
                chain.push(
                    "class-bound",
                    true,
                    Some(bound.c_class),
                    format!("class {i}: c(B) = {} ≤ Σω = {}", fmt_rational(&bound.c_class), fmt_rational(&bound.omega)),
                );
                ledgers.push((cls, ledger));
            }
            Err(e) => {
                chain.push("class-bound", false, None, format!("class {i}: {e}"));
                return chain.finish(CertificateVerdict::Inconclusive, Vec::new());
            }
        }
    }
    let pairs: Vec<(&TQClassRecord, &WeightLedger)> = ledgers.iter().map(|(c, l)| (*c, l)).collect();
    let union = match union_contribution_bound(&emb, &pairs) {
        Ok(u) => u,
        Err(e) => {
            chain.push("union-bound", false, None, e.to_string());
            return chain.finish(CertificateVerdict::Inconclusive, Vec::new());
        }
    };
    chain.push(
        "union-bound",
        union.c_union <= zero,
        Some(union.c_union),
        format!("{} shared vertices", union.overlaps.len()),
    );

    // Off-class vertices: positive c(v) means four triangles at v, which a
    // class would have absorbed.
    let mut off = zero;
    for v in 0..emb.vertex_count() {
        if classes.iter().any(|c| c.contains_vertex(v)) {
            continue;
        }
        let fs = emb.face_set(v).unwrap_or_default();
        let c: Rational = fs.iter().map(|&a| c_of_gon(a).unwrap_or(zero)).sum();
        if c > zero {
            chain.push("off-class", false, Some(c), format!("vertex {v} with face set {fs:?} lies in no class"));
            return chain.finish(CertificateVerdict::Inconclusive, Vec::new());
        }
        off += c;
    }
    chain.push("off-class", true, Some(off), "every vertex outside the classes has c(v) ≤ 0");

    let bound = union.c_union + off;
    chain.push(
        "contradiction",
        bound < total,
        Some(bound),
        format!("c(V) ≤ {} contradicts c(V) = {}", fmt_rational(&bound), fmt_rational(&total)),
    );
    let mut cert = chain.finish(CertificateVerdict::ContradictionEstablished, Vec::new());
    cert.unreachable = true;
    cert
}
