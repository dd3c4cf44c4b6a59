//! Discharging weights on the face arcs of a prospective 5-regular TQ class and
//! the booking audit that shows their sum is non-positive.
//!
//! Every class vertex must have five arcs, none in the outer face. Arcs in class
//! faces keep ω = c. The remaining arcs sit in gaps: maximal runs of non-class
//! arcs at an outer vertex, bounded by two outer edges, with leaving half-edges
//! inside. Consecutive gaps along the boundary pair up into simple cycles; the
//! leaving half-edges cut each cycle into paths whose arcs share one exterior face.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::contribution::{c_of_gon, vertex_contribution};
use crate::geometry::Rational;
use crate::planar::{FaceArc, PlanarEmbedding};
use crate::report::{ser_rational, ser_rationals};
use crate::tq::TQClassRecord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("class is not evaluable: vertex {vertex} {reason}")]
    NotEvaluable { vertex: usize, reason: String },
    #[error("class is not prospective 5-regular")]
    NotProspective,
    #[error("outer edges do not form simple cycles: vertex {0} repeats")]
    CycleNotSimple(usize),
    #[error("boundary cycle through {vertices:?} is inconsistent: {detail}")]
    BadCycle { vertices: Vec<usize>, detail: String },
    #[error("no weight case for a path of {m} outer edges in a {gon}-gon (cycle through {vertex})")]
    UnmatchedCase { vertex: usize, m: usize, gon: usize },
    #[error("weight {omega} below contribution {c} at vertex {vertex}")]
    BelowContribution { vertex: usize, omega: Rational, c: Rational },
    #[error("booking step {step} ({label}) breaks the inequality: residual {residual}")]
    Inequality { step: usize, label: String, residual: Rational },
    #[error("booking ends with K={k}, T={t}, B1={b1}")]
    Terminal { k: Rational, t: Rational, b1: i64 },
    #[error("no unbooked special vertex on the pentagonal hole through {0:?}")]
    NoSpecialVertex(Vec<usize>),
    #[error("vertex {0} is not shared by both classes")]
    NotShared(usize),
    #[error("vertex {0} lies in more than two classes")]
    TooManyClasses(usize),
    #[error("contribution bound fails: {detail}")]
    Bound { detail: String },
}

/// The weight cases for a path of outer edges between two leaving half-edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PathCase {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2a")]
    TwoA,
    #[serde(rename = "2b")]
    TwoB,
    #[serde(rename = "3a")]
    ThreeA,
    #[serde(rename = "3b")]
    ThreeB,
    #[serde(rename = "4a")]
    FourA,
    #[serde(rename = "4b")]
    FourB,
    #[serde(rename = "5")]
    Five,
}

impl PathCase {
    pub fn label(self) -> &'static str {
        match self {
            PathCase::One => "1",
            PathCase::TwoA => "2a",
            PathCase::TwoB => "2b",
            PathCase::ThreeA => "3a",
            PathCase::ThreeB => "3b",
            PathCase::FourA => "4a",
            PathCase::FourB => "4b",
            PathCase::Five => "5",
        }
    }

    /// Case for `m` path edges whose exterior face has `gon` sides.
    pub fn classify(m: usize, gon: usize) -> Option<PathCase> {
        match (m, gon) {
            (1, g) if g >= 4 => Some(PathCase::One),
            (2, 5) => Some(PathCase::TwoA),
            (2, g) if g >= 6 => Some(PathCase::TwoB),
            (3, 5) => Some(PathCase::ThreeA),
            (3, g) if g >= 6 => Some(PathCase::ThreeB),
            (4, 5) => Some(PathCase::FourA),
            (4, g) if g >= 6 => Some(PathCase::FourB),
            (m, g) if m >= 5 && g >= 6 => Some(PathCase::Five),
            _ => None,
        }
    }

    /// Weights of the m+1 path arcs, end arcs first and last.
    pub fn weights(self, m: usize) -> Vec<Rational> {
        let r = Rational::new;
        let (end, mid) = match self {
            PathCase::One => (r(-1, 2), r(0, 1)),
            PathCase::TwoA => (r(-2, 3), r(-1, 1)),
            PathCase::ThreeA => (r(-5, 6), r(-1, 1)),
            PathCase::FourA => (r(-1, 1), r(-1, 1)),
            PathCase::TwoB | PathCase::ThreeB | PathCase::FourB | PathCase::Five => (r(-1, 2), r(-4, 3)),
        };
        let mut w = vec![mid; m + 1];
        w[0] = end;
        w[m] = end;
        w
    }
}

impl fmt::Display for PathCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ArcKind {
    /// Arc of a class face.
    Inner,
    /// Arc between two leaving half-edges.
    DoubleLeaving,
    /// Arc in a face bounded by a whole cycle without leaving half-edges.
    Hole { gon: usize },
    /// Arc on a path between leaving half-edges; `position` counts from the path start.
    Path { case: PathCase, position: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedArc {
    pub vertex: usize,
    pub face: usize,
    pub prev_nbr: usize,
    pub next_nbr: usize,
    pub gon: usize,
    #[serde(serialize_with = "ser_rational")]
    pub omega: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub c: Rational,
    #[serde(flatten)]
    pub kind: ArcKind,
}

/// A maximal run of non-class arcs at an outer vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub vertex: usize,
    pub start_nbr: usize,
    pub end_nbr: usize,
    /// Other endpoints of the leaving half-edges inside the gap, counterclockwise.
    pub leaving: Vec<usize>,
    #[serde(skip)]
    arcs: Vec<FaceArc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryPath {
    /// m+1 vertices along the cycle.
    pub vertices: Vec<usize>,
    pub face: usize,
    pub gon: usize,
    pub case: PathCase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryCycle {
    pub vertices: Vec<usize>,
    pub leaving_half_edges: usize,
    /// Exterior face when there are no leaving half-edges.
    pub hole_face: Option<usize>,
    pub paths: Vec<BoundaryPath>,
    #[serde(skip)]
    gaps: Vec<Gap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<BoundaryCycle>,
}

impl CycleDecomposition {
    pub fn leaving_half_edges(&self) -> usize {
        self.cycles.iter().map(|c| c.leaving_half_edges).sum()
    }
}

/// Rejects classes whose vertices lack five bounded faces.
pub fn check_evaluable(emb: &PlanarEmbedding, class: &TQClassRecord) -> Result<(), WeightError> {
    if !class.prospective {
        return Err(WeightError::NotProspective);
    }
    let outer = emb.outer_face();
    for &v in &class.vertices {
        let d = emb.degree(v);
        if d != 5 {
            return Err(WeightError::NotEvaluable { vertex: v, reason: format!("has degree {d}") });
        }
        if emb.arcs_at(v).iter().any(|a| a.face == outer) {
            return Err(WeightError::NotEvaluable { vertex: v, reason: "touches the outer face".into() });
        }
    }
    Ok(())
}

fn gaps_at(emb: &PlanarEmbedding, class: &TQClassRecord, v: usize) -> Vec<Gap> {
    let arcs = emb.arcs_at(v);
    let n = arcs.len();
    let in_class: Vec<bool> = arcs.iter().map(|a| class.contains_face(a.face)).collect();
    if in_class.iter().all(|&x| x) {
        return Vec::new();
    }
    let mut gaps = Vec::new();
    for j in 0..n {
        if in_class[j] || !in_class[(j + n - 1) % n] {
            continue;
        }
        let mut run = Vec::new();
        let mut i = j;
        while !in_class[i % n] {
            run.push(arcs[i % n]);
            i += 1;
        }
        let leaving = run[..run.len() - 1].iter().map(|a| a.next_nbr).collect();
        gaps.push(Gap {
            vertex: v,
            start_nbr: run[0].prev_nbr,
            end_nbr: run[run.len() - 1].next_nbr,
            leaving,
            arcs: run,
        });
    }
    gaps
}

/// Splits the outer edges of an evaluable class into simple cycles and cuts each
/// cycle into paths at its leaving half-edges.
pub fn decompose_boundary(emb: &PlanarEmbedding, class: &TQClassRecord) -> Result<CycleDecomposition, WeightError> {
    check_evaluable(emb, class)?;
    let mut gaps: BTreeMap<(usize, usize), Gap> = BTreeMap::new();
    for &v in &class.vertices {
        for g in gaps_at(emb, class, v) {
            gaps.insert((v, g.start_nbr), g);
        }
    }
    let mut used = BTreeSet::new();
    let mut cycles = Vec::new();
    let keys: Vec<(usize, usize)> = gaps.keys().copied().collect();
    for key in keys {
        if used.contains(&key) {
            continue;
        }
        let mut seq: Vec<Gap> = Vec::new();
        let mut cur = key;
        loop {
            used.insert(cur);
            let g = gaps.get(&cur).ok_or_else(|| WeightError::BadCycle {
                vertices: seq.iter().map(|g| g.vertex).collect(),
                detail: format!("no gap at {} after edge to {}", cur.0, cur.1),
            })?;
            if seq.iter().any(|s| s.vertex == g.vertex) {
                return Err(WeightError::CycleNotSimple(g.vertex));
            }
            seq.push(g.clone());
            let next = (g.end_nbr, g.vertex);
            if next == key {
                break;
            }
            if used.contains(&next) {
                return Err(WeightError::CycleNotSimple(next.0));
            }
            cur = next;
        }
        cycles.push(build_cycle(emb, seq)?);
    }
    Ok(CycleDecomposition { cycles })
}

fn build_cycle(emb: &PlanarEmbedding, gaps: Vec<Gap>) -> Result<BoundaryCycle, WeightError> {
    let vertices: Vec<usize> = gaps.iter().map(|g| g.vertex).collect();
    let bad = |detail: String| WeightError::BadCycle { vertices: vertices.clone(), detail };
    let leaving: usize = gaps.iter().map(|g| g.leaving.len()).sum();
    let n = gaps.len();
    if leaving == 0 {
        let face = gaps[0].arcs[0].face;
        if gaps.iter().any(|g| g.arcs.len() != 1 || g.arcs[0].face != face) {
            return Err(bad("hole arcs lie in different faces".into()));
        }
        if emb.face(face).gon != n {
            return Err(bad(format!("hole face has {} sides, cycle has {n}", emb.face(face).gon)));
        }
        return Ok(BoundaryCycle { vertices, leaving_half_edges: 0, hole_face: Some(face), paths: Vec::new(), gaps });
    }
    let starts: Vec<usize> = (0..n).filter(|&i| !gaps[i].leaving.is_empty()).collect();
    let mut paths = Vec::new();
    for (si, &a) in starts.iter().enumerate() {
        let b = starts[(si + 1) % starts.len()];
        let m = if b > a { b - a } else { b + n - a };
        let path_vertices: Vec<usize> = (0..=m).map(|t| vertices[(a + t) % n]).collect();
        let mut faces = vec![gaps[a].arcs.last().expect("non-empty gap").face];
        for t in 1..m {
            faces.push(gaps[(a + t) % n].arcs[0].face);
        }
        faces.push(gaps[b].arcs[0].face);
        let face = faces[0];
        if faces.iter().any(|&f| f != face) {
            return Err(bad(format!("path from {} to {} crosses faces {faces:?}", vertices[a], vertices[b])));
        }
        let gon = emb.face(face).gon;
        let case = PathCase::classify(m, gon).ok_or(WeightError::UnmatchedCase { vertex: vertices[a], m, gon })?;
        paths.push(BoundaryPath { vertices: path_vertices, face, gon, case });
    }
    Ok(BoundaryCycle { vertices, leaving_half_edges: leaving, hole_face: None, paths, gaps })
}

/// Half-edge key: (root vertex, other endpoint).
type HalfEdge = (usize, usize);

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BookingStep {
    pub step: usize,
    pub label: String,
    #[serde(serialize_with = "ser_rational")]
    pub omega: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub k: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub t: Rational,
    pub b1: i64,
    #[serde(serialize_with = "ser_rational")]
    pub residual: Rational,
}

/// One group of arcs booked together.
#[derive(Debug, Clone, PartialEq)]
struct Booking {
    label: String,
    arcs: Vec<usize>,
    outer_halves: Vec<(usize, usize)>,
    leaving_halves: Vec<HalfEdge>,
    special: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightLedger {
    pub arcs: Vec<WeightedArc>,
    pub cycles: CycleDecomposition,
    pub steps: Vec<BookingStep>,
    /// Final η per outer edge.
    #[serde(serialize_with = "ser_rationals")]
    pub eta_edges: Vec<Rational>,
    /// Final η per leaving half-edge.
    #[serde(serialize_with = "ser_rationals")]
    pub eta_half_edges: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub total: Rational,
    pub booked_special: Vec<usize>,
    #[serde(skip)]
    bookings: Vec<Booking>,
}

impl WeightLedger {
    pub fn arcs_at(&self, v: usize) -> impl Iterator<Item = &WeightedArc> {
        self.arcs.iter().filter(move |a| a.vertex == v)
    }

    pub fn omega_at(&self, v: usize) -> Rational {
        self.arcs_at(v).map(|a| a.omega).sum()
    }
}

fn weighted(emb: &PlanarEmbedding, arc: &FaceArc, omega: Rational, kind: ArcKind) -> Result<WeightedArc, WeightError> {
    let gon = emb.face(arc.face).gon;
    let c = c_of_gon(gon).map_err(|e| WeightError::Bound { detail: e.to_string() })?;
    if omega < c {
        return Err(WeightError::BelowContribution { vertex: arc.vertex, omega, c });
    }
    Ok(WeightedArc {
        vertex: arc.vertex,
        face: arc.face,
        prev_nbr: arc.prev_nbr,
        next_nbr: arc.next_nbr,
        gon,
        omega,
        c,
        kind,
    })
}

/// Assigns ω to all five arcs of every class vertex and replays the booking.
pub fn assign_weights(emb: &PlanarEmbedding, class: &TQClassRecord) -> Result<WeightLedger, WeightError> {
    let cycles = decompose_boundary(emb, class)?;
    let mut arcs = Vec::new();
    let mut bookings = Vec::new();

    for &v in &class.vertices {
        for arc in emb.arcs_at(v) {
            if class.contains_face(arc.face) {
                let c = c_of_gon(emb.face(arc.face).gon).map_err(|e| WeightError::Bound { detail: e.to_string() })?;
                arcs.push(weighted(emb, &arc, c, ArcKind::Inner)?);
            }
        }
    }
    let inner_count = arcs.len();

    for cycle in &cycles.cycles {
        for g in &cycle.gaps {
            for arc in g.arcs.iter().skip(1).take(g.arcs.len().saturating_sub(2)) {
                bookings.push(Booking {
                    label: format!("double-leaving arc at {}", arc.vertex),
                    arcs: vec![arcs.len()],
                    outer_halves: Vec::new(),
                    leaving_halves: vec![(arc.vertex, arc.prev_nbr), (arc.vertex, arc.next_nbr)],
                    special: None,
                });
                arcs.push(weighted(emb, arc, Rational::new(1, 3), ArcKind::DoubleLeaving)?);
            }
        }
    }

    let mut special_used = BTreeSet::new();
    for cycle in &cycles.cycles {
        let n = cycle.vertices.len();
        if let Some(face) = cycle.hole_face {
            let gon = emb.face(face).gon;
            let omega = if gon == 5 { Rational::from_integer(-1) } else { Rational::new(-4, 3) };
            let mut ids = Vec::new();
            for g in &cycle.gaps {
                ids.push(arcs.len());
                arcs.push(weighted(emb, &g.arcs[0], omega, ArcKind::Hole { gon })?);
            }
            let special = if gon == 5 {
                let pick = pick_special(emb, class, cycle, &special_used)
                    .ok_or_else(|| WeightError::NoSpecialVertex(cycle.vertices.clone()))?;
                special_used.insert(pick);
                Some(pick)
            } else {
                None
            };
            let outer_halves = (0..n)
                .flat_map(|i| {
                    let e = edge_key(cycle.vertices[i], cycle.vertices[(i + 1) % n]);
                    [e, e]
                })
                .collect();
            bookings.push(Booking {
                label: format!("hole {gon}-gon through {:?}", cycle.vertices),
                arcs: ids,
                outer_halves,
                leaving_halves: Vec::new(),
                special,
            });
            continue;
        }
        let index: BTreeMap<usize, usize> = cycle.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for path in &cycle.paths {
            let m = path.vertices.len() - 1;
            let w = path.case.weights(m);
            let a = index[&path.vertices[0]];
            let mut ids = Vec::new();
            let mut path_arcs = vec![*cycle.gaps[a].arcs.last().expect("gap")];
            for t in 1..m {
                path_arcs.push(cycle.gaps[(a + t) % n].arcs[0]);
            }
            path_arcs.push(cycle.gaps[(a + m) % n].arcs[0]);
            for (pos, arc) in path_arcs.iter().enumerate() {
                ids.push(arcs.len());
                arcs.push(weighted(emb, arc, w[pos], ArcKind::Path { case: path.case, position: pos })?);
            }
            let first = &path_arcs[0];
            let last = &path_arcs[m];
            let outer_halves = path
                .vertices
                .windows(2)
                .flat_map(|p| {
                    let e = edge_key(p[0], p[1]);
                    [e, e]
                })
                .collect();
            bookings.push(Booking {
                label: format!("case ({}) path {:?}", path.case, path.vertices),
                arcs: ids,
                outer_halves,
                leaving_halves: vec![(first.vertex, first.prev_nbr), (last.vertex, last.next_nbr)],
                special: None,
            });
        }
    }

    let total: Rational = arcs.iter().map(|a| a.omega).sum();
    let mut ledger = WeightLedger {
        arcs,
        cycles,
        steps: Vec::new(),
        eta_edges: Vec::new(),
        eta_half_edges: Vec::new(),
        total,
        booked_special: special_used.into_iter().collect(),
        bookings,
    };
    for &v in &class.vertices {
        let count = ledger.arcs_at(v).count();
        if count != 5 {
            return Err(WeightError::Bound { detail: format!("vertex {v} received {count} weights") });
        }
    }
    bookkeeping_audit(&mut ledger, emb, class, inner_count)?;
    Ok(ledger)
}

/// Prefers a special vertex whose hole angle is at least π.
fn pick_special(
    emb: &PlanarEmbedding,
    class: &TQClassRecord,
    cycle: &BoundaryCycle,
    used: &BTreeSet<usize>,
) -> Option<usize> {
    let candidates: Vec<&Gap> =
        cycle.gaps.iter().filter(|g| class.is_special(g.vertex) && !used.contains(&g.vertex)).collect();
    let wide = candidates.iter().find(|g| emb.arc_angle(&g.arcs[0]).is_some_and(|a| a >= std::f64::consts::PI - 1e-9));
    wide.or(candidates.first()).map(|g| g.vertex)
}

fn residual(omega: Rational, k: Rational, t: Rational, b1: i64) -> Rational {
    omega - k + (t - k) / Rational::from_integer(3) + Rational::new(5 * b1, 3)
}

/// Replays the bookings with explicit η bookkeeping, checking the inequality
/// after every step and the terminal state.
fn bookkeeping_audit(
    ledger: &mut WeightLedger,
    emb: &PlanarEmbedding,
    class: &TQClassRecord,
    inner_count: usize,
) -> Result<(), WeightError> {
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    let mut eta_edge: BTreeMap<(usize, usize), Rational> = class.outer_edges.iter().map(|&e| (e, one)).collect();
    let mut eta_half: BTreeMap<HalfEdge, Rational> = BTreeMap::new();
    for &v in &class.vertices {
        for &u in emb.rotation(v) {
            if !class.is_class_edge(v, u) {
                eta_half.insert((v, u), one);
            }
        }
    }
    let p = class.params;
    let mut omega: Rational = ledger.arcs[..inner_count].iter().map(|a| a.omega).sum();
    let sum = |m: &BTreeMap<_, Rational>| m.values().copied().sum::<Rational>();
    let checks = [
        (omega == p.sigma, "Ω differs from σ"),
        (sum(&eta_edge) == Rational::from_integer(p.k), "outer edge count differs from k"),
        (sum(&eta_half) == Rational::from_integer(p.tau), "leaving half-edge count differs from τ"),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(WeightError::Bound { detail: msg.to_string() });
    }
    let mut b1 = p.b1;
    let mut steps = Vec::new();
    let mut record = |label: String, omega, eta_edge: &BTreeMap<_, _>, eta_half: &BTreeMap<_, _>, b1| {
        let (k, t) = (sum(eta_edge), sum(eta_half));
        let r = residual(omega, k, t, b1);
        let step = steps.len();
        steps.push(BookingStep { step, label: label.clone(), omega, k, t, b1, residual: r });
        if r > Rational::from_integer(0) {
            return Err(WeightError::Inequality { step, label, residual: r });
        }
        Ok(())
    };
    record("initialisation".into(), omega, &eta_edge, &eta_half, b1)?;
    for b in &ledger.bookings {
        for &i in &b.arcs {
            omega += ledger.arcs[i].omega;
        }
        for e in &b.outer_halves {
            let eta = eta_edge
                .get_mut(e)
                .ok_or_else(|| WeightError::Bound { detail: format!("{e:?} is not an outer edge") })?;
            *eta -= half;
        }
        for h in &b.leaving_halves {
            let eta = eta_half
                .get_mut(h)
                .ok_or_else(|| WeightError::Bound { detail: format!("{h:?} is not a leaving half-edge") })?;
            *eta -= half;
        }
        if b.special.is_some() {
            b1 -= 1;
        }
        record(b.label.clone(), omega, &eta_edge, &eta_half, b1)?;
    }
    let zero = Rational::from_integer(0);
    let negative = eta_edge.values().chain(eta_half.values()).any(|&x| x < zero);
    let (k, t) = (sum(&eta_edge), sum(&eta_half));
    if k != zero || t != zero || b1 < 0 || negative {
        return Err(WeightError::Terminal { k, t, b1 });
    }
    if omega != ledger.total || omega > zero {
        return Err(WeightError::Bound { detail: format!("final Ω = {omega}") });
    }
    ledger.steps = steps;
    ledger.eta_edges = eta_edge.into_values().collect();
    ledger.eta_half_edges = eta_half.into_values().collect();
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassBound {
    /// Σ c(v) over class vertices.
    #[serde(serialize_with = "ser_rational")]
    pub c_class: Rational,
    /// Σ ω over all arcs at class vertices.
    #[serde(serialize_with = "ser_rational")]
    pub omega: Rational,
}

/// c of the class vertex set together with Σω, checked to satisfy c ≤ Σω ≤ 0.
pub fn class_contribution_bound(
    emb: &PlanarEmbedding,
    class: &TQClassRecord,
) -> Result<(ClassBound, WeightLedger), WeightError> {
    let ledger = assign_weights(emb, class)?;
    let mut c_class = Rational::from_integer(0);
    for &v in &class.vertices {
        c_class += vertex_contribution(emb, v).map_err(|e| WeightError::Bound { detail: e.to_string() })?;
    }
    let bound = ClassBound { c_class, omega: ledger.total };
    if c_class > ledger.total || ledger.total > Rational::from_integer(0) {
        return Err(WeightError::Bound { detail: format!("c(B) = {c_class}, Σω = {}", ledger.total) });
    }
    Ok((bound, ledger))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub vertex: usize,
    #[serde(serialize_with = "ser_rational")]
    pub omega_sum: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub c: Rational,
    pub holds: bool,
}

/// Checks that the two ledgers together do not underestimate c(v).
pub fn overlap_check(
    emb: &PlanarEmbedding,
    first: (&TQClassRecord, &WeightLedger),
    second: (&TQClassRecord, &WeightLedger),
    v: usize,
) -> Result<OverlapReport, WeightError> {
    if !first.0.contains_vertex(v) || !second.0.contains_vertex(v) {
        return Err(WeightError::NotShared(v));
    }
    let omega_sum = first.1.omega_at(v) + second.1.omega_at(v);
    let c = vertex_contribution(emb, v).map_err(|e| WeightError::Bound { detail: e.to_string() })?;
    Ok(OverlapReport { vertex: v, omega_sum, c, holds: omega_sum >= c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionBound {
    /// c over the union of class vertex sets, each vertex once.
    #[serde(serialize_with = "ser_rational")]
    pub c_union: Rational,
    /// Σ over classes of Σω.
    #[serde(serialize_with = "ser_rational")]
    pub omega_total: Rational,
    pub overlaps: Vec<OverlapReport>,
}

/// Bounds c of the union of the given classes by the sum of their ledgers.
pub fn union_contribution_bound(
    emb: &PlanarEmbedding,
    classes: &[(&TQClassRecord, &WeightLedger)],
) -> Result<UnionBound, WeightError> {
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (cls, _)) in classes.iter().enumerate() {
        for &v in &cls.vertices {
            members.entry(v).or_default().push(i);
        }
    }
    let mut c_union = Rational::from_integer(0);
    let mut overlaps = Vec::new();
    for (&v, owners) in &members {
        let c = vertex_contribution(emb, v).map_err(|e| WeightError::Bound { detail: e.to_string() })?;
        c_union += c;
        match owners.as_slice() {
            [i] => {
                if classes[*i].1.omega_at(v) < c {
                    return Err(WeightError::Bound { detail: format!("Σω at vertex {v} is below c(v)") });
                }
            }
            [i, j] => {
                let report = overlap_check(emb, classes[*i], classes[*j], v)?;
                if !report.holds {
                    return Err(WeightError::Bound { detail: format!("overlap at vertex {v} underestimates c(v)") });
                }
                overlaps.push(report);
            }
            _ => return Err(WeightError::TooManyClasses(v)),
        }
    }
    let omega_total: Rational = classes.iter().map(|(_, l)| l.total).sum();
    if c_union > omega_total || omega_total > Rational::from_integer(0) {
        return Err(WeightError::Bound { detail: format!("c(∪) = {c_union}, Σω = {omega_total}") });
    }
    Ok(UnionBound { c_union, omega_total, overlaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::tq::decompose;

    fn star_class() -> (PlanarEmbedding, TQClassRecord) {
        let emb = gallery::triangle_star().embed(1e-9).unwrap();
        let class = decompose(&emb).unwrap().into_iter().find(|c| c.vertices == vec![0, 1, 2]).unwrap();
        (emb, class)
    }

    #[test]
    fn triangle_star_ledger() {
        let (emb, class) = star_class();
        let cycles = decompose_boundary(&emb, &class).unwrap();
        assert_eq!(cycles.cycles.len(), 1);
        assert_eq!(cycles.leaving_half_edges(), 9);
        assert!(cycles.cycles[0].paths.iter().all(|p| p.case == PathCase::One && p.gon == 5));
        let (bound, ledger) = class_contribution_bound(&emb, &class).unwrap();
        assert_eq!(ledger.total, Rational::from_integer(0));
        assert_eq!(bound.c_class, Rational::from_integer(-3));
        let doubles = ledger.arcs.iter().filter(|a| a.kind == ArcKind::DoubleLeaving).count();
        assert_eq!(doubles, 6);
        assert!(ledger.arcs.iter().all(|a| a.omega >= a.c));
        assert!(ledger.steps.iter().all(|s| s.residual <= Rational::from_integer(0)));
        let last = ledger.steps.last().unwrap();
        assert_eq!((last.k, last.t, last.b1), (Rational::from_integer(0), Rational::from_integer(0), 0));
    }

    #[test]
    fn outer_classes_are_not_evaluable() {
        let emb = gallery::triangle().embed(1e-9).unwrap();
        let class = decompose(&emb).unwrap().remove(0);
        assert!(matches!(assign_weights(&emb, &class), Err(WeightError::NotEvaluable { .. })));
        let (emb, class) = star_class();
        let others: Vec<TQClassRecord> = decompose(&emb).unwrap().into_iter().filter(|c| c != &class).collect();
        assert_eq!(others.len(), 3);
        for c in &others {
            assert!(assign_weights(&emb, c).is_err());
        }
    }

    #[test]
    fn single_class_union_and_overlap_errors() {
        let (emb, class) = star_class();
        let ledger = assign_weights(&emb, &class).unwrap();
        let u = union_contribution_bound(&emb, &[(&class, &ledger)]).unwrap();
        assert_eq!(u.c_union, Rational::from_integer(-3));
        assert!(u.overlaps.is_empty());
        assert_eq!(overlap_check(&emb, (&class, &ledger), (&class, &ledger), 5), Err(WeightError::NotShared(5)));
        let empty = union_contribution_bound(&emb, &[]).unwrap();
        assert_eq!(empty.c_union, Rational::from_integer(0));
    }

    #[test]
    fn case_table_meets_the_booking_budget() {
        // a path of m edges must satisfy Σω ≤ -(4m-1)/3 and ω ≥ c of its face
        for m in 1..=9 {
            for gon in 3..=14 {
                let Some(case) = PathCase::classify(m, gon) else { continue };
                let w = case.weights(m);
                assert_eq!(w.len(), m + 1);
                let sum: Rational = w.iter().copied().sum();
                assert!(sum <= Rational::new(1 - 4 * m as i64, 3), "case {case} m={m}");
                let c = c_of_gon(gon).unwrap();
                assert!(w.iter().all(|&x| x >= c), "case {case} gon={gon}");
            }
        }
        assert_eq!(PathCase::classify(1, 3), None);
        assert_eq!(PathCase::classify(2, 4), None);
        assert_eq!(PathCase::classify(5, 5), None);
        assert_eq!(PathCase::classify(4, 5), Some(PathCase::FourA));
    }

    #[test]
    fn hole_weights_meet_budget() {
        // pentagon: ΔΩ = ΔK = -5 and one special vertex; l-gon: -4l/3 with ΔK = -l
        let five = residual(Rational::from_integer(-5), Rational::from_integer(-5), Rational::from_integer(0), -1);
        assert_eq!(five, Rational::from_integer(0));
        for l in 6..12 {
            let r = residual(Rational::new(-4 * l, 3), Rational::from_integer(-l), Rational::from_integer(0), 0);
            assert_eq!(r, Rational::from_integer(0));
        }
        let double = residual(Rational::new(1, 3), Rational::from_integer(0), Rational::from_integer(-1), 0);
        assert_eq!(double, Rational::from_integer(0));
    }
}
