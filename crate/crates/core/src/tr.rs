//! TR classes: unions of unit triangles and 60° rhombi on the triangular lattice.
//!
//! Faces are built from cells. `up(a,b)` has corners (a,b), (a+1,b), (a,b+1);
//! `down(a,b)` has corners (a+1,b), (a+1,b+1), (a,b+1). A rhombus is an up cell
//! together with one of its three down neighbours. Parameters are recomputed from
//! scratch on every change, so the face-addition deltas are an independent oracle
//! for the addition tables.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{lattice_to_plane, LatticePoint, Rational};
use crate::graph::Graph;
use crate::params::{case_candidates, ClassParams, Delta};
use crate::report::ser_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrError {
    #[error("face {0} overlaps an existing face")]
    Overlap(LatticeFace),
    #[error("inner vertex ({0},{1}) has class degree {2} (must be 5)")]
    InnerDegree(i64, i64, usize),
    #[error("vertex ({0},{1}) has class degree {2} > 5")]
    DegreeAbove5(i64, i64, usize),
    #[error("parameter identity fails after adding {face}: residual {residual}")]
    Residual { face: LatticeFace, residual: Rational },
    #[error("cannot parse face descriptor {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub a: i64,
    pub b: i64,
    pub up: bool,
}

impl Cell {
    pub const fn up(a: i64, b: i64) -> Cell {
        Cell { a, b, up: true }
    }

    pub const fn down(a: i64, b: i64) -> Cell {
        Cell { a, b, up: false }
    }

    pub fn corners(self) -> [LatticePoint; 3] {
        let (a, b) = (self.a, self.b);
        if self.up {
            [LatticePoint::new(a, b), LatticePoint::new(a + 1, b), LatticePoint::new(a, b + 1)]
        } else {
            [LatticePoint::new(a + 1, b), LatticePoint::new(a + 1, b + 1), LatticePoint::new(a, b + 1)]
        }
    }

    pub fn from_corners(pts: [LatticePoint; 3]) -> Cell {
        let a = pts.iter().map(|p| p.a).min().expect("three corners");
        let b = pts.iter().map(|p| p.b).min().expect("three corners");
        Cell { a, b, up: pts.contains(&LatticePoint::new(a, b)) }
    }

    /// The neighbour across edge `axis`: for an up cell 0 is the diagonal,
    /// 1 the bottom and 2 the left edge; down cells use the inverse.
    pub fn neighbor(self, axis: usize) -> Cell {
        let (a, b) = (self.a, self.b);
        match (self.up, axis) {
            (true, 0) => Cell::down(a, b),
            (true, 1) => Cell::down(a, b - 1),
            (true, 2) => Cell::down(a - 1, b),
            (false, 0) => Cell::up(a, b),
            (false, 1) => Cell::up(a, b + 1),
            (false, 2) => Cell::up(a + 1, b),
            _ => panic!("axis {axis} out of range"),
        }
    }

    pub fn transform(self, k: usize) -> Cell {
        Cell::from_corners(self.corners().map(|p| p.transform(k)))
    }

    pub fn translate(self, da: i64, db: i64) -> Cell {
        Cell { a: self.a + da, b: self.b + db, up: self.up }
    }

    /// The cell filling sector `s` at `p`, the sector sweeping from lattice
    /// direction `s` to `s + 1`.
    pub fn at_sector(p: LatticePoint, s: usize) -> Cell {
        let (a, b) = (p.a, p.b);
        match s % 6 {
            0 => Cell::up(a, b),
            1 => Cell::down(a - 1, b),
            2 => Cell::up(a - 1, b),
            3 => Cell::down(a - 1, b - 1),
            4 => Cell::up(a, b - 1),
            _ => Cell::down(a, b - 1),
        }
    }
}

/// A class face: a triangle, or a rhombus stored as (up cell, down cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LatticeFace {
    Triangle(Cell),
    Rhombus(Cell, Cell),
}

impl LatticeFace {
    pub fn triangle(a: i64, b: i64, up: bool) -> Self {
        LatticeFace::Triangle(Cell { a, b, up })
    }

    /// Rhombus made of `cell` and its neighbour across `axis`.
    pub fn rhombus(cell: Cell, axis: usize) -> Self {
        let other = cell.neighbor(axis);
        if cell.up {
            LatticeFace::Rhombus(cell, other)
        } else {
            LatticeFace::Rhombus(other, cell)
        }
    }

    fn from_cells(cells: &[Cell]) -> Self {
        match cells {
            [c] => LatticeFace::Triangle(*c),
            [x, y] if x.up => LatticeFace::Rhombus(*x, *y),
            [x, y] => LatticeFace::Rhombus(*y, *x),
            _ => panic!("faces have one or two cells"),
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        match *self {
            LatticeFace::Triangle(c) => vec![c],
            LatticeFace::Rhombus(u, d) => vec![u, d],
        }
    }

    pub fn is_triangle(&self) -> bool {
        matches!(self, LatticeFace::Triangle(_))
    }

    pub fn corners(&self) -> Vec<LatticePoint> {
        let mut pts: Vec<LatticePoint> = self.cells().iter().flat_map(|c| c.corners()).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn transform(&self, k: usize) -> Self {
        Self::from_cells(&self.cells().iter().map(|c| c.transform(k)).collect::<Vec<_>>())
    }

    pub fn translate(&self, da: i64, db: i64) -> Self {
        Self::from_cells(&self.cells().iter().map(|c| c.translate(da, db)).collect::<Vec<_>>())
    }

    /// Axis of a rhombus relative to its up cell.
    fn axis(&self) -> Option<usize> {
        match *self {
            LatticeFace::Rhombus(u, d) => (0..3).find(|&k| u.neighbor(k) == d),
            _ => None,
        }
    }
}

impl fmt::Display for LatticeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LatticeFace::Triangle(c) => write!(f, "T {} {} {}", c.a, c.b, if c.up { "u" } else { "d" }),
            LatticeFace::Rhombus(u, _) => write!(f, "R {} {} {} 0", u.a, u.b, self.axis().expect("valid rhombus")),
        }
    }
}

impl FromStr for LatticeFace {
    type Err = TrError;

    /// `T a b u|d` or `R a b axis parity`; parity 0 anchors the rhombus at
    /// up(a,b), parity 1 at down(a,b).
    fn from_str(s: &str) -> Result<Self, TrError> {
        let err = || TrError::Parse(s.to_string());
        let tok: Vec<&str> = s.split_whitespace().collect();
        let int = |t: &str| t.parse::<i64>().map_err(|_| err());
        match tok.as_slice() {
            ["T", a, b, o] => {
                let up = match *o {
                    "u" => true,
                    "d" => false,
                    _ => return Err(err()),
                };
                Ok(LatticeFace::triangle(int(a)?, int(b)?, up))
            }
            ["R", a, b, axis, parity] => {
                let axis = int(axis)?;
                let parity = int(parity)?;
                if !(0..3).contains(&axis) || !(0..2).contains(&parity) {
                    return Err(err());
                }
                let cell = Cell { a: int(a)?, b: int(b)?, up: parity == 0 };
                Ok(LatticeFace::rhombus(cell, axis as usize))
            }
            _ => Err(err()),
        }
    }
}

/// A set of pairwise interior-disjoint lattice faces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TRClass {
    faces: Vec<LatticeFace>,
}

/// Per-vertex view of a class: which face (by index) fills each of the six sectors.
struct Star {
    owner: [Option<usize>; 6],
}

impl Star {
    fn at(owners: &HashMap<Cell, usize>, p: LatticePoint) -> Star {
        let mut owner = [None; 6];
        for (s, o) in owner.iter_mut().enumerate() {
            *o = owners.get(&Cell::at_sector(p, s)).copied();
        }
        Star { owner }
    }

    fn check(&self, p: LatticePoint) -> Result<(), TrError> {
        let d = self.degree();
        if self.full() && d != 5 {
            return Err(TrError::InnerDegree(p.a, p.b, d));
        }
        if d > 5 {
            return Err(TrError::DegreeAbove5(p.a, p.b, d));
        }
        Ok(())
    }

    fn edge_sides(&self, d: usize) -> (Option<usize>, Option<usize>) {
        (self.owner[(d + 5) % 6], self.owner[d])
    }

    fn is_class_edge(&self, d: usize) -> bool {
        match self.edge_sides(d) {
            (None, None) => false,
            (Some(x), Some(y)) => x != y,
            _ => true,
        }
    }

    fn is_outer_edge(&self, d: usize) -> bool {
        matches!(self.edge_sides(d), (Some(_), None) | (None, Some(_)))
    }

    fn degree(&self) -> usize {
        (0..6).filter(|&d| self.is_class_edge(d)).count()
    }

    fn full(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    fn runs(&self) -> usize {
        let flags: Vec<bool> = self.owner.iter().map(Option::is_some).collect();
        crate::tq::cyclic_runs(&flags)
    }

    /// Faces covering two sectors here, i.e. with a 2π/3 corner.
    fn obtuse(&self) -> usize {
        (0..6).filter(|&s| self.owner[s].is_some() && self.owner[s] == self.owner[(s + 1) % 6]).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrSummary {
    pub faces: Vec<String>,
    pub params: ClassParams,
    #[serde(serialize_with = "ser_rational")]
    pub residual: Rational,
}

impl TRClass {
    pub fn new() -> Self {
        TRClass::default()
    }

    /// Builds a class and checks its invariants.
    pub fn from_faces(faces: impl IntoIterator<Item = LatticeFace>) -> Result<Self, TrError> {
        let mut cls = TRClass::new();
        let mut seen = HashSet::new();
        for f in faces {
            if f.cells().iter().any(|c| !seen.insert(*c)) {
                return Err(TrError::Overlap(f));
            }
            cls.faces.push(f);
        }
        cls.faces.sort();
        cls.check()?;
        Ok(cls)
    }

    pub fn faces(&self) -> &[LatticeFace] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    fn owner_map(&self) -> HashMap<Cell, usize> {
        let mut m = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            for c in f.cells() {
                m.insert(c, i);
            }
        }
        m
    }

    pub fn vertices(&self) -> Vec<LatticePoint> {
        let set: BTreeSet<LatticePoint> = self.faces.iter().flat_map(|f| f.corners()).collect();
        set.into_iter().collect()
    }

    fn stars(&self) -> Vec<(LatticePoint, Star)> {
        let owners = self.owner_map();
        self.vertices().into_iter().map(|p| (p, Star::at(&owners, p))).collect()
    }

    fn check(&self) -> Result<(), TrError> {
        let owners = self.owner_map();
        self.vertices().into_iter().try_for_each(|p| Star::at(&owners, p).check(p))
    }

    /// Checks `face` against a class given by its owner map. Only the stars at
    /// the new face's corners change, so only those are inspected.
    fn legal_with(owners: &mut HashMap<Cell, usize>, face: LatticeFace) -> Result<(), TrError> {
        let cells = face.cells();
        if cells.iter().any(|c| owners.contains_key(c)) {
            return Err(TrError::Overlap(face));
        }
        for &c in &cells {
            owners.insert(c, usize::MAX);
        }
        let verdict = face.corners().into_iter().try_for_each(|p| Star::at(owners, p).check(p));
        for c in &cells {
            owners.remove(c);
        }
        verdict
    }

    pub fn params(&self) -> ClassParams {
        let mut sigma = Rational::from_integer(0);
        for f in &self.faces {
            sigma += Rational::from_integer(if f.is_triangle() { 1 } else { -2 });
        }
        let (mut outer_ends, mut tau, mut b1, mut b2) = (0i64, 0i64, 0i64, 0i64);
        for (_, star) in self.stars() {
            outer_ends += (0..6).filter(|&d| star.is_outer_edge(d)).count() as i64;
            tau += 5 - star.degree() as i64;
            if !star.full() {
                if star.runs() >= 2 {
                    b1 += 1;
                }
                b2 += star.obtuse() as i64;
            }
        }
        ClassParams::new(sigma, outer_ends / 2, tau, b1, b2)
    }

    pub fn residual(&self) -> Rational {
        self.params().residual()
    }

    pub fn inner_vertices(&self) -> Vec<LatticePoint> {
        self.stars().into_iter().filter(|(_, s)| s.full()).map(|(p, _)| p).collect()
    }

    pub fn special_vertices(&self) -> Vec<LatticePoint> {
        self.stars().into_iter().filter(|(_, s)| !s.full() && s.runs() >= 2).map(|(p, _)| p).collect()
    }

    /// Class edges as ordered lattice point pairs.
    pub fn class_edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        self.edges_where(|star, d| star.is_class_edge(d))
    }

    /// Short diagonals of the rhombi: lattice segments inside a single face.
    pub fn diagonals(&self) -> Vec<(LatticePoint, LatticePoint)> {
        self.edges_where(|star, d| matches!(star.edge_sides(d), (Some(x), Some(y)) if x == y))
    }

    fn edges_where(&self, keep: impl Fn(&Star, usize) -> bool) -> Vec<(LatticePoint, LatticePoint)> {
        let mut out = BTreeSet::new();
        for (p, star) in self.stars() {
            for d in 0..6 {
                if keep(&star, d) {
                    let q = p.step(d);
                    out.insert((p.min(q), p.max(q)));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Whether the faces are connected through shared edges.
    pub fn dual_connected(&self) -> bool {
        if self.faces.is_empty() {
            return true;
        }
        let owners = self.owner_map();
        let mut seen = vec![false; self.faces.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for c in self.faces[i].cells() {
                for axis in 0..3 {
                    if let Some(&j) = owners.get(&c.neighbor(axis)) {
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Whether every face can reach every other through shared vertices.
    pub fn vertex_connected(&self) -> bool {
        if self.faces.is_empty() {
            return true;
        }
        let corners: Vec<BTreeSet<LatticePoint>> =
            self.faces.iter().map(|f| f.corners().into_iter().collect()).collect();
        let mut seen = vec![false; self.faces.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..self.faces.len() {
                if !seen[j] && !corners[i].is_disjoint(&corners[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn occupied(&self) -> HashSet<Cell> {
        self.faces.iter().flat_map(|f| f.cells()).collect()
    }

    /// Adds a face, returning the grown class and its parameter change.
    pub fn add_face(&self, face: LatticeFace) -> Result<(TRClass, DeltaRecord), TrError> {
        Self::legal_with(&mut self.owner_map(), face)?;
        let grown = self.with_face(face);
        let delta = grown.params().delta_from(&self.params());
        let residual = delta.residual();
        if residual != Rational::from_integer(0) {
            return Err(TrError::Residual { face, residual });
        }
        let case_tags = case_candidates(&delta);
        Ok((grown, DeltaRecord { added_face: face, delta, case_tags }))
    }

    fn with_face(&self, face: LatticeFace) -> TRClass {
        let mut faces = self.faces.clone();
        faces.push(face);
        faces.sort();
        TRClass { faces }
    }

    /// Candidate faces that keep the class valid.
    pub fn legal_additions(&self) -> Vec<LatticeFace> {
        let mut owners = self.owner_map();
        self.touching_candidates().into_iter().filter(|&f| Self::legal_with(&mut owners, f).is_ok()).collect()
    }

    /// Faces not yet in the class that share at least a vertex with it, sorted.
    pub fn touching_candidates(&self) -> Vec<LatticeFace> {
        let occupied = self.occupied();
        let mut out = BTreeSet::new();
        for p in self.vertices() {
            for s in 0..6 {
                let c = Cell::at_sector(p, s);
                if occupied.contains(&c) {
                    continue;
                }
                out.insert(LatticeFace::Triangle(c));
                for axis in 0..3 {
                    if !occupied.contains(&c.neighbor(axis)) {
                        out.insert(LatticeFace::rhombus(c, axis));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Canonical representative under lattice translations and the 12 symmetries.
    pub fn canonical(&self) -> TRClass {
        let mut best: Option<Vec<LatticeFace>> = None;
        for k in 0..12 {
            let mut faces: Vec<LatticeFace> = self.faces.iter().map(|f| f.transform(k)).collect();
            let anchor = faces.iter().flat_map(|f| f.cells()).map(|c| (c.a, c.b)).min().unwrap_or((0, 0));
            faces = faces.iter().map(|f| f.translate(-anchor.0, -anchor.1)).collect();
            faces.sort();
            if best.as_ref().is_none_or(|b| faces < *b) {
                best = Some(faces);
            }
        }
        TRClass { faces: best.unwrap_or_default() }
    }

    pub fn translate(&self, da: i64, db: i64) -> TRClass {
        let mut faces: Vec<LatticeFace> = self.faces.iter().map(|f| f.translate(da, db)).collect();
        faces.sort();
        TRClass { faces }
    }

    /// The class drawn as a plane graph: corners plus face boundary edges.
    pub fn to_graph(&self) -> Graph {
        let verts = self.vertices();
        let index: BTreeMap<LatticePoint, usize> = verts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut edges = BTreeSet::new();
        for (p, star) in self.stars() {
            for d in 0..6 {
                if star.is_class_edge(d) {
                    let q = p.step(d);
                    let (i, j) = (index[&p], index[&q]);
                    edges.insert((i.min(j), i.max(j)));
                }
            }
        }
        Graph::new(verts.iter().map(|&p| lattice_to_plane(p)).collect(), edges.into_iter().collect())
    }

    pub fn summary(&self) -> TrSummary {
        let params = self.params();
        TrSummary { faces: self.faces.iter().map(|f| f.to_string()).collect(), params, residual: params.residual() }
    }

    /// One descriptor per line.
    pub fn to_text(&self) -> String {
        self.faces.iter().map(|f| format!("{f}\n")).collect()
    }

    /// Parses descriptor lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<TRClass, TrError> {
        let faces = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<LatticeFace>, _>>()?;
        TRClass::from_faces(faces)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRecord {
    #[serde(serialize_with = "ser_display")]
    pub added_face: LatticeFace,
    pub delta: Delta,
    /// Matching rows of the addition tables; empty if none match.
    pub case_tags: Vec<u8>,
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(t: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(t)
}

/// All vertex-connected TR classes with 1..=max_faces faces, one per symmetry
/// orbit, sorted by size and then canonical face list.
///
/// Validity is inherited by sub-classes and every vertex-connected class has a
/// face whose removal keeps it connected, so growing level by level from valid
/// classes reaches every class.
pub fn enumerate_tr_classes(max_faces: usize) -> Vec<TRClass> {
    let seeds = [LatticeFace::Triangle(Cell::up(0, 0)), LatticeFace::rhombus(Cell::up(0, 0), 0)];
    let mut level: Vec<TRClass> =
        seeds.iter().map(|&f| TRClass { faces: vec![f] }.canonical()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut all = Vec::new();
    for size in 1..=max_faces {
        all.extend(level.iter().cloned());
        if size == max_faces {
            break;
        }
        let mut next: Vec<TRClass> = level
            .par_iter()
            .flat_map_iter(|cls| {
                cls.legal_additions().into_iter().map(|f| cls.with_face(f).canonical()).collect::<Vec<_>>()
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
    }
    all
}

impl PartialOrd for TRClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TRClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.faces.len().cmp(&other.faces.len()).then_with(|| self.faces.cmp(&other.faces))
    }
}

/// Small named classes with known parameter vectors.
pub fn sample_classes() -> Vec<(&'static str, TRClass)> {
    let t = LatticeFace::triangle;
    let samples = [
        ("triangle-hole", vec![t(0, 0, true), t(0, 1, true), t(1, 0, true)]),
        ("rhombus-hole", vec![t(0, -1, false), t(-1, 0, false), t(0, 1, true), t(1, 0, true)]),
        ("five-triangles", vec![t(0, 0, false), t(0, 0, true), t(0, 1, true), t(0, 2, true), t(1, 1, true)]),
        ("rhombus-pair", vec![LatticeFace::rhombus(Cell::up(0, 0), 0), LatticeFace::rhombus(Cell::up(1, 1), 0)]),
    ];
    samples
        .into_iter()
        .map(|(name, faces)| (name, TRClass::from_faces(faces).expect("sample classes are valid")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRun {
    pub seed: u64,
    pub records: Vec<DeltaRecord>,
    /// True if growth stopped early because no legal face was left.
    pub dead_end: bool,
}

/// Grows a class from nothing by uniformly random legal additions of faces
/// touching the current class. Deterministic in `seed`.
pub fn random_growth(seed: u64, n_faces: usize) -> Result<GrowthRun, TrError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cls = TRClass::new();
    let mut records = Vec::with_capacity(n_faces);
    let first = if rng.gen_bool(0.5) {
        LatticeFace::Triangle(Cell { a: 0, b: 0, up: rng.gen() })
    } else {
        LatticeFace::rhombus(Cell::up(0, 0), rng.gen_range(0..3))
    };
    let mut next = Some(first);
    while records.len() < n_faces {
        let Some(face) = next else {
            return Ok(GrowthRun { seed, records, dead_end: true });
        };
        let (grown, rec) = cls.add_face(face)?;
        cls = grown;
        records.push(rec);
        next = cls.legal_additions().choose(&mut rng).copied();
    }
    Ok(GrowthRun { seed, records, dead_end: false })
}
