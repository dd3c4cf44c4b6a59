//! Lattice matchstick graphs grown around small TR classes, for exercising the
//! discharging ledgers on many evaluable classes.
//!
//! For a class C the window is every lattice point within distance 2 of a class
//! vertex, with all lattice edges except rhombus diagonals. Each class vertex
//! drops lattice edges until it has degree 5; every way of choosing them is
//! tried. The rest of the window is repaired by removing edges not touching the
//! class: a triangle or rhombus face across a class edge is merged with a
//! neighbouring cell (every choice is explored), and a vertex of degree 6 loses
//! the edge pointing farthest from the class. Every resulting connected graph is
//! decomposed and each evaluable class gets a full ledger.

use std::collections::{BTreeMap, HashMap, HashSet};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{LatticePoint, Rational};
use crate::graph::Graph;
use crate::tq::decompose;
use crate::tr::{enumerate_tr_classes, Cell, TRClass};
use crate::weights::{class_contribution_bound, union_contribution_bound, ArcKind, WeightError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    /// Largest class (in faces) used as a seed.
    pub max_faces: usize,
    /// Only keep graphs with at most this many vertices.
    pub max_vertices: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { max_faces: 2, max_vertices: usize::MAX }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed_classes: usize,
    pub patterns: usize,
    pub graphs: usize,
    pub disconnected: usize,
    /// Ledgers built and audited.
    pub ledgers: usize,
    pub overlaps: usize,
    pub smallest_graph: Option<usize>,
    /// Arc kinds seen across all ledgers.
    pub arc_kinds: BTreeMap<String, usize>,
    /// Largest Σω seen; never positive when the audit holds.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub max_omega: Option<Rational>,
    pub failures: Vec<String>,
}

impl SweepReport {
    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.seed_classes += other.seed_classes;
        self.patterns += other.patterns;
        self.graphs += other.graphs;
        self.disconnected += other.disconnected;
        self.ledgers += other.ledgers;
        self.overlaps += other.overlaps;
        self.smallest_graph = match (self.smallest_graph, other.smallest_graph) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (k, v) in other.arc_kinds {
            *self.arc_kinds.entry(k).or_default() += v;
        }
        self.max_omega = match (self.max_omega, other.max_omega) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.failures.extend(other.failures);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Cell(usize),
    Class,
    Outside,
}

fn lattice_distance(p: LatticePoint, q: LatticePoint) -> i64 {
    let (da, db) = (p.a - q.a, p.b - q.b);
    da.abs().max(db.abs()).max((da + db).abs())
}

struct Window {
    points: Vec<LatticePoint>,
    edges: Vec<(usize, usize)>,
    sides: Vec<[Side; 2]>,
    edge_index: HashMap<(usize, usize), usize>,
    cells: Vec<Cell>,
    class_vertices: Vec<usize>,
    /// Non-class cell across each class outer edge.
    across: Vec<usize>,
    /// Window cells around each class vertex.
    sectors: Vec<Vec<Side>>,
    protected: Vec<bool>,
    reach: Vec<i64>,
}

impl Window {
    fn new(class: &TRClass) -> Option<Window> {
        let class_pts = class.vertices();
        let mut points: Vec<LatticePoint> = Vec::new();
        let mut seen = HashSet::new();
        for &v in &class_pts {
            for da in -2..=2 {
                for db in -2..=2 {
                    let q = LatticePoint::new(v.a + da, v.b + db);
                    if lattice_distance(v, q) <= 2 && seen.insert(q) {
                        points.push(q);
                    }
                }
            }
        }
        points.sort();
        let index: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let class_cells: HashSet<Cell> = class.faces().iter().flat_map(|f| f.cells()).collect();
        let diagonals: HashSet<(LatticePoint, LatticePoint)> = class.diagonals().into_iter().collect();
        let mut cells = Vec::new();
        let mut cell_index = HashMap::new();
        for &p in &points {
            for up in [true, false] {
                let c = Cell { a: p.a, b: p.b, up };
                if !class_cells.contains(&c) && c.corners().iter().all(|q| index.contains_key(q)) {
                    cell_index.insert(c, cells.len());
                    cells.push(c);
                }
            }
        }
        let side_of = |c: Cell| {
            if class_cells.contains(&c) {
                Side::Class
            } else {
                cell_index.get(&c).map_or(Side::Outside, |&i| Side::Cell(i))
            }
        };
        let mut edges = Vec::new();
        let mut sides = Vec::new();
        for (i, &p) in points.iter().enumerate() {
            for d in 0..3 {
                let q = p.step(d);
                let Some(&j) = index.get(&q) else { continue };
                if diagonals.contains(&(p.min(q), p.max(q))) {
                    continue;
                }
                edges.push((i, j));
                sides.push([side_of(Cell::at_sector(p, d)), side_of(Cell::at_sector(p, (d + 5) % 6))]);
            }
        }
        let edge_index = edges.iter().enumerate().map(|(e, &(i, j))| ((i.min(j), i.max(j)), e)).collect();
        let class_vertices: Vec<usize> = class_pts.iter().map(|p| index[p]).collect();
        let mut across = Vec::new();
        for (p, q) in class.class_edges() {
            let d = p.direction_to(q).expect("lattice edge");
            for s in [Cell::at_sector(p, d), Cell::at_sector(p, (d + 5) % 6)] {
                match side_of(s) {
                    Side::Cell(c) => across.push(c),
                    Side::Outside => return None,
                    Side::Class => {}
                }
            }
        }
        let sectors = class_pts.iter().map(|&p| (0..6).map(|s| side_of(Cell::at_sector(p, s))).collect()).collect();
        let is_class: HashSet<usize> = class_vertices.iter().copied().collect();
        let protected = edges.iter().map(|&(i, j)| is_class.contains(&i) || is_class.contains(&j)).collect();
        let reach =
            points.iter().map(|&q| class_pts.iter().map(|&v| lattice_distance(v, q)).min().unwrap_or(0)).collect();
        Some(Window { points, edges, sides, edge_index, cells, class_vertices, across, sectors, protected, reach })
    }

    fn edge(&self, p: LatticePoint, q: LatticePoint) -> Option<usize> {
        let i = self.points.binary_search(&p).ok()?;
        let j = self.points.binary_search(&q).ok()?;
        self.edge_index.get(&(i.min(j), i.max(j))).copied()
    }

    /// Union-find over cells plus an outside node, merged across absent edges.
    fn regions(&self, present: &[bool]) -> (UnionFind<usize>, Vec<usize>) {
        let outside = self.cells.len();
        let mut uf = UnionFind::new(outside + 1);
        for (e, s) in self.sides.iter().enumerate() {
            if present[e] {
                continue;
            }
            let node = |side: Side| match side {
                Side::Cell(c) => Some(c),
                Side::Outside => Some(outside),
                Side::Class => None,
            };
            if let (Some(a), Some(b)) = (node(s[0]), node(s[1])) {
                uf.union(a, b);
            }
        }
        let mut size = vec![0; outside + 1];
        for c in 0..outside {
            size[uf.find(c)] += 1;
        }
        (uf, size)
    }

    fn degrees(&self, present: &[bool]) -> Vec<usize> {
        let mut deg = vec![0; self.points.len()];
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            if present[e] {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
        deg
    }

    /// Removes edges from degree-6 vertices away from the class; false if stuck.
    fn fix_degrees(&self, present: &mut [bool]) -> bool {
        loop {
            let deg = self.degrees(present);
            let Some(p) = (0..self.points.len()).find(|&p| deg[p] > 5) else { return true };
            let pick = (0..self.edges.len())
                .filter(|&e| present[e] && !self.protected[e] && (self.edges[e].0 == p || self.edges[e].1 == p))
                .max_by_key(|&e| {
                    let (i, j) = self.edges[e];
                    let other = if i == p { j } else { i };
                    (self.reach[other], std::cmp::Reverse(e))
                });
            match pick {
                Some(e) => present[e] = false,
                None => return false,
            }
        }
    }

    fn graph(&self, present: &[bool]) -> Graph {
        let deg = self.degrees(present);
        let keep: Vec<usize> = (0..self.points.len()).filter(|&p| deg[p] > 0).collect();
        let mut new_index = vec![usize::MAX; self.points.len()];
        for (k, &p) in keep.iter().enumerate() {
            new_index[p] = k;
        }
        let points: Vec<LatticePoint> = keep.iter().map(|&p| self.points[p]).collect();
        let edges = (0..self.edges.len())
            .filter(|&e| present[e])
            .map(|e| (new_index[self.edges[e].0], new_index[self.edges[e].1]))
            .collect();
        Graph::from_lattice(&points, edges)
    }
}

enum Node {
    Dead,
    /// A finished graph, plus optional merges that enlarge faces at class vertices.
    Leaf(Vec<usize>),
    Branch(Vec<usize>),
}

/// Faces at class vertices may grow to this many cells.
const MAX_FACE_CELLS: usize = 4;

fn inspect(w: &Window, present: &mut [bool]) -> Node {
    if !w.fix_degrees(present) {
        return Node::Dead;
    }
    let (uf, size) = w.regions(present);
    let outside = w.cells.len();
    for sectors in &w.sectors {
        for s in sectors {
            match *s {
                Side::Cell(c) if uf.equiv(c, outside) => return Node::Dead,
                Side::Outside => return Node::Dead,
                _ => {}
            }
        }
    }
    for &c in &w.across {
        let root = uf.find(c);
        if size[root] > 2 {
            continue;
        }
        let fixes: Vec<usize> = (0..w.edges.len())
            .filter(|&e| present[e] && !w.protected[e])
            .filter(|&e| {
                let inside = |s: Side| matches!(s, Side::Cell(x) if uf.find(x) == root);
                let [a, b] = w.sides[e];
                inside(a) != inside(b)
            })
            .collect();
        return if fixes.is_empty() { Node::Dead } else { Node::Branch(fixes) };
    }
    let near: HashSet<usize> = w
        .sectors
        .iter()
        .flatten()
        .filter_map(|s| match *s {
            Side::Cell(c) => Some(uf.find(c)),
            _ => None,
        })
        .collect();
    let growth = (0..w.edges.len())
        .filter(|&e| present[e] && !w.protected[e])
        .filter(|&e| match w.sides[e] {
            [Side::Cell(a), Side::Cell(b)] => {
                let (ra, rb) = (uf.find(a), uf.find(b));
                ra != rb && (near.contains(&ra) || near.contains(&rb)) && size[ra] + size[rb] <= MAX_FACE_CELLS
            }
            _ => false,
        })
        .collect();
    Node::Leaf(growth)
}

/// Edge removals at class vertices that leave each of them with degree 5.
fn patterns(class: &TRClass, w: &Window) -> Vec<Vec<usize>> {
    let mut options: Vec<Vec<Option<usize>>> = Vec::new();
    let class_edges: HashSet<usize> = class.class_edges().iter().filter_map(|&(p, q)| w.edge(p, q)).collect();
    for &v in &w.class_vertices {
        let p = w.points[v];
        let free: Vec<usize> =
            (0..6).filter_map(|d| w.edge(p, p.step(d))).filter(|e| !class_edges.contains(e)).collect();
        let degree = class_edges.iter().filter(|&&e| w.edges[e].0 == v || w.edges[e].1 == v).count() + free.len();
        match degree {
            5 => options.push(vec![None]),
            6 => options.push(free.into_iter().map(Some).collect()),
            _ => return Vec::new(),
        }
    }
    let mut out = vec![Vec::new()];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                opts.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.extend(o.iter().copied());
                    next
                })
            })
            .collect();
    }
    for p in &mut out {
        p.sort_unstable();
        p.dedup();
    }
    out.sort();
    out.dedup();
    out
}

fn sweep_class(class: &TRClass, cfg: &SweepConfig) -> SweepReport {
    let mut report = SweepReport { seed_classes: 1, ..SweepReport::default() };
    let Some(w) = Window::new(class) else { return report };
    let mut leaves: HashSet<Vec<bool>> = HashSet::new();
    for removal in patterns(class, &w) {
        report.patterns += 1;
        let mut start = vec![true; w.edges.len()];
        for e in removal {
            start[e] = false;
        }
        let mut visited = HashSet::new();
        let mut stack = vec![start];
        while let Some(mut state) = stack.pop() {
            if !visited.insert(state.clone()) {
                continue;
            }
            match inspect(&w, &mut state) {
                Node::Dead => {}
                Node::Leaf(growth) => {
                    for e in growth {
                        let mut child = state.clone();
                        child[e] = false;
                        stack.push(child);
                    }
                    leaves.insert(state);
                }
                Node::Branch(fixes) => {
                    for e in fixes {
                        let mut child = state.clone();
                        child[e] = false;
                        stack.push(child);
                    }
                }
            }
        }
    }
    let mut leaves: Vec<Vec<bool>> = leaves.into_iter().collect();
    leaves.sort();
    for state in leaves {
        let g = w.graph(&state);
        if g.vertex_count() > cfg.max_vertices {
            continue;
        }
        let Ok(emb) = g.embed(1e-9) else {
            report.disconnected += 1;
            continue;
        };
        report.graphs += 1;
        let classes = match decompose(&emb) {
            Ok(c) => c,
            Err(e) => {
                report.failures.push(format!("{}: decomposition failed: {e}", class_label(class)));
                continue;
            }
        };
        let mut ledgers = Vec::new();
        for cls in &classes {
            match class_contribution_bound(&emb, cls) {
                Ok((_, ledger)) => ledgers.push((cls, ledger)),
                Err(WeightError::NotEvaluable { .. } | WeightError::NotProspective) => {}
                Err(e) => report.failures.push(format!("{} in {} vertices: {e}", class_label(class), g.vertex_count())),
            }
        }
        if ledgers.is_empty() {
            continue;
        }
        report.smallest_graph = Some(report.smallest_graph.map_or(g.vertex_count(), |s| s.min(g.vertex_count())));
        for (_, ledger) in &ledgers {
            report.ledgers += 1;
            report.max_omega = Some(report.max_omega.map_or(ledger.total, |m| m.max(ledger.total)));
            for arc in &ledger.arcs {
                *report.arc_kinds.entry(arc_kind_label(&arc.kind)).or_default() += 1;
            }
        }
        let pairs: Vec<_> = ledgers.iter().map(|(c, l)| (*c, l)).collect();
        match union_contribution_bound(&emb, &pairs) {
            Ok(u) => report.overlaps += u.overlaps.len(),
            Err(e) => report.failures.push(format!("{}: union bound: {e}", class_label(class))),
        }
    }
    report
}

fn class_label(class: &TRClass) -> String {
    class.faces().iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
}

fn arc_kind_label(kind: &ArcKind) -> String {
    match kind {
        ArcKind::Inner => "inner".into(),
        ArcKind::DoubleLeaving => "double-leaving".into(),
        ArcKind::Hole { gon } => format!("hole-{gon}"),
        ArcKind::Path { case, .. } => format!("case-{case}"),
    }
}

/// Runs the sweep over every edge-connected TR class with up to `max_faces` faces.
pub fn discharge_sweep(cfg: SweepConfig) -> SweepReport {
    let seeds: Vec<TRClass> = enumerate_tr_classes(cfg.max_faces).into_iter().filter(TRClass::dual_connected).collect();
    sweep_classes(&seeds, cfg)
}

pub fn sweep_classes(seeds: &[TRClass], cfg: SweepConfig) -> SweepReport {
    seeds
        .par_iter()
        .map(|c| sweep_class(c, &cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(SweepReport::default(), SweepReport::merge)
}
