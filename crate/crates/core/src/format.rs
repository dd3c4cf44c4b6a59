//! The line-oriented `matchstick v1` graph file.
//!
//! ```text
//! matchstick v1            # or: matchstick v1 lattice / matchstick v1 abstract
//! v 0 0 0
//! v 1 1 0
//! e 0 1
//! ```
//!
//! With `lattice`, vertex coordinates are integer axial coordinates. With
//! `abstract`, there are no `v`/`e` lines; each `r <id> <n1> <n2> ...` line gives
//! a vertex's neighbours in counterclockwise order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{lattice_to_plane, LatticePoint, Point2};
use crate::graph::Graph;
use crate::planar::{EmbeddingError, PlanarEmbedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("missing `matchstick v1` header")]
    Header,
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("no vertices")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinates {
    Plane,
    Lattice,
    Abstract,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphFile {
    Drawing { graph: Graph, lattice: Option<Vec<LatticePoint>> },
    Abstract { rotation: Vec<Vec<usize>> },
}

fn line_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Line { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| line_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| line_err(line, format!("bad {what} `{tok}`")))
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or(FormatError::Header)?;
        let mut head = header.split_whitespace();
        if head.next() != Some("matchstick") || head.next() != Some("v1") {
            return Err(FormatError::Header);
        }
        let mode = match head.next() {
            None => Coordinates::Plane,
            Some("lattice") => Coordinates::Lattice,
            Some("abstract") => Coordinates::Abstract,
            Some(other) => return Err(line_err(1, format!("unknown header token `{other}`"))),
        };
        if head.next().is_some() {
            return Err(FormatError::Header);
        }

        let mut points = Vec::new();
        let mut lattice = Vec::new();
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        let mut rotation: Vec<Vec<usize>> = Vec::new();
        for (no, l) in lines {
            let mut tok = l.split_whitespace();
            let kind = tok.next().unwrap_or("");
            match (kind, mode) {
                ("v", Coordinates::Plane | Coordinates::Lattice) => {
                    let id: usize = num(tok.next(), no, "vertex id")?;
                    if id != points.len() {
                        return Err(line_err(no, format!("vertex id {id} out of order, expected {}", points.len())));
                    }
                    if mode == Coordinates::Lattice {
                        let p = LatticePoint::new(num(tok.next(), no, "a")?, num(tok.next(), no, "b")?);
                        lattice.push(p);
                        points.push(lattice_to_plane(p));
                    } else {
                        let x: f64 = num(tok.next(), no, "x")?;
                        let y: f64 = num(tok.next(), no, "y")?;
                        if !x.is_finite() || !y.is_finite() {
                            return Err(line_err(no, "coordinates must be finite"));
                        }
                        points.push(Point2::new(x, y));
                    }
                }
                ("e", Coordinates::Plane | Coordinates::Lattice) => {
                    let i: usize = num(tok.next(), no, "endpoint")?;
                    let j: usize = num(tok.next(), no, "endpoint")?;
                    if i >= points.len() || j >= points.len() {
                        return Err(line_err(no, format!("edge {i}-{j} names an undeclared vertex")));
                    }
                    if !seen.insert((i.min(j), i.max(j))) {
                        return Err(line_err(no, format!("duplicate edge {i}-{j}")));
                    }
                    edges.push((i, j));
                }
                ("r", Coordinates::Abstract) => {
                    let id: usize = num(tok.next(), no, "vertex id")?;
                    if id != rotation.len() {
                        return Err(line_err(no, format!("vertex id {id} out of order, expected {}", rotation.len())));
                    }
                    let nbrs = tok.map(|t| num(Some(t), no, "neighbour")).collect::<Result<Vec<usize>, _>>()?;
                    rotation.push(nbrs);
                }
                _ => return Err(line_err(no, format!("unexpected `{kind}` line"))),
            }
            if tok_rest_nonempty(l, kind) {
                return Err(line_err(no, "trailing tokens"));
            }
        }
        match mode {
            Coordinates::Abstract => {
                if rotation.is_empty() {
                    return Err(FormatError::Empty);
                }
                Ok(GraphFile::Abstract { rotation })
            }
            _ => {
                if points.is_empty() {
                    return Err(FormatError::Empty);
                }
                let lattice = (mode == Coordinates::Lattice).then_some(lattice);
                Ok(GraphFile::Drawing { graph: Graph::new(points, edges), lattice })
            }
        }
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self, GraphFile::Abstract { .. })
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            GraphFile::Drawing { graph, .. } => Some(graph),
            GraphFile::Abstract { .. } => None,
        }
    }

    pub fn embed(&self, eps: f64) -> Result<PlanarEmbedding, EmbeddingError> {
        match self {
            GraphFile::Drawing { graph, .. } => graph.embed(eps),
            GraphFile::Abstract { rotation } => PlanarEmbedding::from_rotation(rotation.clone()),
        }
    }
}

// `v` and `e` lines have fixed arity; `r` lines take everything.
fn tok_rest_nonempty(line: &str, kind: &str) -> bool {
    let n = line.split_whitespace().count();
    match kind {
        "v" => n > 4,
        "e" => n > 3,
        _ => false,
    }
}

/// Plane coordinates in shortest round-trip form.
pub fn write_graph(graph: &Graph) -> String {
    let mut s = String::from("matchstick v1\n");
    for (i, p) in graph.points.iter().enumerate() {
        let _ = writeln!(s, "v {i} {} {}", p.x, p.y);
    }
    for &(i, j) in &graph.edges {
        let _ = writeln!(s, "e {i} {j}");
    }
    s
}

pub fn write_lattice(points: &[LatticePoint], edges: &[(usize, usize)]) -> String {
    let mut s = String::from("matchstick v1 lattice\n");
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(s, "v {i} {} {}", p.a, p.b);
    }
    for &(i, j) in edges {
        let _ = writeln!(s, "e {i} {j}");
    }
    s
}

pub fn write_rotation(rotation: &[Vec<usize>]) -> String {
    let mut s = String::from("matchstick v1 abstract\n");
    for (i, nbrs) in rotation.iter().enumerate() {
        let list: Vec<String> = nbrs.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "r {i} {}", list.join(" "));
    }
    s
}
