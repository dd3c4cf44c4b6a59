//! Combinatorial plane embeddings: rotation system, darts, faces and face arcs.
//!
//! Faces are traced with the face on the left of every dart, so bounded faces
//! run counterclockwise and the outer face clockwise. The outer face is counted
//! like any other face.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{interior_angle, Point2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertices {0} and {1} have coincident coordinates")]
    DuplicateCoordinates(usize, usize),
    #[error("disconnected")]
    Disconnected,
    #[error("rotation system is inconsistent: {0}")]
    BadRotation(String),
    #[error("not a plane embedding: {0}")]
    NotPlane(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct Face {
    /// Boundary darts in traversal order.
    pub darts: Vec<usize>,
    /// Number of boundary edges (length of the boundary walk).
    pub gon: usize,
    pub outer: bool,
}

/// The corner of a face at a vertex.
///
/// The arc lies between the edges `vertex-prev_nbr` and `vertex-next_nbr`,
/// sweeping counterclockwise from `prev_nbr` to `next_nbr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceArc {
    pub vertex: usize,
    pub face: usize,
    /// Dart entering `vertex` along the face boundary.
    pub incoming: usize,
    pub prev_nbr: usize,
    pub next_nbr: usize,
}

#[derive(Debug, Clone)]
pub struct PlanarEmbedding {
    coords: Option<Vec<Point2>>,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    dart_from: Vec<usize>,
    dart_to: Vec<usize>,
    dart_lookup: HashMap<(usize, usize), usize>,
    next: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Face>,
    outer: usize,
}

fn normalized_edges(n: usize, edges: &[(usize, usize)]) -> Result<Vec<(usize, usize)>, EmbeddingError> {
    let mut out = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u >= n {
            return Err(EmbeddingError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(EmbeddingError::VertexOutOfRange(v));
        }
        if u == v {
            return Err(EmbeddingError::SelfLoop(u));
        }
        out.push((u.min(v), u.max(v)));
    }
    out.sort_unstable();
    for w in out.windows(2) {
        if w[0] == w[1] {
            return Err(EmbeddingError::DuplicateEdge(w[0].0, w[0].1));
        }
    }
    Ok(out)
}

fn is_connected(rotation: &[Vec<usize>]) -> bool {
    let n = rotation.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &rotation[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

impl PlanarEmbedding {
    /// Builds the embedding induced by straight-line unit drawings.
    ///
    /// The rotation at each vertex is the angular order of its edges; the outer
    /// face is the unique face of negative signed area.
    pub fn from_coordinates(points: Vec<Point2>, edges: &[(usize, usize)], eps: f64) -> Result<Self, EmbeddingError> {
        let n = points.len();
        if n == 0 {
            return Err(EmbeddingError::Empty);
        }
        let edges = normalized_edges(n, edges)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if points[i].dist(points[j]) <= eps {
                    return Err(EmbeddingError::DuplicateCoordinates(i, j));
                }
            }
        }
        let mut rotation = vec![Vec::new(); n];
        for &(u, v) in &edges {
            rotation[u].push(v);
            rotation[v].push(u);
        }
        for (v, nbrs) in rotation.iter_mut().enumerate() {
            nbrs.sort_by(|&a, &b| {
                let ha = (points[a] - points[v]).heading();
                let hb = (points[b] - points[v]).heading();
                ha.total_cmp(&hb).then(a.cmp(&b))
            });
        }
        let mut emb = Self::assemble(Some(points), edges, rotation)?;
        emb.mark_outer_by_area(eps)?;
        Ok(emb)
    }

    /// Builds an embedding from an explicit counterclockwise rotation system.
    ///
    /// Without coordinates there is no distinguished unbounded face; the face
    /// containing dart 0 is marked outer by convention.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self, EmbeddingError> {
        let n = rotation.len();
        if n == 0 {
            return Err(EmbeddingError::Empty);
        }
        let mut edges = Vec::new();
        for (u, nbrs) in rotation.iter().enumerate() {
            for &v in nbrs {
                if v >= n {
                    return Err(EmbeddingError::VertexOutOfRange(v));
                }
                if !rotation[v].contains(&u) {
                    return Err(EmbeddingError::BadRotation(format!(
                        "edge {u}-{v} is not mirrored in the rotation of {v}"
                    )));
                }
                if u < v {
                    edges.push((u, v));
                }
                if u == v {
                    return Err(EmbeddingError::SelfLoop(u));
                }
            }
        }
        let edges = normalized_edges(n, &edges)?;
        let mut emb = Self::assemble(None, edges, rotation)?;
        if !emb.faces.is_empty() {
            emb.outer = emb.face_of[0];
            emb.faces[emb.outer].outer = true;
        }
        Ok(emb)
    }

    fn assemble(
        coords: Option<Vec<Point2>>,
        edges: Vec<(usize, usize)>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self, EmbeddingError> {
        let n = rotation.len();
        if !is_connected(&rotation) {
            return Err(EmbeddingError::Disconnected);
        }
        let mut dart_from = Vec::new();
        let mut dart_to = Vec::new();
        let mut dart_lookup = HashMap::new();
        for (u, nbrs) in rotation.iter().enumerate() {
            for &v in nbrs {
                if dart_lookup.insert((u, v), dart_from.len()).is_some() {
                    return Err(EmbeddingError::DuplicateEdge(u.min(v), u.max(v)));
                }
                dart_from.push(u);
                dart_to.push(v);
            }
        }
        let nd = dart_from.len();
        let mut next = vec![0; nd];
        for d in 0..nd {
            let (u, v) = (dart_from[d], dart_to[d]);
            let rv = &rotation[v];
            let j = rv.iter().position(|&x| x == u).expect("mirrored rotation");
            let w = rv[(j + rv.len() - 1) % rv.len()];
            next[d] = dart_lookup[&(v, w)];
        }
        let mut face_of = vec![usize::MAX; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if face_of[start] != usize::MAX {
                continue;
            }
            let fid = faces.len();
            let mut darts = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = fid;
                darts.push(d);
                d = next[d];
                if d == start {
                    break;
                }
            }
            let gon = darts.len();
            faces.push(Face { darts, gon, outer: false });
        }
        if nd == 0 {
            faces.push(Face { darts: Vec::new(), gon: 0, outer: true });
        }
        let v = n as i64;
        let e = edges.len() as i64;
        let f = faces.len() as i64;
        if v - e + f != 2 {
            return Err(EmbeddingError::NotPlane(format!("Euler characteristic V-E+F = {} (expected 2)", v - e + f)));
        }
        Ok(PlanarEmbedding { coords, edges, rotation, dart_from, dart_to, dart_lookup, next, face_of, faces, outer: 0 })
    }

    fn mark_outer_by_area(&mut self, eps: f64) -> Result<(), EmbeddingError> {
        if self.faces.len() == 1 {
            self.outer = 0;
            self.faces[0].outer = true;
            return Ok(());
        }
        let negative: Vec<usize> =
            (0..self.faces.len()).filter(|&f| self.signed_area(f).is_some_and(|a| a < -eps)).collect();
        match negative.as_slice() {
            [f] => {
                self.outer = *f;
                self.faces[*f].outer = true;
                Ok(())
            }
            [] => Err(EmbeddingError::NotPlane("no face with negative area".into())),
            _ => Err(EmbeddingError::NotPlane(format!("{} faces with negative area", negative.len()))),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    pub fn coords(&self) -> Option<&[Point2]> {
        self.coords.as_deref()
    }

    pub fn is_abstract(&self) -> bool {
        self.coords.is_none()
    }

    pub fn point(&self, v: usize) -> Option<Point2> {
        self.coords.as_ref().map(|c| c[v])
    }

    /// Neighbors of `v` in counterclockwise order.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.rotation.iter().all(|n| n.len() == r)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.dart_lookup.contains_key(&(u, v))
    }

    pub fn dart(&self, u: usize, v: usize) -> Option<usize> {
        self.dart_lookup.get(&(u, v)).copied()
    }

    pub fn dart_ends(&self, d: usize) -> (usize, usize) {
        (self.dart_from[d], self.dart_to[d])
    }

    pub fn dart_count(&self) -> usize {
        self.dart_from.len()
    }

    pub fn next_dart(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn twin(&self, d: usize) -> usize {
        self.dart_lookup[&(self.dart_to[d], self.dart_from[d])]
    }

    /// Face on the left of the dart.
    pub fn face_of_dart(&self, d: usize) -> usize {
        self.face_of[d]
    }

    /// The two faces on either side of edge `u-v`: left of `u->v`, then left of `v->u`.
    pub fn edge_faces(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        Some((self.face_of[self.dart(u, v)?], self.face_of[self.dart(v, u)?]))
    }

    /// Face vertices in boundary order.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].darts.iter().map(|&d| self.dart_from[d]).collect()
    }

    /// Face arcs at `v` in counterclockwise order around `v`.
    pub fn arcs_at(&self, v: usize) -> Vec<FaceArc> {
        let rot = &self.rotation[v];
        let k = rot.len();
        (0..k)
            .map(|j| {
                let u = rot[j];
                let incoming = self.dart_lookup[&(u, v)];
                FaceArc {
                    vertex: v,
                    face: self.face_of[incoming],
                    incoming,
                    prev_nbr: rot[(j + k - 1) % k],
                    next_nbr: u,
                }
            })
            .collect()
    }

    /// The arcs of face `f`, one per boundary dart, in boundary order.
    pub fn face_arcs(&self, f: usize) -> Vec<FaceArc> {
        self.faces[f]
            .darts
            .iter()
            .map(|&d| FaceArc {
                vertex: self.dart_to[d],
                face: f,
                incoming: d,
                prev_nbr: self.dart_to[self.next[d]],
                next_nbr: self.dart_from[d],
            })
            .collect()
    }

    /// Every face arc of the embedding, grouped by vertex.
    pub fn all_arcs(&self) -> Vec<FaceArc> {
        (0..self.vertex_count()).flat_map(|v| self.arcs_at(v)).collect()
    }

    /// Angle of the arc inside its face. Requires coordinates.
    pub fn arc_angle(&self, arc: &FaceArc) -> Option<f64> {
        let c = self.coords.as_ref()?;
        interior_angle(c[arc.prev_nbr], c[arc.vertex], c[arc.next_nbr]).ok()
    }

    /// Shoelace area of the boundary walk; positive for counterclockwise faces.
    pub fn signed_area(&self, f: usize) -> Option<f64> {
        let c = self.coords.as_ref()?;
        let twice: f64 = self.faces[f].darts.iter().map(|&d| c[self.dart_from[d]].cross(c[self.dart_to[d]])).sum();
        Some(twice / 2.0)
    }

    /// `F_i` counts, including the outer face.
    pub fn face_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for f in &self.faces {
            *h.entry(f.gon).or_insert(0) += 1;
        }
        h
    }

    /// Sorted gon counts of the faces around `v`, one entry per face arc.
    pub fn face_set(&self, v: usize) -> Result<Vec<usize>, EmbeddingError> {
        if v >= self.vertex_count() {
            return Err(EmbeddingError::VertexOutOfRange(v));
        }
        let mut fs: Vec<usize> = self.arcs_at(v).iter().map(|a| self.faces[a.face].gon).collect();
        fs.sort_unstable();
        Ok(fs)
    }

    /// Whether some arc at `v` belongs to the outer face.
    pub fn on_outer_face(&self, v: usize) -> bool {
        self.arcs_at(v).iter().any(|a| a.face == self.outer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use proptest::prelude::*;

    #[test]
    fn triangle_faces() {
        let g = gallery::triangle();
        let emb = g.embed(1e-9).unwrap();
        assert_eq!(emb.faces().len(), 2);
        assert_eq!(emb.faces().iter().filter(|f| f.outer).count(), 1);
        assert_eq!(emb.face_histogram(), BTreeMap::from([(3, 2)]));
        assert_eq!(emb.face_set(0).unwrap(), vec![3, 3]);
        assert_eq!(emb.degree(0), 2);
        let inner = (0..2).find(|&f| !emb.face(f).outer).unwrap();
        assert!(emb.signed_area(inner).unwrap() > 0.0);
    }

    #[test]
    fn rhombus_and_glued_pair() {
        let emb = gallery::rhombus().embed(1e-9).unwrap();
        assert_eq!(emb.face_histogram(), BTreeMap::from([(4, 2)]));

        let emb = gallery::glued_triangles().embed(1e-9).unwrap();
        assert_eq!(emb.face_histogram(), BTreeMap::from([(3, 2), (4, 1)]));
        assert_eq!(emb.face(emb.outer_face()).gon, 4);
        // apexes 2 and 3 are the vertices off the shared edge 0-1
        assert_eq!(emb.face_set(2).unwrap(), vec![3, 4]);
        assert_eq!(emb.face_set(0).unwrap(), vec![3, 3, 4]);
    }

    #[test]
    fn mixed_wheel_counts() {
        let emb = gallery::mixed_wheel().embed(1e-9).unwrap();
        assert_eq!(emb.face_histogram(), BTreeMap::from([(3, 3), (4, 2), (7, 1)]));
        assert_eq!(emb.face_set(0).unwrap(), vec![3, 3, 3, 4, 4]);
    }

    #[test]
    fn icosahedron_is_five_regular() {
        let emb = gallery::icosahedron();
        assert!(emb.is_regular(5));
        assert!(emb.is_abstract());
        assert_eq!(emb.face_histogram(), BTreeMap::from([(3, 20)]));
    }

    #[test]
    fn path_is_not_one_regular() {
        let emb = gallery::path(2).embed(1e-9).unwrap();
        assert!(!emb.is_regular(1));
        assert_eq!(emb.faces().len(), 1);
        assert_eq!(emb.face(0).gon, 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(5.0, 0.0)];
        assert_eq!(
            PlanarEmbedding::from_coordinates(pts.clone(), &[(0, 1)], 1e-9).unwrap_err(),
            EmbeddingError::Disconnected
        );
        assert_eq!(
            PlanarEmbedding::from_coordinates(pts.clone(), &[(0, 1), (1, 0)], 1e-9).unwrap_err(),
            EmbeddingError::DuplicateEdge(0, 1)
        );
        let dup = vec![Point2::new(0.0, 0.0), Point2::new(0.0, 0.0)];
        assert_eq!(
            PlanarEmbedding::from_coordinates(dup, &[(0, 1)], 1e-9).unwrap_err(),
            EmbeddingError::DuplicateCoordinates(0, 1)
        );
        // K4 drawn with a crossing is not a plane embedding
        let sq = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)];
        let k4 = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)];
        assert!(matches!(PlanarEmbedding::from_coordinates(sq, &k4, 1e-9), Err(EmbeddingError::NotPlane(_))));
        // K5 has no planar rotation system
        let k5: Vec<Vec<usize>> = (0..5).map(|v| (0..5).filter(|&w| w != v).collect()).collect();
        assert!(matches!(PlanarEmbedding::from_rotation(k5), Err(EmbeddingError::NotPlane(_))));
    }

    fn check_identities(emb: &PlanarEmbedding) -> Result<(), TestCaseError> {
        let v = emb.vertex_count();
        let e = emb.edge_count();
        let f = emb.faces().len();
        prop_assert_eq!(v as i64 - e as i64 + f as i64, 2);
        let weighted: usize = emb.face_histogram().iter().map(|(g, c)| g * c).sum();
        prop_assert_eq!(weighted, 2 * e);
        let arcs: usize = (0..v).map(|x| emb.face_set(x).unwrap().len()).sum();
        prop_assert_eq!(arcs, 2 * e);
        let mut seen = vec![0; emb.dart_count()];
        for face in emb.faces() {
            for &d in &face.darts {
                seen[d] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
        Ok(())
    }

    proptest! {
        #[test]
        fn random_rotation_systems_satisfy_euler(seed in 0u64..200, copies in 1usize..4) {
            let emb = gallery::random_five_regular(seed, copies);
            prop_assert!(emb.is_regular(5));
            check_identities(&emb)?;
            let faces: usize = emb.face_histogram().iter().map(|(g, c)| g * c).sum();
            prop_assert_eq!(faces, 5 * emb.vertex_count());
        }

        #[test]
        fn lattice_patches_satisfy_euler(rows in 3usize..6, cols in 3usize..7) {
            let g = crate::patch::periodic_patch(rows, cols, &[]).unwrap().graph;
            check_identities(&g.embed(1e-9).unwrap())?;
        }
    }
}
