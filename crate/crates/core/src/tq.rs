//! TQ faces (unit triangles and 60° rhombi), their edge-sharing classes, and
//! the per-class parameter vector.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::contribution::c_of_gon;
use crate::geometry::{snap_angle, Rational};
use crate::params::ClassParams;
use crate::planar::{FaceArc, PlanarEmbedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TqError {
    #[error("TQ detection needs coordinates")]
    Abstract,
    #[error("vertex {vertex} has degree {degree} > 5")]
    DegreeAbove5 { vertex: usize, degree: usize },
    #[error("outer vertex {vertex} touches {count} outer edges (expected 2 or 4)")]
    OuterEdgeCount { vertex: usize, count: usize },
    #[error("vertex {0} is not in the class")]
    NotInClass(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Normal,
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexTypeInfo {
    pub vertex: usize,
    pub kind: VertexKind,
    /// Components of the auxiliary graph on the class faces at the vertex.
    pub h_components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TQClassRecord {
    pub faces: Vec<usize>,
    pub vertices: Vec<usize>,
    pub inner_edges: Vec<(usize, usize)>,
    pub outer_edges: Vec<(usize, usize)>,
    pub inner_vertices: Vec<usize>,
    pub outer_vertices: Vec<usize>,
    pub special_vertices: Vec<usize>,
    pub params: ClassParams,
    pub prospective: bool,
}

impl TQClassRecord {
    pub fn contains_face(&self, f: usize) -> bool {
        self.faces.binary_search(&f).is_ok()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_outer_edge(&self, u: usize, v: usize) -> bool {
        self.outer_edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn is_class_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.outer_edges.binary_search(&e).is_ok() || self.inner_edges.binary_search(&e).is_ok()
    }

    pub fn is_special(&self, v: usize) -> bool {
        self.special_vertices.binary_search(&v).is_ok()
    }
}

/// Angle of an arc in units of π/6, if it snaps to the lattice.
fn snapped(emb: &PlanarEmbedding, arc: &FaceArc) -> Option<u32> {
    emb.arc_angle(arc).and_then(snap_angle)
}

/// Bounded 3-gons plus bounded 4-gons whose angles are all π/3 or 2π/3.
pub fn detect_tq_faces(emb: &PlanarEmbedding) -> Result<Vec<usize>, TqError> {
    if emb.is_abstract() {
        return Err(TqError::Abstract);
    }
    let mut out = Vec::new();
    for (f, face) in emb.faces().iter().enumerate() {
        if face.outer {
            continue;
        }
        let distinct = emb.face_vertices(f).into_iter().collect::<BTreeSet<_>>().len() == face.gon;
        let tq = match face.gon {
            3 => distinct,
            4 => distinct && emb.face_arcs(f).iter().all(|a| matches!(snapped(emb, a), Some(2) | Some(4))),
            _ => false,
        };
        if tq {
            out.push(f);
        }
    }
    Ok(out)
}

/// Number of cyclic runs of `true` in the slice; a full run counts as one.
pub(crate) fn cyclic_runs(flags: &[bool]) -> usize {
    let n = flags.len();
    if flags.iter().all(|&x| x) {
        return 1;
    }
    (0..n).filter(|&i| flags[i] && !flags[(i + n - 1) % n]).count()
}

/// Builds the full record of the class formed by `faces` (assumed TQ faces).
pub fn class_record(emb: &PlanarEmbedding, faces: &[usize]) -> Result<TQClassRecord, TqError> {
    let mut faces = faces.to_vec();
    faces.sort_unstable();
    let in_class = |f: usize| faces.binary_search(&f).is_ok();

    let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut vertices = BTreeSet::new();
    let mut sigma = Rational::from_integer(0);
    for &f in &faces {
        let gon = emb.face(f).gon;
        sigma += c_of_gon(gon).expect("TQ faces have 3 or 4 sides") * Rational::from_integer(gon as i64);
        for &d in &emb.face(f).darts {
            let (u, v) = emb.dart_ends(d);
            *edge_count.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            vertices.insert(u);
        }
    }
    let inner_edges: Vec<_> = edge_count.iter().filter(|(_, &c)| c == 2).map(|(&e, _)| e).collect();
    let outer_edges: Vec<_> = edge_count.iter().filter(|(_, &c)| c == 1).map(|(&e, _)| e).collect();

    let mut inner_vertices = Vec::new();
    let mut outer_vertices = Vec::new();
    let mut special_vertices = Vec::new();
    let (mut tau, mut b2) = (0i64, 0i64);
    let mut prospective = true;
    for &v in &vertices {
        let degree = emb.degree(v);
        if degree > 5 {
            return Err(TqError::DegreeAbove5 { vertex: v, degree });
        }
        let arcs = emb.arcs_at(v);
        let flags: Vec<bool> = arcs.iter().map(|a| in_class(a.face)).collect();
        let class_degree = emb.rotation(v).iter().filter(|&&w| edge_count.contains_key(&(v.min(w), v.max(w)))).count();
        tau += 5 - class_degree as i64;
        if flags.iter().all(|&x| x) {
            inner_vertices.push(v);
            if degree != 5 {
                prospective = false;
            }
            continue;
        }
        outer_vertices.push(v);
        let outer_at_v = emb.rotation(v).iter().filter(|&&w| edge_count.get(&(v.min(w), v.max(w))) == Some(&1)).count();
        if outer_at_v != 2 && outer_at_v != 4 {
            return Err(TqError::OuterEdgeCount { vertex: v, count: outer_at_v });
        }
        if cyclic_runs(&flags) >= 2 {
            special_vertices.push(v);
        }
        b2 += arcs.iter().zip(&flags).filter(|(a, &c)| c && snapped(emb, a) == Some(4)).count() as i64;
    }

    let params = ClassParams::new(sigma, outer_edges.len() as i64, tau, special_vertices.len() as i64, b2);
    Ok(TQClassRecord {
        faces,
        vertices: vertices.into_iter().collect(),
        inner_edges,
        outer_edges,
        inner_vertices,
        outer_vertices,
        special_vertices,
        params,
        prospective,
    })
}

/// TQ classes: connected components of TQ faces under edge sharing, ordered by
/// smallest member face.
pub fn decompose(emb: &PlanarEmbedding) -> Result<Vec<TQClassRecord>, TqError> {
    let tq = detect_tq_faces(emb)?;
    let is_tq: BTreeSet<usize> = tq.iter().copied().collect();
    let mut uf = UnionFind::<usize>::new(emb.faces().len());
    for &(u, v) in emb.edges() {
        let (f, g) = emb.edge_faces(u, v).expect("edge has darts");
        if f != g && is_tq.contains(&f) && is_tq.contains(&g) {
            uf.union(f, g);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &f in &tq {
        groups.entry(uf.find(f)).or_default().push(f);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    classes.iter().map(|c| class_record(emb, c)).collect()
}

/// (inner, outer) vertices of a class.
pub fn classify_vertices(class: &TQClassRecord) -> (&[usize], &[usize]) {
    (&class.inner_vertices, &class.outer_vertices)
}

pub fn compute_params(class: &TQClassRecord) -> ClassParams {
    class.params
}

pub fn vertex_type(emb: &PlanarEmbedding, class: &TQClassRecord, v: usize) -> Result<VertexTypeInfo, TqError> {
    if !class.contains_vertex(v) {
        return Err(TqError::NotInClass(v));
    }
    let flags: Vec<bool> = emb.arcs_at(v).iter().map(|a| class.contains_face(a.face)).collect();
    let h_components = cyclic_runs(&flags);
    let kind = if h_components >= 2 { VertexKind::Special } else { VertexKind::Normal };
    Ok(VertexTypeInfo { vertex: v, kind, h_components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::geometry::{snap_to_lattice, Point2, SQRT3_2};
    use crate::graph::Graph;

    const EPS: f64 = 1e-9;

    fn emb(g: &Graph) -> PlanarEmbedding {
        g.embed(EPS).unwrap()
    }

    #[test]
    fn detects_triangles_and_rhombi_only() {
        let t = emb(&gallery::triangle());
        assert_eq!(detect_tq_faces(&t).unwrap().len(), 1);
        assert!(detect_tq_faces(&emb(&gallery::square())).unwrap().is_empty());
        assert_eq!(detect_tq_faces(&emb(&gallery::rhombus())).unwrap().len(), 1);
        assert_eq!(detect_tq_faces(&gallery::icosahedron()), Err(TqError::Abstract));
    }

    #[test]
    fn single_face_params() {
        let t = emb(&gallery::triangle());
        let classes = decompose(&t).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].params, ClassParams::from_ints(1, 3, 9, 0, 0));
        assert!(classes[0].inner_vertices.is_empty());
        assert_eq!(classes[0].outer_vertices, vec![0, 1, 2]);

        let r = emb(&gallery::rhombus());
        let classes = decompose(&r).unwrap();
        assert_eq!(classes[0].params, ClassParams::from_ints(-2, 4, 12, 0, 2));
        assert_eq!(classes[0].params.residual(), Rational::from_integer(0));
    }

    #[test]
    fn glued_pair_is_one_class() {
        let g = emb(&gallery::glued_triangles());
        let classes = decompose(&g).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].faces.len(), 2);
        assert_eq!(classes[0].inner_edges, vec![(0, 1)]);
        assert_eq!(classes[0].params.residual(), Rational::from_integer(0));
    }

    /// Two triangles meeting only at vertex 0.
    fn bowtie() -> Graph {
        Graph::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.5, SQRT3_2),
                Point2::new(-1.0, 0.0),
                Point2::new(-0.5, -SQRT3_2),
            ],
            vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
        )
    }

    #[test]
    fn vertex_sharing_triangles_stay_apart() {
        let g = emb(&bowtie());
        let classes = decompose(&g).unwrap();
        assert_eq!(classes.len(), 2);
        for c in &classes {
            assert_eq!(vertex_type(&g, c, 0).unwrap().kind, VertexKind::Normal);
        }
        assert_eq!(vertex_type(&g, &classes[0], 4).unwrap_err(), TqError::NotInClass(4));
    }

    #[test]
    fn hexagonal_wheel_is_rejected() {
        let mut points = vec![Point2::new(0.0, 0.0)];
        for i in 0..6 {
            let t = std::f64::consts::PI / 3.0 * i as f64;
            points.push(Point2::new(t.cos(), t.sin()));
        }
        let mut edges: Vec<_> = (1..=6).map(|i| (0, i)).collect();
        edges.extend((1..=6).map(|i| (i, i % 6 + 1)));
        let g = emb(&Graph::new(points, edges));
        assert_eq!(decompose(&g).unwrap_err(), TqError::DegreeAbove5 { vertex: 0, degree: 6 });
    }

    /// A vertex of degree 5 with four triangles and a rhombus around it,
    /// closed off by a pentagon ring so the centre is an inner vertex.
    #[test]
    fn inner_vertex_of_a_fan() {
        use crate::geometry::{lattice_to_plane, LatticePoint};
        let lp = |a, b| lattice_to_plane(LatticePoint::new(a, b));
        // centre, then the ring (1,0),(0,1),(-1,1),(-1,0),(0,-1); rhombus fills sectors 4 and 5
        let points = vec![lp(0, 0), lp(1, 0), lp(0, 1), lp(-1, 1), lp(-1, 0), lp(0, -1), lp(1, -1)];
        let edges = vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)];
        let g = emb(&Graph::new(points, edges));
        let classes = decompose(&g).unwrap();
        assert_eq!(classes.len(), 1);
        let c = &classes[0];
        assert_eq!(c.inner_vertices, vec![0]);
        assert!(c.prospective);
        assert_eq!(c.params.residual(), Rational::from_integer(0));
        assert_eq!(vertex_type(&g, c, 0).unwrap().kind, VertexKind::Normal);
        let pts: Vec<Point2> = c.vertices.iter().map(|&v| g.point(v).unwrap()).collect();
        assert!(snap_to_lattice(&pts, 1e-6).is_some());
    }

    #[test]
    fn patch_strips_are_classes() {
        let p = crate::patch::periodic_patch(5, 6, &[]).unwrap();
        let g = emb(&p.graph);
        let classes = decompose(&g).unwrap();
        // two triangle strips; the squares join nothing
        assert_eq!(classes.len(), 2);
        for c in &classes {
            assert!(c.faces.iter().all(|&f| g.face(f).gon == 3));
            assert_eq!(c.params.residual(), Rational::from_integer(0));
        }
        // 60° shear turns the square strip into rhombi and merges everything
        let p = crate::patch::periodic_patch(5, 6, &[0, 2, 0, 0]).unwrap();
        let classes = decompose(&emb(&p.graph)).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].params.residual(), Rational::from_integer(0));
    }

    #[test]
    fn runs() {
        assert_eq!(cyclic_runs(&[true, true]), 1);
        assert_eq!(cyclic_runs(&[true, false, true]), 1);
        assert_eq!(cyclic_runs(&[true, false, true, false]), 2);
        assert_eq!(cyclic_runs(&[false, false]), 0);
    }
}
