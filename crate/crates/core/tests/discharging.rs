use matchstick_core::contribution::{c_of_vertices, vertex_contribution};
use matchstick_core::gallery;
use matchstick_core::geometry::{Point2, Rational};
use matchstick_core::graph::Graph;
use matchstick_core::planar::PlanarEmbedding;
use matchstick_core::tq::{decompose, TQClassRecord};
use matchstick_core::weights::{
    check_evaluable, class_contribution_bound, overlap_check, union_contribution_bound, ArcKind, PathCase, WeightError,
    WeightLedger,
};

const EPS: f64 = 1e-9;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ledgers(emb: &PlanarEmbedding) -> Vec<(TQClassRecord, WeightLedger)> {
    decompose(emb)
        .unwrap()
        .into_iter()
        .filter_map(|c| class_contribution_bound(emb, &c).ok().map(|(_, l)| (c, l)))
        .collect()
}

fn assert_ledger_invariants(ledger: &WeightLedger) {
    for a in &ledger.arcs {
        assert!(a.omega >= a.c, "ω {} < c {} at vertex {}", a.omega, a.c, a.vertex);
    }
    for s in &ledger.steps {
        assert!(s.residual <= r(0, 1), "step {} ({}) residual {}", s.step, s.label, s.residual);
    }
    let last = ledger.steps.last().unwrap();
    assert_eq!((last.k, last.t), (r(0, 1), r(0, 1)));
    assert!(last.b1 >= 0);
    assert!(ledger.total <= r(0, 1));
}

#[test]
fn hexagonal_hole_ring() {
    let g = gallery::hexagon_ring();
    assert!(g.validate(EPS).valid);
    let emb = g.embed(EPS).unwrap();
    assert_eq!(emb.face_histogram().get(&6), Some(&1));

    let classes = decompose(&emb).unwrap();
    let ring = classes.iter().find(|c| c.faces.len() == 18).expect("ring class");
    assert!(ring.prospective);
    check_evaluable(&emb, ring).unwrap();

    let (bound, ledger) = class_contribution_bound(&emb, ring).unwrap();
    assert_ledger_invariants(&ledger);
    assert_eq!(bound.c_class, c_of_vertices(&emb, &ring.vertices).unwrap());
    assert!(bound.c_class <= bound.omega);

    let cycles = &ledger.cycles.cycles;
    assert_eq!(cycles.len(), 2);
    let hole = cycles.iter().find(|c| c.hole_face.is_some()).unwrap();
    assert_eq!((hole.vertices.len(), hole.leaving_half_edges), (6, 0));
    let outer = cycles.iter().find(|c| c.hole_face.is_none()).unwrap();
    assert_eq!((outer.vertices.len(), outer.leaving_half_edges), (12, 18));

    let holes: Vec<_> = ledger.arcs.iter().filter(|a| matches!(a.kind, ArcKind::Hole { gon: 6 })).collect();
    assert_eq!(holes.len(), 6);
    assert!(holes.iter().all(|a| a.omega == r(-4, 3) && a.c == r(-4, 3)));
    let paths = ledger.arcs.iter().filter(|a| matches!(a.kind, ArcKind::Path { case: PathCase::One, .. }));
    assert!(paths.clone().all(|a| a.omega == r(-1, 2) && a.gon == 5));
    assert_eq!(paths.count(), 24);
    assert!(ledger.booked_special.is_empty());
}

#[test]
fn shared_vertex_overlap() {
    let emb = gallery::shared_vertex().embed(EPS).unwrap();
    let found = ledgers(&emb);
    assert_eq!(found.len(), 2);
    let (a, b) = (&found[0], &found[1]);
    assert!(a.0.contains_vertex(0) && b.0.contains_vertex(0));
    assert!(a.0.inner_edges.iter().chain(&a.0.outer_edges).all(|e| !b.0.is_class_edge(e.0, e.1)));

    let report = overlap_check(&emb, (&a.0, &a.1), (&b.0, &b.1), 0).unwrap();
    assert!(report.holds);
    assert_eq!(report.c, vertex_contribution(&emb, 0).unwrap());
    assert_eq!(report.c, r(-1, 1));
    assert_eq!(report.omega_sum, a.1.omega_at(0) + b.1.omega_at(0));

    // The two ledgers each cover all five arcs at 0; only the class-side arcs are shared.
    assert_eq!(a.1.arcs_at(0).count(), 5);
    assert_eq!(b.1.arcs_at(0).count(), 5);

    let union = union_contribution_bound(&emb, &[(&a.0, &a.1), (&b.0, &b.1)]).unwrap();
    let mut all: Vec<usize> = a.0.vertices.iter().chain(&b.0.vertices).copied().collect();
    all.sort_unstable();
    all.dedup();
    assert_eq!(union.c_union, c_of_vertices(&emb, &all).unwrap());
    assert_eq!(union.overlaps.len(), 1);
    assert!(union.c_union <= union.omega_total && union.omega_total <= r(0, 1));
}

#[test]
fn overlap_needs_a_shared_vertex() {
    let emb = gallery::shared_vertex().embed(EPS).unwrap();
    let found = ledgers(&emb);
    let (a, b) = (&found[0], &found[1]);
    let only_a = *a.0.vertices.iter().find(|&&v| !b.0.contains_vertex(v)).unwrap();
    assert_eq!(overlap_check(&emb, (&a.0, &a.1), (&b.0, &b.1), only_a), Err(WeightError::NotShared(only_a)));
}

#[test]
fn disjoint_classes_add_up() {
    // two triangle stars five units apart, bridged by a two-edge path
    let star = gallery::triangle_star();
    let n = star.points.len();
    let mut points = star.points.clone();
    points.extend(star.points.iter().map(|p| *p + Point2::new(5.0, 0.0)));
    points.push(Point2::new(3.0, 0.0));
    let mut edges = star.edges.clone();
    edges.extend(star.edges.iter().map(|&(i, j)| (i + n, j + n)));
    let (right, left) =
        (star.find_point(Point2::new(2.0, 0.0), EPS).unwrap(), star.find_point(Point2::new(-1.0, 0.0), EPS).unwrap());
    edges.extend([(right, 2 * n), (2 * n, left + n)]);
    let g = Graph::new(points, edges);
    assert!(g.validate(EPS).valid);

    let emb = g.embed(EPS).unwrap();
    let found = ledgers(&emb);
    assert_eq!(found.len(), 2);
    let pairs: Vec<_> = found.iter().map(|(c, l)| (c, l)).collect();
    let union = union_contribution_bound(&emb, &pairs).unwrap();
    assert!(union.overlaps.is_empty());
    assert_eq!(union.omega_total, found[0].1.total + found[1].1.total);
    let parts: Rational = found.iter().map(|(c, _)| c_of_vertices(&emb, &c.vertices).unwrap()).sum();
    assert_eq!(union.c_union, parts);

    let empty = union_contribution_bound(&emb, &[]).unwrap();
    assert_eq!((empty.c_union, empty.omega_total), (r(0, 1), r(0, 1)));
}

#[test]
fn classes_on_the_outer_face_make_no_claim() {
    for g in [gallery::triangle(), gallery::rhombus(), gallery::mixed_wheel()] {
        let emb = g.embed(EPS).unwrap();
        for cls in decompose(&emb).unwrap() {
            assert!(class_contribution_bound(&emb, &cls).is_err());
        }
    }
}

#[test]
fn triangle_star_paths_are_case_one() {
    let emb = gallery::triangle_star().embed(EPS).unwrap();
    let (cls, ledger) = &ledgers(&emb)[0];
    assert_ledger_invariants(ledger);
    assert_eq!(cls.vertices.len(), 3);
    let double = ledger.arcs.iter().filter(|a| a.kind == ArcKind::DoubleLeaving).count();
    assert_eq!(double, 6);
    assert!(ledger.arcs.iter().filter(|a| a.kind == ArcKind::DoubleLeaving).all(|a| a.omega == r(1, 3)));
}
