use proptest::prelude::*;

use matchstick_core::contribution::{c_of_face_set, euler_contribution_sum, total_contribution};
use matchstick_core::format::{write_graph, write_rotation, GraphFile};
use matchstick_core::gallery;
use matchstick_core::geometry::{interior_angle, segments_cross, Point2, Rational};
use matchstick_core::graph::Graph;
use matchstick_core::patch::periodic_patch;
use matchstick_core::validator::{check_angle_sum, check_regular_on, Condition};

const EPS: f64 = 1e-9;

fn euler_and_handshake(emb: &matchstick_core::planar::PlanarEmbedding) {
    let (v, e, f) = (emb.vertex_count(), emb.edge_count(), emb.faces().len());
    assert_eq!(v + f, e + 2);
    let hand: usize = emb.face_histogram().iter().map(|(gon, n)| gon * n).sum();
    assert_eq!(hand, 2 * e);
}

#[test]
fn mixed_wheel_through_a_file() {
    let text = write_graph(&gallery::mixed_wheel());
    let emb = GraphFile::parse(&text).unwrap().embed(EPS).unwrap();
    let hist: Vec<(usize, usize)> = emb.face_histogram().into_iter().collect();
    assert_eq!(hist, vec![(3, 3), (4, 2), (7, 1)]);
    assert_eq!(emb.face_set(0).unwrap(), vec![3, 3, 3, 4, 4]);
    assert_eq!(euler_contribution_sum(&emb), Rational::from_integer(-12));
    euler_and_handshake(&emb);
}

#[test]
fn icosahedron_from_rotation_file() {
    let text = write_rotation(&gallery::icosahedron_rotation());
    let emb = GraphFile::parse(&text).unwrap().embed(EPS).unwrap();
    assert!(emb.is_regular(5));
    let report = total_contribution(&emb).unwrap();
    assert!(report.per_vertex.iter().all(|v| v.c == Rational::new(5, 3)));
    assert_eq!(report.total, Rational::from_integer(20));
}

#[test]
fn patch_interior_is_balanced() {
    let patch = periodic_patch(4, 5, &[]).unwrap();
    assert!(patch.graph.validate(EPS).valid);
    let emb = patch.graph.embed(EPS).unwrap();
    assert!(check_regular_on(&emb, 5, patch.interior.iter().copied()).valid);
    assert!(check_angle_sum(&emb, 1e-6).valid);
    for &v in &patch.interior {
        let fs = emb.face_set(v).unwrap();
        assert_eq!(fs, vec![3, 3, 3, 4, 4]);
        assert_eq!(c_of_face_set(&fs).unwrap(), Rational::from_integer(0));
    }
}

#[test]
fn defects_name_their_condition() {
    let mut long = gallery::triangle();
    long.points[2] = Point2::new(0.5, 1.0);
    assert!(long.validate(EPS).has(Condition::UnitEdge));

    let cross = Graph::new(
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, -0.5), Point2::new(0.5, 0.5)],
        vec![(0, 1), (2, 3)],
    );
    assert!(cross.validate(EPS).has(Condition::Crossing));
}

fn shuffled(g: &Graph, perm: &[usize], flip: bool) -> Graph {
    let mut points = vec![Point2::new(0.0, 0.0); g.points.len()];
    for (i, &p) in g.points.iter().enumerate() {
        points[perm[i]] = p;
    }
    let mut edges: Vec<(usize, usize)> =
        g.edges.iter().map(|&(a, b)| if flip { (perm[b], perm[a]) } else { (perm[a], perm[b]) }).collect();
    edges.reverse();
    Graph::new(points, edges)
}

proptest! {
    #[test]
    fn random_five_regular_systems_give_twenty(seed in 0u64..500, copies in 1usize..5) {
        let emb = gallery::random_five_regular(seed, copies);
        prop_assert!(emb.is_regular(5));
        euler_and_handshake(&emb);
        let twenty = Rational::from_integer(20);
        prop_assert_eq!(euler_contribution_sum(&emb), twenty);
        prop_assert_eq!(total_contribution(&emb).unwrap().total, twenty);
        let arcs: usize = (0..emb.vertex_count()).map(|v| emb.face_set(v).unwrap().len()).sum();
        prop_assert_eq!(arcs, 5 * emb.vertex_count());
    }

    #[test]
    fn verdicts_ignore_labelling(perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(), flip: bool, stretch in 0usize..12) {
        let mut g = gallery::mixed_wheel();
        if stretch < 8 {
            g.points[stretch].x += 0.05;
        }
        let a = g.validate(EPS);
        let b = shuffled(&g, &perm, flip).validate(EPS);
        let tags = |v: &matchstick_core::validator::Verdict| {
            let mut t: Vec<Condition> = v.violations.iter().map(|x| x.condition).collect();
            t.sort();
            t.dedup();
            t
        };
        prop_assert_eq!(a.valid, b.valid);
        prop_assert_eq!(tags(&a), tags(&b));
    }

    #[test]
    fn crossing_is_symmetric(c in prop::array::uniform8(-3i32..4)) {
        let p = |i: usize| Point2::new(c[i] as f64 / 2.0, c[i + 1] as f64 / 2.0);
        let (a, b, x, y) = (p(0), p(2), p(4), p(6));
        prop_assume!(a.dist(b) > 0.0 && x.dist(y) > 0.0);
        prop_assert_eq!(segments_cross((a, b), (x, y), EPS).unwrap(), segments_cross((x, y), (a, b), EPS).unwrap());
    }

    #[test]
    fn angles_on_both_sides_sum_to_a_turn(t1 in 0.01f64..6.2, t2 in 0.01f64..6.2) {
        prop_assume!((t1 - t2).abs() > 1e-3);
        let apex = Point2::new(0.3, -0.2);
        let arm = |t: f64| apex + Point2::new(t.cos(), t.sin());
        let sum = interior_angle(arm(t1), apex, arm(t2)).unwrap() + interior_angle(arm(t2), apex, arm(t1)).unwrap();
        prop_assert!((sum - std::f64::consts::TAU).abs() < 1e-9);
    }
}
