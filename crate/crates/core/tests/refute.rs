use matchstick_core::gallery;
use matchstick_core::geometry::Point2;
use matchstick_core::patch::periodic_patch;
use matchstick_core::refute::{refute_candidate, CertificateVerdict};
use matchstick_core::validator::Condition;

const EPS: f64 = 1e-9;

#[test]
fn icosahedron_drawn_in_the_plane_is_not_a_matchstick_graph() {
    // Tutte-style picture: outer triangle, inner rings pulled in
    let rot = gallery::icosahedron_rotation();
    let mut points = vec![Point2::new(0.0, 0.0); 12];
    for i in 0..5 {
        let t = std::f64::consts::TAU * i as f64 / 5.0;
        points[1 + i] = Point2::new(t.cos(), t.sin());
        let t = t + std::f64::consts::PI / 5.0;
        points[6 + i] = Point2::new(2.5 * t.cos(), 2.5 * t.sin());
    }
    points[11] = Point2::new(0.0, 9.0);
    let mut edges = Vec::new();
    for (v, nbrs) in rot.iter().enumerate() {
        edges.extend(nbrs.iter().filter(|&&w| v < w).map(|&w| (v, w)));
    }
    let cert = refute_candidate(&points, &edges, EPS);
    assert_eq!(cert.verdict, CertificateVerdict::InputInvalid);
    assert!(cert.conditions().contains(&Condition::UnitEdge));
    assert!(!cert.unreachable);
}

#[test]
fn valid_but_irregular_graphs_name_their_low_vertices() {
    for g in [gallery::triangle_star(), gallery::hexagon_ring()] {
        let cert = refute_candidate(&g.points, &g.edges, EPS);
        assert_eq!(cert.verdict, CertificateVerdict::InputInvalid);
        assert_eq!(cert.conditions(), vec![Condition::Degree]);
        let low: Vec<usize> =
            (0..g.points.len()).filter(|&v| g.edges.iter().filter(|e| e.0 == v || e.1 == v).count() != 5).collect();
        let mut named: Vec<usize> = cert.violations.iter().flat_map(|v| v.witnesses.iter().copied()).collect();
        named.sort_unstable();
        named.dedup();
        assert_eq!(named, low);
        let failing = cert.failing_step().unwrap();
        assert!(failing.check.contains("regular"), "{}", failing.check);
    }
}

#[test]
fn finite_patch_fails_on_its_boundary() {
    let patch = periodic_patch(5, 6, &[]).unwrap();
    let cert = refute_candidate(&patch.graph.points, &patch.graph.edges, EPS);
    assert_eq!(cert.verdict, CertificateVerdict::InputInvalid);
    assert!(cert.violations.iter().all(|v| v.condition == Condition::Degree));
    let named: Vec<usize> = cert.violations.iter().flat_map(|v| v.witnesses.iter().copied()).collect();
    assert!(named.iter().all(|v| !patch.interior.contains(v)));
}

#[test]
fn structural_defects_stop_the_chain_early() {
    let dup = [Point2::new(0.0, 0.0), Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
    let cert = refute_candidate(&dup, &[(0, 2), (1, 2)], EPS);
    assert_eq!(cert.verdict, CertificateVerdict::InputInvalid);
    assert!(cert.conditions().contains(&Condition::DistinctPoints));

    let g = gallery::path(1);
    let cert = refute_candidate(&g.points, &[(0, 1), (0, 0)], EPS);
    assert_eq!(cert.verdict, CertificateVerdict::InputInvalid);
    assert!(cert.conditions().contains(&Condition::PlanarSimple));
}
