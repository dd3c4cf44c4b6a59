//! Small reference graphs used by tests, the CLI and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{LatticePoint, Point2, SQRT3_2};
use crate::graph::Graph;
use crate::planar::PlanarEmbedding;

pub fn triangle() -> Graph {
    Graph::new(
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, SQRT3_2)],
        vec![(0, 1), (1, 2), (2, 0)],
    )
}

/// 60° rhombus.
pub fn rhombus() -> Graph {
    Graph::new(
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.5, SQRT3_2), Point2::new(0.5, SQRT3_2)],
        vec![(0, 1), (1, 2), (2, 3), (3, 0)],
    )
}

pub fn square() -> Graph {
    Graph::new(
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)],
        vec![(0, 1), (1, 2), (2, 3), (3, 0)],
    )
}

/// Two triangles sharing the edge 0-1; 2 and 3 are the off-edge corners.
pub fn glued_triangles() -> Graph {
    Graph::new(
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, SQRT3_2), Point2::new(0.5, -SQRT3_2)],
        vec![(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)],
    )
}

/// Straight path with `n` unit edges.
pub fn path(n: usize) -> Graph {
    Graph::new((0..=n).map(|i| Point2::new(i as f64, 0.0)).collect(), (0..n).map(|i| (i, i + 1)).collect())
}

/// Center 0 with `n` evenly spaced unit spokes.
pub fn star(n: usize) -> Graph {
    let mut points = vec![Point2::new(0.0, 0.0)];
    for i in 0..n {
        let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        points.push(Point2::new(t.cos(), t.sin()));
    }
    Graph::new(points, (1..=n).map(|i| (0, i)).collect())
}

/// Vertex 0 surrounded by three triangles and two squares; the outer face is a 7-gon.
pub fn mixed_wheel() -> Graph {
    let points = vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.5, SQRT3_2),
        Point2::new(-0.5, SQRT3_2),
        Point2::new(-1.0, 0.0),
        Point2::new(-1.0, -1.0),
        Point2::new(0.0, -1.0),
        Point2::new(1.0, -1.0),
    ];
    let edges = vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 1)];
    Graph::new(points, edges)
}

/// A lattice triangle whose vertices all have degree 5 and sit away from the
/// outer face: each triangle edge borders a pentagon, and the leaving edges at
/// each corner bound two small triangles. 15 vertices, outer face a 12-gon.
pub fn triangle_star() -> Graph {
    let pts = [
        (0, 0),
        (1, 0),
        (0, 1),
        (1, -1),
        (1, 1),
        (-1, 1),
        (0, -1),
        (2, 0),
        (-1, 2),
        (-1, 0),
        (2, -1),
        (0, 2),
        (1, -2),
        (2, 1),
        (-2, 2),
    ];
    let points: Vec<LatticePoint> = pts.iter().map(|&(a, b)| LatticePoint::new(a, b)).collect();
    let mut edges = vec![(0, 1), (1, 2), (2, 0)];
    // leaving edges of 0, 1, 2
    edges.extend([(0, 5), (0, 9), (0, 6), (1, 3), (1, 10), (1, 7), (2, 4), (2, 11), (2, 8)]);
    let ring = [3, 10, 7, 13, 4, 11, 8, 14, 5, 9, 6, 12];
    edges.extend((0..ring.len()).map(|i| (ring[i], ring[(i + 1) % ring.len()])));
    Graph::from_lattice(&points, edges)
}

/// Eighteen lattice triangles ringed around a hexagonal hole. Every class vertex
/// has degree 5; the leaving edges end on a pentagon-lined outer ring.
pub fn hexagon_ring() -> Graph {
    let sector = [
        ((1, 0), (0, 1)),
        ((1, 0), (1, 1)),
        ((0, 1), (1, 1)),
        ((1, 0), (2, 0)),
        ((2, 0), (1, 1)),
        ((1, 0), (2, -1)),
        ((2, -1), (2, 0)),
        ((2, 0), (3, 0)),
        ((2, 0), (2, 1)),
        ((1, 1), (1, 2)),
        ((2, 1), (2, 2)),
        ((2, 2), (1, 2)),
        ((1, 2), (1, 3)),
        ((1, 3), (0, 3)),
        ((0, 3), (0, 4)),
        ((0, 4), (-1, 4)),
        ((-1, 4), (-1, 3)),
    ];
    let rot = |(a, b): (i64, i64)| (-b, a + b);
    let mut points: Vec<(i64, i64)> = Vec::new();
    let mut edges = std::collections::BTreeSet::new();
    let id = |p: (i64, i64), points: &mut Vec<(i64, i64)>| match points.iter().position(|&q| q == p) {
        Some(i) => i,
        None => {
            points.push(p);
            points.len() - 1
        }
    };
    for &(mut p, mut q) in &sector {
        for _ in 0..6 {
            let (i, j) = (id(p, &mut points), id(q, &mut points));
            edges.insert((i.min(j), i.max(j)));
            (p, q) = (rot(p), rot(q));
        }
    }
    let lattice: Vec<LatticePoint> = points.iter().map(|&(a, b)| LatticePoint::new(a, b)).collect();
    Graph::from_lattice(&lattice, edges.into_iter().collect())
}

/// Two classes meeting only at vertex 0: triangles 0-1-2 and 0-2-3 on one side,
/// triangle 0-4-5 on the other, separated by pentagons. Class vertices have
/// degree 5; leaving edges run out to a subdivided ring so every other bounded
/// face is a pentagon. Not a unit drawing.
pub fn shared_vertex() -> Graph {
    let polar = |r: f64, deg: f64| Point2::new(r * deg.to_radians().cos(), r * deg.to_radians().sin());
    // core vertex, angle, leaving edges; listed counterclockwise from 4
    let corners = [(4, 270.0, 3), (5, 330.0, 3), (1, 60.0, 3), (2, 120.0, 2), (3, 180.0, 3)];
    let core_edges = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (0, 4), (0, 5), (4, 5)];
    let mut points = vec![Point2::new(0.0, 0.0); 6];
    for &(u, deg, _) in &corners {
        points[u] = polar(1.0, deg);
    }
    let mut edges: Vec<(usize, usize)> = core_edges.to_vec();
    // ring entries: (angle, leaving from)
    let mut ring: Vec<(f64, Option<usize>)> = Vec::new();
    for (i, &(u, deg, n)) in corners.iter().enumerate() {
        let leaves: Vec<f64> = (0..n).map(|k| deg + 12.0 * (k as f64 - (n - 1) as f64 / 2.0)).collect();
        for (k, &a) in leaves.iter().enumerate() {
            ring.push((a, Some(u)));
            if k + 1 < n {
                // two ring vertices between leaves of the same corner
                let step = (leaves[k + 1] - a) / 3.0;
                ring.push((a + step, None));
                ring.push((a + 2.0 * step, None));
            }
        }
        let (next, nd, nn) = corners[(i + 1) % corners.len()];
        // corners joined by a class edge get one ring vertex between them;
        // across the pentagons at 0 the ring edge is direct
        if core_edges.contains(&(u.min(next), u.max(next))) {
            let last = *leaves.last().expect("leaves");
            let first = nd - 12.0 * (nn - 1) as f64 / 2.0;
            ring.push(((last + first) / 2.0, None));
        }
    }
    let base = points.len();
    for (k, &(a, from)) in ring.iter().enumerate() {
        points.push(polar(4.0, a));
        if let Some(u) = from {
            edges.push((u, base + k));
        }
        edges.push((base + k, base + (k + 1) % ring.len()));
    }
    Graph::new(points, edges)
}

/// Counterclockwise rotation system of the icosahedron.
///
/// 0 is the top, 1..=5 the upper ring, 6..=10 the lower ring (rotated half a step),
/// 11 the bottom drawn around the outside.
pub fn icosahedron_rotation() -> Vec<Vec<usize>> {
    let up = |i: usize| 1 + (i % 5);
    let low = |i: usize| 6 + (i % 5);
    let mut rot = vec![Vec::new(); 12];
    rot[0] = (0..5).map(up).collect();
    for i in 0..5 {
        // upper vertex i sits at angle 72i; lower neighbors at 72i - 36 and 72i + 36
        rot[up(i)] = vec![low(i + 4), low(i), up(i + 1), 0, up(i + 4)];
        // lower vertex i sits at angle 72i + 36
        rot[low(i)] = vec![11, low(i + 1), up(i + 1), up(i), low(i + 4)];
    }
    rot[11] = (0..5).rev().map(low).collect();
    rot
}

pub fn icosahedron() -> PlanarEmbedding {
    PlanarEmbedding::from_rotation(icosahedron_rotation()).expect("icosahedron rotation is planar")
}

fn relabel(rot: &[Vec<usize>], perm: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); rot.len()];
    for (v, nbrs) in rot.iter().enumerate() {
        out[perm[v]] = nbrs.iter().map(|&w| perm[w]).collect();
    }
    out
}

fn replace(list: &mut [usize], old: usize, new: usize) {
    let slot = list.iter().position(|&x| x == old).expect("neighbor present");
    list[slot] = new;
}

/// Joins two planar 5-regular rotation systems: delete one edge from each and
/// reconnect the four endpoints across, keeping every degree at 5.
fn join(a: &[Vec<usize>], b: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let off = a.len();
    let pick = |rot: &[Vec<usize>], rng: &mut ChaCha8Rng| {
        let x = rng.gen_range(0..rot.len());
        let y = *rot[x].choose(rng).expect("non-empty rotation");
        (x, y)
    };
    let (x, y) = pick(a, rng);
    let (p, q) = pick(b, rng);
    let (p, q) = (p + off, q + off);
    for (p, q) in [(p, q), (q, p)] {
        let mut rot: Vec<Vec<usize>> = a.to_vec();
        rot.extend(b.iter().map(|n| n.iter().map(|&w| w + off).collect()));
        replace(&mut rot[x], y, p);
        replace(&mut rot[y], x, q);
        replace(&mut rot[p], q, x);
        replace(&mut rot[q], p, y);
        if PlanarEmbedding::from_rotation(rot.clone()).is_ok() {
            return rot;
        }
    }
    unreachable!("one of the two cross pairings is planar")
}

/// A random connected planar 5-regular rotation system built from `copies`
/// icosahedra, randomly joined and relabeled. Deterministic in `seed`.
pub fn random_five_regular(seed: u64, copies: usize) -> PlanarEmbedding {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = icosahedron_rotation();
    let mut rot = base.clone();
    for _ in 1..copies.max(1) {
        let mut perm: Vec<usize> = (0..base.len()).collect();
        perm.shuffle(&mut rng);
        rot = join(&rot, &relabel(&base, &perm), &mut rng);
    }
    let mut perm: Vec<usize> = (0..rot.len()).collect();
    perm.shuffle(&mut rng);
    PlanarEmbedding::from_rotation(relabel(&rot, &perm)).expect("joined system is planar")
}
