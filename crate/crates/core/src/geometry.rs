//! Plane and triangular-lattice primitives.
//!
//! Lengths are measured in matchstick units. Floating-point predicates take an
//! explicit tolerance; lattice coordinates are exact integers.

use std::f64::consts::PI;
use std::{fmt, ops};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact fraction used for every contribution, weight and parameter value.
pub type Rational = Ratio<i64>;

/// Default tolerance in matchstick units.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Angles within this many radians of a multiple of pi/6 snap to it.
pub const ANGLE_SNAP_TOL: f64 = 1e-6;

pub const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("coincident points at angle apex")]
    CoincidentPoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn scale(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Direction of the vector in `[0, 2pi)`.
    pub fn heading(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }
}

impl ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axial coordinate on the unit triangular lattice: `a*(1,0) + b*(1/2, sqrt3/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

/// The six unit steps in counterclockwise order, starting at direction 0.
pub const LATTICE_DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

impl LatticePoint {
    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    pub fn step(self, dir: usize) -> LatticePoint {
        let (da, db) = LATTICE_DIRS[dir % 6];
        LatticePoint::new(self.a + da, self.b + db)
    }

    pub fn neighbors(self) -> [LatticePoint; 6] {
        std::array::from_fn(|d| self.step(d))
    }

    /// Index of the unit step from `self` to `other`, if they are lattice neighbors.
    pub fn direction_to(self, other: LatticePoint) -> Option<usize> {
        let d = (other.a - self.a, other.b - self.b);
        LATTICE_DIRS.iter().position(|&s| s == d)
    }

    pub fn translate(self, da: i64, db: i64) -> LatticePoint {
        LatticePoint::new(self.a + da, self.b + db)
    }

    /// Rotation by 60 degrees about the origin.
    pub fn rotate60(self) -> LatticePoint {
        LatticePoint::new(-self.b, self.a + self.b)
    }

    /// Reflection across the 30-degree line through the origin.
    pub fn reflect(self) -> LatticePoint {
        LatticePoint::new(self.b, self.a)
    }

    /// Applies symmetry `k` of the 12-element dihedral group (0..6 rotations, 6..12 reflected).
    pub fn transform(self, k: usize) -> LatticePoint {
        let mut p = if k >= 6 { self.reflect() } else { self };
        for _ in 0..(k % 6) {
            p = p.rotate60();
        }
        p
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.a, self.b)
    }
}

pub fn unit_distance(p: Point2, q: Point2, eps: f64) -> bool {
    (p.dist(q) - 1.0).abs() <= eps
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn orient_sign(a: Point2, b: Point2, c: Point2, eps: f64) -> i8 {
    let len = b.dist(a).max(c.dist(a)).max(1.0);
    let o = orient(a, b, c);
    if o.abs() <= eps * len {
        0
    } else if o > 0.0 {
        1
    } else {
        -1
    }
}

/// `p` lies within the bounding box of `a`-`b` (assumed collinear).
fn within(a: Point2, b: Point2, p: Point2, eps: f64) -> bool {
    p.x >= a.x.min(b.x) - eps && p.x <= a.x.max(b.x) + eps && p.y >= a.y.min(b.y) - eps && p.y <= a.y.max(b.y) + eps
}

/// Whether the closed segments share a point, up to `eps`.
///
/// Collinear overlap counts as crossing.
pub fn segments_cross(s1: (Point2, Point2), s2: (Point2, Point2), eps: f64) -> Result<bool, GeometryError> {
    let (a, b) = s1;
    let (c, d) = s2;
    if a.dist(b) <= eps || c.dist(d) <= eps {
        return Err(GeometryError::DegenerateSegment);
    }
    let o1 = orient_sign(a, b, c, eps);
    let o2 = orient_sign(a, b, d, eps);
    let o3 = orient_sign(c, d, a, eps);
    let o4 = orient_sign(c, d, b, eps);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Ok(true);
    }
    Ok((o1 == 0 && within(a, b, c, eps))
        || (o2 == 0 && within(a, b, d, eps))
        || (o3 == 0 && within(c, d, a, eps))
        || (o4 == 0 && within(c, d, b, eps)))
}

/// Angle swept counterclockwise at `apex` from the ray towards `prev` to the
/// ray towards `next`, in `(0, 2pi]`.
///
/// For a face whose boundary passes `prev -> apex -> next` with the face on the
/// right, this is the interior angle. Identical rays give `2pi`.
pub fn interior_angle(prev: Point2, apex: Point2, next: Point2) -> Result<f64, GeometryError> {
    let u = prev - apex;
    let w = next - apex;
    if u.dot(u) == 0.0 || w.dot(w) == 0.0 {
        return Err(GeometryError::CoincidentPoints);
    }
    let mut t = w.heading() - u.heading();
    if t <= 0.0 {
        t += 2.0 * PI;
    }
    Ok(t)
}

/// Snaps an angle to the nearest multiple of pi/6 (returned as the multiple)
/// when within [`ANGLE_SNAP_TOL`].
pub fn snap_angle(theta: f64) -> Option<u32> {
    let k = (theta / (PI / 6.0)).round();
    if k >= 0.0 && (theta - k * PI / 6.0).abs() <= ANGLE_SNAP_TOL {
        Some(k as u32)
    } else {
        None
    }
}

pub fn lattice_to_plane(p: LatticePoint) -> Point2 {
    Point2::new(p.a as f64 + 0.5 * p.b as f64, SQRT3_2 * p.b as f64)
}

/// Finds a rigid motion placing every point within `eps` of the unit
/// triangular lattice and returns the exact coordinates.
///
/// Every unit-distance pair is tried as the `(0,0)-(1,0)` generator, with and
/// without reflection. Returns `None` when no placement exists.
pub fn snap_to_lattice(points: &[Point2], eps: f64) -> Option<Vec<LatticePoint>> {
    match points.len() {
        0 => return Some(Vec::new()),
        1 => return Some(vec![LatticePoint::new(0, 0)]),
        _ => {}
    }
    for i in 0..points.len() {
        for j in 0..points.len() {
            if i == j || !unit_distance(points[i], points[j], eps.max(1e-12)) {
                continue;
            }
            let origin = points[i];
            let ex = (points[j] - origin).scale(1.0 / points[j].dist(origin));
            for flip in [1.0, -1.0] {
                let ey = Point2::new(-ex.y, ex.x).scale(flip);
                if let Some(out) = try_frame(points, origin, ex, ey, eps) {
                    return Some(out);
                }
            }
        }
    }
    None
}

fn try_frame(points: &[Point2], origin: Point2, ex: Point2, ey: Point2, eps: f64) -> Option<Vec<LatticePoint>> {
    points
        .iter()
        .map(|&p| {
            let d = p - origin;
            let (x, y) = (d.dot(ex), d.dot(ey));
            let b = (y / SQRT3_2).round();
            let a = (x - 0.5 * b).round();
            let lp = LatticePoint::new(a as i64, b as i64);
            let back = lattice_to_plane(lp);
            (back.dist(Point2::new(x, y)) <= eps).then_some(lp)
        })
        .collect()
}
