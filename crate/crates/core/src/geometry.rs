//! Exact planar intersection areas.
//!
//! Frame: origin at the centre of the defended goal, `x` pointing into the
//! pitch, `y` along the goal line (left post at `+w/2`, right post at `-w/2`).
//! All lengths are meters. The goal plane is the vertical plane `x = 0`,
//! addressed by [`GoalPoint`] `(y, z)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used to decide collinearity and convexity.
const EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon is not convex")]
    NonConvex,
    #[error("line endpoints coincide")]
    DegenerateLine,
    #[error("non-finite coordinate")]
    NonFinite,
}

/// A point on the ground plane, serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PitchPoint {
    pub x: f64,
    pub y: f64,
}

impl PitchPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Self) -> f64 {
        self.sub(o).norm()
    }

    /// Reflection across the goal's centre axis (`y -> -y`).
    pub fn mirrored(self) -> Self {
        Self::new(self.x, -self.y)
    }
}

impl From<[f64; 2]> for PitchPoint {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<PitchPoint> for [f64; 2] {
    fn from(p: PitchPoint) -> Self {
        [p.x, p.y]
    }
}

/// A point in the goal plane, serialized as `[y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct GoalPoint {
    pub y: f64,
    pub z: f64,
}

impl GoalPoint {
    pub const fn new(y: f64, z: f64) -> Self {
        Self { y, z }
    }

    /// Where the shot meets the ground plane below this point.
    pub fn footprint(self) -> PitchPoint {
        PitchPoint::new(0.0, self.y)
    }

    pub fn mirrored(self) -> Self {
        Self::new(-self.y, self.z)
    }
}

impl From<[f64; 2]> for GoalPoint {
    fn from([y, z]: [f64; 2]) -> Self {
        Self { y, z }
    }
}

impl From<GoalPoint> for [f64; 2] {
    fn from(p: GoalPoint) -> Self {
        [p.y, p.z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle2(pub [PitchPoint; 3]);

impl Triangle2 {
    pub fn new(a: PitchPoint, b: PitchPoint, c: PitchPoint) -> Self {
        Self([a, b, c])
    }

    pub fn vertices(&self) -> &[PitchPoint] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle2 {
    pub center: PitchPoint,
    pub radius: f64,
}

impl Circle2 {
    pub fn new(center: PitchPoint, radius: f64) -> Self {
        Self { center, radius }
    }
}

/// Axis-aligned rectangle in the goal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectYZ {
    pub y0: f64,
    pub y1: f64,
    pub z0: f64,
    pub z1: f64,
}

impl RectYZ {
    /// Builds a rectangle, swapping bounds given in the wrong order.
    pub fn new(y0: f64, y1: f64, z0: f64, z1: f64) -> Self {
        Self {
            y0: y0.min(y1),
            y1: y0.max(y1),
            z0: z0.min(z1),
            z1: z0.max(z1),
        }
    }

    pub fn area(&self) -> f64 {
        (self.y1 - self.y0) * (self.z1 - self.z0)
    }
}

fn signed_area(poly: &[PitchPoint]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (i, p) in poly.iter().enumerate() {
        let q = poly[(i + 1) % poly.len()];
        acc += p.cross(q);
    }
    acc / 2.0
}

pub fn triangle_area(t: &Triangle2) -> f64 {
    let [a, b, c] = t.0;
    (b.sub(a).cross(c.sub(a)) / 2.0).abs()
}

pub fn polygon_area(poly: &[PitchPoint]) -> f64 {
    signed_area(poly).abs()
}

/// Checks that `poly` is convex (collinear runs allowed) and winds once.
fn check_convex(poly: &[PitchPoint]) -> Result<(), GeometryError> {
    if poly.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let n = poly.len();
    if n < 4 {
        return Ok(());
    }
    let scale = poly.iter().map(|p| p.x.abs().max(p.y.abs())).fold(1.0, f64::max);
    let tol = EPS * scale * scale;
    let mut sign = 0.0;
    let mut turning = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        let e1 = b.sub(a);
        let e2 = c.sub(b);
        let cr = e1.cross(e2);
        if cr.abs() > tol {
            if sign == 0.0 {
                sign = cr.signum();
            } else if cr.signum() != sign {
                return Err(GeometryError::NonConvex);
            }
        }
        if e1.norm() > 0.0 && e2.norm() > 0.0 {
            turning += e1.cross(e2).atan2(e1.dot(e2));
        }
    }
    // A star polygon turns consistently but more than once.
    if sign != 0.0 && turning.abs() > 2.0 * PI + 1e-6 {
        return Err(GeometryError::NonConvex);
    }
    Ok(())
}

/// Returns the polygon in counter-clockwise order, or `None` when it has no area.
fn ccw(poly: &[PitchPoint]) -> Option<Vec<PitchPoint>> {
    let a = signed_area(poly);
    if a.abs() <= EPS {
        return None;
    }
    let mut v = poly.to_vec();
    if a < 0.0 {
        v.reverse();
    }
    Some(v)
}

/// Sutherland-Hodgman clip of `subject` against the convex CCW `clip`.
fn clip_convex(subject: &[PitchPoint], clip: &[PitchPoint]) -> Vec<PitchPoint> {
    let mut out = subject.to_vec();
    for i in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % clip.len()];
        let edge = b.sub(a);
        let side = |p: PitchPoint| edge.cross(p.sub(a));
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let cur = input[j];
            let prev = input[(j + input.len() - 1) % input.len()];
            let (sc, sp) = (side(cur), side(prev));
            if sc >= 0.0 {
                if sp < 0.0 {
                    out.push(prev.add(cur.sub(prev).scale(sp / (sp - sc))));
                }
                out.push(cur);
            } else if sp >= 0.0 {
                out.push(prev.add(cur.sub(prev).scale(sp / (sp - sc))));
            }
        }
    }
    out
}

/// Area of the intersection of two convex polygons.
///
/// Either winding is accepted. Polygons with zero area behave as empty sets.
pub fn convex_poly_intersection_area(
    p: &[PitchPoint],
    q: &[PitchPoint],
) -> Result<f64, GeometryError> {
    check_convex(p)?;
    check_convex(q)?;
    let (Some(p), Some(q)) = (ccw(p), ccw(q)) else {
        return Ok(0.0);
    };
    let clipped = clip_convex(&p, &q);
    let area = polygon_area(&clipped);
    Ok(area.min(polygon_area(&p)).min(polygon_area(&q)))
}

/// Signed area of `circle(0, r) ∩ triangle(0, a, b)`.
fn circle_wedge_area(a: PitchPoint, b: PitchPoint, r: f64) -> f64 {
    let d = b.sub(a);
    let dd = d.dot(d);
    if dd == 0.0 {
        return 0.0;
    }
    // Split the segment where it crosses the circle: |a + t d| = r.
    let mut ts = vec![0.0];
    let half_b = a.dot(d);
    let c = a.dot(a) - r * r;
    let disc = half_b * half_b - dd * c;
    if disc > 0.0 {
        let s = disc.sqrt();
        for t in [(-half_b - s) / dd, (-half_b + s) / dd] {
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        }
    }
    ts.push(1.0);
    let mut acc = 0.0;
    for w in ts.windows(2) {
        let p = a.add(d.scale(w[0]));
        let q = a.add(d.scale(w[1]));
        let mid = a.add(d.scale((w[0] + w[1]) / 2.0));
        if mid.dot(mid) <= r * r {
            acc += p.cross(q) / 2.0;
        } else {
            acc += r * r * p.cross(q).atan2(p.dot(q)) / 2.0;
        }
    }
    acc
}

/// Exact area of a circle intersected with a convex polygon.
///
/// Sums, over the polygon's edges, the signed area of the circle clipped to the
/// triangle spanned by the circle centre and the edge; each piece is either a
/// straight triangle or a circular sector.
pub fn circle_poly_intersection_area(c: &Circle2, p: &[PitchPoint]) -> Result<f64, GeometryError> {
    check_convex(p)?;
    if !c.center.is_finite() || !c.radius.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if c.radius <= 0.0 || p.len() < 3 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for i in 0..p.len() {
        let a = p[i].sub(c.center);
        let b = p[(i + 1) % p.len()].sub(c.center);
        acc += circle_wedge_area(a, b, c.radius);
    }
    let cap = (PI * c.radius * c.radius).min(polygon_area(p));
    Ok(acc.abs().min(cap))
}

pub fn circle_triangle_intersection_area(c: &Circle2, t: &Triangle2) -> f64 {
    // A triangle is always convex, so the only failure is non-finite input.
    circle_poly_intersection_area(c, t.vertices()).unwrap_or(0.0)
}

pub fn rect_intersection_area(a: &RectYZ, b: &RectYZ) -> f64 {
    let w = (a.y1.min(b.y1) - a.y0.max(b.y0)).max(0.0);
    let h = (a.z1.min(b.z1) - a.z0.max(b.z0)).max(0.0);
    w * h
}

/// Orthogonal projection of `a` onto the infinite line through `line.0` and `line.1`.
pub fn foot_of_perpendicular(
    a: PitchPoint,
    line: (PitchPoint, PitchPoint),
) -> Result<PitchPoint, GeometryError> {
    let (p, q) = line;
    let d = q.sub(p);
    let dd = d.dot(d);
    if dd <= 0.0 || !dd.is_finite() {
        return Err(GeometryError::DegenerateLine);
    }
    let t = a.sub(p).dot(d) / dd;
    Ok(p.add(d.scale(t)))
}

/// Closest point to `a` on the segment `p`-`q`.
pub fn closest_point_on_segment(a: PitchPoint, p: PitchPoint, q: PitchPoint) -> PitchPoint {
    let d = q.sub(p);
    let dd = d.dot(d);
    if dd == 0.0 {
        return p;
    }
    let t = (a.sub(p).dot(d) / dd).clamp(0.0, 1.0);
    p.add(d.scale(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> PitchPoint {
        PitchPoint::new(x, y)
    }

    fn square(x0: f64, y0: f64, s: f64) -> Vec<PitchPoint> {
        vec![pt(x0, y0), pt(x0 + s, y0), pt(x0 + s, y0 + s), pt(x0, y0 + s)]
    }

    #[test]
    fn triangle_area_basics() {
        let t = Triangle2::new(pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0));
        assert_eq!(triangle_area(&t), 0.5);
        let t = Triangle2::new(pt(0.0, 0.0), pt(2.0, 0.0), pt(4.0, 0.0));
        assert_eq!(triangle_area(&t), 0.0);
    }

    #[test]
    fn triangle_area_matches_shoelace() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let v: Vec<f64> = (0..6).map(|_| rng.random_range(-50.0..50.0)).collect();
            let t = Triangle2::new(pt(v[0], v[1]), pt(v[2], v[3]), pt(v[4], v[5]));
            // Shoelace over the three vertices, written out term by term.
            let shoelace = 0.5
                * ((v[0] * v[3] - v[2] * v[1]) + (v[2] * v[5] - v[4] * v[3]) + (v[4] * v[1] - v[0] * v[5]))
                    .abs();
            assert_abs_diff_eq!(triangle_area(&t), shoelace, epsilon = 1e-12 * shoelace.max(1.0));
        }
    }

    #[test]
    fn squares_overlap() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(0.5, 0.5, 1.0);
        assert_abs_diff_eq!(convex_poly_intersection_area(&a, &b).unwrap(), 0.25, epsilon = 1e-15);
        let far = square(5.0, 5.0, 1.0);
        assert_eq!(convex_poly_intersection_area(&a, &far).unwrap(), 0.0);
    }

    #[test]
    fn triangle_with_itself() {
        let t = [pt(0.0, 0.0), pt(3.0, 1.0), pt(1.0, 2.0)];
        let area = polygon_area(&t);
        assert_abs_diff_eq!(convex_poly_intersection_area(&t, &t).unwrap(), area, epsilon = 1e-12);
        let mut cw = t;
        cw.reverse();
        assert_abs_diff_eq!(convex_poly_intersection_area(&t, &cw).unwrap(), area, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_triangle_is_empty() {
        let flat = [pt(0.0, -3.66), pt(0.0, 0.0), pt(0.0, 3.66)];
        let big = [pt(10.0, 0.0), pt(0.0, -3.66), pt(0.0, 3.66)];
        assert_eq!(convex_poly_intersection_area(&flat, &big).unwrap(), 0.0);
    }

    #[test]
    fn non_convex_rejected() {
        let dart = [pt(0.0, 0.0), pt(2.0, 1.0), pt(0.0, 2.0), pt(0.5, 1.0)];
        let sq = square(0.0, 0.0, 1.0);
        assert_eq!(convex_poly_intersection_area(&dart, &sq), Err(GeometryError::NonConvex));
        let star: Vec<PitchPoint> = (0..5)
            .map(|k| {
                let th = k as f64 * 4.0 * PI / 5.0;
                pt(th.cos(), th.sin())
            })
            .collect();
        assert_eq!(convex_poly_intersection_area(&star, &sq), Err(GeometryError::NonConvex));
        let c = Circle2::new(pt(0.0, 0.0), 1.0);
        assert_eq!(circle_poly_intersection_area(&c, &dart), Err(GeometryError::NonConvex));
    }

    #[test]
    fn circle_edge_cases() {
        let tri = [pt(0.0, 0.0), pt(100.0, 0.0), pt(0.0, 100.0)];
        let zero = Circle2::new(pt(10.0, 10.0), 0.0);
        assert_eq!(circle_poly_intersection_area(&zero, &tri).unwrap(), 0.0);
        let inside = Circle2::new(pt(10.0, 10.0), 3.0);
        assert_abs_diff_eq!(circle_poly_intersection_area(&inside, &tri).unwrap(), 9.0 * PI, epsilon = 1e-9);
        // Circle centred on a right-angle corner covers a quarter disc.
        let corner = Circle2::new(pt(0.0, 0.0), 2.0);
        assert_abs_diff_eq!(circle_poly_intersection_area(&corner, &tri).unwrap(), PI, epsilon = 1e-9);
        // Polygon entirely inside the circle.
        let huge = Circle2::new(pt(0.0, 0.0), 1000.0);
        assert_abs_diff_eq!(circle_poly_intersection_area(&huge, &tri).unwrap(), 5000.0, epsilon = 1e-7);
        // Half plane through the centre.
        let sq = square(0.0, -5.0, 10.0);
        let c = Circle2::new(pt(0.0, 0.0), 1.0);
        assert_abs_diff_eq!(circle_poly_intersection_area(&c, &sq).unwrap(), PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn rects() {
        let mouth = RectYZ::new(-3.66, 3.66, 0.0, 2.44);
        assert_abs_diff_eq!(rect_intersection_area(&mouth, &mouth), 17.8608, epsilon = 1e-12);
        let away = RectYZ::new(10.0, 11.0, 0.0, 1.0);
        assert_eq!(rect_intersection_area(&mouth, &away), 0.0);
    }

    #[test]
    fn foot_basics() {
        let d = foot_of_perpendicular(pt(1.0, 1.0), (pt(0.0, 0.0), pt(2.0, 0.0))).unwrap();
        assert_eq!(d, pt(1.0, 0.0));
        assert_eq!(d.distance(pt(1.0, 1.0)), 1.0);
        let on = foot_of_perpendicular(pt(3.0, 0.0), (pt(0.0, 0.0), pt(2.0, 0.0))).unwrap();
        assert_eq!(on, pt(3.0, 0.0));
        assert_eq!(
            foot_of_perpendicular(pt(1.0, 1.0), (pt(2.0, 2.0), pt(2.0, 2.0))),
            Err(GeometryError::DegenerateLine)
        );
    }

    fn coord() -> impl Strategy<Value = f64> {
        -20.0..20.0f64
    }

    fn point() -> impl Strategy<Value = PitchPoint> {
        (coord(), coord()).prop_map(|(x, y)| pt(x, y))
    }

    proptest! {
        #[test]
        fn foot_distance_matches_cross_product(a in point(), p in point(), q in point()) {
            prop_assume!(p.distance(q) > 1e-3);
            let d = foot_of_perpendicular(a, (p, q)).unwrap();
            let oracle = (q.sub(p).cross(a.sub(p))).abs() / q.distance(p);
            prop_assert!((a.distance(d) - oracle).abs() < 1e-9);
        }

        #[test]
        fn rect_matches_interval_product(v in prop::array::uniform8(-5.0..5.0f64)) {
            let a = RectYZ::new(v[0], v[1], v[2], v[3]);
            let b = RectYZ::new(v[4], v[5], v[6], v[7]);
            let overlap = |l0: f64, l1: f64, r0: f64, r1: f64| (l1.min(r1) - l0.max(r0)).max(0.0);
            let oracle = overlap(a.y0, a.y1, b.y0, b.y1) * overlap(a.z0, a.z1, b.z0, b.z1);
            prop_assert_eq!(rect_intersection_area(&a, &b), oracle);
            prop_assert_eq!(rect_intersection_area(&a, &b), rect_intersection_area(&b, &a));
        }

        #[test]
        fn triangle_pair_properties(a in point(), b in point(), c in point(),
                                    d in point(), e in point(), f in point(),
                                    th in 0.0..(2.0 * PI), tx in coord(), ty in coord()) {
            let p = [a, b, c];
            let q = [d, e, f];
            let area = convex_poly_intersection_area(&p, &q).unwrap();
            let back = convex_poly_intersection_area(&q, &p).unwrap();
            prop_assert!(area >= 0.0);
            prop_assert!((area - back).abs() < 1e-9);
            prop_assert!(area <= polygon_area(&p).min(polygon_area(&q)) + 1e-9);
            let rigid = |v: PitchPoint| pt(v.x * th.cos() - v.y * th.sin() + tx, v.x * th.sin() + v.y * th.cos() + ty);
            let moved = convex_poly_intersection_area(&p.map(rigid), &q.map(rigid)).unwrap();
            prop_assert!((moved - area).abs() < 1e-9 * (1.0 + area));
        }

        #[test]
        fn circle_monotone_in_radius(a in point(), b in point(), c in point(), ctr in point(),
                                     r in 0.0..15.0f64, dr in 0.0..5.0f64) {
            let tri = [a, b, c];
            let small = circle_poly_intersection_area(&Circle2::new(ctr, r), &tri).unwrap();
            let big = circle_poly_intersection_area(&Circle2::new(ctr, r + dr), &tri).unwrap();
            prop_assert!(small >= 0.0);
            prop_assert!(big + 1e-9 >= small);
            prop_assert!(small <= polygon_area(&tri).min(PI * r * r) + 1e-9);
        }

        #[test]
        fn circle_rigid_invariance(a in point(), b in point(), c in point(), ctr in point(),
                                   r in 0.0..15.0f64, th in 0.0..(2.0 * PI), tx in coord(), ty in coord()) {
            let tri = [a, b, c];
            let rigid = |v: PitchPoint| pt(v.x * th.cos() - v.y * th.sin() + tx, v.x * th.sin() + v.y * th.cos() + ty);
            let base = circle_poly_intersection_area(&Circle2::new(ctr, r), &tri).unwrap();
            let moved = circle_poly_intersection_area(&Circle2::new(rigid(ctr), r), &tri.map(rigid)).unwrap();
            prop_assert!((moved - base).abs() < 1e-9 * (1.0 + base));
        }
    }
}
