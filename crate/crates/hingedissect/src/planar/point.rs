//! Points, vectors and the exact predicates everything else is built on.

use crate::numeric::{CReal, Rat};
use std::cmp::Ordering;

/// A point (or free vector) with constructible coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Point {
    pub x: CReal,
    pub y: CReal,
}

impl Point {
    pub fn new(x: CReal, y: CReal) -> Self {
        Point { x, y }
    }

    pub fn from_rats(x: Rat, y: Rat) -> Self {
        Point { x: CReal::from_rat(x), y: CReal::from_rat(y) }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point { x: CReal::from_int(x), y: CReal::from_int(y) }
    }

    pub fn origin() -> Self {
        Point { x: CReal::zero(), y: CReal::zero() }
    }

    pub fn add(&self, v: &Point) -> Point {
        Point { x: self.x.add(&v.x), y: self.y.add(&v.y) }
    }

    pub fn sub(&self, v: &Point) -> Point {
        Point { x: self.x.sub(&v.x), y: self.y.sub(&v.y) }
    }

    pub fn scale(&self, s: &CReal) -> Point {
        Point { x: self.x.mul(s), y: self.y.mul(s) }
    }

    pub fn scale_rat(&self, s: &Rat) -> Point {
        self.scale(&CReal::from_rat(s.clone()))
    }

    /// Rotate the free vector by +90°.
    pub fn rot90(&self) -> Point {
        Point { x: self.y.neg(), y: self.x.clone() }
    }

    pub fn neg(&self) -> Point {
        Point { x: self.x.neg(), y: self.y.neg() }
    }

    pub fn dot(&self, v: &Point) -> CReal {
        self.x.mul(&v.x).add(&self.y.mul(&v.y))
    }

    pub fn cross(&self, v: &Point) -> CReal {
        self.x.mul(&v.y).sub(&self.y.mul(&v.x))
    }

    pub fn norm_sq(&self) -> CReal {
        self.dot(self)
    }

    pub fn dist_sq(&self, other: &Point) -> CReal {
        self.sub(other).norm_sq()
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.add(other).scale_rat(&crate::numeric::rat(1, 2))
    }

    /// Affine interpolation `self + t·(other − self)` for rational t.
    pub fn lerp(&self, other: &Point, t: &Rat) -> Point {
        self.add(&other.sub(self).scale_rat(t))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn f64_bbox(&self) -> BBox {
        let (xl, xh) = self.x.f64_range();
        let (yl, yh) = self.y.f64_range();
        BBox { xl, xh, yl, yh }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// Conservative floating-point bounding box (used for pair filtering only;
/// never for decisions).
#[derive(Clone, Copy, Debug)]
pub struct BBox {
    pub xl: f64,
    pub xh: f64,
    pub yl: f64,
    pub yh: f64,
}

impl BBox {
    pub fn empty() -> Self {
        BBox { xl: f64::INFINITY, xh: f64::NEG_INFINITY, yl: f64::INFINITY, yh: f64::NEG_INFINITY }
    }

    pub fn merge(&self, other: &BBox) -> BBox {
        BBox {
            xl: self.xl.min(other.xl),
            xh: self.xh.max(other.xh),
            yl: self.yl.min(other.yl),
            yh: self.yh.max(other.yh),
        }
    }

    pub fn intersects(&self, other: &BBox) -> bool {
        self.xl <= other.xh && other.xl <= self.xh && self.yl <= other.yh && other.yl <= self.yh
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Exact orientation of r relative to the directed line p→q.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    let cross = q.sub(p).cross(&r.sub(p));
    match cross.sign() {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Is p on the closed segment [a, b]?
pub fn segment_contains(a: &Point, b: &Point, p: &Point) -> bool {
    if orientation(a, b, p) != Orientation::Collinear {
        return false;
    }
    let d = b.sub(a);
    let t = p.sub(a).dot(&d);
    t.sign() != Ordering::Less && t.compare(&d.norm_sq()) != Ordering::Greater
}

/// Do the open segments (a,b) and (c,d) cross at a single interior point?
pub fn segments_properly_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    o1 != o2
        && o3 != o4
        && o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
}

/// Intersection point of the (non-parallel) lines through a→b and c→d.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = b.sub(a);
    let s = d.sub(c);
    let denom = r.cross(&s);
    if denom.is_zero() {
        return None;
    }
    let t = c.sub(a).cross(&s).div(&denom).expect("nonzero denominator");
    Some(a.add(&r.scale(&t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_examples() {
        let o = Point::from_ints(0, 0);
        let e = Point::from_ints(1, 0);
        assert_eq!(orientation(&o, &e, &Point::from_ints(0, 1)), Orientation::Left);
        assert_eq!(orientation(&o, &e, &Point::from_ints(2, 0)), Orientation::Collinear);
        assert_eq!(
            orientation(&o, &Point::from_ints(0, 1), &Point::from_ints(1, 0)),
            Orientation::Right
        );
    }

    #[test]
    fn proper_crossing() {
        let a = Point::from_ints(0, 0);
        let b = Point::from_ints(2, 2);
        let c = Point::from_ints(0, 2);
        let d = Point::from_ints(2, 0);
        assert!(segments_properly_cross(&a, &b, &c, &d));
        // touching at an endpoint is not proper
        assert!(!segments_properly_cross(&a, &b, &b, &d));
        let p = line_intersection(&a, &b, &c, &d).unwrap();
        assert_eq!(p, Point::from_ints(1, 1));
    }

    #[test]
    fn segment_containment() {
        let a = Point::from_ints(0, 0);
        let b = Point::from_ints(4, 2);
        assert!(segment_contains(&a, &b, &Point::from_ints(2, 1)));
        assert!(segment_contains(&a, &b, &b));
        assert!(!segment_contains(&a, &b, &Point::from_ints(6, 3)));
        assert!(!segment_contains(&a, &b, &Point::from_ints(2, 2)));
    }
}
