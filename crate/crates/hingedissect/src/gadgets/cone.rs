//! Finding rational-angle rotations into a target cone.
//!
//! Given a vector `v` and an open cone (counterclockwise from `lo` to `hi`,
//! less than a half turn), we need a rotation with *rational* sine and cosine
//! carrying `v` strictly inside. Rational angles are dense on the circle, and
//! the half-tangent parameterization sweeps them monotonically, so a binary
//! search over dyadic parameters converges; all comparisons are exact cross
//! products.

use crate::numeric::{rat, NumericError, Rat, RationalAngle};
use crate::planar::Point;
use std::cmp::Ordering;

fn angle_from_half_tangent(u: &Rat) -> RationalAngle {
    let one = Rat::from(num_bigint::BigInt::from(1));
    let u2 = u * u;
    let denom = &u2 + &one;
    RationalAngle::new((&one - &u2) / &denom, (u + u) / &denom).expect("unit by construction")
}

fn rotated(v: &Point, a: &RationalAngle) -> Point {
    let cos = crate::numeric::CReal::from_rat(a.cos().clone());
    let sin = crate::numeric::CReal::from_rat(a.sin().clone());
    Point::new(
        cos.mul(&v.x).sub(&sin.mul(&v.y)),
        sin.mul(&v.x).add(&cos.mul(&v.y)),
    )
}

fn strictly_inside(x: &Point, lo: &Point, hi: &Point) -> bool {
    lo.cross(x).sign() == Ordering::Greater && x.cross(hi).sign() == Ordering::Greater
}

/// A rational angle φ with `rot(φ)·v` strictly inside the cone `(lo, hi)`.
///
/// The cone must span less than 180° and be nonempty (`lo × hi > 0`).
pub fn rational_rotation_into_cone(
    v: &Point,
    lo: &Point,
    hi: &Point,
) -> Result<RationalAngle, NumericError> {
    if lo.cross(hi).sign() != Ordering::Greater {
        return Err(NumericError::MalformedExpression(
            "cone must be open and less than a half turn".into(),
        ));
    }
    // Sweep counterclockwise in quarter-turn coarse steps; inside each
    // quarter, bisect the half-tangent parameter.
    let quarter = RationalAngle::quarter_turn();
    let mut base = RationalAngle::identity();
    for _ in 0..4 {
        let start = rotated(v, &base);
        if strictly_inside(&start, lo, hi) {
            return Ok(base);
        }
        // Does the sweep from `base` over the next quarter turn enter the
        // cone? It does iff `lo` lies in the swept quarter (cone entry), or
        // the start is already past lo but before hi (handled above).
        let end = rotated(v, &base.compose(&quarter));
        let lo_in_sweep = start.cross(lo).sign() != Ordering::Less
            && lo.cross(&end).sign() == Ordering::Greater;
        if lo_in_sweep {
            // Bisect u ∈ [0,1] (angles 0..90°) for a placement inside.
            let mut ua = rat(0, 1);
            let mut ub = rat(1, 1);
            for _ in 0..512 {
                let um = (&ua + &ub) / rat(2, 1);
                let cand = base.compose(&angle_from_half_tangent(&um));
                let x = rotated(v, &cand);
                if strictly_inside(&x, lo, hi) {
                    return Ok(cand);
                }
                // Before the cone: rotate further; past it: back off.
                if x.cross(lo).sign() != Ordering::Less {
                    ua = um;
                } else {
                    ub = um;
                }
            }
            return Err(NumericError::MalformedExpression(
                "cone search failed to converge".into(),
            ));
        }
        base = base.compose(&quarter);
    }
    Err(NumericError::MalformedExpression(
        "cone search found no entry quarter".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotates_into_narrow_cone() {
        let v = Point::from_ints(5, -2);
        let lo = Point::from_ints(100, 99);
        let hi = Point::from_ints(99, 100);
        let a = rational_rotation_into_cone(&v, &lo, &hi).unwrap();
        let x = rotated(&v, &a);
        assert!(strictly_inside(&x, &lo, &hi));
    }

    #[test]
    fn identity_when_already_inside() {
        let v = Point::from_ints(1, 1);
        let lo = Point::from_ints(1, 0);
        let hi = Point::from_ints(0, 1);
        let a = rational_rotation_into_cone(&v, &lo, &hi).unwrap();
        assert_eq!(a.cos(), &rat(1, 1));
    }

    #[test]
    fn works_from_every_quadrant() {
        let lo = Point::from_ints(30, 1);
        let hi = Point::from_ints(28, 3);
        for v in [
            Point::from_ints(3, 7),
            Point::from_ints(-5, 4),
            Point::from_ints(-2, -9),
            Point::from_ints(6, -1),
        ] {
            let a = rational_rotation_into_cone(&v, &lo, &hi).unwrap();
            assert!(strictly_inside(&rotated(&v, &a), &lo, &hi));
        }
    }
}
