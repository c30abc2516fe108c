//! Orientation-preserving rigid motions.

use super::point::Point;
use crate::numeric::{CReal, NumericError, RationalAngle};
use std::cmp::Ordering;

/// `p ↦ R·p + t` with `R` a proper rotation given by an exact unit vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Isometry {
    pub cos: CReal,
    pub sin: CReal,
    pub tx: CReal,
    pub ty: CReal,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            cos: CReal::one(),
            sin: CReal::zero(),
            tx: CReal::zero(),
            ty: CReal::zero(),
        }
    }

    pub fn new(cos: CReal, sin: CReal, tx: CReal, ty: CReal) -> Result<Self, NumericError> {
        let unit = cos.mul(&cos).add(&sin.mul(&sin));
        if unit.compare(&CReal::one()) != Ordering::Equal {
            return Err(NumericError::MalformedExpression(
                "rotation must be a unit vector".into(),
            ));
        }
        Ok(Isometry { cos, sin, tx, ty })
    }

    pub fn translation(t: &Point) -> Self {
        Isometry {
            cos: CReal::one(),
            sin: CReal::zero(),
            tx: t.x.clone(),
            ty: t.y.clone(),
        }
    }

    pub fn from_angle(a: &RationalAngle) -> Self {
        Isometry {
            cos: CReal::from_rat(a.cos().clone()),
            sin: CReal::from_rat(a.sin().clone()),
            tx: CReal::zero(),
            ty: CReal::zero(),
        }
    }

    /// Rotation by `a` about the fixed point `c`.
    pub fn rotation_about(c: &Point, a: &RationalAngle) -> Self {
        let rot = Isometry::from_angle(a);
        let rc = rot.apply(c);
        Isometry {
            cos: rot.cos,
            sin: rot.sin,
            tx: c.x.sub(&rc.x),
            ty: c.y.sub(&rc.y),
        }
    }

    /// Point reflection (rotation by π) about `c`.
    pub fn half_turn_about(c: &Point) -> Self {
        Isometry::rotation_about(c, &RationalAngle::half_turn())
    }

    /// Rotation given by an exact unit vector (cos, sin) about a fixed point.
    pub fn rotation_about_unit(c: &Point, cos: CReal, sin: CReal) -> Result<Self, NumericError> {
        let rot = Isometry::new(cos, sin, CReal::zero(), CReal::zero())?;
        let rc = rot.apply(c);
        Ok(Isometry {
            cos: rot.cos,
            sin: rot.sin,
            tx: c.x.sub(&rc.x),
            ty: c.y.sub(&rc.y),
        })
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point {
            x: self.cos.mul(&p.x).sub(&self.sin.mul(&p.y)).add(&self.tx),
            y: self.sin.mul(&p.x).add(&self.cos.mul(&p.y)).add(&self.ty),
        }
    }

    /// Rotate a free vector (no translation).
    pub fn apply_vector(&self, v: &Point) -> Point {
        Point {
            x: self.cos.mul(&v.x).sub(&self.sin.mul(&v.y)),
            y: self.sin.mul(&v.x).add(&self.cos.mul(&v.y)),
        }
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let t = self.apply(&Point::new(other.tx.clone(), other.ty.clone()));
        Isometry {
            cos: self.cos.mul(&other.cos).sub(&self.sin.mul(&other.sin)),
            sin: self.sin.mul(&other.cos).add(&self.cos.mul(&other.sin)),
            tx: t.x,
            ty: t.y,
        }
    }

    pub fn inverse(&self) -> Isometry {
        // R⁻¹ = Rᵀ; t⁻¹ = −Rᵀ·t
        let cos = self.cos.clone();
        let sin = self.sin.neg();
        let tx = cos.mul(&self.tx).sub(&sin.mul(&self.ty)).neg();
        let ty = sin.mul(&self.tx).add(&cos.mul(&self.ty)).neg();
        Isometry { cos, sin, tx, ty }
    }

    pub fn is_identity(&self) -> bool {
        self.cos == CReal::one()
            && self.sin.is_zero()
            && self.tx.is_zero()
            && self.ty.is_zero()
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        let unit = self.cos.mul(&self.cos).add(&self.sin.mul(&self.sin));
        if unit.compare(&CReal::one()) != Ordering::Equal {
            return Err(NumericError::MalformedExpression(
                "rotation must be a unit vector".into(),
            ));
        }
        Ok(())
    }

    /// Rigid motion taking segment (a1, a2) onto segment (b1, b2); requires
    /// equal lengths. The rotation is derived from the two direction vectors,
    /// so it stays in the field generated by the inputs.
    pub fn mapping_segment(
        a1: &Point,
        a2: &Point,
        b1: &Point,
        b2: &Point,
    ) -> Result<Isometry, NumericError> {
        let u = a2.sub(a1);
        let v = b2.sub(b1);
        let n2 = u.norm_sq();
        if n2.compare(&v.norm_sq()) != Ordering::Equal {
            return Err(NumericError::MalformedExpression(
                "segments must have equal length".into(),
            ));
        }
        // R·u = v with R = [[c,−s],[s,c]]: c = (u·v)/|u|², s = (u×v)/|u|².
        let cos = u.dot(&v).div(&n2)?;
        let sin = u.cross(&v).div(&n2)?;
        let rot = Isometry { cos, sin, tx: CReal::zero(), ty: CReal::zero() };
        let ra = rot.apply(a1);
        Ok(Isometry {
            cos: rot.cos.clone(),
            sin: rot.sin.clone(),
            tx: b1.x.sub(&ra.x),
            ty: b1.y.sub(&ra.y),
        })
    }
}

impl std::fmt::Debug for Isometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Isometry(cos={:?}, sin={:?}, t=({:?}, {:?}))",
            self.cos, self.sin, self.tx, self.ty
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn compose_and_invert() {
        let a = Isometry::rotation_about(
            &Point::from_ints(1, 2),
            &RationalAngle::new(rat(3, 5), rat(4, 5)).unwrap(),
        );
        let b = Isometry::translation(&Point::from_ints(-3, 7));
        let c = a.compose(&b);
        let p = Point::from_rats(rat(5, 3), rat(-1, 4));
        assert_eq!(c.apply(&p), a.apply(&b.apply(&p)));
        let back = c.inverse().apply(&c.apply(&p));
        assert_eq!(back, p);
    }

    #[test]
    fn half_turn_fixes_center() {
        let c = Point::from_rats(rat(1, 2), rat(3, 4));
        let h = Isometry::half_turn_about(&c);
        assert_eq!(h.apply(&c), c);
        assert_eq!(h.apply(&Point::from_ints(1, 1)), Point::from_rats(rat(0, 1), rat(1, 2)));
    }

    #[test]
    fn segment_mapping() {
        let iso = Isometry::mapping_segment(
            &Point::from_ints(0, 0),
            &Point::from_ints(1, 1),
            &Point::from_ints(4, 0),
            &Point::from_ints(4, 2).midpoint(&Point::from_ints(2, 0)),
        )
        .unwrap();
        iso.validate().unwrap();
        assert_eq!(iso.apply(&Point::from_ints(0, 0)), Point::from_ints(4, 0));
        assert_eq!(iso.apply(&Point::from_ints(1, 1)), Point::from_ints(3, 1));
    }
}
