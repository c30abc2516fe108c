//! Rational interval arithmetic with directed rounding on square roots.
//!
//! Field operations on rational endpoints are exact; only square roots round,
//! outward, at a caller-chosen number of fractional bits.

use super::Rat;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn exact(v: Rat) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn mul_rat(&self, q: &Rat) -> Interval {
        if q.is_negative() {
            Interval { lo: &self.hi * q, hi: &self.lo * q }
        } else {
            Interval { lo: &self.lo * q, hi: &self.hi * q }
        }
    }

    /// None if the divisor interval straddles zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let inv = Interval { lo: other.hi.recip(), hi: other.lo.recip() };
        Some(self.mul(&inv))
    }

    /// Outward-rounded square root; negative lower bounds are clamped to zero
    /// (callers only take square roots of values already proven nonnegative).
    pub fn sqrt(&self, bits: u32) -> Interval {
        let lo = if self.lo.is_negative() { Rat::zero() } else { sqrt_rat_floor(&self.lo, bits) };
        let hi = if self.hi.is_negative() { Rat::zero() } else { sqrt_rat_ceil(&self.hi, bits) };
        Interval { lo, hi }
    }

    /// √n for a positive integer n, with `bits` fractional bits.
    pub fn sqrt_of_int(n: &BigUint, bits: u32) -> Interval {
        let scaled = n << (2 * bits as usize);
        let root = scaled.sqrt();
        let denom = BigInt::from(BigUint::one() << bits as usize);
        let lo = Rat::new(BigInt::from(root.clone()), denom.clone());
        let exact = &root * &root == scaled;
        let hi = if exact {
            lo.clone()
        } else {
            Rat::new(BigInt::from(root + BigUint::one()), denom)
        };
        Interval { lo, hi }
    }
}

fn sqrt_rat_floor(q: &Rat, bits: u32) -> Rat {
    debug_assert!(!q.is_negative());
    // √(n/d) = √(n·d)/d ≥ floor(√(n·d·4^bits)) / (d·2^bits)
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let scaled = n * d << (2 * bits as usize);
    let root = scaled.sqrt();
    Rat::new(BigInt::from(root), BigInt::from(d << bits as usize))
}

fn sqrt_rat_ceil(q: &Rat, bits: u32) -> Rat {
    debug_assert!(!q.is_negative());
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let scaled = n * d << (2 * bits as usize);
    let root = scaled.sqrt();
    let exact = &root * &root == scaled;
    let num = if exact { root } else { root + BigUint::one() };
    Rat::new(BigInt::from(num), BigInt::from(d << bits as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn sqrt_two_interval_tightens() {
        let a = Interval::exact(rat(2, 1)).sqrt(8);
        let b = Interval::exact(rat(2, 1)).sqrt(64);
        assert!(b.width() < a.width());
        assert!(a.lo.clone() * a.lo.clone() <= rat(2, 1));
        assert!(a.hi.clone() * a.hi.clone() >= rat(2, 1));
    }

    #[test]
    fn exact_square_roots_are_point_intervals() {
        let iv = Interval::exact(rat(9, 4)).sqrt(16);
        assert_eq!(iv.lo, rat(3, 2));
        assert_eq!(iv.hi, rat(3, 2));
    }
}
