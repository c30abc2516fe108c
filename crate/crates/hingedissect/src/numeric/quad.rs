//! Canonical multi-quadratic sums `Σ qᵢ·√Nᵢ`.
//!
//! A [`QuadSum`] stores finitely many terms `qᵢ·√Nᵢ` with rational `qᵢ ≠ 0`
//! and positive integer radicands `Nᵢ`, kept pairwise *incommensurable*: for
//! distinct stored radicands, `Nᵢ·Nⱼ` is never a perfect square. Square roots
//! of distinct squarefree integers are linearly independent over ℚ, and
//! commensurability classes correspond exactly to squarefree cores, so under
//! this invariant a sum is zero iff it has no terms. All of add / sub / mul /
//! div / (partial) sqrt stay inside the representation; only perfect-square
//! tests and gcds on integers are needed, never factorization.

use super::interval::Interval;
use super::{NumericError, Rat};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn exact_sqrt_rat(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = exact_sqrt(q.numer().magnitude())?;
    let d = exact_sqrt(q.denom().magnitude())?;
    Some(Rat::new(BigInt::from(n), BigInt::from(d)))
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Pull square factors out of a radicand: returns `(m, r)` with `n = m²·r`.
///
/// `r` is not guaranteed squarefree (that would need factoring); the
/// commensurability tests below stay sound regardless.
fn reduce_radicand(mut n: BigUint) -> (BigUint, BigUint) {
    debug_assert!(!n.is_zero());
    if let Some(s) = exact_sqrt(&n) {
        return (s, BigUint::one());
    }
    let mut out = BigUint::one();
    for p in SMALL_PRIMES {
        let p2 = BigUint::from(p) * BigUint::from(p);
        loop {
            let (q, r) = n.div_rem(&p2);
            if r.is_zero() {
                n = q;
                out *= BigUint::from(p);
            } else {
                break;
            }
        }
    }
    if let Some(s) = exact_sqrt(&n) {
        return (out * s, BigUint::one());
    }
    (out, n)
}

/// A canonical element of a multi-quadratic extension of ℚ.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadSum {
    /// Sorted by radicand; radicand `1` holds the rational part.
    terms: Vec<(Rat, BigUint)>,
}

impl QuadSum {
    pub fn zero() -> Self {
        QuadSum { terms: Vec::new() }
    }

    pub fn from_rat(q: Rat) -> Self {
        let mut s = QuadSum::zero();
        if !q.is_zero() {
            s.terms.push((q, BigUint::one()));
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 if self.terms[0].1.is_one() => Some(self.terms[0].0.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(Rat, BigUint)] {
        &self.terms
    }

    /// Fold `q·√n` into the sum, preserving the incommensurability invariant.
    fn push_term(&mut self, q: Rat, n: BigUint) {
        if q.is_zero() {
            return;
        }
        let (m, r) = reduce_radicand(n);
        let q = q * Rat::from(BigInt::from(m));
        // Look for an existing commensurable radicand.
        for i in 0..self.terms.len() {
            let ni = &self.terms[i].1;
            let prod = ni * &r;
            if let Some(s) = exact_sqrt(&prod) {
                // √r = s/ni · √ni
                let scale = Rat::new(BigInt::from(s), BigInt::from(ni.clone()));
                self.terms[i].0 += q * scale;
                if self.terms[i].0.is_zero() {
                    self.terms.remove(i);
                }
                return;
            }
        }
        let pos = self
            .terms
            .binary_search_by(|t| t.1.cmp(&r))
            .unwrap_or_else(|p| p);
        self.terms.insert(pos, (q, r));
    }

    pub fn add(&self, other: &QuadSum) -> QuadSum {
        let mut out = self.clone();
        for (q, n) in &other.terms {
            out.push_term(q.clone(), n.clone());
        }
        out
    }

    pub fn neg(&self) -> QuadSum {
        QuadSum {
            terms: self.terms.iter().map(|(q, n)| (-q.clone(), n.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &QuadSum) -> QuadSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QuadSum) -> QuadSum {
        let mut out = QuadSum::zero();
        for (q1, n1) in &self.terms {
            for (q2, n2) in &other.terms {
                let g = n1.gcd(n2);
                let a = n1 / &g;
                let b = n2 / &g;
                let coeff = q1 * q2 * Rat::from(BigInt::from(g));
                out.push_term(coeff, a * b);
            }
        }
        out
    }

    pub fn mul_rat(&self, q: &Rat) -> QuadSum {
        if q.is_zero() {
            return QuadSum::zero();
        }
        QuadSum {
            terms: self.terms.iter().map(|(c, n)| (c * q, n.clone())).collect(),
        }
    }

    pub fn inv(&self) -> Result<QuadSum, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(QuadSum::from_rat(q.recip()));
        }
        if self.terms.len() == 1 {
            // 1/(q√n) = √n/(q·n)
            let (q, n) = &self.terms[0];
            let mut out = QuadSum::zero();
            out.push_term((q * Rat::from(BigInt::from(n.clone()))).recip(), n.clone());
            return Ok(out);
        }
        // General case: conjugate over a gcd-free basis of the radicands.
        let radicands: Vec<BigUint> = self
            .terms
            .iter()
            .filter(|(_, n)| !n.is_one())
            .map(|(_, n)| n.clone())
            .collect();
        let bases = factor_refine(&radicands);
        assert!(bases.len() <= 63, "too many independent radicals");
        let masked: Vec<(Rat, u64)> = self
            .terms
            .iter()
            .map(|(q, n)| {
                let (outside, mask) = mask_of(n, &bases);
                (q * Rat::from(BigInt::from(outside)), mask)
            })
            .collect();
        let inv = inv_masked(merge_masked(masked), &bases);
        let mut out = QuadSum::zero();
        for (q, mask) in inv {
            out.push_term(q, radicand_of_mask(mask, &bases));
        }
        Ok(out)
    }

    pub fn div(&self, other: &QuadSum) -> Result<QuadSum, NumericError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact square root inside the representation, when one exists.
    ///
    /// Handles rationals, and two-term values `a + b√n` that denest over ℚ
    /// (the classical criterion: `a² − b²n` a rational square). The caller
    /// must already know the value is nonnegative.
    pub fn sqrt_exact(&self) -> Option<QuadSum> {
        if self.is_zero() {
            return Some(QuadSum::zero());
        }
        if let Some(q) = self.as_rational() {
            debug_assert!(!q.is_negative());
            let (n, d) = (q.numer().magnitude().clone(), q.denom().magnitude().clone());
            let mut out = QuadSum::zero();
            out.push_term(Rat::new(BigInt::one(), BigInt::from(d.clone())), n * d);
            return Some(out);
        }
        if self.terms.len() == 2 && self.terms[0].1.is_one() {
            // a + b√n with a, b rational.
            let a = &self.terms[0].0;
            let b = &self.terms[1].0;
            let n = Rat::from(BigInt::from(self.terms[1].1.clone()));
            let disc = a * a - b * b * n;
            let c = exact_sqrt_rat(&disc)?;
            let two = Rat::from(BigInt::from(2));
            let x = (a + &c) / &two;
            let y = (a - &c) / &two;
            if x.is_negative() || y.is_negative() {
                return None;
            }
            let sx = QuadSum::from_rat(x).sqrt_exact()?;
            let sy = QuadSum::from_rat(y).sqrt_exact()?;
            let cand = if b.is_negative() { sx.sub(&sy) } else { sx.add(&sy) };
            if cand.mul(&cand) == *self && cand.sign() != Ordering::Less {
                return Some(cand);
            }
            None
        } else {
            None
        }
    }

    /// Exact sign. Zero is symbolic; nonzero signs come from interval
    /// refinement, which must terminate because the value is nonzero.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.len() == 1 {
            return self.terms[0].0.cmp(&Rat::zero());
        }
        let mut bits = 32u32;
        loop {
            let iv = self.approx(bits);
            if iv.lo.is_positive() {
                return Ordering::Greater;
            }
            if iv.hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
            assert!(bits <= 1 << 24, "sign refinement ran away on a nonzero value");
        }
    }

    /// Enclosing interval with `bits` bits of square-root precision.
    pub fn approx(&self, bits: u32) -> Interval {
        let mut acc = Interval::exact(Rat::zero());
        for (q, n) in &self.terms {
            let s = if n.is_one() {
                Interval::exact(Rat::one())
            } else {
                Interval::sqrt_of_int(n, bits)
            };
            acc = acc.add(&s.mul_rat(q));
        }
        acc
    }
}

fn merge_masked(terms: Vec<(Rat, u64)>) -> Vec<(Rat, u64)> {
    let mut out: Vec<(Rat, u64)> = Vec::new();
    for (q, m) in terms {
        if let Some(t) = out.iter_mut().find(|t| t.1 == m) {
            t.0 += q;
        } else {
            out.push((q, m));
        }
    }
    out.retain(|t| !t.0.is_zero());
    out
}

fn mul_masked(a: &[(Rat, u64)], b: &[(Rat, u64)], bases: &[BigUint]) -> Vec<(Rat, u64)> {
    let mut out = Vec::new();
    for (q1, m1) in a {
        for (q2, m2) in b {
            let common = m1 & m2;
            let mut q = q1 * q2;
            for (i, base) in bases.iter().enumerate() {
                if common >> i & 1 == 1 {
                    q *= Rat::from(BigInt::from(base.clone()));
                }
            }
            out.push((q, m1 ^ m2));
        }
    }
    merge_masked(out)
}

fn inv_masked(terms: Vec<(Rat, u64)>, bases: &[BigUint]) -> Vec<(Rat, u64)> {
    assert!(!terms.is_empty());
    if terms.len() == 1 {
        let (q, m) = &terms[0];
        let mut scale = q.clone();
        for (i, base) in bases.iter().enumerate() {
            if m >> i & 1 == 1 {
                scale *= Rat::from(BigInt::from(base.clone()));
            }
        }
        return vec![(scale.recip(), *m)];
    }
    let union: u64 = terms.iter().fold(0, |acc, t| acc | t.1);
    let g = 63 - union.leading_zeros() as u64;
    let bit = 1u64 << g;
    let x: Vec<_> = terms.iter().filter(|t| t.1 & bit == 0).cloned().collect();
    let y: Vec<_> = terms.iter().filter(|t| t.1 & bit != 0).cloned().collect();
    if x.is_empty() {
        // Pure √g multiple: 1/(√g·Z) = √g·(1/Z)/g.
        let stripped: Vec<_> = y.iter().map(|(q, m)| (q.clone(), m & !bit)).collect();
        let r = inv_masked(stripped, bases);
        let gval = Rat::from(BigInt::from(bases[g as usize].clone()));
        return r
            .into_iter()
            .map(|(q, m)| (q / &gval, m | bit))
            .collect();
    }
    // 1/(X+Y) = (X−Y) / (X²−Y²), and X²−Y² is free of √g.
    let neg_y: Vec<_> = y.iter().map(|(q, m)| (-q.clone(), *m)).collect();
    let x2 = mul_masked(&x, &x, bases);
    let y2 = mul_masked(&y, &y, bases);
    let denom = merge_masked(
        x2.into_iter()
            .chain(y2.into_iter().map(|(q, m)| (-q, m)))
            .collect(),
    );
    let r = inv_masked(denom, bases);
    let num: Vec<_> = x.into_iter().chain(neg_y).collect();
    mul_masked(&num, &r, bases)
}

fn mask_of(n: &BigUint, bases: &[BigUint]) -> (BigUint, u64) {
    let mut n = n.clone();
    let mut outside = BigUint::one();
    let mut mask = 0u64;
    for (i, b) in bases.iter().enumerate() {
        let mut e = 0u32;
        loop {
            let (q, r) = n.div_rem(b);
            if r.is_zero() {
                n = q;
                e += 1;
            } else {
                break;
            }
        }
        for _ in 0..e / 2 {
            outside *= b;
        }
        if e % 2 == 1 {
            mask |= 1 << i;
        }
    }
    debug_assert!(n.is_one(), "radicand not covered by refined basis");
    (outside, mask)
}

fn radicand_of_mask(mask: u64, bases: &[BigUint]) -> BigUint {
    let mut n = BigUint::one();
    for (i, b) in bases.iter().enumerate() {
        if mask >> i & 1 == 1 {
            n *= b;
        }
    }
    n
}

/// Gcd-free (pairwise coprime) basis covering all the given integers.
fn factor_refine(nums: &[BigUint]) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = Vec::new();
    for n in nums {
        insert_refined(&mut out, n.clone());
    }
    out
}

fn insert_refined(out: &mut Vec<BigUint>, mut n: BigUint) {
    'outer: loop {
        if n.is_one() {
            return;
        }
        for i in 0..out.len() {
            let g = n.gcd(&out[i]);
            if !g.is_one() {
                if out[i] == g {
                    n /= &g;
                    continue 'outer;
                }
                let b = out.remove(i);
                insert_refined(out, &b / &g);
                insert_refined(out, g);
                continue 'outer;
            }
        }
        out.push(n);
        return;
    }
}

impl fmt::Debug for QuadSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (q, n)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if n.is_one() {
                write!(f, "{}", q)?;
            } else {
                write!(f, "{}·√{}", q, n)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn qs(n: i64, d: i64) -> QuadSum {
        QuadSum::from_rat(rat(n, d))
    }

    fn sqrt_int(n: u64) -> QuadSum {
        QuadSum::from_rat(rat(n as i64, 1)).sqrt_exact().unwrap()
    }

    #[test]
    fn sqrt2_times_sqrt2_is_two() {
        let s2 = sqrt_int(2);
        assert_eq!(s2.mul(&s2), qs(2, 1));
    }

    #[test]
    fn sqrt8_collapses_to_2_sqrt2() {
        let s8 = sqrt_int(8);
        let s2 = sqrt_int(2);
        assert_eq!(s8, s2.mul_rat(&rat(2, 1)));
        assert!(s8.sub(&s2.add(&s2)).is_zero());
    }

    #[test]
    fn denest_five_plus_two_sqrt_six() {
        // √(5+2√6) = √2+√3
        let inner = qs(5, 1).add(&sqrt_int(6).mul_rat(&rat(2, 1)));
        let root = inner.sqrt_exact().expect("denesting");
        assert_eq!(root, sqrt_int(2).add(&sqrt_int(3)));
    }

    #[test]
    fn division_three_radicals() {
        // x = 1 + √2 + √3 + √6; check x · (1/x) == 1.
        let x = qs(1, 1)
            .add(&sqrt_int(2))
            .add(&sqrt_int(3))
            .add(&sqrt_int(6));
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv), qs(1, 1));
    }

    #[test]
    fn division_incommensurable_pair() {
        let x = sqrt_int(2).add(&sqrt_int(5)).sub(&qs(7, 3));
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv), qs(1, 1));
    }

    #[test]
    fn sign_of_small_difference() {
        // √2+√3 vs √(5+2√6) − both routes agree exactly.
        let lhs = sqrt_int(2).add(&sqrt_int(3));
        let rhs = qs(5, 1).add(&sqrt_int(6).mul_rat(&rat(2, 1)));
        assert_eq!(lhs.mul(&lhs), rhs);
        assert_eq!(lhs.sign(), Ordering::Greater);
        assert_eq!(lhs.sub(&lhs).sign(), Ordering::Equal);
        assert_eq!(sqrt_int(2).sub(&qs(3, 2)).sign(), Ordering::Less);
    }
}
