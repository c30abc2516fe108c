//! Exact number kernel.
//!
//! Everything geometric in this crate is computed over [`CReal`]: reals built
//! from rationals by field operations and square roots, with decidable sign.
//! Values that stay inside a multi-quadratic extension of the rationals (sums
//! `Σ qᵢ·√Nᵢ`) are kept in a canonical normal form ([`quad::QuadSum`]) where
//! zero-testing is purely symbolic; everything else falls back to an
//! expression DAG compared via adaptive interval refinement with a
//! degree-based separation bound.
//!
//! Construction angles are [`RationalAngle`]s (exactly rational sine and
//! cosine), so rotating rational data keeps it rational. Irrational rotations
//! appear only where a quadratic extension is genuinely required (the aligning
//! rotation of the rectangle-to-rectangle dissection) and in derived lengths.

mod angle;
mod creal;
mod interval;
mod quad;

pub use angle::{rational_angle_below, rational_angle_below_seeded, RationalAngle};
pub use creal::CReal;
pub use interval::Interval;
pub use quad::QuadSum;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for the arbitrary-precision rationals used throughout.
pub type Rat = BigRational;

/// Build a rational from an integer pair. Panics on zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Build a rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("malformed expression: {0}")]
    MalformedExpression(String),
    #[error("rational approximation exceeded max denominator {0}")]
    DenominatorLimit(u64),
}
