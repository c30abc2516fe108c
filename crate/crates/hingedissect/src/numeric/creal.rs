//! Constructible reals with decidable comparison.
//!
//! A [`CReal`] is a real number built from rationals by `+ − × ÷ √`. Values
//! that normalize into a multi-quadratic sum are held in that exact canonical
//! form; square roots that do not denest produce expression-DAG nodes compared
//! by adaptive interval refinement, with a degree-based separation bound
//! deciding equality (the zero test terminates because a nonzero algebraic
//! value of bounded degree and height cannot be arbitrarily small).

use super::interval::Interval;
use super::quad::QuadSum;
use super::{NumericError, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

static NODE_IDS: AtomicU64 = AtomicU64::new(1);

#[derive(Clone)]
enum Repr {
    Quad(QuadSum),
    Ext(Arc<ExtNode>),
}

enum ExtOp {
    Add(CReal, CReal),
    Sub(CReal, CReal),
    Mul(CReal, CReal),
    Div(CReal, CReal),
    Neg(CReal),
    Sqrt(CReal),
}

struct ExtNode {
    op: ExtOp,
    /// Distinct square-root node ids under this node; bounds the algebraic
    /// degree by 2^k.
    sqrt_ids: BTreeSet<u64>,
    /// log2 upper bounds on conjugates of numerator/denominator in the
    /// BFMSS-style algebraic-integer decomposition.
    u_log2: f64,
    l_log2: f64,
    cache: Mutex<Option<(u32, Interval)>>,
}

/// An exact constructible real.
#[derive(Clone)]
pub struct CReal(Repr);

impl CReal {
    pub fn zero() -> Self {
        CReal(Repr::Quad(QuadSum::zero()))
    }

    pub fn one() -> Self {
        CReal::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CReal(Repr::Quad(QuadSum::from_rat(Rat::from(BigInt::from(n)))))
    }

    pub fn from_rat(q: Rat) -> Self {
        CReal(Repr::Quad(QuadSum::from_rat(q)))
    }

    pub fn as_quad(&self) -> Option<&QuadSum> {
        match &self.0 {
            Repr::Quad(q) => Some(q),
            Repr::Ext(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.as_quad().and_then(|q| q.as_rational())
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn add(&self, other: &CReal) -> CReal {
        match (&self.0, &other.0) {
            (Repr::Quad(a), Repr::Quad(b)) => CReal(Repr::Quad(a.add(b))),
            _ => CReal::ext(ExtOp::Add(self.clone(), other.clone())),
        }
    }

    pub fn sub(&self, other: &CReal) -> CReal {
        match (&self.0, &other.0) {
            (Repr::Quad(a), Repr::Quad(b)) => CReal(Repr::Quad(a.sub(b))),
            (Repr::Ext(a), Repr::Ext(b)) if Arc::ptr_eq(a, b) => CReal::zero(),
            _ => CReal::ext(ExtOp::Sub(self.clone(), other.clone())),
        }
    }

    pub fn mul(&self, other: &CReal) -> CReal {
        match (&self.0, &other.0) {
            (Repr::Quad(a), Repr::Quad(b)) => CReal(Repr::Quad(a.mul(b))),
            _ => CReal::ext(ExtOp::Mul(self.clone(), other.clone())),
        }
    }

    pub fn div(&self, other: &CReal) -> Result<CReal, NumericError> {
        if other.sign() == Ordering::Equal {
            return Err(NumericError::DivisionByZero);
        }
        match (&self.0, &other.0) {
            (Repr::Quad(a), Repr::Quad(b)) => Ok(CReal(Repr::Quad(a.div(b)?))),
            _ => Ok(CReal::ext(ExtOp::Div(self.clone(), other.clone()))),
        }
    }

    pub fn neg(&self) -> CReal {
        match &self.0 {
            Repr::Quad(a) => CReal(Repr::Quad(a.neg())),
            _ => CReal::ext(ExtOp::Neg(self.clone())),
        }
    }

    /// Exact square root. Errors on negative input.
    pub fn sqrt(&self) -> Result<CReal, NumericError> {
        match self.sign() {
            Ordering::Less => Err(NumericError::NegativeSqrt),
            Ordering::Equal => Ok(CReal::zero()),
            Ordering::Greater => {
                if let Repr::Quad(q) = &self.0 {
                    if let Some(r) = q.sqrt_exact() {
                        return Ok(CReal(Repr::Quad(r)));
                    }
                }
                Ok(CReal::ext(ExtOp::Sqrt(self.clone())))
            }
        }
    }

    pub fn sign(&self) -> Ordering {
        match &self.0 {
            Repr::Quad(q) => q.sign(),
            Repr::Ext(n) => sign_ext(n),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn compare(&self, other: &CReal) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Quad(a), Repr::Quad(b)) => a.sub(b).sign(),
            _ => self.sub(other).sign(),
        }
    }

    /// Enclosing interval at the given square-root precision.
    pub fn approx(&self, bits: u32) -> Interval {
        match &self.0 {
            Repr::Quad(q) => q.approx(bits),
            Repr::Ext(n) => {
                let mut b = bits;
                loop {
                    if let Some(iv) = eval_ext(n, b) {
                        return iv;
                    }
                    b *= 2;
                }
            }
        }
    }

    /// A rational strictly below / above the value (for extracting safe
    /// rational bounds from irrational quantities).
    pub fn rational_below(&self) -> Rat {
        if let Some(q) = self.as_rational() {
            return q;
        }
        let mut bits = 32;
        loop {
            let iv = self.approx(bits);
            if self.compare(&CReal::from_rat(iv.lo.clone())) == Ordering::Greater {
                return iv.lo;
            }
            bits *= 2;
        }
    }

    pub fn rational_above(&self) -> Rat {
        if let Some(q) = self.as_rational() {
            return q;
        }
        let mut bits = 32;
        loop {
            let iv = self.approx(bits);
            if self.compare(&CReal::from_rat(iv.hi.clone())) == Ordering::Less {
                return iv.hi;
            }
            bits *= 2;
        }
    }

    /// Conservative f64 enclosure, for bounding-box filtering only.
    pub fn f64_range(&self) -> (f64, f64) {
        let iv = self.approx(64);
        let lo = rat_to_f64(&iv.lo);
        let hi = rat_to_f64(&iv.hi);
        (next_down(lo), next_up(hi))
    }

    /// Deterministic fixed-precision decimal rendering (round half up, then
    /// trailing zeros trimmed).
    pub fn to_decimal(&self, digits: u32) -> String {
        let pow = BigInt::from(10u32).pow(digits);
        let scale = Rat::from(pow.clone());
        let mut bits = 64;
        let value = loop {
            let iv = self.approx(bits);
            if iv.width() * &scale < Rat::new(BigInt::one(), BigInt::from(2)) {
                break (&iv.lo + &iv.hi) / Rat::from(BigInt::from(2));
            }
            bits *= 2;
        };
        let scaled = value * &scale + Rat::new(BigInt::one(), BigInt::from(2));
        let units = scaled.floor().to_integer();
        let neg = units.is_negative();
        let mag = units.magnitude().clone();
        let (int_part, frac_part) = num_integer::Integer::div_rem(&mag, pow.magnitude());
        let mut frac = frac_part.to_string();
        while frac.len() < digits as usize {
            frac.insert(0, '0');
        }
        let frac = frac.trim_end_matches('0');
        let sign = if neg && !(int_part.is_zero() && frac.is_empty()) { "-" } else { "" };
        if frac.is_empty() {
            format!("{}{}", sign, int_part)
        } else {
            format!("{}{}.{}", sign, int_part, frac)
        }
    }

    fn ext(op: ExtOp) -> CReal {
        let mut ids = BTreeSet::new();
        let (u, l);
        match &op {
            ExtOp::Add(a, b) | ExtOp::Sub(a, b) => {
                ids.extend(sqrt_ids(a));
                ids.extend(sqrt_ids(b));
                let (ua, la) = bf_bounds(a);
                let (ub, lb) = bf_bounds(b);
                u = log2_add(ua + lb, ub + la) + 1.0;
                l = la + lb + 1.0;
            }
            ExtOp::Mul(a, b) => {
                ids.extend(sqrt_ids(a));
                ids.extend(sqrt_ids(b));
                let (ua, la) = bf_bounds(a);
                let (ub, lb) = bf_bounds(b);
                u = ua + ub + 1.0;
                l = la + lb + 1.0;
            }
            ExtOp::Div(a, b) => {
                ids.extend(sqrt_ids(a));
                ids.extend(sqrt_ids(b));
                let (ua, la) = bf_bounds(a);
                let (ub, lb) = bf_bounds(b);
                u = ua + lb + 1.0;
                l = la + ub + 1.0;
            }
            ExtOp::Neg(a) => {
                ids.extend(sqrt_ids(a));
                let (ua, la) = bf_bounds(a);
                u = ua;
                l = la;
            }
            ExtOp::Sqrt(a) => {
                ids.extend(sqrt_ids(a));
                ids.insert(NODE_IDS.fetch_add(1, AtomicOrdering::Relaxed));
                let (ua, la) = bf_bounds(a);
                u = (ua + la) / 2.0 + 1.0;
                l = la;
            }
        }
        CReal(Repr::Ext(Arc::new(ExtNode {
            op,
            sqrt_ids: ids,
            u_log2: u.max(0.0),
            l_log2: l.max(0.0),
            cache: Mutex::new(None),
        })))
    }
}

fn rat_to_f64(q: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let bits = if x == 0.0 { 1 } else if x > 0.0 { x.to_bits() + 1 } else { x.to_bits() - 1 };
    f64::from_bits(bits)
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn log2_rat_upper(q: &Rat) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    q.numer().magnitude().bits() as f64 - q.denom().magnitude().bits() as f64 + 1.0
}

fn sqrt_ids(c: &CReal) -> BTreeSet<u64> {
    match &c.0 {
        Repr::Quad(q) => {
            // Radicands appearing in an exact leaf contribute to the degree
            // bound; identical radicands share a registry id.
            q.terms()
                .iter()
                .filter(|(_, n)| !n.is_one())
                .map(|(_, n)| radicand_registry_id(n))
                .collect()
        }
        Repr::Ext(n) => n.sqrt_ids.clone(),
    }
}

fn radicand_registry_id(n: &num_bigint::BigUint) -> u64 {
    use std::collections::HashMap;
    use std::sync::OnceLock;
    static REGISTRY: OnceLock<Mutex<HashMap<num_bigint::BigUint, u64>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = reg.lock().unwrap();
    let next = map.len() as u64 + (1 << 32);
    *map.entry(n.clone()).or_insert(next)
}

fn bf_bounds(c: &CReal) -> (f64, f64) {
    match &c.0 {
        Repr::Quad(q) => {
            // Clear denominators: value·L is an algebraic integer whose
            // conjugates are bounded by Σ|qᵢ|·L·√Nᵢ.
            let mut l = BigInt::one();
            for (coef, _) in q.terms() {
                l = num_integer::Integer::lcm(&l, coef.denom());
            }
            let llog = l.magnitude().bits() as f64 + 1.0;
            let mut ulog = 0.0f64;
            for (coef, n) in q.terms() {
                let t = log2_rat_upper(coef) + llog + n.bits() as f64 / 2.0 + 1.0;
                ulog = log2_add(ulog, t);
            }
            (ulog.max(0.0), llog.max(0.0))
        }
        Repr::Ext(n) => (n.u_log2, n.l_log2),
    }
}

fn sign_ext(node: &ExtNode) -> Ordering {
    let k = node.sqrt_ids.len() as f64;
    let degree_minus_one = (k.exp2() - 1.0).max(1.0);
    let sep_bits = (degree_minus_one * node.u_log2 + node.l_log2).ceil() + 8.0;
    let mut bits: u32 = 64;
    loop {
        if let Some(iv) = eval_ext(node, bits) {
            if iv.lo.is_positive() {
                return Ordering::Greater;
            }
            if iv.hi.is_negative() {
                return Ordering::Less;
            }
            // width < 2^-sep  ⇒  the value is closer to zero than any nonzero
            // value of this degree/height can be.
            let width = iv.width();
            if width.is_zero() || log2_rat_upper(&width) < -sep_bits {
                return Ordering::Equal;
            }
        }
        bits = bits.checked_mul(2).expect("separation refinement overflow");
    }
}

fn eval_ext(node: &ExtNode, bits: u32) -> Option<Interval> {
    {
        let cache = node.cache.lock().unwrap();
        if let Some((b, iv)) = cache.as_ref() {
            if *b >= bits {
                return Some(iv.clone());
            }
        }
    }
    let iv = match &node.op {
        ExtOp::Add(a, b) => eval_creal(a, bits)?.add(&eval_creal(b, bits)?),
        ExtOp::Sub(a, b) => eval_creal(a, bits)?.sub(&eval_creal(b, bits)?),
        ExtOp::Mul(a, b) => eval_creal(a, bits)?.mul(&eval_creal(b, bits)?),
        ExtOp::Div(a, b) => eval_creal(a, bits)?.div(&eval_creal(b, bits)?)?,
        ExtOp::Neg(a) => eval_creal(a, bits)?.neg(),
        ExtOp::Sqrt(a) => eval_creal(a, bits)?.sqrt(bits),
    };
    let mut cache = node.cache.lock().unwrap();
    *cache = Some((bits, iv.clone()));
    Some(iv)
}

fn eval_creal(c: &CReal, bits: u32) -> Option<Interval> {
    match &c.0 {
        Repr::Quad(q) => Some(q.approx(bits)),
        Repr::Ext(n) => eval_ext(n, bits),
    }
}

impl PartialEq for CReal {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}
impl Eq for CReal {}
impl PartialOrd for CReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}
impl Ord for CReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Quad(q) => write!(f, "{:?}", q),
            Repr::Ext(_) => write!(f, "{}", self.to_expr_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Prefix-expression serialization.
//
// Grammar (whitespace-separated, fully parenthesized):
//   expr     := rational | "(" op ")"
//   op       := "+" expr expr | "-" expr expr | "*" expr expr
//             | "/" expr expr | "sqrt" expr | "neg" expr
//   rational := ["-"] digits ["/" digits]
// ---------------------------------------------------------------------------

impl CReal {
    pub fn to_expr_string(&self) -> String {
        let mut s = String::new();
        self.write_expr(&mut s);
        s
    }

    fn write_expr(&self, out: &mut String) {
        match &self.0 {
            Repr::Quad(q) => write_quad(q, out),
            Repr::Ext(n) => match &n.op {
                ExtOp::Add(a, b) => write_binary(out, "+", a, b),
                ExtOp::Sub(a, b) => write_binary(out, "-", a, b),
                ExtOp::Mul(a, b) => write_binary(out, "*", a, b),
                ExtOp::Div(a, b) => write_binary(out, "/", a, b),
                ExtOp::Neg(a) => {
                    out.push_str("(neg ");
                    a.write_expr(out);
                    out.push(')');
                }
                ExtOp::Sqrt(a) => {
                    out.push_str("(sqrt ");
                    a.write_expr(out);
                    out.push(')');
                }
            },
        }
    }

    pub fn parse_expr(s: &str) -> Result<CReal, NumericError> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let v = parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(NumericError::MalformedExpression(format!(
                "trailing tokens after expression in {:?}",
                s
            )));
        }
        Ok(v)
    }
}

fn write_binary(out: &mut String, op: &str, a: &CReal, b: &CReal) {
    out.push('(');
    out.push_str(op);
    out.push(' ');
    a.write_expr(out);
    out.push(' ');
    b.write_expr(out);
    out.push(')');
}

fn write_rat(q: &Rat, out: &mut String) {
    if q.denom().is_one() {
        out.push_str(&q.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", q.numer(), q.denom()));
    }
}

fn write_quad(q: &QuadSum, out: &mut String) {
    let terms = q.terms();
    if terms.is_empty() {
        out.push('0');
        return;
    }
    let write_term = |out: &mut String, coef: &Rat, n: &num_bigint::BigUint| {
        if n.is_one() {
            write_rat(coef, out);
        } else if coef.is_one() {
            out.push_str(&format!("(sqrt {})", n));
        } else {
            out.push_str("(* ");
            write_rat(coef, out);
            out.push_str(&format!(" (sqrt {}))", n));
        }
    };
    for _ in 1..terms.len() {
        out.push_str("(+ ");
    }
    write_term(out, &terms[0].0, &terms[0].1);
    for (coef, n) in &terms[1..] {
        out.push(' ');
        write_term(out, coef, n);
        out.push(')');
    }
}

fn tokenize(s: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<CReal, NumericError> {
    let err = |msg: &str| NumericError::MalformedExpression(msg.to_string());
    let tok = tokens.get(*pos).ok_or_else(|| err("unexpected end of input"))?;
    if tok == "(" {
        *pos += 1;
        let op = tokens.get(*pos).ok_or_else(|| err("missing operator"))?.clone();
        *pos += 1;
        let value = match op.as_str() {
            "+" | "-" | "*" | "/" => {
                let a = parse_tokens(tokens, pos)?;
                let b = parse_tokens(tokens, pos)?;
                match op.as_str() {
                    "+" => a.add(&b),
                    "-" => a.sub(&b),
                    "*" => a.mul(&b),
                    _ => a.div(&b)?,
                }
            }
            "sqrt" => parse_tokens(tokens, pos)?.sqrt()?,
            "neg" => parse_tokens(tokens, pos)?.neg(),
            other => return Err(err(&format!("unknown operator {:?}", other))),
        };
        match tokens.get(*pos) {
            Some(t) if t == ")" => {
                *pos += 1;
                Ok(value)
            }
            _ => Err(err("missing closing paren")),
        }
    } else {
        *pos += 1;
        parse_rational(tok).map(CReal::from_rat)
    }
}

fn parse_rational(tok: &str) -> Result<Rat, NumericError> {
    let err = || NumericError::MalformedExpression(format!("bad rational {:?}", tok));
    let (num_str, den_str) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let n: BigInt = num_str.parse().map_err(|_| err())?;
    let d: BigInt = den_str.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_int};

    fn sqrt_i(n: i64) -> CReal {
        CReal::from_int(n).sqrt().unwrap()
    }

    #[test]
    fn compare_sqrt2_squared_with_two() {
        let v = sqrt_i(2).mul(&sqrt_i(2));
        assert_eq!(v.compare(&CReal::from_int(2)), Ordering::Equal);
    }

    #[test]
    fn compare_rational_sums() {
        let lhs = CReal::from_rat(rat(1, 3)).add(&CReal::from_rat(rat(1, 6)));
        assert_eq!(lhs.compare(&CReal::from_rat(rat(1, 2))), Ordering::Equal);
    }

    #[test]
    fn compare_nested_radical_identity() {
        // √2 + √3 == √(5 + 2√6)
        let lhs = sqrt_i(2).add(&sqrt_i(3));
        let inner = CReal::from_int(5).add(&CReal::from_int(2).mul(&sqrt_i(6)));
        let rhs = inner.sqrt().unwrap();
        assert_eq!(lhs.compare(&rhs), Ordering::Equal);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(CReal::from_int(4).sqrt().unwrap(), CReal::from_int(2));
        assert_eq!(CReal::zero().sqrt().unwrap(), CReal::zero());
        let s2 = sqrt_i(2);
        let diff = s2.mul(&s2).sub(&CReal::from_int(2));
        assert!(diff.is_zero());
        assert_eq!(CReal::from_int(-1).sqrt(), Err(NumericError::NegativeSqrt));
    }

    #[test]
    fn field_axioms_under_compare() {
        let a = sqrt_i(7).add(&CReal::from_rat(rat(3, 5)));
        let b = sqrt_i(3).sub(&CReal::from_int(9));
        assert_eq!(a.add(&b).sub(&b), a);
        assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }

    #[test]
    fn ext_path_quartic_root() {
        // 2^(1/4) does not denest; exercises the DAG fallback.
        let q = sqrt_i(2).sqrt().unwrap();
        let fourth = q.mul(&q).mul(&q).mul(&q);
        assert_eq!(fourth.compare(&CReal::from_int(2)), Ordering::Equal);
        assert_eq!(q.compare(&CReal::from_rat(rat(6, 5))), Ordering::Less);
        assert_eq!(q.compare(&CReal::from_rat(rat(11, 10))), Ordering::Greater);
    }

    #[test]
    fn division_by_zero_detected() {
        let z = sqrt_i(2).sub(&sqrt_i(2));
        assert_eq!(CReal::one().div(&z), Err(NumericError::DivisionByZero));
    }

    #[test]
    fn expr_round_trip() {
        let v = sqrt_i(2)
            .add(&CReal::from_rat(rat(-7, 3)))
            .mul(&sqrt_i(5))
            .div(&CReal::from_rat(rat(22, 7)))
            .unwrap();
        let s = v.to_expr_string();
        let back = CReal::parse_expr(&s).unwrap();
        assert_eq!(v, back);

        let e = CReal::parse_expr("(+ (sqrt 2) -1/2)").unwrap();
        assert_eq!(e, sqrt_i(2).sub(&CReal::from_rat(rat(1, 2))));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(CReal::from_rat(rat(1, 4)).to_decimal(12), "0.25");
        assert_eq!(CReal::from_int(3).to_decimal(12), "3");
        assert_eq!(sqrt_i(2).to_decimal(6), "1.414214");
        assert_eq!(CReal::from_rat(rat(-1, 3)).to_decimal(5), "-0.33333");
        assert_eq!(rat_int(0), rat(0, 5));
    }
}
