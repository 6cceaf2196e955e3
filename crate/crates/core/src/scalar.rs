//! Scalar backends: exact rationals and `f64` with a zero tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Zero tolerance carried through every decision an algorithm makes.
///
/// A value `x` counts as zero when `|x| <= eps * scale`. The exact backend
/// always uses `eps = 0`, so only true zeros qualify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub eps: f64,
}

impl Tol {
    pub const DEFAULT_EPS: f64 = 1e-10;

    pub fn new(eps: f64) -> Self {
        assert!(eps >= 0.0, "tolerance must be nonnegative");
        Tol { eps }
    }

    pub fn exact() -> Self {
        Tol { eps: 0.0 }
    }

    /// `|x| <= eps * scale` for an already computed magnitude.
    pub fn negligible(&self, magnitude: f64, scale: f64) -> bool {
        magnitude <= self.eps * scale
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol { eps: Self::DEFAULT_EPS }
    }
}

/// Field of real scalars that quaternions are built over.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the rational backend, where all arithmetic is exact.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// The exact rational value, when the backend has one.
    fn to_rational(&self) -> Option<BigRational>;
    fn to_f64(&self) -> f64;

    /// Exact comparison with zero, ignoring tolerance.
    fn is_exact_zero(&self) -> bool;
    fn abs_val(&self) -> Self;
    fn is_neg(&self) -> bool;

    /// `|self| <= tol.eps * scale`.
    fn is_zero_tol(&self, tol: &Tol, scale: f64) -> bool {
        if Self::EXACT || tol.eps == 0.0 {
            self.is_exact_zero()
        } else {
            self.to_f64().abs() <= tol.eps * scale
        }
    }

    /// Square root when it exists in the backend: perfect rational squares
    /// on the exact side, any nonnegative value on the float side.
    fn try_sqrt(&self) -> Option<Self>;

    /// Parses an integer, decimal (optionally with exponent) or `p/q` literal.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Canonical text form: `p/q` for rationals, shortest round-trip for floats.
    fn format(&self) -> String;

    /// Hamilton product of `(re, i, j, k)` tuples. Backends may override it
    /// with a faster route to the same value.
    fn hamilton(a: [&Self; 4], b: [&Self; 4]) -> [Self; 4] {
        let m = |x: &Self, y: &Self| x.clone() * y.clone();
        let [a0, a1, a2, a3] = a;
        let [b0, b1, b2, b3] = b;
        [
            m(a0, b0) - m(a1, b1) - m(a2, b2) - m(a3, b3),
            m(a0, b1) + m(a1, b0) + m(a2, b3) - m(a3, b2),
            m(a0, b2) - m(a1, b3) + m(a2, b0) + m(a3, b1),
            m(a0, b3) + m(a1, b2) - m(a2, b1) + m(a3, b0),
        ]
    }

    /// Tolerance that fits the backend when the caller gives none.
    fn default_tol() -> Tol {
        if Self::EXACT {
            Tol::exact()
        } else {
            Tol::default()
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn try_sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s)
    }
    /// Works on integer numerators over a common denominator so that only
    /// the four results get reduced.
    fn hamilton(a: [&Self; 4], b: [&Self; 4]) -> [Self; 4] {
        let (an, ad) = common_denominator(a);
        let (bn, bd) = common_denominator(b);
        let m = |x: usize, y: usize| &an[x] * &bn[y];
        let den = ad * bd;
        let nums = [
            m(0, 0) - m(1, 1) - m(2, 2) - m(3, 3),
            m(0, 1) + m(1, 0) + m(2, 3) - m(3, 2),
            m(0, 2) - m(1, 3) + m(2, 0) + m(3, 1),
            m(0, 3) + m(1, 2) - m(2, 1) + m(3, 0),
        ];
        nums.map(|n| BigRational::new(n, den.clone()))
    }

    fn format(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(q: &BigRational) -> Self {
        ratio_to_f64(q)
    }
    fn to_rational(&self) -> Option<BigRational> {
        None
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs_val(&self) -> Self {
        f64::abs(*self)
    }
    fn is_neg(&self) -> bool {
        *self < 0.0
    }
    fn try_sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(f64::sqrt(*self))
        } else {
            None
        }
    }
    fn parse_literal(s: &str) -> Option<Self> {
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            return Some(p / q);
        }
        s.trim().parse().ok()
    }
    fn format(&self) -> String {
        format_f64(*self)
    }
}

/// Integer numerators of four rationals over their least common denominator.
fn common_denominator(v: [&BigRational; 4]) -> ([BigInt; 4], BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums = v.map(|x| x.numer() * (&den / x.denom()));
    (nums, den)
}

/// Shortest text that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    format!("{:?}", x)
}

/// Converts a big rational to the nearest-ish `f64`, surviving huge
/// numerators and denominators.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        q.numer() / (q.denom() << (shift as usize))
    } else {
        (q.numer() << ((-shift) as usize)) / q.denom()
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if Signed::is_negative(q) {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if Zero::is_zero(&q) {
            return None;
        }
        return Some(p / q);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Some(if neg { -value } else { value })
}
