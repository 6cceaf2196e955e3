//! Quaternions and their conjugacy classes.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tol};

/// `re + i*x1 + j*x2 + k*x3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<S> {
    pub re: S,
    pub i: S,
    pub j: S,
    pub k: S,
}

impl<S: Scalar> Quaternion<S> {
    pub fn new(re: S, i: S, j: S, k: S) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn from_ints(re: i64, i: i64, j: i64, k: i64) -> Self {
        Self::new(S::from_i64(re), S::from_i64(i), S::from_i64(j), S::from_i64(k))
    }

    pub fn from_f64s(re: f64, i: f64, j: f64, k: f64) -> Self {
        Self::new(S::from_f64(re), S::from_f64(i), S::from_f64(j), S::from_f64(k))
    }

    pub fn real(x: S) -> Self {
        Self::new(x, S::zero(), S::zero(), S::zero())
    }

    pub fn zero() -> Self {
        Self::real(S::zero())
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn unit_i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn unit_j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn unit_k() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.i.clone(), -self.j.clone(), -self.k.clone())
    }

    /// `|q|^2`.
    pub fn norm2(&self) -> S {
        self.re.clone() * self.re.clone() + self.imag_norm2()
    }

    /// `|Im q|^2`.
    pub fn imag_norm2(&self) -> S {
        self.i.clone() * self.i.clone()
            + self.j.clone() * self.j.clone()
            + self.k.clone() * self.k.clone()
    }

    /// `|q|` as a float, for scales and diagnostics.
    pub fn abs_f64(&self) -> f64 {
        let (a, b, c, d) = (self.re.to_f64(), self.i.to_f64(), self.j.to_f64(), self.k.to_f64());
        (a * a + b * b + c * c + d * d).sqrt()
    }

    /// `2 Re q`.
    pub fn trace(&self) -> S {
        self.re.clone() + self.re.clone()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.i.is_exact_zero() && self.j.is_exact_zero() && self.k.is_exact_zero()
    }

    /// True when the imaginary part vanishes exactly.
    pub fn is_real(&self) -> bool {
        self.i.is_exact_zero() && self.j.is_exact_zero() && self.k.is_exact_zero()
    }

    /// `|q| <= tol.eps * scale`.
    pub fn is_zero(&self, tol: &Tol, scale: f64) -> bool {
        if S::EXACT || tol.eps == 0.0 {
            self.is_exact_zero()
        } else {
            self.abs_f64() <= tol.eps * scale
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tol, scale: f64) -> bool {
        (self - other).is_zero(tol, scale)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(
            self.re.clone() * s.clone(),
            self.i.clone() * s.clone(),
            self.j.clone() * s.clone(),
            self.k.clone() * s.clone(),
        )
    }

    pub fn div_scalar(&self, s: &S) -> Self {
        Self::new(
            self.re.clone() / s.clone(),
            self.i.clone() / s.clone(),
            self.j.clone() / s.clone(),
            self.k.clone() / s.clone(),
        )
    }

    /// `conj(q) / |q|^2`, refusing quaternions that are zero at scale 1.
    pub fn inverse(&self, tol: &Tol) -> Result<Self> {
        self.inverse_scaled(tol, 1.0)
    }

    pub fn inverse_scaled(&self, tol: &Tol, scale: f64) -> Result<Self> {
        if self.is_zero(tol, scale) || self.is_exact_zero() {
            return Err(Error::ZeroDivision);
        }
        Ok(self.conj().div_scalar(&self.norm2()))
    }

    /// `h^{-1} q h`.
    pub fn conjugate_by(&self, h: &Self, tol: &Tol) -> Result<Self> {
        Ok(&(&h.inverse(tol)? * self) * h)
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(self.re.to_f64(), self.i.to_f64(), self.j.to_f64(), self.k.to_f64())
    }

    pub fn from_f64_quat(q: &Quaternion<f64>) -> Self {
        Self::from_f64s(q.re, q.i, q.j, q.k)
    }

    pub fn components(&self) -> [&S; 4] {
        [&self.re, &self.i, &self.j, &self.k]
    }

    /// Divides by `|q|`; used to pin unimodular phases on the float side.
    pub fn normalized(&self) -> Self {
        let n = self.abs_f64();
        if S::EXACT || n == 0.0 {
            self.clone()
        } else {
            self.div_scalar(&S::from_f64(n))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b, S: Scalar> $tr<&'b Quaternion<S>> for &'a Quaternion<S> {
            type Output = Quaternion<S>;
            fn $m(self, rhs: &'b Quaternion<S>) -> Quaternion<S> {
                let f: fn(&Quaternion<S>, &Quaternion<S>) -> Quaternion<S> = $body;
                f(self, rhs)
            }
        }
        impl<S: Scalar> $tr<Quaternion<S>> for Quaternion<S> {
            type Output = Quaternion<S>;
            fn $m(self, rhs: Quaternion<S>) -> Quaternion<S> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, S: Scalar> $tr<&'a Quaternion<S>> for Quaternion<S> {
            type Output = Quaternion<S>;
            fn $m(self, rhs: &'a Quaternion<S>) -> Quaternion<S> {
                (&self).$m(rhs)
            }
        }
        impl<'a, S: Scalar> $tr<Quaternion<S>> for &'a Quaternion<S> {
            type Output = Quaternion<S>;
            fn $m(self, rhs: Quaternion<S>) -> Quaternion<S> {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Quaternion::new(
    a.re.clone() + b.re.clone(),
    a.i.clone() + b.i.clone(),
    a.j.clone() + b.j.clone(),
    a.k.clone() + b.k.clone()
));

binop!(Sub, sub, |a, b| Quaternion::new(
    a.re.clone() - b.re.clone(),
    a.i.clone() - b.i.clone(),
    a.j.clone() - b.j.clone(),
    a.k.clone() - b.k.clone()
));

binop!(Mul, mul, |a, b| {
    let [re, i, j, k] = S::hamilton([&a.re, &a.i, &a.j, &a.k], [&b.re, &b.i, &b.j, &b.k]);
    Quaternion::new(re, i, j, k)
});

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Quaternion<S>;
    fn neg(self) -> Quaternion<S> {
        Quaternion::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl<S: Scalar> Neg for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn neg(self) -> Quaternion<S> {
        -(self.clone())
    }
}

impl<S: Scalar> AddAssign<&Quaternion<S>> for Quaternion<S> {
    fn add_assign(&mut self, rhs: &Quaternion<S>) {
        *self = &*self + rhs;
    }
}

impl<S: Scalar> SubAssign<&Quaternion<S>> for Quaternion<S> {
    fn sub_assign(&mut self, rhs: &Quaternion<S>) {
        *self = &*self - rhs;
    }
}

/// Prints `a + b*i - c*j + d*k`, omitting zero terms.
impl<S: Scalar> fmt::Display for Quaternion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (value, unit) in [(&self.re, ""), (&self.i, "i"), (&self.j, "j"), (&self.k, "k")] {
            if value.is_exact_zero() {
                continue;
            }
            let neg = value.is_neg();
            let text = value.abs_val().format();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&text);
            if !unit.is_empty() {
                out.push('*');
                out.push_str(unit);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// The 2-sphere `{h^-1 a h}` of a quaternion, stored as `(2 Re a, |a|^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyClass<S> {
    pub trace: S,
    pub norm2: S,
    pub is_real: bool,
}

impl<S: Scalar> ConjugacyClass<S> {
    pub fn of(q: &Quaternion<S>) -> Self {
        ConjugacyClass { trace: q.trace(), norm2: q.norm2(), is_real: q.is_real() }
    }

    /// Builds a class from its invariants; `is_real` is decided by `norm2 == trace^2/4`.
    pub fn new(trace: S, norm2: S, tol: &Tol) -> Self {
        let mut c = ConjugacyClass { trace, norm2, is_real: false };
        let scale = 1.0 + c.norm2.to_f64().abs();
        c.is_real = c.imag_norm2().is_zero_tol(tol, scale) || c.imag_norm2().is_neg();
        c
    }

    /// The singleton class of a real number.
    pub fn real(x: S) -> Self {
        ConjugacyClass { trace: x.clone() + x.clone(), norm2: x.clone() * x, is_real: true }
    }

    /// `norm2 - trace^2/4`, the squared length of the imaginary part.
    pub fn imag_norm2(&self) -> S {
        let half = self.trace.clone() / S::from_i64(2);
        self.norm2.clone() - half.clone() * half
    }

    /// `Re` of any member.
    pub fn real_part(&self) -> S {
        self.trace.clone() / S::from_i64(2)
    }

    /// `re + m*i` with `m = sqrt(norm2 - trace^2/4)`.
    pub fn representative(&self) -> Result<Quaternion<S>> {
        let m2 = self.imag_norm2();
        let m = if m2.is_neg() && !S::EXACT {
            Some(S::zero())
        } else {
            m2.try_sqrt()
        };
        match m {
            Some(m) => Ok(Quaternion::new(self.real_part(), m, S::zero(), S::zero())),
            None => Err(Error::IrrationalRepresentative {
                trace: self.trace.format(),
                norm2: self.norm2.format(),
            }),
        }
    }

    /// Some member of the class: the representative when it exists, else a
    /// point found by writing the imaginary norm as a sum of three rational squares.
    pub fn point(&self) -> Option<Quaternion<S>> {
        if let Ok(r) = self.representative() {
            return Some(r);
        }
        let m2 = self.imag_norm2().to_rational()?;
        let (x, y, w) = rational_three_squares(&m2)?;
        Some(Quaternion::new(
            self.real_part(),
            S::from_rational(&x),
            S::from_rational(&y),
            S::from_rational(&w),
        ))
    }

    pub fn contains(&self, q: &Quaternion<S>, tol: &Tol) -> bool {
        self.same(&ConjugacyClass::of(q), tol)
    }

    pub fn same(&self, other: &Self, tol: &Tol) -> bool {
        let scale = 1.0 + self.norm2.to_f64().abs();
        (self.trace.clone() - other.trace.clone()).is_zero_tol(tol, scale)
            && (self.norm2.clone() - other.norm2.clone()).is_zero_tol(tol, scale)
    }

    /// Sorting key `(trace, norm2)`.
    pub fn key(&self) -> (f64, f64) {
        (self.trace.to_f64(), self.norm2.to_f64())
    }

    pub fn to_f64(&self) -> ConjugacyClass<f64> {
        ConjugacyClass { trace: self.trace.to_f64(), norm2: self.norm2.to_f64(), is_real: self.is_real }
    }
}

impl<S: Scalar> fmt::Display for ConjugacyClass<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace {}, norm2 {}", self.trace.format(), self.norm2.format())
    }
}

/// True when all points share one class and no point is followed by its conjugate.
pub fn is_spherical_chain<S: Scalar>(chain: &[Quaternion<S>], tol: &Tol) -> bool {
    let Some(first) = chain.first() else {
        return true;
    };
    let class = ConjugacyClass::of(first);
    let scale = 1.0 + first.abs_f64();
    chain.iter().all(|q| class.contains(q, tol))
        && chain.windows(2).all(|w| !w[1].approx_eq(&w[0].conj(), tol, scale))
}

/// Writes a nonnegative rational as `x^2 + y^2 + w^2` with rational `x, y, w`.
///
/// Works on `n = a*b` for `q = a/b`, since `(x/b)^2 + ... = a/b` when
/// `x^2 + y^2 + w^2 = a*b`. Gives up on integers of the form `4^s(8t+7)`
/// (never sums of three squares) and on values beyond 64 bits.
pub fn rational_three_squares(q: &BigRational) -> Option<(BigRational, BigRational, BigRational)> {
    if Signed::is_negative(q) {
        return None;
    }
    let a = q.numer();
    let b = q.denom();
    let n = (a * b).to_u64()?;
    let (x, y, w) = three_squares(n)?;
    let b = BigRational::from_integer(b.clone());
    let f = |v: u64| BigRational::from_integer(BigInt::from(v)) / b.clone();
    Some((f(x), f(y), f(w)))
}

/// Decomposes `n` into three integer squares when possible.
pub fn three_squares(n: u64) -> Option<(u64, u64, u64)> {
    if n == 0 {
        return Some((0, 0, 0));
    }
    let mut m = n;
    let mut scale = 1u64;
    while m % 4 == 0 {
        m /= 4;
        scale *= 2;
    }
    if m % 8 == 7 {
        return None;
    }
    let top = isqrt(m);
    let tries = top.min(200_000);
    for t in 0..=tries {
        let w = top - t;
        let r = m - w * w;
        if let Some((x, y)) = two_squares(r) {
            return Some((x * scale, y * scale, w * scale));
        }
    }
    None
}

/// Decomposes `r` as a sum of two squares when `r = 2^e s^2 p` with `p`
/// either 1 or a prime congruent to 1 mod 4.
fn two_squares(r: u64) -> Option<(u64, u64)> {
    if r == 0 {
        return Some((0, 0));
    }
    let s = isqrt(r);
    if s * s == r {
        return Some((s, 0));
    }
    let mut m = r;
    let mut e = 0u32;
    while m % 2 == 0 {
        m /= 2;
        e += 1;
    }
    let (mut x, mut y) = if m == 1 {
        (1u64, 0u64)
    } else if m % 4 == 1 && is_prime(m) {
        cornacchia(m)?
    } else {
        return None;
    };
    // (x + yi)(1 + i) = (x - y) + (x + y)i multiplies the norm by 2.
    for _ in 0..e / 2 {
        x *= 2;
        y *= 2;
    }
    if e % 2 == 1 {
        let (a, b) = (x.max(y) - x.min(y), x + y);
        x = a;
        y = b;
    }
    Some((x, y))
}

/// `p = x^2 + y^2` for a prime `p = 1 mod 4`.
fn cornacchia(p: u64) -> Option<(u64, u64)> {
    // A square root of -1 mod p comes from any quadratic non-residue c: c^((p-1)/4).
    let mut root = 0u64;
    for c in 2..p {
        let t = pow_mod(c, (p - 1) / 4, p);
        if mul_mod(t, t, p) == p - 1 {
            root = t;
            break;
        }
    }
    if root == 0 {
        return None;
    }
    let (mut a, mut b) = (p, root);
    let limit = isqrt(p);
    while b > limit {
        let r = a % b;
        a = b;
        b = r;
    }
    let rest = p - b * b;
    let c = isqrt(rest);
    (c * c == rest).then_some((b, c))
}

fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl<S: Scalar> Default for Quaternion<S> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Convenience constructor for exact quaternions with rational parts `n/d`.
pub fn qrat(parts: [(i64, i64); 4]) -> Quaternion<BigRational> {
    let f = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
    Quaternion::new(f(parts[0]), f(parts[1]), f(parts[2]), f(parts[3]))
}

impl<S: Scalar> Quaternion<S> {
    /// True when `self` is exactly `1`.
    pub fn is_one(&self) -> bool {
        self.is_real() && (self.re.clone() - S::one()).is_exact_zero()
    }
}
