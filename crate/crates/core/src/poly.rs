//! Polynomials over the quaternions with a central variable.
//!
//! Coefficients sit to the right of the variable, `f(z) = sum z^k f_k`, and
//! are stored in ascending order without trailing zeros.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quat::{ConjugacyClass, Quaternion};
use crate::scalar::{Scalar, Tol};

#[derive(Clone, Debug, PartialEq)]
pub struct QPoly<S> {
    coeffs: Vec<Quaternion<S>>,
}

impl<S: Scalar> QPoly<S> {
    /// Builds from ascending coefficients, dropping exactly-zero top terms.
    pub fn new(mut coeffs: Vec<Quaternion<S>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Quaternion::one())
    }

    pub fn constant(c: Quaternion<S>) -> Self {
        Self::new(vec![c])
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::new(vec![Quaternion::zero(), Quaternion::one()])
    }

    /// `z - a`.
    pub fn rho(a: &Quaternion<S>) -> Self {
        Self::new(vec![-a, Quaternion::one()])
    }

    /// `(z - a_1)(z - a_2)...(z - a_n)` in the given order.
    pub fn from_roots(roots: &[Quaternion<S>]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::rho(r))
    }

    /// Polynomial with real coefficients.
    pub fn from_real(coeffs: &[S]) -> Self {
        Self::new(coeffs.iter().map(|c| Quaternion::real(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Quaternion<S>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Quaternion<S>> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Quaternion<S> {
        self.coeffs.get(k).cloned().unwrap_or_else(Quaternion::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&Quaternion<S>> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<S> {
        self.coeffs.iter().map(|c| c.re.clone()).collect()
    }

    /// `sum |f_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).sum()
    }

    /// Magnitude reference for deciding whether a value of `f` at `a` vanishes.
    pub fn eval_scale(&self, a: &Quaternion<S>) -> f64 {
        let n = self.degree().unwrap_or(0) as i32;
        self.l1_norm().max(f64::MIN_POSITIVE) * a.abs_f64().max(1.0).powi(n)
    }

    /// Drops top coefficients that vanish under the tolerance.
    pub fn trim_tol(mut self, tol: &Tol) -> Self {
        let scale = self.l1_norm().max(1.0);
        while self.coeffs.last().is_some_and(|c| c.is_zero(tol, scale)) {
            self.coeffs.pop();
        }
        self
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tol) -> bool {
        let diff = self - other;
        let scale = self.l1_norm().max(other.l1_norm()).max(1.0);
        diff.coeffs.iter().all(|c| c.is_zero(tol, scale))
    }

    /// `q * f`.
    pub fn scale_left(&self, q: &Quaternion<S>) -> Self {
        Self::new(self.coeffs.iter().map(|c| q * c).collect())
    }

    /// `f * q`.
    pub fn scale_right(&self, q: &Quaternion<S>) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Conjugates every coefficient.
    pub fn sharp(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `sum a^k f_k`.
    pub fn eval_left(&self, a: &Quaternion<S>) -> Quaternion<S> {
        self.coeffs.iter().rev().fold(Quaternion::zero(), |acc, c| &(a * &acc) + c)
    }

    /// `sum f_k a^k`.
    pub fn eval_right(&self, a: &Quaternion<S>) -> Quaternion<S> {
        self.coeffs.iter().rev().fold(Quaternion::zero(), |acc, c| &(&acc * a) + c)
    }

    /// Left backward shift: `f = f(a) + (z - a) * L_a f` with `f(a)` the left value.
    pub fn shift_left(&self, a: &Quaternion<S>) -> Self {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Self::zero(),
        };
        let mut b = vec![Quaternion::zero(); n];
        b[n - 1] = self.coeffs[n].clone();
        for k in (1..n).rev() {
            b[k - 1] = &self.coeffs[k] + &(a * &b[k]);
        }
        Self::new(b)
    }

    /// Right backward shift: `f = f(a) + R_a f * (z - a)` with `f(a)` the right value.
    pub fn shift_right(&self, a: &Quaternion<S>) -> Self {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Self::zero(),
        };
        let mut b = vec![Quaternion::zero(); n];
        b[n - 1] = self.coeffs[n].clone();
        for k in (1..n).rev() {
            b[k - 1] = &self.coeffs[k] + &(&b[k] * a);
        }
        Self::new(b)
    }

    /// k-th formal derivative.
    pub fn derivative(&self, k: usize) -> Self {
        if self.coeffs.len() <= k {
            return Self::zero();
        }
        let out = (k..self.coeffs.len())
            .map(|j| {
                let factor: i64 = ((j - k + 1)..=j).map(|t| t as i64).product();
                self.coeffs[j].scale(&S::from_i64(factor))
            })
            .collect();
        Self::new(out)
    }

    /// `f = g*q + r` with `deg r < deg g`; `r = 0` exactly when `g` divides `f` on the left.
    pub fn divide_right(&self, g: &Self) -> Result<(Self, Self)> {
        let m = g.degree().ok_or(Error::ZeroDivisor)?;
        let ginv = invert_nonzero(g.lead().expect("nonzero"))?;
        let Some(n) = self.degree().filter(|&n| n >= m) else {
            return Ok((Self::zero(), self.clone()));
        };
        let mut r = self.coeffs.clone();
        let mut q = vec![Quaternion::zero(); n - m + 1];
        for d in (m..=n).rev() {
            let c = &ginv * &r[d];
            for (t, gt) in g.coeffs.iter().enumerate() {
                let prod = gt * &c;
                r[t + d - m] -= &prod;
            }
            r[d] = Quaternion::zero();
            q[d - m] = c;
        }
        r.truncate(m);
        Ok((Self::new(q), Self::new(r)))
    }

    /// `f = q*g + r` with `deg r < deg g`; `r = 0` exactly when `g` divides `f` on the right.
    pub fn divide_left(&self, g: &Self) -> Result<(Self, Self)> {
        let m = g.degree().ok_or(Error::ZeroDivisor)?;
        let ginv = invert_nonzero(g.lead().expect("nonzero"))?;
        let Some(n) = self.degree().filter(|&n| n >= m) else {
            return Ok((Self::zero(), self.clone()));
        };
        let mut r = self.coeffs.clone();
        let mut q = vec![Quaternion::zero(); n - m + 1];
        for d in (m..=n).rev() {
            let c = &r[d] * &ginv;
            for (t, gt) in g.coeffs.iter().enumerate() {
                let prod = &c * gt;
                r[t + d - m] -= &prod;
            }
            r[d] = Quaternion::zero();
            q[d - m] = c;
        }
        r.truncate(m);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Right-multiplies by the inverse leading coefficient; returns the monic
    /// polynomial and the unit `u` with `f * u` monic.
    pub fn monic_right(&self) -> Result<(Self, Quaternion<S>)> {
        let lead = self.lead().ok_or(Error::ZeroDivisor)?;
        let u = invert_nonzero(lead)?;
        let mut m = self.scale_right(&u);
        if let Some(last) = m.coeffs.last_mut() {
            *last = Quaternion::one();
        }
        Ok((m, u))
    }

    /// `f * f#`, checked to be real and returned with real coefficients.
    pub fn companion_real(&self, tol: &Tol) -> Result<Self> {
        if S::EXACT {
            // The product is real by construction; only the scalar parts are needed.
            let n = self.coeffs.len();
            if n == 0 {
                return Ok(Self::zero());
            }
            let mut out = vec![S::zero(); 2 * n - 1];
            for (a, fa) in self.coeffs.iter().enumerate() {
                for (b, fb) in self.coeffs.iter().enumerate() {
                    let dot = fa.re.clone() * fb.re.clone()
                        + fa.i.clone() * fb.i.clone()
                        + fa.j.clone() * fb.j.clone()
                        + fa.k.clone() * fb.k.clone();
                    out[a + b] = out[a + b].clone() + dot;
                }
            }
            return Ok(Self::from_real(&out));
        }
        let prod = self * &self.sharp();
        let scale = prod.coeffs.iter().map(|c| c.re.to_f64().abs()).fold(0.0, f64::max).max(1.0);
        let mut residue = 0.0f64;
        for c in &prod.coeffs {
            let im = Quaternion::new(S::zero(), c.i.clone(), c.j.clone(), c.k.clone());
            residue = residue.max(im.abs_f64());
            if !im.is_zero(tol, scale) {
                return Err(Error::NonRealResult { residue });
            }
        }
        Ok(Self::from_real(&prod.real_coeffs()))
    }

    /// Converts the coefficients to `f64`.
    pub fn to_f64(&self) -> QPoly<f64> {
        QPoly::new(self.coeffs.iter().map(|c| c.to_f64()).collect())
    }

    pub fn from_f64_poly(p: &QPoly<f64>) -> Self {
        Self::new(p.coeffs.iter().map(Quaternion::from_f64_quat).collect())
    }
}

/// True when `f` has a zero in the class of `g`, i.e. `f f#` vanishes there.
/// Uses `(f f#)(g) = f(g) * conj(f^r(conj(g')))` with `g' = f(g)^-1 g f(g)`,
/// so only two evaluations are needed.
pub fn has_zero_in_class<S: Scalar>(f: &QPoly<S>, g: &Quaternion<S>, tol: &Tol) -> bool {
    if f.is_zero() {
        return true;
    }
    let a = f.eval_left(g);
    let scale = f.eval_scale(g);
    if a.is_zero(tol, scale) {
        return true;
    }
    let Ok(inv) = a.inverse_scaled(tol, scale) else { return true };
    let moved = &(&inv * &g.conj()) * &a;
    f.eval_right(&moved).is_zero(tol, f.eval_scale(&moved))
}

/// Inverse of a quaternion that is only refused when exactly zero.
fn invert_nonzero<S: Scalar>(q: &Quaternion<S>) -> Result<Quaternion<S>> {
    q.inverse_scaled(&Tol::exact(), 0.0)
}

/// Least `k` with `(f^{(k)})(a) != 0` under left evaluation.
pub fn mult_left<S: Scalar>(a: &Quaternion<S>, f: &QPoly<S>, tol: &Tol) -> usize {
    mult_by(f, tol, |d| (d.eval_left(a), d.eval_scale(a)))
}

/// Least `k` with `(f^{(k)})(a) != 0` under right evaluation.
pub fn mult_right<S: Scalar>(a: &Quaternion<S>, f: &QPoly<S>, tol: &Tol) -> usize {
    mult_by(f, tol, |d| (d.eval_right(a), d.eval_scale(a)))
}

fn mult_by<S: Scalar>(
    f: &QPoly<S>,
    tol: &Tol,
    value: impl Fn(&QPoly<S>) -> (Quaternion<S>, f64),
) -> usize {
    let n = f.degree().unwrap_or(0);
    for k in 0..=n {
        let d = f.derivative(k);
        let (v, scale) = value(&d);
        if !v.is_zero(tol, scale) {
            return k;
        }
    }
    n
}

/// Spherical multiplicity of `f` at the class: the exponent of the largest
/// power of the characteristic polynomial dividing `f`.
pub fn mult_spherical<S: Scalar>(class: &ConjugacyClass<S>, f: &QPoly<S>, tol: &Tol) -> Result<usize> {
    let p = class.point().ok_or_else(|| Error::IrrationalRepresentative {
        trace: class.trace.format(),
        norm2: class.norm2.format(),
    })?;
    if class.is_real {
        // A real class is one point; its multiplicity counts powers of (z - x)^2.
        return Ok(mult_left(&p, f, tol) / 2);
    }
    Ok(mult_spherical_at(f, &p, &p.conj(), tol))
}

/// Spherical multiplicity probed at two distinct points of one class.
pub fn mult_spherical_at<S: Scalar>(f: &QPoly<S>, p: &Quaternion<S>, q: &Quaternion<S>, tol: &Tol) -> usize {
    let n = f.degree().unwrap_or(0);
    for k in 0..=n {
        let d = f.derivative(k);
        let vp = d.eval_left(p);
        let vq = d.eval_left(q);
        if !vp.is_zero(tol, d.eval_scale(p)) || !vq.is_zero(tol, d.eval_scale(q)) {
            return k;
        }
    }
    n
}

/// `(g f)(a)` under left evaluation through `g(a) * f(g(a)^-1 a g(a))`.
pub fn eval_product_formula<S: Scalar>(g: &QPoly<S>, f: &QPoly<S>, a: &Quaternion<S>) -> Quaternion<S> {
    let ga = g.eval_left(a);
    if ga.is_exact_zero() {
        return Quaternion::zero();
    }
    let inv = invert_nonzero(&ga).expect("nonzero");
    let moved = &(&inv * a) * &ga;
    &ga * &f.eval_left(&moved)
}

/// `(g f)(a)` under right evaluation through `g(b a b^-1) * b` with `b = f(a)`.
pub fn eval_product_formula_right<S: Scalar>(g: &QPoly<S>, f: &QPoly<S>, a: &Quaternion<S>) -> Quaternion<S> {
    let fa = f.eval_right(a);
    if fa.is_exact_zero() {
        return Quaternion::zero();
    }
    let inv = invert_nonzero(&fa).expect("nonzero");
    let moved = &(&fa * a) * &inv;
    &g.eval_right(&moved) * &fa
}

impl<S: Scalar> ConjugacyClass<S> {
    /// `z^2 - trace z + norm2`, or `(z - x)^2` for a real class `{x}`.
    pub fn char_poly(&self) -> QPoly<S> {
        QPoly::from_real(&[self.norm2.clone(), -self.trace.clone(), S::one()])
    }
}

impl<'a, 'b, S: Scalar> Add<&'b QPoly<S>> for &'a QPoly<S> {
    type Output = QPoly<S>;
    fn add(self, rhs: &'b QPoly<S>) -> QPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a, 'b, S: Scalar> Sub<&'b QPoly<S>> for &'a QPoly<S> {
    type Output = QPoly<S>;
    fn sub(self, rhs: &'b QPoly<S>) -> QPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a, 'b, S: Scalar> Mul<&'b QPoly<S>> for &'a QPoly<S> {
    type Output = QPoly<S>;
    fn mul(self, rhs: &'b QPoly<S>) -> QPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Quaternion::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, fa) in self.coeffs.iter().enumerate() {
            for (b, gb) in rhs.coeffs.iter().enumerate() {
                let prod = fa * gb;
                out[a + b] += &prod;
            }
        }
        QPoly::new(out)
    }
}

impl<S: Scalar> Add for QPoly<S> {
    type Output = QPoly<S>;
    fn add(self, rhs: QPoly<S>) -> QPoly<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for QPoly<S> {
    type Output = QPoly<S>;
    fn sub(self, rhs: QPoly<S>) -> QPoly<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for QPoly<S> {
    type Output = QPoly<S>;
    fn mul(self, rhs: QPoly<S>) -> QPoly<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for &QPoly<S> {
    type Output = QPoly<S>;
    fn neg(self) -> QPoly<S> {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<S: Scalar> Neg for QPoly<S> {
    type Output = QPoly<S>;
    fn neg(self) -> QPoly<S> {
        -&self
    }
}

/// Prints descending terms `z^n*(c_n) + ... + (c_0)`; a coefficient of one is left bare.
impl<S: Scalar> fmt::Display for QPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_exact_zero() {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            terms.push(match (var.is_empty(), c.is_one()) {
                (true, _) => format!("({c})"),
                (false, true) => var,
                (false, false) => format!("{var}*({c})"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}
