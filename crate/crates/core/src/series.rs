//! Truncated power series over the quaternions, Cauchy kernels, Blaschke
//! factors, and completion of a polynomial to a finite Blaschke product.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::lcm::Side;
use crate::poly::QPoly;
use crate::quat::Quaternion;
use crate::scalar::{Scalar, Tol};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 30;

/// Coefficients of `z^0 .. z^N`; products drop everything above `z^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<Quaternion<S>>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn new(mut coeffs: Vec<Quaternion<S>>, order: usize) -> Self {
        coeffs.resize(order + 1, Quaternion::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Quaternion::one(), order)
    }

    pub fn constant(c: Quaternion<S>, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn from_poly(p: &QPoly<S>, order: usize) -> Self {
        Self::new(p.coeffs().iter().take(order + 1).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Quaternion<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Quaternion<S> {
        self.coeffs.get(k).cloned().unwrap_or_else(Quaternion::zero)
    }

    /// The same series at another order (padded with zeros or cut).
    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn scale_left(&self, q: &Quaternion<S>) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| q * c).collect() }
    }

    pub fn scale_right(&self, q: &Quaternion<S>) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// `sum g^k f_k` over the stored terms.
    pub fn eval_left(&self, g: &Quaternion<S>) -> Quaternion<S> {
        self.coeffs.iter().rev().fold(Quaternion::zero(), |acc, c| &(g * &acc) + c)
    }

    /// `sum f_k g^k` over the stored terms.
    pub fn eval_right(&self, g: &Quaternion<S>) -> Quaternion<S> {
        self.coeffs.iter().rev().fold(Quaternion::zero(), |acc, c| &(&acc * g) + c)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// True when every stored coefficient is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }
}

impl<'a, 'b, S: Scalar> Add<&'b TruncatedSeries<S>> for &'a TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn add(self, rhs: &'b TruncatedSeries<S>) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl<'a, 'b, S: Scalar> Sub<&'b TruncatedSeries<S>> for &'a TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn sub(self, rhs: &'b TruncatedSeries<S>) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl<'a, 'b, S: Scalar> Mul<&'b TruncatedSeries<S>> for &'a TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn mul(self, rhs: &'b TruncatedSeries<S>) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        let mut out = vec![Quaternion::zero(); n + 1];
        for (a, fa) in self.coeffs.iter().enumerate().take(n + 1) {
            if fa.is_exact_zero() {
                continue;
            }
            for (b, gb) in rhs.coeffs.iter().enumerate().take(n + 1 - a) {
                out[a + b] += &(fa * gb);
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

/// `k_a = sum a^k z^k`, the inverse of `1 - z a`.
pub fn cauchy_kernel<S: Scalar>(a: &Quaternion<S>, order: usize) -> TruncatedSeries<S> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut p = Quaternion::one();
    for _ in 0..=order {
        coeffs.push(p.clone());
        p = &p * a;
    }
    TruncatedSeries { coeffs }
}

/// Closed-form value of `k_a` at `g`: `Y^-1 (1 - g conj(a))` on the left and
/// `(1 - conj(a) g) Y^-1` on the right, where `Y = 1 - 2 Re(a) g + |a|^2 g^2`.
pub fn kernel_eval<S: Scalar>(a: &Quaternion<S>, g: &Quaternion<S>, side: Side, tol: &Tol) -> Result<Quaternion<S>> {
    let one = Quaternion::one();
    let upsilon = &(&one - &g.scale(&a.trace())) + &(g * g).scale(&a.norm2());
    let inv = upsilon.inverse(tol).map_err(|_| Error::SingularUpsilon)?;
    Ok(match side {
        Side::Left => &inv * &(&one - &(g * &a.conj())),
        Side::Right => &(&one - &(&a.conj() * g)) * &inv,
    })
}

/// `b_a = rho_a k_conj(a)`: constant term `-a`, then `(1 - |a|^2) conj(a)^(k-1)`.
pub fn blaschke_factor<S: Scalar>(a: &Quaternion<S>, order: usize) -> TruncatedSeries<S> {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(-a);
    let w = S::one() - a.norm2();
    let ab = a.conj();
    let mut p = Quaternion::real(w);
    for _ in 1..=order {
        coeffs.push(p.clone());
        p = &p * &ab;
    }
    TruncatedSeries { coeffs }
}

/// Both sides of `||b_a h||^2 = ||h||^2` for `h = d + c z^k` (`k >= 1`), with
/// the geometric tails of the left side summed in closed form.
pub fn norm_preservation_check<S: Scalar>(a: &Quaternion<S>, d: &Quaternion<S>, c: &Quaternion<S>, k: usize) -> (S, S) {
    assert!(k >= 1, "the power of z must be positive");
    let a2 = a.norm2();
    let d2 = d.norm2();
    let one = S::one();
    let w = one.clone() - a2.clone();
    let ab = a.conj();
    let middle = w.clone() * (one.clone() - pow_s(&a2, k - 1)) * d2.clone();
    let at_k = &(&ab.powi(k - 1) * d).scale(&w) - &(a * c);
    let tail = &(&ab.powi(k) * d) + c;
    let lhs = a2 * d2.clone() + middle + at_k.norm2() + w * tail.norm2();
    (lhs, c.norm2() + d2)
}

fn pow_s<S: Scalar>(x: &S, n: usize) -> S {
    (0..n).fold(S::one(), |acc, _| acc * x.clone())
}

/// One inner step of the completion recursion, satisfying
/// `(1 - z delta) phi (z - alpha) = phi_next (z - alpha_next) (1 - z beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletionStep<S> {
    /// Outer induction index (1-based, number of roots handled so far).
    pub outer: usize,
    /// Inner index within the outer step (1-based).
    pub inner: usize,
    pub delta: Quaternion<S>,
    pub phi: Quaternion<S>,
    pub alpha: Quaternion<S>,
    pub phi_next: Quaternion<S>,
    pub alpha_next: Quaternion<S>,
    pub beta: Quaternion<S>,
}

impl<S: Scalar> CompletionStep<S> {
    /// The two sides of the step identity as polynomials.
    pub fn identity_sides(&self) -> (QPoly<S>, QPoly<S>) {
        let one = Quaternion::one();
        let left = &QPoly::new(vec![one.clone(), -&self.delta]).scale_right(&self.phi) * &QPoly::rho(&self.alpha);
        let right = &QPoly::rho(&self.alpha_next).scale_left(&self.phi_next) * &QPoly::new(vec![one, -&self.beta]);
        (left, right)
    }
}

/// `rho_a1 ... rho_am * k_b1 ... k_bm = b_g1 ... b_gm * phase`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeCompletion<S> {
    pub alphas: Vec<Quaternion<S>>,
    pub betas: Vec<Quaternion<S>>,
    pub gammas: Vec<Quaternion<S>>,
    pub phase: Quaternion<S>,
    pub steps: Vec<CompletionStep<S>>,
    /// Largest `| |phi| - 1 |` removed by renormalisation (always 0 on the exact backend).
    pub phase_drift: f64,
}

impl<S: Scalar> BlaschkeCompletion<S> {
    /// `rho_a1 ... rho_am * k_b1 ... k_bm` to the given order.
    pub fn lhs(&self, order: usize) -> TruncatedSeries<S> {
        let g = TruncatedSeries::from_poly(&QPoly::from_roots(&self.alphas), order);
        self.betas.iter().fold(g, |acc, b| &acc * &cauchy_kernel(b, order))
    }

    /// `b_g1 ... b_gm * phase` to the given order.
    pub fn rhs(&self, order: usize) -> TruncatedSeries<S> {
        let start = TruncatedSeries::one(order);
        self.gammas.iter().fold(start, |acc, g| &acc * &blaschke_factor(g, order)).scale_right(&self.phase)
    }

    /// Difference of the two sides to the given order.
    pub fn residual(&self, order: usize) -> TruncatedSeries<S> {
        &self.lhs(order) - &self.rhs(order)
    }
}

fn renormalize<S: Scalar>(q: Quaternion<S>, drift: &mut f64) -> Quaternion<S> {
    if S::EXACT {
        return q;
    }
    let n = q.abs_f64();
    *drift = drift.max((n - 1.0).abs());
    q.normalized()
}

/// Finds `b_i, g_i` in the classes of the `a_i` and a unit `phase` with
/// `rho_a1 ... rho_am * k_b1 ... k_bm = b_g1 ... b_gm * phase`.
///
/// Real roots and adjacent conjugate pairs give central factors and are
/// answered directly (`b = conj(a)`, `g = a`); the rest goes through the
/// induction on the number of roots.
pub fn complete_to_blaschke<S: Scalar>(alphas: &[Quaternion<S>], tol: &Tol) -> Result<BlaschkeCompletion<S>> {
    for a in alphas {
        let n2 = a.norm2();
        if n2.to_f64() >= 1.0 && !(S::EXACT && (n2.clone() - S::one()).is_neg()) {
            return Err(Error::PreconditionViolated("roots must lie in the open unit ball".into()));
        }
    }
    let m = alphas.len();
    let mut betas: Vec<Option<Quaternion<S>>> = vec![None; m];
    let mut gammas: Vec<Option<Quaternion<S>>> = vec![None; m];
    // Split off central factors with a stack so that removals can expose new adjacent pairs.
    let mut stack: Vec<usize> = Vec::new();
    for (idx, a) in alphas.iter().enumerate() {
        if a.is_real() {
            betas[idx] = Some(a.clone());
            gammas[idx] = Some(a.clone());
            continue;
        }
        if let Some(&top) = stack.last() {
            if alphas[top] == a.conj() {
                stack.pop();
                betas[top] = Some(alphas[top].conj());
                gammas[top] = Some(alphas[top].clone());
                betas[idx] = Some(a.conj());
                gammas[idx] = Some(a.clone());
                continue;
            }
        }
        stack.push(idx);
    }
    let core: Vec<Quaternion<S>> = stack.iter().map(|&i| alphas[i].clone()).collect();
    let (core_betas, core_gammas, phase, steps, drift) = complete_core(&core, tol)?;
    for (pos, &idx) in stack.iter().enumerate() {
        betas[idx] = Some(core_betas[pos].clone());
        gammas[idx] = Some(core_gammas[pos].clone());
    }
    Ok(BlaschkeCompletion {
        alphas: alphas.to_vec(),
        betas: betas.into_iter().map(|b| b.expect("filled")).collect(),
        gammas: gammas.into_iter().map(|g| g.expect("filled")).collect(),
        phase,
        steps,
        phase_drift: drift,
    })
}

type CoreResult<S> = (Vec<Quaternion<S>>, Vec<Quaternion<S>>, Quaternion<S>, Vec<CompletionStep<S>>, f64);

fn complete_core<S: Scalar>(alphas: &[Quaternion<S>], tol: &Tol) -> Result<CoreResult<S>> {
    let one = Quaternion::<S>::one();
    let mut deltas: Vec<Quaternion<S>> = Vec::new();
    let mut gammas = Vec::new();
    let mut phase = one.clone();
    let mut steps = Vec::new();
    let mut drift = 0.0f64;
    for (mi, am) in alphas.iter().enumerate() {
        let outer = mi + 1;
        let mut alpha = am.clone();
        let mut phi = one.clone();
        let mut next_betas = Vec::with_capacity(outer);
        for (ki, delta) in deltas.iter().enumerate() {
            let phi_inv = phi.inverse(&Tol::exact())?;
            let u = &(&phi_inv * delta) * &phi;
            let ac = alpha.conj();
            let pivot = &one - &(&ac * &u);
            let pivot_inv = pivot.inverse(tol).map_err(|_| Error::SingularPivot { step: outer })?;
            let alpha_next = &(&pivot * &alpha) * &pivot_inv;
            let phi_next = &(&phi * &(&one - &(&u * &ac))) * &pivot_inv;
            let phi_next = renormalize(phi_next, &mut drift);
            let beta = &(&pivot * &u) * &pivot_inv;
            steps.push(CompletionStep {
                outer,
                inner: ki + 1,
                delta: delta.clone(),
                phi: phi.clone(),
                alpha: alpha.clone(),
                phi_next: phi_next.clone(),
                alpha_next: alpha_next.clone(),
                beta: beta.clone(),
            });
            next_betas.push(beta);
            alpha = alpha_next;
            phi = phi_next;
        }
        next_betas.push(alpha.conj());
        let psi = renormalize(&phase * &phi, &mut drift);
        let psi_inv = psi.inverse(&Tol::exact())?;
        let gamma = &(&psi * &alpha) * &psi_inv;
        // The phase is also pinned down by evaluating at 0.
        let from_values = &(&gamma.inverse(&Tol::exact())? * &phase) * am;
        let gap = (&from_values - &psi).abs_f64();
        let consistent = if S::EXACT { from_values == psi } else { gap <= 1e3 * tol.eps.max(f64::EPSILON) };
        if !consistent {
            return Err(Error::InconsistentPhase(gap));
        }
        deltas = next_betas;
        gammas.push(gamma);
        phase = psi;
    }
    Ok((deltas, gammas, phase, steps, drift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::qrat;
    use num_rational::BigRational;

    type Q = Quaternion<BigRational>;

    fn half(q: &Q) -> Q {
        q.div_scalar(&BigRational::from_integer(2.into()))
    }

    #[test]
    fn kernel_inverts_one_minus_za() {
        let a = qrat([(1, 3), (1, 2), (0, 1), (-1, 4)]);
        let k = cauchy_kernel(&a, 10);
        let p = TruncatedSeries::from_poly(&QPoly::new(vec![Q::one(), -&a]), 10);
        assert_eq!(&p * &k, TruncatedSeries::one(10));
        assert_eq!(&k * &p, TruncatedSeries::one(10));
        assert_eq!(cauchy_kernel(&Q::zero(), 4), TruncatedSeries::one(4));
    }

    #[test]
    fn kernel_closed_form() {
        let tol = Tol::default();
        let a = Quaternion::<f64>::from_f64s(0.1, 0.3, -0.2, 0.25);
        let g = Quaternion::<f64>::from_f64s(-0.2, 0.1, 0.35, 0.1);
        let k = cauchy_kernel(&a, 60);
        let l = kernel_eval(&a, &g, Side::Left, &tol).unwrap();
        let r = kernel_eval(&a, &g, Side::Right, &tol).unwrap();
        assert!((&l - &k.eval_left(&g)).abs_f64() < 1e-12);
        assert!((&r - &k.eval_right(&g)).abs_f64() < 1e-12);
        assert_eq!(kernel_eval(&a, &Quaternion::zero(), Side::Left, &tol).unwrap(), Quaternion::one());
    }

    #[test]
    fn blaschke_coefficients() {
        let a = half(&Q::unit_i());
        let b = blaschke_factor(&a, 3);
        let expected = vec![
            qrat([(0, 1), (-1, 2), (0, 1), (0, 1)]),
            qrat([(3, 4), (0, 1), (0, 1), (0, 1)]),
            qrat([(0, 1), (-3, 8), (0, 1), (0, 1)]),
            qrat([(-3, 16), (0, 1), (0, 1), (0, 1)]),
        ];
        assert_eq!(b.coeffs(), expected.as_slice());
        let direct = &TruncatedSeries::from_poly(&QPoly::rho(&a), 3) * &cauchy_kernel(&a.conj(), 3);
        assert_eq!(direct, b);
        assert_eq!(blaschke_factor(&Q::zero(), 2).coeffs()[1], Q::one());
    }

    #[test]
    fn norm_preservation_example() {
        let a = half(&Q::unit_i());
        let (lhs, rhs) = norm_preservation_check(&a, &Q::one(), &Q::unit_j(), 3);
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, BigRational::from_integer(2.into()));
        // Direct coefficient sum at a high order agrees in floats.
        let af = a.to_f64();
        let h = TruncatedSeries::new(vec![Quaternion::one(), Quaternion::zero(), Quaternion::zero(), Quaternion::unit_j()], 80);
        let s = &blaschke_factor(&af, 80) * &h;
        let direct: f64 = s.coeffs().iter().map(|c| c.norm2()).sum();
        assert!((direct - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_root() {
        let a = qrat([(1, 4), (1, 3), (0, 1), (1, 5)]);
        let c = complete_to_blaschke(&[a.clone()], &Tol::exact()).unwrap();
        assert_eq!(c.betas, vec![a.conj()]);
        assert_eq!(c.gammas, vec![a.clone()]);
        assert!(c.residual(12).is_exact_zero());
    }

    #[test]
    fn two_roots_exact() {
        let tol = Tol::exact();
        let c = complete_to_blaschke(&[half(&Q::unit_i()), half(&Q::unit_j())], &tol).unwrap();
        assert!(c.residual(20).is_exact_zero());
        assert_eq!(c.phase.norm2(), BigRational::from_integer(1.into()));
        for s in &c.steps {
            let (l, r) = s.identity_sides();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn commuting_roots() {
        let tol = Tol::exact();
        let roots = vec![qrat([(1, 3), (1, 2), (0, 1), (0, 1)]), qrat([(0, 1), (-1, 4), (0, 1), (0, 1)])];
        let c = complete_to_blaschke(&roots, &tol).unwrap();
        let conj: Vec<Q> = roots.iter().map(|a| a.conj()).collect();
        assert_eq!(c.betas, conj);
    }

    #[test]
    fn central_factors_split_off() {
        let tol = Tol::exact();
        let a = half(&Q::unit_k());
        let x = Q::real(BigRational::new(1.into(), 3.into()));
        let roots = vec![half(&Q::unit_i()), a.clone(), x, a.conj(), half(&Q::unit_j())];
        let c = complete_to_blaschke(&roots, &tol).unwrap();
        assert!(c.residual(16).is_exact_zero());
    }

    #[test]
    fn float_three_roots() {
        let tol = Tol::default();
        let roots = vec![
            Quaternion::<f64>::from_f64s(0.1, 0.5, -0.2, 0.1),
            Quaternion::from_f64s(-0.3, 0.1, 0.4, 0.2),
            Quaternion::from_f64s(0.2, -0.2, 0.1, 0.6),
        ];
        let c = complete_to_blaschke(&roots, &tol).unwrap();
        assert!(c.residual(30).max_abs() < 1e-12);
        assert!((c.phase.abs_f64() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_roots_outside_ball() {
        assert!(complete_to_blaschke(&[Q::unit_i()], &Tol::exact()).is_err());
    }
}
