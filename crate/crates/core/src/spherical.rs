//! Spherical divisors: for each class `V` a polynomial splits as
//! `f = X_V^k * rho_a1 ... rho_an * P` (left form) and
//! `f = P~ * rho_bn ... rho_b1 * X_V^k` (right form), where `X_V` is the
//! characteristic polynomial of `V` and the cofactors have no zeros in `V`.

use crate::error::{Error, Result};
use crate::poly::{has_zero_in_class, mult_left, mult_spherical_at, QPoly};
use crate::quat::{ConjugacyClass, Quaternion};
use crate::rootfind::{real_poly_complex_roots, roots_from_left_values};
use crate::scalar::{Scalar, Tol};

/// Both spherical divisors of a polynomial at one class.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalDivisorPair<S> {
    pub class: ConjugacyClass<S>,
    /// Largest power of `X_V` dividing `f`.
    pub kappa: usize,
    /// `f = X_V^kappa * rho(left_chain[0]) * ... * left_cofactor`.
    pub left_chain: Vec<Quaternion<S>>,
    /// `f = right_cofactor * ... * rho(right_chain[0]) * X_V^kappa`; the first point is the rightmost factor.
    pub right_chain: Vec<Quaternion<S>>,
    pub left_cofactor: QPoly<S>,
    pub right_cofactor: QPoly<S>,
}

impl<S: Scalar> SphericalDivisorPair<S> {
    /// `X_V^kappa * rho_a1 ... rho_an`.
    pub fn left_divisor(&self) -> QPoly<S> {
        &self.class.char_poly().pow(self.kappa) * &QPoly::from_roots(&self.left_chain)
    }

    /// `rho_bn ... rho_b1 * X_V^kappa`.
    pub fn right_divisor(&self) -> QPoly<S> {
        let rev: Vec<_> = self.right_chain.iter().rev().cloned().collect();
        &QPoly::from_roots(&rev) * &self.class.char_poly().pow(self.kappa)
    }

    /// The polynomial rebuilt from the left form.
    pub fn left_product(&self) -> QPoly<S> {
        &self.left_divisor() * &self.left_cofactor
    }

    /// The polynomial rebuilt from the right form.
    pub fn right_product(&self) -> QPoly<S> {
        &self.right_cofactor * &self.right_divisor()
    }
}

/// Quotient by `X_V`: `(S_V f)_k = sum_i r_i f_{i+k+2}` with
/// `r_0 = 1`, `r_1 = trace`, `r_{j+1} = trace r_j - norm2 r_{j-1}`.
pub fn spherical_shift<S: Scalar>(f: &QPoly<S>, class: &ConjugacyClass<S>) -> QPoly<S> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return QPoly::zero(),
    };
    let r = shift_weights(class, n - 1);
    let out = (0..=n - 2)
        .map(|k| {
            (0..=n - k - 2).fold(Quaternion::zero(), |acc, i| &acc + &f.coeff(i + k + 2).scale(&r[i]))
        })
        .collect();
    QPoly::new(out)
}

/// `r_0 .. r_{len-1}` of the two-term recursion; `r_k = sum_j a^j conj(a)^(k-j)` for `a` in the class.
pub fn shift_weights<S: Scalar>(class: &ConjugacyClass<S>, len: usize) -> Vec<S> {
    let mut r: Vec<S> = Vec::with_capacity(len);
    for j in 0..len {
        let v = match j {
            0 => S::one(),
            1 => class.trace.clone(),
            _ => class.trace.clone() * r[j - 1].clone() - class.norm2.clone() * r[j - 2].clone(),
        };
        r.push(v);
    }
    r
}

/// `S_V` applied `times` times.
pub fn spherical_shift_pow<S: Scalar>(f: &QPoly<S>, class: &ConjugacyClass<S>, times: usize) -> QPoly<S> {
    (0..times).fold(f.clone(), |g, _| spherical_shift(&g, class))
}

fn probe_of<S: Scalar>(class: &ConjugacyClass<S>) -> Result<Quaternion<S>> {
    class.point().ok_or_else(|| Error::IrrationalRepresentative {
        trace: class.trace.format(),
        norm2: class.norm2.format(),
    })
}

/// Tolerance for confirming a computed zero; a wrong zero misses by O(1).
fn check_tol(tol: &Tol) -> Tol {
    Tol { eps: tol.eps * 1e3 }
}

fn tidy<S: Scalar>(p: QPoly<S>, tol: &Tol) -> QPoly<S> {
    if S::EXACT {
        p
    } else {
        p.trim_tol(tol)
    }
}

/// Peels `k` left zeros in the class off `f`: `f = rho_b1 ... rho_bk * Q_k`.
pub fn extract_left_chain<S: Scalar>(
    f: &QPoly<S>,
    class: &ConjugacyClass<S>,
    k: usize,
    tol: &Tol,
) -> Result<(Vec<Quaternion<S>>, QPoly<S>)> {
    if k == 0 {
        return Ok((vec![], f.clone()));
    }
    let probe = probe_of(class)?;
    extract_left_chain_at(f, &probe, k, tol)
}

/// Left chain extraction with an explicit probe point of the class.
pub fn extract_left_chain_at<S: Scalar>(
    f: &QPoly<S>,
    probe: &Quaternion<S>,
    k: usize,
    tol: &Tol,
) -> Result<(Vec<Quaternion<S>>, QPoly<S>)> {
    let mut q = f.clone();
    let mut chain = Vec::with_capacity(k);
    for step in 1..=k {
        let beta = if probe.is_real() {
            probe.clone()
        } else {
            let scale = q.eval_scale(probe);
            let a = q.eval_left(probe);
            let b = q.eval_left(&probe.conj());
            if a.is_zero(tol, scale) {
                probe.clone()
            } else if b.is_zero(tol, scale) {
                probe.conj()
            } else {
                roots_from_left_values(probe, &a, &b, tol, scale).map_err(|_| Error::ChainBroken { step })?.0
            }
        };
        if !q.eval_left(&beta).is_zero(&check_tol(tol), q.eval_scale(&beta)) {
            return Err(Error::ChainBroken { step });
        }
        q = tidy(q.shift_left(&beta), tol);
        chain.push(beta);
    }
    Ok((chain, q))
}

/// Peels `k` right zeros in the class off `f`: `f = Q_k * rho_bk ... rho_b1`.
pub fn extract_right_chain<S: Scalar>(
    f: &QPoly<S>,
    class: &ConjugacyClass<S>,
    k: usize,
    tol: &Tol,
) -> Result<(Vec<Quaternion<S>>, QPoly<S>)> {
    if k == 0 {
        return Ok((vec![], f.clone()));
    }
    let probe = probe_of(class)?;
    extract_right_chain_at(f, &probe, k, tol)
}

/// Right chain extraction with an explicit probe point of the class.
pub fn extract_right_chain_at<S: Scalar>(
    f: &QPoly<S>,
    probe: &Quaternion<S>,
    k: usize,
    tol: &Tol,
) -> Result<(Vec<Quaternion<S>>, QPoly<S>)> {
    let mut q = f.clone();
    let mut chain = Vec::with_capacity(k);
    for step in 1..=k {
        let beta = if probe.is_real() {
            probe.clone()
        } else {
            let scale = q.eval_scale(probe);
            let a = q.eval_left(probe);
            let b = q.eval_left(&probe.conj());
            if a.is_zero(tol, scale) && b.is_zero(tol, scale) {
                return Err(Error::ChainBroken { step });
            }
            roots_from_left_values(probe, &a, &b, tol, scale).map_err(|_| Error::ChainBroken { step })?.1
        };
        if !q.eval_right(&beta).is_zero(&check_tol(tol), q.eval_scale(&beta)) {
            return Err(Error::ChainBroken { step });
        }
        q = tidy(q.shift_right(&beta), tol);
        chain.push(beta);
    }
    Ok((chain, q))
}

/// Left and right spherical divisors of `f` at `class`.
pub fn spherical_divisors<S: Scalar>(
    f: &QPoly<S>,
    class: &ConjugacyClass<S>,
    tol: &Tol,
) -> Result<SphericalDivisorPair<S>> {
    let probe = probe_of(class)?;
    spherical_divisors_at(f, class, &probe, None, tol)
}

/// [`spherical_divisors`] with an explicit probe point and, optionally, the
/// already known multiplicity of the class among the roots of `f f#`.
pub fn spherical_divisors_at<S: Scalar>(
    f: &QPoly<S>,
    class: &ConjugacyClass<S>,
    probe: &Quaternion<S>,
    companion_mult: Option<usize>,
    tol: &Tol,
) -> Result<SphericalDivisorPair<S>> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::PreconditionViolated("polynomial must have positive degree".into()));
    }
    if class.is_real {
        // A real factor commutes with everything: the chain is (x, ..., x).
        let n = mult_left(probe, f, tol);
        let lin = QPoly::rho(probe).pow(n);
        let (cof, _) = f.divide_right(&lin)?;
        let cof = tidy(cof, tol);
        return Ok(SphericalDivisorPair {
            class: class.clone(),
            kappa: 0,
            left_chain: vec![probe.clone(); n],
            right_chain: vec![probe.clone(); n],
            left_cofactor: cof.clone(),
            right_cofactor: cof,
        });
    }
    let kappa = mult_spherical_at(f, probe, &probe.conj(), tol);
    let k = match companion_mult {
        Some(k) => k,
        None => {
            let c = f.companion_real(tol)?;
            mult_spherical_at(&c, probe, &probe.conj(), tol)
        }
    };
    if k < 2 * kappa {
        return Err(Error::PreconditionViolated("spherical multiplicity exceeds class multiplicity".into()));
    }
    let g = tidy(spherical_shift_pow(f, class, kappa), tol);
    let n = k - 2 * kappa;
    let (left_chain, left_cofactor) = extract_left_chain_at(&g, probe, n, tol)?;
    let (right_chain, right_cofactor) = extract_right_chain_at(&g, probe, n, tol)?;
    Ok(SphericalDivisorPair { class: class.clone(), kappa, left_chain, right_chain, left_cofactor, right_cofactor })
}

/// True when `F` has no zero in the class of `g`.
fn zero_free_in_class<S: Scalar>(f: &QPoly<S>, g: &Quaternion<S>, tol: &Tol) -> Result<bool> {
    Ok(!has_zero_in_class(f, g, tol))
}

/// `rho_g * F = Q * rho_b` with `b = F(conj g)^-1 g F(conj g)` when `F` has no zero in `[g]`.
pub fn commute_factor_left_to_right<S: Scalar>(
    g: &Quaternion<S>,
    f: &QPoly<S>,
    tol: &Tol,
) -> Result<(QPoly<S>, Quaternion<S>)> {
    if !zero_free_in_class(f, g, tol)? {
        return Err(Error::PreconditionViolated("the factor has a zero in the class".into()));
    }
    let v = f.eval_left(&g.conj());
    let b = g.conjugate_by(&v, &Tol::exact())?;
    let prod = &QPoly::rho(g) * f;
    Ok((tidy(prod.shift_right(&b), tol), b))
}

/// `Q * rho_b = rho_g * F` with `g = Q(conj b) b Q(conj b)^-1` (right values) when `Q` has no zero in `[b]`.
pub fn commute_factor_right_to_left<S: Scalar>(
    q: &QPoly<S>,
    b: &Quaternion<S>,
    tol: &Tol,
) -> Result<(Quaternion<S>, QPoly<S>)> {
    if !zero_free_in_class(q, b, tol)? {
        return Err(Error::PreconditionViolated("the factor has a zero in the class".into()));
    }
    let v = q.eval_right(&b.conj());
    let vinv = v.inverse_scaled(&Tol::exact(), 0.0)?;
    let g = &(&v * b) * &vinv;
    let prod = q * &QPoly::rho(b);
    Ok((g.clone(), tidy(prod.shift_left(&g), tol)))
}

/// Turns `X^k * rho_a1 ... rho_an * P` into `P~ * rho_bn ... rho_b1 * X^k`.
/// Returns `(b1..bn, P~)`.
pub fn left_divisor_to_right<S: Scalar>(
    chain: &[Quaternion<S>],
    p: &QPoly<S>,
    tol: &Tol,
) -> Result<(Vec<Quaternion<S>>, QPoly<S>)> {
    let mut cur = p.clone();
    let mut out = Vec::with_capacity(chain.len());
    for a in chain.iter().rev() {
        let (next, b) = commute_factor_left_to_right(a, &cur, tol)?;
        cur = next;
        out.push(b);
    }
    Ok((out, cur))
}

/// Turns `P~ * rho_bn ... rho_b1 * X^k` (chain given as `b1..bn`) into
/// `X^k * rho_a1 ... rho_an * P`. Returns `(a1..an, P)`.
pub fn right_divisor_to_left<S: Scalar>(
    right_chain: &[Quaternion<S>],
    p: &QPoly<S>,
    tol: &Tol,
) -> Result<(Vec<Quaternion<S>>, QPoly<S>)> {
    let mut cur = p.clone();
    let mut out = Vec::with_capacity(right_chain.len());
    for b in right_chain.iter().rev() {
        let (a, next) = commute_factor_right_to_left(&cur, b, tol)?;
        cur = next;
        out.push(a);
    }
    Ok((out, cur))
}

/// Spherical divisors at every class carrying zeros of `f`, sorted by class key.
pub fn zero_structure<S: Scalar>(f: &QPoly<S>, tol: &Tol) -> Result<Vec<SphericalDivisorPair<S>>> {
    let companion = f.companion_real(tol)?;
    let clusters = real_poly_complex_roots(&companion, tol)?.clusters;
    let mut out = Vec::with_capacity(clusters.len());
    for c in clusters {
        let class = c.class();
        let probe = probe_of(&class)?;
        let mult = if class.is_real { None } else { Some(c.multiplicity) };
        out.push(spherical_divisors_at(f, &class, &probe, mult, tol)?);
    }
    out.sort_by(|a, b| a.class.key().partial_cmp(&b.class.key()).expect("finite keys"));
    Ok(out)
}
