//! Splitting a polynomial into relatively prime indecomposable factors.
//!
//! A class holding isolated zeros contributes its chain product. A spherical
//! class with divisor `X^k * rho_a1 ... rho_an` contributes the pair
//! `g = rho_a1 ... rho_an * rho_an^k` and `h = rho_conj(a1)^k`, whose right
//! lcm is that divisor. Real zeros stay whole as `(z - x)^k`.

use crate::error::{Error, Result};
use crate::lcm::{IndecomposableFactor, Side};
use crate::poly::QPoly;
use crate::quat::{is_spherical_chain, Quaternion};
use crate::scalar::{Scalar, Tol};
use crate::spherical::zero_structure;

/// Why a part is there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartRole {
    /// The divisor of a class with isolated zeros.
    Chain,
    /// The chain of a spherical class extended by a power of its last point.
    ChainExtension,
    /// A power of the conjugate of the first chain point of a spherical class.
    ConjugatePower,
    /// `(z - x)^k` for a real zero `x`; kept whole.
    RealPower,
}

impl PartRole {
    pub fn name(&self) -> &'static str {
        match self {
            PartRole::Chain => "chain",
            PartRole::ChainExtension => "chain-extension",
            PartRole::ConjugatePower => "conjugate-power",
            PartRole::RealPower => "real-power",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionPart<S> {
    pub factor: IndecomposableFactor<S>,
    pub role: PartRole,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleDecomposition<S> {
    pub side: Side,
    pub parts: Vec<DecompositionPart<S>>,
}

impl<S: Scalar> IrreducibleDecomposition<S> {
    pub fn polys(&self) -> Vec<QPoly<S>> {
        self.parts.iter().map(|p| p.factor.poly.clone()).collect()
    }
}

/// The chain of `f` when `f` is indecomposable: all zeros in one class, no
/// spherical factor, and the divisor there is all of `f`. Powers `(z - x)^k`
/// of a real linear factor count as indecomposable with chain `(x, ..., x)`.
pub fn is_indecomposable<S: Scalar>(f: &QPoly<S>, tol: &Tol) -> Result<Option<IndecomposableFactor<S>>> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(Error::PreconditionViolated("expected a monic polynomial of positive degree".into()));
    }
    let zs = zero_structure(f, tol)?;
    let [pair] = zs.as_slice() else {
        return Ok(None);
    };
    if pair.kappa > 0 || pair.left_cofactor.degree() != Some(0) {
        return Ok(None);
    }
    let chain = pair.left_chain.clone();
    if !pair.class.is_real && !is_spherical_chain(&chain, &Tol { eps: tol.eps * 1e3 }) {
        return Ok(None);
    }
    let poly = QPoly::from_roots(&chain);
    Ok(Some(IndecomposableFactor { class: pair.class.clone(), chain, poly }))
}

/// Relatively prime indecomposable parts whose right lcm (`Side::Left`, the
/// left zero structure) or left lcm (`Side::Right`) is `f`.
pub fn decompose<S: Scalar>(f: &QPoly<S>, side: Side, tol: &Tol) -> Result<IrreducibleDecomposition<S>> {
    match side {
        Side::Left => decompose_left(f, tol),
        Side::Right => {
            let d = decompose_left(&f.sharp(), tol)?;
            let parts = d
                .parts
                .into_iter()
                .map(|p| {
                    let chain: Vec<_> = p.factor.chain.iter().rev().map(|a| a.conj()).collect();
                    let poly = p.factor.poly.sharp();
                    DecompositionPart { factor: IndecomposableFactor { class: p.factor.class, chain, poly }, role: p.role }
                })
                .collect();
            Ok(IrreducibleDecomposition { side: Side::Right, parts })
        }
    }
}

fn part<S: Scalar>(pair_class: &crate::quat::ConjugacyClass<S>, chain: Vec<Quaternion<S>>, role: PartRole) -> DecompositionPart<S> {
    let poly = QPoly::from_roots(&chain);
    DecompositionPart { factor: IndecomposableFactor { class: pair_class.clone(), chain, poly }, role }
}

fn decompose_left<S: Scalar>(f: &QPoly<S>, tol: &Tol) -> Result<IrreducibleDecomposition<S>> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(Error::PreconditionViolated("expected a monic polynomial of positive degree".into()));
    }
    let mut parts = Vec::new();
    for pair in zero_structure(f, tol)? {
        let class = &pair.class;
        if class.is_real {
            parts.push(part(class, pair.left_chain.clone(), PartRole::RealPower));
            continue;
        }
        let k = pair.kappa;
        if k == 0 {
            parts.push(part(class, pair.left_chain.clone(), PartRole::Chain));
            continue;
        }
        let (g, h) = match (pair.left_chain.first(), pair.left_chain.last()) {
            (Some(first), Some(last)) => {
                let mut g = pair.left_chain.clone();
                g.extend(std::iter::repeat(last.clone()).take(k));
                (g, vec![first.conj(); k])
            }
            _ => {
                let a = class.point().ok_or_else(|| Error::IrrationalRepresentative {
                    trace: class.trace.format(),
                    norm2: class.norm2.format(),
                })?;
                (vec![a.clone(); k], vec![a.conj(); k])
            }
        };
        parts.push(part(class, g, PartRole::ChainExtension));
        parts.push(part(class, h, PartRole::ConjugatePower));
    }
    Ok(IrreducibleDecomposition { side: Side::Left, parts })
}
