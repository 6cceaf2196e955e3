//! Least common multiples.
//!
//! Right multiples are built class by class: inside one class every monic
//! polynomial is `X_V^k` times an indecomposable chain product, and the lcm of
//! such forms is again of that form. Across classes the per-class results are
//! glued by commuting linear factors past each other.

use crate::error::{Error, Result};
use crate::poly::{has_zero_in_class, QPoly};
use crate::quat::{is_spherical_chain, ConjugacyClass, Quaternion};
use crate::scalar::{Scalar, Tol};
use crate::spherical::{zero_structure, SphericalDivisorPair};

/// A monic polynomial `rho_a1 ... rho_an` whose roots form a spherical chain.
#[derive(Clone, Debug, PartialEq)]
pub struct IndecomposableFactor<S> {
    pub class: ConjugacyClass<S>,
    pub chain: Vec<Quaternion<S>>,
    pub poly: QPoly<S>,
}

impl<S: Scalar> IndecomposableFactor<S> {
    pub fn new(chain: Vec<Quaternion<S>>, tol: &Tol) -> Result<Self> {
        let first = chain
            .first()
            .ok_or_else(|| Error::PreconditionViolated("empty chain; use IndecomposableFactor::trivial".into()))?;
        if !is_spherical_chain(&chain, tol) {
            return Err(Error::PreconditionViolated("points do not form a spherical chain".into()));
        }
        let class = ConjugacyClass::of(first);
        let poly = QPoly::from_roots(&chain);
        Ok(IndecomposableFactor { class, chain, poly })
    }

    /// The constant polynomial 1, attached to a class.
    pub fn trivial(class: ConjugacyClass<S>) -> Self {
        IndecomposableFactor { class, chain: vec![], poly: QPoly::one() }
    }

    fn unchecked(class: ConjugacyClass<S>, chain: Vec<Quaternion<S>>) -> Self {
        let poly = QPoly::from_roots(&chain);
        IndecomposableFactor { class, chain, poly }
    }

    pub fn degree(&self) -> usize {
        self.chain.len()
    }

    /// The only left zero.
    pub fn left_zero(&self) -> Option<&Quaternion<S>> {
        self.chain.first()
    }

    /// The only right zero.
    pub fn right_zero(&self) -> Option<&Quaternion<S>> {
        self.chain.last()
    }
}

/// `X_V^kappa * rho_a1 ... rho_an`; for a real class `{x}` the chain is `(x, ..., x)` and `kappa = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrescribedDivisor<S> {
    pub class: ConjugacyClass<S>,
    pub kappa: usize,
    pub chain: Vec<Quaternion<S>>,
}

impl<S: Scalar> PrescribedDivisor<S> {
    pub fn new(class: ConjugacyClass<S>, kappa: usize, chain: Vec<Quaternion<S>>) -> Self {
        PrescribedDivisor { class, kappa, chain }
    }

    /// `rho_x^k` for a real `x`.
    pub fn real_power(x: S, k: usize) -> Self {
        let class = ConjugacyClass::real(x.clone());
        PrescribedDivisor { class, kappa: 0, chain: vec![Quaternion::real(x); k] }
    }

    /// The left spherical divisor recorded in a divisor pair.
    pub fn left_of(pair: &SphericalDivisorPair<S>) -> Self {
        PrescribedDivisor { class: pair.class.clone(), kappa: pair.kappa, chain: pair.left_chain.clone() }
    }

    pub fn poly(&self) -> QPoly<S> {
        &self.class.char_poly().pow(self.kappa) * &QPoly::from_roots(&self.chain)
    }

    pub fn degree(&self) -> usize {
        2 * self.kappa + self.chain.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 0
    }
}

/// Tolerance for matching classes and points that came out of separate computations.
fn loose(tol: &Tol) -> Tol {
    Tol { eps: tol.eps * 1e3 }
}

fn tidy<S: Scalar>(p: QPoly<S>, tol: &Tol) -> QPoly<S> {
    if S::EXACT {
        p
    } else {
        p.trim_tol(tol)
    }
}

/// True when the remainder is negligible next to the dividend.
fn vanishes<S: Scalar>(r: &QPoly<S>, f: &QPoly<S>, tol: &Tol) -> bool {
    if S::EXACT || tol.eps == 0.0 {
        return r.is_zero();
    }
    let scale = f.l1_norm().max(1.0);
    r.coeffs().iter().all(|c| c.is_zero(&loose(tol), scale))
}

fn same_point<S: Scalar>(a: &Quaternion<S>, b: &Quaternion<S>, tol: &Tol) -> bool {
    a.approx_eq(b, &loose(tol), 1.0 + a.abs_f64())
}

/// Right lcm of two left-coprime indecomposables of one class:
/// `X_V^k * rho_a1 ... rho_a(n-k)` with `n >= k` the two degrees.
pub fn lrcm_same_class_coprime<S: Scalar>(
    g: &IndecomposableFactor<S>,
    h: &IndecomposableFactor<S>,
    tol: &Tol,
) -> Result<QPoly<S>> {
    let (g, h) = if g.degree() >= h.degree() { (g, h) } else { (h, g) };
    if h.degree() == 0 {
        return Ok(g.poly.clone());
    }
    if !g.class.same(&h.class, &loose(tol)) {
        return Err(Error::ClassMismatch);
    }
    let (a, b) = (g.left_zero().expect("nonempty"), h.left_zero().expect("nonempty"));
    if same_point(a, b, tol) {
        return Err(Error::NotCoprime(a.to_string()));
    }
    let k = h.degree();
    Ok(&g.class.char_poly().pow(k) * &QPoly::from_roots(&g.chain[..g.degree() - k]))
}

/// Left lcm of two right-coprime indecomposables of one class:
/// `X_V^k * rho_a(k+1) ... rho_an`.
pub fn llcm_same_class_coprime<S: Scalar>(
    g: &IndecomposableFactor<S>,
    h: &IndecomposableFactor<S>,
    tol: &Tol,
) -> Result<QPoly<S>> {
    let (g, h) = if g.degree() >= h.degree() { (g, h) } else { (h, g) };
    if h.degree() == 0 {
        return Ok(g.poly.clone());
    }
    if !g.class.same(&h.class, &loose(tol)) {
        return Err(Error::ClassMismatch);
    }
    let (a, b) = (g.right_zero().expect("nonempty"), h.right_zero().expect("nonempty"));
    if same_point(a, b, tol) {
        return Err(Error::NotCoprime(a.to_string()));
    }
    let k = h.degree();
    Ok(&g.class.char_poly().pow(k) * &QPoly::from_roots(&g.chain[k..]))
}

/// Greatest common left divisor of two indecomposables of one class. Every
/// left divisor of an indecomposable is a prefix of its chain, so this is the
/// longest prefix of `g` that divides `h` on the left.
pub fn glcd_indecomposable<S: Scalar>(
    g: &IndecomposableFactor<S>,
    h: &IndecomposableFactor<S>,
    tol: &Tol,
) -> Result<IndecomposableFactor<S>> {
    let top = g.degree().min(h.degree());
    for len in (1..=top).rev() {
        let prefix = QPoly::from_roots(&g.chain[..len]);
        let (_, r) = h.poly.divide_right(&prefix)?;
        if vanishes(&r, &h.poly, tol) {
            return Ok(IndecomposableFactor::unchecked(g.class.clone(), g.chain[..len].to_vec()));
        }
    }
    Ok(IndecomposableFactor::trivial(g.class.clone()))
}

/// Right lcm of indecomposables of one class: with `g1` of largest degree `n`,
/// `g_j = glcd(g_j, g1) h_j` and `k = max deg h_j`, the lcm is
/// `X_V^k * rho_a1 ... rho_a(n-k)` over the chain of `g1`.
pub fn lrcm_indecomposable_family<S: Scalar>(
    family: &[IndecomposableFactor<S>],
    tol: &Tol,
) -> Result<PrescribedDivisor<S>> {
    let mut members: Vec<&IndecomposableFactor<S>> = family.iter().filter(|g| g.degree() > 0).collect();
    let Some(first) = members.first() else {
        let class = family.first().map(|g| g.class.clone()).ok_or_else(|| {
            Error::PreconditionViolated("empty family".into())
        })?;
        return Ok(PrescribedDivisor::new(class, 0, vec![]));
    };
    let class = first.class.clone();
    if members.iter().any(|g| !g.class.same(&class, &loose(tol))) {
        return Err(Error::ClassMismatch);
    }
    members.sort_by(|a, b| b.degree().cmp(&a.degree()));
    let g1 = members[0];
    let mut k = 0;
    for g in &members[1..] {
        let p = glcd_indecomposable(g1, g, tol)?;
        k = k.max(g.degree() - p.degree());
    }
    Ok(PrescribedDivisor::new(class, k, g1.chain[..g1.degree() - k].to_vec()))
}

/// Right lcm of several divisors `X_V^kappa_j * p_j` of one class. Each is
/// split into two indecomposables whose lcm it is, then the whole family is
/// handled by [`lrcm_indecomposable_family`].
pub fn lrcm_same_class<S: Scalar>(divisors: &[PrescribedDivisor<S>], tol: &Tol) -> Result<PrescribedDivisor<S>> {
    let members: Vec<&PrescribedDivisor<S>> = divisors.iter().filter(|d| !d.is_trivial()).collect();
    let Some(first) = members.first() else {
        let class = divisors
            .first()
            .map(|d| d.class.clone())
            .ok_or_else(|| Error::PreconditionViolated("empty family".into()))?;
        return Ok(PrescribedDivisor::new(class, 0, vec![]));
    };
    let class = first.class.clone();
    if members.iter().any(|d| !d.class.same(&class, &loose(tol))) {
        return Err(Error::ClassMismatch);
    }
    if class.is_real {
        let longest = members.iter().max_by_key(|d| d.chain.len()).expect("nonempty");
        return Ok(PrescribedDivisor::new(class, 0, longest.chain.clone()));
    }
    let pure_kappa = members.iter().filter(|d| d.chain.is_empty()).map(|d| d.kappa).max().unwrap_or(0);
    let mut family = Vec::new();
    if pure_kappa > 0 {
        let alpha = members
            .iter()
            .find_map(|d| d.chain.first().cloned())
            .or_else(|| class.point())
            .ok_or_else(|| Error::IrrationalRepresentative {
                trace: class.trace.format(),
                norm2: class.norm2.format(),
            })?;
        family.push(IndecomposableFactor::unchecked(class.clone(), vec![alpha.clone(); pure_kappa]));
        family.push(IndecomposableFactor::unchecked(class.clone(), vec![alpha.conj(); pure_kappa]));
    }
    for d in members.iter().filter(|d| !d.chain.is_empty()) {
        if d.kappa == 0 {
            family.push(IndecomposableFactor::unchecked(class.clone(), d.chain.clone()));
            continue;
        }
        let last = d.chain.last().expect("nonempty").clone();
        let mut extended = d.chain.clone();
        extended.extend(std::iter::repeat(last).take(d.kappa));
        family.push(IndecomposableFactor::unchecked(class.clone(), extended));
        family.push(IndecomposableFactor::unchecked(class.clone(), vec![d.chain[0].conj(); d.kappa]));
    }
    lrcm_indecomposable_family(&family, tol)
}

/// Both factorizations of the lcm of `F` (zeros in one class) and `Q` (no zeros there).
#[derive(Clone, Debug, PartialEq)]
pub struct CrossClassLcm<S> {
    /// `F * Q_k = Q * rho(tail[0]) ... rho(tail[k-1])`.
    pub lcm: QPoly<S>,
    pub tail_chain: Vec<Quaternion<S>>,
    pub q_k: QPoly<S>,
}

/// Right lcm of `F = rho_a1 ... rho_ak` and a `Q` without zeros in the class of `F`,
/// by moving each `rho_aj` across `Q`.
pub fn lrcm_cross_class<S: Scalar>(f: &IndecomposableFactor<S>, q: &QPoly<S>, tol: &Tol) -> Result<CrossClassLcm<S>> {
    lrcm_cross_class_roots(&f.chain, q, tol)
}

/// [`lrcm_cross_class`] for any linear factorization `rho_a1 ... rho_ak` with all roots in one class.
pub fn lrcm_cross_class_roots<S: Scalar>(roots: &[Quaternion<S>], q: &QPoly<S>, tol: &Tol) -> Result<CrossClassLcm<S>> {
    if q.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if let Some(a) = roots.first() {
        if q.degree().unwrap_or(0) > 0 && has_zero_in_class(q, a, tol) {
            return Err(Error::PreconditionViolated("the second polynomial has a zero in the class".into()));
        }
    }
    let mut qj = q.clone();
    let mut tail = Vec::with_capacity(roots.len());
    for a in roots {
        let v = qj.eval_left(a);
        let moved = a.conjugate_by(&v, &Tol::exact())?;
        qj = tidy((&qj * &QPoly::rho(&moved)).shift_left(a), tol);
        tail.push(moved);
    }
    let lcm = tidy(&QPoly::from_roots(roots) * &qj, tol);
    let other = tidy(q * &QPoly::from_roots(&tail), tol);
    let agree = if S::EXACT { lcm == other } else { (&lcm - &other).coeffs().iter().all(|c| c.is_zero(&loose(tol), lcm.l1_norm().max(1.0))) };
    if !agree {
        return Err(Error::PreconditionViolated("the two lcm factorizations disagree".into()));
    }
    Ok(CrossClassLcm { lcm, tail_chain: tail, q_k: qj })
}

fn check_distinct<'a, S: Scalar + 'a>(classes: impl Iterator<Item = &'a ConjugacyClass<S>>, tol: &Tol) -> Result<()> {
    let seen: Vec<&ConjugacyClass<S>> = classes.collect();
    for (i, a) in seen.iter().enumerate() {
        if seen[i + 1..].iter().any(|b| a.same(b, &loose(tol))) {
            return Err(Error::ClassCollision(a.to_string()));
        }
    }
    Ok(())
}

/// Right lcm of indecomposables lying in pairwise distinct classes; its degree is the sum of degrees.
pub fn lrcm_distinct_classes<S: Scalar>(factors: &[IndecomposableFactor<S>], tol: &Tol) -> Result<QPoly<S>> {
    let members: Vec<&IndecomposableFactor<S>> = factors.iter().filter(|f| f.degree() > 0).collect();
    check_distinct(members.iter().map(|f| &f.class), tol)?;
    let mut p = QPoly::one();
    for f in members {
        p = lrcm_cross_class(f, &p, tol)?.lcm;
    }
    Ok(p)
}

/// The monic polynomial whose left spherical divisors are exactly the given
/// ones (classes pairwise distinct): `lcm(chain parts) * prod X_V^kappa * prod rho_x^k`.
pub fn synthesize_from_divisors<S: Scalar>(divisors: &[PrescribedDivisor<S>], tol: &Tol) -> Result<QPoly<S>> {
    let members: Vec<&PrescribedDivisor<S>> = divisors.iter().filter(|d| !d.is_trivial()).collect();
    check_distinct(members.iter().map(|d| &d.class), tol)?;
    let chains: Vec<IndecomposableFactor<S>> = members
        .iter()
        .filter(|d| !d.class.is_real && !d.chain.is_empty())
        .map(|d| IndecomposableFactor::unchecked(d.class.clone(), d.chain.clone()))
        .collect();
    let mut out = lrcm_distinct_classes(&chains, tol)?;
    for d in &members {
        if d.class.is_real {
            out = &out * &QPoly::from_roots(&d.chain);
        } else if d.kappa > 0 {
            out = &out * &d.class.char_poly().pow(d.kappa);
        }
    }
    Ok(tidy(out, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// An lcm with the data that certifies it.
#[derive(Clone, Debug, PartialEq)]
pub struct LcmReport<S> {
    pub side: Side,
    /// Monic common multiple of least degree.
    pub result: QPoly<S>,
    /// `g_j * units[j]` is monic (right side) or `units[j] * g_j` is monic (left side).
    pub units: Vec<Quaternion<S>>,
    /// `result = g_j * quotients[j]` (right side) or `result = quotients[j] * g_j` (left side).
    pub quotients: Vec<QPoly<S>>,
}

/// Least right common multiple: the monic generator of the intersection of the right ideals `g_j H[z]`.
pub fn lrcm_general<S: Scalar>(polys: &[QPoly<S>], tol: &Tol) -> Result<LcmReport<S>> {
    if polys.is_empty() {
        return Err(Error::PreconditionViolated("no polynomials given".into()));
    }
    let mut monics = Vec::with_capacity(polys.len());
    let mut units = Vec::with_capacity(polys.len());
    for p in polys {
        let (m, u) = p.monic_right()?;
        monics.push(m);
        units.push(u);
    }
    // Left spherical divisors of every input, grouped by class.
    let mut groups: Vec<(ConjugacyClass<S>, Vec<PrescribedDivisor<S>>)> = Vec::new();
    for m in monics.iter().filter(|m| m.degree().unwrap_or(0) > 0) {
        for pair in zero_structure(m, tol)? {
            let d = PrescribedDivisor::left_of(&pair);
            match groups.iter_mut().find(|(c, _)| c.same(&pair.class, &loose(tol))) {
                Some((_, list)) => list.push(d),
                None => groups.push((pair.class.clone(), vec![d])),
            }
        }
    }
    groups.sort_by(|a, b| a.0.key().partial_cmp(&b.0.key()).expect("finite keys"));
    let mut per_class = Vec::with_capacity(groups.len());
    for (_, list) in &groups {
        per_class.push(lrcm_same_class(list, tol)?);
    }
    let result = synthesize_from_divisors(&per_class, tol)?;
    let mut quotients = Vec::with_capacity(polys.len());
    for (m, u) in monics.iter().zip(&units) {
        let (q, r) = result.divide_right(m)?;
        if !vanishes(&r, &result, tol) {
            return Err(Error::PreconditionViolated("an input does not divide the computed multiple".into()));
        }
        quotients.push(tidy(q.scale_left(u), tol));
    }
    Ok(LcmReport { side: Side::Right, result, units, quotients })
}

/// Least left common multiple, through `(f g)# = g# f#`.
pub fn llcm_general<S: Scalar>(polys: &[QPoly<S>], tol: &Tol) -> Result<LcmReport<S>> {
    let sharps: Vec<QPoly<S>> = polys.iter().map(|p| p.sharp()).collect();
    let r = lrcm_general(&sharps, tol)?;
    Ok(LcmReport {
        side: Side::Left,
        result: r.result.sharp(),
        units: r.units.iter().map(|u| u.conj()).collect(),
        quotients: r.quotients.iter().map(|q| q.sharp()).collect(),
    })
}

/// Dispatches on the side.
pub fn lcm_general<S: Scalar>(polys: &[QPoly<S>], side: Side, tol: &Tol) -> Result<LcmReport<S>> {
    match side {
        Side::Right => lrcm_general(polys, tol),
        Side::Left => llcm_general(polys, tol),
    }
}
