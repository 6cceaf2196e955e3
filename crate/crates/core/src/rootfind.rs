//! Zeros of quaternion polynomials.
//!
//! Every zero of `f` lies in a conjugacy class whose characteristic
//! polynomial divides the real polynomial `f f#`. The classes come from the
//! complex roots of `f f#`; inside each class two left evaluations determine
//! the unique left and right zero, or reveal that the whole sphere is a zero.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::quat::{ConjugacyClass, Quaternion};
use crate::scalar::{Scalar, Tol};

/// Iteration cap of the simultaneous root iteration.
pub const MAX_ITERATIONS: usize = 200;

/// A group of complex roots of a real polynomial that share one conjugacy class.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRootCluster<S> {
    pub trace: S,
    pub norm2: S,
    /// Root multiplicity of one representative (`a` and `conj(a)` each count this often).
    pub multiplicity: usize,
    pub is_real: bool,
}

impl<S: Scalar> ComplexRootCluster<S> {
    pub fn class(&self) -> ConjugacyClass<S> {
        ConjugacyClass { trace: self.trace.clone(), norm2: self.norm2.clone(), is_real: self.is_real }
    }

    /// How many roots of the real polynomial the cluster accounts for.
    pub fn root_count(&self) -> usize {
        if self.is_real {
            self.multiplicity
        } else {
            2 * self.multiplicity
        }
    }
}

/// Clusters plus a flag raised when distinct-looking roots were merged.
#[derive(Clone, Debug, PartialEq)]
pub struct Clusters<S> {
    pub clusters: Vec<ComplexRootCluster<S>>,
    pub merged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// The whole class consists of zeros.
    Spherical,
    /// Exactly one left and one right zero in the class.
    Isolated,
    /// A real zero.
    Real,
}

impl RootKind {
    pub fn name(&self) -> &'static str {
        match self {
            RootKind::Spherical => "spherical",
            RootKind::Isolated => "isolated",
            RootKind::Real => "real",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassRoots<S> {
    pub class: ConjugacyClass<S>,
    /// Multiplicity of the class among the roots of `f f#`, counted as in [`ComplexRootCluster`].
    pub multiplicity: usize,
    pub kind: RootKind,
    pub left: Option<Quaternion<S>>,
    pub right: Option<Quaternion<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootReport<S> {
    /// Sorted by `(trace, norm2)`.
    pub classes: Vec<ClassRoots<S>>,
    /// Set when root clusters were too close to separate with confidence.
    pub warning: bool,
}

impl<S: Scalar> RootReport<S> {
    pub fn find(&self, class: &ConjugacyClass<S>, tol: &Tol) -> Option<&ClassRoots<S>> {
        self.classes.iter().find(|c| c.class.same(class, tol))
    }
}

/// All complex roots of a real polynomial, grouped by conjugacy class.
pub fn real_poly_complex_roots<S: Scalar>(p: &QPoly<S>, tol: &Tol) -> Result<Clusters<S>> {
    if !p.is_real() && S::EXACT {
        return Err(Error::PreconditionViolated("polynomial has non-real coefficients".into()));
    }
    match p.degree() {
        None | Some(0) => {
            return Err(Error::PreconditionViolated("polynomial must have positive degree".into()))
        }
        _ => {}
    }
    let coeffs = p.real_coeffs();
    if S::EXACT {
        let rat: Vec<BigRational> = coeffs.iter().map(|c| c.to_rational().expect("exact")).collect();
        let clusters = exact_clusters(&rat)?
            .into_iter()
            .map(|c| ComplexRootCluster {
                trace: S::from_rational(&c.trace),
                norm2: S::from_rational(&c.norm2),
                multiplicity: c.multiplicity,
                is_real: c.is_real,
            })
            .collect();
        Ok(Clusters { clusters, merged: false })
    } else {
        let dd: Vec<TwoFloat> = coeffs.iter().map(|c| TwoFloat::from(c.to_f64())).collect();
        float_complex_clusters(&dd, tol)
    }
}

fn float_complex_clusters<S: Scalar>(dd: &[TwoFloat], tol: &Tol) -> Result<Clusters<S>> {
    let (clusters, merged) = float_clusters(dd, tol.eps.max(f64::EPSILON))?;
    let clusters = clusters
        .into_iter()
        .map(|c| ComplexRootCluster {
            trace: S::from_f64(c.trace),
            norm2: S::from_f64(c.norm2),
            multiplicity: c.multiplicity,
            is_real: c.is_real,
        })
        .collect();
    Ok(Clusters { clusters, merged })
}

/// The left and right zero in the class of `a`, from the left values at `a` and `conj(a)`.
pub fn in_class_roots_left_eval<S: Scalar>(
    f: &QPoly<S>,
    a: &Quaternion<S>,
    tol: &Tol,
) -> Result<(Quaternion<S>, Quaternion<S>)> {
    let scale = f.eval_scale(a);
    let fa = f.eval_left(a);
    if fa.is_zero(tol, scale) {
        return Err(Error::DegenerateEvaluations);
    }
    let fb = f.eval_left(&a.conj());
    roots_from_left_values(a, &fa, &fb, tol, scale)
}

/// The left and right zero in the class of `a`, from the right values at `a` and `conj(a)`.
pub fn in_class_roots_right_eval<S: Scalar>(
    f: &QPoly<S>,
    a: &Quaternion<S>,
    tol: &Tol,
) -> Result<(Quaternion<S>, Quaternion<S>)> {
    let scale = f.eval_scale(a);
    let fa = f.eval_right(a);
    if fa.is_zero(tol, scale) {
        return Err(Error::DegenerateEvaluations);
    }
    let fb = f.eval_right(&a.conj());
    roots_from_right_values(a, &fa, &fb, tol, scale)
}

/// `gl = (conj(a) x + a y)(x + y)^-1`, `gr = (x - y)^-1 (conj(a) x - a y)` for the
/// left values `x = f(a)`, `y = f(conj(a))`. When one value vanishes the
/// formulas collapse to the degenerate cases (left zero `a` or `conj(a)`).
pub fn roots_from_left_values<S: Scalar>(
    a: &Quaternion<S>,
    x: &Quaternion<S>,
    y: &Quaternion<S>,
    tol: &Tol,
    scale: f64,
) -> Result<(Quaternion<S>, Quaternion<S>)> {
    let ab = a.conj();
    let sum_inv = (x + y).inverse_scaled(tol, scale).map_err(|_| Error::DegenerateEvaluations)?;
    let diff_inv = (x - y).inverse_scaled(tol, scale).map_err(|_| Error::DegenerateEvaluations)?;
    let gl = &(&(&ab * x) + &(a * y)) * &sum_inv;
    let gr = &diff_inv * &(&(&ab * x) - &(a * y));
    Ok((gl, gr))
}

/// Right-value counterpart: `gl = (x conj(a) - y a)(x - y)^-1`, `gr = (x + y)^-1 (x conj(a) + y a)`.
pub fn roots_from_right_values<S: Scalar>(
    a: &Quaternion<S>,
    x: &Quaternion<S>,
    y: &Quaternion<S>,
    tol: &Tol,
    scale: f64,
) -> Result<(Quaternion<S>, Quaternion<S>)> {
    let ab = a.conj();
    let sum_inv = (x + y).inverse_scaled(tol, scale).map_err(|_| Error::DegenerateEvaluations)?;
    let diff_inv = (x - y).inverse_scaled(tol, scale).map_err(|_| Error::DegenerateEvaluations)?;
    let gl = &(&(x * &ab) - &(y * a)) * &diff_inv;
    let gr = &sum_inv * &(&(x * &ab) + &(y * a));
    Ok((gl, gr))
}

/// Finds every zero of `f`: real zeros, spherical classes, and the isolated
/// left/right zero pair in every other class.
pub fn find_all_roots<S: Scalar>(f: &QPoly<S>, tol: &Tol) -> Result<RootReport<S>> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::PreconditionViolated("polynomial must have positive degree".into()));
    }
    let Clusters { clusters, merged } = if S::EXACT {
        real_poly_complex_roots(&f.companion_real(tol)?, tol)?
    } else {
        float_complex_clusters(&companion_dd(f), tol)?
    };
    let mut classes = Vec::with_capacity(clusters.len());
    for c in clusters {
        classes.push(classify(f, &c, tol)?);
    }
    classes.sort_by(|a, b| a.class.key().partial_cmp(&b.class.key()).expect("finite keys"));
    Ok(RootReport { classes, warning: merged })
}

fn classify<S: Scalar>(f: &QPoly<S>, c: &ComplexRootCluster<S>, tol: &Tol) -> Result<ClassRoots<S>> {
    let class = c.class();
    if c.is_real {
        let x = Quaternion::real(class.real_part());
        return Ok(ClassRoots {
            class,
            multiplicity: c.multiplicity,
            kind: RootKind::Real,
            left: Some(x.clone()),
            right: Some(x),
        });
    }
    let Some(a) = class.point() else {
        // No rational point to probe with; the class can still be a spherical zero.
        let (_, r) = f.divide_left(&class.char_poly())?;
        if r.is_zero() {
            return Ok(ClassRoots { class, multiplicity: c.multiplicity, kind: RootKind::Spherical, left: None, right: None });
        }
        return Err(Error::IrrationalRepresentative { trace: class.trace.format(), norm2: class.norm2.format() });
    };
    let scale = f.eval_scale(&a);
    let x = f.eval_left(&a);
    let y = f.eval_left(&a.conj());
    if x.is_zero(tol, scale) && y.is_zero(tol, scale) {
        return Ok(ClassRoots { class, multiplicity: c.multiplicity, kind: RootKind::Spherical, left: None, right: None });
    }
    let (gl, gr) = roots_from_left_values(&a, &x, &y, tol, scale)?;
    Ok(ClassRoots { class, multiplicity: c.multiplicity, kind: RootKind::Isolated, left: Some(gl), right: Some(gr) })
}

/// Factors `f = (z - g_1)...(z - g_n) * c` by peeling off one left zero at a
/// time with the left backward shift. Returns the zeros and the constant `c`.
pub fn factor_linear<S: Scalar>(f: &QPoly<S>, tol: &Tol) -> Result<(Vec<Quaternion<S>>, Quaternion<S>)> {
    let mut q = f.clone();
    let mut roots = Vec::new();
    while q.degree().unwrap_or(0) > 0 {
        let report = find_all_roots(&q, tol)?;
        let first = report.classes.first().ok_or(Error::NoConvergence { iterations: 0 })?;
        let g = match first.kind {
            RootKind::Real | RootKind::Isolated => first.left.clone().expect("point zero"),
            RootKind::Spherical => first.class.point().ok_or_else(|| Error::IrrationalRepresentative {
                trace: first.class.trace.format(),
                norm2: first.class.norm2.format(),
            })?,
        };
        q = q.shift_left(&g);
        if !S::EXACT {
            q = q.trim_tol(tol);
        }
        roots.push(g);
    }
    let c = q.coeff(0);
    Ok((roots, c))
}

// ---------------------------------------------------------------------------
// Floating-point path: simultaneous iteration plus inclusion-disk clustering.

#[derive(Clone, Debug)]
struct FloatCluster {
    trace: f64,
    norm2: f64,
    multiplicity: usize,
    is_real: bool,
}

type Cdd = Complex<TwoFloat>;

fn cdd(z: Complex64) -> Cdd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn chi(z: Cdd) -> Complex64 {
    Complex64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

/// Horner evaluation in double-double returning `p(z)`, `p'(z)` and a
/// rounding-error bound for `p(z)`.
fn horner(coeffs: &[TwoFloat], z: Complex64) -> (Complex64, Complex64, f64) {
    let zz = cdd(z);
    let mut p = Cdd::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    let mut dp = p;
    let mut bound = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * zz + p;
        p = p * zz + Cdd::new(*c, TwoFloat::from(0.0));
        bound = bound * az + c.hi().abs();
    }
    let n = coeffs.len().max(1) as f64;
    (chi(p), chi(dp), bound * f64::EPSILON * f64::EPSILON * 8.0 * n)
}

fn eval_complex(coeffs: &[TwoFloat], z: Complex64) -> Complex64 {
    let zz = cdd(z);
    let zero = TwoFloat::from(0.0);
    chi(coeffs.iter().rev().fold(Cdd::new(zero, zero), |acc, c| acc * zz + Cdd::new(*c, zero)))
}

fn derivative_dd(coeffs: &[TwoFloat], k: usize) -> Vec<TwoFloat> {
    if coeffs.len() <= k {
        return vec![];
    }
    (k..coeffs.len())
        .map(|j| coeffs[j] * ((j - k + 1)..=j).map(|t| t as f64).product::<f64>())
        .collect()
}

/// `f f#` for a float polynomial, accumulated in double-double so that the
/// multiple roots it inherits from `f` are not split by rounding.
fn companion_dd<S: Scalar>(f: &QPoly<S>) -> Vec<TwoFloat> {
    let c: Vec<[f64; 4]> = f.coeffs().iter().map(|q| [q.re.to_f64(), q.i.to_f64(), q.j.to_f64(), q.k.to_f64()]).collect();
    let mut out = vec![TwoFloat::from(0.0); 2 * c.len() - 1];
    for (a, fa) in c.iter().enumerate() {
        for (b, fb) in c.iter().enumerate() {
            for t in 0..4 {
                out[a + b] += TwoFloat::new_mul(fa[t], fb[t]);
            }
        }
    }
    out
}

/// Roots of a real polynomial with nonzero constant and leading terms.
pub fn complex_roots(coeffs: &[f64], eps: f64) -> Result<Vec<Complex64>> {
    let dd: Vec<TwoFloat> = coeffs.iter().map(|&c| TwoFloat::from(c)).collect();
    complex_roots_dd(&dd, eps)
}

fn complex_roots_dd(coeffs: &[TwoFloat], eps: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let a: Vec<TwoFloat> = coeffs.iter().map(|&c| c / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-a[0].hi(), 0.0)]);
    }
    // Fujiwara bound on the root moduli.
    let bound = (1..=n)
        .map(|k| {
            let c = a[n - k].hi().abs();
            if k == n {
                (c / 2.0).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = (bound * 0.5).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, err) = horner(&a, z[i]);
            if p.norm() <= err {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() == 0.0 || !ratio.is_finite() { ratio } else { ratio / denom };
            if !step.is_finite() {
                // Derivative vanished: nudge the iterate off the critical point.
                let nudge = Complex64::new(eps.sqrt(), eps.sqrt()) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= eps * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS })
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Groups roots by overlapping inclusion disks, then merges anything within
/// `eps * (1 + max |coeff|)` and reports whether that second merge mattered.
fn float_clusters(coeffs: &[TwoFloat], eps: f64) -> Result<(Vec<FloatCluster>, bool)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < coeffs.len() && coeffs[start].hi() == 0.0 {
        start += 1;
    }
    if start > 0 {
        out.push(FloatCluster { trace: 0.0, norm2: 0.0, multiplicity: start, is_real: true });
    }
    let a = &coeffs[start..];
    if a.len() < 2 {
        return Ok((out, false));
    }
    let n = a.len() - 1;
    let roots = complex_roots_dd(a, eps)?;
    let lead = a[n].hi().abs();
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let (p, _, err) = horner(a, roots[i]);
            let prod: f64 = (0..n).filter(|&j| j != i).map(|j| (roots[i] - roots[j]).norm()).product();
            let floor = eps * (1.0 + roots[i].norm());
            if prod == 0.0 {
                floor * 1e3
            } else {
                (n as f64 * (p.norm() + err) / (lead * prod)).max(floor)
            }
        })
        .collect();
    // Rounding in `f` splits a zero of multiplicity k by roughly eps^(1/k);
    // roots closer than `reach` are read as one cluster.
    let reach = eps.powf(0.25);
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (roots[i] - roots[j]).norm();
            if d <= radii[i] + radii[j] || d <= reach * (1.0 + roots[i].norm().max(roots[j].norm())) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let max_coeff = a.iter().map(|c| (c.hi() / a[n].hi()).abs()).fold(0.0, f64::max);
    let delta = eps * (1.0 + max_coeff);
    let mut merged = false;
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() <= delta {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                    merged = true;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    let mut counted = 0;
    for g in &groups {
        let m = g.len();
        let centroid = g.iter().map(|&i| roots[i]).sum::<Complex64>() / m as f64;
        let reach = g.iter().map(|&i| (roots[i] - centroid).norm() + radii[i]).fold(0.0, f64::max);
        let is_real = centroid.im.abs() <= reach;
        if !is_real && centroid.im < 0.0 {
            continue;
        }
        let mut c = if is_real { Complex64::new(centroid.re, 0.0) } else { centroid };
        c = refine(a, c, m, reach.max(eps));
        if is_real {
            c.im = 0.0;
            counted += m;
            out.push(FloatCluster { trace: 2.0 * c.re, norm2: c.re * c.re, multiplicity: m, is_real: true });
        } else {
            counted += 2 * m;
            out.push(FloatCluster { trace: 2.0 * c.re, norm2: c.norm_sqr(), multiplicity: m, is_real: false });
        }
    }
    if counted != n {
        merged = true;
    }
    Ok((out, merged))
}

/// Newton on the `(m-1)`-th derivative, which has a simple root at an m-fold root.
fn refine(a: &[TwoFloat], start: Complex64, m: usize, reach: f64) -> Complex64 {
    let d = derivative_dd(a, m - 1);
    let dd = derivative_dd(a, m);
    if dd.is_empty() {
        return start;
    }
    let mut z = start;
    let mut last = f64::INFINITY;
    for _ in 0..20 {
        let p = eval_complex(&d, z);
        let dp = eval_complex(&dd, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() || step.norm() >= last {
            break;
        }
        let next = z - step;
        if (next - start).norm() > 2.0 * reach {
            break;
        }
        last = step.norm();
        z = next;
        if step.norm() <= f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

// ---------------------------------------------------------------------------
// Exact path: square-free decomposition over the rationals, numerical
// localisation, high-precision polishing and exact verification.

#[derive(Clone, Debug)]
struct ExactCluster {
    trace: BigRational,
    norm2: BigRational,
    multiplicity: usize,
    is_real: bool,
}

type RPoly = Vec<BigRational>;

fn r_trim(mut p: RPoly) -> RPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn r_deriv(p: &RPoly) -> RPoly {
    r_trim(p.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect())
}

fn r_monic(p: RPoly) -> RPoly {
    let lead = p.last().expect("nonzero").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn r_divrem(p: &RPoly, g: &RPoly) -> (RPoly, RPoly) {
    let m = g.len() - 1;
    if p.len() < g.len() {
        return (vec![], p.clone());
    }
    let mut r = p.clone();
    let mut q = vec![BigRational::zero(); p.len() - m];
    let lead = g[m].clone();
    for d in (m..p.len()).rev() {
        let c = &r[d] / &lead;
        if !c.is_zero() {
            for (t, gt) in g.iter().enumerate() {
                r[t + d - m] -= &c * gt;
            }
        }
        r[d] = BigRational::zero();
        q[d - m] = c;
    }
    r.truncate(m);
    (r_trim(q), r_trim(r))
}

fn r_gcd(a: &RPoly, b: &RPoly) -> RPoly {
    let (mut a, mut b) = (r_trim(a.clone()), r_trim(b.clone()));
    while !b.is_empty() {
        let (_, r) = r_divrem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { r_monic(r) };
    }
    r_monic(a)
}

fn r_sub(a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    r_trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

/// Yun's square-free decomposition: returns `(factor, multiplicity)` pairs.
fn square_free(p: &RPoly) -> Vec<(RPoly, usize)> {
    let p = r_monic(p.clone());
    let dp = r_deriv(&p);
    let a0 = r_gcd(&p, &dp);
    let (mut b, _) = r_divrem(&p, &a0);
    let (mut c, _) = r_divrem(&dp, &a0);
    let mut d = r_sub(&c, &r_deriv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = if d.is_empty() { b.clone() } else { r_gcd(&b, &d) };
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        b = r_divrem(&b, &a).0;
        c = r_divrem(&d, &a).0;
        d = r_sub(&c, &r_deriv(&b));
        i += 1;
    }
    out
}

fn exact_clusters(p: &[BigRational]) -> Result<Vec<ExactCluster>> {
    let mut p: RPoly = r_trim(p.to_vec());
    let mut out = Vec::new();
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push(ExactCluster {
            trace: BigRational::zero(),
            norm2: BigRational::zero(),
            multiplicity: zeros,
            is_real: true,
        });
        p.drain(..zeros);
    }
    if p.len() < 2 {
        return Ok(out);
    }
    for (factor, mult) in square_free(&p) {
        for (trace, norm2, is_real) in split_square_free(&factor)? {
            out.push(ExactCluster { trace, norm2, multiplicity: mult, is_real });
        }
    }
    Ok(out)
}

/// Splits a square-free rational polynomial into rational linear and
/// irreducible quadratic factors; returns `(trace, norm2, is_real)` per factor.
fn split_square_free(q: &RPoly) -> Result<Vec<(BigRational, BigRational, bool)>> {
    let fl: Vec<f64> = q.iter().map(|c| c.to_f64()).collect();
    let roots = complex_roots(&fl, 1e-14)?;
    let mut rest = q.clone();
    let mut out = Vec::new();
    for z in roots {
        if rest.len() <= 1 {
            break;
        }
        let real_like = z.im.abs() <= 1e-7 * (1.0 + z.norm());
        if !real_like && z.im < 0.0 {
            continue;
        }
        // Most factors have small denominators: try those before polishing.
        if real_like {
            if let Some(x) = small_convergents(z.re).into_iter().find(|x| r_divrem(&rest, &vec![-x.clone(), BigRational::one()]).1.is_empty()) {
                rest = r_divrem(&rest, &vec![-x.clone(), BigRational::one()]).0;
                out.push((&x + &x, &x * &x, true));
                continue;
            }
        } else {
            let ts = small_convergents(2.0 * z.re);
            let ns = small_convergents(z.norm_sqr());
            let hit = ts.iter().flat_map(|t| ns.iter().map(move |n| (t, n))).find(|(t, n)| {
                r_divrem(&rest, &vec![(*n).clone(), -(*t).clone(), BigRational::one()]).1.is_empty()
            });
            if let Some((t, n)) = hit {
                rest = r_divrem(&rest, &vec![n.clone(), -t.clone(), BigRational::one()]).0;
                out.push((t.clone(), n.clone(), false));
                continue;
            }
        }
        let start = if real_like { Complex64::new(z.re, 0.0) } else { z };
        let Some(root) = polish(&rest, start, real_like) else {
            continue;
        };
        if real_like {
            let Some(x) = rationalize(&root.0) else { continue };
            let lin = vec![-x.clone(), BigRational::one()];
            let (quo, rem) = r_divrem(&rest, &lin);
            if rem.is_empty() {
                rest = quo;
                out.push((&x + &x, &x * &x, true));
            }
        } else {
            let two = BigRational::from_integer(BigInt::from(2));
            let t_approx = &root.0 * &two;
            let n_approx = &root.0 * &root.0 + &root.1 * &root.1;
            let (Some(t), Some(n)) = (rationalize(&t_approx), rationalize(&n_approx)) else { continue };
            let quad = vec![n.clone(), -t.clone(), BigRational::one()];
            let (quo, rem) = r_divrem(&rest, &quad);
            if rem.is_empty() {
                rest = quo;
                out.push((t, n, false));
            }
        }
    }
    if rest.len() > 1 {
        return Err(Error::NeedsFloatBackend);
    }
    Ok(out)
}

/// Working precision (bits) of the polishing step.
const PREC: usize = 320;

fn round_bits(x: &BigRational, bits: usize) -> BigRational {
    let scaled = (x.numer() << bits) / x.denom();
    BigRational::new(scaled, BigInt::one() << bits)
}

/// Newton iteration in rational arithmetic rounded to `PREC + 40` bits.
fn polish(q: &RPoly, z: Complex64, real: bool) -> Option<(BigRational, BigRational)> {
    let mut re = BigRational::from_float(z.re)?;
    let mut im = if real { BigRational::zero() } else { BigRational::from_float(z.im)? };
    let dq = r_deriv(q);
    let tiny = BigRational::new(BigInt::one(), BigInt::one() << (PREC + 8));
    for _ in 0..40 {
        let (pr, pi) = eval_c(q, &re, &im);
        let (dr, di) = eval_c(&dq, &re, &im);
        let den = &dr * &dr + &di * &di;
        if den.is_zero() {
            return None;
        }
        // (pr + i pi) / (dr + i di)
        let sr = (&pr * &dr + &pi * &di) / &den;
        let si = (&pi * &dr - &pr * &di) / &den;
        re = round_bits(&(&re - &sr), PREC + 40);
        im = if real { BigRational::zero() } else { round_bits(&(&im - &si), PREC + 40) };
        if sr.abs() <= tiny && si.abs() <= tiny {
            return Some((re, im));
        }
    }
    None
}

fn eval_c(q: &RPoly, re: &BigRational, im: &BigRational) -> (BigRational, BigRational) {
    let mut ar = BigRational::zero();
    let mut ai = BigRational::zero();
    for c in q.iter().rev() {
        let nr = &ar * re - &ai * im + c;
        let ni = &ar * im + &ai * re;
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

/// Continued-fraction convergents of `x` with denominators up to `2^30`
/// that agree with `x` to about eight digits, smallest denominator first.
fn small_convergents(x: f64) -> Vec<BigRational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let close = 1e-8 * (1.0 + x.abs());
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rem = x;
    for _ in 0..40 {
        let a = rem.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > 1 << 30 {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= close {
            out.push(BigRational::new(BigInt::from(h2), BigInt::from(k2)));
            if out.len() == 3 {
                break;
            }
        }
        let frac = rem - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        rem = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}

/// The continued-fraction convergent that matches `x` to within `2^-(PREC-8)`.
fn rationalize(x: &BigRational) -> Option<BigRational> {
    let thresh = BigRational::new(BigInt::one(), BigInt::one() << (PREC - 8));
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rem = x.clone();
    for _ in 0..400 {
        let a = rem.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let cand = BigRational::new(h2.clone(), k2.clone());
        if (&cand - x).abs() <= thresh {
            return Some(cand);
        }
        let frac = &rem - BigRational::from_integer(a);
        if frac.is_zero() {
            return Some(cand);
        }
        rem = frac.recip();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    None
}
