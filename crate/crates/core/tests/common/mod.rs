//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use quatpoly::rootfind::RootKind;
use quatpoly::{BigRational, ConjugacyClass, QPoly, Quaternion};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Quaternion<BigRational>;
pub type P = QPoly<BigRational>;
pub type QF = Quaternion<f64>;
pub type PF = QPoly<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational with numerator in `[-max, max]` and denominator in `[1, max]`.
pub fn rand_rat(g: &mut ChaCha8Rng, max: i64) -> BigRational {
    r(g.gen_range(-max..=max), g.gen_range(1..=max))
}

pub fn rand_quat(g: &mut ChaCha8Rng, max: i64) -> Q {
    Q::new(rand_rat(g, max), rand_rat(g, max), rand_rat(g, max), rand_rat(g, max))
}

pub fn rand_poly(g: &mut ChaCha8Rng, deg: usize, max: i64) -> P {
    let mut c: Vec<Q> = (0..deg).map(|_| rand_quat(g, max)).collect();
    let mut lead = rand_quat(g, max);
    while lead.is_exact_zero() {
        lead = rand_quat(g, max);
    }
    c.push(lead);
    P::new(c)
}

/// A point of the same class with the same component sizes: the imaginary
/// components permuted and with random signs.
pub fn shuffle_in_class(g: &mut ChaCha8Rng, a: &Q) -> Q {
    let [re, i, j, k] = a.components();
    let mut im = vec![i.clone(), j.clone(), k.clone()];
    im.shuffle(g);
    for c in im.iter_mut() {
        if g.gen_bool(0.5) {
            *c = -c.clone();
        }
    }
    Q::new(re.clone(), im[0].clone(), im[1].clone(), im[2].clone())
}

/// Roots of a random monic product of linear factors of degree `1..=max_deg`
/// whose components have numerators and denominators at most `max`. Classes
/// are shared on purpose, conjugate neighbours create spherical factors, and
/// real roots appear now and then.
pub fn rand_factored_roots(g: &mut ChaCha8Rng, max_deg: usize, max: i64) -> Vec<Q> {
    let deg = g.gen_range(1..=max_deg);
    let pool_size = g.gen_range(1..=3);
    let pool: Vec<Q> = (0..pool_size)
        .map(|_| {
            let mut a = rand_quat(g, max);
            while a.is_real() {
                a = rand_quat(g, max);
            }
            a
        })
        .collect();
    let mut roots: Vec<Q> = Vec::with_capacity(deg);
    while roots.len() < deg {
        let pick = g.gen_range(0..10);
        let next = match (pick, roots.last()) {
            (0, _) => Q::real(rand_rat(g, max)),
            (1 | 2, Some(prev)) if !prev.is_real() => prev.conj(),
            (3, _) => {
                let mut a = rand_quat(g, max);
                while a.is_real() {
                    a = rand_quat(g, max);
                }
                a
            }
            _ => {
                let base = pool.choose(g).expect("pool is not empty").clone();
                shuffle_in_class(g, &base)
            }
        };
        roots.push(next);
    }
    roots
}

pub fn rand_factored(g: &mut ChaCha8Rng, max_deg: usize, max: i64) -> (P, Vec<Q>) {
    let roots = rand_factored_roots(g, max_deg, max);
    (P::from_roots(&roots), roots)
}

/// Distinct classes among the given points.
pub fn distinct_classes(points: &[Q]) -> Vec<ConjugacyClass<BigRational>> {
    let mut out: Vec<ConjugacyClass<BigRational>> = Vec::new();
    for p in points {
        let c = ConjugacyClass::of(p);
        if !out.iter().any(|o| o.trace == c.trace && o.norm2 == c.norm2) {
            out.push(c);
        }
    }
    out
}

pub fn rand_quat_f64(g: &mut ChaCha8Rng, bound: f64) -> QF {
    QF::from_f64s(g.gen_range(-bound..=bound), g.gen_range(-bound..=bound), g.gen_range(-bound..=bound), g.gen_range(-bound..=bound))
}

pub fn rand_poly_f64(g: &mut ChaCha8Rng, deg: usize, bound: f64) -> PF {
    let mut c: Vec<QF> = (0..deg).map(|_| rand_quat_f64(g, bound)).collect();
    let mut lead = rand_quat_f64(g, bound);
    while lead.abs_f64() < 0.1 {
        lead = rand_quat_f64(g, bound);
    }
    c.push(lead);
    PF::new(c)
}

/// Random unit quaternion.
pub fn rand_unit_f64(g: &mut ChaCha8Rng) -> QF {
    loop {
        let q = rand_quat_f64(g, 1.0);
        let n = q.abs_f64();
        if n > 0.1 {
            return q.normalized();
        }
    }
}

/// `h^-1 a h` for a random unit `h`.
pub fn rotate_f64(g: &mut ChaCha8Rng, a: &QF) -> QF {
    let h = rand_unit_f64(g);
    &(&h.conj() * a) * &h
}

/// Solves `A x = b` exactly. Returns `None` when inconsistent, otherwise a
/// solution together with the nullity of `A`.
pub fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>, cols: usize) -> Option<(Vec<BigRational>, usize)> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for c in col..cols {
            a[row][c] = a[row][c].clone() * inv.clone();
        }
        b[row] = b[row].clone() * inv;
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for c in col..cols {
                    let v = a[row][c].clone() * factor.clone();
                    a[i][c] = a[i][c].clone() - v;
                }
                let v = b[row].clone() * factor;
                b[i] = b[i].clone() - v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some((x, cols - pivots.len()))
}

fn real_parts(q: &Q) -> [BigRational; 4] {
    let [a, b, c, d] = q.components();
    [a.clone(), b.clone(), c.clone(), d.clone()]
}

fn basis(s: usize) -> Q {
    match s {
        0 => Q::one(),
        1 => Q::unit_i(),
        2 => Q::unit_j(),
        _ => Q::unit_k(),
    }
}

/// Brute-force least right common multiple: for `d = max deg, ...` search
/// monic `M` of degree `d` with `M = p_j q_j` for every `j`, treating the
/// `4d` real coefficients of `M` as unknowns of the linear system "every
/// remainder of `M` under left division by `p_j` vanishes". Returns the first
/// degree with a solution, the solution, and the nullity of the system.
pub fn brute_force_lrcm(polys: &[P]) -> (usize, P, usize) {
    let degs: Vec<usize> = polys.iter().map(|p| p.degree().expect("nonzero input")).collect();
    let lo = *degs.iter().max().unwrap_or(&0);
    let hi: usize = degs.iter().sum();
    for d in lo..=hi.max(lo) {
        let cols = 4 * d;
        let mut rows_a: Vec<Vec<BigRational>> = Vec::new();
        let mut rows_b: Vec<BigRational> = Vec::new();
        for p in polys {
            let rem = |m: &P| -> Vec<BigRational> {
                let (_, r) = m.divide_right(p).expect("invertible leading coefficient");
                let dp = p.degree().unwrap_or(0);
                (0..dp.max(1)).flat_map(|t| real_parts(&r.coeff(t))).collect()
            };
            let top = {
                let mut c = vec![Q::zero(); d];
                c.push(Q::one());
                rem(&P::new(c))
            };
            let columns: Vec<Vec<BigRational>> = (0..cols)
                .map(|u| {
                    let mut c = vec![Q::zero(); d];
                    c[u / 4] = basis(u % 4);
                    rem(&P::new(c))
                })
                .collect();
            for (row_idx, t) in top.iter().enumerate() {
                rows_a.push(columns.iter().map(|col| col[row_idx].clone()).collect());
                rows_b.push(-t.clone());
            }
        }
        if cols == 0 {
            if rows_b.iter().all(|v| v.is_zero()) {
                return (0, P::one(), 0);
            }
            continue;
        }
        if let Some((x, nullity)) = solve_exact(rows_a, rows_b, cols) {
            let mut c: Vec<Q> = (0..d).map(|t| Q::new(x[4 * t].clone(), x[4 * t + 1].clone(), x[4 * t + 2].clone(), x[4 * t + 3].clone())).collect();
            c.push(Q::one());
            return (d, P::new(c), nullity);
        }
    }
    panic!("no common multiple up to the product degree");
}

#[derive(Clone, Debug)]
pub struct BuiltClass {
    pub trace: f64,
    pub norm2: f64,
    pub kind: RootKind,
}

fn separated(classes: &[BuiltClass], re: f64, im: f64) -> bool {
    classes.iter().all(|c| {
        let cre = c.trace / 2.0;
        let cim = (c.norm2 - cre * cre).max(0.0).sqrt();
        ((cre - re).powi(2) + (cim - im).powi(2)).sqrt() >= 0.05
    })
}

/// A random product of float linear factors and characteristic polynomials
/// with pairwise separated classes, and the classes it was built from.
pub fn float_case(g: &mut ChaCha8Rng) -> (PF, Vec<BuiltClass>) {
    let budget_total = g.gen_range(1..=10);
    let mut budget = budget_total;
    let mut classes: Vec<BuiltClass> = Vec::new();
    let mut factors: Vec<PF> = Vec::new();
    while budget > 0 {
        let roll = g.gen_range(0..20);
        let want = if roll < 3 {
            RootKind::Real
        } else if roll < 8 && budget >= 2 {
            RootKind::Spherical
        } else {
            RootKind::Isolated
        };
        let re = g.gen_range(-2.0..=2.0);
        let im = if want == RootKind::Real { 0.0 } else { g.gen_range(0.05..=2.0) };
        if !separated(&classes, re, im) {
            continue;
        }
        let dir = rand_unit_f64(g);
        let dir = QF::from_f64s(0.0, dir.i, dir.j, dir.k);
        let dir = if dir.abs_f64() < 1e-3 { QF::unit_i() } else { dir.normalized() };
        let base = &QF::real(re) + &dir.scale(&im);
        match want {
            RootKind::Real => {
                let n = g.gen_range(1..=budget.min(2));
                for _ in 0..n {
                    factors.push(PF::rho(&QF::real(re)));
                }
                budget -= n;
            }
            RootKind::Spherical => {
                factors.push(ConjugacyClass::of(&base).char_poly());
                budget -= 2;
                if budget > 0 && g.gen_bool(0.5) {
                    factors.push(PF::rho(&rotate_f64(g, &base)));
                    budget -= 1;
                }
            }
            RootKind::Isolated => {
                let n = g.gen_range(1..=budget.min(3));
                let mut placed: Vec<QF> = Vec::new();
                while placed.len() < n {
                    let p = rotate_f64(g, &base);
                    if placed.iter().all(|o| (&p - &o.conj()).abs_f64() >= 0.5 * im) {
                        placed.push(p);
                    }
                }
                for p in &placed {
                    factors.push(PF::rho(p));
                }
                budget -= n;
            }
        }
        classes.push(BuiltClass { trace: 2.0 * re, norm2: re * re + im * im, kind: want });
    }
    factors.shuffle(g);
    let f = factors.iter().fold(PF::one(), |acc, p| &acc * p);
    (f, classes)
}
