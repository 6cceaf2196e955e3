//! Acceptance suite: one pass/fail line per criterion, with timings.
//! Runs as a plain binary so the report is always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use quatpoly::rootfind::RootKind;
use quatpoly::series::{blaschke_factor, complete_to_blaschke, norm_preservation_check, TruncatedSeries};
use quatpoly::spherical::{left_divisor_to_right, right_divisor_to_left, spherical_shift, spherical_shift_pow};
use quatpoly::{
    decompose, find_all_roots, is_indecomposable, lrcm_general, mult_spherical, spherical_divisors,
    synthesize_from_divisors, zero_structure, ConjugacyClass, PrescribedDivisor, Side, Tol,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(parts: [(i64, i64); 4]) -> Q {
    quatpoly::quat::qrat(parts)
}

fn qi(a: i64, b: i64, c: i64, d: i64) -> Q {
    Q::from_ints(a, b, c, d)
}

fn poly(c: &[(i64, i64, i64, i64)]) -> P {
    P::new(c.iter().map(|&(a, b, x, d)| qi(a, b, x, d)).collect())
}

/// The degree-7 polynomial with a double spherical zero at `[i]`.
fn seventh() -> P {
    poly(&[
        (-1, 1, 0, 0),
        (0, -1, 2, 0),
        (-3, 1, -1, -1),
        (1, -2, 4, 0),
        (-3, -1, -2, -2),
        (2, -1, 2, 0),
        (-1, -1, -1, -1),
        (1, 0, 0, 0),
    ])
}

fn exact() -> Tol {
    Tol::exact()
}

fn root_example() -> Outcome {
    let f: P = quatpoly::parse_poly("z^2 - z*(j+2k) + 2i").map_err(|e| e.to_string())?;
    let start = Instant::now();
    let report = find_all_roots(&f, &exact()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = [
        (r(0, 1), r(1, 1), qi(0, 0, 1, 0), q([(0, 1), (0, 1), (-3, 5), (4, 5)])),
        (r(0, 1), r(4, 1), q([(0, 1), (0, 1), (8, 5), (6, 5)]), qi(0, 0, 0, 2)),
    ];
    ensure(report.classes.len() == 2, || format!("{} classes", report.classes.len()))?;
    for (c, (t, n, left, right)) in report.classes.iter().zip(expected) {
        ensure(c.class.trace == t && c.class.norm2 == n, || format!("class {}", c.class))?;
        ensure(c.kind == RootKind::Isolated, || "kind".into())?;
        ensure(c.left.as_ref() == Some(&left), || format!("left root {:?}", c.left))?;
        ensure(c.right.as_ref() == Some(&right), || format!("right root {:?}", c.right))?;
    }
    ensure(elapsed < Duration::from_millis(10), || format!("took {elapsed:?}"))?;
    Ok(format!("roots found in {elapsed:?}"))
}

fn spherical_example() -> Outcome {
    let f = seventh();
    let class = ConjugacyClass::of(&Q::unit_i());
    let start = Instant::now();
    let d = spherical_divisors(&f, &class, &exact()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(d.kappa == 2, || format!("kappa {}", d.kappa))?;
    ensure(d.left_chain == vec![Q::unit_k(), Q::unit_j()], || "left chain".into())?;
    ensure(d.left_cofactor == poly(&[(-1, -1, 0, 0), (1, 0, 0, 0)]), || "left cofactor".into())?;
    let right = vec![q([(0, 1), (2, 3), (1, 3), (-2, 3)]), q([(0, 1), (-2, 39), (26, 39), (29, 39)])];
    ensure(d.right_chain == right, || format!("right chain {:?}", d.right_chain))?;
    let rc = P::new(vec![q([(-1, 1), (-5, 13), (0, 1), (-12, 13)]), Q::one()]);
    ensure(d.right_cofactor == rc, || "right cofactor".into())?;
    ensure(d.left_product() == f && d.right_product() == f, || "products".into())?;
    ensure(elapsed < Duration::from_millis(50), || format!("took {elapsed:?}"))?;
    Ok(format!("divisors in {elapsed:?}"))
}

fn lcm_example() -> Outcome {
    let f1 = P::rho(&Q::unit_i()).pow(2);
    let f2 = P::rho(&qi(1, 0, 1, 0)).pow(2);
    let report = lrcm_general(&[f1.clone(), f2.clone()], &exact()).map_err(|e| e.to_string())?;
    let b1 = q([(1, 1), (-12, 13), (-3, 13), (4, 13)]);
    let b2 = q([(1, 1), (-1588, 3237), (2645, 3237), (980, 3237)]);
    let expected = &f1 * &P::from_roots(&[b1, b2]);
    ensure(report.result == expected, || format!("got {}", report.result))?;
    for g in [&f1, &f2] {
        let (_, rem) = report.result.divide_right(g).map_err(|e| e.to_string())?;
        ensure(rem.is_zero(), || format!("{g} leaves remainder {rem}"))?;
    }
    Ok("result and divisibility exact".into())
}

fn reconstruction() -> Outcome {
    let tol = exact();
    let mut g = rng(4);
    let mut chains = 0;
    for case in 0..500 {
        let (f, _) = rand_factored(&mut g, 8, 20);
        let zs = zero_structure(&f, &tol).map_err(|e| format!("case {case}: {e}"))?;
        for pair in &zs {
            ensure(pair.left_product() == f && pair.right_product() == f, || format!("case {case}: class {}", pair.class))?;
            if pair.class.is_real || pair.left_chain.is_empty() {
                continue;
            }
            chains += 1;
            let (rchain, pt) =
                left_divisor_to_right(&pair.left_chain, &pair.left_cofactor, &tol).map_err(|e| format!("case {case}: {e}"))?;
            ensure(rchain == pair.right_chain && pt == pair.right_cofactor, || format!("case {case}: left to right"))?;
            let (back, p) = right_divisor_to_left(&rchain, &pt, &tol).map_err(|e| format!("case {case}: {e}"))?;
            ensure(back == pair.left_chain && p == pair.left_cofactor, || format!("case {case}: right to left"))?;
        }
        let divisors: Vec<PrescribedDivisor<_>> = zs.iter().map(PrescribedDivisor::left_of).collect();
        let rebuilt = synthesize_from_divisors(&divisors, &tol).map_err(|e| format!("case {case}: {e}"))?;
        ensure(rebuilt == f, || format!("case {case}: synthesis gave {rebuilt}, expected {f}"))?;
    }
    Ok(format!("500 polynomials, {chains} chain round trips"))
}

fn evaluation_identities() -> Outcome {
    let mut g = rng(5);
    let mut worst = 0.0f64;
    let mut check = |name: &str, err: f64, scale: f64, case: usize| -> Result<(), String> {
        worst = worst.max(err / scale);
        ensure(err <= 1e-9 * scale, || format!("case {case}: {name} error {err:e} at scale {scale:e}"))
    };
    for case in 0..1000 {
        let deg = g.gen_range(0..=8);
        let f = rand_poly_f64(&mut g, deg, 2.0);
        let a = rand_quat_f64(&mut g, 2.0);
        let pw = a.abs_f64().max(1.0).powi(deg as i32 + 1);
        let scale = f.l1_norm() * pw;
        let fa = f.eval_left(&a);
        let split = &PF::constant(fa.clone()) + &(&PF::rho(&a) * &f.shift_left(&a));
        check("left split", (&split - &f).l1_norm(), scale, case)?;
        let fr = f.eval_right(&a);
        let split = &PF::constant(fr) + &(&f.shift_right(&a) * &PF::rho(&a));
        check("right split", (&split - &f).l1_norm(), scale, case)?;

        let hd = g.gen_range(0..=4);
        let h = rand_poly_f64(&mut g, hd, 2.0);
        let prod = &h * &f;
        let dh = h.degree().unwrap_or(0) as i32;
        let pscale = h.l1_norm() * f.l1_norm() * a.abs_f64().max(1.0).powi(deg as i32 + dh + 1) * 4.0;
        let direct = prod.eval_left(&a);
        let formula = quatpoly::poly::eval_product_formula(&h, &f, &a);
        check("left product rule", (&direct - &formula).abs_f64(), pscale, case)?;
        let direct = prod.eval_right(&a);
        let formula = quatpoly::poly::eval_product_formula_right(&h, &f, &a);
        check("right product rule", (&direct - &formula).abs_f64(), pscale, case)?;

        // Three distinct points of one class.
        let mut al = rand_quat_f64(&mut g, 2.0);
        while (&al - &QF::real(al.trace() / 2.0)).abs_f64() < 0.2 {
            al = rand_quat_f64(&mut g, 2.0);
        }
        let be = rotate_f64(&mut g, &al);
        let ga = rotate_f64(&mut g, &al);
        let tol = Tol::default();
        let inv = |x: &QF| x.inverse(&tol).expect("distinct points");
        let (fa, fb) = (f.eval_left(&al), f.eval_left(&be));
        let d = inv(&(&al - &be));
        let cond = 1.0 + (al.abs_f64() + ga.abs_f64()) * d.abs_f64();
        let iscale = scale.max(1.0) * cond * (1.0 + ga.abs_f64());
        let lhs = f.eval_left(&ga);
        let rhs = &(&(&(&ga - &be) * &d) * &fa) + &(&(&(&al - &ga) * &d) * &fb);
        check("same-type interpolation", (&lhs - &rhs).abs_f64(), iscale, case)?;
        let lhs = f.eval_right(&ga);
        let rhs = &(&(&(&(&d * &fa) * &ga) - &(&(&be * &d) * &fa)) + &(&(&al * &d) * &fb)) - &(&(&d * &fb) * &ga);
        check("mixed-type interpolation", (&lhs - &rhs).abs_f64(), iscale, case)?;
        let ab = al.conj();
        let fab = f.eval_left(&ab);
        let gg = inv(&(&ga - &ga.conj()));
        let cscale = scale.max(1.0) * (1.0 + gg.abs_f64() * 4.0 * ga.abs_f64()) * (1.0 + ga.abs_f64());
        let lhs = f.eval_left(&ga);
        let rhs = &gg * &(&(&(&ga - &ab) * &fa) + &(&(&ga - &al) * &fab));
        check("conjugate-pair interpolation (left)", (&lhs - &rhs).abs_f64(), cscale, case)?;
        let da = inv(&(&al - &ab));
        let lhs = f.eval_right(&ga);
        let inner = &(&(&(&fa * &ga) - &(&ab * &fa)) + &(&al * &fab)) - &(&fab * &ga);
        let rhs = &da * &inner;
        let cscale = scale.max(1.0) * (1.0 + da.abs_f64() * 4.0 * ga.abs_f64()) * (1.0 + ga.abs_f64());
        check("conjugate-pair interpolation (right)", (&lhs - &rhs).abs_f64(), cscale, case)?;
    }
    Ok(format!("1000 cases, worst relative error {worst:.2e}"))
}

/// Fixed pool of sample points: several share a class, one pair is conjugate, two are real.
fn sample_set() -> Vec<Q> {
    vec![
        Q::unit_i(),
        Q::unit_j(),
        Q::unit_k(),
        -Q::unit_i(),
        q([(0, 1), (3, 5), (4, 5), (0, 1)]),
        qi(1, 1, 0, 0),
        qi(1, 0, 1, 0),
        qi(1, 0, 0, -1),
        q([(1, 1), (0, 1), (3, 5), (-4, 5)]),
        q([(1, 2), (1, 2), (0, 1), (1, 1)]),
        qi(0, 1, 2, 0),
        qi(2, 0, 0, 0),
        qi(-1, 0, 0, 0),
    ]
}

fn minimality() -> Outcome {
    let tol = exact();
    let pool = sample_set();
    let mut g = rng(6);
    let mut nonunique = 0;
    for case in 0..100 {
        let count = g.gen_range(2..=3);
        let total = g.gen_range(count..=6);
        let mut degs = vec![1usize; count];
        for _ in count..total {
            let idx = g.gen_range(0..count);
            degs[idx] += 1;
        }
        let polys: Vec<P> = degs
            .iter()
            .map(|&d| {
                let roots: Vec<Q> = (0..d).map(|_| pool.choose(&mut g).expect("pool").clone()).collect();
                P::from_roots(&roots)
            })
            .collect();
        let report = lrcm_general(&polys, &tol).map_err(|e| format!("case {case}: {e}"))?;
        for p in &polys {
            let (_, rem) = report.result.divide_right(p).map_err(|e| e.to_string())?;
            ensure(rem.is_zero(), || format!("case {case}: not a common multiple"))?;
        }
        let (d, m, nullity) = brute_force_lrcm(&polys);
        ensure(report.result.degree() == Some(d), || {
            format!("case {case}: degree {:?}, brute force {d}", report.result.degree())
        })?;
        if nullity == 0 {
            ensure(report.result == m, || format!("case {case}: differs from the unique minimal multiple"))?;
        } else {
            nonunique += 1;
        }
    }
    ensure(nonunique == 0, || format!("{nonunique} minimal multiples were not unique"))?;
    Ok("100 families match the brute-force minimum".into())
}

fn shift_certification() -> Outcome {
    let mut g = rng(7);
    for case in 0..200 {
        let deg = g.gen_range(0..=8);
        let f = rand_poly(&mut g, deg, 20);
        let a = rand_quat(&mut g, 20);
        let v = ConjugacyClass::of(&a);
        let s = spherical_shift(&f, &v);
        ensure(s == f.shift_left(&a.conj()).shift_left(&a), || format!("case {case}: left shifts"))?;
        ensure(s == f.shift_right(&a.conj()).shift_right(&a), || format!("case {case}: right shifts"))?;
        let rem = &f - &(&v.char_poly() * &s);
        ensure(rem.degree().map_or(true, |d| d < 2), || format!("case {case}: not the quotient by X"))?;
    }
    let v = ConjugacyClass::of(&Q::unit_i());
    let s1 = poly(&[(-1, 1, 0, 0), (0, -1, 2, 0), (-2, 0, -1, -1), (1, -1, 2, 0), (-1, -1, -1, -1), (1, 0, 0, 0)]);
    let s2 = poly(&[(-1, 1, 0, 0), (0, -1, 2, 0), (-1, -1, -1, -1), (1, 0, 0, 0)]);
    ensure(spherical_shift(&seventh(), &v) == s1, || "first shift of the degree-7 example".into())?;
    ensure(spherical_shift_pow(&seventh(), &v, 2) == s2, || "second shift of the degree-7 example".into())?;
    Ok("200 random cases and both worked values".into())
}

fn decomposition() -> Outcome {
    let tol = exact();
    let mut g = rng(8);
    let mut parts_total = 0;
    for case in 0..200 {
        let (f, roots) = rand_factored(&mut g, 6, 20);
        let d = decompose(&f, Side::Left, &tol).map_err(|e| format!("case {case}: {e}"))?;
        for p in &d.parts {
            let ind = is_indecomposable(&p.factor.poly, &tol).map_err(|e| format!("case {case}: {e}"))?;
            ensure(ind.is_some(), || format!("case {case}: part {} is decomposable", p.factor.poly))?;
        }
        for (x, a) in d.parts.iter().enumerate() {
            for b in &d.parts[x + 1..] {
                if a.factor.class.trace == b.factor.class.trace && a.factor.class.norm2 == b.factor.class.norm2 {
                    ensure(a.factor.left_zero() != b.factor.left_zero(), || format!("case {case}: parts share a left zero"))?;
                }
            }
        }
        let l = lrcm_general(&d.polys(), &tol).map_err(|e| format!("case {case}: {e}"))?;
        ensure(l.result == f, || format!("case {case}: recombination gave {}", l.result))?;
        let classes = distinct_classes(&roots);
        let mut expected = 0;
        for c in &classes {
            expected += 1;
            if !c.is_real && mult_spherical(c, &f, &tol).map_err(|e| e.to_string())? > 0 {
                expected += 1;
            }
        }
        ensure(d.parts.len() == expected, || format!("case {case}: {} parts, expected {expected}", d.parts.len()))?;
        parts_total += d.parts.len();
    }
    Ok(format!("200 polynomials, {parts_total} parts"))
}

fn rand_ball_root(g: &mut rand_chacha::ChaCha8Rng) -> Q {
    loop {
        let a = Q::new(rand_rat(g, 8), rand_rat(g, 8), rand_rat(g, 8), rand_rat(g, 8));
        if a.norm2() <= r(9, 16) {
            return a;
        }
    }
}

fn blaschke() -> Outcome {
    let tol = exact();
    let ftol = Tol::default();
    let mut g = rng(9);
    let mut worst = 0.0f64;
    let mut steps = 0;
    for case in 0..100 {
        let m = g.gen_range(1..=4);
        let mut roots: Vec<Q> = Vec::with_capacity(m);
        while roots.len() < m {
            let next = match (g.gen_range(0..8), roots.last()) {
                (0, Some(p)) => p.conj(),
                (1, _) => Q::real(r(g.gen_range(-3..=3), 4)),
                _ => rand_ball_root(&mut g),
            };
            roots.push(next);
        }
        let c = complete_to_blaschke(&roots, &tol).map_err(|e| format!("case {case}: {e}"))?;
        for s in &c.steps {
            let (lhs, rhs) = s.identity_sides();
            ensure(lhs == rhs, || format!("case {case}: step {}.{} identity fails", s.outer, s.inner))?;
            ensure(s.phi.norm2() == r(1, 1) && s.phi_next.norm2() == r(1, 1), || format!("case {case}: |phi| != 1"))?;
            steps += 1;
        }
        ensure(c.phase.norm2() == r(1, 1), || format!("case {case}: |phase| != 1"))?;
        let froots: Vec<QF> = roots.iter().map(|a| a.to_f64()).collect();
        let cf = complete_to_blaschke(&froots, &ftol).map_err(|e| format!("case {case} (float): {e}"))?;
        let res = cf.residual(30).max_abs();
        worst = worst.max(res);
        ensure(res <= 1e-10, || format!("case {case}: series residual {res:e}"))?;
        ensure(cf.phase_drift <= 1e-12, || format!("case {case}: phase drift {:e}", cf.phase_drift))?;
        ensure((cf.phase.abs_f64() - 1.0).abs() <= 1e-12, || format!("case {case}: float phase modulus"))?;
    }
    for case in 0..100 {
        let a = rand_ball_root(&mut g);
        let d = rand_quat(&mut g, 6);
        let cq = rand_quat(&mut g, 6);
        let k = g.gen_range(1..=6);
        let (lhs, rhs) = norm_preservation_check(&a, &d, &cq, k);
        ensure(lhs == rhs, || format!("norm case {case}: {lhs} != {rhs}"))?;
        // Independent check: sum the squared coefficients of the product directly.
        let mut h = vec![d.to_f64()];
        h.resize(k, QF::zero());
        h.push(cq.to_f64());
        let prod = &blaschke_factor(&a.to_f64(), 400) * &TruncatedSeries::new(h, 400);
        let direct: f64 = prod.coeffs().iter().map(|x| x.norm2()).sum();
        let want = quatpoly::scalar::ratio_to_f64(&rhs);
        ensure((direct - want).abs() <= 1e-9 * want.max(1.0), || format!("norm case {case}: direct sum {direct}"))?;
    }
    Ok(format!("{steps} exact steps, worst series residual {worst:.2e}, 100 norm checks"))
}

fn float_robustness() -> Outcome {
    let tol = Tol::default();
    let mut g = rng(10);
    let mut worst = 0.0f64;
    let start = Instant::now();
    for case in 0..300 {
        let (f, built) = float_case(&mut g);
        let deg = f.degree().unwrap_or(0) as i32;
        let report = find_all_roots(&f, &tol).map_err(|e| format!("case {case}: {e}"))?;
        ensure(report.classes.len() == built.len(), || {
            format!("case {case}: {} classes reported, {} built", report.classes.len(), built.len())
        })?;
        for b in &built {
            let found = report.classes.iter().find(|c| {
                (c.class.trace - b.trace).abs() <= 1e-6 * (1.0 + b.trace.abs())
                    && (c.class.norm2 - b.norm2).abs() <= 1e-6 * (1.0 + b.norm2)
            });
            let found = found.ok_or_else(|| format!("case {case}: class ({}, {}) missing", b.trace, b.norm2))?;
            ensure(found.kind == b.kind, || format!("case {case}: class ({}, {}) reported {:?}, built {:?}", b.trace, b.norm2, found.kind, b.kind))?;
        }
        let l1 = f.l1_norm();
        for c in &report.classes {
            if let Some(gl) = &c.left {
                let bound = 1e-8 * l1 * gl.abs_f64().max(1.0).powi(deg);
                let res = f.eval_left(gl).abs_f64();
                worst = worst.max(res / bound * 1e-8);
                ensure(res <= bound, || format!("case {case}: left residual {res:e} over {bound:e}"))?;
            }
            if let Some(gr) = &c.right {
                let bound = 1e-8 * l1 * gr.abs_f64().max(1.0).powi(deg);
                let res = f.eval_right(gr).abs_f64();
                worst = worst.max(res / bound * 1e-8);
                ensure(res <= bound, || format!("case {case}: right residual {res:e} over {bound:e}"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("300 polynomials, worst scaled residual {worst:.2e}"))
}

fn main() {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("root example", None, root_example),
        ("spherical divisor example", None, spherical_example),
        ("lcm example", None, lcm_example),
        ("reconstruction suite", Some(Duration::from_secs(60)), reconstruction),
        ("evaluation identities", None, evaluation_identities),
        ("minimality oracle", Some(Duration::from_secs(120)), minimality),
        ("spherical shift certification", None, shift_certification),
        ("decomposition", None, decomposition),
        ("Blaschke completion", None, blaschke),
        ("float root-finder robustness", Some(Duration::from_secs(30)), float_robustness),
    ];
    let mut failed = 0;
    for (n, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("over the {b:?} budget")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {:.3}s)", n + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({:.3}s)", n + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
