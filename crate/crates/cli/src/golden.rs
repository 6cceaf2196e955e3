//! Worked examples with stored expectations, checked on the exact backend.

use quatpoly::poly::{mult_left, mult_right};
use quatpoly::rootfind::RootKind;
use quatpoly::spherical::{commute_factor_left_to_right, left_divisor_to_right, right_divisor_to_left, spherical_shift_pow};
use quatpoly::{
    find_all_roots, lrcm_general, mult_spherical, parse_poly, parse_quaternion, spherical_divisors, ConjugacyClass, PolyQ,
    QuatQ, Tol,
};

type Check = fn() -> Result<(), String>;

fn p(src: &str) -> PolyQ {
    parse_poly(src).expect("stored polynomial parses")
}

fn q(src: &str) -> QuatQ {
    parse_quaternion(src).expect("stored quaternion parses")
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

const QUADRATIC: &str = "z^2 - z*(j+2k) + 2i";
const SEVENTH: &str = "z^7 - z^6*(1+i+j+k) + z^5*(2-i+2j) - z^4*(3+i+2j+2k) \
                       + z^3*(1-2i+4j) - z^2*(3-i+j+k) - z*(i-2j) - 1 + i";
const SHIFTED: &str = "z^3 - z^2*(1+i+j+k) - z*(i-2j) + i - 1";

fn tol() -> Tol {
    Tol::exact()
}

fn quadratic_value() -> Result<(), String> {
    expect("f(i)", p(QUADRATIC).eval_left(&q("i")), q("-1 + 2i + 2j - k"))
}

fn quadratic_companion() -> Result<(), String> {
    expect("f f#", p(QUADRATIC).companion_real(&tol()).map_err(|e| e.to_string())?, p("z^4 + 5z^2 + 4"))
}

fn quadratic_roots() -> Result<(), String> {
    let report = find_all_roots(&p(QUADRATIC), &tol()).map_err(|e| e.to_string())?;
    let got: Vec<_> = report.classes.iter().map(|c| (c.kind, c.left.clone(), c.right.clone())).collect();
    let want = vec![
        (RootKind::Isolated, Some(q("j")), Some(q("4/5k - 3/5j"))),
        (RootKind::Isolated, Some(q("8/5j + 6/5k")), Some(q("2k"))),
    ];
    expect("roots", got, want)
}

fn seventh_companion() -> Result<(), String> {
    let want = &p("z^2 + 1").pow(6) * &p("z^2 - 2z + 2");
    expect("f f#", p(SEVENTH).companion_real(&tol()).map_err(|e| e.to_string())?, want)
}

fn seventh_second_derivative() -> Result<(), String> {
    expect("f''(i)", p(SEVENTH).derivative(2).eval_left(&q("i")), q("-8 - 8i - 8j - 24k"))
}

fn seventh_shifts() -> Result<(), String> {
    let class = ConjugacyClass::of(&q("i"));
    let once = p("z^5 - z^4*(1+i+j+k) + z^3*(1-i+2j) - z^2*(2+j+k) + z*(2j-i) + i - 1");
    expect("first shift", spherical_shift_pow(&p(SEVENTH), &class, 1), once)?;
    expect("second shift", spherical_shift_pow(&p(SEVENTH), &class, 2), p(SHIFTED))
}

fn shifted_backward_step() -> Result<(), String> {
    expect("L_k g", p(SHIFTED).shift_left(&q("k")), p("z^2 - z*(1+i+j) + j - k"))
}

fn seventh_divisors() -> Result<(), String> {
    let d = spherical_divisors(&p(SEVENTH), &ConjugacyClass::of(&q("i")), &tol()).map_err(|e| e.to_string())?;
    expect("kappa", d.kappa, 2)?;
    expect("left chain", d.left_chain.clone(), vec![q("k"), q("j")])?;
    expect("left cofactor", d.left_cofactor.clone(), p("z - 1 - i"))?;
    expect("right chain", d.right_chain.clone(), vec![q("(2i + j - 2k)*1/3"), q("(-2i + 26j + 29k)*1/39")])?;
    expect("right cofactor", d.right_cofactor.clone(), p("z - 1 - (5i + 12k)*1/13"))
}

fn commuting_one_factor() -> Result<(), String> {
    let (_, b) = commute_factor_left_to_right(&q("j"), &p("z - 1 - i"), &tol()).map_err(|e| e.to_string())?;
    expect("moved point", b, q("(2i + j - 2k)*1/3"))
}

fn chain_round_trip() -> Result<(), String> {
    let chain = vec![q("k"), q("j")];
    let (right, cof) = left_divisor_to_right(&chain, &p("z - 1 - i"), &tol()).map_err(|e| e.to_string())?;
    expect("right chain", right.clone(), vec![q("(2i + j - 2k)*1/3"), q("(-2i + 26j + 29k)*1/39")])?;
    expect("right cofactor", cof.clone(), p("z - 1 - (5i + 12k)*1/13"))?;
    let (back, p0) = right_divisor_to_left(&right, &cof, &tol()).map_err(|e| e.to_string())?;
    expect("left chain", back, chain)?;
    expect("left cofactor", p0, p("z - 1 - i"))
}

fn multiplicities() -> Result<(), String> {
    let f = p("(z - i)(z - j)(z + j)");
    expect("left multiplicity at i", mult_left(&q("i"), &f, &tol()), 2)?;
    expect("right multiplicity at -j", mult_right(&q("-j"), &f, &tol()), 1)?;
    let s = mult_spherical(&ConjugacyClass::of(&q("i")), &f, &tol()).map_err(|e| e.to_string())?;
    expect("spherical multiplicity", s, 1)
}

fn class_membership() -> Result<(), String> {
    let c = ConjugacyClass::of(&q("4/5k - 3/5j"));
    expect("same class as i", c.same(&ConjugacyClass::of(&q("i")), &tol()), true)?;
    let d = ConjugacyClass::of(&q("1 + j"));
    expect("class of 1 + j", (d.trace.to_string(), d.norm2.to_string()), ("2".into(), "2".into()))
}

fn least_common_multiple() -> Result<(), String> {
    let f1 = p("(z - i)^2");
    let f2 = p("(z - 1 - j)^2");
    let report = lrcm_general(&[f1.clone(), f2], &tol()).map_err(|e| e.to_string())?;
    let b1 = q("1 - (12i + 3j - 4k)*1/13");
    let b2 = q("1 + (-1588i + 2645j + 980k)*1/3237");
    expect("lcm", report.result, &f1 * &PolyQ::from_roots(&[b1, b2]))
}

pub const EXAMPLES: &[(&str, Check)] = &[
    ("quadratic-left-value", quadratic_value),
    ("quadratic-companion", quadratic_companion),
    ("quadratic-roots", quadratic_roots),
    ("seventh-companion", seventh_companion),
    ("seventh-second-derivative", seventh_second_derivative),
    ("seventh-spherical-shifts", seventh_shifts),
    ("shifted-backward-step", shifted_backward_step),
    ("seventh-spherical-divisors", seventh_divisors),
    ("commute-one-factor", commuting_one_factor),
    ("chain-round-trip", chain_round_trip),
    ("multiplicities", multiplicities),
    ("class-membership", class_membership),
    ("least-common-multiple", least_common_multiple),
];

pub fn run_all() -> Vec<(&'static str, Result<(), String>)> {
    EXAMPLES.iter().map(|(name, check)| (*name, check())).collect()
}
