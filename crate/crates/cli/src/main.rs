//! `quatpoly`: command-line access to quaternion polynomial zeros, spherical
//! divisors, least common multiples, decompositions and Blaschke completion.

mod golden;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quatpoly::rootfind::RootKind;
use quatpoly::{
    complete_to_blaschke, decompose, factor_linear, find_all_roots, lcm_general, mult_left, mult_right, mult_spherical,
    parse_poly, parse_quaternion, spherical_divisors, zero_structure, BigRational, ConjugacyClass, Error, QPoly,
    Quaternion, Scalar, Side, SphericalDivisorPair, Tol,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use report::{chain_text, class, poly, quat, quats, scalar, Report};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    #[value(name = "float64")]
    Float64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "quatpoly", version, about = "Zeros, divisors and least common multiples of quaternion polynomials")]
struct Cli {
    /// Scalar backend.
    #[arg(long, global = true, value_enum, default_value = "exact")]
    backend: Backend,
    /// Zero tolerance of the float backend (ignored by the exact one).
    #[arg(long, global = true, env = "QUATPOLY_EPS", default_value_t = 1e-10)]
    eps: f64,
    /// Truncation order of power series.
    #[arg(long, global = true, default_value_t = 30)]
    order: usize,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Evaluation or divisor side.
    #[arg(long, global = true, value_enum, default_value = "left")]
    side: SideArg,
    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Left or right value of a polynomial at a quaternion.
    Eval { poly: String, point: String },
    /// Every zero: real zeros, spherical classes, isolated left/right pairs.
    Roots { poly: String },
    /// Factorization into linear factors times a constant.
    Factor { poly: String },
    /// Spherical divisors at the class of a point, or at every class with zeros.
    Divisors {
        poly: String,
        #[arg(long)]
        class: Option<String>,
    },
    /// Left, right and spherical zero multiplicities at a point.
    Mult { poly: String, point: String },
    /// Least common multiple; `--side=left` gives the right multiple of the inputs.
    Lcm {
        #[arg(required = true)]
        polys: Vec<String>,
    },
    /// Decomposition into indecomposable factors.
    Decompose { poly: String },
    /// Completion of `(z - a1)...(z - am)` to a Blaschke product.
    Blaschke {
        roots: Vec<String>,
        /// Sample this many roots (|a| < 3/4) from `--seed` instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Check the stored worked examples.
    Golden,
}

struct Config {
    tol: Tol,
    order: usize,
    json: bool,
    side: Side,
    seed: u64,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => Failure::Usage(format!("parse error: {msg}")),
            other => Failure::Domain(other),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config {
        tol: match cli.backend {
            Backend::Exact => Tol::exact(),
            Backend::Float64 => Tol::new(cli.eps),
        },
        order: cli.order,
        json: cli.json,
        side: cli.side.into(),
        seed: cli.seed,
    };
    let outcome = match cli.backend {
        Backend::Exact => run::<BigRational>(&cli.command, &cfg),
        Backend::Float64 => run::<f64>(&cli.command, &cfg),
    };
    match outcome {
        Ok(report) => {
            // A closed pipe downstream is not our failure.
            let _ = writeln!(std::io::stdout(), "{}", report.render(cfg.json));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": error_kind(&e), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}

/// The variant name, e.g. `NotCoprime`.
fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn run<S: Scalar>(cmd: &Command, cfg: &Config) -> Outcome {
    match cmd {
        Command::Eval { poly, point } => eval::<S>(poly, point, cfg),
        Command::Roots { poly } => roots::<S>(poly, cfg),
        Command::Factor { poly } => factor::<S>(poly, cfg),
        Command::Divisors { poly, class } => divisors::<S>(poly, class.as_deref(), cfg),
        Command::Mult { poly, point } => mult::<S>(poly, point, cfg),
        Command::Lcm { polys } => lcm::<S>(polys, cfg),
        Command::Decompose { poly } => decomposition::<S>(poly, cfg),
        Command::Blaschke { roots, random } => blaschke::<S>(roots, *random, cfg),
        Command::Golden => golden_report(),
    }
}

fn side_name(side: Side) -> &'static str {
    side.name()
}

fn eval<S: Scalar>(src: &str, point: &str, cfg: &Config) -> Outcome {
    let f: QPoly<S> = parse_poly(src)?;
    let a: Quaternion<S> = parse_quaternion(point)?;
    let value = match cfg.side {
        Side::Left => f.eval_left(&a),
        Side::Right => f.eval_right(&a),
    };
    let mut r = Report::new();
    r.field("side", json!(side_name(cfg.side))).field("value", quat(&value)).line(value.to_string());
    Ok(r)
}

fn kind_name(k: RootKind) -> &'static str {
    k.name()
}

fn roots<S: Scalar>(src: &str, cfg: &Config) -> Outcome {
    let f: QPoly<S> = parse_poly(src)?;
    let report = find_all_roots(&f, &cfg.tol)?;
    let mut r = Report::new();
    let mut entries = Vec::new();
    for c in &report.classes {
        let mut e = json!({
            "class": class(&c.class),
            "kind": kind_name(c.kind),
            "multiplicity": c.multiplicity,
        });
        if let (Some(l), Some(rt)) = (&c.left, &c.right) {
            e["left"] = quat(l);
            e["right"] = quat(rt);
        }
        entries.push(e);
        let text = match (c.kind, &c.left, &c.right) {
            (RootKind::Spherical, _, _) => "whole class".to_string(),
            (RootKind::Real, Some(l), _) => format!("{l}"),
            (_, Some(l), Some(rt)) => format!("left {l}, right {rt}"),
            _ => String::new(),
        };
        r.line(format!("[{}] {} x{}: {}", c.class, kind_name(c.kind), c.multiplicity, text));
    }
    if report.warning {
        r.line("warning: some root clusters were too close to separate");
    }
    r.field("classes", json!(entries)).field("warning", json!(report.warning));
    Ok(r)
}

fn factor<S: Scalar>(src: &str, cfg: &Config) -> Outcome {
    let f: QPoly<S> = parse_poly(src)?;
    let (zeros, c) = factor_linear(&f, &cfg.tol)?;
    let mut r = Report::new();
    r.field("roots", quats(&zeros)).field("constant", quat(&c));
    r.line(format!("{} * ({c})", chain_text(&zeros)));
    Ok(r)
}

fn pair_json<S: Scalar>(d: &SphericalDivisorPair<S>) -> serde_json::Value {
    json!({
        "class": class(&d.class),
        "kappa": d.kappa,
        "left_chain": quats(&d.left_chain),
        "left_cofactor": poly(&d.left_cofactor),
        "right_chain": quats(&d.right_chain),
        "right_cofactor": poly(&d.right_cofactor),
    })
}

fn pair_text<S: Scalar>(r: &mut Report, d: &SphericalDivisorPair<S>) {
    let x = match d.kappa {
        0 => String::new(),
        1 => format!("({})", d.class.char_poly()),
        k => format!("({})^{k}", d.class.char_poly()),
    };
    let rev: Vec<_> = d.right_chain.iter().rev().cloned().collect();
    r.line(format!("[{}]", d.class));
    r.line(format!("  left:  {x} {} * ({})", chain_text(&d.left_chain), d.left_cofactor));
    r.line(format!("  right: ({}) * {} {x}", d.right_cofactor, chain_text(&rev)));
}

fn divisors<S: Scalar>(src: &str, at: Option<&str>, cfg: &Config) -> Outcome {
    let f: QPoly<S> = parse_poly(src)?;
    let pairs = match at {
        Some(p) => {
            let a: Quaternion<S> = parse_quaternion(p)?;
            vec![spherical_divisors(&f, &ConjugacyClass::of(&a), &cfg.tol)?]
        }
        None => zero_structure(&f, &cfg.tol)?,
    };
    let mut r = Report::new();
    for d in &pairs {
        pair_text(&mut r, d);
    }
    r.field("divisors", json!(pairs.iter().map(pair_json).collect::<Vec<_>>()));
    Ok(r)
}

fn mult<S: Scalar>(src: &str, point: &str, cfg: &Config) -> Outcome {
    let f: QPoly<S> = parse_poly(src)?;
    let a: Quaternion<S> = parse_quaternion(point)?;
    let left = mult_left(&a, &f, &cfg.tol);
    let right = mult_right(&a, &f, &cfg.tol);
    let sph = mult_spherical(&ConjugacyClass::of(&a), &f, &cfg.tol)?;
    let mut r = Report::new();
    r.field("left", json!(left)).field("right", json!(right)).field("spherical", json!(sph));
    r.line(format!("left {left}, right {right}, spherical {sph}"));
    Ok(r)
}

fn lcm<S: Scalar>(srcs: &[String], cfg: &Config) -> Outcome {
    let polys = srcs.iter().map(|s| parse_poly::<S>(s)).collect::<quatpoly::Result<Vec<_>>>()?;
    // A common left divisor structure means a right multiple, and vice versa.
    let lcm_side = match cfg.side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    };
    let report = lcm_general(&polys, lcm_side, &cfg.tol)?;
    let mut r = Report::new();
    r.field("multiple", json!(side_name(report.side)))
        .field("lcm", poly(&report.result))
        .field("quotients", json!(report.quotients.iter().map(poly).collect::<Vec<_>>()));
    r.line(report.result.to_string());
    Ok(r)
}

fn decomposition<S: Scalar>(src: &str, cfg: &Config) -> Outcome {
    let f: QPoly<S> = parse_poly(src)?;
    let d = decompose(&f, cfg.side, &cfg.tol)?;
    let mut r = Report::new();
    let parts: Vec<_> = d
        .parts
        .iter()
        .map(|p| {
            json!({
                "role": p.role.name(),
                "class": class(&p.factor.class),
                "chain": quats(&p.factor.chain),
                "poly": poly(&p.factor.poly),
            })
        })
        .collect();
    for p in &d.parts {
        r.line(format!("{}: {}", p.role.name(), chain_text(&p.factor.chain)));
    }
    r.field("side", json!(side_name(d.side))).field("parts", json!(parts));
    Ok(r)
}

fn sample_roots<S: Scalar>(m: usize, seed: u64) -> Vec<Quaternion<S>> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let mut c = || S::from_ratio(g.gen_range(-3..=3), 8);
            Quaternion::new(c(), c(), c(), c())
        })
        .collect()
}

fn blaschke<S: Scalar>(srcs: &[String], random: Option<usize>, cfg: &Config) -> Outcome {
    let alphas: Vec<Quaternion<S>> = match random {
        Some(m) => sample_roots(m, cfg.seed),
        None if srcs.is_empty() => return Err(Failure::Usage("give the roots or --random <m>".into())),
        None => srcs.iter().map(|s| parse_quaternion(s)).collect::<quatpoly::Result<_>>()?,
    };
    let c = complete_to_blaschke(&alphas, &cfg.tol)?;
    let residual = c.residual(cfg.order).max_abs();
    let mut r = Report::new();
    r.field("alphas", quats(&c.alphas))
        .field("betas", quats(&c.betas))
        .field("gammas", quats(&c.gammas))
        .field("phase", quat(&c.phase))
        .field("order", json!(cfg.order))
        .field("residual", scalar(&S::from_f64(residual)))
        .field("phase_drift", json!(c.phase_drift));
    r.line(format!("alphas: {}", join(&c.alphas)));
    r.line(format!("betas:  {}", join(&c.betas)));
    r.line(format!("gammas: {}", join(&c.gammas)));
    r.line(format!("phase:  {}", c.phase));
    r.line(format!("series residual to order {}: {residual:e}", cfg.order));
    Ok(r)
}

fn join<S: Scalar>(qs: &[Quaternion<S>]) -> String {
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("; ")
}

fn golden_report() -> Outcome {
    let results = golden::run_all();
    let mut r = Report::new();
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for (name, res) in &results {
        match res {
            Ok(()) => r.line(format!("pass  {name}")),
            Err(msg) => {
                failed.push(*name);
                r.line(format!("FAIL  {name}: {msg}"))
            }
        };
        entries.push(json!({ "name": name, "pass": res.is_ok(), "detail": res.as_ref().err() }));
    }
    if !failed.is_empty() {
        return Err(Failure::Domain(Error::PreconditionViolated(format!("golden examples failed: {}", failed.join(", ")))));
    }
    r.field("examples", json!(entries)).field("passed", json!(results.len()));
    Ok(r)
}
