use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use hyperdyn::algprod::{
    associativity_residual, independence_witness, monomial_eval, monomial_iterated, phi_power_law_residual, times_associativity_check,
    Algebra, AlgebraDescriptor, ColumnSource, Polynomial, RationalGrid, WitnessOutcome,
};
use hyperdyn::seqspace::{norm, ComplexSeq};
use hyperdyn::C64;

use crate::parse;
use crate::report::{config_of, CliError, Output, EXIT_ASSERTION, EXIT_PREMISE};

const ASSOC_TOL: f64 = 1e-10;

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// phi, commutative-phi or times; ignored when --descriptor is given.
    #[arg(long, default_value = "times")]
    pub product: String,
    /// Algebra descriptor as JSON, or `@file`.
    #[arg(long)]
    pub descriptor: Option<String>,
    /// associativity, submult, power-law, monomials or witness.
    #[arg(long, default_value = "associativity")]
    pub task: String,
    #[arg(long, default_value = "lp:2")]
    pub space: String,
    /// Truncation rank R of the × product.
    #[arg(long, default_value_t = 64)]
    pub rank: u64,
    /// Denominator of the rational grid behind the columns of Λ.
    #[arg(long, default_value_t = 4)]
    pub denom: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random factors live in the span of the first `dim` basis vectors.
    #[arg(long, default_value_t = 20)]
    pub dim: u64,
    /// Polynomial as JSON `[[[β₁,…], re, im], …]`, or `@file`.
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Columns scanned by the witness search.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
}

fn descriptor(args: &Args) -> Result<AlgebraDescriptor, CliError> {
    if let Some(d) = &args.descriptor {
        return parse::json_arg(d);
    }
    let space = parse::space(&args.space)?;
    match args.product.as_str() {
        "phi" => Ok(AlgebraDescriptor::Phi { space, phi: vec![(1, 1.0, 0.0)] }),
        "commutative-phi" => Ok(AlgebraDescriptor::CommutativePhi { space, phi: vec![(1, 1.0, 0.0)], x0: vec![(1, 1.0, 0.0)] }),
        "times" => Ok(AlgebraDescriptor::Times {
            space,
            columns: ColumnSource::Enumerated { grid: RationalGrid { denom: args.denom } },
            rank: args.rank,
        }),
        other => Err(CliError::config(format!("unknown --product {other:?}"))),
    }
}

fn random_seq(rng: &mut ChaCha8Rng, dim: u64) -> ComplexSeq {
    let v: Vec<C64> = (0..dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexSeq::from_dense(1, &v)
}

fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

#[derive(Serialize)]
struct AssocRow {
    trial: u64,
    residual: f64,
    collapsed_gap: Option<f64>,
    tail_bound: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SubmultRow {
    trial: u64,
    product_norm: f64,
    bound: f64,
    tail: f64,
    commutator: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct PowerRow {
    trial: u64,
    j: u32,
    residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MonomialRow {
    beta: String,
    gap: f64,
    pass: bool,
}

#[derive(Serialize)]
struct WitnessRow {
    outcome: &'static str,
    r: Option<u64>,
    j: Option<u32>,
    p_j: Option<f64>,
    gamma_scaled: Option<f64>,
    log2_factor: Option<f64>,
    sound: Option<bool>,
}

fn finish<R: Serialize>(args: &Args, alg: &Algebra, rows: &[R], failed: usize) -> Result<Output, CliError> {
    let summary = json!({ "product": alg.name(), "rows": rows.len(), "failed": failed });
    let out = Output::new("algebra", config_of(args), summary, rows)?;
    Ok(if failed == 0 { out } else { out.with_status("violation", EXIT_ASSERTION) })
}

fn associativity(args: &Args, alg: &Algebra) -> Result<Output, CliError> {
    let seed = parse::require_seed(args.seed, "--task associativity")?;
    let rows: Vec<AssocRow> = (0..args.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let (x, y, z) = (random_seq(&mut rng, args.dim), random_seq(&mut rng, args.dim), random_seq(&mut rng, args.dim));
            let s = alg.space();
            let scale = (norm(&x, s) * norm(&y, s) * norm(&z, s)).max(1.0);
            Ok(match alg {
                Algebra::Times(t) => {
                    let rep = times_associativity_check(t, &x, &y, &z)?;
                    AssocRow {
                        trial: i,
                        residual: rep.bracket_gap,
                        collapsed_gap: Some(rep.collapsed_gap),
                        tail_bound: rep.tail_bound,
                        pass: rep.holds(ASSOC_TOL),
                    }
                }
                _ => {
                    let residual = associativity_residual(|a, b| alg.mul(a, b), &x, &y, &z, s)?;
                    AssocRow { trial: i, residual, collapsed_gap: None, tail_bound: 0.0, pass: residual <= ASSOC_TOL * scale }
                }
            })
        })
        .collect::<hyperdyn::Result<_>>()?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    finish(args, alg, &rows, failed)
}

fn submult(args: &Args, alg: &Algebra) -> Result<Output, CliError> {
    let seed = parse::require_seed(args.seed, "--task submult")?;
    let rows: Vec<SubmultRow> = (0..args.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let (x, y) = (random_seq(&mut rng, args.dim), random_seq(&mut rng, args.dim));
            let s = alg.space();
            let xy = alg.mul(&x, &y)?;
            let bound = norm(&x, s) * norm(&y, s);
            let tail = alg.tail(&x, &y);
            let commutator = if alg.commutative() { Some(norm(&xy.sub(&alg.mul(&y, &x)?)?, s)) } else { None };
            let product_norm = norm(&xy, s);
            let pass = product_norm <= bound * (1.0 + 1e-12) + tail && commutator.is_none_or(|c| c == 0.0);
            Ok(SubmultRow { trial: i, product_norm, bound, tail, commutator, pass })
        })
        .collect::<hyperdyn::Result<_>>()?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    finish(args, alg, &rows, failed)
}

fn power_law(args: &Args, alg: &Algebra) -> Result<Output, CliError> {
    let Algebra::Phi(phi) = alg else {
        return Err(CliError::config("--task power-law needs --product phi"));
    };
    let seed = parse::require_seed(args.seed, "--task power-law")?;
    let mut rows = Vec::new();
    for i in 0..args.trials as u64 {
        let x = random_seq(&mut trial_rng(seed, i), args.dim);
        for j in 1..=6 {
            let residual = phi_power_law_residual(phi, &x, j)?;
            rows.push(PowerRow { trial: i, j, residual, pass: residual <= 1e-13 });
        }
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    finish(args, alg, &rows, failed)
}

fn monomials(args: &Args, alg: &Algebra) -> Result<Output, CliError> {
    let Algebra::Times(t) = alg else {
        return Err(CliError::config("--task monomials needs --product times"));
    };
    let mut rows = Vec::new();
    for s in 1..=3u32 {
        for code in 0..5u32.pow(s) {
            let beta: Vec<u32> = (0..s).map(|i| code / 5u32.pow(i) % 5).collect();
            let deg: u32 = beta.iter().sum();
            if !(2..=4).contains(&deg) || beta.last() == Some(&0) {
                continue;
            }
            let gap = norm(&monomial_eval(t, &beta)?.sub(&monomial_iterated(t, &beta)?)?, t.space());
            rows.push(MonomialRow { beta: format!("{beta:?}"), gap, pass: gap <= ASSOC_TOL });
        }
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    finish(args, alg, &rows, failed)
}

fn witness(args: &Args, alg: &Algebra) -> Result<Output, CliError> {
    let Algebra::Times(t) = alg else {
        return Err(CliError::config("--task witness needs --product times"));
    };
    let raw: Vec<(Vec<u32>, f64, f64)> = parse::json_arg(args.poly.as_deref().ok_or_else(|| CliError::config("--task witness needs --poly"))?)?;
    let poly = Polynomial::new(raw.into_iter().map(|(b, re, im)| (b, C64::new(re, im))));
    if poly.is_zero() {
        return Err(CliError::config("the polynomial is identically zero"));
    }
    let outcome = independence_witness(t, &poly, args.tol, args.budget)?;
    let row = match &outcome {
        WitnessOutcome::Found(w) => WitnessRow {
            outcome: "found",
            r: Some(w.r),
            j: Some(w.j),
            p_j: Some(w.p_j),
            gamma_scaled: Some(w.gamma_scaled.norm()),
            log2_factor: Some(w.log2_factor),
            sound: Some(w.sound()),
        },
        WitnessOutcome::Linear { .. } => WitnessRow { outcome: "linear", r: None, j: Some(1), p_j: None, gamma_scaled: None, log2_factor: None, sound: None },
        WitnessOutcome::NotFoundAtBudget { .. } => WitnessRow { outcome: "not-found-at-budget", r: None, j: None, p_j: None, gamma_scaled: None, log2_factor: None, sound: None },
    };
    let summary = json!({ "product": alg.name(), "outcome": outcome });
    let out = Output::new("algebra", config_of(args), summary, &[&row])?;
    Ok(match &outcome {
        WitnessOutcome::Found(w) if !w.sound() => out.with_status("violation", EXIT_ASSERTION),
        WitnessOutcome::NotFoundAtBudget { .. } => out.with_status("not-found-at-budget", EXIT_PREMISE),
        _ => out,
    })
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    if args.dim == 0 || args.dim > 10_000 {
        return Err(CliError::config("--dim must lie in 1..=10000"));
    }
    let alg = descriptor(args)?.build()?;
    match args.task.as_str() {
        "associativity" => associativity(args, &alg),
        "submult" => submult(args, &alg),
        "power-law" => power_law(args, &alg),
        "monomials" => monomials(args, &alg),
        "witness" => witness(args, &alg),
        other => Err(CliError::config(format!("unknown --task {other:?}"))),
    }
}
