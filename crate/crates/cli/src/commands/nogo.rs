use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use hyperdyn::nogo::{
    classify_power_weight, maclane_power_obstruction, parse_rational, power_obstruction_bw, rolewicz_power_obstruction,
    verdict_rows, ObstructionReport, ObstructionStatus, OrbitVector, SeriesVerdict, VerdictRow,
};
use hyperdyn::seqspace::{ShiftSpec, SpaceSpec, Weights};
use hyperdyn::C64;

use crate::parse;
use crate::report::{config_of, CliError, Output, EXIT_ASSERTION, EXIT_PREMISE};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// rolewicz, maclane, bw or weights.
    #[arg(long)]
    pub op: String,
    /// λ for rolewicz, as `re` or `re,im`.
    #[arg(long, default_value = "2")]
    pub lambda: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Orbit horizon N.
    #[arg(long, default_value = "1e4")]
    pub horizon: String,
    /// Vector file `{"base": b, "entries": [["k", re, im], …]}`.
    #[arg(long)]
    pub vector: Option<std::path::PathBuf>,
    /// Read the file as u = x·W (orbit-normalised) instead of x.
    #[arg(long, default_value_t = false)]
    pub normalized: bool,
    /// Number of random spiky vectors instead of a file.
    #[arg(long)]
    pub random: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `lp:P` or `c0` for rolewicz.
    #[arg(long, default_value = "lp:2")]
    pub space: String,
    /// Powers to scan, overriding [M, M+5].
    #[arg(long)]
    pub m_min: Option<u32>,
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Power-weight exponent α for bw and weights, e.g. `4/5`.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// p for bw and weights, e.g. `2` or `3/2`.
    #[arg(long, default_value = "2")]
    pub p: String,
    /// Power m for bw and weights.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
}

/// Mostly small normalised coordinates with occasional order-one spikes.
pub fn spiky(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| {
            let mag = if rng.gen_bool(0.05) { rng.gen_range(0.05..1.5) } else { rng.gen_range(0.0..0.01) };
            C64::from_polar(mag, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        })
        .collect()
}

fn load(args: &Args, op: ShiftSpec) -> Result<OrbitVector, CliError> {
    let path = args.vector.as_ref().ok_or_else(|| CliError::config("pass --vector FILE or --random COUNT --seed S"))?;
    let seq = parse::sequence_file(path)?;
    if args.normalized {
        let base = seq.base();
        let top = seq.top_index().unwrap_or(base);
        let u: Vec<C64> = (base..=top).map(|k| seq.get(k)).collect();
        let v = OrbitVector::from_normalized(op, u)?;
        if v.base() != base {
            return Err(CliError::config(format!("vector base must be {}", v.base())));
        }
        Ok(v)
    } else {
        Ok(OrbitVector::from_seq(op, &seq)?)
    }
}

fn m_range(args: &Args) -> Result<Option<std::ops::RangeInclusive<u32>>, CliError> {
    match (args.m_min, args.m_max) {
        (None, None) => Ok(None),
        (Some(a), Some(b)) if 1 <= a && a <= b => Ok(Some(a..=b)),
        _ => Err(CliError::config("--m-min and --m-max go together with 1 <= m-min <= m-max")),
    }
}

fn exit_for(status: ObstructionStatus) -> (i32, &'static str) {
    match status {
        ObstructionStatus::Pass => (0, "ok"),
        ObstructionStatus::Violation => (EXIT_ASSERTION, "violation"),
        ObstructionStatus::PremiseNotMet => (EXIT_PREMISE, "premise-not-met"),
        ObstructionStatus::Degenerate => (EXIT_PREMISE, "degenerate"),
    }
}

fn obstruction(args: &Args) -> Result<Output, CliError> {
    let horizon = parse::integer(&args.horizon)?;
    if horizon == 0 || horizon > 1_000_000 {
        return Err(CliError::config("horizon must lie in 1..=1e6"));
    }
    let range = m_range(args)?;
    let rolewicz = args.op == "rolewicz";
    let op = if rolewicz { ShiftSpec::rolewicz(parse::complex(&args.lambda)?)? } else { ShiftSpec::MacLane };
    let space = if rolewicz { parse::space(&args.space)? } else { SpaceSpec::TaylorL1 };
    let check = |v: &OrbitVector| -> hyperdyn::Result<ObstructionReport> {
        if rolewicz {
            rolewicz_power_obstruction(v, args.eps, horizon, space, range.clone())
        } else {
            maclane_power_obstruction(v, args.eps, horizon, range.clone())
        }
    };
    let reports: Vec<ObstructionReport> = match args.random {
        Some(count) => {
            let seed = parse::require_seed(args.seed, "--random")?;
            (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i);
                    check(&OrbitVector::from_normalized(op.clone(), spiky(&mut rng, horizon as usize + 64))?)
                })
                .collect::<hyperdyn::Result<_>>()?
        }
        None => vec![check(&load(args, op.clone())?)?],
    };
    let mut rows: Vec<VerdictRow> = Vec::new();
    for (i, rep) in reports.iter().enumerate() {
        for mut row in verdict_rows(rep) {
            if args.random.is_some() {
                row.operator_id = format!("{}#{i}", row.operator_id);
            }
            rows.push(row);
        }
    }
    let count = |s| reports.iter().filter(|r| r.status == s).count();
    let summary = json!({
        "vectors": reports.len(),
        "pass": count(ObstructionStatus::Pass),
        "violation": count(ObstructionStatus::Violation),
        "premise_not_met": count(ObstructionStatus::PremiseNotMet),
        "degenerate": count(ObstructionStatus::Degenerate),
        "reports": reports.iter().map(|r| json!({
            "status": r.status,
            "visits": r.a.len(),
            "first_visit": r.a.elements().first(),
            "m_step": r.m_step,
            "m_lemma": r.m_lemma,
            "note": r.note,
        })).collect::<Vec<_>>(),
    });
    let out = Output::new("nogo", config_of(args), summary, &rows)?;
    let (code, status) = if count(ObstructionStatus::Violation) > 0 {
        (EXIT_ASSERTION, "violation")
    } else if args.random.is_some() {
        (0, "ok")
    } else {
        exit_for(reports[0].status)
    };
    Ok(out.with_status(status, code))
}

#[derive(Serialize)]
struct WeightRow {
    alpha: String,
    p: String,
    m: u32,
    series: &'static str,
    value: Option<f64>,
    fhc: Option<bool>,
    power_obstructed: bool,
}

fn weights(args: &Args) -> Result<Output, CliError> {
    let (alpha, p) = (parse_rational(&args.alpha)?, parse_rational(&args.p)?);
    let c = classify_power_weight(alpha, p, args.m)?;
    let (series, value) = match c.series {
        SeriesVerdict::Divergent => ("divergent", None),
        SeriesVerdict::Convergent { value } => ("convergent", Some(value)),
        SeriesVerdict::Heuristic { .. } => ("heuristic", None),
    };
    let row = WeightRow {
        alpha: alpha.to_string(),
        p: p.to_string(),
        m: args.m,
        series,
        value,
        fhc: c.fhc,
        power_obstructed: c.power_obstructed,
    };
    Output::new("nogo", config_of(args), json!({ "classification": c }), &[row])
}

fn bw(args: &Args) -> Result<Output, CliError> {
    let horizon = parse::integer(&args.horizon)?;
    let alpha = parse_rational(&args.alpha)?;
    let p = parse_rational(&args.p)?;
    let alpha = *alpha.numer() as f64 / *alpha.denom() as f64;
    let p = *p.numer() as f64 / *p.denom() as f64;
    let op = ShiftSpec::Weighted { weights: Weights::Power { alpha } };
    let v = load(args, op)?;
    let rep = power_obstruction_bw(&v, p, args.m, horizon, args.eps)?;
    let summary = json!({
        "times": rep.times.len(),
        "weight_sum": rep.weight_sum,
        "forced_mass": rep.forced_mass,
        "norm_pp": rep.norm_pp,
        "consistent": rep.consistent,
    });
    let out = Output::new("nogo", config_of(args), summary, &rep.times)?;
    Ok(if !rep.consistent {
        out.with_status("violation", EXIT_ASSERTION)
    } else if rep.times.is_empty() {
        out.with_status("premise-not-met", EXIT_PREMISE)
    } else {
        out
    })
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    if !(args.eps > 0.0 && args.eps < 1.0) {
        return Err(CliError::config("--eps must lie in (0,1)"));
    }
    match args.op.as_str() {
        "rolewicz" | "maclane" => obstruction(args),
        "weights" => weights(args),
        "bw" => bw(args),
        other => Err(CliError::config(format!("unknown --op {other:?} (rolewicz, maclane, bw, weights)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spiky_is_reproducible() {
        let a = spiky(&mut ChaCha8Rng::seed_from_u64(4), 50);
        let b = spiky(&mut ChaCha8Rng::seed_from_u64(4), 50);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.norm() < 1.5));
    }
}
