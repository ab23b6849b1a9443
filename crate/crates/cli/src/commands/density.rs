use serde::Serialize;
use serde_json::json;

use hyperdyn::density::{ladder, DensityKind, Generator};

use crate::parse;
use crate::report::{config_of, CliError, Output};

/// Largest horizon a density ladder may reach.
const HORIZON_MAX: u64 = 50_000_000;

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// Index set, e.g. `dyadic:l=1,m=1`, `evens`, `complement:squares`.
    #[arg(long)]
    pub set: String,
    /// Comma list of lower, upper, log, logm, d2, d2m.
    #[arg(long, default_value = "lower,upper,log,d2")]
    pub kinds: String,
    /// `1e3..1e6` (decades) or a comma list of horizons.
    #[arg(long, default_value = "1e3..1e6")]
    pub ladder: String,
    /// Power m for logm and d2m.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let generator: Generator = args.set.parse()?;
    let kinds = args
        .kinds
        .split(',')
        .map(|k| k.parse::<DensityKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let horizons = parse::ladder(&args.ladder)?;
    let horizon = *horizons.iter().max().expect("non-empty");
    if horizon > HORIZON_MAX {
        return Err(CliError::config(format!("horizon {horizon} exceeds {HORIZON_MAX}")));
    }
    if args.m == 0 {
        return Err(CliError::config("--m must be at least 1"));
    }
    let family = generator.materialize(horizon);
    let id = generator.to_string();
    let mut rows = Vec::new();
    for kind in kinds {
        let m = if matches!(kind, DensityKind::LogM | DensityKind::DyadicM) { args.m } else { 1 };
        rows.extend(ladder(&id, &family, kind, m, &horizons)?);
    }
    let summary = json!({ "family_id": id, "horizon": horizon, "count": family.len() });
    Output::new("density", config_of(args), summary, &rows)
}
