use serde::Serialize;
use serde_json::json;

use hyperdyn::fhcbuild::{build_vector, constant_cm, geometric_admissible_family, orbit_error_table, TestVectors};
use hyperdyn::seqspace::SpaceSpec;

use crate::parse;
use crate::report::{config_of, CliError, Output, EXIT_ASSERTION};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// Cells (l,m) ∈ [1,L]².
    #[arg(long = "L", default_value_t = 2)]
    #[serde(rename = "L")]
    pub cap: u32,
    /// Elements per cell.
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    /// λ as `re` or `re,im`, |λ| > 1.
    #[arg(long, default_value = "2")]
    pub lambda: String,
    /// Coordinates materialised.
    #[arg(long, default_value = "1e4")]
    pub horizon: String,
    /// `lp:P` or `c0`.
    #[arg(long, default_value = "lp:2")]
    pub space: String,
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    let lambda = parse::complex(&args.lambda)?;
    let horizon = parse::integer(&args.horizon)?;
    let space = parse::space(&args.space)?;
    if matches!(space, SpaceSpec::TaylorL1) || horizon > 10_000_000 {
        return Err(CliError::config("construction runs on ℓ_p or c₀ with horizon <= 1e7"));
    }
    let system = geometric_admissible_family(args.cap, args.depth, lambda)?;
    let tests = TestVectors::dense(space, args.cap);
    let cv = build_vector(&system, &tests, lambda, horizon)?;
    let rows = orbit_error_table(&cv)?;
    let checked = rows.iter().filter(|r| r.error.is_some()).count();
    let failed = rows.iter().filter(|r| r.error.is_some() && !r.holds()).count();
    let constants = (1..=args.cap)
        .map(|m| constant_cm(lambda.norm(), m).map(|c| json!({ "m": m, "C": c })))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = json!({
        "cells": system.descriptor(lambda.norm()),
        "fi2": system.fi2_holds(lambda.norm()),
        "norm": cv.norm(),
        "terms": cv.terms().len(),
        "support": cv.support_len(),
        "tail_bound": cv.tail_bound(),
        "constants": constants,
        "checked": checked,
        "failed": failed,
    });
    let out = Output::new("construct", config_of(args), summary, &rows)?;
    Ok(if failed == 0 { out } else { out.with_status("bound-violated", EXIT_ASSERTION) })
}
