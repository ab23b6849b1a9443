use serde::Serialize;
use serde_json::json;

use hyperdyn::famgen::{density_lower_bound, family_conditions_check, FamilySpec, GapCondition, BLOCK_R_MAX};
use hyperdyn::fhcbuild::reindex_labeled;

use crate::report::{config_of, CliError, Output, EXIT_ASSERTION};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// Families A(l,m) for (l,m) ∈ [1,L]².
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub cap: u32,
    /// Blocks B(l,r) with r ≤ rcap.
    #[arg(long, default_value_t = 6)]
    pub rcap: u32,
    /// charcond checks the families as built; charcond2 checks them after
    /// relabelling (l,m) ← (l+m,m).
    #[arg(long, default_value = "charcond")]
    pub check: String,
}

#[derive(Serialize)]
struct BlockRow {
    l: u32,
    m: u32,
    r: u32,
    start: String,
    step: u64,
    count: String,
    invariant: bool,
    density_bound: Option<f64>,
}

pub fn run(args: &Args) -> Result<Output, CliError> {
    if !(1..=3).contains(&args.cap) || !(1..=BLOCK_R_MAX).contains(&args.rcap) {
        return Err(CliError::config(format!("need 1 <= L <= 3 and 1 <= rcap <= {BLOCK_R_MAX}")));
    }
    let condition = match args.check.as_str() {
        "charcond" => GapCondition::Charcond,
        "charcond2" => GapCondition::Charcond2,
        other => return Err(CliError::config(format!("unknown check {other:?}"))),
    };
    let mut specs = Vec::new();
    for l in 1..=args.cap {
        for m in 1..=args.cap {
            specs.push(FamilySpec::new(l, m)?);
        }
    }
    let mut rows = Vec::new();
    let mut labeled = Vec::new();
    for s in &specs {
        for b in s.blocks(args.rcap)? {
            let rho = s.rho() as u32;
            let density_bound = if b.r > rho && b.r <= 62 { Some(density_lower_bound(s.l, s.m, b.r)?) } else { None };
            rows.push(BlockRow {
                l: s.l,
                m: s.m,
                r: b.r,
                start: b.start.to_string(),
                step: b.step,
                count: b.count.to_string(),
                invariant: b.verify_invariant(),
                density_bound,
            });
        }
        labeled.push(s.labeled(args.rcap)?);
    }
    if condition == GapCondition::Charcond2 {
        labeled = reindex_labeled(&labeled);
    }
    let report = family_conditions_check(&labeled, condition)?;
    let invariants = rows.iter().all(|r| r.invariant);
    let summary = json!({
        "families": specs.iter().map(|s| json!({"l": s.l, "m": s.m, "r_min": s.r_min})).collect::<Vec<_>>(),
        "condition": report,
        "block_invariants": invariants,
    });
    let out = Output::new("family", config_of(args), summary, &rows)?;
    Ok(if report.passed() && invariants { out } else { out.with_status("violation", EXIT_ASSERTION) })
}
