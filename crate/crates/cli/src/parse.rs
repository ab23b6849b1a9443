//! Flag value parsers shared by the commands.

use std::path::Path;

use hyperdyn::seqspace::{ComplexSeq, SpaceSpec};
use hyperdyn::C64;

use crate::report::CliError;

/// `2`, `1e4` or `10000`; must be a non-negative integer.
pub fn integer(s: &str) -> Result<u64, CliError> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| CliError::config(format!("not a number: {s:?}")))?;
    if f < 0.0 || f.fract() != 0.0 || f > 9.0e15 {
        return Err(CliError::config(format!("not a representable non-negative integer: {s:?}")));
    }
    Ok(f as u64)
}

/// `1e3..1e6` (decades) or a comma list.
pub fn ladder(s: &str) -> Result<Vec<u64>, CliError> {
    let out = match s.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (integer(a)?, integer(b)?);
            if lo == 0 || lo > hi {
                return Err(CliError::config(format!("bad ladder range {s:?}")));
            }
            std::iter::successors(Some(lo), |&n| n.checked_mul(10).filter(|&m| m <= hi)).collect()
        }
        None => s.split(',').map(integer).collect::<Result<Vec<_>, _>>()?,
    };
    if out.is_empty() || out.contains(&0) {
        return Err(CliError::config(format!("ladder {s:?} needs positive horizons")));
    }
    Ok(out)
}

/// `re` or `re,im`.
pub fn complex(s: &str) -> Result<C64, CliError> {
    let bad = || CliError::config(format!("not a complex number (use re or re,im): {s:?}"));
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 0.0),
    };
    let z = C64::new(re, im);
    if !z.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

/// `lp:P` or `c0`.
pub fn space(s: &str) -> Result<SpaceSpec, CliError> {
    match s.trim() {
        "c0" => Ok(SpaceSpec::C0),
        t => {
            let p = t
                .strip_prefix("lp:")
                .and_then(|p| p.parse::<f64>().ok())
                .ok_or_else(|| CliError::config(format!("space must be lp:P or c0, got {s:?}")))?;
            Ok(SpaceSpec::lp(p)?)
        }
    }
}

/// `{"base": b, "entries": [["k", re, im], …]}`.
pub fn sequence_file(path: &Path) -> Result<ComplexSeq, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Inline JSON, or `@path` to read it from a file.
pub fn json_arg<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, CliError> {
    let text = match s.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::config(format!("{p}: {e}")))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("bad JSON argument: {e}")))
}

pub fn require_seed(seed: Option<u64>, what: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::config(format!("{what} is randomized; pass --seed")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladders() {
        assert_eq!(ladder("1e3..1e6").unwrap(), vec![1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(ladder("10,250").unwrap(), vec![10, 250]);
        assert!(ladder("1e6..1e3").is_err());
        assert!(ladder("0,5").is_err());
    }

    #[test]
    fn scalars() {
        assert_eq!(complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(complex("1.5,-0.5").unwrap(), C64::new(1.5, -0.5));
        assert!(complex("x").is_err());
        assert_eq!(space("lp:2").unwrap(), SpaceSpec::Lp { p: 2.0 });
        assert_eq!(space("c0").unwrap(), SpaceSpec::C0);
        assert!(space("lp:0.5").is_err());
        assert_eq!(integer("1e4").unwrap(), 10_000);
        assert!(integer("1.5").is_err());
    }
}
