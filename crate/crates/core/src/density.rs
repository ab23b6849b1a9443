//! Densities of index sets at a finite horizon.
//!
//! Every density here is a finite-N ratio; liminf/limsup statements are
//! approximated by evaluating along a ladder of N values (see [`ladder`]).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::famgen;
use crate::seqspace::CompensatedSum;

/// A strictly increasing, materialised set of naturals up to a horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexFamily {
    elements: Vec<u64>,
    horizon: u64,
    descriptor: Option<String>,
}

impl IndexFamily {
    pub fn new(elements: Vec<u64>, horizon: u64) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("index family must be strictly increasing".into()));
        }
        if let Some(&last) = elements.last() {
            if last > horizon {
                return Err(Error::Precondition(format!(
                    "element {last} exceeds the horizon {horizon}"
                )));
            }
        }
        Ok(Self {
            elements,
            horizon,
            descriptor: None,
        })
    }

    pub fn empty(horizon: u64) -> Self {
        Self {
            elements: Vec::new(),
            horizon,
            descriptor: None,
        }
    }

    /// All n in `0..=horizon` satisfying `pred`.
    pub fn from_predicate(horizon: u64, pred: impl Fn(u64) -> bool) -> Self {
        Self {
            elements: (0..=horizon).filter(|&n| pred(n)).collect(),
            horizon,
            descriptor: None,
        }
    }

    pub fn with_descriptor(mut self, d: impl Into<String>) -> Self {
        self.descriptor = Some(d.into());
        self
    }

    pub fn descriptor(&self) -> Option<&str> {
        self.descriptor.as_deref()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elements.binary_search(&n).is_ok()
    }

    /// card{n ∈ A : n ≤ bound}.
    pub fn count_upto(&self, bound: u64) -> usize {
        self.elements.partition_point(|&n| n <= bound)
    }

    fn upto(&self, bound: u64) -> &[u64] {
        &self.elements[..self.count_upto(bound)]
    }

    fn check_horizon(&self, n: u64) -> Result<()> {
        if n > self.horizon {
            return Err(Error::Precondition(format!(
                "N = {n} exceeds the materialised horizon {}",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// Closed-form families that can be materialised on demand.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    All,
    Evens,
    Multiples { k: u64, r: u64 },
    Squares,
    Powers { b: u64 },
    LeadingDigit { d: u8 },
    Dyadic { l: u32, m: u32 },
    Interval { lo: u64, hi: u64 },
    Complement(Box<Generator>),
}

impl Generator {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            Generator::All => true,
            Generator::Evens => n.is_multiple_of(2),
            Generator::Multiples { k, r } => n % k == r % k,
            Generator::Squares => {
                let s = n.isqrt();
                s * s == n
            }
            Generator::Powers { b } => {
                let mut p = 1u64;
                while p < n {
                    match p.checked_mul(*b) {
                        Some(q) => p = q,
                        None => return false,
                    }
                }
                p == n
            }
            Generator::LeadingDigit { d } => {
                let mut v = n;
                while v >= 10 {
                    v /= 10;
                }
                n > 0 && v == *d as u64
            }
            Generator::Dyadic { l, m } => famgen::matches_dyadic_pattern(n, *l, *m),
            Generator::Interval { lo, hi } => (*lo..=*hi).contains(&n),
            Generator::Complement(g) => !g.contains(n),
        }
    }

    pub fn materialize(&self, horizon: u64) -> IndexFamily {
        IndexFamily::from_predicate(horizon, |n| self.contains(n)).with_descriptor(self.to_string())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::All => write!(f, "all"),
            Generator::Evens => write!(f, "evens"),
            Generator::Multiples { k, r } => write!(f, "multiples:k={k},r={r}"),
            Generator::Squares => write!(f, "squares"),
            Generator::Powers { b } => write!(f, "powers:b={b}"),
            Generator::LeadingDigit { d } => write!(f, "leading-digit:d={d}"),
            Generator::Dyadic { l, m } => write!(f, "dyadic:l={l},m={m}"),
            Generator::Interval { lo, hi } => write!(f, "interval:lo={lo},hi={hi}"),
            Generator::Complement(g) => write!(f, "complement:{g}"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// Parses `name` or `name:key=value,…`, e.g. `dyadic:l=1,m=1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("complement:") {
            return Ok(Generator::Complement(Box::new(rest.parse()?)));
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in args.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{k}={v}: {e}")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| Error::Parse(format!("family {name:?} needs parameter {k}")))
        };
        let g = match name {
            "all" => Generator::All,
            "evens" => Generator::Evens,
            "squares" => Generator::Squares,
            "multiples" => Generator::Multiples {
                k: get("k")?.max(1),
                r: kv.get("r").copied().unwrap_or(0),
            },
            "powers" => Generator::Powers { b: get("b")?.max(2) },
            "leading-digit" => Generator::LeadingDigit { d: get("d")?.clamp(1, 9) as u8 },
            "dyadic" => Generator::Dyadic {
                l: get("l")?.max(1) as u32,
                m: get("m")?.max(1) as u32,
            },
            "interval" => Generator::Interval { lo: get("lo")?, hi: get("hi")? },
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        Ok(g)
    }
}

/// card{0 ≤ n ≤ N : n ∈ A}/(N+1).
pub fn lower_density(a: &IndexFamily, n: u64) -> Result<f64> {
    a.check_horizon(n)?;
    Ok(a.count_upto(n) as f64 / (n as f64 + 1.0))
}

/// Same finite-N ratio as [`lower_density`]; the two differ only in how a
/// ladder of values is summarised (min vs max).
pub fn upper_density(a: &IndexFamily, n: u64) -> Result<f64> {
    lower_density(a, n)
}

fn weighted_ratio(a: &IndexFamily, n: u64, start: u64, weight: impl Fn(u64) -> f64) -> Result<f64> {
    a.check_horizon(n)?;
    if n < start {
        return Ok(0.0);
    }
    let den: CompensatedSum = (start..=n).map(&weight).collect();
    let num: CompensatedSum = a.upto(n).iter().filter(|&&k| k >= start).map(|&k| weight(k)).collect();
    let den = den.value();
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num.value() / den)
}

/// Σ_{1≤n≤N, n∈A} 1/n ÷ Σ_{1≤n≤N} 1/n.
pub fn log_lower_density(a: &IndexFamily, n: u64) -> Result<f64> {
    weighted_ratio(a, n, 1, |k| 1.0 / k as f64)
}

/// Weighted ratio with weight log^{m−1}(n)/n.
pub fn logm_lower_density(a: &IndexFamily, n: u64, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    if m == 1 {
        return log_lower_density(a, n);
    }
    weighted_ratio(a, n, 1, |k| (k as f64).ln().powi(m as i32 - 1) / k as f64)
}

/// log₂(n) − log₂(n−1), computed without cancellation.
fn dyadic_increment(k: u64) -> f64 {
    (1.0 / (k as f64 - 1.0)).ln_1p() / std::f64::consts::LN_2
}

/// Σ_{2≤n≤N, n∈A} (log₂ n − log₂(n−1)) ÷ log₂ N.
pub fn dyadic_log_density(a: &IndexFamily, n: u64) -> Result<f64> {
    a.check_horizon(n)?;
    if n < 2 {
        return Ok(0.0);
    }
    let num: CompensatedSum = a
        .upto(n)
        .iter()
        .filter(|&&k| k >= 2)
        .map(|&k| dyadic_increment(k))
        .collect();
    Ok(num.value() / (n as f64).log2())
}

/// Σ_{2≤n≤N, n∈A} (log₂^m n − log₂^m(n−1)) ÷ log₂^m N.
pub fn dyadic_logm_density(a: &IndexFamily, n: u64, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    a.check_horizon(n)?;
    if n < 2 {
        return Ok(0.0);
    }
    let num: CompensatedSum = a
        .upto(n)
        .iter()
        .filter(|&&k| k >= 2)
        .map(|&k| (k as f64).log2().powi(m as i32) - ((k - 1) as f64).log2().powi(m as i32))
        .collect();
    Ok(num.value() / (n as f64).log2().powi(m as i32))
}

/// Which density a report row carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Lower,
    Upper,
    Log,
    LogM,
    Dyadic,
    DyadicM,
}

impl DensityKind {
    pub fn evaluate(self, a: &IndexFamily, n: u64, m: u32) -> Result<f64> {
        match self {
            DensityKind::Lower => lower_density(a, n),
            DensityKind::Upper => upper_density(a, n),
            DensityKind::Log => log_lower_density(a, n),
            DensityKind::LogM => logm_lower_density(a, n, m),
            DensityKind::Dyadic => dyadic_log_density(a, n),
            DensityKind::DyadicM => dyadic_logm_density(a, n, m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DensityKind::Lower => "lower",
            DensityKind::Upper => "upper",
            DensityKind::Log => "log",
            DensityKind::LogM => "logm",
            DensityKind::Dyadic => "d2",
            DensityKind::DyadicM => "d2m",
        }
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "lower" => DensityKind::Lower,
            "upper" => DensityKind::Upper,
            "log" => DensityKind::Log,
            "logm" => DensityKind::LogM,
            "d2" | "dyadic" => DensityKind::Dyadic,
            "d2m" => DensityKind::DyadicM,
            other => return Err(Error::Parse(format!("unknown density kind {other:?}"))),
        })
    }
}

/// One CSV report row: family-id, density-kind, m, N, value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub family_id: String,
    pub density_kind: String,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub value: f64,
}

/// Evaluates a density along a ladder of horizons.
pub fn ladder(
    family_id: &str,
    a: &IndexFamily,
    kind: DensityKind,
    m: u32,
    horizons: &[u64],
) -> Result<Vec<DensityRow>> {
    horizons
        .iter()
        .map(|&n| {
            Ok(DensityRow {
                family_id: family_id.to_string(),
                density_kind: kind.name().to_string(),
                m,
                n,
                value: kind.evaluate(a, n, m)?,
            })
        })
        .collect()
}

/// The default ladder 10³, 10⁴, 10⁵, 10⁶.
pub const DEFAULT_LADDER: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];

/// Output of [`linear_growth_bound`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    /// M = ceil(max_k n_k / k), so that n_k ≤ M k.
    pub m: u64,
    /// Smallest integer R with n_{k+1} ≤ R n_k over the range.
    pub step_bound: u64,
    /// Number of (non-zero) elements the bound was computed over.
    pub len: usize,
}

impl GrowthBound {
    /// M_j = (2M)^j.
    pub fn schedule(&self, j: u32) -> BigUint {
        BigUint::from(2 * self.m).pow(j)
    }

    /// Checks n_{k+j} ≤ (2M)^j n_k for all k and j ≤ `max_j`, exactly.
    pub fn verify_schedule(&self, a: &IndexFamily, max_j: u32) -> bool {
        let ns: Vec<u64> = a.elements().iter().copied().filter(|&n| n > 0).collect();
        (1..=max_j).all(|j| {
            let mj = self.schedule(j);
            ns.iter()
                .zip(ns.iter().skip(j as usize))
                .all(|(&nk, &nkj)| BigUint::from(nkj) <= &mj * BigUint::from(nk))
        })
    }
}

/// Linear-growth constants of a set assumed to have positive lower density.
///
/// Zero is skipped (the enumeration n_1 < n_2 < … runs over positive
/// naturals). Returns `None` for an empty set or when max n_k/k exceeds `cap`.
pub fn linear_growth_bound(a: &IndexFamily, cap: u64) -> Option<GrowthBound> {
    let ns: Vec<u64> = a.elements().iter().copied().filter(|&n| n > 0).collect();
    if ns.is_empty() {
        return None;
    }
    let mut m = 0u64;
    for (i, &n) in ns.iter().enumerate() {
        let k = i as u64 + 1;
        m = m.max(n.div_ceil(k));
        if m > cap {
            return None;
        }
    }
    let step_bound = ns
        .windows(2)
        .map(|w| w[1].div_ceil(w[0]))
        .max()
        .unwrap_or(1)
        .max(1);
    debug_assert!(ns
        .windows(2)
        .all(|w| (w[1] as u128) <= 2 * m as u128 * w[0] as u128));
    Some(GrowthBound {
        m,
        step_bound,
        len: ns.len(),
    })
}
