//! Obstruction checkers: power-failure inequalities for λB, for the MacLane
//! operator D and for small-weight shifts B_w, the weight-series criterion,
//! and the supercyclic-powers identity.
//!
//! None of these decide that a vector is frequently hypercyclic. Each computes
//! the visit set A = {n ≤ N : ‖Tⁿx‖ < ε} of a finite vector, and when A has
//! bounded ratios checks the inequality the argument derives from it.
//!
//! Vectors are held in orbit-normalised form x(k) = u(k)/W(k), where W(k) is
//! the product of the first weights (λ^{k−1} for λB, k! for D). Then
//! (Tⁿx)(j) = u(j+n)/W(j) and (Tⁿx^m)(j) = u(j+n)^m/(W(j)·W(j+n)^{m−1}),
//! which stay representable where x itself underflows.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::density::{linear_growth_bound, IndexFamily};
use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;
use crate::seqspace::{apply_shift, cpow, norm, power, ComplexSeq, ShiftSpec, SpaceSpec, Weights};
use crate::C64;

/// Largest admissible ratio bound before the premise counts as unmet.
pub const RATIO_CAP: u64 = 64;
/// Number of factorial terms summed exactly in MacLane seminorms.
const MACLANE_TERMS: u64 = 40;

/// A finitely supported vector stored as u = x·W.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitVector {
    op: ShiftSpec,
    base: u64,
    /// u(base), u(base+1), …
    u: Vec<C64>,
    /// log₂|W(k)| and arg W(k), same indexing as `u`.
    log2_w: Vec<f64>,
    arg_w: Vec<f64>,
}

fn op_base(op: &ShiftSpec) -> Result<u64> {
    op.validate()?;
    match op {
        ShiftSpec::Rolewicz { .. } | ShiftSpec::Weighted { .. } => Ok(1),
        ShiftSpec::MacLane => Ok(0),
        ShiftSpec::Forward => Err(Error::InvalidOperator("the forward shift has no orbit obstruction".into())),
    }
}

impl OrbitVector {
    /// Normalised coordinates u(base), u(base+1), … for the operator `op`.
    pub fn from_normalized(op: ShiftSpec, u: Vec<C64>) -> Result<Self> {
        let base = op_base(&op)?;
        let len = u.len();
        let (mut log2_w, mut arg_w) = (Vec::with_capacity(len), Vec::with_capacity(len));
        let (mut lg, mut ag) = (0.0f64, 0.0f64);
        for i in 0..len as u64 {
            let k = base + i;
            match &op {
                ShiftSpec::Rolewicz { lambda } => {
                    lg = (k - 1) as f64 * lambda.norm().log2();
                    ag = (k - 1) as f64 * lambda.arg();
                }
                ShiftSpec::MacLane => {
                    if k >= 2 {
                        lg += (k as f64).log2();
                    }
                }
                ShiftSpec::Weighted { weights: Weights::Power { alpha } } => {
                    lg = alpha * (k as f64).log2();
                }
                ShiftSpec::Weighted { weights } => {
                    if k >= 2 {
                        let w = weights.weight(k);
                        lg += w.norm().log2();
                        ag += w.arg();
                    }
                }
                ShiftSpec::Forward => unreachable!(),
            }
            log2_w.push(lg);
            arg_w.push(ag);
        }
        Ok(Self { op, base, u, log2_w, arg_w })
    }

    /// u = x·W from ordinary coordinates (x must start at the operator's base).
    pub fn from_seq(op: ShiftSpec, x: &ComplexSeq) -> Result<Self> {
        let base = op_base(&op)?;
        if x.base() != base {
            return Err(Error::BaseMismatch { left: x.base(), right: base });
        }
        let top = x.top_index().unwrap_or(base);
        let shell = Self::from_normalized(op, vec![C64::new(0.0, 0.0); (top - base + 1) as usize])?;
        let u = (base..=top)
            .map(|k| LogComplex::from_c64(x.get(k)).mul(shell.weight(k)).to_c64())
            .collect();
        Self::from_normalized(shell.op, u)
    }

    pub fn op(&self) -> &ShiftSpec {
        &self.op
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Largest index with u(k) ≠ 0.
    pub fn top_index(&self) -> Option<u64> {
        self.u.iter().rposition(|v| *v != C64::new(0.0, 0.0)).map(|i| self.base + i as u64)
    }

    pub fn u(&self, k: u64) -> C64 {
        k.checked_sub(self.base)
            .and_then(|i| self.u.get(i as usize))
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    fn abs_u(&self, k: u64) -> f64 {
        self.u(k).norm()
    }

    /// W(k); only defined inside the stored range.
    pub fn weight(&self, k: u64) -> LogComplex {
        let i = (k - self.base) as usize;
        LogComplex::from_parts(self.log2_w[i], self.arg_w[i])
    }

    fn log2_weight(&self, k: u64) -> f64 {
        self.log2_w[(k - self.base) as usize]
    }

    /// x(k) = u(k)/W(k).
    pub fn coordinate(&self, k: u64) -> LogComplex {
        if k < self.base || k >= self.base + self.u.len() as u64 {
            return LogComplex::ZERO;
        }
        LogComplex::from_c64(self.u(k)).mul(self.weight(k).powi(-1))
    }

    /// x as an ordinary sequence; coordinates below the f64 range become 0.
    pub fn to_complex_seq(&self) -> ComplexSeq {
        let entries = (0..self.u.len() as u64)
            .map(|i| self.base + i)
            .map(|k| (k, self.coordinate(k).to_c64()))
            .filter(|(_, v)| *v != C64::new(0.0, 0.0))
            .collect();
        ComplexSeq::new(self.base, entries).expect("increasing")
    }

    /// (Tⁿx^m)(j) for j ≥ base; zero outside the support.
    pub fn orbit_power_coordinate(&self, n: u64, m: u32, j: u64) -> LogComplex {
        let k = j + n;
        if k >= self.base + self.u.len() as u64 {
            return LogComplex::ZERO;
        }
        let u = LogComplex::from_c64(self.u(k)).powi(m as i64);
        let den = self.weight(j).mul(self.weight(k).powi(m as i64 - 1));
        u.mul(den.powi(-1))
    }

    /// ‖Tⁿx^m − e_base‖ evaluated coordinate by coordinate.
    pub fn power_distance_direct(&self, n: u64, m: u32, space: SpaceSpec) -> f64 {
        let top = self.base + self.u.len() as u64;
        let first = self.orbit_power_coordinate(n, m, self.base).to_c64() - 1.0;
        let rest = (self.base + 1..top.saturating_sub(n).max(self.base + 1))
            .map(|j| self.orbit_power_coordinate(n, m, j).abs());
        space.norm_of_moduli(std::iter::once(first.norm()).chain(rest))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionStatus {
    Pass,
    Violation,
    PremiseNotMet,
    Degenerate,
}

impl ObstructionStatus {
    pub fn name(self) -> &'static str {
        match self {
            ObstructionStatus::Pass => "pass",
            ObstructionStatus::Violation => "fail",
            ObstructionStatus::PremiseNotMet => "premise-not-met",
            ObstructionStatus::Degenerate => "degenerate",
        }
    }
}

/// Scan result for one power m.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerVerdict {
    pub m: u32,
    pub n_from: u64,
    pub n_to: u64,
    pub min_distance: f64,
    pub argmin: u64,
    /// 1 − ε^m.
    pub floor: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub operator: String,
    pub eps: f64,
    pub horizon: u64,
    pub a: IndexFamily,
    /// max ⌈n_{k+1}/n_k⌉ over A: the M the scan uses.
    pub m_step: Option<u64>,
    /// ⌈max n_k/k⌉, so n_k ≤ M_lemma·k.
    pub m_lemma: Option<u64>,
    pub status: ObstructionStatus,
    pub verdicts: Vec<PowerVerdict>,
    pub note: String,
}

impl ObstructionReport {
    pub fn violations(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.pass).count()
    }
}

/// ‖Tⁿx‖ for n = 0..=horizon, each an upper bound on the exact norm.
pub fn orbit_norms(x: &OrbitVector, horizon: u64, space: SpaceSpec) -> Result<Vec<f64>> {
    match x.op() {
        ShiftSpec::Rolewicz { lambda } => Ok(rolewicz_orbit_norms(x, lambda.norm(), horizon, space)),
        ShiftSpec::MacLane => {
            let sm = suffix_max(x);
            Ok((0..=horizon).map(|n| maclane_norm_upper(x, n, &sm)).collect())
        }
        ShiftSpec::Weighted { .. } => Ok((0..=horizon)
            .map(|n| {
                let top = x.base + x.u.len() as u64;
                let moduli = (1..top.saturating_sub(n).max(1)).map(|j| x.orbit_power_coordinate(n, 1, j).abs());
                space.norm_of_moduli(moduli) * (1.0 + 1e-12)
            })
            .collect()),
        ShiftSpec::Forward => Err(Error::InvalidOperator("forward shift".into())),
    }
}

/// ‖(λB)ⁿx‖ from T_n = |u(n+1)|^p + |λ|^{−p}T_{n+1} (sup analogue for c₀).
fn rolewicz_orbit_norms(x: &OrbitVector, lam: f64, horizon: u64, space: SpaceSpec) -> Vec<f64> {
    let top = x.base + x.u.len() as u64;
    let mut out = vec![0.0; horizon as usize + 1];
    let mut acc = 0.0;
    for n in (0..top.max(horizon + 1)).rev() {
        let a = x.abs_u(n + 1);
        acc = match space {
            SpaceSpec::C0 => a.max(acc / lam),
            SpaceSpec::Lp { p } => a.powf(p) + acc * lam.powf(-p),
            SpaceSpec::TaylorL1 => a + acc / lam,
        };
        if n <= horizon {
            let v = match space {
                SpaceSpec::Lp { p } => acc.powf(1.0 / p),
                _ => acc,
            };
            out[n as usize] = v * (1.0 + 1e-12);
        }
    }
    out
}

/// Σ_{j≤J} |u(j+n)|/j! plus max|u|·2/(J+1)! for the omitted terms.
fn maclane_norm_upper(x: &OrbitVector, n: u64, suffix_max: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut inv_fact = 1.0;
    for j in 0..=MACLANE_TERMS {
        if j > 0 {
            inv_fact /= j as f64;
        }
        s += x.abs_u(j + n) * inv_fact;
    }
    let umax = suffix_max.get((n + MACLANE_TERMS + 1) as usize).copied().unwrap_or(0.0);
    (s + umax * 2.0 * inv_fact / (MACLANE_TERMS + 1) as f64) * (1.0 + 1e-12)
}

/// suffix_max[i] = max_{k ≥ i} |u(k)| for base-0 vectors.
fn suffix_max(x: &OrbitVector) -> Vec<f64> {
    let mut out = vec![0.0f64; x.u.len() + 1];
    for i in (0..x.u.len()).rev() {
        out[i] = out[i + 1].max(x.u[i].norm());
    }
    out
}

fn visit_set(norms: &[f64], eps: f64, horizon: u64) -> IndexFamily {
    let a = (1..=horizon).filter(|&n| norms[n as usize] < eps).collect();
    IndexFamily::new(a, horizon).expect("increasing")
}

fn step_bound(a: &IndexFamily) -> Option<u64> {
    let e = a.elements();
    if e.is_empty() {
        return None;
    }
    Some(e.windows(2).map(|w| w[1].div_ceil(w[0])).max().unwrap_or(1).max(1))
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("need 0 < ε < 1, got {eps}")));
    }
    Ok(())
}

struct Premise {
    a: IndexFamily,
    m_step: Option<u64>,
    m_lemma: Option<u64>,
    status: Option<(ObstructionStatus, String)>,
}

fn premise(x: &OrbitVector, norms: &[f64], eps: f64, horizon: u64) -> Premise {
    let a = visit_set(norms, eps, horizon);
    let m_step = step_bound(&a);
    let m_lemma = linear_growth_bound(&a, u64::MAX).map(|g| g.m);
    let status = if x.top_index().is_none_or(|t| t <= horizon) {
        Some((ObstructionStatus::Degenerate, "orbit vanishes inside the horizon".to_string()))
    } else if a.is_empty() {
        Some((ObstructionStatus::PremiseNotMet, "A is empty".to_string()))
    } else if m_step.is_some_and(|m| m > RATIO_CAP) {
        Some((ObstructionStatus::PremiseNotMet, format!("ratio bound exceeds {RATIO_CAP}")))
    } else {
        None
    };
    Premise { a, m_step, m_lemma, status }
}

fn scan_powers(
    a: &IndexFamily,
    m_range: std::ops::RangeInclusive<u32>,
    horizon: u64,
    eps: f64,
    distance: &dyn Fn(u64, u32) -> f64,
) -> Vec<PowerVerdict> {
    let (first, last) = (a.elements()[0], *a.elements().last().expect("non-empty"));
    m_range
        .map(|m| {
            let n_to = horizon.min(last.saturating_mul(m as u64));
            let (mut best, mut arg) = (f64::INFINITY, first);
            for n in first..=n_to {
                let d = distance(n, m);
                if d < best {
                    best = d;
                    arg = n;
                }
            }
            let floor = 1.0 - eps.powi(m as i32);
            PowerVerdict {
                m,
                n_from: first,
                n_to,
                min_distance: best,
                argmin: arg,
                floor,
                pass: best >= floor - 1e-12,
            }
        })
        .collect()
}

fn finish(
    operator: &str,
    eps: f64,
    horizon: u64,
    pre: Premise,
    m_range: Option<std::ops::RangeInclusive<u32>>,
    distance: &dyn Fn(u64, u32) -> f64,
) -> ObstructionReport {
    let mut rep = ObstructionReport {
        operator: operator.into(),
        eps,
        horizon,
        a: pre.a,
        m_step: pre.m_step,
        m_lemma: pre.m_lemma,
        status: ObstructionStatus::Pass,
        verdicts: Vec::new(),
        note: String::new(),
    };
    if let Some((s, note)) = pre.status {
        rep.status = s;
        rep.note = note;
        return rep;
    }
    let m0 = rep.m_step.expect("non-empty A") as u32;
    let range = m_range.unwrap_or(m0..=m0 + 5);
    if *range.start() < m0 {
        rep.note = format!("powers below M = {m0} are checked but not covered by the argument");
    }
    rep.verdicts = scan_powers(&rep.a, range, horizon, eps, distance);
    if rep.verdicts.iter().any(|v| !v.pass && v.m >= m0) {
        rep.status = ObstructionStatus::Violation;
        rep.note = "distance below 1 − ε^m although A has the ratio bound".into();
    }
    rep
}

/// ‖(λB)ⁿx^m − e₁‖ from below: |c₁ − 1| together with the remaining
/// coordinates |λ|^{−p(m−1)n − pm}·R_{n+1}, R_n = |u(n+1)|^{mp} + |λ|^{−pm}R_{n+1}.
/// Factors below the f64 range are dropped, which only lowers the value.
pub struct RolewiczPowerDistances {
    lambda: C64,
    log2_lam: f64,
    m: u32,
    space: SpaceSpec,
    /// R_{n} for n = 0..len.
    tails: Vec<f64>,
    u: Vec<C64>,
}

impl RolewiczPowerDistances {
    pub fn new(x: &OrbitVector, m: u32, space: SpaceSpec) -> Result<Self> {
        let ShiftSpec::Rolewicz { lambda } = *x.op() else {
            return Err(Error::InvalidOperator("expected a Rolewicz operator".into()));
        };
        let lam = lambda.norm();
        let len = x.u.len() + 1;
        let mut tails = vec![0.0; len + 1];
        for n in (0..len).rev() {
            let a = x.abs_u(n as u64 + 1).powi(m as i32);
            tails[n] = match space {
                SpaceSpec::C0 => a.max(tails[n + 1] / lam.powi(m as i32)),
                SpaceSpec::Lp { p } => a.powf(p) + tails[n + 1] * lam.powf(-p * m as f64),
                SpaceSpec::TaylorL1 => a + tails[n + 1] / lam.powi(m as i32),
            };
        }
        Ok(Self { lambda, log2_lam: lam.log2(), m, space, tails, u: x.u.clone() })
    }

    pub fn distance(&self, n: u64) -> f64 {
        let m = self.m;
        let u1 = self.u.get(n as usize).copied().unwrap_or(C64::new(0.0, 0.0));
        let c1 = LogComplex::from_c64(u1).powi(m as i64).mul(LogComplex::from_parts(
            -((m - 1) as f64) * n as f64 * self.log2_lam,
            -((m - 1) as f64) * n as f64 * self.lambda.arg(),
        ));
        let d1 = (c1.to_c64() - 1.0).norm();
        let r = self.tails.get(n as usize + 1).copied().unwrap_or(0.0);
        let e = -((m - 1) as f64 * n as f64 + m as f64) * self.log2_lam;
        match self.space {
            SpaceSpec::C0 => d1.max((e.exp2()) * r),
            SpaceSpec::Lp { p } => (d1.powf(p) + (p * e).exp2() * r).powf(1.0 / p),
            SpaceSpec::TaylorL1 => d1 + e.exp2() * r,
        }
    }
}

/// For x with A = {n ≤ N : ‖(λB)ⁿx‖ < ε} of ratio bound M, checks
/// ‖(λB)ⁿx^m − e₁‖ ≥ 1 − ε^m over n ∈ [n₁, min(N, m·n_K)] for m ∈ [M, M+5]
/// (or the given range).
pub fn rolewicz_power_obstruction(
    x: &OrbitVector,
    eps: f64,
    horizon: u64,
    space: SpaceSpec,
    m_range: Option<std::ops::RangeInclusive<u32>>,
) -> Result<ObstructionReport> {
    check_eps(eps)?;
    space.validate()?;
    let norms = orbit_norms(x, horizon, space)?;
    let pre = premise(x, &norms, eps, horizon);
    let ms: Vec<u32> = match (&m_range, pre.m_step) {
        (Some(r), _) => r.clone().collect(),
        (None, Some(m)) => (m as u32..=m as u32 + 5).collect(),
        _ => Vec::new(),
    };
    let tables: Vec<(u32, RolewiczPowerDistances)> = if pre.status.is_none() {
        ms.iter().map(|&m| Ok((m, RolewiczPowerDistances::new(x, m, space)?))).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let dist = |n: u64, m: u32| tables.iter().find(|(k, _)| *k == m).expect("table").1.distance(n);
    Ok(finish("rolewicz", eps, horizon, pre, m_range, &dist))
}

/// |Dⁿx^m − e₀|₁ from below: |c₀ − 1| + Σ_{1≤j≤J} |u(j+n)|^m/(j!·(j+n)!^{m−1}).
fn maclane_power_distance(x: &OrbitVector, n: u64, m: u32, log2_umax: f64) -> f64 {
    let c0 = x.orbit_power_coordinate(n, m, 0).to_c64();
    let top = x.base + x.u.len() as u64;
    let mf = m as f64;
    let mut rest = 0.0;
    for j in 1..=MACLANE_TERMS {
        let k = j + n;
        if k >= top {
            break;
        }
        let den = x.log2_weight(j) + (mf - 1.0) * x.log2_weight(k);
        // the bound falls with j, and later terms cannot register
        if mf * log2_umax - den < -1074.0 {
            break;
        }
        let a = x.abs_u(k);
        if a > 0.0 {
            rest += (mf * a.log2() - den).exp2();
        }
    }
    (c0 - 1.0).norm() + rest
}

/// MacLane analogue with the ‖·‖₁ seminorm on Taylor coefficients and target e₀.
pub fn maclane_power_obstruction(
    x: &OrbitVector,
    eps: f64,
    horizon: u64,
    m_range: Option<std::ops::RangeInclusive<u32>>,
) -> Result<ObstructionReport> {
    check_eps(eps)?;
    if !matches!(x.op(), ShiftSpec::MacLane) {
        return Err(Error::InvalidOperator("expected the MacLane operator".into()));
    }
    let norms = orbit_norms(x, horizon, SpaceSpec::TaylorL1)?;
    let pre = premise(x, &norms, eps, horizon);
    let log2_umax = x.u.iter().map(|v| v.norm()).fold(0.0, f64::max).log2();
    Ok(finish("maclane", eps, horizon, pre, m_range, &|n, m| maclane_power_distance(x, n, m, log2_umax)))
}

/// n(n−1)⋯(n−k+1).
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    (n - k + 1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// m·k ≥ n ⇒ ((n)_k)^m ≥ n! for all 1 ≤ k ≤ n ≤ nmax and the smallest such m
/// (larger m only grow the left side), exactly.
pub fn falling_factorial_check(nmax: u64) -> Option<(u64, u64, u32)> {
    for n in 1..=nmax {
        let fact = falling_factorial(n, n);
        for k in 1..=n {
            let m = n.div_ceil(k) as u32;
            if falling_factorial(n, k).pow(m) < fact {
                return Some((n, k, m));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeriesVerdict {
    Divergent,
    Convergent { value: f64 },
    /// Partial sums and a ratio estimate only; not a proof.
    Heuristic { partial_sums: Vec<(u64, f64)>, ratio: f64, likely_convergent: bool },
}

impl SeriesVerdict {
    pub fn is_divergent(&self) -> bool {
        matches!(self, SeriesVerdict::Divergent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightClassification {
    pub p: f64,
    pub m: u32,
    /// Σ_{n≥2} 1/|w(2)⋯w(n)|^{p/m}.
    pub series: SeriesVerdict,
    /// Whether Σ 1/|w(2)⋯w(n)|^p < ∞ (B_w frequently hypercyclic on ℓ_p); `None` if unknown.
    pub fhc: Option<bool>,
    /// m ≥ 2, |w(n)| ≥ 1 throughout, and the series above diverges.
    pub power_obstructed: bool,
}

/// Σ_{n≥2} n^{−s} = ζ(s) − 1 for s > 1 (Euler–Maclaurin at K = 64 through B₆).
pub fn zeta_minus_one(s: f64) -> f64 {
    const K: u64 = 64;
    let head: f64 = (2..K).map(|n| (n as f64).powf(-s)).sum();
    let k = K as f64;
    let t = k.powf(-s);
    head + k * t / (s - 1.0) + 0.5 * t + s * t / k / 12.0 - s * (s + 1.0) * (s + 2.0) * t / k.powi(3) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * t / k.powi(5) / 30240.0
}

/// Exact classification for w(n) = (n/(n−1))^α, whose partial products are n^α:
/// the series is Σ n^{−αp/m}, divergent iff αp/m ≤ 1.
pub fn classify_power_weight(alpha: Rational64, p: Rational64, m: u32) -> Result<WeightClassification> {
    if !alpha.is_positive() || p < Rational64::one() || m == 0 {
        return Err(Error::Precondition("need α > 0, p >= 1, m >= 1".into()));
    }
    let s = alpha * p / Rational64::from(m as i64);
    let series = if s <= Rational64::one() {
        SeriesVerdict::Divergent
    } else {
        SeriesVerdict::Convergent { value: zeta_minus_one(s.to_f64().expect("finite")) }
    };
    let fhc = alpha * p > Rational64::one();
    Ok(WeightClassification {
        p: p.to_f64().expect("finite"),
        m,
        power_obstructed: m >= 2 && series.is_divergent(),
        series,
        fhc: Some(fhc),
    })
}

/// Classification of Σ 1/|w(2)⋯w(n)|^{p/m} for any weight description.
pub fn weight_series_classify(w: &Weights, p: f64, m: u32) -> Result<WeightClassification> {
    SpaceSpec::lp(p)?;
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    let q = p / m as f64;
    let out = |series: SeriesVerdict, fhc: Option<bool>, ge_one: bool| WeightClassification {
        p,
        m,
        power_obstructed: m >= 2 && ge_one && series.is_divergent(),
        series,
        fhc,
    };
    match w {
        Weights::Power { alpha } if *alpha > 0.0 => {
            let s = alpha * q;
            let series = if s <= 1.0 {
                SeriesVerdict::Divergent
            } else {
                SeriesVerdict::Convergent { value: zeta_minus_one(s) }
            };
            Ok(out(series, Some(alpha * p > 1.0), true))
        }
        Weights::Constant { value } => {
            let a = value.norm();
            let series = if a <= 1.0 {
                SeriesVerdict::Divergent
            } else {
                let r = a.powf(-q);
                SeriesVerdict::Convergent { value: r / (1.0 - r) }
            };
            Ok(out(series, Some(a > 1.0), a >= 1.0))
        }
        _ => {
            let ge_one = match w {
                Weights::Table { values, tail } => values.iter().chain([tail]).all(|v| v.norm() >= 1.0),
                _ => false,
            };
            let ladder = [100u64, 1_000, 10_000, 100_000];
            let (mut partial, mut sum, mut log_w) = (Vec::new(), 0.0, 0.0);
            let mut last_terms = (0.0, 0.0);
            for n in 2..=*ladder.last().unwrap() {
                log_w += w.weight(n).norm().log2();
                let t = (-q * log_w).exp2();
                sum += t;
                last_terms = (last_terms.1, t);
                if ladder.contains(&n) {
                    partial.push((n, sum));
                }
            }
            let ratio = if last_terms.0 > 0.0 { last_terms.1 / last_terms.0 } else { 0.0 };
            let growth = partial[3].1 - partial[2].1;
            let likely = ratio < 1.0 - 1e-6 || growth < 1e-9 * partial[3].1.max(1e-300);
            Ok(out(SeriesVerdict::Heuristic { partial_sums: partial, ratio, likely_convergent: likely }, None, ge_one))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BwTime {
    pub n: u64,
    pub distance: f64,
    /// (1−ε)^{1/m}/|w(2)⋯w(n+1)|^{1/m}.
    pub lower_bound: f64,
    pub coordinate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BwReport {
    pub m: u32,
    pub p: f64,
    pub eps: f64,
    pub times: Vec<BwTime>,
    /// Σ_k 1/|w(2)⋯w(n_k+1)|^{p/m}.
    pub weight_sum: f64,
    /// (1−ε)^{p/m}·weight_sum, a lower bound for Σ_k |x(n_k+1)|^p.
    pub forced_mass: f64,
    pub norm_pp: f64,
    /// Every coordinate meets its lower bound and forced_mass ≤ ‖x‖_p^p.
    pub consistent: bool,
}

/// Collects n ≤ N with ‖B_wⁿx^m − e₁‖_p < ε and the coordinate bounds they force.
pub fn power_obstruction_bw(x: &OrbitVector, p: f64, m: u32, horizon: u64, eps: f64) -> Result<BwReport> {
    check_eps(eps)?;
    let space = SpaceSpec::lp(p)?;
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    if !matches!(x.op(), ShiftSpec::Weighted { .. } | ShiftSpec::Rolewicz { .. }) {
        return Err(Error::InvalidOperator("expected a weighted backward shift".into()));
    }
    let top = x.base + x.u.len() as u64;
    let mut times = Vec::new();
    let mut weight_sum = 0.0;
    for n in 1..=horizon.min(top.saturating_sub(2)) {
        let d = x.power_distance_direct(n, m, space);
        if d < eps {
            let lw = x.log2_weight(n + 1);
            let lower_bound = (1.0 - eps).powf(1.0 / m as f64) * (-lw / m as f64).exp2();
            weight_sum += (-lw * p / m as f64).exp2();
            times.push(BwTime { n, distance: d, lower_bound, coordinate: x.coordinate(n + 1).abs() });
        }
    }
    let forced_mass = (1.0 - eps).powf(p / m as f64) * weight_sum;
    let norm_pp = (0..x.u.len() as u64).map(|i| x.coordinate(x.base + i).abs().powf(p)).sum::<f64>();
    let consistent = times.iter().all(|t| t.coordinate >= t.lower_bound * (1.0 - 1e-12))
        && forced_mass <= norm_pp * (1.0 + 1e-12);
    Ok(BwReport { m, p, eps, times, weight_sum, forced_mass, norm_pp, consistent })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupercyclicReport {
    /// ‖α_k(λB)^{n_k}x − z‖.
    pub premise: Vec<f64>,
    /// ‖α_k^m λ^{(m−1)n_k}(λB)^{n_k}x^m − z^m‖.
    pub powers: Vec<f64>,
    /// sup-norm gap between the power sequence and (α_k(λB)^{n_k}x)^m.
    pub identity_residual: f64,
    pub monotone: bool,
    pub reached: bool,
}

/// Given α_k(λB)^{n_k}x → z, evaluates α_k^m λ^{(m−1)n_k}(λB)^{n_k}x^m → z^m.
pub fn supercyclic_power_limit(
    x: &ComplexSeq,
    lambda: C64,
    z: &ComplexSeq,
    approximants: &[(C64, u64)],
    m: u32,
    space: SpaceSpec,
    tol: f64,
) -> Result<SupercyclicReport> {
    let lb = ShiftSpec::rolewicz(lambda)?;
    let xm = power(x, m)?;
    let zm = power(z, m)?;
    let mut rep = SupercyclicReport { premise: Vec::new(), powers: Vec::new(), identity_residual: 0.0, monotone: true, reached: false };
    for &(alpha, n) in approximants {
        if alpha == C64::new(0.0, 0.0) {
            return Err(Error::Rejected("approximant with α_k = 0".into()));
        }
        let pk = apply_shift(&lb, n, x)?.scale(alpha);
        rep.premise.push(norm(&pk.sub(z)?, space));
        let factor = cpow(alpha, m) * cpow(lambda, (m - 1) * n as u32);
        let qk = apply_shift(&lb, n, &xm)?.scale(factor);
        rep.powers.push(norm(&qk.sub(&zm)?, space));
        let direct = power(&pk, m)?;
        let gap = norm(&qk.sub(&direct)?, SpaceSpec::C0) / norm(&direct, SpaceSpec::C0).max(1.0);
        rep.identity_residual = rep.identity_residual.max(gap);
    }
    rep.monotone = rep.powers.windows(2).all(|w| w[1] <= w[0] || w[0] < tol);
    rep.reached = rep.powers.last().is_some_and(|&d| d < tol);
    Ok(rep)
}

/// x = Σ_k 2^{−k²} e_{n_k+1} with n_k = k² + k, and α_k = 1/(λ^{n_k}2^{−k²}),
/// so α_k(λB)^{n_k}x → e₁.
pub fn planted_supercyclic(lambda: C64, count: u32) -> (ComplexSeq, Vec<(C64, u64)>) {
    let mut entries = Vec::new();
    let mut approx = Vec::new();
    for k in 1..=count as u64 {
        let n = k * k + k;
        let s = (-((k * k) as f64)).exp2();
        entries.push((n + 1, C64::new(s, 0.0)));
        approx.push((1.0 / (cpow(lambda, n as u32) * s), n));
    }
    (ComplexSeq::new(1, entries).expect("increasing"), approx)
}

/// CSV row: operator-id, ε, M, m, min-distance, floor, verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub operator_id: String,
    pub eps: f64,
    #[serde(rename = "M")]
    pub m_bound: Option<u64>,
    pub m: Option<u32>,
    pub min_distance: Option<f64>,
    pub floor: Option<f64>,
    pub verdict: String,
}

pub fn verdict_rows(rep: &ObstructionReport) -> Vec<VerdictRow> {
    if rep.verdicts.is_empty() {
        return vec![VerdictRow {
            operator_id: rep.operator.clone(),
            eps: rep.eps,
            m_bound: rep.m_step,
            m: None,
            min_distance: None,
            floor: None,
            verdict: rep.status.name().into(),
        }];
    }
    rep.verdicts
        .iter()
        .map(|v| VerdictRow {
            operator_id: rep.operator.clone(),
            eps: rep.eps,
            m_bound: rep.m_step,
            m: Some(v.m),
            min_distance: Some(v.min_distance),
            floor: Some(v.floor),
            verdict: if v.pass { "pass" } else { "fail" }.into(),
        })
        .collect()
}

/// Exact rational helper for CLI input such as "4/5".
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (
                a.trim().parse().map_err(|e| Error::Parse(format!("{s}: {e}")))?,
                b.trim().parse().map_err(|e| Error::Parse(format!("{s}: {e}")))?,
            );
            if b == 0 {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            Rational64::new(a, b)
        }
        None => Rational64::from_integer(s.parse().map_err(|e| Error::Parse(format!("{s}: {e}")))?),
    };
    if r.is_zero() && s.starts_with('-') {
        return Ok(Rational64::zero());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    const TWO: C64 = C64 { re: 2.0, im: 0.0 };

    fn l2() -> SpaceSpec {
        SpaceSpec::lp(2.0).unwrap()
    }

    fn rolewicz(lambda: C64, u: Vec<C64>) -> OrbitVector {
        OrbitVector::from_normalized(ShiftSpec::rolewicz(lambda).unwrap(), u).unwrap()
    }

    #[test]
    fn orbit_norms_match_direct_shifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lam = c(1.3, 0.8);
        let u: Vec<C64> = (0..60).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let v = rolewicz(lam, u);
        let x = v.to_complex_seq();
        for space in [l2(), SpaceSpec::C0, SpaceSpec::lp(1.0).unwrap()] {
            let norms = orbit_norms(&v, 30, space).unwrap();
            for n in 0..=30u64 {
                let direct = norm(&apply_shift(v.op(), n, &x).unwrap(), space);
                assert!((norms[n as usize] - direct).abs() <= 1e-10 * direct.max(1e-300), "n={n}");
            }
        }
    }

    #[test]
    fn power_distances_match_direct_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lam = c(-1.5, 0.5);
        let u: Vec<C64> = (0..40).map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect();
        let v = rolewicz(lam, u);
        let x = v.to_complex_seq();
        let e1 = ComplexSeq::unit(1, 1).unwrap();
        for space in [l2(), SpaceSpec::C0] {
            for m in 1..=4 {
                let t = RolewiczPowerDistances::new(&v, m, space).unwrap();
                for n in 0..20 {
                    let direct = norm(&apply_shift(v.op(), n, &power(&x, m).unwrap()).unwrap().sub(&e1).unwrap(), space);
                    let fast = t.distance(n);
                    let slow = v.power_distance_direct(n, m, space);
                    assert!((fast - direct).abs() <= 1e-9 * direct.max(1.0), "m={m} n={n}: {fast} vs {direct}");
                    assert!((slow - direct).abs() <= 1e-9 * direct.max(1.0));
                }
            }
        }
    }

    #[test]
    fn geometric_vector_passes() {
        let eps = 0.1;
        // x(k) = (ε/2)λ^{−k}, i.e. u(k) = ε/(2λ)
        let v = rolewicz(TWO, vec![c(eps / 4.0, 0.0); 300]);
        let rep = rolewicz_power_obstruction(&v, eps, 200, l2(), Some(1..=6)).unwrap();
        assert_eq!(rep.a.len(), 200);
        assert_eq!(rep.m_lemma, Some(1));
        assert_eq!(rep.m_step, Some(2));
        assert_eq!(rep.status, ObstructionStatus::Pass, "{rep:?}");
        assert_eq!(rep.verdicts.len(), 6);
    }

    #[test]
    fn degenerate_and_empty_cases() {
        let e1 = OrbitVector::from_seq(ShiftSpec::rolewicz(TWO).unwrap(), &ComplexSeq::unit(1, 1).unwrap()).unwrap();
        let rep = rolewicz_power_obstruction(&e1, 0.1, 100, l2(), None).unwrap();
        assert_eq!(rep.status, ObstructionStatus::Degenerate);
        assert_eq!(rep.a.len(), 100);
        let big = rolewicz(TWO, vec![c(5.0, 0.0); 500]);
        let rep = rolewicz_power_obstruction(&big, 0.1, 100, l2(), None).unwrap();
        assert_eq!(rep.status, ObstructionStatus::PremiseNotMet);
        assert!(rolewicz_power_obstruction(&big, 1.0, 100, l2(), None).is_err());
    }

    #[test]
    fn random_spiky_vectors_respect_the_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut qualified = 0;
        for _ in 0..20 {
            let u: Vec<C64> = (0..1200)
                .map(|_| {
                    let mag = if rng.gen_bool(0.05) { rng.gen_range(0.05..1.5) } else { rng.gen_range(0.0..0.01) };
                    C64::from_polar(mag, rng.gen_range(-3.0..3.0))
                })
                .collect();
            let rep = rolewicz_power_obstruction(&rolewicz(TWO, u), 0.1, 1000, l2(), None).unwrap();
            if rep.status != ObstructionStatus::PremiseNotMet {
                assert_eq!(rep.status, ObstructionStatus::Pass, "{rep:?}");
                qualified += 1;
            }
        }
        assert!(qualified > 10);
    }

    #[test]
    fn maclane_examples() {
        let eps = 0.1;
        // x(k) = (ε/4)/k!
        let v = OrbitVector::from_normalized(ShiftSpec::MacLane, vec![c(eps / 4.0, 0.0); 400]).unwrap();
        let norms = orbit_norms(&v, 10, SpaceSpec::TaylorL1).unwrap();
        let e_sum: f64 = (0..=40u32).map(|j| 1.0 / (1..=j).map(f64::from).product::<f64>()).sum();
        assert!((norms[3] - eps / 4.0 * e_sum).abs() < 1e-12);
        let rep = maclane_power_obstruction(&v, eps, 300, None).unwrap();
        assert_eq!(rep.a.len(), 300);
        assert_eq!(rep.status, ObstructionStatus::Pass, "{rep:?}");
        let e0 = OrbitVector::from_seq(ShiftSpec::MacLane, &ComplexSeq::unit(0, 0).unwrap()).unwrap();
        assert_eq!(maclane_power_obstruction(&e0, eps, 50, None).unwrap().status, ObstructionStatus::Degenerate);
    }

    #[test]
    fn maclane_orbit_matches_direct_derivative() {
        let x = ComplexSeq::from_dense(0, &[c(1.0, 0.0), c(0.5, 0.0), c(0.25, -0.1), c(0.0, 0.125), c(0.0625, 0.0)]);
        let v = OrbitVector::from_seq(ShiftSpec::MacLane, &x).unwrap();
        for n in 0..4 {
            let direct = norm(&apply_shift(&ShiftSpec::MacLane, n, &x).unwrap(), SpaceSpec::TaylorL1);
            let upper = orbit_norms(&v, 4, SpaceSpec::TaylorL1).unwrap()[n as usize];
            assert!(upper >= direct && upper <= direct * (1.0 + 1e-10) + 1e-40);
            let xm = power(&x, 2).unwrap();
            let dm = apply_shift(&ShiftSpec::MacLane, n, &xm).unwrap().sub(&ComplexSeq::unit(0, 0).unwrap()).unwrap();
            let lmax = v.u.iter().map(|z| z.norm()).fold(0.0, f64::max).log2();
            assert!((maclane_power_distance(&v, n, 2, lmax) - norm(&dm, SpaceSpec::TaylorL1)).abs() < 1e-12);
        }
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 2), BigUint::from(20u32));
        assert_eq!(falling_factorial_check(40), None);
    }

    #[test]
    fn weight_examples() {
        let r = |a, b| Rational64::new(a, b);
        let w = classify_power_weight(r(4, 5), r(2, 1), 2).unwrap();
        assert!(w.series.is_divergent() && w.fhc == Some(true) && w.power_obstructed);
        let w = classify_power_weight(r(3, 1), r(1, 1), 2).unwrap();
        match w.series {
            SeriesVerdict::Convergent { value } => {
                // ζ(3/2) − 1
                assert!((value - 1.612_375_348_685_488).abs() < 1e-9, "{value}");
            }
            _ => panic!(),
        }
        assert!(!w.power_obstructed);
        let g = weight_series_classify(&Weights::Constant { value: TWO }, 2.0, 3).unwrap();
        assert!(matches!(g.series, SeriesVerdict::Convergent { .. }));
        assert!(!g.power_obstructed && g.fhc == Some(true));
        assert!((zeta_minus_one(2.0) - (std::f64::consts::PI.powi(2) / 6.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn heuristic_for_tables() {
        let w = Weights::Table { values: vec![TWO; 10], tail: c(1.0, 0.0) };
        let g = weight_series_classify(&w, 1.0, 2).unwrap();
        match g.series {
            SeriesVerdict::Heuristic { likely_convergent, .. } => assert!(!likely_convergent),
            _ => panic!(),
        }
        let w = Weights::Table { values: vec![], tail: c(1.5, 0.0) };
        match weight_series_classify(&w, 1.0, 2).unwrap().series {
            SeriesVerdict::Heuristic { likely_convergent, .. } => assert!(likely_convergent),
            _ => panic!(),
        }
    }

    #[test]
    fn bw_planted_spikes() {
        let (m, p, eps) = (2u32, 2.0, 0.1);
        let op = ShiftSpec::Weighted { weights: Weights::Power { alpha: 2.0 } };
        let mut u = vec![C64::new(0.0, 0.0); 20];
        for n in [3u64, 6, 9] {
            // x(n+1) = W(n+1)^{−1/m} ⇒ u(n+1) = W(n+1)^{1−1/m}
            u[n as usize] = c(((n + 1) as f64).powf(2.0 * (1.0 - 1.0 / m as f64)), 0.0);
        }
        let v = OrbitVector::from_normalized(op, u).unwrap();
        let rep = power_obstruction_bw(&v, p, m, 15, eps).unwrap();
        let ns: Vec<u64> = rep.times.iter().map(|t| t.n).collect();
        assert_eq!(ns, vec![3, 6, 9]);
        for t in &rep.times {
            let want = (1.0 - eps).sqrt() / ((t.n + 1) as f64).powf(2.0 / m as f64);
            assert!((t.lower_bound - want).abs() < 1e-12 * want);
        }
        assert!(rep.consistent);
        let empty = OrbitVector::from_normalized(ShiftSpec::Weighted { weights: Weights::Power { alpha: 2.0 } }, vec![c(0.0, 0.0); 10]).unwrap();
        assert!(power_obstruction_bw(&empty, p, m, 5, eps).unwrap().times.is_empty());
    }

    #[test]
    fn constant_weights_reduce_to_rolewicz() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u: Vec<C64> = (0..50).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let bw = OrbitVector::from_normalized(ShiftSpec::Weighted { weights: Weights::Constant { value: TWO } }, u.clone()).unwrap();
        let rw = rolewicz(TWO, u);
        for m in 1..=3 {
            let t = RolewiczPowerDistances::new(&rw, m, l2()).unwrap();
            for n in 1..30 {
                let a = bw.power_distance_direct(n, m, l2());
                assert!((a - t.distance(n)).abs() < 1e-9 * a.max(1.0));
            }
        }
        let rep = power_obstruction_bw(&bw, 2.0, 2, 40, 0.5).unwrap();
        for t in &rep.times {
            let want = 0.5f64.sqrt() * 2f64.powf(-(t.n as f64) / 2.0);
            assert!((t.lower_bound - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn supercyclic_examples() {
        let (x, approx) = planted_supercyclic(TWO, 10);
        let z = ComplexSeq::unit(1, 1).unwrap();
        let r = supercyclic_power_limit(&x, TWO, &z, &approx, 2, l2(), 1e-6).unwrap();
        assert!(r.monotone && r.reached, "{r:?}");
        assert!(r.identity_residual < 1e-12);
        let r1 = supercyclic_power_limit(&x, TWO, &z, &approx, 1, l2(), 1e-6).unwrap();
        assert_eq!(r1.premise, r1.powers);
        let mut bad = approx.clone();
        bad[0].0 = c(0.0, 0.0);
        assert!(supercyclic_power_limit(&x, TWO, &z, &bad, 2, l2(), 1e-6).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("4/5").unwrap(), Rational64::new(4, 5));
        assert_eq!(parse_rational("3").unwrap(), Rational64::from_integer(3));
        assert!(parse_rational("1/0").is_err());
    }
}
