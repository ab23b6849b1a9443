//! Finitely supported complex sequences, the norms of ℓ_p, c₀ and the Taylor
//! seminorm ‖·‖₁, coordinatewise products and roots, and the shift operators.
//!
//! Sequences are sparse: a sorted list of `(index, value)` pairs above an
//! index base. Base 1 is used for ℓ_p and c₀, base 0 for Taylor coefficients.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// A finitely supported complex sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqFile", into = "SeqFile")]
pub struct ComplexSeq {
    base: u64,
    entries: Vec<(u64, C64)>,
    bound: u64,
}

impl ComplexSeq {
    /// Builds a sequence from strictly increasing entries, all at or above `base`.
    pub fn new(base: u64, entries: Vec<(u64, C64)>) -> Result<Self> {
        let mut prev: Option<u64> = None;
        for &(k, _) in &entries {
            if k < base || prev.is_some_and(|p| p >= k) {
                return Err(Error::BadIndex { base, index: k });
            }
            prev = Some(k);
        }
        let bound = prev.unwrap_or(base);
        Ok(Self {
            base,
            entries,
            bound,
        })
    }

    /// Like [`ComplexSeq::new`] but with an explicit support bound.
    pub fn with_bound(base: u64, entries: Vec<(u64, C64)>, bound: u64) -> Result<Self> {
        let mut s = Self::new(base, entries)?;
        if bound < s.bound {
            return Err(Error::Precondition(format!(
                "support bound {bound} is below the largest index {}",
                s.bound
            )));
        }
        s.bound = bound;
        Ok(s)
    }

    pub fn zero(base: u64) -> Self {
        Self {
            base,
            entries: Vec::new(),
            bound: base,
        }
    }

    /// The unit vector e_n.
    pub fn unit(base: u64, n: u64) -> Result<Self> {
        Self::new(base, vec![(n, C64::new(1.0, 0.0))])
    }

    /// Dense values placed at indices `base, base+1, …`; zeros are dropped.
    pub fn from_dense(base: u64, values: &[C64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != C64::new(0.0, 0.0))
            .map(|(i, v)| (base + i as u64, *v))
            .collect();
        let mut s = Self::new(base, entries).expect("dense indices are increasing");
        s.bound = s.bound.max(base + values.len().saturating_sub(1) as u64);
        s
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn entries(&self) -> &[(u64, C64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every stored value is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| *v == C64::new(0.0, 0.0))
    }

    /// Coordinate at index `k` (zero when not stored).
    pub fn get(&self, k: u64) -> C64 {
        match self.entries.binary_search_by_key(&k, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Largest index carrying a non-zero value.
    pub fn top_index(&self) -> Option<u64> {
        self.entries
            .iter()
            .rev()
            .find(|(_, v)| *v != C64::new(0.0, 0.0))
            .map(|&(k, _)| k)
    }

    /// Drops explicitly stored zeros.
    pub fn normalized(&self) -> Self {
        Self {
            base: self.base,
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|(_, v)| *v != C64::new(0.0, 0.0))
                .collect(),
            bound: self.bound,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            base: self.base,
            entries: self.entries.iter().map(|&(k, v)| (k, c * v)).collect(),
            bound: self.bound,
        }
    }

    pub fn map_values(&self, mut f: impl FnMut(u64, C64) -> C64) -> Self {
        Self {
            base: self.base,
            entries: self.entries.iter().map(|&(k, v)| (k, f(k, v))).collect(),
            bound: self.bound,
        }
    }

    fn merge_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        check_base(self, other)?;
        let zero = C64::new(0.0, 0.0);
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map(|e| e.0).unwrap_or(u64::MAX);
            let kb = b.get(j).map(|e| e.0).unwrap_or(u64::MAX);
            if ka == kb {
                out.push((ka, f(a[i].1, b[j].1)));
                i += 1;
                j += 1;
            } else if ka < kb {
                out.push((ka, f(a[i].1, zero)));
                i += 1;
            } else {
                out.push((kb, f(zero, b[j].1)));
                j += 1;
            }
        }
        Ok(Self {
            base: self.base,
            entries: out,
            bound: self.bound.max(other.bound),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.merge_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.merge_with(other, |a, b| a - b)
    }

    /// Indices and values in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.entries.iter().copied()
    }

    /// True when both sequences carry the same non-zero coordinates bit for bit.
    pub fn same_support_values(&self, other: &Self) -> bool {
        self.base == other.base && self.normalized().entries == other.normalized().entries
    }
}

fn check_base(x: &ComplexSeq, y: &ComplexSeq) -> Result<()> {
    if x.base != y.base {
        return Err(Error::BaseMismatch {
            left: x.base,
            right: y.base,
        });
    }
    Ok(())
}

/// Wire form: `{"base": int, "entries": [[index, re, im], …]}` with decimal-string indices.
#[derive(Serialize, Deserialize)]
struct SeqFile {
    base: u64,
    entries: Vec<(String, f64, f64)>,
}

impl TryFrom<SeqFile> for ComplexSeq {
    type Error = Error;

    fn try_from(f: SeqFile) -> Result<Self> {
        let entries = f
            .entries
            .into_iter()
            .map(|(k, re, im)| {
                k.trim()
                    .parse::<u64>()
                    .map(|k| (k, C64::new(re, im)))
                    .map_err(|e| Error::Parse(format!("index {k:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexSeq::new(f.base, entries)
    }
}

impl From<ComplexSeq> for SeqFile {
    fn from(s: ComplexSeq) -> Self {
        SeqFile {
            base: s.base,
            entries: s
                .entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.re, v.im))
                .collect(),
        }
    }
}

/// Which norm governs a computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Lp { p: f64 },
    C0,
    TaylorL1,
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidSpace(format!("ℓ_p needs finite p >= 1, got {p}")));
        }
        Ok(SpaceSpec::Lp { p })
    }

    pub fn validate(&self) -> Result<()> {
        if let SpaceSpec::Lp { p } = *self {
            SpaceSpec::lp(p)?;
        }
        Ok(())
    }

    /// Norm of a list of moduli, summed in the given order.
    pub fn norm_of_moduli(&self, moduli: impl IntoIterator<Item = f64>) -> f64 {
        match *self {
            SpaceSpec::C0 => moduli.into_iter().fold(0.0, f64::max),
            SpaceSpec::TaylorL1 => moduli.into_iter().collect::<CompensatedSum>().value(),
            SpaceSpec::Lp { p } if p == 1.0 => {
                moduli.into_iter().collect::<CompensatedSum>().value()
            }
            SpaceSpec::Lp { p } => {
                let m: Vec<f64> = moduli.into_iter().collect();
                let scale = m.iter().copied().fold(0.0, f64::max);
                if scale == 0.0 || !scale.is_finite() {
                    return scale;
                }
                let s = m
                    .iter()
                    .map(|a| (a / scale).powf(p))
                    .collect::<CompensatedSum>()
                    .value();
                scale * s.powf(1.0 / p)
            }
        }
    }

    /// Norm of the dual space, applied to functional coefficients.
    pub fn dual_norm_of_moduli(&self, moduli: impl IntoIterator<Item = f64>) -> f64 {
        match *self {
            SpaceSpec::C0 => SpaceSpec::TaylorL1.norm_of_moduli(moduli),
            SpaceSpec::TaylorL1 => SpaceSpec::C0.norm_of_moduli(moduli),
            SpaceSpec::Lp { p } if p == 1.0 => SpaceSpec::C0.norm_of_moduli(moduli),
            SpaceSpec::Lp { p } => SpaceSpec::Lp { p: p / (p - 1.0) }.norm_of_moduli(moduli),
        }
    }
}

/// Norm over the support, accumulated in ascending index order.
pub fn norm(x: &ComplexSeq, s: SpaceSpec) -> f64 {
    s.norm_of_moduli(x.entries.iter().map(|(_, v)| v.norm()))
}

/// Coordinatewise product; the support is the intersection of the supports.
pub fn hadamard(x: &ComplexSeq, y: &ComplexSeq) -> Result<ComplexSeq> {
    check_base(x, y)?;
    let (a, b) = (&x.entries, &y.entries);
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 * b[j].1));
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    Ok(ComplexSeq {
        base: x.base,
        entries: out,
        bound: x.bound.min(y.bound),
    })
}

/// `z^m` by binary powering; `m = 2` is the single product `z·z`.
pub fn cpow(z: C64, m: u32) -> C64 {
    let mut acc: Option<C64> = None;
    let mut base = z;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(a) => a * base,
                None => base,
            });
        }
        e >>= 1;
        if e > 0 {
            base = base * base;
        }
    }
    acc.unwrap_or(C64::new(1.0, 0.0))
}

/// Coordinatewise m-th power.
pub fn power(x: &ComplexSeq, m: u32) -> Result<ComplexSeq> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    Ok(x.map_values(|_, v| cpow(v, m)))
}

/// Principal m-th root: argument in (−π/m, π/m].
pub fn principal_root(z: C64, m: u32) -> C64 {
    if z == C64::new(0.0, 0.0) {
        return z;
    }
    if m == 1 {
        return z;
    }
    let mut theta = z.arg();
    if theta <= -PI {
        theta = PI;
    }
    C64::from_polar(z.norm().powf(1.0 / m as f64), theta / m as f64)
}

/// Coordinatewise principal m-th root.
pub fn mth_root(y: &ComplexSeq, m: u32) -> Result<ComplexSeq> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    Ok(y.map_values(|_, v| principal_root(v, m)))
}

/// Weight sequences for backward shifts `B_w`, indexed from 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weights {
    /// w(n) = c for every n.
    Constant { value: C64 },
    /// w(n) = (n/(n−1))^α, whose partial products telescope to (b/a)^α.
    Power { alpha: f64 },
    /// w(2), w(3), … explicitly, then `tail` forever.
    Table { values: Vec<C64>, tail: C64 },
}

impl Weights {
    pub fn weight(&self, n: u64) -> C64 {
        match self {
            Weights::Constant { value } => *value,
            Weights::Power { alpha } => {
                C64::new((n as f64 / (n as f64 - 1.0)).powf(*alpha), 0.0)
            }
            Weights::Table { values, tail } => {
                let i = n.checked_sub(2).map(|i| i as usize);
                i.and_then(|i| values.get(i)).copied().unwrap_or(*tail)
            }
        }
    }

    /// w(from+1)·w(from+2)⋯w(to) for `from < to` (1 when `from == to`).
    pub fn partial_product(&self, from: u64, to: u64) -> C64 {
        match self {
            Weights::Power { alpha } if from >= 1 => {
                C64::new((to as f64 / from as f64).powf(*alpha), 0.0)
            }
            Weights::Constant { value } => cpow(*value, (to - from) as u32),
            _ => ((from + 1)..=to).fold(C64::new(1.0, 0.0), |acc, n| acc * self.weight(n)),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = match self {
            Weights::Constant { value } => *value == C64::new(0.0, 0.0),
            Weights::Power { alpha } => !alpha.is_finite(),
            Weights::Table { values, tail } => values
                .iter()
                .chain(std::iter::once(tail))
                .any(|w| *w == C64::new(0.0, 0.0) || !w.re.is_finite() || !w.im.is_finite()),
        };
        if bad {
            return Err(Error::InvalidOperator("weights must be finite and non-zero".into()));
        }
        Ok(())
    }
}

/// The operators acting on sequences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftSpec {
    /// λB with |λ| > 1.
    Rolewicz { lambda: C64 },
    /// B_w: result(k) = w(k+1) x(k+1).
    Weighted { weights: Weights },
    /// Differentiation on Taylor coefficients (weights w_n = n, base 0).
    MacLane,
    /// F: result(k+1) = x(k).
    Forward,
}

impl ShiftSpec {
    pub fn rolewicz(lambda: C64) -> Result<Self> {
        let s = ShiftSpec::Rolewicz { lambda };
        s.validate()?;
        Ok(s)
    }

    /// The plain backward shift B.
    pub fn backward() -> Self {
        ShiftSpec::Weighted {
            weights: Weights::Constant {
                value: C64::new(1.0, 0.0),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ShiftSpec::Rolewicz { lambda } if lambda.norm() <= 1.0 || !lambda.norm().is_finite() => {
                Err(Error::InvalidOperator(format!("Rolewicz operator needs |λ| > 1, got {lambda}")))
            }
            ShiftSpec::Weighted { weights } => weights.validate(),
            _ => Ok(()),
        }
    }

    /// Backward operators whose weights are identically one.
    fn is_plain_backward(&self) -> bool {
        match self {
            ShiftSpec::Rolewicz { lambda } => *lambda == C64::new(1.0, 0.0),
            ShiftSpec::Weighted {
                weights: Weights::Constant { value },
            } => *value == C64::new(1.0, 0.0),
            _ => false,
        }
    }
}

/// (k+1)(k+2)⋯(k+n), exact in integers while it fits, floating point afterwards.
pub fn rising_from(k: u64, n: u64) -> f64 {
    let mut exact: Option<u128> = Some(1);
    let mut approx = 1.0f64;
    for i in 1..=n {
        let f = k + i;
        exact = exact.and_then(|e| e.checked_mul(f as u128));
        approx *= f as f64;
    }
    match exact {
        Some(e) => e as f64,
        None => approx,
    }
}

/// Applies `op^n` to `x`.
pub fn apply_shift(op: &ShiftSpec, n: u64, x: &ComplexSeq) -> Result<ComplexSeq> {
    op.validate().or_else(|e| if op.is_plain_backward() { Ok(()) } else { Err(e) })?;
    if n == 0 {
        return Ok(x.clone());
    }
    if let ShiftSpec::Forward = op {
        return Ok(ComplexSeq {
            base: x.base,
            entries: x.entries.iter().map(|&(k, v)| (k + n, v)).collect(),
            bound: x.bound + n,
        });
    }
    if matches!(op, ShiftSpec::MacLane) && x.base != 0 {
        return Err(Error::InvalidOperator(
            "the MacLane operator acts on Taylor coefficients (base 0)".into(),
        ));
    }
    let base = x.base;
    let lambda_n = match op {
        ShiftSpec::Rolewicz { lambda } => cpow(*lambda, n as u32),
        _ => C64::new(1.0, 0.0),
    };
    let entries = x
        .entries
        .iter()
        .filter(|(k, _)| *k >= base + n)
        .map(|&(src, v)| {
            let k = src - n;
            let factor = match op {
                ShiftSpec::Rolewicz { .. } => lambda_n,
                ShiftSpec::Weighted { weights } => weights.partial_product(k, k + n),
                ShiftSpec::MacLane => C64::new(rising_from(k, n), 0.0),
                ShiftSpec::Forward => unreachable!(),
            };
            (k, factor * v)
        })
        .collect();
    Ok(ComplexSeq {
        base,
        entries,
        bound: x.bound.saturating_sub(n).max(base),
    })
}

/// Checks `op^n(x⊙y) = op^n(x)⊙op^n(y)` exactly on supports.
///
/// Only the plain backward shift and the forward shift are multiplicative;
/// other operators are rejected with [`Error::NotMultiplicative`].
pub fn shift_is_multiplicative_check(
    op: &ShiftSpec,
    n: u64,
    x: &ComplexSeq,
    y: &ComplexSeq,
) -> Result<bool> {
    if !(op.is_plain_backward() || matches!(op, ShiftSpec::Forward)) {
        return Err(Error::NotMultiplicative(format!("{op:?}")));
    }
    let lhs = apply_shift(op, n, &hadamard(x, y)?)?;
    let rhs = hadamard(&apply_shift(op, n, x)?, &apply_shift(op, n, y)?)?;
    Ok(lhs.same_support_values(&rhs))
}

/// Sup-norm residual of `(λB)^n(x⊙y) = ((λB)^n x)⊙(B^n y)`.
pub fn rolewicz_factorization_residual(
    lambda: C64,
    n: u64,
    x: &ComplexSeq,
    y: &ComplexSeq,
) -> Result<f64> {
    let lb = ShiftSpec::Rolewicz { lambda };
    let lhs = apply_shift(&lb, n, &hadamard(x, y)?)?;
    let rhs = hadamard(&apply_shift(&lb, n, x)?, &apply_shift(&ShiftSpec::backward(), n, y)?)?;
    Ok(norm(&lhs.sub(&rhs)?, SpaceSpec::C0))
}
