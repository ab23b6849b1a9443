//! Dyadic classes I(l,m), blocks B(l,r), the families A(l,m) and exact
//! certification of their disjointness and gap conditions.
//!
//! Blocks are doubly exponential in r, so everything past r = 4 is handled
//! as an arithmetic progression described by its endpoints.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bignat::{self, pow2, BigNat};
use crate::density::IndexFamily;
use crate::error::{Error, Result};

/// Brute-force limit for [`dyadic_class_members`].
pub const MEMBER_BOUND_MAX: u64 = 1 << 24;
/// Largest r for which a block is built with exact endpoints (2^{3·2^{r−1}} has
/// 3·2^{r−1} bits).
pub const BLOCK_R_MAX: u32 = 24;
/// Largest r for which a block may be materialised element by element.
pub const MATERIALIZE_R_MAX: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicClassSpec {
    pub l: u32,
    pub m: u32,
}

impl DyadicClassSpec {
    pub fn new(l: u32, m: u32) -> Result<Self> {
        if l == 0 || m == 0 {
            return Err(Error::Precondition(format!("dyadic class needs l, m >= 1 (got {l}, {m})")));
        }
        if l + m > 100 {
            return Err(Error::Precondition(format!("l + m = {} is too large", l + m)));
        }
        Ok(Self { l, m })
    }

    /// ρ = 2^{l+m}, the gap between consecutive members.
    pub fn modulus(&self) -> u128 {
        1u128 << (self.l + self.m)
    }

    /// (2^m − 1)·2^{l−1}, the least member.
    pub fn residue(&self) -> u128 {
        ((1u128 << self.m) - 1) << (self.l - 1)
    }

    /// Members in `[from, to]`.
    pub fn members_between(&self, from: u64, to: u64) -> Vec<u64> {
        let (res, md) = (self.residue(), self.modulus());
        let from = from as u128;
        let first = if from <= res {
            res
        } else {
            res + (from - res).div_ceil(md) * md
        };
        let mut out = Vec::new();
        let mut n = first;
        while n <= to as u128 {
            out.push(n as u64);
            n += md;
        }
        out
    }
}

fn bit(n: u64, j: u32) -> bool {
    j < 64 && (n >> j) & 1 == 1
}

/// Binary digits a₀a₁… of n read as 0^{l−1} 1^m 0 followed by anything.
pub fn matches_dyadic_pattern(n: u64, l: u32, m: u32) -> bool {
    if l == 0 || m == 0 {
        return false;
    }
    (0..l - 1).all(|j| !bit(n, j)) && (l - 1..l - 1 + m).all(|j| bit(n, j)) && !bit(n, l - 1 + m)
}

/// I(l,m) ∩ [0, bound], computed from the bit pattern and from the residue
/// class and cross-checked.
pub fn dyadic_class_members(spec: DyadicClassSpec, bound: u64) -> Result<IndexFamily> {
    if bound > MEMBER_BOUND_MAX {
        return Err(Error::Precondition(format!(
            "bound {bound} exceeds the brute-force range 2^24"
        )));
    }
    let by_pattern: Vec<u64> = (0..=bound)
        .filter(|&n| matches_dyadic_pattern(n, spec.l, spec.m))
        .collect();
    let by_residue = spec.members_between(0, bound);
    if by_pattern != by_residue {
        return Err(Error::Internal(format!(
            "I({},{}) bit pattern and residue class disagree below {bound}",
            spec.l, spec.m
        )));
    }
    IndexFamily::new(by_pattern, bound)
        .map(|f| f.with_descriptor(format!("dyadic:l={},m={}", spec.l, spec.m)))
}

/// Whether (2^{2^r}/m − l) / 2^{3·2^{r−2}} ≥ 1, decided exactly.
pub fn r_min_inequality(l: u32, m: u32, r: u32) -> bool {
    let ml = BigUint::from(l) * BigUint::from(m);
    let top = pow2(1u64 << r);
    if top < ml {
        return false;
    }
    let lhs = top - ml;
    if r == 1 {
        // 4 − ml ≥ m·2^{3/2}  ⇔  (4 − ml)² ≥ 8m²
        let m2 = BigUint::from(m) * BigUint::from(m);
        return &lhs * &lhs >= m2 * 8u32;
    }
    lhs >= BigUint::from(m) << (3u64 << (r - 2))
}

/// Smallest r with [`r_min_inequality`]; the left side is eventually
/// increasing, so later r also qualify.
pub fn r_min(l: u32, m: u32) -> Result<u32> {
    DyadicClassSpec::new(l, m)?;
    (1..=BLOCK_R_MAX)
        .find(|&r| r_min_inequality(l, m, r))
        .ok_or_else(|| Error::Precondition(format!("r_min({l},{m}) exceeds {BLOCK_R_MAX}")))
}

/// An arithmetic progression first, first+step, …, first+(count−1)·step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    #[serde(with = "bignat::decimal")]
    pub first: BigNat,
    pub step: u64,
    #[serde(with = "bignat::decimal")]
    pub count: BigNat,
}

impl Progression {
    pub fn new(first: BigNat, step: u64, count: BigNat) -> Result<Self> {
        if step == 0 && count > BigNat::one() {
            return Err(Error::Precondition("progression with zero step".into()));
        }
        if count.is_zero() {
            return Err(Error::Precondition("empty progression".into()));
        }
        Ok(Self { first, step, count })
    }

    pub fn from_u64(first: u64, step: u64, count: u64) -> Result<Self> {
        Self::new(first.into(), step, count.into())
    }

    pub fn last(&self) -> BigNat {
        &self.first + (&self.count - 1u32) * self.step
    }

    pub fn contains(&self, n: &BigNat) -> bool {
        if n < &self.first || n > &self.last() {
            return false;
        }
        self.step == 0 || ((n - &self.first) % self.step).is_zero()
    }

    /// Smallest element strictly greater than n.
    pub fn successor(&self, n: &BigNat) -> Option<BigNat> {
        if n < &self.first {
            return Some(self.first.clone());
        }
        if self.step == 0 {
            return None;
        }
        let k = (n - &self.first) / self.step + 1u32;
        (k < self.count).then(|| &self.first + k * self.step)
    }

    fn materialize(&self, cap: u64) -> Option<Vec<BigNat>> {
        let c = self.count.to_u64().filter(|&c| c <= cap)?;
        Some((0..c).map(|k| &self.first + BigNat::from(k) * self.step).collect())
    }

    /// Some common element, if any, found by CRT.
    pub fn intersection_witness(&self, other: &Progression) -> Option<BigNat> {
        let lo = (&self.first).max(&other.first).clone();
        let hi = self.last().min(other.last());
        if lo > hi {
            return None;
        }
        if self.step == 0 {
            return other.contains(&self.first).then(|| self.first.clone());
        }
        if other.step == 0 {
            return self.contains(&other.first).then(|| other.first.clone());
        }
        let (s1, s2) = (BigInt::from(self.step), BigInt::from(other.step));
        let (a1, a2) = (BigInt::from(self.first.clone()), BigInt::from(other.first.clone()));
        let eg = s1.extended_gcd(&s2);
        let diff = &a2 - &a1;
        if !(&diff % &eg.gcd).is_zero() {
            return None;
        }
        let lcm = &s1 / &eg.gcd * &s2;
        // x = a1 + s1·t with s1·t ≡ diff (mod s2)
        let t = (&diff / &eg.gcd) * &eg.x;
        let x0 = (&a1 + &s1 * t).mod_floor(&lcm);
        let lo_i = BigInt::from(lo);
        let mut x = &lo_i + (&x0 - &lo_i).mod_floor(&lcm);
        if x < lo_i {
            x += &lcm;
        }
        let x = x.to_biguint()?;
        (x <= hi).then_some(x)
    }
}

/// B(l,r) = {2^{2^r} + 2l, …, 2^{2^r} + 2N l}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub l: u32,
    pub r: u32,
    #[serde(with = "bignat::decimal")]
    pub start: BigNat,
    pub step: u64,
    #[serde(with = "bignat::decimal")]
    pub count: BigNat,
}

/// log₂ of the block's upper limit, 3·2^{r−1}.
pub fn block_upper_exponent(r: u32) -> u64 {
    3u64 << (r - 1)
}

impl BlockSpec {
    pub fn upper(&self) -> BigNat {
        pow2(block_upper_exponent(self.r))
    }

    pub fn first(&self) -> BigNat {
        &self.start + self.step
    }

    pub fn last(&self) -> BigNat {
        &self.start + &self.count * self.step
    }

    /// start + 2(N+1)l ≤ upper < start + 2(N+2)l.
    pub fn verify_invariant(&self) -> bool {
        let up = self.upper();
        let below = &self.start + (&self.count + 1u32) * self.step;
        let above = &self.start + (&self.count + 2u32) * self.step;
        self.step == 2 * self.l as u64 && below <= up && up < above
    }

    pub fn progression(&self) -> Progression {
        Progression {
            first: self.first(),
            step: self.step,
            count: self.count.clone(),
        }
    }

    pub fn contains(&self, n: &BigNat) -> bool {
        self.progression().contains(n)
    }

    /// Every element; only for r ≤ 4.
    pub fn elements(&self) -> Result<Vec<u64>> {
        if self.r > MATERIALIZE_R_MAX {
            return Err(Error::Precondition(format!(
                "block r = {} is too large to materialise",
                self.r
            )));
        }
        let start = self.start.to_u64().expect("r <= 4 fits in u64");
        let count = self.count.to_u64().expect("r <= 4 fits in u64");
        Ok((1..=count).map(|k| start + k * self.step).collect())
    }
}

/// Builds B(l,r) and re-verifies its two-sided invariant.
pub fn block(l: u32, r: u32) -> Result<BlockSpec> {
    if l == 0 || r == 0 {
        return Err(Error::Precondition(format!("block needs l, r >= 1 (got {l}, {r})")));
    }
    if r > BLOCK_R_MAX {
        return Err(Error::Precondition(format!("block r = {r} exceeds {BLOCK_R_MAX}")));
    }
    let start = pow2(1u64 << r);
    let up = pow2(block_upper_exponent(r));
    let step = 2 * l as u64;
    let q = (&up - &start) / step;
    if q < BigNat::from(2u32) {
        return Err(Error::Precondition(format!("block B({l},{r}) is empty")));
    }
    let b = BlockSpec {
        l,
        r,
        start,
        step,
        count: q - 1u32,
    };
    if !b.verify_invariant() {
        return Err(Error::Internal(format!("block B({l},{r}) fails its defining bounds")));
    }
    Ok(b)
}

/// A(l,m) = ⋃ B(l,r) over r ∈ I(l,m), r ≥ r_min(l,m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub l: u32,
    pub m: u32,
    pub r_min: u32,
}

impl FamilySpec {
    pub fn new(l: u32, m: u32) -> Result<Self> {
        Ok(Self { l, m, r_min: r_min(l, m)? })
    }

    pub fn class(&self) -> DyadicClassSpec {
        DyadicClassSpec { l: self.l, m: self.m }
    }

    pub fn rho(&self) -> u128 {
        self.class().modulus()
    }

    /// Block indices r ∈ I(l,m) with r_min ≤ r ≤ r_cap.
    pub fn block_indices(&self, r_cap: u32) -> Vec<u32> {
        if r_cap < self.r_min {
            return Vec::new();
        }
        self.class()
            .members_between(self.r_min as u64, r_cap as u64)
            .into_iter()
            .map(|r| r as u32)
            .collect()
    }

    pub fn blocks(&self, r_cap: u32) -> Result<Vec<BlockSpec>> {
        self.block_indices(r_cap).into_iter().map(|r| block(self.l, r)).collect()
    }

    pub fn labeled(&self, r_cap: u32) -> Result<LabeledFamily> {
        Ok(LabeledFamily {
            l: self.l as u64,
            m: self.m as u64,
            progressions: self.blocks(r_cap)?.iter().map(BlockSpec::progression).collect(),
        })
    }

    pub fn descriptor(&self, r_cap: u32) -> Result<FamilyDescriptor> {
        Ok(FamilyDescriptor {
            l: self.l,
            m: self.m,
            r_min: self.r_min,
            blocks: self
                .blocks(r_cap)?
                .into_iter()
                .map(|b| BlockDescriptor {
                    r: b.r,
                    start: b.start,
                    step: b.step,
                    count: b.count,
                })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDescriptor {
    pub r: u32,
    #[serde(with = "bignat::decimal")]
    pub start: BigNat,
    pub step: u64,
    #[serde(with = "bignat::decimal")]
    pub count: BigNat,
}

/// JSON form of a family: big naturals as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub l: u32,
    pub m: u32,
    pub r_min: u32,
    pub blocks: Vec<BlockDescriptor>,
}

/// A set carrying the label (l,m) used in the gap conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledFamily {
    pub l: u64,
    pub m: u64,
    pub progressions: Vec<Progression>,
}

impl LabeledFamily {
    pub fn label(&self) -> (u64, u64) {
        (self.l, self.m)
    }

    /// Materialised elements ≤ horizon (each progression must be short).
    pub fn to_index_family(&self, horizon: u64) -> Result<IndexFamily> {
        let mut out = Vec::new();
        for p in &self.progressions {
            let elems = p
                .materialize(1 << 26)
                .ok_or_else(|| Error::Precondition("progression too long to materialise".into()))?;
            out.extend(elems.into_iter().filter_map(|n| n.to_u64()).filter(|&n| n <= horizon));
        }
        out.sort_unstable();
        out.dedup();
        IndexFamily::new(out, horizon)
    }
}

/// Which gap condition to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCondition {
    /// n′ ≥ n + l and m n′ ≥ m′(n + l + l′).
    Charcond,
    /// n′ ≥ n + l and m n′ ≥ m′(n + m′ + l + l′).
    Charcond2,
}

impl GapCondition {
    fn offset(self, l: u64, lp: u64, mp: u64) -> u64 {
        match self {
            GapCondition::Charcond => l + lp,
            GapCondition::Charcond2 => mp + l + lp,
        }
    }

    /// Checks the pair n < n′ with n labelled (l,m) and n′ labelled (l′,m′).
    /// Returns the name of the first failing inequality.
    pub fn check_pair(
        self,
        (l, m): (u64, u64),
        (lp, mp): (u64, u64),
        n: &BigNat,
        np: &BigNat,
    ) -> Option<&'static str> {
        if np < &(n + l) {
            return Some("n' >= n + l");
        }
        let c = self.offset(l, lp, mp);
        if np * m < (n + c) * mp {
            return Some(match self {
                GapCondition::Charcond => "n' m >= m' (n + l + l')",
                GapCondition::Charcond2 => "n' m >= m' (n + m' + l + l')",
            });
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Overlap {
        first: (u64, u64),
        second: (u64, u64),
        #[serde(with = "bignat::decimal")]
        witness: BigNat,
    },
    Gap {
        inequality: String,
        label: (u64, u64),
        label_next: (u64, u64),
        #[serde(with = "bignat::decimal")]
        n: BigNat,
        #[serde(with = "bignat::decimal")]
        n_next: BigNat,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: GapCondition,
    pub families: usize,
    pub progressions: usize,
    pub pair_checks: u64,
    pub violation: Option<Violation>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Merge-scan cap for interleaved progressions.
const SCAN_CAP: u64 = 1 << 20;

/// Certifies pairwise disjointness of differently labelled families and the
/// gap condition for every ordered pair n < n′ of elements.
///
/// Both inequalities increase in n′ and decrease in n, so for each n only its
/// successor in each progression matters. Separated progressions reduce to
/// (last, first); a progression against itself reduces to its step;
/// interleaved progressions are merge-scanned and rejected if too long.
pub fn family_conditions_check(
    families: &[LabeledFamily],
    condition: GapCondition,
) -> Result<ConditionReport> {
    let progs: Vec<((u64, u64), &Progression)> = families
        .iter()
        .flat_map(|f| f.progressions.iter().map(move |p| (f.label(), p)))
        .collect();
    let mut report = ConditionReport {
        condition,
        families: families.len(),
        progressions: progs.len(),
        pair_checks: 0,
        violation: None,
    };
    let lasts: Vec<BigNat> = progs.iter().map(|(_, p)| p.last()).collect();

    for i in 0..progs.len() {
        for j in i + 1..progs.len() {
            let ((la, pa), (lb, pb)) = (progs[i], progs[j]);
            if la == lb {
                continue;
            }
            report.pair_checks += 1;
            if let Some(w) = pa.intersection_witness(pb) {
                report.violation = Some(Violation::Overlap {
                    first: la,
                    second: lb,
                    witness: w,
                });
                return Ok(report);
            }
        }
    }

    for i in 0..progs.len() {
        for j in 0..progs.len() {
            let ((la, pa), (lb, pb)) = (progs[i], progs[j]);
            report.pair_checks += 1;
            let fail = if i == j {
                if pa.count <= BigNat::one() {
                    None
                } else {
                    let n = pa.first.clone();
                    let np = &n + pa.step;
                    condition.check_pair(la, la, &n, &np).map(|s| (s, n, np))
                }
            } else if lasts[i] < pb.first {
                let (n, np) = (lasts[i].clone(), pb.first.clone());
                condition.check_pair(la, lb, &n, &np).map(|s| (s, n, np))
            } else if lasts[j] <= pa.first {
                None
            } else {
                scan_interleaved(condition, la, pa, lb, pb, &mut report.pair_checks)?
            };
            if let Some((inequality, n, n_next)) = fail {
                report.violation = Some(Violation::Gap {
                    inequality: inequality.to_string(),
                    label: la,
                    label_next: lb,
                    n,
                    n_next,
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

type Failure = (&'static str, BigNat, BigNat);

fn scan_interleaved(
    condition: GapCondition,
    la: (u64, u64),
    pa: &Progression,
    lb: (u64, u64),
    pb: &Progression,
    checks: &mut u64,
) -> Result<Option<Failure>> {
    let too_long = || Error::Precondition("interleaved progressions too long to scan".into());
    let a = pa.materialize(SCAN_CAP).ok_or_else(too_long)?;
    pb.materialize(SCAN_CAP).ok_or_else(too_long)?;
    for n in &a {
        *checks += 1;
        if let Some(np) = pb.successor(n) {
            if let Some(s) = condition.check_pair(la, lb, n, &np) {
                return Ok(Some((s, n.clone(), np)));
            }
        }
    }
    Ok(None)
}

/// Labelled blocks of A(l,m) for each given (l,m), r ≤ r_cap, checked together.
pub fn check_dyadic_families(
    specs: &[FamilySpec],
    r_cap: u32,
    condition: GapCondition,
) -> Result<ConditionReport> {
    let fams = specs
        .iter()
        .map(|s| s.labeled(r_cap))
        .collect::<Result<Vec<_>>>()?;
    family_conditions_check(&fams, condition)
}

/// 1/(6l·2^ρ), the limit of [`density_lower_bound`] as r → ∞.
pub fn density_limit(l: u32, m: u32) -> f64 {
    1.0 / (6.0 * l as f64 * ((l + m) as f64).exp2().exp2())
}

/// Lower estimate for the share of A(l,m) up to an element of
/// B(l,r), counting only the preceding block B(l, r−ρ):
/// (1/2l)·(log₂(2^{3·2^{s−1}} − 2l) − log₂(2^{2^s} + 2l)) / (3·2^{r−1}), s = r − ρ.
pub fn density_lower_bound(l: u32, m: u32, r: u32) -> Result<f64> {
    let spec = DyadicClassSpec::new(l, m)?;
    let rho = spec.modulus();
    if (r as u128) <= rho {
        return Err(Error::Precondition(format!("need r > rho = {rho} (got r = {r})")));
    }
    let s = r - rho as u32;
    if r > 62 {
        return Err(Error::Precondition(format!("r = {r} exceeds 62")));
    }
    let two_l = 2 * l as i64;
    let hi_exp = block_upper_exponent(s);
    if hi_exp < 63 && (1i64 << hi_exp) <= two_l {
        return Err(Error::Precondition(format!(
            "2^{hi_exp} - 2l is not positive for l = {l}"
        )));
    }
    let num = bignat::log2_pow2_offset(hi_exp, -two_l) - bignat::log2_pow2_offset(1u64 << s, two_l);
    Ok(num / (2.0 * l as f64) / block_upper_exponent(r) as f64)
}

/// Growth profile g(r) = 2^{c·β^r} for small, materialisable analogues of
/// the block construction. Not the construction itself: r_min and the gap
/// conditions must be re-checked on the result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledTower {
    pub c: f64,
    pub beta: f64,
}

impl ScaledTower {
    pub fn new(c: f64, beta: f64) -> Result<Self> {
        if !(c > 0.0 && beta > 1.0 && c.is_finite() && beta.is_finite()) {
            return Err(Error::Precondition(format!("scaled tower needs c > 0, beta > 1 (got {c}, {beta})")));
        }
        Ok(Self { c, beta })
    }

    /// (start, upper) = (⌊g(r)⌋, ⌊g(r)^{3/2}⌋), or None past u64.
    pub fn window(&self, r: u32) -> Option<(u64, u64)> {
        let e = self.c * self.beta.powi(r as i32);
        if 1.5 * e >= 63.0 {
            return None;
        }
        Some((e.exp2() as u64, (1.5 * e).exp2() as u64))
    }

    /// Materialised union of scaled blocks over r ∈ I(l,m) with upper ≤ horizon.
    pub fn family(&self, l: u32, m: u32, horizon: u64) -> Result<IndexFamily> {
        let class = DyadicClassSpec::new(l, m)?;
        let step = 2 * l as u64;
        let mut out = Vec::new();
        for r in class.members_between(1, 64) {
            let Some((start, upper)) = self.window(r as u32) else { break };
            if upper > horizon {
                break;
            }
            let mut n = start + step;
            while n + step <= upper {
                out.push(n);
                n += step;
            }
        }
        IndexFamily::new(out, horizon)
            .map(|f| f.with_descriptor(format!("scaled:l={l},m={m},c={},beta={}", self.c, self.beta)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: u32, m: u32) -> DyadicClassSpec {
        DyadicClassSpec::new(l, m).unwrap()
    }

    #[test]
    fn class_members_examples() {
        assert_eq!(dyadic_class_members(spec(1, 1), 20).unwrap().elements(), &[1, 5, 9, 13, 17]);
        assert_eq!(dyadic_class_members(spec(2, 1), 20).unwrap().elements(), &[2, 10, 18]);
        assert!(dyadic_class_members(spec(1, 1), MEMBER_BOUND_MAX + 1).is_err());
        assert!(DyadicClassSpec::new(0, 1).is_err());
    }

    #[test]
    fn classes_are_disjoint() {
        let a = dyadic_class_members(spec(1, 1), 1 << 16).unwrap();
        let b = dyadic_class_members(spec(1, 2), 1 << 16).unwrap();
        assert!(a.elements().iter().all(|n| !b.contains(*n)));
        let mut seen = vec![false; (1 << 16) + 1];
        for l in 1..8 {
            for m in 1..=8 - l {
                for n in dyadic_class_members(spec(l, m), 1 << 16).unwrap().elements() {
                    assert!(!seen[*n as usize], "{n} in two classes");
                    seen[*n as usize] = true;
                }
            }
        }
    }

    #[test]
    fn smallest_class_members() {
        let want = [((1, 1), 1), ((2, 1), 2), ((1, 2), 3), ((2, 2), 6), ((3, 1), 4), ((1, 3), 7), ((3, 2), 12), ((2, 3), 14), ((3, 3), 28)];
        for ((l, m), r) in want {
            assert_eq!(spec(l, m).residue(), r);
        }
    }

    #[test]
    fn r_min_examples() {
        assert_eq!(r_min(1, 1).unwrap(), 1);
        // r = 2: 16 − 2 = 14 < 2·2³
        assert!(!r_min_inequality(1, 2, 2));
        assert_eq!(r_min(1, 2).unwrap(), 3);
        assert_eq!(r_min(2, 1).unwrap(), 2);
        assert_eq!(r_min(2, 2).unwrap(), 3);
        for l in 1..=4 {
            let rs: Vec<u32> = (1..=8).map(|m| r_min(l, m).unwrap()).collect();
            assert!(rs.windows(2).all(|w| w[0] <= w[1]), "{rs:?}");
        }
    }

    #[test]
    fn r_min_against_float_oracle() {
        for l in 1..=6u32 {
            for m in 1..=6u32 {
                let f = |r: u32| {
                    let e = (r as f64).exp2();
                    (e.exp2() / m as f64 - l as f64) / (0.75 * e).exp2()
                };
                let want = (1..=10).find(|&r| f(r) >= 1.0).unwrap();
                assert_eq!(r_min(l, m).unwrap(), want, "({l},{m})");
            }
        }
    }

    #[test]
    fn block_examples() {
        let b = block(1, 2).unwrap();
        assert_eq!(b.start, BigNat::from(16u32));
        assert_eq!(b.count, BigNat::from(23u32));
        let e = b.elements().unwrap();
        assert_eq!((e[0], *e.last().unwrap(), e.len()), (18, 62, 23));
        let b = block(2, 2).unwrap();
        assert_eq!(b.count, BigNat::from(11u32));
        assert_eq!(b.elements().unwrap().last(), Some(&60));
        let b = block(1, 4).unwrap();
        assert_eq!(b.start, BigNat::from(65536u32));
        assert_eq!(b.count, BigNat::from(((1u64 << 24) - (1 << 16)) / 2 - 1));
        assert!(block(1, 5).unwrap().elements().is_err());
        assert!(block(3, 1).is_err());
    }

    #[test]
    fn block_invariant_for_many_blocks() {
        for l in 1..=5 {
            for r in 2..=12 {
                assert!(block(l, r).unwrap().verify_invariant());
            }
        }
    }

    #[test]
    fn dyadic_families_pass_both_conditions() {
        let specs: Vec<FamilySpec> = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(l, m)| FamilySpec::new(l, m).unwrap())
            .collect();
        let rep = check_dyadic_families(&specs, 6, GapCondition::Charcond).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.progressions, 5);
    }

    #[test]
    fn overlapping_blocks_are_reported() {
        let a = LabeledFamily { l: 1, m: 1, progressions: vec![Progression::from_u64(10, 2, 20).unwrap()] };
        let b = LabeledFamily { l: 2, m: 1, progressions: vec![Progression::from_u64(13, 3, 20).unwrap()] };
        let rep = family_conditions_check(&[a, b], GapCondition::Charcond).unwrap();
        match rep.violation {
            Some(Violation::Overlap { witness, .. }) => assert_eq!(witness, BigNat::from(16u32)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn gap_violations_are_reported() {
        let a = LabeledFamily { l: 1, m: 1, progressions: vec![Progression::from_u64(10, 2, 3).unwrap()] };
        let b = LabeledFamily { l: 2, m: 2, progressions: vec![Progression::from_u64(15, 4, 3).unwrap()] };
        let rep = family_conditions_check(&[a, b], GapCondition::Charcond).unwrap();
        // 15·1 < 2·(14 + 3)
        match rep.violation {
            Some(Violation::Gap { n, n_next, .. }) => {
                assert_eq!((n, n_next), (BigNat::from(14u32), BigNat::from(15u32)))
            }
            v => panic!("{v:?}"),
        }
        let tight = LabeledFamily { l: 3, m: 1, progressions: vec![Progression::from_u64(0, 5, 4).unwrap()] };
        assert!(!family_conditions_check(&[tight], GapCondition::Charcond).unwrap().passed());
    }

    #[test]
    fn interleaved_scan_matches_bruteforce() {
        let a = LabeledFamily { l: 1, m: 1, progressions: vec![Progression::from_u64(100, 6, 10).unwrap()] };
        let b = LabeledFamily { l: 1, m: 2, progressions: vec![Progression::from_u64(103, 6, 10).unwrap()] };
        let rep = family_conditions_check(&[a.clone(), b.clone()], GapCondition::Charcond).unwrap();
        let ea = a.to_index_family(1000).unwrap();
        let eb = b.to_index_family(1000).unwrap();
        let mut brute_ok = true;
        for (xs, lx, ys, ly) in [(&ea, (1, 1), &eb, (1, 2)), (&eb, (1, 2), &ea, (1, 1))] {
            for &n in xs.elements() {
                for &np in ys.elements().iter().filter(|&&k| k > n) {
                    let (n, np) = (BigNat::from(n), BigNat::from(np));
                    brute_ok &= GapCondition::Charcond.check_pair(lx, ly, &n, &np).is_none();
                }
            }
        }
        assert_eq!(rep.passed(), brute_ok);
        assert!(!brute_ok);
    }

    #[test]
    fn crt_witness_matches_bruteforce() {
        for (f1, s1, c1, f2, s2, c2) in [(3, 4, 30, 5, 6, 30), (0, 4, 30, 2, 6, 30), (1, 4, 30, 2, 6, 30), (7, 0, 1, 3, 2, 10), (100, 7, 5, 0, 7, 30)] {
            let p = Progression::from_u64(f1, s1, c1).unwrap();
            let q = Progression::from_u64(f2, s2, c2).unwrap();
            let brute = (0..c1)
                .map(|k| f1 + k * s1)
                .find(|n| (0..c2).any(|k| f2 + k * s2 == *n));
            assert_eq!(p.intersection_witness(&q).map(|w| w.to_u64().unwrap()), brute);
        }
    }

    #[test]
    fn density_bound_examples() {
        let v = density_lower_bound(1, 1, 20).unwrap();
        assert!((v - 1.0 / 96.0).abs() < 0.05 / 96.0, "{v}");
        let v = density_lower_bound(1, 1, 36).unwrap();
        assert!((v * 96.0 - 1.0).abs() < 1e-3);
        assert_eq!(density_limit(2, 1), 1.0 / 3072.0);
        assert!(density_lower_bound(1, 1, 4).is_err());
    }

    #[test]
    fn density_bound_increases_to_limit() {
        for (l, m) in [(1, 1), (2, 1), (1, 2)] {
            let rho = 1u32 << (l + m);
            let ladder: Vec<f64> = (rho + 1..=rho + 20).map(|r| density_lower_bound(l, m, r).unwrap()).collect();
            assert!(ladder.windows(2).all(|w| w[0] <= w[1]), "{ladder:?}");
            assert!(*ladder.last().unwrap() <= density_limit(l, m) * (1.0 + 1e-3));
        }
    }

    #[test]
    fn descriptor_uses_decimal_strings() {
        let d = FamilySpec::new(1, 1).unwrap().descriptor(5).unwrap();
        let j = serde_json::to_value(&d).unwrap();
        assert_eq!(j["r_min"], 1);
        assert_eq!(j["blocks"][1]["start"], "4294967296");
        let back: FamilyDescriptor = serde_json::from_value(j).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn scaled_tower_family_is_materialised() {
        let t = ScaledTower::new(2.0, 1.5).unwrap();
        let f = t.family(1, 1, 1 << 40).unwrap();
        assert!(!f.is_empty());
        assert!(f.elements().windows(2).all(|w| w[1] - w[0] >= 2));
        assert!(ScaledTower::new(1.0, 1.0).is_err());
    }
}
