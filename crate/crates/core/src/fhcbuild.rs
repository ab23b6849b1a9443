//! The A-hypercyclic vector construction and its orbit-error certificate,
//! the necessity targets z_{l,m}, and the power-combination transfer identity.
//!
//! Families are indexed by cells (l, m). Desk-scale systems are synthetic
//! (a round-robin geometric sequence); the dyadic families of [`crate::famgen`]
//! are far too large to build vectors from and only go through the condition
//! checker.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bignat::BigNat;
use crate::density::IndexFamily;
use crate::error::{Error, Result};
use crate::famgen::{family_conditions_check, GapCondition, LabeledFamily, Progression, Violation};
use crate::logcomplex::LogComplex;
use crate::pairing::{pack, unpack, zigzag_decode, zigzag_encode};
use crate::seqspace::{
    apply_shift, cpow, hadamard, mth_root, norm, power, principal_root, ComplexSeq, ShiftSpec,
    SpaceSpec,
};
use crate::C64;

pub type Cell = (u32, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Dyadic,
    GeometricSynthetic,
}

/// Disjoint families A(l,m), l, m ≤ cap, with exact elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleFamilySystem {
    pub cap: u32,
    pub provenance: Provenance,
    pub families: BTreeMap<Cell, Vec<BigNat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellDescriptor {
    pub l: u32,
    pub m: u32,
    pub elements: Vec<String>,
    pub fi2_sum: f64,
    pub fi2_cap: f64,
}

/// 1/(l·2^{l+m}).
pub fn fi2_cap((l, m): Cell) -> f64 {
    1.0 / (l as f64 * ((l + m) as f64).exp2())
}

fn big_to_f64(n: &BigNat) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

impl AdmissibleFamilySystem {
    pub fn empty(cap: u32, provenance: Provenance) -> Self {
        Self { cap, provenance, families: BTreeMap::new() }
    }

    /// Σ_{n∈A(l,m)} |λ|^{−n/m}.
    pub fn fi2_sum(&self, cell: Cell, lambda_abs: f64) -> f64 {
        let lg = lambda_abs.log2();
        self.families
            .get(&cell)
            .map(|ns| ns.iter().map(|n| (-big_to_f64(n) * lg / cell.1 as f64).exp2()).sum())
            .unwrap_or(0.0)
    }

    pub fn fi2_holds(&self, lambda_abs: f64) -> bool {
        self.families
            .keys()
            .all(|&c| self.fi2_sum(c, lambda_abs) * (1.0 + 1e-12) <= fi2_cap(c))
    }

    /// Each element as a one-point progression, labelled by its cell.
    pub fn labeled(&self) -> Vec<LabeledFamily> {
        self.families
            .iter()
            .map(|(&(l, m), ns)| LabeledFamily {
                l: l as u64,
                m: m as u64,
                progressions: ns
                    .iter()
                    .map(|n| Progression::new(n.clone(), 0, 1u32.into()).expect("singleton"))
                    .collect(),
            })
            .collect()
    }

    /// Disjointness and the gap condition, exactly.
    pub fn check(&self, condition: GapCondition) -> Result<Option<Violation>> {
        Ok(family_conditions_check(&self.labeled(), condition)?.violation)
    }

    pub fn cell_of(&self, n: &BigNat) -> Option<Cell> {
        self.families
            .iter()
            .find(|(_, ns)| ns.binary_search(n).is_ok())
            .map(|(&c, _)| c)
    }

    /// The elements ≤ horizon as index sets.
    pub fn materialized(&self, horizon: u64) -> BTreeMap<Cell, IndexFamily> {
        let h = BigNat::from(horizon);
        self.families
            .iter()
            .map(|(&c, ns)| {
                let e = ns.iter().filter(|n| **n <= h).map(|n| n.to_u64().expect("<= horizon")).collect();
                (c, IndexFamily::new(e, horizon).expect("sorted"))
            })
            .collect()
    }

    pub fn descriptor(&self, lambda_abs: f64) -> Vec<CellDescriptor> {
        self.families
            .iter()
            .map(|(&(l, m), ns)| CellDescriptor {
                l,
                m,
                elements: ns.iter().map(|n| n.to_str_radix(10)).collect(),
                fi2_sum: self.fi2_sum((l, m), lambda_abs),
                fi2_cap: fi2_cap((l, m)),
            })
            .collect()
    }
}

fn cells(cap: u32) -> Vec<Cell> {
    (1..=cap).flat_map(|l| (1..=cap).map(move |m| (l, m))).collect()
}

fn assemble(cap: u32, depth: u32, n0: u64, next: &dyn Fn(&BigNat) -> BigNat) -> AdmissibleFamilySystem {
    let cs = cells(cap);
    let mut families: BTreeMap<Cell, Vec<BigNat>> = cs.iter().map(|&c| (c, Vec::new())).collect();
    let mut n = BigNat::from(n0);
    for i in 0..cs.len() * depth as usize {
        if i > 0 {
            n = next(&n);
        }
        families.get_mut(&cs[i % cs.len()]).expect("cell").push(n.clone());
    }
    AdmissibleFamilySystem { cap, provenance: Provenance::GeometricSynthetic, families }
}

/// Round-robin system over [1,cap]² driven by `next`, starting from the
/// smallest n₀ for which (fi2) holds, then checked against (charcond2).
pub fn round_robin_system(
    cap: u32,
    depth: u32,
    lambda: C64,
    next: &dyn Fn(&BigNat) -> BigNat,
) -> Result<AdmissibleFamilySystem> {
    if !(1..=5).contains(&cap) || !(1..=8).contains(&depth) {
        return Err(Error::Precondition(format!("need 1 <= L <= 5 and 1 <= depth <= 8 (got {cap}, {depth})")));
    }
    ShiftSpec::rolewicz(lambda)?;
    let la = lambda.norm();
    let sys = (1..=100_000u64)
        .map(|n0| assemble(cap, depth, n0, next))
        .find(|s| s.fi2_holds(la))
        .ok_or_else(|| Error::Rejected("no start n0 <= 100000 satisfies (fi2)".into()))?;
    if let Some(v) = sys.check(GapCondition::Charcond2)? {
        return Err(Error::Rejected(format!("system violates (charcond2): {v:?}")));
    }
    Ok(sys)
}

/// n_{i+1} = L(n_i + 3L) + 1, assigned round-robin to the cells of [1,L]².
pub fn geometric_admissible_family(cap: u32, depth: u32, lambda: C64) -> Result<AdmissibleFamilySystem> {
    let step = move |n: &BigNat| n * cap + 3 * cap * cap + 1u32;
    round_robin_system(cap, depth, lambda, &step).map_err(|e| match e {
        Error::Rejected(msg) => Error::Internal(msg),
        e => e,
    })
}

/// New (l,m) entry = old (l+m, m) entry; cells with l ≤ m have no preimage
/// and are dropped.
pub fn reindex_shift<T: Clone>(system: &BTreeMap<Cell, T>) -> BTreeMap<Cell, T> {
    system
        .iter()
        .filter(|((l, m), _)| l > m)
        .map(|(&(l, m), v)| ((l - m, m), v.clone()))
        .collect()
}

/// [`reindex_shift`] on labelled families.
pub fn reindex_labeled(fams: &[LabeledFamily]) -> Vec<LabeledFamily> {
    let map: BTreeMap<Cell, LabeledFamily> = fams.iter().map(|f| ((f.l as u32, f.m as u32), f.clone())).collect();
    reindex_shift(&map)
        .into_iter()
        .map(|((l, m), mut f)| {
            f.l = l as u64;
            f.m = m as u64;
            f
        })
        .collect()
}

/// y_l, l ≥ 1: finite Gaussian-rational sequences read off l − 1.
///
/// l − 1 unpacks to (D − 1, s − 1, code) and code to 2s zigzagged integers,
/// giving y(j) = (a_j + i b_j)/D for j = 1..s. Since unpacked components never
/// exceed their source, s ≤ l. Vectors with ‖y‖ > l are scaled onto the
/// sphere of radius l.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseTestSequence {
    pub space: SpaceSpec,
}

impl DenseTestSequence {
    pub fn new(space: SpaceSpec) -> Self {
        Self { space }
    }

    fn raw(l: u64) -> ComplexSeq {
        let head = unpack(l - 1, 3);
        let (d, s) = (head[0] as f64 + 1.0, head[1] + 1);
        let vals = unpack(head[2], 2 * s as usize);
        let entries: Vec<C64> = vals
            .chunks(2)
            .map(|ab| C64::new(zigzag_decode(ab[0]) as f64 / d, zigzag_decode(ab[1]) as f64 / d))
            .collect();
        ComplexSeq::from_dense(1, &entries)
    }

    pub fn y(&self, l: u64) -> ComplexSeq {
        assert!(l >= 1, "test vectors are indexed from 1");
        let y = Self::raw(l);
        let nm = norm(&y, self.space);
        if nm > l as f64 {
            y.scale(C64::new(l as f64 / nm, 0.0))
        } else {
            y
        }
    }

    /// Some l with ‖y_l − z‖ < tol, found by rounding z onto a dyadic grid;
    /// `None` when the index overflows u64.
    pub fn encode(&self, z: &ComplexSeq, tol: f64) -> Option<u64> {
        if z.base() != 1 {
            return None;
        }
        let s = z.top_index().unwrap_or(1);
        for e in 0..40 {
            let d = (1u64 << e) as f64;
            let mut vals = Vec::with_capacity(2 * s as usize);
            for j in 1..=s {
                let v = z.get(j);
                vals.push(zigzag_encode((v.re * d).round() as i64));
                vals.push(zigzag_encode((v.im * d).round() as i64));
            }
            let code = pack(&vals)?;
            let l = pack(&[(1u64 << e) - 1, s - 1, code])?.checked_add(1)?;
            let y = self.y(l);
            if norm(&y.sub(z).ok()?, self.space) < tol {
                return Some(l);
            }
        }
        None
    }
}

/// y_1, …, y_L for one construction; ‖y_l‖ ≤ l and s_l ≤ l.
#[derive(Clone, Debug, PartialEq)]
pub struct TestVectors {
    space: SpaceSpec,
    ys: Vec<ComplexSeq>,
}

impl TestVectors {
    pub fn new(space: SpaceSpec, ys: Vec<ComplexSeq>) -> Result<Self> {
        for (i, y) in ys.iter().enumerate() {
            let l = i as u64 + 1;
            if y.base() != 1 {
                return Err(Error::Precondition("test vectors use base 1".into()));
            }
            if y.top_index().unwrap_or(0) > l {
                return Err(Error::Precondition(format!("y_{l} is supported beyond index {l}")));
            }
            if norm(y, space) > l as f64 * (1.0 + 1e-12) {
                return Err(Error::Precondition(format!("‖y_{l}‖ exceeds {l}")));
            }
        }
        Ok(Self { space, ys })
    }

    /// The first `count` terms of [`DenseTestSequence`].
    pub fn dense(space: SpaceSpec, count: u32) -> Self {
        let d = DenseTestSequence::new(space);
        Self { space, ys: (1..=count as u64).map(|l| d.y(l)).collect() }
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn get(&self, l: u32) -> Result<&ComplexSeq> {
        self.ys
            .get((l as usize).wrapping_sub(1))
            .ok_or_else(|| Error::Precondition(format!("no test vector y_{l}")))
    }

    pub fn support(&self, l: u32) -> Result<u64> {
        Ok(self.get(l)?.top_index().unwrap_or(0))
    }

    /// Every y_l scaled by α (so ‖αy_l‖ may exceed l).
    pub fn scaled_unchecked(&self, alpha: C64) -> Self {
        Self { space: self.space, ys: self.ys.iter().map(|y| y.scale(alpha)).collect() }
    }
}

/// One summand λ^{−n/m} F^n y_l^{1/m}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub l: u32,
    pub m: u32,
    pub n: u64,
}

/// x = Σ_{l,m} Σ_{n∈A(l,m)} λ^{−n/m} F^n y_l^{1/m}, truncated at a horizon.
#[derive(Clone, Debug)]
pub struct ConstructedVector {
    lambda: C64,
    horizon: u64,
    system: AdmissibleFamilySystem,
    tests: TestVectors,
    roots: BTreeMap<Cell, ComplexSeq>,
    terms: Vec<Term>,
    coords: BTreeMap<u64, (usize, u64)>,
    omitted: Vec<(Cell, BigNat)>,
    tail_bound: f64,
}

fn lambda_pow_ratio(lambda: C64, num: i128, den: u32) -> LogComplex {
    // λ^{num/den} on the principal branch of λ^{1/den}
    let q = num as f64 / den as f64;
    LogComplex::from_parts(q * lambda.norm().log2(), q * lambda.arg())
}

/// Assembles x coordinatewise; aborts if two summands share a coordinate.
pub fn build_vector(
    system: &AdmissibleFamilySystem,
    tests: &TestVectors,
    lambda: C64,
    horizon: u64,
) -> Result<ConstructedVector> {
    ShiftSpec::rolewicz(lambda)?;
    if !system.families.is_empty() && tests.len() < system.cap as usize {
        return Err(Error::Precondition(format!(
            "need test vectors y_1..y_{} (got {})",
            system.cap,
            tests.len()
        )));
    }
    let la = lambda.norm();
    let mut roots = BTreeMap::new();
    let mut terms = Vec::new();
    let mut coords: BTreeMap<u64, (usize, u64)> = BTreeMap::new();
    let mut omitted = Vec::new();
    let mut tail = 0.0;
    let h = BigNat::from(horizon);
    for (&(l, m), ns) in &system.families {
        let y = tests.get(l)?;
        let s = y.top_index().unwrap_or(0);
        let root = mth_root(y, m)?;
        for n in ns {
            let fits = n.to_u64().filter(|&n| n.checked_add(s).is_some_and(|e| BigNat::from(e) <= h));
            let Some(nu) = fits else {
                tail += l as f64 * (-big_to_f64(n) * la.log2() / m as f64).exp2();
                omitted.push(((l, m), n.clone()));
                continue;
            };
            let t = terms.len();
            terms.push(Term { l, m, n: nu });
            for (j, v) in root.iter() {
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                if let Some(&(other, _)) = coords.get(&(nu + j)) {
                    return Err(Error::Precondition(format!(
                        "coordinate {} written by {:?} and {:?}",
                        nu + j,
                        terms[other],
                        terms[t]
                    )));
                }
                coords.insert(nu + j, (t, j));
            }
        }
        roots.insert((l, m), root);
    }
    let cv = ConstructedVector {
        lambda,
        horizon,
        system: system.clone(),
        tests: tests.clone(),
        roots,
        terms,
        coords,
        omitted,
        tail_bound: tail,
    };
    let cap: f64 = system.families.keys().map(|&(l, m)| ((l + m) as f64).exp2().recip()).sum();
    let nx = cv.norm();
    if nx > cap + 1e-10 {
        return Err(Error::Internal(format!("‖x‖ = {nx} exceeds Σ 2^-(l+m) = {cap}")));
    }
    Ok(cv)
}

/// Certificate for one orbit point n′ ∈ A(l′,m′).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitErrorReport {
    pub m_prime: u32,
    pub l_prime: u32,
    pub n_prime: u64,
    /// ‖T^{n′}x^{m′} − y_{l′}‖; absent when the orbit window is not materialised.
    pub error: Option<f64>,
    pub bound: f64,
    pub tail: f64,
    pub certified: bool,
}

impl OrbitErrorReport {
    pub fn holds(&self) -> bool {
        self.certified && self.error.is_some_and(|e| e <= self.bound)
    }
}

impl ConstructedVector {
    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn system(&self) -> &AdmissibleFamilySystem {
        &self.system
    }

    pub fn tests(&self) -> &TestVectors {
        &self.tests
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// l·|λ|^{−n/m} summed over summands left out by the horizon.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    /// x(k) = λ^{−n/m} y_l^{1/m}(k − n).
    pub fn coordinate(&self, k: u64) -> LogComplex {
        match self.coords.get(&k) {
            None => LogComplex::ZERO,
            Some(&(t, j)) => {
                let Term { l, m, n } = self.terms[t];
                let r = self.roots[&(l, m)].get(j);
                lambda_pow_ratio(self.lambda, -(n as i128), m).mul(LogComplex::from_c64(r))
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.tests
            .space()
            .norm_of_moduli(self.coords.keys().map(|&k| self.coordinate(k).abs()))
    }

    /// x as an ordinary sequence; coordinates below the f64 range become 0.
    pub fn to_complex_seq(&self) -> ComplexSeq {
        let entries = self
            .coords
            .keys()
            .map(|&k| (k, self.coordinate(k).to_c64()))
            .filter(|(_, v)| *v != C64::new(0.0, 0.0))
            .collect();
        ComplexSeq::new(1, entries).expect("sorted coordinates")
    }

    /// (T^{n′} x^{m′})(j) for j ≥ 1, with exponents combined before rounding:
    /// λ^{n′}(λ^{−n/m} r)^{m′} = λ^{(n′m − nm′)/m} r^{m′}.
    pub fn orbit_point(&self, m_prime: u32, n_prime: u64) -> ComplexSeq {
        let entries = self
            .coords
            .range(n_prime + 1..)
            .map(|(&k, &(t, j))| {
                let Term { l, m, n } = self.terms[t];
                let r = LogComplex::from_c64(self.roots[&(l, m)].get(j)).powi(m_prime as i64);
                let num = n_prime as i128 * m as i128 - n as i128 * m_prime as i128;
                (k - n_prime, lambda_pow_ratio(self.lambda, num, m).mul(r).to_c64())
            })
            .collect();
        ComplexSeq::new(1, entries).expect("sorted coordinates")
    }

    fn omitted_contribution(&self, m_prime: u32, n_prime: u64) -> f64 {
        let lg = self.lambda.norm().log2();
        self.omitted
            .iter()
            .filter(|(_, n)| *n > BigNat::from(n_prime))
            .map(|&((l, m), ref n)| {
                let e = n_prime as f64 - big_to_f64(n) * m_prime as f64 / m as f64;
                let ymax = (l as f64).powf((m_prime as f64 / m as f64).max(1.0));
                (e * lg).exp2() * ymax
            })
            .sum()
    }

    /// Same orbit point through x^{m′} and (λB)^{n′} on [`ComplexSeq`];
    /// accurate only while λ^{n′} and x stay inside the f64 range.
    pub fn orbit_point_direct(&self, m_prime: u32, n_prime: u64) -> Result<ComplexSeq> {
        let xm = power(&self.to_complex_seq(), m_prime)?;
        apply_shift(&ShiftSpec::Rolewicz { lambda: self.lambda }, n_prime, &xm)
    }
}

/// ‖T^{n′}x^{m′} − y_{l′}‖ against C_{m′}|λ|^{−l′} plus the omitted-summand tail.
///
/// Fails with [`Error::Internal`] if a certified point breaks the bound.
pub fn orbit_error(cv: &ConstructedVector, m_prime: u32, l_prime: u32, n_prime: u64) -> Result<OrbitErrorReport> {
    orbit_error_scaled(cv, m_prime, l_prime, n_prime, C64::new(1.0, 0.0))
}

/// [`orbit_error`] for αx^{m′} against αy_{l′}; both the error and the bound
/// scale by |α|.
pub fn orbit_error_scaled(
    cv: &ConstructedVector,
    m_prime: u32,
    l_prime: u32,
    n_prime: u64,
    alpha: C64,
) -> Result<OrbitErrorReport> {
    if alpha == C64::new(0.0, 0.0) {
        return Err(Error::Precondition("scale must be non-zero".into()));
    }
    let n_big = BigNat::from(n_prime);
    if !cv
        .system
        .families
        .get(&(l_prime, m_prime))
        .is_some_and(|ns| ns.binary_search(&n_big).is_ok())
    {
        return Err(Error::Precondition(format!("{n_prime} is not in A({l_prime},{m_prime})")));
    }
    let y = cv.tests.get(l_prime)?;
    let certified = cv.terms.iter().any(|t| t.n == n_prime && (t.l, t.m) == (l_prime, m_prime));
    let tail = cv.omitted_contribution(m_prime, n_prime);
    let bound = alpha.norm() * (constant_cm(cv.lambda.norm(), m_prime)? * cv.lambda.norm().powi(-(l_prime as i32)) + tail);
    let error = if certified {
        let diff = cv.orbit_point(m_prime, n_prime).scale(alpha).sub(&y.scale(alpha))?;
        Some(norm(&diff, cv.tests.space()))
    } else {
        None
    };
    let rep = OrbitErrorReport { m_prime, l_prime, n_prime, error, bound, tail: alpha.norm() * tail, certified };
    if let Some(e) = error {
        if e > bound * (1.0 + 1e-12) {
            return Err(Error::Internal(format!("orbit error {e} exceeds the bound {bound} at {rep:?}")));
        }
    }
    Ok(rep)
}

/// Reports for every element of every cell (materialised or not).
pub fn orbit_error_table(cv: &ConstructedVector) -> Result<Vec<OrbitErrorReport>> {
    let mut out = Vec::new();
    for (&(l, m), ns) in &cv.system.families {
        for n in ns {
            match n.to_u64() {
                Some(n) => out.push(orbit_error(cv, m, l, n)?),
                None => out.push(OrbitErrorReport {
                    m_prime: m,
                    l_prime: l,
                    n_prime: u64::MAX,
                    error: None,
                    bound: f64::INFINITY,
                    tail: f64::INFINITY,
                    certified: false,
                }),
            }
        }
    }
    Ok(out)
}

/// Σ_{l≥1} l^k x^l with the tail past the last term bounded by the ratio test.
fn polylog_neg(k: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut l = 1u64;
    loop {
        let lf = l as f64;
        let t = lf.powi(k as i32) * x.powf(lf);
        sum += t;
        let q = ((lf + 1.0) / lf).powi(k as i32) * x;
        if q < 1.0 && lf * x.ln().abs() > k as f64 {
            // ratios decrease from here on, so the tail is below t·q/(1−q)
            let tail = t * q / (1.0 - q);
            if tail <= 1e-14 * sum {
                return sum + tail;
            }
        }
        l += 1;
    }
}

/// C_{m′} = C·(Σ_{m<m′} Σ_l l^{m′}|λ|^{−l} + Σ_{m≥m′}|λ|^{−m} Σ_l l|λ|^{−l}),
/// C = 1/(1 − |λ|^{−1}).
pub fn constant_cm(lambda_abs: f64, m_prime: u32) -> Result<f64> {
    if !(lambda_abs > 1.0 && lambda_abs.is_finite()) {
        return Err(Error::InvalidOperator(format!("need |λ| > 1, got {lambda_abs}")));
    }
    if m_prime == 0 {
        return Err(Error::ZeroExponent);
    }
    let x = lambda_abs.recip();
    let c = 1.0 / (1.0 - x);
    let li1 = x / ((1.0 - x) * (1.0 - x));
    let high = x.powi(m_prime as i32) / (1.0 - x) * li1;
    let low = if m_prime == 1 { 0.0 } else { (m_prime - 1) as f64 * polylog_neg(m_prime, x) };
    Ok(c * (low + high))
}

/// ε = min(1, |λ|^{−1})/4.
pub fn default_epsilon(lambda_abs: f64) -> f64 {
    lambda_abs.recip().min(1.0) / 4.0
}

fn check_epsilon(lambda: C64, eps: f64) -> Result<()> {
    ShiftSpec::rolewicz(lambda)?;
    if !(eps > 0.0 && 3.0 * eps < lambda.norm().recip().min(1.0)) {
        return Err(Error::Precondition(format!(
            "need 0 < 3ε < min(1, 1/|λ|) (ε = {eps}, |λ| = {})",
            lambda.norm()
        )));
    }
    Ok(())
}

/// z_{l,m} = (|λ|^{lm} + 1) e₁ + 2ε^{lm} Σ_{k=2}^{l+1} e_k.
pub fn necessity_targets(l: u32, m: u32, lambda: C64, eps: f64) -> Result<ComplexSeq> {
    if l == 0 || m == 0 {
        return Err(Error::Precondition("need l, m >= 1".into()));
    }
    check_epsilon(lambda, eps)?;
    let lm = (l * m) as i32;
    let rho = lambda.norm().powi(lm) + 1.0;
    let side = 2.0 * eps.powi(lm);
    let mut entries = vec![(1, C64::new(rho, 0.0))];
    entries.extend((2..=l as u64 + 1).map(|k| (k, C64::new(side, 0.0))));
    ComplexSeq::new(1, entries)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Consequence {
    pub name: String,
    /// Worst coordinate.
    pub index: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// Distance to failure (lhs − rhs for ≥, rhs − lhs for ≤).
    pub slack: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessityReport {
    pub premise_residual: f64,
    pub premise_bound: f64,
    pub premise_holds: bool,
    pub consequences: Vec<Consequence>,
}

impl NecessityReport {
    pub fn all_hold(&self) -> bool {
        self.premise_holds && self.consequences.iter().all(|c| c.holds)
    }
}

fn consequence(name: &str, index: u64, lhs: f64, rhs: f64, at_least: bool) -> Consequence {
    let slack = if at_least { lhs - rhs } else { rhs - lhs };
    Consequence {
        name: name.into(),
        index,
        lhs,
        rhs,
        slack,
        holds: slack >= -1e-12 * lhs.abs().max(rhs.abs()),
    }
}

fn worst<I: IntoIterator<Item = Consequence>>(it: I) -> Option<Consequence> {
    it.into_iter().min_by(|a, b| a.slack.total_cmp(&b.slack))
}

/// Given ‖(λB)^n x^m − z_{l,m}‖ ≤ ε^{lm}, checks the coordinate bounds it forces:
/// (ix) |x(n+1)| ≥ |λ|^{l−n/m};
/// (ix2) |x(k)| ≤ |λ|^{−l−n/m} for k ≥ n+2;
/// (ix3) |x(k)| ≥ ε^l|λ|^{−n/m} for n+2 ≤ k ≤ n+l+1;
/// (ix4) |x(n+2)| ≤ 3^{1/m}ε^l|λ|^{−n/m}.
pub fn necessity_consequences(
    x: &ComplexSeq,
    m: u32,
    n: u64,
    l: u32,
    lambda: C64,
    eps: f64,
    space: SpaceSpec,
) -> Result<NecessityReport> {
    let z = necessity_targets(l, m, lambda, eps)?;
    if x.base() != 1 {
        return Err(Error::BaseMismatch { left: x.base(), right: 1 });
    }
    let orbit = apply_shift(&ShiftSpec::Rolewicz { lambda }, n, &power(x, m)?)?;
    let premise_residual = norm(&orbit.sub(&z)?, space);
    let premise_bound = eps.powi((l * m) as i32);
    let premise_holds = premise_residual <= premise_bound;
    let mut report = NecessityReport { premise_residual, premise_bound, premise_holds, consequences: Vec::new() };
    if !premise_holds {
        return Ok(report);
    }
    let la = lambda.norm();
    let (lf, nm) = (l as f64, n as f64 / m as f64);
    let at = |k: u64| x.get(k).norm();
    let cs = &mut report.consequences;
    cs.push(consequence("ix", n + 1, at(n + 1), la.powf(lf - nm), true));
    let ix2_rhs = la.powf(-lf - nm);
    let beyond = x.iter().map(|(k, _)| k).filter(|&k| k >= n + 2).chain(std::iter::once(n + 2));
    cs.extend(worst(beyond.map(|k| consequence("ix2", k, at(k), ix2_rhs, false))));
    let ix3_rhs = eps.powi(l as i32) * la.powf(-nm);
    cs.extend(worst((n + 2..=n + l as u64 + 1).map(|k| consequence("ix3", k, at(k), ix3_rhs, true))));
    let ix4_rhs = 3f64.powf(1.0 / m as f64) * eps.powi(l as i32) * la.powf(-nm);
    cs.push(consequence("ix4", n + 2, at(n + 2), ix4_rhs, false));
    Ok(report)
}

/// A vector meeting the premise with residual δ: x(n+j) = (λ^{−n}(z + δ)(j))^{1/m}.
pub fn premise_vector(l: u32, m: u32, n: u64, lambda: C64, eps: f64, delta: &ComplexSeq) -> Result<ComplexSeq> {
    let w = necessity_targets(l, m, lambda, eps)?.add(delta)?;
    let inv = cpow(lambda.inv(), n as u32);
    let entries = w
        .iter()
        .filter(|(_, v)| *v != C64::new(0.0, 0.0))
        .map(|(j, v)| (n + j, principal_root(inv * v, m)))
        .collect();
    ComplexSeq::new(1, entries)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    /// sup-norm of the two sides' difference, relative to max(1, scale).
    pub residual: f64,
    pub scale: f64,
    /// ‖Σ_{ν>m} (α_ν/α_m) B^n x₀^{ν−m}‖.
    pub correction_norm: f64,
}

/// Both sides of
/// (λB)^n(x₀^m + Σ β_ν x₀^ν) − (λB)^n x₀^m = (λB)^n(x₀^m) ⊙ Σ β_ν B^n x₀^{ν−m},
/// β_ν = α_ν/α_m, for coefficients α_m, …, α_N given in order.
pub fn power_combo_transfer(
    x0: &ComplexSeq,
    alphas: &[C64],
    m: u32,
    lambda: C64,
    n: u64,
    space: SpaceSpec,
) -> Result<TransferReport> {
    let lb = ShiftSpec::rolewicz(lambda)?;
    let a_m = *alphas.first().ok_or_else(|| Error::Precondition("no coefficients".into()))?;
    if a_m == C64::new(0.0, 0.0) {
        return Err(Error::Precondition("leading coefficient α_m must be non-zero".into()));
    }
    let xm = power(x0, m)?;
    let mut combo = xm.clone();
    let mut corr = ComplexSeq::zero(x0.base());
    for (i, &a) in alphas.iter().enumerate().skip(1) {
        let nu = m + i as u32;
        let beta = a / a_m;
        combo = combo.add(&power(x0, nu)?.scale(beta))?;
        let shifted = apply_shift(&ShiftSpec::backward(), n, &power(x0, nu - m)?)?;
        corr = corr.add(&shifted.scale(beta))?;
    }
    let lhs = apply_shift(&lb, n, &combo)?.sub(&apply_shift(&lb, n, &xm)?)?;
    let rhs = hadamard(&apply_shift(&lb, n, &xm)?, &corr)?;
    let scale = norm(&lhs, SpaceSpec::C0).max(norm(&rhs, SpaceSpec::C0));
    let residual = norm(&lhs.sub(&rhs)?, SpaceSpec::C0) / scale.max(1.0);
    Ok(TransferReport { residual, scale, correction_norm: norm(&corr.normalized(), space) })
}
