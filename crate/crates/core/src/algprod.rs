//! Banach-algebra products on ℓ_p and c₀: the rank-one φ-product, its
//! commutative variant, and the × product built from functionals φ_r on the
//! split basis x_l = e_{2l−1}, a_r = e_{2r}.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::{unpack_balanced, unpair, zigzag_decode};
use crate::seqspace::{norm, ComplexSeq, SpaceSpec};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// x ↦ Σ coeff(k)·x(k).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    coefficients: ComplexSeq,
    space: SpaceSpec,
    dual_norm: f64,
}

impl Functional {
    pub fn new(coefficients: ComplexSeq, space: SpaceSpec) -> Result<Self> {
        space.validate()?;
        if !matches!(space, SpaceSpec::Lp { .. } | SpaceSpec::C0) || coefficients.base() != 1 {
            return Err(Error::InvalidSpace("functionals act on ℓ_p or c₀ with base 1".into()));
        }
        let dual_norm = space.dual_norm_of_moduli(coefficients.iter().map(|(_, v)| v.norm()));
        Ok(Self { coefficients, space, dual_norm })
    }

    /// The k-th coordinate functional.
    pub fn coordinate(k: u64, space: SpaceSpec) -> Result<Self> {
        Self::new(ComplexSeq::unit(1, k)?, space)
    }

    pub fn coefficients(&self) -> &ComplexSeq {
        &self.coefficients
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    /// Operator norm, from the dual sequence norm.
    pub fn norm(&self) -> f64 {
        self.dual_norm
    }

    pub fn apply(&self, x: &ComplexSeq) -> Result<C64> {
        if x.base() != 1 {
            return Err(Error::BaseMismatch { left: x.base(), right: 1 });
        }
        Ok(self.coefficients.iter().map(|(k, c)| c * x.get(k)).sum())
    }
}

/// y * x = φ(y)·x.
pub fn phi_product(phi: &Functional, y: &ComplexSeq, x: &ComplexSeq) -> Result<ComplexSeq> {
    Ok(x.scale(phi.apply(y)?).normalized())
}

/// x^j under the φ-product, by repeated left multiplication.
pub fn phi_power(phi: &Functional, x: &ComplexSeq, j: u32) -> Result<ComplexSeq> {
    if j == 0 {
        return Err(Error::ZeroExponent);
    }
    let mut acc = x.clone();
    for _ in 1..j {
        acc = phi_product(phi, x, &acc)?;
    }
    Ok(acc)
}

/// ‖x^j − φ(x)^{j−1}x‖ relative to ‖x^j‖ ∨ 1.
pub fn phi_power_law_residual(phi: &Functional, x: &ComplexSeq, j: u32) -> Result<f64> {
    let lhs = phi_power(phi, x, j)?;
    let rhs = x.scale(phi.apply(x)?.powu(j - 1));
    let s = phi.space();
    Ok(norm(&lhs.sub(&rhs)?, s) / norm(&lhs, s).max(1.0))
}

/// (x, y) ↦ φ(x)φ(y)·x₀ with ‖x₀‖ ≤ 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutativePhi {
    pub phi: Functional,
    pub x0: ComplexSeq,
}

impl CommutativePhi {
    pub fn new(phi: Functional, x0: ComplexSeq) -> Result<Self> {
        if norm(&x0, phi.space()) > 1.0 + 1e-15 {
            return Err(Error::Precondition("‖x₀‖ must be at most 1".into()));
        }
        Ok(Self { phi, x0 })
    }
}

pub fn commutative_phi_product(alg: &CommutativePhi, y: &ComplexSeq, x: &ComplexSeq) -> Result<ComplexSeq> {
    Ok(alg.x0.scale(alg.phi.apply(y)? * alg.phi.apply(x)?).normalized())
}

/// Countable set of finite sequences with Gaussian-rational entries of
/// denominator `denom` inside the closed unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalGrid {
    pub denom: u32,
}

impl RationalGrid {
    /// Element i: (a, b) = unpair(i) gives length a+1 and a code b split into
    /// real and imaginary numerators in [−D, D]. Entries outside the disc are
    /// zeroed, so every admissible entry list still occurs.
    pub fn element(&self, i: u64) -> Vec<C64> {
        let d = self.denom as u64;
        let (a, b) = unpair(i);
        let len = (a + 1).min(32) as usize;
        let parts = unpack_balanced(b, 2 * len);
        let mut col: Vec<C64> = parts
            .chunks(2)
            .map(|c| {
                let re = zigzag_decode(c[0] % (2 * d + 1));
                let im = zigzag_decode(c[1] % (2 * d + 1));
                if (re * re + im * im) as u64 > d * d {
                    ZERO
                } else {
                    C64::new(re as f64 / d as f64, im as f64 / d as f64)
                }
            })
            .collect();
        trim(&mut col);
        col
    }
}

fn trim(col: &mut Vec<C64>) {
    while col.last() == Some(&ZERO) {
        col.pop();
    }
}

/// Where the columns of Λ come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnSource {
    /// Column r is grid element i where (i, k) = unpair(r−1), so each element
    /// recurs once per k.
    Enumerated { grid: RationalGrid },
    /// The same column for every r.
    Constant { column: Vec<C64> },
    /// Explicit columns, r = 1..len; beyond that the last one repeats.
    Explicit { columns: Vec<Vec<C64>> },
}

impl ColumnSource {
    pub fn column(&self, r: u64) -> Vec<C64> {
        assert!(r >= 1);
        let mut col = match self {
            ColumnSource::Enumerated { grid } => grid.element(unpair(r - 1).0),
            ColumnSource::Constant { column } => column.clone(),
            ColumnSource::Explicit { columns } => {
                columns.get(r as usize - 1).or(columns.last()).cloned().unwrap_or_default()
            }
        };
        trim(&mut col);
        col
    }

    fn validate(&self) -> Result<()> {
        let cols: Vec<&Vec<C64>> = match self {
            ColumnSource::Enumerated { grid } if grid.denom == 0 => {
                return Err(Error::Precondition("grid denominator must be positive".into()))
            }
            ColumnSource::Enumerated { .. } => return Ok(()),
            ColumnSource::Constant { column } => vec![column],
            ColumnSource::Explicit { columns } => columns.iter().collect(),
        };
        if cols.iter().flat_map(|c| c.iter()).any(|v| !(v.norm() <= 1.0 + 1e-15)) {
            return Err(Error::Precondition("columns of Λ need sup-norm at most 1".into()));
        }
        Ok(())
    }
}

pub const DEFAULT_RANK: u64 = 64;

/// y×x = Σ_{r≤R} 2^{−r}‖φ_r‖^{−2} φ_r(y)φ_r(x) a_r with
/// φ_r = a_r* + Σ_l λ_{l,r} x_l*.
#[derive(Clone, Debug, PartialEq)]
pub struct TimesAlgebra {
    space: SpaceSpec,
    source: ColumnSource,
    rank: u64,
    columns: Vec<Vec<C64>>,
    phis: Vec<Functional>,
}

pub fn x_index(l: u64) -> u64 {
    2 * l - 1
}

pub fn a_index(r: u64) -> u64 {
    2 * r
}

fn phi_for(space: SpaceSpec, r: u64, col: &[C64]) -> Result<Functional> {
    let mut entries: Vec<(u64, C64)> = col
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != ZERO)
        .map(|(i, v)| (x_index(i as u64 + 1), *v))
        .collect();
    entries.push((a_index(r), C64::new(1.0, 0.0)));
    entries.sort_by_key(|e| e.0);
    Functional::new(ComplexSeq::new(1, entries)?, space)
}

impl TimesAlgebra {
    pub fn new(space: SpaceSpec, source: ColumnSource, rank: u64) -> Result<Self> {
        source.validate()?;
        if rank == 0 || rank > 1 << 20 {
            return Err(Error::Precondition(format!("rank {rank} outside 1..=2^20")));
        }
        let columns: Vec<Vec<C64>> = (1..=rank).map(|r| source.column(r)).collect();
        let phis = columns
            .iter()
            .enumerate()
            .map(|(i, c)| phi_for(space, i as u64 + 1, c))
            .collect::<Result<_>>()?;
        Ok(Self { space, source, rank, columns, phis })
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn source(&self) -> &ColumnSource {
        &self.source
    }

    /// Column r of Λ (any r ≥ 1, not only r ≤ R).
    pub fn column(&self, r: u64) -> Vec<C64> {
        match self.columns.get(r as usize - 1) {
            Some(c) => c.clone(),
            None => self.source.column(r),
        }
    }

    /// λ_{l,r}.
    pub fn lambda(&self, l: u64, r: u64) -> C64 {
        self.columns[r as usize - 1].get(l as usize - 1).copied().unwrap_or(ZERO)
    }

    pub fn phi(&self, r: u64) -> &Functional {
        &self.phis[r as usize - 1]
    }

    /// ‖φ_r‖ for any r ≥ 1; it depends only on the column.
    pub fn phi_norm(&self, r: u64) -> f64 {
        match self.phis.get(r as usize - 1) {
            Some(f) => f.norm(),
            None => column_phi_norm(self.space, &self.source.column(r)),
        }
    }

    /// Generator x_l.
    pub fn generator(&self, l: u64) -> ComplexSeq {
        ComplexSeq::unit(1, x_index(l)).expect("base 1")
    }

    /// Σ_r coeffs[r]·a_r, r = 1..=R.
    fn combine(&self, coeff: impl Fn(usize) -> Result<C64>) -> Result<ComplexSeq> {
        let mut entries = Vec::new();
        for i in 0..self.rank as usize {
            let c = coeff(i)?;
            if c != ZERO {
                entries.push((a_index(i as u64 + 1), c));
            }
        }
        ComplexSeq::new(1, entries)
    }

    fn scale(&self, i: usize, power: i32) -> f64 {
        (-((i + 1) as f64) * power as f64).exp2() / self.phis[i].norm().powi(2 * power)
    }
}

fn column_phi_norm(space: SpaceSpec, col: &[C64]) -> f64 {
    space.dual_norm_of_moduli(col.iter().map(|v| v.norm()).chain([1.0]))
}

/// Truncated series value with a bound on the omitted terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub value: ComplexSeq,
    pub tail_bound: f64,
}

pub fn times_product(alg: &TimesAlgebra, y: &ComplexSeq, x: &ComplexSeq) -> Result<Truncated> {
    let value = alg.combine(|i| Ok(alg.scale(i, 1) * (alg.phis[i].apply(y)? * alg.phis[i].apply(x)?)))?;
    let tail_bound = (-(alg.rank as f64)).exp2() * norm(y, alg.space) * norm(x, alg.space);
    Ok(Truncated { value, tail_bound })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssociativityReport {
    /// ‖z×(y×x) − (z×y)×x‖.
    pub bracket_gap: f64,
    /// Largest gap between either bracketing and Σ 2^{−2r}‖φ_r‖^{−4}φ_r(z)φ_r(y)φ_r(x)a_r.
    pub collapsed_gap: f64,
    pub tail_bound: f64,
    pub scale: f64,
}

impl AssociativityReport {
    pub fn residual(&self) -> f64 {
        self.bracket_gap.max(self.collapsed_gap)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.residual() <= tol * self.scale.max(1.0) + self.tail_bound
    }
}

pub fn times_associativity_check(
    alg: &TimesAlgebra,
    x: &ComplexSeq,
    y: &ComplexSeq,
    z: &ComplexSeq,
) -> Result<AssociativityReport> {
    let s = alg.space;
    let yx = times_product(alg, y, x)?;
    let left = times_product(alg, z, &yx.value)?;
    let zy = times_product(alg, z, y)?;
    let right = times_product(alg, &zy.value, x)?;
    let collapsed = alg.combine(|i| {
        let f = &alg.phis[i];
        Ok(alg.scale(i, 2) * f.apply(z)? * f.apply(y)? * f.apply(x)?)
    })?;
    let gap = |a: &ComplexSeq, b: &ComplexSeq| -> Result<f64> { Ok(norm(&a.sub(b)?, s)) };
    let (nx, ny, nz) = (norm(x, s), norm(y, s), norm(z, s));
    Ok(AssociativityReport {
        bracket_gap: gap(&left.value, &right.value)?,
        collapsed_gap: gap(&left.value, &collapsed)?.max(gap(&right.value, &collapsed)?),
        tail_bound: 2.0 * (-(alg.rank as f64)).exp2() * nx * ny * nz,
        scale: nx * ny * nz,
    })
}

/// Associativity residual ‖z(yx) − (zy)x‖ for any binary product.
pub fn associativity_residual(
    mul: impl Fn(&ComplexSeq, &ComplexSeq) -> Result<ComplexSeq>,
    x: &ComplexSeq,
    y: &ComplexSeq,
    z: &ComplexSeq,
    space: SpaceSpec,
) -> Result<f64> {
    let left = mul(z, &mul(y, x)?)?;
    let right = mul(&mul(z, y)?, x)?;
    Ok(norm(&left.sub(&right)?, space))
}

/// x₁^{β₁}×⋯×x_s^{β_s} from the closed form
/// Σ_r 2^{−r(|β|−1)}‖φ_r‖^{−(2|β|−2)} Π_l λ_{l,r}^{β_l} a_r.
pub fn monomial_eval(alg: &TimesAlgebra, beta: &[u32]) -> Result<ComplexSeq> {
    let deg: u32 = beta.iter().sum();
    if deg < 2 {
        return Err(Error::Precondition("monomials need |β| >= 2".into()));
    }
    let e = deg as i32 - 1;
    alg.combine(|i| Ok(alg.scale(i, e) * eval_monomial(&alg.columns[i], beta)))
}

/// The same monomial by iterated × products of generators.
pub fn monomial_iterated(alg: &TimesAlgebra, beta: &[u32]) -> Result<ComplexSeq> {
    let mut factors = beta
        .iter()
        .enumerate()
        .flat_map(|(l, &b)| std::iter::repeat_n(l as u64 + 1, b as usize))
        .map(|l| alg.generator(l));
    let mut acc = factors.next().ok_or_else(|| Error::Precondition("empty monomial".into()))?;
    for f in factors {
        acc = times_product(alg, &acc, &f)?.value;
    }
    Ok(acc)
}

fn eval_monomial(point: &[C64], beta: &[u32]) -> C64 {
    beta.iter()
        .enumerate()
        .map(|(l, &b)| point.get(l).copied().unwrap_or(ZERO).powu(b))
        .product()
}

/// Polynomial over multi-indices with trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, C64>,
}

impl Polynomial {
    /// Sums repeated multi-indices and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (Vec<u32>, C64)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, C64> = BTreeMap::new();
        for (mut beta, c) in terms {
            while beta.last() == Some(&0) {
                beta.pop();
            }
            *map.entry(beta).or_insert(ZERO) += c;
        }
        map.retain(|_, c| *c != ZERO);
        Self { terms: map }
    }

    /// Product of variables given as a word, e.g. [1, 2] = X₁X₂.
    pub fn word(vars: &[usize], c: C64) -> (Vec<u32>, C64) {
        let s = vars.iter().copied().max().unwrap_or(0);
        let mut beta = vec![0u32; s];
        for &v in vars {
            beta[v - 1] += 1;
        }
        (beta, c)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|b| b.iter().sum()).max().unwrap_or(0)
    }

    pub fn lowest_degree(&self) -> u32 {
        self.terms.keys().map(|b| b.iter().sum()).min().unwrap_or(0)
    }

    pub fn variables(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn homogeneous(&self, m: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.iter().sum::<u32>() == m)
                .map(|(b, c)| (b.clone(), *c))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[C64]) -> C64 {
        self.terms.iter().map(|(b, c)| c * eval_monomial(point, b)).sum()
    }

    /// Σ c_β x^β in the × algebra; degree-one terms contribute c_β x_l.
    pub fn eval_in(&self, alg: &TimesAlgebra) -> Result<ComplexSeq> {
        let mut acc = ComplexSeq::zero(1);
        for (beta, c) in &self.terms {
            let deg: u32 = beta.iter().sum();
            let v = match deg {
                0 => return Err(Error::Precondition("constant terms have no value in the algebra".into())),
                1 => alg.generator(beta.len() as u64),
                _ => monomial_eval(alg, beta)?,
            };
            acc = acc.add(&v.scale(*c))?;
        }
        Ok(acc.normalized())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// A degree-one coefficient survives on x_l, which the basis forbids.
    Linear { l: u64, coefficient: C64 },
    Found(Witness),
    NotFoundAtBudget { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Lowest degree j of P.
    pub j: u32,
    /// First column with |P_j| above tolerance.
    pub first_column: u64,
    /// r_n: a later (or the same) index carrying the same column.
    pub r: u64,
    /// n: how many equal columns were passed, counting r_n.
    pub occurrence: u64,
    pub p_j: f64,
    /// Σ_{m>j} 2^{−r(m−j)}‖φ_r‖^{−2(m−j)}|P_m(col)|.
    pub dominated_by: f64,
    /// γ_r / (2^{−r(j−1)}‖φ_r‖^{−(2j−2)}).
    pub gamma_scaled: C64,
    /// log₂ of the factor 2^{−r(j−1)}‖φ_r‖^{−(2j−2)}.
    pub log2_factor: f64,
    /// γ_r itself; may underflow to 0 for large r even though γ_r ≠ 0.
    pub gamma: C64,
    pub phi_norm: f64,
}

impl Witness {
    /// |γ_r| ≥ ½·factor·|P_j(col)|, stated on the scaled value.
    pub fn sound(&self) -> bool {
        self.gamma_scaled.norm() >= 0.5 * self.p_j * (1.0 - 1e-12) && self.p_j > 0.0
    }
}

/// γ_r = Σ_{m=j}^{M} 2^{−r(m−1)}‖φ_r‖^{−(2m−2)} P_m(col_r), divided by its
/// m = j factor.
pub fn gamma_scaled(alg: &TimesAlgebra, poly: &Polynomial, r: u64) -> (C64, f64) {
    let col = alg.column(r);
    let norm_r = alg.phi_norm(r);
    let j = poly.lowest_degree();
    let sum = (j..=poly.degree())
        .map(|m| {
            let k = (m - j) as f64;
            poly.homogeneous(m).eval(&col) * ((-(r as f64) * k).exp2() / norm_r.powf(2.0 * k))
        })
        .sum();
    let log2_factor = -(r as f64) * (j as f64 - 1.0) - (2.0 * j as f64 - 2.0) * norm_r.log2();
    (sum, log2_factor)
}

/// Searches for an r with γ_r ≠ 0. Scans columns for |P_j(col)| > tol, then
/// follows the later equal columns until the higher parts are at most half of
/// |P_j(col)|.
pub fn independence_witness(alg: &TimesAlgebra, poly: &Polynomial, tol: f64, budget: u64) -> Result<WitnessOutcome> {
    if poly.is_zero() {
        return Err(Error::Rejected("the zero polynomial is no relation".into()));
    }
    if poly.terms.contains_key(&Vec::new()) {
        return Err(Error::Precondition("P must have no constant term".into()));
    }
    if let Some((beta, c)) = poly.terms.iter().find(|(b, _)| b.iter().sum::<u32>() == 1) {
        return Ok(WitnessOutcome::Linear { l: beta.len() as u64, coefficient: *c });
    }
    let j = poly.lowest_degree();
    let parts: Vec<(u32, Polynomial)> = (j..=poly.degree()).map(|m| (m, poly.homogeneous(m))).collect();
    let pj = &parts[0].1;
    let Some(first) = (1..=budget).find(|&r| pj.eval(&alg.column(r)).norm() > tol) else {
        return Ok(WitnessOutcome::NotFoundAtBudget { budget });
    };
    let col = alg.column(first);
    let p_j = pj.eval(&col).norm();
    let higher: Vec<(u32, f64)> = parts[1..].iter().map(|(m, p)| (*m, p.eval(&col).norm())).collect();
    let mut occurrence = 0;
    for r in first..=budget {
        if alg.column(r) != col {
            continue;
        }
        occurrence += 1;
        let norm_r = alg.phi_norm(r);
        let dominated_by: f64 = higher
            .iter()
            .map(|&(m, v)| {
                let k = (m - j) as f64;
                (-(r as f64) * k).exp2() / norm_r.powf(2.0 * k) * v
            })
            .sum();
        if dominated_by <= 0.5 * p_j {
            let (gs, log2_factor) = gamma_scaled(alg, poly, r);
            return Ok(WitnessOutcome::Found(Witness {
                j,
                first_column: first,
                r,
                occurrence,
                p_j,
                dominated_by,
                gamma_scaled: gs,
                log2_factor,
                gamma: gs * log2_factor.exp2(),
                phi_norm: norm_r,
            }));
        }
    }
    Ok(WitnessOutcome::NotFoundAtBudget { budget })
}

/// Description of a product, as read from or written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "product", rename_all = "snake_case")]
pub enum AlgebraDescriptor {
    Phi { space: SpaceSpec, phi: Vec<(u64, f64, f64)> },
    CommutativePhi { space: SpaceSpec, phi: Vec<(u64, f64, f64)>, x0: Vec<(u64, f64, f64)> },
    Times { space: SpaceSpec, columns: ColumnSource, rank: u64 },
}

/// A product ready for evaluation.
#[derive(Clone, Debug)]
pub enum Algebra {
    Phi(Functional),
    CommutativePhi(CommutativePhi),
    Times(TimesAlgebra),
}

fn seq_from_triples(t: &[(u64, f64, f64)]) -> Result<ComplexSeq> {
    let mut entries: Vec<(u64, C64)> = t.iter().map(|&(k, re, im)| (k, C64::new(re, im))).collect();
    entries.sort_by_key(|e| e.0);
    ComplexSeq::new(1, entries)
}

impl AlgebraDescriptor {
    pub fn build(&self) -> Result<Algebra> {
        match self {
            AlgebraDescriptor::Phi { space, phi } => Ok(Algebra::Phi(Functional::new(seq_from_triples(phi)?, *space)?)),
            AlgebraDescriptor::CommutativePhi { space, phi, x0 } => Ok(Algebra::CommutativePhi(CommutativePhi::new(
                Functional::new(seq_from_triples(phi)?, *space)?,
                seq_from_triples(x0)?,
            )?)),
            AlgebraDescriptor::Times { space, columns, rank } => {
                Ok(Algebra::Times(TimesAlgebra::new(*space, columns.clone(), *rank)?))
            }
        }
    }
}

impl Algebra {
    pub fn space(&self) -> SpaceSpec {
        match self {
            Algebra::Phi(f) => f.space(),
            Algebra::CommutativePhi(c) => c.phi.space(),
            Algebra::Times(t) => t.space(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algebra::Phi(_) => "phi",
            Algebra::CommutativePhi(_) => "commutative_phi",
            Algebra::Times(_) => "times",
        }
    }

    pub fn commutative(&self) -> bool {
        !matches!(self, Algebra::Phi(_))
    }

    /// y·x; the × product drops its tail (see [`times_product`] for the bound).
    pub fn mul(&self, y: &ComplexSeq, x: &ComplexSeq) -> Result<ComplexSeq> {
        match self {
            Algebra::Phi(f) => phi_product(f, y, x),
            Algebra::CommutativePhi(c) => commutative_phi_product(c, y, x),
            Algebra::Times(t) => Ok(times_product(t, y, x)?.value),
        }
    }

    /// Slack allowed on ‖yx‖ ≤ ‖y‖‖x‖ from truncation.
    pub fn tail(&self, y: &ComplexSeq, x: &ComplexSeq) -> f64 {
        match self {
            Algebra::Times(t) => (-(t.rank() as f64)).exp2() * norm(y, t.space()) * norm(x, t.space()),
            _ => 0.0,
        }
    }
}
