//! Fundamental pairs `(D, U)`: locally nilpotent derivations whose bracket
//! `E = [D, U]` completes them to an sl₂-triple.

mod free_module;
mod identities;
mod isotypic;

pub use free_module::{
    alpha_involution, beta_decompose, gamma_reduce, quadratic_covariants, GammaReducer,
    LinearSubstitution, SqfreeDecomposition,
};
pub use identities::{
    apply_weight_polynomial, pnqn, useful2_witness, verify_identity2, verify_operator_identity,
    CertificateKind, Identity2Report, OperatorIdentityReport, PnQn, WitnessReport,
};
pub use isotypic::{isotypic_decompose, IsotypicDecomposition};

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{rat, Monomial, Polynomial, VarTable};
use crate::derivation::Derivation;
use crate::error::{Error, Result};

/// Selects `D` or `U` of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Which {
    D,
    U,
}

impl Which {
    /// Weight change of the selected derivation.
    pub fn weight_shift(self) -> i64 {
        match self {
            Which::D => 2,
            Which::U => -2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalPair {
    d: Derivation,
    u: Derivation,
    e: Derivation,
    weights: Option<Vec<i64>>,
}

impl FundamentalPair {
    /// Wraps `(D, U)` and computes `E = [D, U]`. The sl₂ relations are not
    /// enforced here; see [`check_relations`].
    pub fn new(d: Derivation, u: Derivation) -> Result<Self> {
        let e = d.bracket(&u)?;
        let weights = diagonal_weights(&e);
        Ok(FundamentalPair { d, u, e, weights })
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.d.vars()
    }

    pub fn d(&self) -> &Derivation {
        &self.d
    }

    pub fn u(&self) -> &Derivation {
        &self.u
    }

    pub fn e(&self) -> &Derivation {
        &self.e
    }

    pub fn get(&self, which: Which) -> &Derivation {
        match which {
            Which::D => &self.d,
            Which::U => &self.u,
        }
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn require_weights(&self) -> Result<&[i64]> {
        self.weights().ok_or(Error::WeightsAbsent)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        crate::parse::parse(text, self.vars())
    }

    /// Weight of a weight-homogeneous polynomial; `None` for zero.
    pub fn weight_of(&self, f: &Polynomial) -> Result<Option<i64>> {
        let w = self.require_weights()?;
        let mut it = f.terms().map(|(m, _)| m.weight(w));
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|x| x == first) {
            Ok(Some(first))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    /// `{"vars": […], "D": {…}, "U": {…}, "weights": […]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vars": self.vars().names(),
            "D": self.d.to_json(),
            "U": self.u.to_json(),
            "weights": self.weights,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let names: Vec<String> =
            serde_json::from_value(value.get("vars").cloned().unwrap_or_default())?;
        let vars = VarTable::new(names)?;
        let empty = serde_json::json!({});
        let d = Derivation::from_json(&vars, value.get("D").unwrap_or(&empty))?;
        let u = Derivation::from_json(&vars, value.get("U").unwrap_or(&empty))?;
        let pair = Self::new(d, u)?;
        if let Some(w) = value.get("weights").filter(|w| !w.is_null()) {
            let declared: Vec<i64> = serde_json::from_value(w.clone())?;
            if pair.weights.as_ref() != Some(&declared) {
                return Err(Error::Precondition(
                    "declared weights do not match [D, U]".into(),
                ));
            }
        }
        Ok(pair)
    }
}

fn diagonal_weights(e: &Derivation) -> Option<Vec<i64>> {
    let n = e.vars().len();
    (0..n)
        .map(|i| {
            let img = e.image(i);
            if img.is_zero() {
                return Some(0);
            }
            if img.num_terms() != 1 {
                return None;
            }
            let (m, c) = img.leading_term().ok()?;
            (*m == Monomial::var(n, i) && c.is_integer())
                .then(|| num_traits::ToPrimitive::to_i64(c.numer()))
                .flatten()
        })
        .collect()
}

/// The basic pair on `k[x0, …, xd]`.
pub fn basic_pair(d: usize) -> Result<FundamentalPair> {
    basic_pair_named(d, "x")
}

/// The basic pair on `k[p0, …, pd]` for a variable prefix `p`.
pub fn basic_pair_named(d: usize, prefix: &str) -> Result<FundamentalPair> {
    if d == 0 {
        return Err(Error::Precondition("basic pair needs d >= 1".into()));
    }
    let vars = VarTable::indexed(prefix, d + 1)?;
    let dimg = (0..=d)
        .map(|i| {
            if i == 0 {
                Polynomial::zero(&vars)
            } else {
                Polynomial::var(&vars, i - 1)
            }
        })
        .collect();
    let uimg = (0..=d)
        .map(|i| {
            if i == d {
                Polynomial::zero(&vars)
            } else {
                Polynomial::var(&vars, i + 1).scale(&rat(((i + 1) * (d - i)) as i64))
            }
        })
        .collect();
    let pair = FundamentalPair::new(Derivation::new(&vars, dimg)?, Derivation::new(&vars, uimg)?)?;
    let expected: Vec<i64> = (0..=d).map(|i| d as i64 - 2 * i as i64).collect();
    if pair.weights.as_ref() != Some(&expected) {
        return Err(Error::Internal(
            "basic pair weights differ from d - 2i".into(),
        ));
    }
    let report = check_generator_relations(&pair)?;
    if let Some(v) = report {
        return Err(Error::Internal(format!("basic pair fails {}", v.relation)));
    }
    Ok(pair)
}

/// Blockwise pair on the disjoint union of the summands' variables.
pub fn direct_sum(pairs: &[FundamentalPair]) -> Result<FundamentalPair> {
    let first = pairs
        .first()
        .ok_or_else(|| Error::Precondition("direct sum of nothing".into()))?;
    if pairs.len() == 1 {
        return Ok(first.clone());
    }
    let mut names: Vec<String> = Vec::new();
    for p in pairs {
        for n in p.vars().names() {
            if names.contains(n) {
                return Err(Error::VariableCollision(n.clone()));
            }
            names.push(n.clone());
        }
    }
    let vars = VarTable::new(names)?;
    let mut dimg = Vec::with_capacity(vars.len());
    let mut uimg = Vec::with_capacity(vars.len());
    for p in pairs {
        for i in 0..p.vars().len() {
            dimg.push(p.d.image(i).embed(&vars)?);
            uimg.push(p.u.image(i).embed(&vars)?);
        }
    }
    FundamentalPair::new(Derivation::new(&vars, dimg)?, Derivation::new(&vars, uimg)?)
}

/// Splits `f` by total variable weight.
pub fn weight_decompose(
    pair: &FundamentalPair,
    f: &Polynomial,
) -> Result<BTreeMap<i64, Polynomial>> {
    let w = pair.require_weights()?;
    let mut parts: BTreeMap<i64, Vec<_>> = BTreeMap::new();
    for (m, c) in f.terms() {
        parts
            .entry(m.weight(w))
            .or_default()
            .push((m.clone(), c.clone()));
    }
    Ok(parts
        .into_iter()
        .map(|(k, terms)| (k, Polynomial::from_terms(pair.vars(), terms)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationCheckConfig {
    /// Sample monomials have total degree `1..=sample_degree`.
    pub sample_degree: u32,
    /// Checks `[D^m U^n, E] = 2(n-m) D^m U^n` for `m, n <= max_power`.
    pub max_power: usize,
    /// At most this many sample monomials, taken at an even stride.
    pub max_samples: usize,
}

impl Default for RelationCheckConfig {
    fn default() -> Self {
        RelationCheckConfig {
            sample_degree: 4,
            max_power: 3,
            max_samples: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationViolation {
    pub relation: String,
    pub witness: Polynomial,
    pub residual: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub passed: bool,
    pub generators_checked: usize,
    pub samples_checked: usize,
    pub violation: Option<RelationViolation>,
}

/// Residuals `([D,E] + 2D)(v)` and `([U,E] - 2U)(v)` for every variable.
pub fn relation_residuals(pair: &FundamentalPair) -> Result<Vec<(String, Polynomial, Polynomial)>> {
    let de = pair.d.bracket(&pair.e)?;
    let ue = pair.u.bracket(&pair.e)?;
    let two = rat(2);
    let n = pair.vars().len();
    Ok((0..n)
        .map(|i| {
            let r1 = de.image(i) + &pair.d.image(i).scale(&two);
            let r2 = ue.image(i) - &pair.u.image(i).scale(&two);
            (pair.vars().name(i).to_string(), r1, r2)
        })
        .collect())
}

fn check_generator_relations(pair: &FundamentalPair) -> Result<Option<RelationViolation>> {
    let vars = pair.vars().clone();
    for (i, (_, r1, r2)) in relation_residuals(pair)?.into_iter().enumerate() {
        if !r1.is_zero() {
            return Ok(Some(RelationViolation {
                relation: "[D,[D,U]] = -2D".into(),
                witness: Polynomial::var(&vars, i),
                residual: r1,
            }));
        }
        if !r2.is_zero() {
            return Ok(Some(RelationViolation {
                relation: "[U,[D,U]] = 2U".into(),
                witness: Polynomial::var(&vars, i),
                residual: r2,
            }));
        }
    }
    Ok(None)
}

/// Verifies both defining bracket relations on every generator, then
/// `[D^m U^n, E] = 2(n-m) D^m U^n` on a sample of monomials.
pub fn check_relations(
    pair: &FundamentalPair,
    config: &RelationCheckConfig,
) -> Result<RelationReport> {
    let generators_checked = pair.vars().len();
    if let Some(v) = check_generator_relations(pair)? {
        return Ok(RelationReport {
            passed: false,
            generators_checked,
            samples_checked: 0,
            violation: Some(v),
        });
    }
    let samples = sample_monomials(pair.vars(), config.sample_degree, config.max_samples);
    for f in &samples {
        let ef = pair.e.apply(f)?;
        for m in 0..=config.max_power {
            for n in 0..=config.max_power {
                if m == 0 && n == 0 {
                    continue;
                }
                let dmun = |g: &Polynomial| -> Result<Polynomial> {
                    pair.d.apply_n(&pair.u.apply_n(g, n)?, m)
                };
                let base = dmun(f)?;
                let lhs = &dmun(&ef)? - &pair.e.apply(&base)?;
                let rhs = base.scale(&rat(2 * (n as i64 - m as i64)));
                if lhs != rhs {
                    return Ok(RelationReport {
                        passed: false,
                        generators_checked,
                        samples_checked: samples.len(),
                        violation: Some(RelationViolation {
                            relation: format!(
                                "[D^{m}U^{n}, E] = {}D^{m}U^{n}",
                                2 * (n as i64 - m as i64)
                            ),
                            witness: f.clone(),
                            residual: &lhs - &rhs,
                        }),
                    });
                }
            }
        }
    }
    Ok(RelationReport {
        passed: true,
        generators_checked,
        samples_checked: samples.len(),
        violation: None,
    })
}

/// Every monomial of total degree exactly `degree`, in descending degrevlex order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        return if degree == 0 {
            vec![Monomial::one(0)]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn sample_monomials(vars: &Arc<VarTable>, max_degree: u32, max_samples: usize) -> Vec<Polynomial> {
    let all: Vec<Monomial> = (1..=max_degree)
        .flat_map(|k| monomials_of_degree(vars.len(), k))
        .collect();
    if all.is_empty() || max_samples == 0 {
        return Vec::new();
    }
    let stride = all.len().div_ceil(max_samples);
    all.into_iter()
        .step_by(stride)
        .map(|m| Polynomial::monomial(vars, m, rat(1)))
        .collect()
}
