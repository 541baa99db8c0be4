//! Certificate search for the A₁ / A₂ compatibility criterion.

use serde::Serialize;

use super::component;
use crate::algebra::{rat, Polynomial};
use crate::error::{Error, Result};
use crate::sl2::{
    basic_pair_named, direct_sum, weight_decompose, CertificateKind, FundamentalPair, Which,
};

/// Nonzero `f ∈ ker D` of weight 1 (A1) or 2 (A2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub degree: u32,
    pub weight: i64,
    pub element: Polynomial,
}

impl Certificate {
    /// Re-checks the invariants from scratch with `apply` and the weight grading.
    pub fn verify(&self, pair: &FundamentalPair) -> Result<()> {
        let fail = |msg: &str| {
            Err(Error::Precondition(format!(
                "certificate {}: {msg}",
                self.kind
            )))
        };
        if self.element.is_zero() {
            return fail("element is zero");
        }
        if !pair.d().apply(&self.element)?.is_zero() {
            return fail("element is not annihilated by D");
        }
        let parts = weight_decompose(pair, &self.element)?;
        if parts.len() != 1
            || parts.keys().next() != Some(&self.kind.weight())
            || self.weight != self.kind.weight()
        {
            return fail("element has the wrong weight");
        }
        if self.element.terms().any(|(m, _)| m.degree() != self.degree) {
            return fail("element is not of the recorded degree");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Yes { certificate: Certificate },
    NotFoundBelowBound,
    ImpossibleByParity,
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Yes { certificate } => Some(certificate),
            _ => None,
        }
    }
}

/// Kernel dimensions at weights 1 and 2 for one degree; `None` where not computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCounts {
    pub degree: u32,
    #[serde(rename = "A1")]
    pub a1: Option<usize>,
    #[serde(rename = "A2")]
    pub a2: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    #[serde(rename = "pairCompatible")]
    pub pair_compatible: Verdict,
    #[serde(rename = "tripleCompatible")]
    pub triple_compatible: Verdict,
    #[serde(rename = "searchBound")]
    pub search_bound: u32,
    pub counts: Vec<DegreeCounts>,
}

/// Searches degrees `1..=bound` for the lowest-degree A₁ and A₂ elements.
/// Counting stops for a kind once it has a certificate.
pub fn criterion(pair: &FundamentalPair, bound: u32) -> Result<CriterionVerdict> {
    let weights = pair.require_weights()?;
    let parity = weights.iter().all(|w| w % 2 == 0);
    let mut found: [Option<Certificate>; 2] = [None, None];
    let mut counts = Vec::new();
    for degree in 1..=bound {
        let mut row = DegreeCounts {
            degree,
            a1: None,
            a2: None,
        };
        for kind in [CertificateKind::A1, CertificateKind::A2] {
            let k = kind as usize;
            if found[k].is_some() || (kind == CertificateKind::A1 && parity) {
                continue;
            }
            let kernel = component(pair, degree, kind.weight())?.kernel(Which::D)?;
            match kind {
                CertificateKind::A1 => row.a1 = Some(kernel.len()),
                CertificateKind::A2 => row.a2 = Some(kernel.len()),
            }
            if let Some(element) = kernel.into_iter().next() {
                let cert = Certificate {
                    kind,
                    degree,
                    weight: kind.weight(),
                    element,
                };
                cert.verify(pair)?;
                found[k] = Some(cert);
            }
        }
        counts.push(row);
        if found.iter().all(Option::is_some) || (parity && found[1].is_some()) {
            break;
        }
    }
    let [a1, a2] = found;
    let pair_compatible = match a1 {
        Some(certificate) => Verdict::Yes { certificate },
        None if parity => Verdict::ImpossibleByParity,
        None => Verdict::NotFoundBelowBound,
    };
    let triple_compatible = match a2 {
        Some(certificate) => Verdict::Yes { certificate },
        None => Verdict::NotFoundBelowBound,
    };
    Ok(CriterionVerdict {
        pair_compatible,
        triple_compatible,
        search_bound: bound,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCertificateCheck {
    pub name: String,
    pub element: Polynomial,
    pub nonzero: bool,
    pub annihilated: bool,
    pub weight: Option<i64>,
    #[serde(rename = "expectedWeight")]
    pub expected_weight: i64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCertificateReport {
    pub passed: bool,
    pub checks: Vec<NamedCertificateCheck>,
}

pub const V4V4_ELEMENT: &str = "x0*y3 - x1*y2 + x2*y1 - x3*y0";
/// `y2·(2x0x2 − x1²) − y1·(3x0x3 − x1x2) + y0·(3x1x3 − 2x2²)`, expanded.
pub const V3V3_ELEMENT: &str =
    "2*x0*x2*y2 - x1^2*y2 - 3*x0*x3*y1 + x1*x2*y1 + 3*x1*x3*y0 - 2*x2^2*y0";

/// `V_d ⊕ V_d` on `x0..xd, y0..yd`.
pub fn doubled(d: usize) -> Result<FundamentalPair> {
    direct_sum(&[basic_pair_named(d, "x")?, basic_pair_named(d, "y")?])
}

fn check_named(
    name: &str,
    pair: &FundamentalPair,
    element: Polynomial,
    expected_weight: i64,
) -> Result<NamedCertificateCheck> {
    let nonzero = !element.is_zero();
    let annihilated = pair.d().apply(&element)?.is_zero();
    let weight = match pair.weight_of(&element) {
        Ok(w) => w,
        Err(Error::NotHomogeneous) => None,
        Err(e) => return Err(e),
    };
    let passed = nonzero && annihilated && weight == Some(expected_weight);
    Ok(NamedCertificateCheck {
        name: name.to_string(),
        element,
        nonzero,
        annihilated,
        weight,
        expected_weight,
        passed,
    })
}

/// The two explicit kernel elements on `V₄⊕V₄` (weight 2) and `V₃⊕V₃`
/// (weight 1), each also checked after scaling.
pub fn verify_named_certificates() -> Result<NamedCertificateReport> {
    let mut checks = Vec::new();
    for (name, d, text, w) in [("v4v4", 4, V4V4_ELEMENT, 2), ("v3v3", 3, V3V3_ELEMENT, 1)] {
        let pair = doubled(d)?;
        let f = pair.parse(text)?;
        checks.push(check_named(name, &pair, f.clone(), w)?);
        checks.push(check_named(
            &format!("{name}-scaled"),
            &pair,
            f.scale(&rat(-7)),
            w,
        )?);
    }
    Ok(NamedCertificateReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
