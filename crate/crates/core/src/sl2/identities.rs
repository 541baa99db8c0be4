//! Operator identities of an sl₂-triple and the witnesses built from them.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{weight_decompose, FundamentalPair};
use crate::algebra::{factorial, rat, Polynomial, Rational, UniPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PnQn {
    P,
    Q,
}

/// `p_n(x) = x(x-1)⋯(x-n+1)` or `q_n(x) = x(x+1)⋯(x+n-1)`.
pub fn pnqn(n: usize, which: PnQn) -> UniPoly {
    let sign = match which {
        PnQn::P => -1,
        PnQn::Q => 1,
    };
    (0..n as i64).fold(UniPoly(vec![BigInt::one()]), |acc, i| {
        acc.mul_linear(sign * i)
    })
}

/// `poly(E) f`, evaluated through the weight grading.
pub fn apply_weight_polynomial(
    pair: &FundamentalPair,
    poly: &UniPoly,
    f: &Polynomial,
) -> Result<Polynomial> {
    let mut out = Polynomial::zero(pair.vars());
    for (w, part) in weight_decompose(pair, f)? {
        out = &out + &part.scale(&poly.eval(&rat(w)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Identity2Report {
    pub holds: bool,
    pub n: usize,
    /// `D^n U^n f`.
    pub lhs: Polynomial,
    /// `n! p_n(E) f`.
    pub rhs: Polynomial,
}

/// Checks `D^n U^n f = n! p_n(E) f` for `f` in the kernel of `D`.
pub fn verify_identity2(
    pair: &FundamentalPair,
    f: &Polynomial,
    n: usize,
) -> Result<Identity2Report> {
    if n == 0 {
        return Err(Error::Precondition("identity needs n >= 1".into()));
    }
    if !pair.d().apply(f)?.is_zero() {
        return Err(Error::Precondition("f is not annihilated by D".into()));
    }
    let lhs = pair.d().apply_n(&pair.u().apply_n(f, n)?, n)?;
    let rhs = apply_weight_polynomial(pair, &pnqn(n, PnQn::P), f)?
        .scale(&Rational::from_integer(factorial(n as u64)));
    Ok(Identity2Report {
        holds: lhs == rhs,
        n,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorIdentityReport {
    pub holds: bool,
    pub m: usize,
    pub n: usize,
    pub residual: Polynomial,
}

/// Checks `D^m U^n f = D^{m-1} U^{n-1} (UD + nE - n(n-1)) f` for `m, n >= 1`.
pub fn verify_operator_identity(
    pair: &FundamentalPair,
    f: &Polynomial,
    m: usize,
    n: usize,
) -> Result<OperatorIdentityReport> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("identity needs m, n >= 1".into()));
    }
    let (d, u, e) = (pair.d(), pair.u(), pair.e());
    let lhs = d.apply_n(&u.apply_n(f, n)?, m)?;
    let nn = n as i64;
    let inner =
        &(&u.apply(&d.apply(f)?)? + &e.apply(f)?.scale(&rat(nn))) - &f.scale(&rat(nn * (nn - 1)));
    let rhs = d.apply_n(&u.apply_n(&inner, n - 1)?, m - 1)?;
    let residual = &lhs - &rhs;
    Ok(OperatorIdentityReport {
        holds: residual.is_zero(),
        m,
        n,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CertificateKind {
    A1,
    A2,
}

impl CertificateKind {
    pub fn weight(self) -> i64 {
        match self {
            CertificateKind::A1 => 1,
            CertificateKind::A2 => 2,
        }
    }

    pub fn from_weight(w: i64) -> Option<Self> {
        match w {
            1 => Some(CertificateKind::A1),
            2 => Some(CertificateKind::A2),
            _ => None,
        }
    }
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertificateKind::A1 => "A1",
            CertificateKind::A2 => "A2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub kind: CertificateKind,
    pub g: Polynomial,
    pub deg_d: usize,
    pub deg_u: usize,
}

/// `g = U f` for `f ∈ ker D` of weight 1 or 2, with its verified degrees:
/// A1 gives `deg_U g = 0, deg_D g = 1`; A2 gives `deg_D g = deg_U g = 1`.
///
/// The weight is read from the grading when the pair has one; otherwise it
/// is inferred from `E f = w f`.
pub fn useful2_witness(
    pair: &FundamentalPair,
    f: &Polynomial,
    kind: CertificateKind,
) -> Result<WitnessReport> {
    if f.is_zero() {
        return Err(Error::Precondition("witness needs f != 0".into()));
    }
    if !pair.d().apply(f)?.is_zero() {
        return Err(Error::Precondition("f is not annihilated by D".into()));
    }
    if pair.e().apply(f)? != f.scale(&rat(kind.weight())) {
        return Err(Error::Precondition(format!(
            "f does not have weight {}",
            kind.weight()
        )));
    }
    let g = pair.u().apply(f)?;
    let deg = |which: &crate::derivation::Derivation| -> Result<usize> {
        which.degree_of(&g)?.ok_or_else(|| {
            Error::Internal("U f vanished for a nonzero kernel element of positive weight".into())
        })
    };
    let deg_d = deg(pair.d())?;
    let deg_u = deg(pair.u())?;
    let expected = match kind {
        CertificateKind::A1 => (1, 0),
        CertificateKind::A2 => (1, 1),
    };
    if (deg_d, deg_u) != expected {
        return Err(Error::Internal(format!(
            "witness degrees (deg_D, deg_U) = ({deg_d}, {deg_u}), expected {expected:?}"
        )));
    }
    Ok(WitnessReport {
        kind,
        g,
        deg_d,
        deg_u,
    })
}
