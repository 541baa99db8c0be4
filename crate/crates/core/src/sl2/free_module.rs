//! Quadratic covariants of binary forms, the involution α, and the two
//! free-module decompositions of `k[x0, …, xd]` over square-free monomials.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::algebra::{factorial, rat, Monomial, Polynomial, Rational, VarTable};
use crate::derivation::Derivation;
use crate::error::{Error, Result};

/// A ring endomorphism given by the images of the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSubstitution {
    vars: Arc<VarTable>,
    images: Vec<Polynomial>,
}

impl LinearSubstitution {
    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.images)
    }

    pub fn compose(&self, inner: &LinearSubstitution) -> Result<LinearSubstitution> {
        let images = inner
            .images
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<_>>()?;
        Ok(LinearSubstitution {
            vars: self.vars.clone(),
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, p)| *p == Polynomial::var(&self.vars, i))
    }

    /// `σ ∘ D ∘ σ` on generators; equals `σ D σ⁻¹` when σ is an involution.
    pub fn conjugate_involution(&self, der: &Derivation) -> Result<Derivation> {
        let images = (0..self.vars.len())
            .map(|i| self.apply(&der.apply(&self.images[i])?))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(&self.vars, images)
    }
}

/// `α(x_i) = (d-i)!/i! · x_{d-i}` on `k[x0, …, xd]`.
pub fn alpha_involution(d: usize) -> Result<LinearSubstitution> {
    if d == 0 {
        return Err(Error::Precondition("alpha needs d >= 1".into()));
    }
    let vars = VarTable::indexed("x", d + 1)?;
    let images = (0..=d)
        .map(|i| {
            let c = Rational::new(factorial((d - i) as u64), factorial(i as u64));
            Polynomial::var(&vars, d - i).scale(&c)
        })
        .collect();
    Ok(LinearSubstitution { vars, images })
}

/// `T_{2i} = Σ_{j=0}^{2i} (-1)^j x_j x_{2i-j}` for `0 <= i <= floor(d/2)`.
pub fn quadratic_covariants(d: usize) -> Result<Vec<Polynomial>> {
    if d == 0 {
        return Err(Error::Precondition("covariants need d >= 1".into()));
    }
    let vars = VarTable::indexed("x", d + 1)?;
    Ok((0..=d / 2)
        .map(|i| {
            (0..=2 * i).fold(Polynomial::zero(&vars), |acc, j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                &acc + &(&Polynomial::var(&vars, j) * &Polynomial::var(&vars, 2 * i - j))
                    .scale(&rat(sign))
            })
        })
        .collect())
}

/// `f = Σ_u s_u(g_0, …, g_N) · u` over square-free monomials `u`, with the
/// coefficients `s_u` written in placeholder variables `t0, …, tN`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqfreeDecomposition {
    pub generators: Vec<Polynomial>,
    pub coeffs: BTreeMap<Monomial, Polynomial>,
    basis_ring: Arc<VarTable>,
}

impl SqfreeDecomposition {
    pub fn reassemble(&self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(&self.basis_ring);
        for (u, s) in &self.coeffs {
            let c = s.substitute(&self.generators)?;
            out = &out + &c.mul_monomial(u, &Rational::one());
        }
        Ok(out)
    }
}

impl Serialize for SqfreeDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (u, c) in self.coeffs.iter().rev() {
            let key =
                Polynomial::monomial(&self.basis_ring, u.clone(), Rational::one()).to_string();
            map.serialize_entry(&key, &c.to_string())?;
        }
        map.end()
    }
}

fn coefficient_ring(n: usize) -> Result<Arc<VarTable>> {
    VarTable::indexed("t", n)
}

/// Decomposition over `k[x0², …, xN²]`: each exponent `e` splits as
/// `2⌊e/2⌋ + (e mod 2)`.
pub fn beta_decompose(f: &Polynomial) -> Result<SqfreeDecomposition> {
    let vars = f.vars().clone();
    let tring = coefficient_ring(vars.len())?;
    let mut coeffs: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (half, u) = m.square_split();
        let entry = coeffs.entry(u).or_insert_with(|| Polynomial::zero(&tring));
        *entry = &*entry + &Polynomial::monomial(&tring, half, c.clone());
    }
    let generators = (0..vars.len())
        .map(|i| Polynomial::var(&vars, i).pow(2))
        .collect();
    Ok(SqfreeDecomposition {
        generators,
        coeffs,
        basis_ring: vars,
    })
}

/// Reduction over `S = k[y0, …, yd]` with `y_i = T_{2i}` and
/// `y_{d-i} = α(T_{2i})`, by leading-term elimination under degrevlex.
#[derive(Debug, Clone)]
pub struct GammaReducer {
    d: usize,
    vars: Arc<VarTable>,
    tring: Arc<VarTable>,
    generators: Vec<Polynomial>,
    /// `y_j / lc(y_j)`.
    monic: Vec<Polynomial>,
    lead_coeffs: Vec<Rational>,
}

impl GammaReducer {
    pub fn new(d: usize) -> Result<Self> {
        let t = quadratic_covariants(d)?;
        let alpha = alpha_involution(d)?;
        let vars = alpha.vars.clone();
        let t: Vec<Polynomial> = t.iter().map(|p| p.embed(&vars)).collect::<Result<_>>()?;
        let mut generators = vec![Polynomial::zero(&vars); d + 1];
        for (i, ti) in t.iter().enumerate() {
            generators[i] = ti.clone();
        }
        for (i, ti) in t.iter().enumerate() {
            generators[d - i] = alpha.apply(ti)?;
        }
        let mut monic = Vec::with_capacity(d + 1);
        let mut lead_coeffs = Vec::with_capacity(d + 1);
        for (j, y) in generators.iter().enumerate() {
            let (m, c) = y.leading_term()?;
            let mut sq = vec![0u32; d + 1];
            sq[j] = 2;
            if *m != Monomial::from_exponents(sq) {
                return Err(Error::Internal(format!(
                    "leading monomial of y{j} is not x{j}^2"
                )));
            }
            monic.push(y.scale(&c.recip()));
            lead_coeffs.push(c.clone());
        }
        Ok(GammaReducer {
            d,
            vars,
            tring: coefficient_ring(d + 1)?,
            generators,
            monic,
            lead_coeffs,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<SqfreeDecomposition> {
        let mut rest = f.embed(&self.vars)?;
        let mut coeffs: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        let mut products: HashMap<Monomial, Polynomial> = HashMap::new();
        let mut last: Option<Monomial> = None;
        while !rest.is_zero() {
            let (u, c) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
            if let Some(prev) = &last {
                if u >= *prev {
                    return Err(Error::Internal("leading monomial failed to descend".into()));
                }
            }
            let (half, sqfree) = u.square_split();
            let g = products.entry(half.clone()).or_insert_with(|| {
                half.exponents()
                    .iter()
                    .enumerate()
                    .fold(Polynomial::one(&self.vars), |acc, (j, &e)| {
                        &acc * &self.monic[j].pow(e)
                    })
            });
            rest = &rest - &g.mul_monomial(&sqfree, &c);
            // c · Π ŷ_j^{m_j} = c / Π lc_j^{m_j} · Π y_j^{m_j}
            let mut scale = c;
            for (j, &e) in half.exponents().iter().enumerate() {
                for _ in 0..e {
                    scale /= &self.lead_coeffs[j];
                }
            }
            let entry = coeffs
                .entry(sqfree)
                .or_insert_with(|| Polynomial::zero(&self.tring));
            *entry = &*entry + &Polynomial::monomial(&self.tring, half, scale);
            last = Some(u);
        }
        coeffs.retain(|_, p| !p.is_zero());
        Ok(SqfreeDecomposition {
            generators: self.generators.clone(),
            coeffs,
            basis_ring: self.vars.clone(),
        })
    }
}

/// Convenience wrapper building a fresh [`GammaReducer`].
pub fn gamma_reduce(d: usize, f: &Polynomial) -> Result<SqfreeDecomposition> {
    GammaReducer::new(d)?.reduce(f)
}
