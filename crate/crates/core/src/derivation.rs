//! k-derivations of a polynomial ring, determined by their images on the
//! variables.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{factorial, same_ring, Polynomial, Rational, VarTable};
use crate::error::{Error, Result};
use crate::parse;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    vars: Arc<VarTable>,
    images: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(vars: &Arc<VarTable>, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != vars.len() {
            return Err(Error::Precondition(format!(
                "derivation needs {} images, got {}",
                vars.len(),
                images.len()
            )));
        }
        if images.iter().any(|p| !same_ring(p.vars(), vars)) {
            return Err(Error::RingMismatch);
        }
        Ok(Derivation {
            vars: vars.clone(),
            images,
        })
    }

    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Derivation {
            vars: vars.clone(),
            images: vec![Polynomial::zero(vars); vars.len()],
        }
    }

    /// Builds a derivation from `(variable name, image text)` pairs;
    /// unnamed variables map to zero.
    pub fn from_named<'a>(
        vars: &Arc<VarTable>,
        images: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut out = Self::zero(vars);
        for (name, text) in images {
            let i = vars
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            out.images[i] = parse::parse(text, vars)?;
        }
        Ok(out)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, index: usize) -> &Polynomial {
        &self.images[index]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Polynomial::is_zero)
    }

    /// The Leibniz extension `f ↦ Σ ∂f/∂x_i · D(x_i)`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(f.vars(), &self.vars) {
            return Err(Error::RingMismatch);
        }
        let mut out = Polynomial::zero(&self.vars);
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = f.partial(i);
            if !d.is_zero() {
                out = &out + &(&d * img);
            }
        }
        Ok(out)
    }

    /// `D^n f`.
    pub fn apply_n(&self, f: &Polynomial, n: usize) -> Result<Polynomial> {
        let mut g = f.clone();
        for _ in 0..n {
            if g.is_zero() {
                break;
            }
            g = self.apply(&g)?;
        }
        Ok(g)
    }

    /// `[self, other]`, computed on generators.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check_ring(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(d_v, u_v)| Ok(&self.apply(u_v)? - &other.apply(d_v)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            vars: self.vars.clone(),
            images,
        })
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.check_ring(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Derivation {
            vars: self.vars.clone(),
            images,
        })
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            vars: self.vars.clone(),
            images: self.images.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// First variable on which the two derivations differ.
    pub fn first_difference(&self, other: &Derivation) -> Option<usize> {
        (0..self.images.len()).find(|&i| self.images[i] != other.images[i])
    }

    fn check_ring(&self, other: &Derivation) -> Result<()> {
        if same_ring(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Largest total degree of a variable image, 0 for the zero derivation.
    pub fn image_degree(&self) -> u32 {
        self.images
            .iter()
            .filter_map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn default_cap(&self, f: &Polynomial) -> usize {
        let fdeg = f.total_degree().unwrap_or(0) as usize;
        4 * (fdeg + 1) * (self.image_degree() as usize + 1)
    }

    pub fn nilpotency_degree(&self, f: &Polynomial, cap: usize) -> Result<NilpotencyReport> {
        if f.is_zero() {
            return Err(Error::Precondition(
                "nilpotency degree of the zero polynomial".into(),
            ));
        }
        let mut chain = vec![f.clone()];
        for _ in 0..cap {
            let next = self.apply(chain.last().unwrap())?;
            if next.is_zero() {
                return Ok(NilpotencyReport {
                    degree: chain.len() - 1,
                    chain,
                });
            }
            chain.push(next);
        }
        Err(Error::CapExceeded { cap })
    }

    /// `deg_D f` with the default cap; `None` for `f = 0`.
    pub fn degree_of(&self, f: &Polynomial) -> Result<Option<usize>> {
        if f.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.nilpotency_degree(f, self.default_cap(f))?.degree))
    }

    /// `exp(tD) f = Σ tⁿ Dⁿf / n!`.
    pub fn exp_apply(&self, t: &Rational, f: &Polynomial, cap: usize) -> Result<Polynomial> {
        if !same_ring(f.vars(), &self.vars) {
            return Err(Error::RingMismatch);
        }
        if t.is_zero() || f.is_zero() {
            return Ok(f.clone());
        }
        let report = self.nilpotency_degree(f, cap)?;
        let mut out = Polynomial::zero(&self.vars);
        let mut tn = Rational::one();
        for (n, term) in report.chain.iter().enumerate() {
            let c = &tn / Rational::from_integer(factorial(n as u64));
            out = &out + &term.scale(&c);
            tn *= t;
        }
        Ok(out)
    }

    /// `{"var": "image", …}` with zero images omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .images
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                (
                    self.vars.name(i).to_string(),
                    serde_json::Value::String(p.to_string()),
                )
            })
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(vars: &Arc<VarTable>, value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Json("derivation must be a JSON object".into()))?;
        let mut pairs = Vec::with_capacity(obj.len());
        for (k, v) in obj {
            let text = v
                .as_str()
                .ok_or_else(|| Error::Json(format!("image of `{k}` must be a string")))?;
            pairs.push((k.as_str(), text));
        }
        Self::from_named(vars, pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub degree: usize,
    /// `f, Df, …, D^degree f`; the last entry is nonzero.
    pub chain: Vec<Polynomial>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use crate::parse::parse;

    fn basic(d: usize) -> (Arc<VarTable>, Derivation, Derivation) {
        let vars = VarTable::indexed("x", d + 1).unwrap();
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
        (
            vars.clone(),
            Derivation::new(&vars, dimg).unwrap(),
            Derivation::new(&vars, uimg).unwrap(),
        )
    }

    #[test]
    fn apply_examples() {
        let (r, d, _) = basic(3);
        assert_eq!(
            d.apply(&Polynomial::var(&r, 2)).unwrap(),
            Polynomial::var(&r, 1)
        );
        assert!(d
            .apply(&Polynomial::constant(&r, rat(5)))
            .unwrap()
            .is_zero());
        let s = parse("3*x0*x3 - x1*x2", &r).unwrap();
        assert_eq!(d.apply(&s).unwrap(), parse("2*x0*x2 - x1^2", &r).unwrap());
    }

    #[test]
    fn bracket_examples() {
        let (r, d, u) = basic(1);
        let e = d.bracket(&u).unwrap();
        assert_eq!(e.image(0), &Polynomial::var(&r, 0));
        assert_eq!(e.image(1), &-&Polynomial::var(&r, 1));
        assert!(d.bracket(&d).unwrap().is_zero());
    }

    #[test]
    fn nilpotency_examples() {
        let (r, d, _) = basic(3);
        let rep = d.nilpotency_degree(&Polynomial::var(&r, 3), 10).unwrap();
        assert_eq!(rep.degree, 3);
        assert_eq!(
            rep.chain,
            (0..4)
                .rev()
                .map(|i| Polynomial::var(&r, i))
                .collect::<Vec<_>>()
        );
        assert_eq!(
            d.nilpotency_degree(&Polynomial::one(&r), 1).unwrap().degree,
            0
        );
        let s = parse("3*x0*x3 - x1*x2", &r).unwrap();
        assert_eq!(d.nilpotency_degree(&s, 10).unwrap().degree, 1);
        assert_eq!(
            d.nilpotency_degree(&Polynomial::var(&r, 3), 2),
            Err(Error::CapExceeded { cap: 2 })
        );
    }

    #[test]
    fn exp_examples() {
        let (r, d, _) = basic(2);
        let f = Polynomial::var(&r, 2);
        assert_eq!(d.exp_apply(&rat(0), &f, 10).unwrap(), f);
        assert_eq!(
            d.exp_apply(&rat(1), &f, 10).unwrap(),
            parse("x2 + x1 + 1/2*x0", &r).unwrap()
        );
        let g = parse("x2^2 - x1", &r).unwrap();
        let t = ratio(-2, 3);
        let lhs = d.exp_apply(&t, &(&f * &g), 20).unwrap();
        let rhs = &d.exp_apply(&t, &f, 20).unwrap() * &d.exp_apply(&t, &g, 20).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip() {
        let (r, d, _) = basic(3);
        let v = d.to_json();
        assert_eq!(v["x1"], "x0");
        assert!(v.get("x0").is_none());
        assert_eq!(Derivation::from_json(&r, &v).unwrap(), d);
        assert!(Derivation::from_json(&r, &serde_json::json!({"q": "x0"})).is_err());
    }
}
