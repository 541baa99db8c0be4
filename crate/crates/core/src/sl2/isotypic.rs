use std::collections::BTreeMap;

use serde::Serialize;

use super::{weight_decompose, FundamentalPair};
use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};

/// `f = Σ_n parts[n]` with `parts[n] ∈ UⁿDⁿ(ker D^{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotypicDecomposition {
    pub parts: BTreeMap<usize, Polynomial>,
}

impl IsotypicDecomposition {
    pub fn sum(&self, pair: &FundamentalPair) -> Polynomial {
        self.parts
            .values()
            .fold(Polynomial::zero(pair.vars()), |acc, p| &acc + p)
    }
}

/// Projects each weight component onto its top isotypic piece with
/// `(c_1⋯c_n)⁻¹ UⁿDⁿ`, `c_i = i(w + 2n - i + 1)`, and recurses on the
/// remainder, which has strictly smaller `D`-degree.
pub fn isotypic_decompose(pair: &FundamentalPair, f: &Polynomial) -> Result<IsotypicDecomposition> {
    let mut parts: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let d = pair.d();
    let u = pair.u();
    for (w, mut h) in weight_decompose(pair, f)? {
        let mut prev_degree = usize::MAX;
        while !h.is_zero() {
            let n = d.nilpotency_degree(&h, d.default_cap(&h))?.degree;
            if n >= prev_degree {
                return Err(Error::Internal(format!(
                    "D-degree did not drop below {prev_degree} at weight {w}"
                )));
            }
            prev_degree = n;
            let entry = parts
                .entry(n)
                .or_insert_with(|| Polynomial::zero(pair.vars()));
            if n == 0 {
                *entry = &*entry + &h;
                break;
            }
            let mut c = Rational::from_integer(1.into());
            for i in 1..=n as i64 {
                let ci = i * (w + 2 * n as i64 - i + 1);
                if ci == 0 {
                    return Err(Error::Internal(format!(
                        "c_{i} = 0 at weight {w}, D-degree {n}"
                    )));
                }
                c *= Rational::from_integer(ci.into());
            }
            let top = u.apply_n(&d.apply_n(&h, n)?, n)?.scale(&c.recip());
            if top.is_zero() {
                return Err(Error::Internal("UⁿDⁿh vanished for h of D-degree n".into()));
            }
            *entry = &*entry + &top;
            h = &h - &top;
        }
    }
    parts.retain(|_, p| !p.is_zero());
    Ok(IsotypicDecomposition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::basic_pair;

    #[test]
    fn kernel_element_is_its_own_part() {
        let p = basic_pair(3).unwrap();
        let f = p.parse("2*x0*x2 - x1^2").unwrap();
        let dec = isotypic_decompose(&p, &f).unwrap();
        assert_eq!(dec.parts.len(), 1);
        assert_eq!(dec.parts[&0], f);
    }

    #[test]
    fn x1_in_v1() {
        let p = basic_pair(1).unwrap();
        let x1 = p.parse("x1").unwrap();
        let dec = isotypic_decompose(&p, &x1).unwrap();
        assert_eq!(dec.parts.len(), 1);
        assert_eq!(dec.parts[&1], x1);
    }

    #[test]
    fn x1x2_in_v3() {
        let p = basic_pair(3).unwrap();
        let f = p.parse("x1*x2").unwrap();
        let dec = isotypic_decompose(&p, &f).unwrap();
        assert_eq!(dec.sum(&p), f);
        assert_eq!(dec.parts.keys().copied().collect::<Vec<_>>(), vec![1, 3]);
        let top = &dec.parts[&3];
        assert!(p.d().apply_n(top, 4).unwrap().is_zero());
        assert!(!p.d().apply_n(top, 3).unwrap().is_zero());
        for (n, part) in &dec.parts {
            let again = isotypic_decompose(&p, part).unwrap();
            assert_eq!(again.parts.len(), 1);
            assert_eq!(&again.parts[n], part);
        }
    }
}
