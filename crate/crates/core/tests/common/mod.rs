#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2lnd::algebra::{ratio, Monomial};
use sl2lnd::{Polynomial, VarTable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random exponent vector of total degree at most `max_degree`.
pub fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Monomial {
    let degree = rng.random_range(0..=max_degree);
    let mut exps = vec![0u32; nvars];
    for _ in 0..degree {
        exps[rng.random_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(exps)
}

/// Up to `max_terms` terms with small nonzero rational coefficients.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    vars: &Arc<VarTable>,
    max_degree: u32,
    max_terms: usize,
) -> Polynomial {
    let terms = rng.random_range(1..=max_terms);
    Polynomial::from_terms(
        vars,
        (0..terms).map(|_| {
            let mut num = rng.random_range(-9..=9i64);
            if num == 0 {
                num = 1;
            }
            let den = rng.random_range(1..=4i64);
            (
                random_monomial(rng, vars.len(), max_degree),
                ratio(num, den),
            )
        }),
    )
}
