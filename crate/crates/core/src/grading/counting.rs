//! Partition counting and the Cayley–Sylvester dimension formula.

use serde::Serialize;

use super::component;
use crate::error::Result;
use crate::sl2::{basic_pair, FundamentalPair, Which};

/// Number of partitions of `t` into at most `parts` parts, each at most `size`.
pub fn partitions_in_box(parts: usize, size: usize, t: i64) -> u128 {
    if t < 0 {
        return 0;
    }
    let t = t as usize;
    if t > parts * size {
        return 0;
    }
    // dp[k][s]: partitions of s into exactly k parts, parts drawn from 1..=p
    let mut dp = vec![vec![0u128; t + 1]; parts + 1];
    dp[0][0] = 1;
    for p in 1..=size.min(t) {
        for k in 1..=parts {
            for s in p..=t {
                dp[k][s] += dp[k - 1][s - p];
            }
        }
    }
    (0..=parts).map(|k| dp[k][t]).sum()
}

/// Dimension of the weight-`w`, degree-`j` slice of `ker D` in `k[V_d]`.
pub fn cayley_sylvester(d: usize, j: usize, w: i64) -> u128 {
    let jd = (j * d) as i64;
    if w < 0 || (jd - w).rem_euclid(2) != 0 || w > jd {
        return 0;
    }
    let t = (jd - w) / 2;
    partitions_in_box(j, d, t) - partitions_in_box(j, d, t - 1)
}

#[derive(Debug, Clone, Copy)]
pub struct HermiteConfig {
    /// Largest `j` compared.
    pub cap: usize,
    /// Slices with more monomials than this skip the nullspace cross-check.
    pub max_slice: usize,
}

impl Default for HermiteConfig {
    fn default() -> Self {
        HermiteConfig {
            cap: 8,
            max_slice: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HermiteRow {
    pub j: usize,
    /// `cayley_sylvester(d, j, i)`.
    pub lhs: u128,
    /// `cayley_sylvester(j, d, i)`.
    pub rhs: u128,
    #[serde(rename = "nullspaceLhs")]
    pub nullspace_lhs: Option<usize>,
    #[serde(rename = "nullspaceRhs")]
    pub nullspace_rhs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HermiteMismatch {
    pub d: usize,
    pub j: usize,
    pub i: i64,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HermiteReport {
    pub passed: bool,
    pub d: usize,
    pub i: i64,
    pub rows: Vec<HermiteRow>,
    pub mismatch: Option<HermiteMismatch>,
}

fn nullspace_dim(
    pair: &FundamentalPair,
    degree: usize,
    weight: i64,
    max_slice: usize,
) -> Result<Option<usize>> {
    let comp = component(pair, degree as u32, weight)?;
    if comp.len() > max_slice {
        return Ok(None);
    }
    comp.kernel_dimension(Which::D).map(Some)
}

/// Compares `cs(d, j, i)` with `cs(j, d, i)` for `j ≤ cap`, and both with
/// nullspace dimensions on slices small enough to solve.
pub fn hermite_check(d: usize, i: i64, config: &HermiteConfig) -> Result<HermiteReport> {
    let mut rows = Vec::new();
    let mut mismatch = None;
    let pd = if d >= 1 { Some(basic_pair(d)?) } else { None };
    for j in 0..=config.cap {
        let lhs = cayley_sylvester(d, j, i);
        let rhs = cayley_sylvester(j, d, i);
        let nullspace_lhs = match &pd {
            Some(p) => nullspace_dim(p, j, i, config.max_slice)?,
            None => None,
        };
        let nullspace_rhs = if j >= 1 {
            nullspace_dim(&basic_pair(j)?, d, i, config.max_slice)?
        } else {
            None
        };
        let what = if lhs != rhs {
            Some(format!("reciprocity: {lhs} != {rhs}"))
        } else if nullspace_lhs.is_some_and(|n| n as u128 != lhs) {
            Some(format!(
                "nullspace of V_{d} in degree {j}: {} != {lhs}",
                nullspace_lhs.unwrap()
            ))
        } else if nullspace_rhs.is_some_and(|n| n as u128 != rhs) {
            Some(format!(
                "nullspace of V_{j} in degree {d}: {} != {rhs}",
                nullspace_rhs.unwrap()
            ))
        } else {
            None
        };
        if mismatch.is_none() {
            mismatch = what.map(|what| HermiteMismatch { d, j, i, what });
        }
        rows.push(HermiteRow {
            j,
            lhs,
            rhs,
            nullspace_lhs,
            nullspace_rhs,
        });
    }
    Ok(HermiteReport {
        passed: mismatch.is_none(),
        d,
        i,
        rows,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_partitions() {
        assert_eq!(partitions_in_box(2, 3, 2), 2);
        assert_eq!(partitions_in_box(2, 3, 1), 1);
        assert_eq!(partitions_in_box(0, 3, 0), 1);
        assert_eq!(partitions_in_box(3, 0, 0), 1);
        assert_eq!(partitions_in_box(3, 0, 1), 0);
        // Gaussian binomial [4 choose 2]_q = 1 + q + 2q² + q³ + q⁴
        let row: Vec<u128> = (0..=4).map(|t| partitions_in_box(2, 2, t)).collect();
        assert_eq!(row, vec![1, 1, 2, 1, 1]);
    }

    #[test]
    fn cayley_sylvester_examples() {
        assert_eq!(cayley_sylvester(3, 2, 2), 1);
        assert_eq!(cayley_sylvester(1, 1, 1), 1);
        for j in 0..=10 {
            assert_eq!(cayley_sylvester(4, j, 2), 0);
        }
        assert_eq!(cayley_sylvester(3, 2, 1), 0);
        assert_eq!(cayley_sylvester(3, 2, -2), 0);
        assert_eq!(cayley_sylvester(0, 3, 0), 1);
    }

    #[test]
    fn hermite_examples() {
        let cfg = HermiteConfig {
            cap: 6,
            max_slice: 300,
        };
        let r = hermite_check(5, 1, &cfg).unwrap();
        assert!(r.passed);
        assert_eq!(r.rows[5].lhs, r.rows[5].rhs);
        let r = hermite_check(7, 2, &cfg).unwrap();
        assert!(r.passed, "{:?}", r.mismatch);
        assert!(r
            .rows
            .iter()
            .any(|row| row.nullspace_lhs.is_some() && row.nullspace_rhs.is_some()));
        for i in 0..4 {
            let r = hermite_check(
                1,
                i,
                &HermiteConfig {
                    cap: 0,
                    max_slice: 10,
                },
            )
            .unwrap();
            assert!(r.passed && r.rows[0].lhs <= 1);
        }
    }
}
