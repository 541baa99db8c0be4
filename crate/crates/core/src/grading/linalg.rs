//! Fraction-free (Bareiss) row reduction over ℤ for exact nullspaces,
//! ranks and linear solves of rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

/// Row echelon form over ℤ with the pivot column of each nonzero row.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| c.numer() * (&den / c.denom())).collect()
}

/// Bareiss elimination. Pivots are the leftmost available nonzero column,
/// taken from the first row (in input order) that has it.
pub fn echelon(matrix: &[Vec<Rational>], ncols: usize) -> Result<Echelon> {
    let mut a: Vec<Vec<BigInt>> = matrix.iter().map(|r| integer_row(r)).collect();
    if a.iter().any(|r| r.len() != ncols) {
        return Err(Error::Internal("ragged matrix".into()));
    }
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[col].clone();
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let num = &pivot * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                if !rem.is_zero() {
                    return Err(Error::Internal("Bareiss step was not exact".into()));
                }
                row[j] = q;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Ok(Echelon {
        rows: a,
        pivots,
        ncols,
    })
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back-substitutes with the given values on the free columns.
    fn back_substitute(
        &self,
        free_values: impl Fn(usize) -> Rational,
        rhs: Option<&[BigInt]>,
    ) -> Vec<Rational> {
        let mut x: Vec<Rational> = vec![Rational::zero(); self.ncols];
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for (j, xj) in x.iter_mut().enumerate() {
            if !is_pivot[j] {
                *xj = free_values(j);
            }
        }
        for (k, &p) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[k];
            let mut acc = match rhs {
                Some(b) => Rational::from_integer(b[k].clone()),
                None => Rational::zero(),
            };
            for j in p + 1..self.ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = acc / Rational::from_integer(row[p].clone());
        }
        x
    }
}

/// Nullspace basis: one vector per free column (in column order), with a 1
/// in that column and 0 in the other free columns.
pub fn nullspace(matrix: &[Vec<Rational>], ncols: usize) -> Result<Vec<Vec<Rational>>> {
    let ech = echelon(matrix, ncols)?;
    let mut is_pivot = vec![false; ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    Ok((0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            ech.back_substitute(
                |j| {
                    if j == f {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                },
                None,
            )
        })
        .collect())
}

pub fn rank(matrix: &[Vec<Rational>], ncols: usize) -> Result<usize> {
    Ok(echelon(matrix, ncols)?.rank())
}

/// Some solution of `A x = b` (free variables set to zero), if one exists.
pub fn solve(
    matrix: &[Vec<Rational>],
    ncols: usize,
    b: &[Rational],
) -> Result<Option<Vec<Rational>>> {
    if matrix.len() != b.len() {
        return Err(Error::Internal("right-hand side length mismatch".into()));
    }
    let augmented: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    let ech = echelon(&augmented, ncols + 1)?;
    if ech.pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let coeffs = Echelon {
        rows: ech.rows.iter().map(|r| r[..ncols].to_vec()).collect(),
        pivots: ech.pivots.clone(),
        ncols,
    };
    let rhs: Vec<BigInt> = ech.rows.iter().map(|r| r[ncols].clone()).collect();
    Ok(Some(
        coeffs.back_substitute(|_| Rational::zero(), Some(&rhs)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    fn mul(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum())
            .collect()
    }

    #[test]
    fn nullspace_of_small_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = nullspace(&a, 3).unwrap();
        assert_eq!(ns, vec![vec![rat(-1), rat(-1), rat(1)]]);
        assert_eq!(rank(&a, 3).unwrap(), 2);
    }

    #[test]
    fn skipped_columns_stay_exact() {
        let a = m(&[&[0, 2, 1, 4], &[0, 4, 3, 1], &[0, 6, 5, 0]]);
        let ns = nullspace(&a, 4).unwrap();
        for v in &ns {
            assert!(mul(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(ns.len() + rank(&a, 4).unwrap(), 4);
    }

    #[test]
    fn rational_entries_and_solve() {
        let a = vec![vec![ratio(1, 2), ratio(1, 3)], vec![rat(1), rat(-1)]];
        let b = vec![rat(1), rat(0)];
        let x = solve(&a, 2, &b).unwrap().unwrap();
        assert_eq!(mul(&a, &x), b);
        let singular = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&singular, 2, &[rat(1), rat(3)]).unwrap(), None);
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(nullspace(&[], 3).unwrap().len(), 3);
        assert!(nullspace(&m(&[&[]]), 0).unwrap().is_empty());
    }
}
