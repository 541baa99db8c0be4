//! (degree, weight)-graded slices of the ring and exact linear algebra on them.

mod counting;
mod criterion;
pub mod linalg;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::algebra::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::sl2::{FundamentalPair, Which};

pub use counting::{
    cayley_sylvester, hermite_check, partitions_in_box, HermiteConfig, HermiteMismatch,
    HermiteReport, HermiteRow,
};
pub use criterion::{
    criterion, doubled, verify_named_certificates, Certificate, CriterionVerdict, DegreeCounts,
    NamedCertificateCheck, NamedCertificateReport, Verdict, V3V3_ELEMENT, V4V4_ELEMENT,
};

/// A derivation restricted to a slice, as a dense matrix into the target slice.
#[derive(Debug, Clone)]
pub struct SliceMatrix {
    /// Row labels: the monomials hit by some image, descending.
    pub rows: Vec<Monomial>,
    pub entries: Vec<Vec<Rational>>,
}

/// Monomials of a fixed total degree and weight, in descending degrevlex order.
pub struct GradedComponent<'a> {
    pair: &'a FundamentalPair,
    degree: u32,
    weight: i64,
    basis: Vec<Monomial>,
    matrices: [OnceLock<SliceMatrix>; 2],
}

/// All monomials with the given degree and weight, descending.
pub fn slice_monomials(weights: &[i64], degree: u32, weight: i64) -> Vec<Monomial> {
    let n = weights.len();
    // suffix extremes of the weights, for pruning
    let mut lo = vec![i64::MAX; n + 1];
    let mut hi = vec![i64::MIN; n + 1];
    for i in (0..n).rev() {
        lo[i] = lo[i + 1].min(weights[i]);
        hi[i] = hi[i + 1].max(weights[i]);
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn go(
        i: usize,
        left: u32,
        target: i64,
        w: &[i64],
        lo: &[i64],
        hi: &[i64],
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        let n = w.len();
        if i == n {
            if left == 0 && target == 0 {
                out.push(Monomial::from_exponents(exps.clone()));
            }
            return;
        }
        let l = left as i64;
        if l * lo[i] > target || l * hi[i] < target {
            return;
        }
        if i == n - 1 {
            if l * w[i] == target {
                exps[i] = left;
                out.push(Monomial::from_exponents(exps.clone()));
                exps[i] = 0;
            }
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            go(
                i + 1,
                left - e,
                target - e as i64 * w[i],
                w,
                lo,
                hi,
                exps,
                out,
            );
        }
        exps[i] = 0;
    }
    if n == 0 {
        if degree == 0 && weight == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    go(0, degree, weight, weights, &lo, &hi, &mut exps, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// The slice of `pair`'s ring in the given degree and weight.
pub fn component(pair: &FundamentalPair, degree: u32, weight: i64) -> Result<GradedComponent<'_>> {
    let weights = pair.require_weights()?;
    Ok(GradedComponent {
        pair,
        degree,
        weight,
        basis: slice_monomials(weights, degree, weight),
        matrices: [OnceLock::new(), OnceLock::new()],
    })
}

fn slot(which: Which) -> usize {
    match which {
        Which::D => 0,
        Which::U => 1,
    }
}

impl<'a> GradedComponent<'a> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis_polynomials(&self) -> Vec<Polynomial> {
        let one = Rational::from_integer(1.into());
        self.basis
            .iter()
            .map(|m| Polynomial::monomial(self.pair.vars(), m.clone(), one.clone()))
            .collect()
    }

    /// Combination `Σ c_k basis_k`.
    pub fn combine(&self, coeffs: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            self.pair.vars(),
            self.basis.iter().cloned().zip(coeffs.iter().cloned()),
        )
    }

    /// Coordinates of `f` in this slice, or `None` if `f` has terms outside it.
    pub fn coordinates(&self, f: &Polynomial) -> Option<Vec<Rational>> {
        let index: BTreeMap<&Monomial, usize> =
            self.basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut out = vec![Rational::from_integer(0.into()); self.basis.len()];
        for (m, c) in f.terms() {
            out[*index.get(m)?] = c.clone();
        }
        Some(out)
    }

    /// Matrix of `which` on this slice, built column by column and cached.
    pub fn matrix(&self, which: Which) -> Result<&SliceMatrix> {
        if let Some(m) = self.matrices[slot(which)].get() {
            return Ok(m);
        }
        let built = self.build_matrix(|p| self.pair.get(which).apply(p))?;
        Ok(self.matrices[slot(which)].get_or_init(|| built))
    }

    fn build_matrix(&self, op: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<SliceMatrix> {
        let images: Vec<Polynomial> = self
            .basis_polynomials()
            .iter()
            .map(op)
            .collect::<Result<_>>()?;
        let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
        for img in &images {
            for (m, _) in img.terms() {
                row_of.entry(m.clone()).or_insert(0);
            }
        }
        let rows: Vec<Monomial> = row_of.keys().rev().cloned().collect();
        for (k, m) in rows.iter().enumerate() {
            row_of.insert(m.clone(), k);
        }
        let zero = Rational::from_integer(0.into());
        let mut entries = vec![vec![zero; images.len()]; rows.len()];
        for (col, img) in images.iter().enumerate() {
            for (m, c) in img.terms() {
                entries[row_of[m]][col] = c.clone();
            }
        }
        Ok(SliceMatrix { rows, entries })
    }

    /// Kernel of `which` on this slice: one primitive integral vector per
    /// free column of the echelon form.
    pub fn kernel(&self, which: Which) -> Result<Vec<Polynomial>> {
        let m = self.matrix(which)?;
        Ok(linalg::nullspace(&m.entries, self.basis.len())?
            .iter()
            .map(|v| self.combine(v).primitive())
            .collect())
    }

    pub fn kernel_dimension(&self, which: Which) -> Result<usize> {
        let m = self.matrix(which)?;
        Ok(self.basis.len() - linalg::rank(&m.entries, self.basis.len())?)
    }
}

/// Basis of `ker(which)` on the (degree, weight) slice.
pub fn kernel_basis(
    pair: &FundamentalPair,
    which: Which,
    degree: u32,
    weight: i64,
) -> Result<Vec<Polynomial>> {
    component(pair, degree, weight)?.kernel(which)
}

/// `g` in the slice of degree `deg h` and weight `weight(h) - n·shift` with
/// `whichⁿ g = h`, if one exists.
pub fn solve_image(
    pair: &FundamentalPair,
    which: Which,
    n: usize,
    h: &Polynomial,
) -> Result<Option<Polynomial>> {
    if n == 0 {
        return Err(Error::Precondition("power must be positive".into()));
    }
    pair.require_weights()?;
    if h.is_zero() {
        return Ok(Some(Polynomial::zero(pair.vars())));
    }
    let w = pair.weight_of(h)?.ok_or(Error::NotHomogeneous)?;
    let der = pair.get(which);
    if der
        .images()
        .iter()
        .any(|img| img.terms().any(|(m, _)| m.degree() != 1))
    {
        return Err(Error::Precondition(
            "image solving needs a derivation with linear images".into(),
        ));
    }
    let source_weight = w - n as i64 * which.weight_shift();
    let mut by_degree: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (m, c) in h.terms() {
        by_degree
            .entry(m.degree())
            .or_insert_with(|| Polynomial::zero(pair.vars()))
            .add_term(m.clone(), c.clone());
    }
    let mut g = Polynomial::zero(pair.vars());
    for (degree, part) in by_degree {
        let comp = component(pair, degree, source_weight)?;
        let mat = comp.build_matrix(|p| der.apply_n(p, n))?;
        let rhs: Vec<Rational> = mat.rows.iter().map(|m| part.coefficient(m)).collect();
        // terms of h outside every image are unreachable
        if part.terms().any(|(m, _)| !mat.rows.contains(m)) {
            return Ok(None);
        }
        match linalg::solve(&mat.entries, comp.len(), &rhs)? {
            Some(x) => g = &g + &comp.combine(&x),
            None => return Ok(None),
        }
    }
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::{alpha_involution, basic_pair};

    fn brute_force(weights: &[i64], degree: u32, weight: i64) -> Vec<Monomial> {
        crate::sl2::monomials_of_degree(weights.len(), degree)
            .into_iter()
            .filter(|m| m.weight(weights) == weight)
            .collect()
    }

    #[test]
    fn component_examples() {
        let p3 = basic_pair(3).unwrap();
        let c = component(&p3, 2, 2).unwrap();
        let names: Vec<String> = c
            .basis_polynomials()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(names, vec!["x1^2", "x0*x2"]);
        assert_eq!(
            component(&p3, 0, 0).unwrap().basis_polynomials()[0].to_string(),
            "1"
        );
        assert!(component(&basic_pair(2).unwrap(), 1, 1).unwrap().is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for d in 1..=5 {
            let p = basic_pair(d).unwrap();
            let w = p.weights().unwrap();
            for deg in 0..=4 {
                for wt in -(deg as i64 * d as i64)..=(deg as i64 * d as i64) {
                    assert_eq!(
                        component(&p, deg, wt).unwrap().basis,
                        brute_force(w, deg, wt)
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let p3 = basic_pair(3).unwrap();
        let k = kernel_basis(&p3, Which::D, 2, 2).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k[0]
            .proportionality(&p3.parse("2*x0*x2 - x1^2").unwrap())
            .is_some());
        for d in 1..=6 {
            let p = basic_pair(d).unwrap();
            let k = kernel_basis(&p, Which::D, 1, d as i64).unwrap();
            assert_eq!(k, vec![p.parse("x0").unwrap()]);
        }
        let p5 = basic_pair(5).unwrap();
        assert!(!kernel_basis(&p5, Which::D, 5, 1).unwrap().is_empty());
    }

    #[test]
    fn matrix_cache_is_reused() {
        let p = basic_pair(4).unwrap();
        let c = component(&p, 3, 2).unwrap();
        let a = c.matrix(Which::D).unwrap() as *const SliceMatrix;
        let b = c.matrix(Which::D).unwrap() as *const SliceMatrix;
        assert_eq!(a, b);
    }

    #[test]
    fn u_kernel_mirrors_d_kernel() {
        for d in 1..=4 {
            let p = basic_pair(d).unwrap();
            let alpha = alpha_involution(d).unwrap();
            for deg in 1..=4 {
                for w in 0..=(deg as i64 * d as i64) {
                    let kd = kernel_basis(&p, Which::D, deg, w).unwrap();
                    let ku = kernel_basis(&p, Which::U, deg, -w).unwrap();
                    assert_eq!(kd.len(), ku.len());
                    for f in &kd {
                        assert!(p.u().apply(&alpha.apply(f).unwrap()).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn solve_image_examples() {
        let p3 = basic_pair(3).unwrap();
        let t2 = p3.parse("2*x0*x2 - x1^2").unwrap();
        let g = solve_image(&p3, Which::D, 2, &t2).unwrap().unwrap();
        assert_eq!(p3.d().apply_n(&g, 2).unwrap(), t2);
        assert_eq!(solve_image(&p3, Which::D, 3, &t2).unwrap(), None);
        assert_eq!(
            solve_image(&p3, Which::D, 4, &p3.parse("x0").unwrap()).unwrap(),
            None
        );
        assert!(solve_image(&p3, Which::D, 1, &Polynomial::zero(p3.vars()))
            .unwrap()
            .unwrap()
            .is_zero());
        assert!(matches!(
            solve_image(&p3, Which::D, 1, &p3.parse("x0 + x1").unwrap()),
            Err(Error::NotHomogeneous)
        ));
    }
}
