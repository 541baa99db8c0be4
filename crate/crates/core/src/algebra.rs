//! Exact rationals, monomials under degrevlex, and sparse multivariate
//! polynomials over ℚ.
//!
//! Variables are ordered `x_{N-1} > … > x_1 > x_0` by their position in the
//! [`VarTable`]; the total order on [`Monomial`] is degrevlex with respect to
//! that ranking. A [`Polynomial`] keeps its terms in a `BTreeMap` keyed by
//! monomial, so the leading term is the last entry and iteration in reverse
//! gives the canonical printing order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Ordered table of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    rank: HashMap<String, usize>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut rank = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::Precondition(format!(
                    "`{name}` is not a valid identifier"
                )));
            }
            if rank.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(Arc::new(VarTable { names, rank }))
    }

    /// `prefix0, prefix1, …, prefix{count-1}`.
    pub fn indexed(prefix: &str, count: usize) -> Result<Arc<Self>> {
        Self::new((0..count).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.rank.get(name).copied()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn same_ring(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

/// Dense exponent vector. `Ord` is degrevlex with the highest-index variable
/// largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Splits `self = m² · u` with `u` square-free; returns `(m, u)`.
    pub fn square_split(&self) -> (Monomial, Monomial) {
        let m = self.0.iter().map(|e| e / 2).collect();
        let u = self.0.iter().map(|e| e % 2).collect();
        (Monomial(m), Monomial(u))
    }

    /// Sum of `weights[i] * exponent[i]`.
    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: the smallest-index variable where the exponents
        // differ decides, and the monomial with the smaller exponent wins.
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The only monomial order the library uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    Degrevlex,
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Degrevlex => a.cmp(b),
        }
    }
}

/// Sparse polynomial with exact rational coefficients. Never stores a zero
/// coefficient, so structural equality is polynomial equality.
#[derive(Debug, Clone)]
pub struct Polynomial {
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<VarTable>, index: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), index), Rational::one())
    }

    pub fn var_named(vars: &Arc<VarTable>, name: &str) -> Result<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, i))
    }

    pub fn monomial(vars: &Arc<VarTable>, m: Monomial, c: Rational) -> Self {
        assert_eq!(
            m.nvars(),
            vars.len(),
            "monomial arity does not match the ring"
        );
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        vars: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending degrevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self) -> Result<(&Monomial, &Rational)> {
        self.terms.last_key_value().ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_term_in(&self, ord: MonomialOrder) -> Result<(Monomial, Rational)> {
        match ord {
            MonomialOrder::Degrevlex => self.leading_term().map(|(m, c)| (m.clone(), c.clone())),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_index`.
    pub fn partial(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[index] -= 1;
                out.add_term(Monomial(exps), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Ring homomorphism sending variable `i` to `images[i]`. The images may
    /// live in a different ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::Precondition(
                "substitution needs one image per variable".into(),
            ));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| !same_ring(&p.vars, &target)) {
            return Err(Error::RingMismatch);
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            for (mm, cc) in term.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point given as one rational per variable.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::Precondition(
                "point has the wrong number of coordinates".into(),
            ));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Moves the polynomial into a ring whose variable names include all of
    /// this ring's variables.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Polynomial> {
        if same_ring(&self.vars, target) {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownVariable(n.clone()))
            })
            .collect::<Result<_>>()?;
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] = e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Multiplies by the positive rational that makes all coefficients
    /// coprime integers with a positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        let Ok((_, lc)) = self.leading_term() else {
            return self.clone();
        };
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = num_integer::lcm(den, c.denom().clone());
            num = num_integer::gcd(num, c.numer().clone());
        }
        let mut factor = Rational::new(den, num);
        if lc.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Returns `Some(c)` if `self == c * other` for a nonzero rational `c`.
    pub fn proportionality(&self, other: &Polynomial) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m, a) = self.terms.last_key_value()?;
        let b = other.terms.get(m)?;
        let c = a / b;
        (other.scale(&c) == *self).then_some(c)
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs)
            .expect("polynomial addition across rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs)
            .expect("polynomial subtraction across rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("polynomial multiplication across rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print(self))
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Univariate polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(pub Vec<BigInt>);

impl UniPoly {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| {
            acc * x + Rational::from_integer(c.clone())
        })
    }

    /// Multiplies by `(x + shift)`.
    pub fn mul_linear(&self, shift: i64) -> UniPoly {
        let mut out = vec![BigInt::zero(); self.0.len() + 1];
        for (i, c) in self.0.iter().enumerate() {
            out[i + 1] += c;
            out[i] += c * shift;
        }
        UniPoly(out)
    }

    pub fn coefficients_i64(&self) -> Vec<i64> {
        self.0
            .iter()
            .map(|c| c.to_i64().expect("coefficient fits in i64"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Arc<VarTable> {
        VarTable::indexed("x", n).unwrap()
    }

    #[test]
    fn degrevlex_on_quadratics() {
        // x1^2 > x0*x2 > x0^2 and x2 > x1 > x0
        let a = Monomial(vec![0, 2, 0]);
        let b = Monomial(vec![1, 0, 1]);
        let c = Monomial(vec![2, 0, 0]);
        assert!(a > b && b > c);
        assert!(Monomial::var(3, 2) > Monomial::var(3, 1));
        assert!(Monomial::var(3, 1) > Monomial::var(3, 0));
        assert!(Monomial(vec![0, 0, 0, 1]) < Monomial(vec![2, 0, 0, 0]));
    }

    #[test]
    fn chain_of_centered_products() {
        for n in 2..=9 {
            for t in 1..=(n - 1) / 2 {
                let mut prev: Option<Monomial> = None;
                for j in 0..=t {
                    let mut e = vec![0u32; n];
                    e[t - j] += 1;
                    e[t + j] += 1;
                    let m = Monomial(e);
                    if let Some(p) = prev {
                        assert!(p > m, "n={n} t={t} j={j}");
                    }
                    prev = Some(m);
                }
            }
        }
    }

    #[test]
    fn leading_term_of_t2() {
        let r = ring(3);
        let x = |i| Polynomial::var(&r, i);
        let t2 = &(&x(0) * &x(2)).scale(&rat(2)) - &(&x(1) * &x(1));
        let (m, c) = t2.leading_term().unwrap();
        assert_eq!(m.exponents(), &[0, 2, 0]);
        assert_eq!(*c, rat(-1));
        let x0 = x(0);
        let (m, c) = x0.leading_term().unwrap();
        assert_eq!((m.exponents(), c.clone()), (&[1u32, 0, 0][..], rat(1)));
        assert_eq!(
            Polynomial::zero(&r).leading_term(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn sub_to_zero_and_mismatch() {
        let r = ring(2);
        let x0 = Polynomial::var(&r, 0);
        assert!((&x0 - &x0).is_zero());
        let other = VarTable::indexed("y", 2).unwrap();
        assert_eq!(
            x0.checked_add(&Polynomial::var(&other, 0)),
            Err(Error::RingMismatch)
        );
    }

    #[test]
    fn square_of_slice_matches_dense_expansion() {
        // Dense oracle: coefficients of (3 a d - b c)^2 collected by hand over
        // exponent vectors of (a,b,c,d) = (x0,x1,x2,x3).
        let r = ring(4);
        let x = |i| Polynomial::var(&r, i);
        let s = &(&x(0) * &x(3)).scale(&rat(3)) - &(&x(1) * &x(2));
        let sq = &s * &s;
        let mut dense: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        let factors = [(3i64, [1u32, 0, 0, 1]), (-1, [0, 1, 1, 0])];
        for (ca, ea) in &factors {
            for (cb, eb) in &factors {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *dense.entry(e).or_default() += ca * cb;
            }
        }
        assert_eq!(sq.num_terms(), dense.len());
        for (e, c) in dense {
            assert_eq!(sq.coefficient(&Monomial(e)), rat(c));
        }
    }

    #[test]
    fn substitute_and_embed() {
        let r = ring(2);
        let p = &Polynomial::var(&r, 0) * &Polynomial::var(&r, 1);
        let swapped = p
            .substitute(&[Polynomial::var(&r, 1), Polynomial::var(&r, 0)])
            .unwrap();
        assert_eq!(swapped, p);
        let big = VarTable::new(["y", "x1", "x0"]).unwrap();
        let e = p.embed(&big).unwrap();
        assert_eq!(e.coefficient(&Monomial(vec![0, 1, 1])), rat(1));
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let r = ring(3);
        let x = |i| Polynomial::var(&r, i);
        let p = (&(&x(0) * &x(2)) - &(&x(1) * &x(1)).scale(&ratio(1, 2))).scale(&ratio(-4, 3));
        let q = p.primitive();
        assert_eq!(q.coefficient(&Monomial(vec![0, 2, 0])), rat(1));
        assert_eq!(q.coefficient(&Monomial(vec![1, 0, 1])), rat(-2));
        assert!(q.proportionality(&p).is_some());
    }

    #[test]
    fn unipoly_linear_factors() {
        let p = UniPoly(vec![BigInt::one()])
            .mul_linear(0)
            .mul_linear(-1)
            .mul_linear(-2);
        assert_eq!(p.coefficients_i64(), vec![0, 2, -3, 1]);
        assert_eq!(p.eval(&rat(3)), rat(6));
    }
}
