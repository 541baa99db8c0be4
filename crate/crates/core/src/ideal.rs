//! Gröbner bases under degrevlex (Buchberger with the coprime criterion),
//! normal forms and ideal membership.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{same_ring, Monomial, Polynomial, Rational, VarTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroebnerGuards {
    #[serde(rename = "maxVars")]
    pub max_vars: usize,
    #[serde(rename = "maxBasis")]
    pub max_basis: usize,
    #[serde(rename = "maxDegree")]
    pub max_degree: u32,
}

impl Default for GroebnerGuards {
    fn default() -> Self {
        GroebnerGuards {
            max_vars: 12,
            max_basis: 500,
            max_degree: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdealBasis {
    vars: Option<Arc<VarTable>>,
    generators: Vec<Polynomial>,
    groebner: Option<Vec<Polynomial>>,
    guards: GroebnerGuards,
}

fn monic(p: &Polynomial) -> Polynomial {
    match p.leading_term() {
        Ok((_, c)) => p.scale(&c.recip()),
        Err(_) => p.clone(),
    }
}

/// Full reduction of `f` by `basis` (every term, not only the leading one).
pub fn reduce(f: &Polynomial, basis: &[Polynomial]) -> Result<Polynomial> {
    let leads: Vec<(Monomial, Rational)> = basis
        .iter()
        .map(|g| g.leading_term().map(|(m, c)| (m.clone(), c.clone())))
        .collect::<Result<_>>()?;
    let mut p = f.clone();
    let mut rem = Polynomial::zero(f.vars());
    while !p.is_zero() {
        let (m, c) = {
            let (m, c) = p.leading_term()?;
            (m.clone(), c.clone())
        };
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let q = leads[k].0.quotient_of(&m).expect("divisor checked");
                let factor = &c / &leads[k].1;
                p = p.checked_sub(&basis[k].mul_monomial(&q, &factor))?;
            }
            None => {
                rem.add_term(m.clone(), c.clone());
                p.add_term(m, -c);
            }
        }
    }
    Ok(rem)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let (mf, cf) = f.leading_term()?;
    let (mg, cg) = g.leading_term()?;
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).expect("lcm"), &cg.clone());
    let b = g.mul_monomial(&mg.quotient_of(&l).expect("lcm"), &cf.clone());
    a.checked_sub(&b)
}

impl IdealBasis {
    /// An ideal with no Gröbner basis computed yet.
    pub fn new(generators: &[Polynomial], guards: GroebnerGuards) -> Result<Self> {
        let vars = generators.first().map(|g| g.vars().clone());
        if let Some(v) = &vars {
            if generators.iter().any(|g| !same_ring(g.vars(), v)) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(IdealBasis {
            vars,
            generators: generators.to_vec(),
            groebner: None,
            guards,
        })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn guards(&self) -> GroebnerGuards {
        self.guards
    }

    pub fn groebner_basis(&self) -> Option<&[Polynomial]> {
        self.groebner.as_deref()
    }

    fn check_guards(&self, p: &Polynomial, basis_len: usize) -> Result<()> {
        if basis_len > self.guards.max_basis {
            return Err(Error::GuardExceeded(format!(
                "basis size above {}",
                self.guards.max_basis
            )));
        }
        if p.total_degree().unwrap_or(0) > self.guards.max_degree {
            return Err(Error::GuardExceeded(format!(
                "degree above {}",
                self.guards.max_degree
            )));
        }
        Ok(())
    }

    /// Runs Buchberger completion and stores the reduced basis.
    pub fn compute(&mut self) -> Result<()> {
        if let Some(v) = &self.vars {
            if v.len() > self.guards.max_vars {
                return Err(Error::GuardExceeded(format!(
                    "{} variables, cap {}",
                    v.len(),
                    self.guards.max_vars
                )));
            }
        }
        let mut g: Vec<Polynomial> = Vec::new();
        for p in self.generators.iter().filter(|p| !p.is_zero()) {
            g.push(monic(p));
            self.check_guards(p, g.len())?;
        }
        let mut seq = 0u64;
        let mut queue: BinaryHeap<Reverse<(u32, u64, usize, usize)>> = BinaryHeap::new();
        let push = |queue: &mut BinaryHeap<_>,
                    seq: &mut u64,
                    g: &[Polynomial],
                    i: usize,
                    j: usize|
         -> Result<()> {
            let l = g[i].leading_term()?.0.lcm(g[j].leading_term()?.0);
            queue.push(Reverse((l.degree(), *seq, i, j)));
            *seq += 1;
            Ok(())
        };
        for j in 0..g.len() {
            for i in 0..j {
                push(&mut queue, &mut seq, &g, i, j)?;
            }
        }
        while let Some(Reverse((_, _, i, j))) = queue.pop() {
            if g.iter().any(|p| p.is_constant()) {
                break;
            }
            if g[i].leading_term()?.0.is_coprime(g[j].leading_term()?.0) {
                continue;
            }
            let r = reduce(&s_polynomial(&g[i], &g[j])?, &g)?;
            if r.is_zero() {
                continue;
            }
            let r = monic(&r);
            self.check_guards(&r, g.len() + 1)?;
            g.push(r);
            let new = g.len() - 1;
            for k in 0..new {
                push(&mut queue, &mut seq, &g, k, new)?;
            }
        }
        self.groebner = Some(self.inter_reduce(g)?);
        Ok(())
    }

    fn inter_reduce(&self, g: Vec<Polynomial>) -> Result<Vec<Polynomial>> {
        if let Some(one) = g.iter().find(|p| p.is_constant()) {
            return Ok(vec![monic(one)]);
        }
        let mut minimal: Vec<Polynomial> = Vec::new();
        for (k, p) in g.iter().enumerate() {
            let lm = p.leading_term()?.0;
            let redundant = g.iter().enumerate().any(|(l, q)| {
                let lq = q.leading_term().expect("nonzero").0;
                l != k && lq.divides(lm) && (lq != lm || l < k)
            });
            if !redundant {
                minimal.push(p.clone());
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, q)| q.clone())
                .collect();
            reduced.push(monic(&reduce(&minimal[k], &others)?));
        }
        reduced.sort_by(|a, b| {
            a.leading_term()
                .expect("nonzero")
                .0
                .cmp(b.leading_term().expect("nonzero").0)
        });
        Ok(reduced)
    }

    /// Unique remainder of `f` modulo the Gröbner basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        let basis = self.groebner.as_ref().ok_or(Error::BasisAbsent)?;
        if let Some(v) = &self.vars {
            if !same_ring(f.vars(), v) {
                return Err(Error::RingMismatch);
            }
        }
        reduce(f, basis)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> Result<bool> {
        let basis = self.groebner.as_ref().ok_or(Error::BasisAbsent)?;
        Ok(basis.iter().any(|p| p.is_constant()))
    }
}

/// Computes a reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner(gens: &[Polynomial], guards: GroebnerGuards) -> Result<IdealBasis> {
    let mut basis = IdealBasis::new(gens, guards)?;
    basis.compute()?;
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn ring(names: &[&str]) -> Arc<VarTable> {
        VarTable::new(names.iter().copied()).unwrap()
    }

    fn texts(b: &IdealBasis) -> Vec<String> {
        b.groebner_basis()
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect()
    }

    #[test]
    fn single_variable() {
        let v = ring(&["x0", "y0"]);
        let x0 = crate::parse::parse("x0", &v).unwrap();
        assert_eq!(
            texts(&groebner(&[x0], GroebnerGuards::default()).unwrap()),
            vec!["x0"]
        );
    }

    #[test]
    fn inconsistent_system() {
        let v = ring(&["x0", "y0"]);
        let gens = [
            crate::parse::parse("x0*y0 - 1", &v).unwrap(),
            crate::parse::parse("x0", &v).unwrap(),
        ];
        let b = groebner(&gens, GroebnerGuards::default()).unwrap();
        assert_eq!(texts(&b), vec!["1"]);
        assert!(b.is_unit().unwrap());
    }

    #[test]
    fn twisted_cubic() {
        let v = ring(&["x", "y", "z"]);
        let p = |s: &str| crate::parse::parse(s, &v).unwrap();
        let b = groebner(&[p("y - x^2"), p("z - x^3")], GroebnerGuards::default()).unwrap();
        for g in b.groebner_basis().unwrap() {
            assert!(b.contains(g).unwrap());
        }
        assert!(b.contains(&p("x*y - z")).unwrap());
        assert!(b.contains(&p("y^3 - z^2")).unwrap());
        assert!(!b.contains(&p("y - z")).unwrap());
        let gens = b.groebner_basis().unwrap();
        for (k, g) in gens.iter().enumerate() {
            let (lm, c) = g.leading_term().unwrap();
            assert_eq!(*c, rat(1));
            for (l, h) in gens.iter().enumerate() {
                if k != l {
                    assert!(!h.leading_term().unwrap().0.divides(lm));
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let v = ring(&["x", "y"]);
        let p = |s: &str| crate::parse::parse(s, &v).unwrap();
        let gen = p("x^2 - y");
        let b = groebner(std::slice::from_ref(&gen), GroebnerGuards::default()).unwrap();
        assert!(b.normal_form(&gen).unwrap().is_zero());
        assert_eq!(
            b.normal_form(&(&gen + &Polynomial::one(&v))).unwrap(),
            Polynomial::one(&v)
        );
        let unset = IdealBasis::new(&[gen], GroebnerGuards::default()).unwrap();
        assert!(matches!(
            unset.normal_form(&p("x")),
            Err(Error::BasisAbsent)
        ));
    }

    #[test]
    fn guards_fire() {
        let v = ring(&["x", "y"]);
        let p = |s: &str| crate::parse::parse(s, &v).unwrap();
        let tight = GroebnerGuards {
            max_vars: 1,
            ..GroebnerGuards::default()
        };
        assert!(matches!(
            groebner(&[p("x")], tight),
            Err(Error::GuardExceeded(_))
        ));
        let low = GroebnerGuards {
            max_degree: 2,
            ..GroebnerGuards::default()
        };
        assert!(matches!(
            groebner(&[p("x^3 - y")], low),
            Err(Error::GuardExceeded(_))
        ));
    }
}
