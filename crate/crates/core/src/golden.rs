//! Fixed identities among the low-degree covariants of the binary cubic,
//! and the explicit kernel elements on `V₃⊕V₃` and `V₄⊕V₄`.

use serde::Serialize;

use crate::algebra::rat;
use crate::check::{assert_eq_poly, Assertion};
use crate::error::Result;
use crate::grading::{doubled, V3V3_ELEMENT, V4V4_ELEMENT};
use crate::sl2::basic_pair;

pub const F: &str = "2*x0*x2 - x1^2";
pub const G: &str = "3*x0^2*x3 - 3*x0*x1*x2 + x1^3";
pub const H: &str = "9*x0^2*x3^2 - 18*x0*x1*x2*x3 + 8*x0*x2^3 + 6*x1^3*x3 - 3*x1^2*x2^2";
pub const F_DUAL: &str = "3*x1*x3 - 2*x2^2";
pub const G_DUAL: &str = "3*x0*x3^2 - 3*x1*x2*x3 + 4/3*x2^3";
pub const S: &str = "3*x0*x3 - x1*x2";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    D3,
    V3v3,
    V4v4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub suite: Suite,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
}

fn d3() -> Result<Vec<Assertion>> {
    let p = basic_pair(3)?;
    let [f, g, h, ff, gg, s] = [F, G, H, F_DUAL, G_DUAL, S].map(|t| p.parse(t));
    let (f, g, h, ff, gg, s) = (f?, g?, h?, ff?, gg?, s?);
    let x0 = p.parse("x0")?;
    let x3 = p.parse("x3")?;
    let zero = crate::Polynomial::zero(p.vars());
    let (d, u) = (p.d(), p.u());
    Ok(vec![
        assert_eq_poly("D s = f", &d.apply(&s)?, &f),
        assert_eq_poly("D g = 0", &d.apply(&g)?, &zero),
        assert_eq_poly("D h = 0", &d.apply(&h)?, &zero),
        assert_eq_poly("U F = 0", &u.apply(&ff)?, &zero),
        assert_eq_poly("U G = 0", &u.apply(&gg)?, &zero),
        assert_eq_poly(
            "s^2 = h + 2 f F",
            &s.pow(2),
            &(&h + &(&f * &ff).scale(&rat(2))),
        ),
        assert_eq_poly(
            "6 f^3 x3 = x0 s^3 - 3 g s^2 + 3 x0 h s - g h",
            &(&f.pow(3) * &x3).scale(&rat(6)),
            &(&(&(&(&x0 * &s.pow(3)) - &(&g * &s.pow(2)).scale(&rat(3)))
                + &(&(&x0 * &h) * &s).scale(&rat(3)))
                - &(&g * &h)),
        ),
    ])
}

fn named(d: usize, text: &str, weight: i64) -> Result<Vec<Assertion>> {
    let p = doubled(d)?;
    let f = p.parse(text)?;
    let zero = crate::Polynomial::zero(p.vars());
    Ok(vec![
        Assertion::flag("element is nonzero", !f.is_zero()),
        assert_eq_poly("D(element) = 0", &p.d().apply(&f)?, &zero),
        Assertion::flag(
            format!("weight(element) = {weight}"),
            p.weight_of(&f)? == Some(weight),
        ),
        assert_eq_poly(
            &format!("E(element) = {weight} element"),
            &p.e().apply(&f)?,
            &f.scale(&rat(weight)),
        ),
    ])
}

pub fn golden(suite: Suite) -> Result<GoldenReport> {
    let assertions = match suite {
        Suite::D3 => d3()?,
        Suite::V3v3 => named(3, V3V3_ELEMENT, 1)?,
        Suite::V4v4 => named(4, V4V4_ELEMENT, 2)?,
    };
    Ok(GoldenReport {
        suite,
        passed: assertions.iter().all(|a| a.passed),
        assertions,
    })
}
