//! Text format for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := ident ('^' uint)?
//! coeff  := int ('/' uint)?
//! ```
//!
//! Whitespace is ignored. A sign may precede the first term. Printing emits
//! the same grammar with terms in descending degrevlex order, so
//! `parse(print(p)) == p`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Monomial, Polynomial, Rational, VarTable};
use crate::error::{Error, Result};

pub fn parse(text: &str, vars: &Arc<VarTable>) -> Result<Polynomial> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    }
    .expr()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Arc<VarTable>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.vars);
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negate { -c } else { c });
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(ch) => return self.err(format!("unexpected character `{}`", ch as char)),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut mono = Monomial::one(self.vars.len());
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = self.coeff()?;
                if self.peek() != Some(b'*') {
                    return Ok((mono, c));
                }
                self.pos += 1;
                c
            }
            Some(c) if c.is_ascii_alphabetic() => Rational::one(),
            Some(c) => return self.err(format!("expected a term, found `{}`", c as char)),
            None => return self.err("expected a term, found end of input"),
        };
        loop {
            let (index, exp) = self.factor()?;
            let mut e = vec![0u32; self.vars.len()];
            e[index] = exp;
            mono = mono.mul(&Monomial::from_exponents(e));
            if self.peek() != Some(b'*') {
                return Ok((mono, coeff));
            }
            self.pos += 1;
        }
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return self.err("expected a variable name"),
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let index = self
            .vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            let e = u32::try_from(&e).map_err(|_| Error::Parse {
                pos: self.pos,
                msg: "exponent too large".into(),
            })?;
            return Ok((index, e));
        }
        Ok((index, 1))
    }

    fn coeff(&mut self) -> Result<Rational> {
        let num = self.uint()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.uint()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an unsigned integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }
}

pub fn print(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let vars = p.vars();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (idx, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars.name(idx).to_string()),
                _ => factors.push(format!("{}^{}", vars.name(idx), e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Parses a rational literal such as `-4/3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("`{text}` is not a rational number"),
    };
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    if n.is_empty()
        || !n.bytes().all(|b| b.is_ascii_digit())
        || d.is_empty()
        || !d.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}
