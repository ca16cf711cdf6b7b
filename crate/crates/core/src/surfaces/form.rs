//! Homogeneous integer forms and a small parser for writing them down.
//!
//! The parser accepts the usual notation: `x1*x2 - x3^2`, `x4(x1+x2+x3)^2`,
//! `2x1 - 3x5`. Products may be implicit. Parenthesised sums are expanded.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::SurfaceError;

/// A homogeneous polynomial with integer coefficients in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousForm {
    nvars: usize,
    degree: u32,
    /// `(coefficient, exponent vector)`, sorted by exponent vector.
    terms: Vec<(i64, Vec<u32>)>,
}

type Poly = BTreeMap<Vec<u32>, i128>;

impl HomogeneousForm {
    /// Build a form from explicit terms. Zero coefficients are dropped and
    /// repeated monomials merged.
    pub fn from_terms(nvars: usize, terms: Vec<(i64, Vec<u32>)>) -> Result<Self, SurfaceError> {
        let mut p: Poly = BTreeMap::new();
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(SurfaceError::Parse(format!(
                    "monomial has {} exponents, expected {nvars}",
                    e.len()
                )));
            }
            *p.entry(e).or_insert(0) += c as i128;
        }
        Self::from_poly(nvars, p)
    }

    fn from_poly(nvars: usize, p: Poly) -> Result<Self, SurfaceError> {
        let mut terms = Vec::new();
        let mut degree = None;
        for (e, c) in p {
            if c == 0 {
                continue;
            }
            let c = i64::try_from(c)
                .map_err(|_| SurfaceError::Parse("coefficient overflows i64".into()))?;
            let d: u32 = e.iter().sum();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(SurfaceError::NotHomogeneous),
                _ => {}
            }
            terms.push((c, e));
        }
        let degree = degree.ok_or(SurfaceError::ZeroForm)?;
        Ok(HomogeneousForm {
            nvars,
            degree,
            terms,
        })
    }

    /// Parse a form in the variables `x1..x{nvars}`.
    pub fn parse(nvars: usize, src: &str) -> Result<Self, SurfaceError> {
        let mut parser = Parser {
            s: src.as_bytes(),
            pos: 0,
            nvars,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.s.len() {
            return Err(SurfaceError::Parse(format!(
                "unexpected input at byte {} of {src:?}",
                parser.pos
            )));
        }
        Self::from_poly(nvars, p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(i64, Vec<u32>)] {
        &self.terms
    }

    /// Exact value at an integer point.
    pub fn evaluate(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (c, e) in &self.terms {
            let mut t = BigInt::from(*c);
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Value at a small integer point. Callers keep `|x|` small enough that
    /// `|coeff| * |x|^degree` fits comfortably in an `i128`.
    pub fn eval_i128(&self, x: &[i64]) -> i128 {
        let mut acc = 0i128;
        for (c, e) in &self.terms {
            let mut t = *c as i128;
            for (&xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi as i128;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn vanishes_at(&self, x: &[BigInt]) -> bool {
        self.evaluate(x).is_zero()
    }

    /// Does the form involve variable `i`?
    pub fn involves(&self, i: usize) -> bool {
        self.terms.iter().any(|(_, e)| e[i] > 0)
    }

    /// Apply a diagonal sign change `x_i -> s_i x_i`.
    pub fn sign_twist(&self, signs: &[i64]) -> HomogeneousForm {
        let terms = self
            .terms
            .iter()
            .map(|(c, e)| {
                let s: i64 = e
                    .iter()
                    .zip(signs)
                    .map(|(&k, &s)| if k % 2 == 1 { s } else { 1 })
                    .product();
                (c * s, e.clone())
            })
            .collect();
        HomogeneousForm {
            nvars: self.nvars,
            degree: self.degree,
            terms,
        }
    }

    /// Twice the Gram matrix of a quadratic form, which keeps the entries integral.
    pub fn doubled_gram(&self) -> Option<Vec<Vec<i64>>> {
        if self.degree != 2 {
            return None;
        }
        let n = self.nvars;
        let mut g = vec![vec![0i64; n]; n];
        for (c, e) in &self.terms {
            let idx: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                g[i][i] += 2 * c;
            } else {
                g[i][j] += c;
                g[j][i] += c;
            }
        }
        Some(g)
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in self.terms.iter().rev() {
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            let mut factors = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{k}", i + 1)),
                }
            }
            if a != 1 || factors.is_empty() {
                factors.insert(0, a.to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> SurfaceError {
        SurfaceError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn expr(&mut self) -> Result<Poly, SurfaceError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                scale(&self.term()?, -1)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = add(&acc, &scale(&self.term()?, -1));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, SurfaceError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = mul(&acc, &self.power()?);
                }
                Some(b'x') | Some(b'(') | Some(b'0'..=b'9') => {
                    acc = mul(&acc, &self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, SurfaceError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.number()?;
            let mut acc = constant(self.nvars, 1);
            for _ in 0..k {
                acc = mul(&acc, &base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, SurfaceError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.number()? as usize;
                if i == 0 || i > self.nvars {
                    return Err(self.err(&format!("variable x{i} out of range")));
                }
                let mut e = vec![0u32; self.nvars];
                e[i - 1] = 1;
                Ok(BTreeMap::from([(e, 1)]))
            }
            Some(b'0'..=b'9') => {
                let c = self.number()?;
                Ok(constant(self.nvars, c as i128))
            }
            _ => Err(self.err("expected a variable, number or '('")),
        }
    }

    fn number(&mut self) -> Result<u64, SurfaceError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }
}

fn constant(nvars: usize, c: i128) -> Poly {
    BTreeMap::from([(vec![0u32; nvars], c)])
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn scale(a: &Poly, k: i128) -> Poly {
    a.iter().map(|(e, c)| (e.clone(), c * k)).collect()
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `x` as a vector of `BigInt`s.
pub fn big(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}

/// Exact value of `f` along `v + t w` for integer vectors and integer `t`.
pub(crate) fn eval_on_pencil(f: &HomogeneousForm, v: &[BigInt], w: &[BigInt], t: i64) -> BigInt {
    let t = BigInt::from(t);
    let x: Vec<BigInt> = v.iter().zip(w).map(|(a, b)| a + &t * b).collect();
    f.evaluate(&x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_powers() {
        let f = HomogeneousForm::parse(4, "x1x2(x1+x2)+x4(x1+x2+x3)^2").unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.eval_i128(&[1, 2, 3, 4]), 2 * 3 + 4 * 36);
    }

    #[test]
    fn rejects_inhomogeneous() {
        assert_eq!(
            HomogeneousForm::parse(3, "x1^2 + x2"),
            Err(SurfaceError::NotHomogeneous)
        );
    }

    #[test]
    fn fermat_values() {
        let f = HomogeneousForm::parse(4, "x1^3+x2^3+x3^3+x4^3").unwrap();
        assert_eq!(f.evaluate(&big(&[3, 4, 5, -6])), BigInt::zero());
        assert_eq!(f.evaluate(&big(&[1, 1, 1, 1])), BigInt::from(4));
    }

    #[test]
    fn display_round_trips() {
        let f = HomogeneousForm::parse(5, "x1*x5 + x2*x3 + x4^2 - 3x1x2").unwrap();
        let g = HomogeneousForm::parse(5, &f.to_string()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn gram_of_quadric() {
        let f = HomogeneousForm::parse(3, "x1*x2 - x3^2").unwrap();
        let g = f.doubled_gram().unwrap();
        assert_eq!(g, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]);
    }
}
