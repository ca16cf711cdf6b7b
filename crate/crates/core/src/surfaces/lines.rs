//! Excluded loci: lines on a surface and the rational points of Galois-conjugate lines.
//!
//! A `LineLocus` is the common zero set of a few integer linear forms. For a
//! line defined over `Q` this is the line itself. A line that is only defined
//! over a number field meets `P^{n-1}(Q)` in a rational linear subspace of
//! smaller dimension (a point or nothing), and that subspace is what gets
//! stored; for deciding whether a rational point lies on the line it is exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::form::{big, eval_on_pencil, HomogeneousForm};
use super::SurfaceError;
use crate::linalg::QMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineLocus {
    pub label: String,
    /// Coefficient vectors of the defining linear forms.
    pub forms: Vec<Vec<i64>>,
}

impl LineLocus {
    pub fn new(label: impl Into<String>, forms: Vec<Vec<i64>>) -> Self {
        LineLocus {
            label: label.into(),
            forms,
        }
    }

    /// Parse forms such as `"x1"`, `"x1+x2"`, `"x3-2x4"`.
    pub fn parse(label: &str, nvars: usize, forms: &[&str]) -> Result<Self, SurfaceError> {
        let mut out = Vec::new();
        for src in forms {
            let f = HomogeneousForm::parse(nvars, src)?;
            if f.degree() != 1 {
                return Err(SurfaceError::Parse(format!("{src:?} is not linear")));
            }
            let mut v = vec![0i64; nvars];
            for (c, e) in f.terms() {
                let i = e.iter().position(|&k| k == 1).expect("linear monomial");
                v[i] = *c;
            }
            out.push(v);
        }
        Ok(LineLocus::new(label, out))
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.forms.iter().all(|f| {
            f.iter()
                .zip(x)
                .map(|(a, b)| *a as i128 * *b as i128)
                .sum::<i128>()
                == 0
        })
    }

    /// Projective dimension of the locus: 1 for a line, 0 for a point, -1 if empty.
    pub fn projective_dim(&self, nvars: usize) -> i64 {
        self.kernel(nvars).len() as i64 - 1
    }

    fn kernel(&self, nvars: usize) -> Vec<Vec<BigInt>> {
        if self.forms.is_empty() {
            return (0..nvars)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); nvars];
                    v[i] = BigInt::one();
                    v
                })
                .collect();
        }
        QMatrix::from_i64(&self.forms).kernel()
    }

    /// Check that the locus lies on every form, exactly.
    ///
    /// On a line spanned by `v, w` the restriction `f(v + t w)` is a binary form
    /// of degree `d` in `(1 : t)` and `(0 : 1)`; it vanishes identically once it
    /// vanishes at `w` and at `t = 0, ..., d`.
    pub fn lies_on(&self, forms: &[HomogeneousForm]) -> Result<bool, SurfaceError> {
        let Some(n) = forms.first().map(|f| f.nvars()) else {
            return Ok(true);
        };
        let k = self.kernel(n);
        match k.len() {
            0 => Ok(true),
            1 => Ok(forms.iter().all(|f| f.evaluate(&k[0]).is_zero())),
            2 => Ok(forms.iter().all(|f| {
                f.evaluate(&k[1]).is_zero()
                    && (0..=f.degree() as i64).all(|t| eval_on_pencil(f, &k[0], &k[1], t).is_zero())
            })),
            d => Err(SurfaceError::NotALine {
                label: self.label.clone(),
                dim: d as i64 - 1,
            }),
        }
    }
}

/// Does `x` lie on any of the loci?
pub fn on_any(lines: &[LineLocus], x: &[i64]) -> bool {
    lines.iter().any(|l| l.contains(x))
}

/// Integer point helper for tests and examples.
pub fn vanishes(forms: &[HomogeneousForm], x: &[i64]) -> bool {
    let b = big(x);
    forms.iter().all(|f| f.vanishes_at(&b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_on_fermat() {
        let f = HomogeneousForm::parse(4, "x1^3+x2^3+x3^3+x4^3").unwrap();
        let l = LineLocus::parse("L", 4, &["x1+x2", "x3+x4"]).unwrap();
        assert!(l.lies_on(std::slice::from_ref(&f)).unwrap());
        assert_eq!(l.projective_dim(4), 1);
        let bad = LineLocus::parse("M", 4, &["x1-x2", "x3+x4"]).unwrap();
        assert!(!bad.lies_on(&[f]).unwrap());
    }

    #[test]
    fn rational_locus_of_conjugate_line_is_a_point() {
        let l = LineLocus::new(
            "pt",
            vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 1, 0, 0]],
        );
        assert_eq!(l.projective_dim(4), 0);
        assert!(l.contains(&[1, -1, 0, 0]));
    }
}
