//! Segre symbols of pencils of quadrics in `P^4`, and the classification of
//! intersections of two quadrics (del Pezzo surfaces of degree four) that it
//! gives.
//!
//! For a pencil `Q1 + t Q2` with some member nonsingular, the symbol records
//! the Jordan block sizes of `(A + t B)^{-1} B`, grouped by eigenvalue. A group
//! with more than one block is printed in its own parentheses.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use super::poly::{char_poly, QPoly};
use crate::arith::{int, rat, Rational};
use crate::linalg::QMatrix;
use crate::surfaces::{HomogeneousForm, DP4_TYPES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegreError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("expected two {expected}x{expected} matrices")]
    WrongSize { expected: usize },
    #[error("form is not a quadric")]
    NotQuadric,
    #[error("no nonsingular member A + tB with |t| <= {searched}")]
    NoInvertibleMember { searched: i64 },
    #[error("symbol depends on the chosen pencil member: {0} vs {1}")]
    Inconsistent(String, String),
    #[error("could not parse Segre symbol {0:?}")]
    Parse(String),
    #[error("symbol {0} is not one of the tabulated types")]
    NotInTable(String),
}

/// A Segre symbol: one group of Jordan block sizes per eigenvalue.
#[derive(Clone, Debug, Deserialize)]
#[serde(try_from = "String")]
pub struct SegreSymbol {
    groups: Vec<Vec<u32>>,
}

impl SegreSymbol {
    pub fn new(groups: Vec<Vec<u32>>) -> Self {
        let mut groups: Vec<Vec<u32>> = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|mut g| {
                g.sort_unstable_by(|a, b| b.cmp(a));
                g
            })
            .collect();
        groups.sort_by(|a, b| {
            let ta: u32 = a.iter().sum();
            let tb: u32 = b.iter().sum();
            tb.cmp(&ta).then_with(|| b.cmp(a))
        });
        SegreSymbol { groups }
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    pub fn size(&self) -> u32 {
        self.groups.iter().flatten().sum()
    }

    pub fn is_generic(&self) -> bool {
        self.groups.iter().all(|g| g == &[1])
    }
}

impl PartialEq for SegreSymbol {
    fn eq(&self, o: &Self) -> bool {
        self.groups == o.groups
    }
}

impl Eq for SegreSymbol {}

impl fmt::Display for SegreSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut compound: Vec<&Vec<u32>> = self.groups.iter().filter(|g| g.len() > 1).collect();
        compound.sort_by(|a, b| {
            let ta: u32 = a.iter().sum();
            let tb: u32 = b.iter().sum();
            tb.cmp(&ta).then_with(|| b.cmp(a))
        });
        let mut simple: Vec<u32> = self
            .groups
            .iter()
            .filter(|g| g.len() == 1)
            .map(|g| g[0])
            .collect();
        simple.sort_unstable_by(|a, b| b.cmp(a));
        let join = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let parts: Vec<String> = compound
            .iter()
            .map(|g| format!("({})", join(g)))
            .chain(simple.iter().map(|x| x.to_string()))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for SegreSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl TryFrom<String> for SegreSymbol {
    type Error = SegreError;
    fn try_from(s: String) -> Result<Self, SegreError> {
        s.parse()
    }
}

impl FromStr for SegreSymbol {
    type Err = SegreError;
    fn from_str(s: &str) -> Result<Self, SegreError> {
        let bad = || SegreError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut groups = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('(') {
                let end = r.find(')').ok_or_else(bad)?;
                let g = r[..end]
                    .split(',')
                    .map(|x| x.parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                groups.push(g);
                rest = &r[end + 1..];
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                groups.push(vec![rest[..end].parse::<u32>().map_err(|_| bad())?]);
                rest = &rest[end..];
            }
            rest = rest.strip_prefix(',').unwrap_or(rest);
        }
        if groups.is_empty() || groups.iter().flatten().any(|&x| x == 0) {
            return Err(bad());
        }
        Ok(SegreSymbol::new(groups))
    }
}

/// Symmetric matrix `A` with `Q(x) = x^T A x`.
pub fn quadric_matrix(q: &HomogeneousForm) -> Result<QMatrix, SegreError> {
    let g = q.doubled_gram().ok_or(SegreError::NotQuadric)?;
    Ok(QMatrix::from_i64(&g).scale(&rat(1, 2)))
}

const PENCIL_SEARCH: i64 = 25;

fn pencil_members<'a>(a: &'a QMatrix, b: &'a QMatrix) -> impl Iterator<Item = (i64, QMatrix)> + 'a {
    std::iter::once(0)
        .chain((1..=PENCIL_SEARCH).flat_map(|k| [k, -k]))
        .filter_map(move |t| {
            let m = a + &b.scale(&int(t));
            m.inverse().map(|inv| (t, &inv * b))
        })
}

/// Jordan structure of `m`, as a symbol.
///
/// For each monic irreducible factor `f` of degree `d` and multiplicity `k` in
/// the characteristic polynomial, the kernel dimensions of `f(m)^j` for
/// `j = 1..=k` give the number of blocks of each size at each of the `d`
/// (conjugate) roots.
fn jordan_symbol(m: &QMatrix) -> SegreSymbol {
    let n = m.rows();
    let cp = char_poly(m);
    let mut groups = Vec::new();
    for (f, mult) in cp.squarefree() {
        let mut irreducible: Vec<QPoly> = Vec::new();
        let mut rest = f.clone();
        for r in f.rational_roots() {
            let lin = QPoly::linear(&r);
            rest = rest.divrem(&lin).0;
            irreducible.push(lin);
        }
        // The remaining factor has no rational roots; for n <= 5 it is either
        // irreducible or a product of quadratics, and in the square-free part
        // of a 5x5 characteristic polynomial with multiplicity > 1 it has
        // degree at most 2.
        if rest.degree() > 0 {
            irreducible.push(rest);
        }
        for g in irreducible {
            let d = g.degree();
            let gm = g.eval_matrix(m);
            let mut pow = QMatrix::identity(n);
            let mut kernel_dims = vec![0usize];
            for _ in 0..mult {
                pow = &pow * &gm;
                kernel_dims.push(n - pow.rank());
            }
            let ge: Vec<usize> = kernel_dims.windows(2).map(|w| (w[1] - w[0]) / d).collect();
            let mut group = Vec::new();
            for (j, &c) in ge.iter().enumerate() {
                let exactly = c - ge.get(j + 1).copied().unwrap_or(0);
                group.extend(std::iter::repeat_n(j as u32 + 1, exactly));
            }
            for _ in 0..d {
                groups.push(group.clone());
            }
        }
    }
    SegreSymbol::new(groups)
}

/// Segre symbol of the pencil spanned by the symmetric matrices `a`, `b`.
///
/// The symbol is computed at the first two nonsingular members found and the
/// two results must agree.
pub fn segre_symbol(a: &QMatrix, b: &QMatrix) -> Result<SegreSymbol, SegreError> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(SegreError::WrongSize { expected: a.rows() });
    }
    if !a.is_symmetric() || !b.is_symmetric() {
        return Err(SegreError::NotSymmetric);
    }
    let mut members = pencil_members(a, b);
    let (_, m1) = members.next().ok_or(SegreError::NoInvertibleMember {
        searched: PENCIL_SEARCH,
    })?;
    let s1 = jordan_symbol(&m1);
    if let Some((_, m2)) = members.next() {
        let s2 = jordan_symbol(&m2);
        if s1 != s2 {
            return Err(SegreError::Inconsistent(s1.to_string(), s2.to_string()));
        }
    }
    Ok(s1)
}

#[derive(Clone, Debug, Serialize)]
pub struct Dp4Classification {
    pub symbol: SegreSymbol,
    /// Singularity type, or `"nonsingular"`.
    #[serde(rename = "type")]
    pub singularity: String,
    /// Row label in the table of types, absent for the nonsingular case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_type: Option<String>,
    pub lines: u32,
}

/// Classify the intersection of two quadrics in `P^4` by its Segre symbol.
pub fn classify_dp4(
    q1: &HomogeneousForm,
    q2: &HomogeneousForm,
) -> Result<Dp4Classification, SegreError> {
    classify_pencil(&quadric_matrix(q1)?, &quadric_matrix(q2)?)
}

/// As [`classify_dp4`], from the two symmetric `5 x 5` matrices.
pub fn classify_pencil(a: &QMatrix, b: &QMatrix) -> Result<Dp4Classification, SegreError> {
    if a.rows() != 5 || b.rows() != 5 || !a.is_square() || !b.is_square() {
        return Err(SegreError::WrongSize { expected: 5 });
    }
    let symbol = segre_symbol(a, b)?;
    if symbol.is_generic() {
        return Ok(Dp4Classification {
            symbol,
            singularity: "nonsingular".into(),
            table_type: None,
            lines: 16,
        });
    }
    let row = DP4_TYPES
        .iter()
        .find(|r| r.3.parse::<SegreSymbol>().is_ok_and(|s| s == symbol))
        .ok_or_else(|| SegreError::NotInTable(symbol.to_string()))?;
    Ok(Dp4Classification {
        symbol,
        singularity: row.5.into(),
        table_type: Some(row.0.into()),
        lines: row.4,
    })
}

/// Is `x` a root of the characteristic polynomial of the pencil, i.e. is
/// `det(A + x B) = 0`? Used by tests to cross-check eigenvalue counts.
pub fn pencil_det(a: &QMatrix, b: &QMatrix, x: &Rational) -> Rational {
    (a + &b.scale(x)).det()
}

pub fn det_is_identically_zero(a: &QMatrix, b: &QMatrix) -> bool {
    (0..=a.rows() as i64).all(|t| pencil_det(a, b, &int(t)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(src: &str) -> HomogeneousForm {
        HomogeneousForm::parse(5, src).unwrap()
    }

    #[test]
    fn parse_and_render() {
        for s in [
            "(2,1,1,1)",
            "((1,1),2,1)",
            "((1,1),3)",
            "((4,1))",
            "(5)",
            "((2,1),(1,1))",
        ] {
            assert_eq!(s.parse::<SegreSymbol>().unwrap().to_string(), s);
        }
        assert_eq!(
            "(2,(1,1),1)".parse::<SegreSymbol>().unwrap(),
            "((1,1),2,1)".parse::<SegreSymbol>().unwrap()
        );
        assert!("(1,".parse::<SegreSymbol>().is_err());
        assert!("(0,1)".parse::<SegreSymbol>().is_err());
    }

    #[test]
    fn generic_pencil() {
        let c = classify_dp4(
            &q("x1^2+x2^2+x3^2+x4^2+x5^2"),
            &q("x1^2+2x2^2+3x3^2+4x4^2+5x5^2"),
        )
        .unwrap();
        assert_eq!(c.symbol.to_string(), "(1,1,1,1,1)");
        assert_eq!(c.singularity, "nonsingular");
    }

    #[test]
    fn conjugate_eigenvalues_split_into_groups() {
        // x1^2 + x2^2 against x1 x2 has eigenvalues +-i.
        let a = QMatrix::from_i64(&[vec![1, 0], vec![0, 1]]);
        let b = QMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        let rot = &a.inverse().unwrap() * &QMatrix::from_i64(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(jordan_symbol(&rot).to_string(), "(1,1)");
        assert_eq!(segre_symbol(&a, &b).unwrap().to_string(), "(1,1)");
    }

    #[test]
    fn singular_pencil_is_reported() {
        let z = QMatrix::zeros(5, 5);
        let a = quadric_matrix(&q("x1^2")).unwrap();
        assert!(det_is_identically_zero(&a, &z));
        assert_eq!(
            segre_symbol(&a, &z).unwrap_err(),
            SegreError::NoInvertibleMember {
                searched: PENCIL_SEARCH
            }
        );
    }
}
