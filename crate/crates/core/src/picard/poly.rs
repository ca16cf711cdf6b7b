//! Univariate polynomials over `Q`, just enough for characteristic polynomials
//! of small matrices and their factorisation into rational linear factors and
//! the rest.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::linalg::QMatrix;

/// Coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    /// `x - r`
    pub fn linear(r: &Rational) -> Self {
        QPoly(vec![-r.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        let l = self.lead().clone();
        QPoly(self.0.iter().map(|c| c / &l).collect())
    }

    #[cfg(test)]
    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(vec![]);
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return (QPoly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / d.lead();
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(M)` by Horner.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &(&acc * m) + &QMatrix::identity(n).scale(c);
        }
        acc
    }

    /// Square-free decomposition (Yun): `self = lead * prod_i f_i^i`, returned as
    /// `(f_i, i)` with `f_i` monic, square-free, pairwise coprime, nonconstant.
    pub fn squarefree(&self) -> Vec<(QPoly, u32)> {
        let f = self.monic();
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            a = b.gcd(&d);
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// Rational roots, by the rational root theorem on the integer-scaled polynomial.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree() == 0 {
            return vec![];
        }
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero");
        let mut roots = Vec::new();
        if low > 0 {
            roots.push(Rational::zero());
        }
        let c0 = ints[low].abs();
        let cn = ints.last().unwrap().abs();
        for p in small_divisors(&c0) {
            for q in small_divisors(&cn) {
                for s in [1, -1] {
                    let r = Rational::new(BigInt::from(s) * &p, q.clone());
                    if self.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

/// Positive divisors of a nonzero integer, by trial division.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Characteristic polynomial `det(x I - M)` by Faddeev-LeVerrier.
pub fn char_poly(m: &QMatrix) -> QPoly {
    let n = m.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &QMatrix::identity(n).scale(&c[n - k + 1]);
        let am = m * &mk;
        c[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
    }
    QPoly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn p(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn yun() {
        // (x-1)^2 (x+2) (x^2+1)^3
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let g = p(&[1, 0, 1]);
        let f = f.mul(&g).mul(&g).mul(&g);
        let sf = f.squarefree();
        assert_eq!(sf.len(), 3);
        assert_eq!(sf[0], (p(&[2, 1]), 1));
        assert_eq!(sf[1], (p(&[-1, 1]), 2));
        assert_eq!(sf[2], (p(&[1, 0, 1]), 3));
    }

    #[test]
    fn roots() {
        let f = p(&[-1, 1])
            .mul(&QPoly::new(vec![rat(1, 2), int(1)]))
            .mul(&p(&[0, 1]));
        assert_eq!(f.rational_roots(), vec![rat(-1, 2), int(0), int(1)]);
        assert!(p(&[1, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn charpoly_matches_det() {
        let m = QMatrix::from_i64(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let cp = char_poly(&m);
        for t in -3..4 {
            let shifted = &QMatrix::identity(3).scale(&int(t)) - &m;
            assert_eq!(cp.eval(&int(t)), shifted.det());
        }
        assert!(cp.eval_matrix(&m).rank() == 0);
    }
}
