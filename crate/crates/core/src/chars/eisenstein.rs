use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

/// `a + b w` in `Z[w]`, `w^2 + w + 1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Eisenstein {
    pub a: i128,
    pub b: i128,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { a: 0, b: 0 };
    pub const ONE: Eisenstein = Eisenstein { a: 1, b: 0 };
    pub const OMEGA: Eisenstein = Eisenstein { a: 0, b: 1 };

    pub fn from_int(n: i64) -> Self {
        Eisenstein { a: n as i128, b: 0 }
    }

    pub fn omega_pow(k: u32) -> Self {
        match k % 3 {
            0 => Self::ONE,
            1 => Self::OMEGA,
            _ => Eisenstein { a: -1, b: -1 },
        }
    }

    pub fn conj(self) -> Self {
        Eisenstein {
            a: self.a - self.b,
            b: -self.b,
        }
    }

    /// `|z|^2 = a^2 - a b + b^2`.
    pub fn norm(self) -> i128 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    pub fn abs(self) -> f64 {
        (self.norm() as f64).sqrt()
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(
            self.a as f64 - 0.5 * self.b as f64,
            self.b as f64 * 0.75f64.sqrt(),
        )
    }
}

impl Add for Eisenstein {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Eisenstein {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl Sub for Eisenstein {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Eisenstein {
    type Output = Self;
    fn neg(self) -> Self {
        Eisenstein {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for Eisenstein {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Eisenstein {
            a: self.a * o.a - self.b * o.b,
            b: self.a * o.b + self.b * o.a - self.b * o.b,
        }
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}w"),
            (a, b) if b < 0 => write!(f, "{a}{b}w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_cubed() {
        let w = Eisenstein::OMEGA;
        assert_eq!(w * w * w, Eisenstein::ONE);
        assert_eq!(w * w + w + Eisenstein::ONE, Eisenstein::ZERO);
        assert_eq!(w.conj(), w * w);
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in -100i128..100, b in -100i128..100, c in -100i128..100, d in -100i128..100) {
            let x = Eisenstein { a, b };
            let y = Eisenstein { a: c, b: d };
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
            prop_assert_eq!((x * x.conj()).b, 0);
            prop_assert!(((x.to_complex().norm_sqr()) - x.norm() as f64).abs() < 1e-6);
        }
    }
}
