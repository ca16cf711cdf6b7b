//! Counting experiments behind the geometry-of-numbers lemmas: primitive
//! points on diagonal lines and conics in boxes, roots of `a t^2 + b` modulo
//! `q`, and how often a random diagonal conic has a rational point.

mod conic;
mod sweep;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{factor, gcd, gcd_slice, is_square, kronecker};

pub use conic::{
    conic_solvability_stats, find_conic_solution, holzer_box, legendre_soluble, ConicStats,
    DyadicLevel,
};
pub use sweep::{
    check_conic_bound, check_line_bound, check_rho, check_serre, conic_bound, line_bound,
    random_conic_instance, random_line_instance, random_rho_instance, random_serre_level, sample,
    LemmaReport, RhoInstance, SweepRow, CONIC_CONSTANT, LINE_CONSTANT, SERRE_CONSTANT,
    SERRE_SAMPLES,
};

#[derive(Debug, Error, PartialEq)]
pub enum GonError {
    #[error("degree must be 1 or 2, got {0}")]
    Degree(u8),
    #[error("coefficients must be nonzero and primitive")]
    Coefficients,
    #[error("conic coefficients must be pairwise coprime")]
    NotCoprime,
    #[error("box sides must be positive")]
    Bounds,
    #[error("enumeration needs {need} steps, budget is {budget}")]
    Budget { need: u128, budget: u64 },
}

/// `a1 x1^d + a2 x2^d + a3 x3^d = 0` counted in `|x_i| <= B_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxCountInstance {
    pub d: u8,
    pub a: [i64; 3],
    #[serde(rename = "B")]
    pub b: [f64; 3],
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

impl BoxCountInstance {
    pub fn new(d: u8, a: [i64; 3], b: [f64; 3]) -> Result<Self, GonError> {
        let inst = BoxCountInstance { d, a, b };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), GonError> {
        if self.d != 1 && self.d != 2 {
            return Err(GonError::Degree(self.d));
        }
        if self.a.contains(&0) || gcd_slice(&self.a) != 1 {
            return Err(GonError::Coefficients);
        }
        if self.d == 2 {
            let [a1, a2, a3] = self.a;
            if gcd(a1, a2) != 1 || gcd(a1, a3) != 1 || gcd(a2, a3) != 1 {
                return Err(GonError::NotCoprime);
            }
        }
        if !self.b.iter().all(|&x| x > 0.0 && x.is_finite()) {
            return Err(GonError::Bounds);
        }
        Ok(())
    }

    pub fn b_product(&self) -> f64 {
        self.b.iter().product()
    }
}

/// `M_d(a; B)`: primitive `x` in the box with `sum a_i x_i^d = 0`.
///
/// Loops over the two shortest sides and solves for the third coordinate.
pub fn count_md(inst: &BoxCountInstance, budget: u64) -> Result<u64, GonError> {
    inst.validate()?;
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| inst.b[i].total_cmp(&inst.b[j]));
    let [i, j, k] = idx;
    let (bi, bj, bk) = (
        inst.b[i].floor() as i64,
        inst.b[j].floor() as i64,
        inst.b[k].floor() as i128,
    );
    let need = (2 * bi as u128 + 1) * (2 * bj as u128 + 1);
    if need > budget as u128 {
        return Err(GonError::Budget { need, budget });
    }
    let (ai, aj, ak) = (inst.a[i] as i128, inst.a[j] as i128, inst.a[k] as i128);
    let mut count = 0u64;
    for xi in -bi..=bi {
        for xj in -bj..=bj {
            let (x, y) = (xi as i128, xj as i128);
            let accept = |z: i128| z.abs() <= bk && gcd(gcd(xi, xj), z as i64) == 1;
            if inst.d == 1 {
                let rest = -(ai * x + aj * y);
                if rest % ak == 0 && accept(rest / ak) {
                    count += 1;
                }
            } else {
                let rest = -(ai * x * x + aj * y * y);
                if rest % ak == 0 {
                    if let Some(z) = is_square(rest / ak) {
                        if accept(z) {
                            count += if z == 0 { 1 } else { 2 };
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `rho(q; a, b) = #{t mod q : a t^2 + b = 0 mod q}`.
pub fn rho_congruence(q: u64, a: i64, b: i64) -> u64 {
    assert!(q >= 1);
    let q128 = q as i128;
    let (a, b) = ((a as i128).rem_euclid(q128), (b as i128).rem_euclid(q128));
    (0..q as i128)
        .filter(|t| (a * t % q128 * t + b) % q128 == 0)
        .count() as u64
}

/// `sum_{d | q} |mu(d)| (-ab / d)`, the Kronecker symbol over squarefree divisors.
pub fn rho_bound(q: u64, a: i64, b: i64) -> i64 {
    let ps: Vec<u64> = factor(q).primes().collect();
    // The symbols only see -ab modulo 8q.
    let m = (-(a as i128) * b as i128).rem_euclid(8 * q as i128) as i64;
    let mut total = 0i64;
    for mask in 0u32..(1 << ps.len()) {
        let d: u64 = ps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p)
            .product();
        total += kronecker(m, d) as i64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(d: u8, a: [i64; 3], b: [f64; 3]) -> u64 {
        count_md(&BoxCountInstance::new(d, a, b).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    /// Every point of the box, no cleverness.
    fn brute(d: u8, a: [i64; 3], b: [f64; 3]) -> u64 {
        let r = b.map(|x| x.floor() as i64);
        let mut n = 0;
        for x in -r[0]..=r[0] {
            for y in -r[1]..=r[1] {
                for z in -r[2]..=r[2] {
                    let v = [x, y, z];
                    let s: i64 = (0..3).map(|i| a[i] * v[i].pow(d as u32)).sum();
                    if s == 0 && gcd_slice(&v) == 1 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn examples() {
        assert_eq!(m(1, [1, 1, 1], [1.0; 3]), 6);
        assert_eq!(m(2, [1, 1, -2], [1.0; 3]), 8);
        assert_eq!(m(1, [1, 1, 1], [0.5; 3]), 0);
        assert_eq!(m(1, [1_000_000, 1, 1], [10.0; 3]), 2);
    }

    #[test]
    fn validation() {
        assert_eq!(
            BoxCountInstance::new(3, [1, 1, 1], [1.0; 3]),
            Err(GonError::Degree(3))
        );
        assert_eq!(
            BoxCountInstance::new(1, [0, 1, 1], [1.0; 3]),
            Err(GonError::Coefficients)
        );
        assert_eq!(
            BoxCountInstance::new(1, [2, 4, 6], [1.0; 3]),
            Err(GonError::Coefficients)
        );
        assert_eq!(
            BoxCountInstance::new(2, [2, 4, 3], [1.0; 3]),
            Err(GonError::NotCoprime)
        );
        assert_eq!(
            BoxCountInstance::new(1, [1, 1, 1], [1.0, 0.0, 1.0]),
            Err(GonError::Bounds)
        );
        let big = BoxCountInstance::new(1, [1, 1, 1], [1e6; 3]).unwrap();
        assert!(matches!(count_md(&big, 1000), Err(GonError::Budget { .. })));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_congruence(7, 1, 1), 0);
        assert_eq!(rho_congruence(5, 1, 1), 2);
        assert_eq!(rho_congruence(1, 3, 4), 1);
        assert_eq!(rho_bound(1, 3, 4), 1);
        assert_eq!(rho_bound(5, 1, 1), 2);
        assert_eq!(rho_bound(7, 1, 1), 0);
    }

    proptest! {
        #[test]
        fn count_matches_brute_force(
            d in 1u8..=2,
            a in prop::array::uniform3(prop_oneof![-30i64..=-1, 1i64..=30]),
            b in prop::array::uniform3(0.5f64..9.0),
        ) {
            prop_assume!(BoxCountInstance::new(d, a, b).is_ok());
            prop_assert_eq!(m(d, a, b), brute(d, a, b));
        }

        #[test]
        fn symmetric_under_permutation(
            d in 1u8..=2,
            a in prop::array::uniform3(prop_oneof![-30i64..=-1, 1i64..=30]),
            b in prop::array::uniform3(0.5f64..15.0),
        ) {
            prop_assume!(BoxCountInstance::new(d, a, b).is_ok());
            let n = m(d, a, b);
            prop_assert_eq!(n, m(d, [a[1], a[2], a[0]], [b[1], b[2], b[0]]));
            prop_assert_eq!(n, m(d, [a[1], a[0], a[2]], [b[1], b[0], b[2]]));
        }

        #[test]
        fn invariant_under_negation(
            d in 1u8..=2,
            a in prop::array::uniform3(prop_oneof![-30i64..=-1, 1i64..=30]),
            b in prop::array::uniform3(0.5f64..15.0),
            i in 0usize..3,
        ) {
            prop_assume!(BoxCountInstance::new(d, a, b).is_ok());
            let mut neg = a;
            neg[i] = -neg[i];
            // x_i -> -x_i absorbs the sign when d = 1; for d = 2 negating
            // every coefficient is the symmetry.
            if d == 1 {
                prop_assert_eq!(m(d, a, b), m(d, neg, b));
            }
            prop_assert_eq!(m(d, a, b), m(d, a.map(|x| -x), b));
        }
    }
}
