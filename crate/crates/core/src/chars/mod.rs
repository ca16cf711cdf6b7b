//! Cubic characters on `F_p`, Jacobi sums, and the local densities of
//! diagonal cubic forms `a1 x1^3 + a2 x2^3 + a3 x3^3 + a4 x4^3`.
//!
//! Character values live in `Z[w]`, `w` a primitive cube root of unity, and
//! all character algebra is exact.

mod eisenstein;
mod local;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{factor, inv_mod, is_prime, pow_mod, primitive_root};
pub use eisenstein::Eisenstein;
pub use local::{
    brute_force_counts, em_lattice_check, exp_sum_t, exp_sum_t_naive, hensel_check, local_counts,
    nstar_formula_check, s_q, sq_identity_check, sq_multiplicative, EmReport, HenselReport,
    LocalTable, SqReport, MAX_MODULUS,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p = {0} is not 1 mod 3, so there is no nontrivial cubic character")]
    NotOneModThree(u64),
    #[error("characters have different moduli")]
    MixedModuli,
    #[error("a Jacobi sum needs at least two characters")]
    TooFewCharacters,
    #[error("p = {p} divides 3 a1 a2 a3 a4")]
    BadPrime { p: u64 },
    #[error("modulus {q} exceeds the budget {max}")]
    Budget { q: u64, max: u64 },
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("Lemma needs 1 <= r <= P, got r = {r}, P = {p}")]
    ModulusTooLarge { r: u64, p: u64 },
}

/// `chi^power` for the cubic character `chi(g^k) = w^k`, `g` the least
/// primitive root mod `p`. Power 0 is the trivial character, with value 1 at 0.
#[derive(Clone, Debug)]
pub struct CubicCharacter {
    p: u64,
    power: u8,
    /// Discrete logarithm mod 3 of each nonzero residue.
    log3: Arc<Vec<u8>>,
}

impl PartialEq for CubicCharacter {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.power == o.power
    }
}

impl CubicCharacter {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn power(&self) -> u8 {
        self.power
    }

    pub fn is_trivial(&self) -> bool {
        self.power == 0
    }

    pub fn conjugate(&self) -> CubicCharacter {
        self.pow(2)
    }

    pub fn pow(&self, k: u8) -> CubicCharacter {
        CubicCharacter {
            p: self.p,
            power: ((self.power as u32 * k as u32) % 3) as u8,
            log3: self.log3.clone(),
        }
    }

    pub fn mul(&self, o: &CubicCharacter) -> Result<CubicCharacter, CharError> {
        if self.p != o.p {
            return Err(CharError::MixedModuli);
        }
        Ok(CubicCharacter {
            p: self.p,
            power: (self.power + o.power) % 3,
            log3: self.log3.clone(),
        })
    }

    /// Exponent `k` with `chi(a) = w^k`, or `None` at `a = 0`.
    pub fn exponent(&self, a: i64) -> Option<u8> {
        let r = a.rem_euclid(self.p as i64) as usize;
        if r == 0 {
            return None;
        }
        Some(((self.log3[r] as u32 * self.power as u32) % 3) as u8)
    }

    pub fn value(&self, a: i64) -> Eisenstein {
        match self.exponent(a) {
            Some(k) => Eisenstein::omega_pow(k as u32),
            None if self.is_trivial() => Eisenstein::ONE,
            None => Eisenstein::ZERO,
        }
    }
}

/// The two nontrivial cubic characters mod `p`, a conjugate pair.
pub fn cubic_characters(p: u64) -> Result<(CubicCharacter, CubicCharacter), CharError> {
    if !is_prime(p) {
        return Err(CharError::NotPrime(p));
    }
    if p % 3 != 1 {
        return Err(CharError::NotOneModThree(p));
    }
    let g = primitive_root(p);
    let mut log3 = vec![0u8; p as usize];
    let mut x = 1u64;
    for k in 0..p - 1 {
        log3[x as usize] = (k % 3) as u8;
        x = x * g % p;
    }
    let chi = CubicCharacter {
        p,
        power: 1,
        log3: Arc::new(log3),
    };
    let bar = chi.conjugate();
    Ok((chi, bar))
}

/// `J_0(chi_1, ..., chi_r)`: the sum of `chi_1(t_1) ... chi_r(t_r)` over
/// `t in F_p^r` with `t_1 + ... + t_r = 0`, by brute force.
pub fn jacobi_sum(chars: &[CubicCharacter]) -> Result<Eisenstein, CharError> {
    if chars.len() < 2 {
        return Err(CharError::TooFewCharacters);
    }
    let p = chars[0].p;
    if chars.iter().any(|c| c.p != p) {
        return Err(CharError::MixedModuli);
    }
    let r = chars.len();
    let p = p as i64;
    let mut total = Eisenstein::ZERO;
    let mut t = vec![0i64; r - 1];
    loop {
        let last = -t.iter().sum::<i64>();
        let mut term = chars[r - 1].value(last);
        for (c, &ti) in chars.iter().zip(&t) {
            if term == Eisenstein::ZERO {
                break;
            }
            term = term * c.value(ti);
        }
        total = total + term;
        // odometer
        let mut i = 0;
        loop {
            if i == r - 1 {
                return Ok(total);
            }
            t[i] += 1;
            if t[i] < p {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// `|J_0|^2` predicted for nontrivial characters: zero unless the product is
/// trivial, then `(p - 1)^2 p^(r - 2)`.
pub fn jacobi_norm_expected(chars: &[CubicCharacter]) -> i128 {
    let p = chars[0].p as i128;
    let total: u32 = chars.iter().map(|c| c.power as u32).sum();
    if total % 3 != 0 {
        0
    } else {
        (p - 1).pow(2) * p.pow(chars.len() as u32 - 2)
    }
}

/// Primes dividing `3 a1 a2 a3 a4`.
pub fn bad_primes(a: [i64; 4]) -> Vec<u64> {
    let mut ps = vec![3];
    for x in a {
        ps.extend(factor(x.unsigned_abs()).primes());
    }
    ps.sort_unstable();
    ps.dedup();
    ps
}

fn check_good(a: [i64; 4], p: u64) -> Result<(), CharError> {
    if a.contains(&0) {
        return Err(CharError::ZeroCoefficient);
    }
    if !is_prime(p) {
        return Err(CharError::NotPrime(p));
    }
    if bad_primes(a).contains(&p) {
        return Err(CharError::BadPrime { p });
    }
    Ok(())
}

/// `x` is a nonzero cube mod `p`.
pub fn is_cube_mod(x: i64, p: u64) -> bool {
    let r = x.rem_euclid(p as i64) as u64;
    r != 0 && (p % 3 != 1 || pow_mod(r, (p - 1) / 3, p) == 1)
}

/// The number `nu_p(a)` of pairings `{1, i} {j, k}` for which
/// `a1 a_i / (a_j a_k)` is a cube mod `p`.
pub fn nu_p(a: [i64; 4], p: u64) -> u32 {
    let pi = p as i64;
    let m = |x: i64| x.rem_euclid(pi);
    [(1, 2, 3), (2, 1, 3), (3, 1, 2)]
        .iter()
        .filter(|&&(i, j, k)| {
            let den = inv_mod(m(a[j] * a[k] % pi), pi).expect("good prime");
            is_cube_mod(m(m(a[0] * a[i]) * den), p)
        })
        .count() as u32
}

/// `delta_p(a)` from its definition as a sum over nontrivial characters
/// `chi_1 ... chi_4 = 1` of `prod chi_i(a_i^-1)`.
pub fn delta_p_character_sum(a: [i64; 4], p: u64) -> Result<Eisenstein, CharError> {
    check_good(a, p)?;
    if p % 3 != 1 {
        return Ok(Eisenstein::ZERO);
    }
    let (chi, _) = cubic_characters(p)?;
    let inv: Vec<i64> = a
        .iter()
        .map(|&x| inv_mod(x.rem_euclid(p as i64), p as i64).expect("good prime"))
        .collect();
    let mut total = Eisenstein::ZERO;
    for mask in 0..16u32 {
        let e: Vec<u8> = (0..4).map(|i| 1 + (mask >> i & 1) as u8).collect();
        if e.iter().map(|&x| x as u32).sum::<u32>() % 3 != 0 {
            continue;
        }
        let mut term = Eisenstein::ONE;
        for i in 0..4 {
            term = term * chi.pow(e[i]).value(inv[i]);
        }
        total = total + term;
    }
    Ok(total)
}

/// `delta_p(a) = 3 nu_p(a) - 3` for `p = 1 mod 3`, and `0` for `p = 2 mod 3`.
///
/// Panics if the closed form disagrees with the character sum.
pub fn delta_p(a: [i64; 4], p: u64) -> Result<i64, CharError> {
    check_good(a, p)?;
    let closed = if p % 3 == 1 {
        3 * nu_p(a, p) as i64 - 3
    } else {
        0
    };
    let sum = delta_p_character_sum(a, p)?;
    assert_eq!(
        sum,
        Eisenstein::from_int(closed),
        "delta_p two ways, a = {a:?}, p = {p}"
    );
    Ok(closed)
}

/// JSON report for one coefficient vector and prime.
#[derive(Clone, Debug, Serialize)]
pub struct LocalReport {
    pub a: [i64; 4],
    pub p: u64,
    pub e: u32,
    #[serde(rename = "N")]
    pub n: u128,
    #[serde(rename = "Nstar")]
    pub n_star: u128,
    pub delta: Option<i64>,
    pub checks: LocalChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalChecks {
    /// `N*(p) = p^3 + p (p - 1) delta_p - 1`; absent at bad primes.
    #[serde(rename = "eqNstar")]
    pub eq_nstar: Option<bool>,
    /// `N*(p^e) = p^(3e - 3) N*(p)`; absent at bad primes.
    pub hensel: Option<bool>,
    pub sq_identity: bool,
}

pub fn local_report(a: [i64; 4], p: u64, e: u32) -> Result<LocalReport, CharError> {
    if !is_prime(p) {
        return Err(CharError::NotPrime(p));
    }
    let q = p.checked_pow(e).ok_or(CharError::Budget {
        q: u64::MAX,
        max: MAX_MODULUS,
    })?;
    let t = local_counts(a, q)?;
    let good = check_good(a, p).is_ok();
    let delta = if good { Some(delta_p(a, p)?) } else { None };
    let eq_nstar = if good {
        let (lhs, rhs) = nstar_formula_check(a, p)?;
        Some(lhs == rhs)
    } else {
        None
    };
    let hensel = if good && e >= 1 {
        Some(hensel_check(a, p, e)?.holds)
    } else {
        None
    };
    let sq_identity = e == 0 || sq_identity_check(a, p, e)?.holds;
    Ok(LocalReport {
        a,
        p,
        e,
        n: t.n,
        n_star: t.n_star,
        delta,
        checks: LocalChecks {
            eq_nstar,
            hensel,
            sq_identity,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn trivial_set(p: u64) -> Vec<i64> {
        let (chi, _) = cubic_characters(p).unwrap();
        (1..p as i64)
            .filter(|&a| chi.value(a) == Eisenstein::ONE)
            .collect()
    }

    #[test]
    fn kernels() {
        assert_eq!(trivial_set(7), vec![1, 6]);
        assert_eq!(trivial_set(13), vec![1, 5, 8, 12]);
        let (chi, bar) = cubic_characters(7).unwrap();
        assert_eq!(chi.value(3) * bar.value(3), Eisenstein::ONE);
        assert_ne!(chi.value(3), Eisenstein::ONE);
        assert_eq!(
            cubic_characters(5).unwrap_err(),
            CharError::NotOneModThree(5)
        );
    }

    #[test]
    fn character_identities() {
        for p in primes_up_to(100).into_iter().filter(|p| p % 3 == 1) {
            let (chi, bar) = cubic_characters(p).unwrap();
            let mut sum = Eisenstein::ZERO;
            for a in 0..p as i64 {
                sum = sum + chi.value(a);
                if a > 0 {
                    let s = chi.value(a) + bar.value(a);
                    let cube = (1..p).any(|x| (x * x % p) * x % p == a as u64);
                    assert_eq!(s, Eisenstein::from_int(if cube { 2 } else { -1 }));
                    for b in 1..p as i64 {
                        assert_eq!(chi.value(a * b), chi.value(a) * chi.value(b));
                    }
                }
            }
            assert_eq!(sum, Eisenstein::ZERO, "p = {p}");
            assert_eq!(chi.pow(3), chi.pow(0));
            assert!(!chi.is_trivial());
        }
    }

    #[test]
    fn jacobi_examples() {
        let (chi, bar) = cubic_characters(7).unwrap();
        assert_eq!(jacobi_sum(&[chi.clone(), bar.clone()]).unwrap().norm(), 36);
        assert_eq!(jacobi_sum(&[chi.clone(), chi.clone()]).unwrap().norm(), 0);
        let j4 = jacobi_sum(&[chi.clone(), chi.clone(), bar.clone(), bar.clone()]).unwrap();
        assert_eq!(j4, Eisenstein::from_int(42));
        let (chi13, _) = cubic_characters(13).unwrap();
        assert_eq!(
            jacobi_sum(&[chi, chi13]).unwrap_err(),
            CharError::MixedModuli
        );
    }

    #[test]
    fn deltas() {
        assert_eq!(delta_p([1, 1, 1, 1], 7).unwrap(), 6);
        assert_eq!(delta_p([1, 1, 1, 2], 7).unwrap(), -3);
        assert_eq!(
            delta_p([1, 2, 3, 5], 5).unwrap_err(),
            CharError::BadPrime { p: 5 }
        );
        for a in [[1, 1, 1, 1], [1, 1, 1, 2], [7, 11, 13, 17]] {
            assert_eq!(delta_p(a, 5).unwrap(), 0);
        }
        assert_eq!(
            delta_p([1, 1, 1, 1], 3).unwrap_err(),
            CharError::BadPrime { p: 3 }
        );
    }
}
