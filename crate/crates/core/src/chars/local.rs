//! Point counts modulo `q`, Hensel lifting, and the exponential sums `T(a, q)`
//! and `S_q` of a diagonal cubic form.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{check_good, delta_p, CharError};
use crate::arith::{factor, gcd};
use crate::quad::Quad;

/// Largest modulus for which counts are computed (cost is `O(q^2)`).
pub const MAX_MODULUS: u64 = 5_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalTable {
    pub a: [i64; 4],
    pub q: u64,
    /// Solutions mod `q`.
    #[serde(rename = "N")]
    pub n: u128,
    /// Solutions mod `q` with `gcd(q, x1, ..., x4) = 1`.
    #[serde(rename = "Nstar")]
    pub n_star: u128,
}

fn cube_mod(x: u64, q: u64) -> u64 {
    let x = x as u128;
    (x * x % q as u128 * x % q as u128) as u64
}

/// `#{x mod q : d | x_i for all i, sum a_i x_i^3 = 0 mod q}` via histograms of
/// the values `a_i x^3 mod q`.
fn count_with_divisor(a: [i64; 4], q: u64, d: u64) -> u128 {
    let hist = |c: i64| {
        let mut h = vec![0u128; q as usize];
        let c = c.rem_euclid(q as i64) as u128;
        for x in (0..q).step_by(d as usize) {
            h[(c * cube_mod(x, q) as u128 % q as u128) as usize] += 1;
        }
        h
    };
    let conv = |f: &[u128], g: &[u128]| {
        let mut out = vec![0u128; q as usize];
        for (i, &fi) in f.iter().enumerate().filter(|p| *p.1 != 0) {
            for (j, &gj) in g.iter().enumerate().filter(|p| *p.1 != 0) {
                out[(i + j) % q as usize] += fi * gj;
            }
        }
        out
    };
    let h12 = conv(&hist(a[0]), &hist(a[1]));
    let h34 = conv(&hist(a[2]), &hist(a[3]));
    (0..q as usize)
        .map(|v| h12[v] * h34[(q as usize - v) % q as usize])
        .sum()
}

pub fn local_counts(a: [i64; 4], q: u64) -> Result<LocalTable, CharError> {
    if a.contains(&0) {
        return Err(CharError::ZeroCoefficient);
    }
    if q == 0 || q > MAX_MODULUS {
        return Err(CharError::Budget {
            q,
            max: MAX_MODULUS,
        });
    }
    let n = count_with_divisor(a, q, 1);
    // Inclusion-exclusion over squarefree d | q.
    let primes: Vec<u64> = factor(q).primes().collect();
    let mut n_star: i128 = 0;
    for mask in 0u32..1 << primes.len() {
        let d: u64 = (0..primes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| primes[i])
            .product();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        n_star += sign * count_with_divisor(a, q, d) as i128;
    }
    Ok(LocalTable {
        a,
        q,
        n,
        n_star: n_star as u128,
    })
}

/// Direct enumeration over `(Z/q)^4`, for small `q`.
pub fn brute_force_counts(a: [i64; 4], q: u64) -> LocalTable {
    let (mut n, mut n_star) = (0u128, 0u128);
    let qi = q as i64;
    for x1 in 0..qi {
        for x2 in 0..qi {
            for x3 in 0..qi {
                for x4 in 0..qi {
                    let x = [x1, x2, x3, x4];
                    let s: i128 = x
                        .iter()
                        .zip(a)
                        .map(|(&xi, ai)| ai as i128 * (xi as i128).pow(3))
                        .sum();
                    if s.rem_euclid(q as i128) == 0 {
                        n += 1;
                        if x.iter().fold(qi, |g, &xi| gcd(g, xi)) == 1 {
                            n_star += 1;
                        }
                    }
                }
            }
        }
    }
    LocalTable { a, q, n, n_star }
}

/// Both sides of `N*(p) = p^3 + p (p - 1) delta_p(a) - 1` at a good prime.
pub fn nstar_formula_check(a: [i64; 4], p: u64) -> Result<(i128, i128), CharError> {
    check_good(a, p)?;
    let t = local_counts(a, p)?;
    let pi = p as i128;
    let rhs = pi.pow(3) + pi * (pi - 1) * delta_p(a, p)? as i128 - 1;
    Ok((t.n_star as i128, rhs))
}

#[derive(Clone, Debug, Serialize)]
pub struct HenselReport {
    pub p: u64,
    pub e: u32,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

/// `N*(p^e) = p^(3e - 3) N*(p)` at a good prime.
pub fn hensel_check(a: [i64; 4], p: u64, e: u32) -> Result<HenselReport, CharError> {
    check_good(a, p)?;
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= MAX_MODULUS)
        .ok_or(CharError::Budget {
            q: p.saturating_pow(e),
            max: MAX_MODULUS,
        })?;
    let lhs = local_counts(a, q)?.n_star;
    let rhs = (p as u128).pow(3 * e - 3) * local_counts(a, p)?.n_star;
    Ok(HenselReport {
        p,
        e,
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

/// `T(aa, q) = sum over r mod q of e(aa C(r) / q)`, as a product of four
/// one-variable sums.
pub fn exp_sum_t(a: [i64; 4], aa: u64, q: u64) -> Complex64 {
    a.iter()
        .map(|&ai| {
            let c = (aa as i128 * ai as i128).rem_euclid(q as i128) as u128;
            (0..q)
                .map(|r| e((c * cube_mod(r, q) as u128 % q as u128) as f64 / q as f64))
                .sum::<Complex64>()
        })
        .product()
}

/// The `q^4`-term definition of `T(aa, q)`.
pub fn exp_sum_t_naive(a: [i64; 4], aa: u64, q: u64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let qi = q as i128;
    for r1 in 0..qi {
        for r2 in 0..qi {
            for r3 in 0..qi {
                for r4 in 0..qi {
                    let c = [r1, r2, r3, r4]
                        .iter()
                        .zip(a)
                        .map(|(&r, ai)| ai as i128 * r.pow(3))
                        .sum::<i128>();
                    total += e((aa as i128 * c).rem_euclid(qi) as f64 / q as f64);
                }
            }
        }
    }
    total
}

/// `S_q`: the sum of `T(aa, q)` over `aa` coprime to `q`.
pub fn s_q(a: [i64; 4], q: u64) -> Complex64 {
    (1..=q)
        .filter(|&aa| gcd(aa as i64, q as i64) == 1)
        .map(|aa| exp_sum_t(a, aa, q))
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct SqReport {
    pub q: u64,
    pub s_re: f64,
    pub s_im: f64,
    /// `p^e N(p^e) - p^(3 + e) N(p^(e - 1))`.
    pub rhs: f64,
    pub rel_err: f64,
    pub holds: bool,
}

pub const SQ_TOLERANCE: f64 = 1e-6;

fn rel_err(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm().max(1.0)
}

/// `S_(p^e) = p^e N(p^e) - p^(3 + e) N(p^(e - 1))`, for `e >= 1`.
pub fn sq_identity_check(a: [i64; 4], p: u64, e: u32) -> Result<SqReport, CharError> {
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= MAX_MODULUS)
        .ok_or(CharError::Budget {
            q: p.saturating_pow(e),
            max: MAX_MODULUS,
        })?;
    let n_q = local_counts(a, q)?.n as f64;
    let n_prev = local_counts(a, q / p)?.n as f64;
    let rhs = q as f64 * n_q - (p as f64).powi(3) * q as f64 * n_prev;
    let s = s_q(a, q);
    let err = rel_err(s, Complex64::new(rhs, 0.0));
    Ok(SqReport {
        q,
        s_re: s.re,
        s_im: s.im,
        rhs,
        rel_err: err,
        holds: err <= SQ_TOLERANCE,
    })
}

/// `S_(q q') = S_q S_(q')` for coprime `q, q'`.
pub fn sq_multiplicative(a: [i64; 4], q1: u64, q2: u64) -> bool {
    assert_eq!(gcd(q1 as i64, q2 as i64), 1);
    rel_err(s_q(a, q1 * q2), s_q(a, q1) * s_q(a, q2)) <= SQ_TOLERANCE
}

#[derive(Clone, Debug, Serialize)]
pub struct EmReport {
    pub z: f64,
    pub p: u64,
    pub r: u64,
    /// `sum over x = residues mod r in [-P, P]^4 of e(z C(x))`.
    pub sum_re: f64,
    pub sum_im: f64,
    /// `r^-4` times the integral of `e(z C(t))` over the box.
    pub integral: f64,
    /// `P^3 (1 + P M_F) / r^3` with `M_F` the largest partial derivative on the box.
    pub scale: f64,
    pub ratio: f64,
}

/// Compare a congruence-restricted exponential sum over a box with the
/// corresponding integral. The form is diagonal, so both factor over the
/// coordinates.
pub fn em_lattice_check(
    a: [i64; 4],
    z: f64,
    p: u64,
    r: u64,
    residues: [i64; 4],
) -> Result<EmReport, CharError> {
    if r == 0 || r > p {
        return Err(CharError::ModulusTooLarge { r, p });
    }
    let pi = p as i64;
    let quad = Quad::tol(1e-13, 1e-12);
    let mut sum = Complex64::new(1.0, 0.0);
    let mut integral = 1.0;
    for (&ai, &res) in a.iter().zip(&residues) {
        let phase = |t: f64| z * ai as f64 * t * t * t;
        let start = -pi + (res - -pi).rem_euclid(r as i64);
        sum *= (start..=pi)
            .step_by(r as usize)
            .map(|x| e(phase(x as f64)))
            .sum::<Complex64>();
        // The imaginary part is odd in t.
        let one = 2.0
            * quad
                .integrate(|t| (TAU * phase(t)).cos(), 0.0, p as f64)
                .value;
        integral *= one / r as f64;
    }
    let m_f = 3.0
        * z.abs()
        * a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as f64
        * (p as f64).powi(2);
    let scale = (p as f64).powi(3) * (1.0 + p as f64 * m_f) / (r as f64).powi(3);
    let ratio = (sum - Complex64::new(integral, 0.0)).norm() / scale;
    Ok(EmReport {
        z,
        p,
        r,
        sum_re: sum.re,
        sum_im: sum.im,
        integral,
        scale,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use proptest::prelude::*;

    const FERMAT: [i64; 4] = [1, 1, 1, 1];

    #[test]
    fn small_tables() {
        let t = local_counts(FERMAT, 2).unwrap();
        assert_eq!((t.n, t.n_star), (8, 7));
        let t = local_counts(FERMAT, 1).unwrap();
        assert_eq!((t.n, t.n_star), (1, 1));
        assert_eq!(brute_force_counts(FERMAT, 7).n_star, 594);
        assert_eq!(local_counts(FERMAT, 7).unwrap().n_star, 594);
    }

    #[test]
    fn histograms_match_brute_force() {
        for a in [FERMAT, [1, 1, 1, 2], [2, 3, 5, 7], [1, -1, 6, 9]] {
            for q in [2, 3, 4, 6, 7, 8, 9, 12] {
                assert_eq!(
                    local_counts(a, q).unwrap(),
                    brute_force_counts(a, q),
                    "a = {a:?}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn nstar_formula_good_primes() {
        for p in primes_up_to(50) {
            if let Ok((lhs, rhs)) = nstar_formula_check(FERMAT, p) {
                assert_eq!(lhs, rhs, "p = {p}");
            }
        }
    }

    #[test]
    fn hensel() {
        for (a, p) in [(FERMAT, 7), (FERMAT, 5), ([1, 1, 1, 2], 7)] {
            assert!(hensel_check(a, p, 2).unwrap().holds);
        }
    }

    #[test]
    fn exponential_sums() {
        assert!((exp_sum_t(FERMAT, 1, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(exp_sum_t(FERMAT, 1, 2).norm() < 1e-12);
        for aa in 1..=3 {
            assert!((exp_sum_t(FERMAT, aa, 3) - exp_sum_t_naive(FERMAT, aa, 3)).norm() < 1e-9);
        }
        assert!(
            (exp_sum_t([1, 2, 3, 4], 2, 5) - exp_sum_t_naive([1, 2, 3, 4], 2, 5)).norm() < 1e-9
        );
    }

    #[test]
    fn sq_identity() {
        let r = sq_identity_check(FERMAT, 2, 1).unwrap();
        assert!(r.rhs == 0.0 && r.holds);
        for (p, e) in [(5, 1), (3, 2), (7, 1), (2, 2)] {
            assert!(
                sq_identity_check(FERMAT, p, e).unwrap().holds,
                "p = {p}, e = {e}"
            );
        }
        for q1 in 1..=20u64 {
            for q2 in 1..=20 / q1 {
                if gcd(q1 as i64, q2 as i64) == 1 {
                    assert!(sq_multiplicative(FERMAT, q1, q2), "{q1} {q2}");
                }
            }
        }
    }

    #[test]
    fn em_constant_integrand() {
        let r = em_lattice_check(FERMAT, 0.0, 10, 3, [0, 1, 2, 0]).unwrap();
        let counts = [7.0, 7.0, 7.0, 7.0];
        assert!((r.sum_re - counts.iter().product::<f64>()).abs() < 1e-9);
        assert!((r.integral - (20.0f64 / 3.0).powi(4)).abs() < 1e-9);
        assert!(em_lattice_check(FERMAT, 0.0, 2, 3, [0; 4]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn nstar_formula_random(a in prop::array::uniform4(1i64..30), p in prop::sample::select(primes_up_to(50))) {
            if let Ok((lhs, rhs)) = nstar_formula_check(a, p) {
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn nstar_multiplicative(a in prop::array::uniform4(1i64..10), q1 in 1u64..12, q2 in 1u64..12) {
            prop_assume!(gcd(q1 as i64, q2 as i64) == 1);
            let n = |q| local_counts(a, q).unwrap().n_star;
            prop_assert_eq!(n(q1 * q2), n(q1) * n(q2));
        }

        /// `N(p^e) = p^(3e-3) N*(p) + p^8 N(p^(e-3))` at good primes, so that
        /// `(1 - 1/p) p^(-3e) N(p^e)` tends to `p^-3 N*(p)` geometrically.
        #[test]
        fn cone_recursion(a in prop::array::uniform4(1i64..10), p in prop::sample::select(vec![5u64, 7, 11, 13])) {
            prop_assume!(check_good(a, p).is_ok());
            let n = |q: u64| local_counts(a, q).unwrap();
            let p = p as u128;
            prop_assert_eq!(n(p as u64 * p as u64 * p as u64).n, p.pow(6) * n(p as u64).n_star + p.pow(8));
            let s = n(p as u64).n_star as f64 / (p as f64).powi(3);
            let mut f = 1.0;
            for _ in 0..20 {
                f = s + f / p as f64;
            }
            prop_assert!(((1.0 - 1.0 / p as f64) * f - s).abs() < 1e-12);
        }
    }
}
