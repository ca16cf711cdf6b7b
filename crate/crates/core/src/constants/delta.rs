//! The arithmetic function `Delta(n)` behind the A1 count, its partial sums,
//! and the local factors of its Dirichlet series.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factor, gcd, int, phi_star, rat, to_f64, Rational};

/// `theta(s0, s)`: zero unless `s1, s2, s3` are pairwise coprime, and then
/// `phi*(s0) phi*(s1 s2 s3) prod_{p | s0, p !| s1 s2 s3} (1 - 2/p)`.
pub fn theta(s0: u64, s: [u64; 3]) -> Rational {
    let [s1, s2, s3] = s.map(|x| x as i64);
    if gcd(s1, s2) != 1 || gcd(s1, s3) != 1 || gcd(s2, s3) != 1 {
        return Rational::zero();
    }
    let k = s.iter().product::<u64>();
    let mut r = phi_star(s0) * phi_star(k);
    for p in factor(s0).primes() {
        if k % p != 0 {
            r *= Rational::one() - rat(2, p as i64);
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaTerm {
    pub s0: u64,
    pub s: [u64; 3],
    #[serde(serialize_with = "crate::report::rational_str")]
    pub theta: Rational,
}

/// All factorisations `n = s0^3 s1^2 s2^2 s3^2` with a nonzero weight.
pub fn delta_terms(n: u64) -> Vec<DeltaTerm> {
    assert!(n >= 1, "Delta is defined for n >= 1");
    let mut out = Vec::new();
    let mut s0 = 1u64;
    while s0 * s0 * s0 <= n {
        if n % (s0 * s0 * s0) == 0 {
            let m = n / (s0 * s0 * s0);
            let k = m.isqrt();
            if k * k == m {
                for s1 in (1..=k).filter(|d| k % d == 0) {
                    for s2 in (1..=k / s1).filter(|d| (k / s1) % d == 0) {
                        let s = [s1, s2, k / (s1 * s2)];
                        let t = theta(s0, s);
                        if !t.is_zero() {
                            out.push(DeltaTerm { s0, s, theta: t });
                        }
                    }
                }
            }
        }
        s0 += 1;
    }
    out
}

/// `Delta(n) = sum theta(s0, s) / (s1 s2 s3)^{1/3}`.
pub fn delta_fn(n: u64) -> f64 {
    delta_terms(n)
        .iter()
        .map(|t| to_f64(&t.theta) / (t.s.iter().product::<u64>() as f64).cbrt())
        .sum()
}

/// `sum_{n <= X} Delta(n)`, by nested loops over `s0^3 (s1 s2 s3)^2 <= X`.
pub fn delta_partial_sum(x: u64) -> f64 {
    let kmax = x.isqrt();
    // phi*(k) and the prime divisors of each k <= sqrt(X).
    let mut primes_of: Vec<Vec<u64>> = vec![Vec::new(); kmax as usize + 1];
    for p in 2..=kmax {
        if primes_of[p as usize].is_empty() {
            let mut m = p;
            while m <= kmax {
                primes_of[m as usize].push(p);
                m += p;
            }
        }
    }
    let phi: Vec<f64> = primes_of
        .iter()
        .map(|ps| ps.iter().map(|&p| 1.0 - 1.0 / p as f64).product())
        .collect();
    let s0s: Vec<u64> = (1..).take_while(|s| s * s * s <= x).collect();
    let per_s0: Vec<f64> = s0s
        .par_iter()
        .map(|&s0| {
            let ps0 = factor(s0).primes().collect::<Vec<_>>();
            let phi0: f64 = ps0.iter().map(|&p| 1.0 - 1.0 / p as f64).product();
            let kb = (x / (s0 * s0 * s0)).isqrt();
            let mut total = 0.0;
            for s1 in 1..=kb {
                for s2 in 1..=kb / s1 {
                    if gcd(s1 as i64, s2 as i64) != 1 {
                        continue;
                    }
                    let s12 = s1 * s2;
                    for s3 in 1..=kb / s12 {
                        if gcd(s12 as i64, s3 as i64) != 1 {
                            continue;
                        }
                        let k = s12 * s3;
                        let mut t = phi0 * phi[k as usize];
                        for &p in &ps0 {
                            if k % p != 0 {
                                t *= 1.0 - 2.0 / p as f64;
                            }
                        }
                        total += t / (k as f64).cbrt();
                    }
                }
            }
            total
        })
        .collect();
    per_s0.iter().sum()
}

/// `sum_{n <= X} Delta(n)` over its predicted main term `X^{1/3} (log X)^3 E2(0) / 48`.
pub fn delta_main_term_ratio(x: u64, e2_zero: f64) -> f64 {
    let xf = x as f64;
    delta_partial_sum(x) / (xf.cbrt() * xf.ln().powi(3) * e2_zero / 48.0)
}

/// Truncated power series in `X = p^{-s}` with rational coefficients.
fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            c[i + j] += x * y;
        }
    }
    c
}

/// `sum_{m >= from} r^m X^{k m}` truncated to `n` terms.
fn geometric(k: usize, r: &Rational, from: usize, n: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); n];
    let mut m = from;
    while k * m < n {
        c[k * m] = (0..m).fold(Rational::one(), |acc, _| acc * r);
        m += 1;
    }
    c
}

/// Coefficients of `X^0 .. X^order` of the local factor `a_p(s)`, `X = p^{-s}`.
pub fn ap_series(p: u64, order: usize) -> Vec<Rational> {
    let n = order + 1;
    let one = Rational::one();
    let x = rat(1, p as i64);
    let a = &one - &x;
    let b = &one - int(2) * &x;
    let g2 = geometric(2, &x, 1, n);
    let g3 = geometric(3, &x, 1, n);
    let mut out = vec![Rational::zero(); n];
    out[0] = one.clone();
    for k in 0..n {
        out[k] += int(3) * &a * &g2[k] + &a * &b * &g3[k];
    }
    if n > 5 {
        let prod = series_mul(&geometric(2, &x, 0, n), &geometric(3, &x, 0, n));
        let c = int(3) * &a * &a * &x * &x;
        for k in 5..n {
            out[k] += &c * &prod[k - 5];
        }
    }
    out
}

/// The same coefficients read off `theta` directly: `s0 = p^e0`, `s_i = p^e_i`
/// contributes `theta p^{-e0 - e1 - e2 - e3}` to `X^{3 e0 + 2(e1 + e2 + e3)}`.
pub fn theta_local_series(
    p: u64,
    order: usize,
    theta: impl Fn(u64, [u64; 3]) -> Rational,
) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); order + 1];
    let pw = |e: usize| p.pow(e as u32);
    for e0 in 0..=order / 3 {
        let rest = (order - 3 * e0) / 2;
        for e1 in 0..=rest {
            for e2 in 0..=rest - e1 {
                for e3 in 0..=rest - e1 - e2 {
                    let t = theta(pw(e0), [pw(e1), pw(e2), pw(e3)]);
                    if t.is_zero() {
                        continue;
                    }
                    let tot = e0 + e1 + e2 + e3;
                    out[3 * e0 + 2 * (e1 + e2 + e3)] += t * rat(1, pw(tot) as i64);
                }
            }
        }
    }
    out
}

/// Whether the local factor formula matches `theta` coefficientwise at `p`.
pub fn ap_identity_holds(p: u64, order: usize) -> bool {
    ap_series(p, order) == theta_local_series(p, order, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mobius;
    use proptest::prelude::*;

    /// `theta` as first defined, a sum over `k3 | s0` coprime to `s1 s2`.
    fn theta_definition(s0: u64, s: [u64; 3]) -> Rational {
        let [s1, s2, s3] = s;
        let g = |a: u64, b: u64| gcd(a as i64, b as i64) as u64;
        if g(s1, s2) != 1 || g(s1, s3) != 1 || g(s2, s3) != 1 {
            return Rational::zero();
        }
        let pre = phi_star(s0 * s2) * phi_star(s0 * s1 * s3) / phi_star(g(s0, s3));
        let mut sum = Rational::zero();
        for k3 in (1..=s0).filter(|d| s0 % d == 0 && g(*d, s1 * s2) == 1) {
            let mu = mobius(k3);
            if mu == 0 {
                continue;
            }
            sum += int(mu as i64) * rat(1, k3 as i64) * phi_star(g(g(k3, s0), s3))
                / phi_star(g(k3, s0));
        }
        pre * sum
    }

    #[test]
    fn small_values() {
        assert!((delta_fn(1) - 1.0).abs() < 1e-15);
        let want = 3.0 * 0.5 * 2f64.powf(-1.0 / 3.0);
        assert!((delta_fn(4) - want).abs() < 1e-15);
        assert_eq!(delta_terms(4).len(), 3);
        assert!(delta_fn(2) == 0.0 && delta_fn(3) == 0.0);
        // 8 = 2^3: s0 = 2 alone, theta = (1/2)(1 - 2/2) = 0.
        assert_eq!(delta_fn(8), 0.0);
    }

    #[test]
    fn partial_sum_matches_pointwise() {
        let direct: f64 = (1..=5000).map(delta_fn).sum();
        assert!((delta_partial_sum(5000) - direct).abs() < 1e-9);
    }

    #[test]
    fn local_factor_identity() {
        for p in [2, 3, 5] {
            assert!(ap_identity_holds(p, 12), "p = {p}");
            assert_eq!(
                theta_local_series(p, 12, theta_definition),
                ap_series(p, 12),
                "p = {p}"
            );
        }
    }

    #[test]
    fn a_p_at_zero() {
        // a_p(0) (1 - 1/p)^4 is the E2(0) factor: a_p(0) = 1 + 4/p + 1/p^2.
        for p in [2i64, 3, 5, 7] {
            let one = Rational::one();
            let x = rat(1, p);
            let a = &one - &x;
            let ap0 = &one
                + int(3) * &a * &x / &a
                + &a * (&one - int(2) * &x) * &x / &a
                + int(3) * &a * &a * &x * &x / (&a * &a);
            assert_eq!(ap0, &one + int(4) * &x + &x * &x);
        }
    }

    proptest! {
        #[test]
        fn closed_form_theta(s0 in 1u64..200, s1 in 1u64..40, s2 in 1u64..40, s3 in 1u64..40) {
            prop_assert_eq!(theta(s0, [s1, s2, s3]), theta_definition(s0, [s1, s2, s3]));
        }

        #[test]
        fn theta_symmetric(s0 in 1u64..100, s1 in 1u64..30, s2 in 1u64..30, s3 in 1u64..30) {
            prop_assert_eq!(theta(s0, [s1, s2, s3]), theta(s0, [s3, s1, s2]));
            prop_assert_eq!(theta(s0, [s1, s2, s3]), theta(s0, [s2, s1, s3]));
        }
    }
}
