//! Euler products with exact local factors, convergence acceleration by
//! `zeta(2)` and `L(2, lambda)`, and explicit tail bounds.

use std::f64::consts::PI;

use num_traits::One;
use serde::Serialize;

use super::ConstError;
use crate::arith::{int, primes_up_to, rat, to_f64, Rational};

/// The non-principal character mod 3.
pub fn lambda(n: u64) -> i64 {
    match n % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

pub fn zeta2() -> f64 {
    PI * PI / 6.0
}

/// `L(2, lambda)` summed in pairs `1/(3k+1)^2 - 1/(3k+2)^2`; the tail past
/// `k = 10^6` is below `1/(27 k^2)`, far under double precision.
pub fn l2_lambda() -> f64 {
    let mut s = 0.0;
    for k in (0..1_000_000u64).rev() {
        let a = (3 * k + 1) as f64;
        let b = (3 * k + 2) as f64;
        s += 1.0 / (a * a) - 1.0 / (b * b);
    }
    s
}

/// `L(1, lambda) = pi sqrt(3) / 9`.
pub fn l1_lambda() -> f64 {
    PI * 3f64.sqrt() / 9.0
}

/// `sum_{n <= 3K} lambda(n)/n` and a bound for the remainder: grouped in pairs
/// the tail is `sum_{k >= K} 1/((3k+1)(3k+2)) <= 1/(9(K-1))`.
pub fn l1_lambda_series(pairs: u64) -> (f64, f64) {
    assert!(pairs >= 2);
    let mut s = 0.0;
    for k in (0..pairs).rev() {
        s += 1.0 / (3 * k + 1) as f64 - 1.0 / (3 * k + 2) as f64;
    }
    (s, 1.0 / (9.0 * (pairs - 1) as f64))
}

/// `prod_p f_p`, written as `prod_p h_p * zeta(2)^a * L(2, lambda)^b` with
/// `h_p = f_p (1 - p^-2)^a (1 - lambda(p) p^-2)^b`, chosen so that
/// `|log h_p| <= C p^-kappa` for every `p > 100`.
#[derive(Clone, Debug)]
pub struct EulerProduct {
    pub name: &'static str,
    pub local: fn(u64) -> Rational,
    pub zeta2_power: i32,
    pub l2_power: i32,
    pub kappa: u32,
    pub tail_constant: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProductValue {
    pub value: f64,
    /// Bound on `|true value - value|` from the primes above `P`.
    pub tail_bound: f64,
    pub prime_bound: u64,
}

/// Least prime bound the frozen tail constants are valid for.
pub const MIN_PRIME_BOUND: u64 = 100;

impl EulerProduct {
    /// `prod_{p <= P} f_p` without acceleration.
    pub fn partial(&self, bound: u64) -> f64 {
        primes_up_to(bound)
            .iter()
            .map(|&p| to_f64(&(self.local)(p)).ln())
            .sum::<f64>()
            .exp()
    }

    fn log_h(&self, p: u64) -> f64 {
        let x2 = 1.0 / (p as f64 * p as f64);
        to_f64(&(self.local)(p)).ln()
            + self.zeta2_power as f64 * (-x2).ln_1p()
            + self.l2_power as f64 * (-(lambda(p) as f64) * x2).ln_1p()
    }
}

/// Truncate at `P` and bound the rest: `sum_{p > P} C p^-kappa` is at most
/// `C int_P^inf t^-kappa dt = C P^(1-kappa) / (kappa-1)`.
pub fn euler_product(e: &EulerProduct, bound: u64) -> Result<ProductValue, ConstError> {
    if e.kappa < 2 {
        return Err(ConstError::Kappa(e.kappa));
    }
    if bound < MIN_PRIME_BOUND {
        return Err(ConstError::PrimeBound(bound));
    }
    let log_h: f64 = primes_up_to(bound).iter().map(|&p| e.log_h(p)).sum();
    let mut value = log_h.exp();
    if e.zeta2_power != 0 {
        value *= zeta2().powi(e.zeta2_power);
    }
    if e.l2_power != 0 {
        value *= l2_lambda().powi(e.l2_power);
    }
    let k = e.kappa as f64;
    let tail = e.tail_constant * (bound as f64).powf(1.0 - k) / (k - 1.0);
    Ok(ProductValue {
        value,
        tail_bound: value * tail.exp_m1(),
        prime_bound: bound,
    })
}

/// `(1 - 1/p)^4 (1 + 4/p + 1/p^2)`.
pub fn e2_local(p: u64) -> Rational {
    let x = rat(1, p as i64);
    let one = Rational::one();
    let a = &one - &x;
    let a2 = &a * &a;
    &a2 * &a2 * (&one + &x * int(4) + &x * &x)
}

/// `E2(0)`. In `x = 1/p` the factor is `1 - 9x^2 + 16x^3 - 9x^4 + x^6`, so
/// `h = f (1 - x^2)^-9` has `log h = 16x^3 - 45x^4 + ...`. Summing the
/// absolute values of the log coefficients against `x^(k-3)` at
/// `x = 1/101` gives 16.47; frozen as 17.
pub fn e2_product() -> EulerProduct {
    EulerProduct {
        name: "E2(0)",
        local: e2_local,
        zeta2_power: -9,
        l2_power: 0,
        kappa: 3,
        tail_constant: 17.0,
    }
}

/// `G_p(4)`: `(1-1/p)^7 (1+7/p+1/p^2)` for `p = 1 mod 3`,
/// `(1-1/p^3)(1-1/p^2)^3` for `p = 2 mod 3`, and `16/27` at `p = 3`.
pub fn g4_local(p: u64) -> Rational {
    let one = Rational::one();
    let x = rat(1, p as i64);
    match p % 3 {
        0 => rat(16, 27),
        1 => {
            let a = &one - &x;
            let a7 = (0..7).fold(one.clone(), |acc, _| acc * &a);
            a7 * (&one + &x * int(7) + &x * &x)
        }
        _ => {
            let x2 = &x * &x;
            let b = &one - &x2;
            (&one - &x2 * &x) * &b * &b * &b
        }
    }
}

fn g4_local_without_3(p: u64) -> Rational {
    if p == 3 {
        Rational::one()
    } else {
        g4_local(p)
    }
}

/// The log of `G_p(4)` starts `-27x^2` for `p = 1` and `-3x^2` for
/// `p = 2 mod 3`; both are `-15x^2 - 12 lambda(p) x^2`. After removing
/// `zeta(2)^-15 L(2,lambda)^-12` the `x^3` terms are `105x^3` and `-x^3`, and
/// the same coefficient sum at `x = 1/101` gives 110.67 and 1.12. Frozen as 111.
fn g4_shape(name: &'static str, local: fn(u64) -> Rational) -> EulerProduct {
    EulerProduct {
        name,
        local,
        zeta2_power: -15,
        l2_power: -12,
        kappa: 3,
        tail_constant: 111.0,
    }
}

/// `G(4) = prod_p G_p(4)`, the factor at 3 included.
pub fn g4_product() -> EulerProduct {
    g4_shape("G(4)", g4_local)
}

/// The two products over `p = 1` and `p = 2 mod 3`, taken together.
pub fn g4_product_without_3() -> EulerProduct {
    g4_shape("G(4) without p = 3", g4_local_without_3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_factors() {
        assert_eq!(e2_local(2), rat(13, 64));
        let x = rat(1, 7);
        let one = Rational::one();
        let expect =
            (0..7).fold(one.clone(), |a, _| a * (&one - &x)) * (&one + int(7) * &x + &x * &x);
        assert_eq!(g4_local(7), expect);
        assert_eq!(g4_local(2), rat(7, 8) * rat(3, 4) * rat(3, 4) * rat(3, 4));
        assert_eq!(g4_local(3), rat(16, 27));
    }

    #[test]
    fn factorisations_of_the_local_factors() {
        // (1-x)^4 (1+x)^3 (1+x+x^2) = (1-x^3)(1-x^2)^3 at p = 2 mod 3.
        for p in [2u64, 5, 11, 17, 101] {
            let x = rat(1, p as i64);
            let one = Rational::one();
            let lhs = (0..4).fold(one.clone(), |a, _| a * (&one - &x))
                * (0..3).fold(one.clone(), |a, _| a * (&one + &x))
                * (&one + &x + &x * &x);
            assert_eq!(lhs, g4_local(p), "p = {p}");
        }
    }

    #[test]
    fn l_values() {
        let (s, b) = l1_lambda_series(500_000);
        assert!((s - l1_lambda()).abs() <= b);
        assert!((l2_lambda() - 0.781_302_412_896_486_3).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut e = e2_product();
        assert!(euler_product(&e, 50).is_err());
        e.kappa = 1;
        assert!(matches!(euler_product(&e, 1000), Err(ConstError::Kappa(1))));
    }

    #[test]
    fn acceleration_matches_plain_truncation() {
        for e in [e2_product(), g4_product()] {
            let fast = euler_product(&e, 100_000).unwrap();
            let plain = e.partial(100_000);
            // The plain product still misses about C2 / (P log P) in the log.
            assert!(
                (fast.value - plain).abs() < 5e-4 * plain,
                "{}: {} vs {}",
                e.name,
                fast.value,
                plain
            );
            assert!(fast.value < plain);
        }
    }
}
