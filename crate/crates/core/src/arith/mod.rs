//! Exact arithmetic shared by every other module.
//!
//! Rationals are `num_rational::BigRational`, always stored in lowest terms
//! with a positive denominator. The multiplicative functions here take `n >= 1`
//! and panic on zero, the same contract as `u64::ilog2`.

mod factor;

pub use factor::{
    factor, is_prime, pow_mod, primes_up_to, Factorization, PrimeSieve, DEFAULT_SIEVE_BOUND,
};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n / d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn mobius(n: u64) -> i8 {
    let f = factor(n);
    if !f.is_squarefree() {
        0
    } else if f.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Write `n = a * b^2` with `a` squarefree.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    let f = factor(n);
    let mut a = 1u64;
    let mut b = 1u64;
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            a *= p;
        }
        b *= p.pow(e / 2);
    }
    (a, b)
}

/// `phi*(n) = prod_{p | n} (1 - 1/p) = phi(n) / n`.
pub fn phi_star(n: u64) -> Rational {
    let f = factor(n);
    let mut r = Rational::one();
    for p in f.primes() {
        r *= rat(p as i64 - 1, p as i64);
    }
    r
}

pub fn phi_star_f64(n: u64) -> f64 {
    factor(n).primes().map(|p| 1.0 - 1.0 / p as f64).product()
}

pub fn omega(n: u64) -> u32 {
    factor(n).omega()
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    factor(n)
        .factors
        .iter()
        .map(|&(_, e)| e as u64 + 1)
        .product()
}

pub fn radical(n: u64) -> u64 {
    factor(n).radical()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_slice(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Is `x` a primitive vector (coordinates with gcd 1)?
pub fn is_primitive(xs: &[i64]) -> bool {
    gcd_slice(xs) == 1
}

/// Normalise a primitive vector up to sign: first nonzero coordinate positive.
pub fn sign_normalised(xs: &[i64]) -> bool {
    xs.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

pub fn is_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn is_cube_u64(n: u64) -> bool {
    let r = n.cbrt();
    r * r * r == n
}

/// Is the rational `r` the cube of a rational?
pub fn is_rational_cube(r: &Rational) -> bool {
    if r.is_zero() {
        return true;
    }
    let num = r.numer().abs();
    let den = r.denom().abs();
    let c = num.cbrt();
    let d = den.cbrt();
    &c * &c * &c == num && &d * &d * &d == den
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Least primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime(p), "{p} is not prime");
    if p == 2 {
        return 1;
    }
    let qs: Vec<u64> = factor(p - 1).primes().collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("a prime has a primitive root")
}

/// Kronecker symbol `(a / n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    assert!(n > 0);
    let mut result = 1i8;
    let mut n = n;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (a / n) for odd n.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Counts of primitive vectors, computed twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimitiveCount {
    pub direct: u64,
    pub mobius: u64,
}

/// Count the primitive vectors of a finite set of nonzero integer vectors,
/// once by filtering on the gcd and once through `sum_k mu(k) #{x in S : k | x}`.
pub fn primitive_count(points: &[Vec<i64>]) -> PrimitiveCount {
    let direct = points.iter().filter(|x| is_primitive(x)).count() as u64;
    let kmax = points
        .iter()
        .flat_map(|x| x.iter().map(|c| c.unsigned_abs()))
        .max()
        .unwrap_or(0);
    let mut total: i64 = 0;
    for k in 1..=kmax {
        let mu = mobius(k) as i64;
        if mu == 0 {
            continue;
        }
        let k = k as i64;
        let hits = points
            .iter()
            .filter(|x| x.iter().any(|&c| c != 0) && x.iter().all(|&c| c % k == 0))
            .count() as i64;
        total += mu * hits;
    }
    PrimitiveCount {
        direct,
        mobius: total as u64,
    }
}

/// Number of primitive vectors in the box `[-b, b]^n`, by Möbius inversion.
pub fn primitive_count_box(n: u32, b: u64) -> u64 {
    let mut total: i128 = 0;
    for k in 1..=b {
        let mu = mobius(k) as i128;
        if mu != 0 {
            let side = 2 * (b / k) as i128 + 1;
            total += mu * (side.pow(n) - 1);
        }
    }
    total as u64
}

/// `#{m in (lo, hi] : gcd(m, a) = 1}`, by Möbius over the squarefree divisors of `a`.
pub fn coprime_count(a: u64, lo: i64, hi: i64) -> i64 {
    if hi <= lo {
        return 0;
    }
    let f = factor(a);
    let ps: Vec<i64> = f.primes().map(|p| p as i64).collect();
    let mut total = 0i64;
    for mask in 0u32..(1 << ps.len()) {
        let mut d = 1i64;
        let mut sign = 1i64;
        for (i, p) in ps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
                sign = -sign;
            }
        }
        total += sign * (Integer::div_floor(&hi, &d) - Integer::div_floor(&lo, &d));
    }
    total
}

/// Error of `coprime_count` against `phi*(a) * L`, together with the bound `2^omega(a)`.
pub fn coprime_count_discrepancy(a: u64, lo: i64, hi: i64) -> (f64, f64) {
    let count = coprime_count(a, lo, hi) as f64;
    let main = phi_star_f64(a) * (hi - lo) as f64;
    ((count - main).abs(), 2f64.powi(omega(a) as i32))
}
