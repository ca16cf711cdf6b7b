//! Integer factorisation for `u64`.
//!
//! Small numbers are split with a smallest-prime-factor table; anything past the
//! table falls through to trial division by the tabulated primes and, for the
//! leftover cofactor, Miller–Rabin plus Pollard's rho.

use std::sync::OnceLock;

/// Default bound for the shared sieve.
pub const DEFAULT_SIEVE_BOUND: u64 = 1_000_000;

/// A prime factorisation `n = p1^e1 * ... * pk^ek` with `p1 < ... < pk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }
}

/// Smallest-prime-factor sieve up to a fixed bound.
#[derive(Debug)]
pub struct PrimeSieve {
    bound: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(bound: u64) -> Self {
        let bound = bound.max(2);
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i];
            for &p in &primes {
                let m = p as usize * i;
                if p as u32 > si || m > n {
                    break;
                }
                spf[m] = p as u32;
            }
        }
        PrimeSieve { bound, spf, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn factor(&self, n: u64) -> Factorization {
        assert!(n > 0, "cannot factor 0");
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut push = |p: u64| match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        };
        let mut m = n;
        if m <= self.bound {
            while m > 1 {
                let p = self.spf[m as usize] as u64;
                push(p);
                m /= p;
            }
            return Factorization { n, factors };
        }
        for &p in &self.primes {
            if p * p > m {
                break;
            }
            while m % p == 0 {
                push(p);
                m /= p;
            }
            if m <= self.bound {
                break;
            }
        }
        if m <= self.bound {
            while m > 1 {
                let p = self.spf[m as usize] as u64;
                push(p);
                m /= p;
            }
        } else if m > 1 {
            // Every prime below the sieve bound has been removed, so the
            // remaining cofactor has only large prime factors.
            let mut big = Vec::new();
            split_large(m, &mut big);
            big.sort_unstable();
            for p in big {
                push(p);
            }
        }
        factors.sort_unstable();
        // `push` only merges adjacent equal primes; re-merge after sorting.
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { n, factors: merged }
    }
}

fn shared() -> &'static PrimeSieve {
    static SIEVE: OnceLock<PrimeSieve> = OnceLock::new();
    SIEVE.get_or_init(|| PrimeSieve::new(DEFAULT_SIEVE_BOUND))
}

/// Factor `n >= 1` using the shared sieve.
pub fn factor(n: u64) -> Factorization {
    shared().factor(n)
}

/// All primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n <= DEFAULT_SIEVE_BOUND {
        let ps = shared().primes();
        let end = ps.partition_point(|&p| p <= n);
        ps[..end].to_vec()
    } else {
        PrimeSieve::new(n).primes
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorisations() {
        assert_eq!(factor(1).factors, vec![]);
        assert_eq!(factor(360).factors, vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(999_983).factors, vec![(999_983, 1)]);
    }

    #[test]
    fn past_the_sieve() {
        // 1_000_003 is prime, 999_983 is the largest prime below 10^6.
        let n = 1_000_003u64 * 999_983;
        assert_eq!(factor(n).factors, vec![(999_983, 1), (1_000_003, 1)]);
        let m = 4 * 1_000_003u64 * 1_000_003;
        assert_eq!(factor(m).factors, vec![(2, 2), (1_000_003, 2)]);
        assert_eq!(factor(u64::MAX).n, u64::MAX);
        let prod: u64 = factor(u64::MAX)
            .factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product();
        assert_eq!(prod, u64::MAX);
    }

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(factor(12).divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primes_list() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }
}
