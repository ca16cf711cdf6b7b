use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factor, gcd, is_square, kronecker, mobius, omega};

/// Squarefree part of `n != 0`, sign kept.
fn squarefree_part(n: i128) -> i128 {
    let f = factor(n.unsigned_abs() as u64);
    let core: i128 = f
        .factors
        .iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|&(p, _)| p as i128)
        .product();
    core * n.signum()
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Legendre: `c1 x^2 + c2 y^2 + c3 z^2 = 0` has a nonzero rational solution.
///
/// The form is first made squarefree with pairwise coprime coefficients;
/// then it is soluble iff the signs are mixed and `-c_j c_k` is a square
/// modulo `|c_i|` for each `i`.
pub fn legendre_soluble(c: [i64; 3]) -> bool {
    assert!(!c.contains(&0), "coefficients must be nonzero");
    let mut c = c.map(|x| squarefree_part(x as i128));
    loop {
        let pair = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
            .into_iter()
            .find(|&(i, j, _)| gcd128(c[i], c[j]) > 1);
        let Some((i, j, k)) = pair else { break };
        // g | c_i, c_j forces g | z_k; divide through by g.
        let g = gcd128(c[i], c[j]);
        c[i] /= g;
        c[j] /= g;
        c[k] = squarefree_part(c[k] * g);
    }
    if c.iter().all(|&x| x > 0) || c.iter().all(|&x| x < 0) {
        return false;
    }
    (0..3).all(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let m = c[i].unsigned_abs() as u64;
        let target = -c[j] * c[k];
        factor(m)
            .primes()
            .filter(|&p| p > 2)
            .all(|p| kronecker(target.rem_euclid(p as i128) as i64, p) == 1)
    })
}

/// Per-coordinate bounds `sqrt(|c_j c_k|)`, the box of Holzer's theorem.
pub fn holzer_box(c: [i64; 3]) -> [i64; 3] {
    [(1, 2), (0, 2), (0, 1)]
        .map(|(j, k)| (c[j] as i128 * c[k] as i128).unsigned_abs().isqrt() as i64)
}

/// First nonzero solution of `c1 x^2 + c2 y^2 + c3 z^2 = 0` with
/// `|x_i| <= bounds_i` accepted by `accept`, looping over the two shortest
/// sides.
pub fn find_conic_solution(
    c: [i64; 3],
    bounds: [i64; 3],
    accept: impl Fn([i64; 3]) -> bool,
) -> Option<[i64; 3]> {
    let mut idx = [0usize, 1, 2];
    idx.sort_by_key(|&i| bounds[i]);
    let [i, j, k] = idx;
    let (ci, cj, ck) = (c[i] as i128, c[j] as i128, c[k] as i128);
    // x_i >= 0 loses nothing: solutions come in sign classes.
    for xi in 0..=bounds[i] {
        for xj in -bounds[j]..=bounds[j] {
            let rest = -(ci * (xi as i128).pow(2) + cj * (xj as i128).pow(2));
            if rest % ck != 0 {
                continue;
            }
            let Some(z) = is_square(rest / ck) else {
                continue;
            };
            if z > bounds[k] as i128 {
                continue;
            }
            let mut x = [0i64; 3];
            x[i] = xi;
            x[j] = xj;
            x[k] = z as i64;
            if x != [0; 3] && accept(x) {
                return Some(x);
            }
        }
    }
    None
}

/// Dyadic box `|a_i| in [2^ka_i, 2^(ka_i+1))`, `|b_i| in [2^kb_i, 2^(kb_i+1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicLevel {
    pub ka: [u32; 3],
    pub kb: [u32; 3],
}

impl DyadicLevel {
    pub fn a(&self) -> f64 {
        self.ka.iter().map(|&k| 2f64.powi(k as i32)).product()
    }

    pub fn b(&self) -> f64 {
        self.kb.iter().map(|&k| 2f64.powi(k as i32)).product()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConicStats {
    pub level: DyadicLevel,
    pub seed: u64,
    pub sampled: u64,
    /// Samples meeting the squarefree and coprimality side conditions.
    pub admissible: u64,
    /// Admissible samples with a solution found in the search box.
    pub found: u64,
    /// Admissible samples soluble by Legendre's criterion.
    pub legendre: u64,
    /// `S(A,B) / AB` estimated from the sample.
    pub ratio_all: f64,
    /// `S*(A,B) / AB`: the same sum restricted to soluble conics.
    pub ratio_soluble: f64,
}

fn admissible(a: [i64; 3], b: [i64; 3]) -> bool {
    let prod = a.iter().map(|x| x.unsigned_abs()).product::<u64>();
    if mobius(prod) == 0 {
        return false;
    }
    (0..3).all(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        gcd(a[i], gcd(b[j], b[k])) == 1
    })
}

/// Sample `(a, b)` uniformly from the dyadic box with random signs; weight
/// admissible ones by `2^omega(a1 a2 a3 b1 b2 b3)`. A conic counts as soluble
/// when the search finds nonzero `c` with `gcd(c_i, c_j) = gcd(a_i, c_j) = 1`.
/// Legendre's criterion ignores these side conditions, so `found` can be well
/// below `legendre`.
pub fn conic_solvability_stats(level: DyadicLevel, sample_size: u64, seed: u64) -> ConicStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |k: u32| {
        let lo = 1i64 << k;
        let v = rng.random_range(lo..2 * lo);
        if rng.random::<bool>() {
            v
        } else {
            -v
        }
    };
    let samples: Vec<([i64; 3], [i64; 3])> = (0..sample_size)
        .map(|_| (level.ka.map(&mut draw), level.kb.map(&mut draw)))
        .collect();
    let results: Vec<(bool, bool, bool, f64)> = samples
        .par_iter()
        .map(|&(a, b)| {
            if !admissible(a, b) {
                return (false, false, false, 0.0);
            }
            let c = [0, 1, 2].map(|i| a[i] * b[i]);
            let w = 2f64.powi(omega(c.iter().map(|x| x.unsigned_abs()).product()) as i32);
            let accept = |x: [i64; 3]| {
                (0..3).all(|i| {
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    gcd(x[i], x[j]) == 1 && gcd(a[i], x[j]) == 1 && gcd(a[i], x[k]) == 1
                })
            };
            let found = find_conic_solution(c, holzer_box(c), accept).is_some();
            (true, found, legendre_soluble(c), w)
        })
        .collect();
    let box_size = 64.0 * level.a() * level.b();
    let n = sample_size as f64;
    let sum_all: f64 = results.iter().map(|r| r.3).sum();
    let sum_sol: f64 = results.iter().filter(|r| r.1).map(|r| r.3).sum();
    ConicStats {
        level,
        seed,
        sampled: sample_size,
        admissible: results.iter().filter(|r| r.0).count() as u64,
        found: results.iter().filter(|r| r.1).count() as u64,
        legendre: results.iter().filter(|r| r.2).count() as u64,
        // `+ 0.0` turns the empty sum's -0.0 into 0.0.
        ratio_all: box_size * sum_all / n / (level.a() * level.b()) + 0.0,
        ratio_soluble: box_size * sum_sol / n / (level.a() * level.b()) + 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_soluble(c: [i64; 3], r: i64) -> bool {
        find_conic_solution(c, [r; 3], |_| true).is_some()
    }

    #[test]
    fn examples() {
        assert!(!legendre_soluble([1, 1, 1]));
        assert!(find_conic_solution([1, 1, 1], [50; 3], |_| true).is_none());
        assert!(legendre_soluble([1, 1, -2]));
        assert_eq!(
            find_conic_solution([1, 1, -2], holzer_box([1, 1, -2]), |_| true),
            Some([1, -1, 1])
        );
        assert!(!legendre_soluble([1, 1, -3]));
        assert!(legendre_soluble([3, 5, -8]));
        assert!(legendre_soluble([4, 9, -25]));
    }

    proptest! {
        #[test]
        fn legendre_agrees_with_search(c in prop::array::uniform3(prop_oneof![-40i64..=-1, 1i64..=40])) {
            // Any soluble conic has a solution with |x_i| <= |c1 c2 c3|, far
            // more than Holzer's bound needs.
            let r = c.iter().map(|x| x.abs()).product::<i64>();
            prop_assert_eq!(legendre_soluble(c), brute_soluble(c, r.min(400)));
        }

    }

    #[test]
    fn holzer_box_suffices() {
        let range = || (-25i64..=25).filter(|&x| x != 0 && mobius(x.unsigned_abs()) != 0);
        for c1 in range() {
            for c2 in range().filter(|&y| gcd(c1, y) == 1) {
                for c3 in range().filter(|&z| gcd(c1, z) == 1 && gcd(c2, z) == 1) {
                    let c = [c1, c2, c3];
                    assert_eq!(
                        legendre_soluble(c),
                        find_conic_solution(c, holzer_box(c), |_| true).is_some(),
                        "{c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn stats_are_deterministic() {
        let lvl = DyadicLevel {
            ka: [1, 1, 1],
            kb: [1, 0, 1],
        };
        let a = conic_solvability_stats(lvl, 300, 9);
        let b = conic_solvability_stats(lvl, 300, 9);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.found <= a.legendre && a.legendre <= a.admissible);
    }
}
