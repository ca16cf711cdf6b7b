use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{invariant, narrow, TorsorError};
use crate::arith::{gcd, inv_mod};

/// A point on the torsor `s1 y1 - s2 y2 + s3 y3 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsorPointA1 {
    pub s0: u64,
    pub s: [u64; 3],
    pub y1: u64,
    pub y2: i64,
    pub y3: i64,
}

impl TorsorPointA1 {
    pub fn validate(&self) -> Result<(), TorsorError> {
        let [s1, s2, s3] = self.s.map(|v| v as i64);
        let s0 = self.s0 as i64;
        let y1 = self.y1 as i64;
        invariant(
            self.s0 >= 1 && self.s.iter().all(|&v| v >= 1) && y1 >= 1,
            || "s0, s1, s2, s3, y1 must be positive".into(),
        )?;
        invariant(
            s1 as i128 * y1 as i128 - s2 as i128 * self.y2 as i128 + s3 as i128 * self.y3 as i128
                == 0,
            || "s1 y1 - s2 y2 + s3 y3 != 0".into(),
        )?;
        invariant(
            gcd(s1, s2) == 1 && gcd(s1, s3) == 1 && gcd(s2, s3) == 1,
            || "s1, s2, s3 not pairwise coprime".into(),
        )?;
        invariant(
            gcd(y1, s0 * s2 * s3) == 1
                && gcd(self.y2, s0 * s1 * s3) == 1
                && gcd(self.y3, s0 * s1 * s2) == 1,
            || "some y_i shares a factor with s0 s_j s_k".into(),
        )?;
        // Tuples with y2 = 0 satisfy the conditions above when s0 = s1 = s3 = 1
        // but map to x1 = x4 = x5 = 0, off the open subset.
        invariant(self.y2 != 0, || "y2 = 0 maps to the boundary".into())
    }

    /// The height function `Psi`; equal to the height of the image point.
    pub fn psi(&self) -> u128 {
        let [s1, s2, s3] = self.s.map(|v| v as u128);
        let s0 = self.s0 as u128;
        let y1 = self.y1 as u128;
        let y2 = self.y2.unsigned_abs() as u128;
        let y3 = self.y3.unsigned_abs() as u128;
        (s0 * s0 * s0 * s1 * s1 * s2 * s2 * s3 * s3)
            .max(y1 * y2 * y3)
            .max(s0 * s1 * s1 * y1 * y1)
            .max(s0 * s2 * s2 * y2 * y2)
    }
}

pub fn a1_map(t: &TorsorPointA1) -> Result<[i64; 7], TorsorError> {
    t.validate()?;
    let [s1, s2, s3] = t.s.map(|v| v as i128);
    let s0 = t.s0 as i128;
    let (y1, y2, y3) = (t.y1 as i128, t.y2 as i128, t.y3 as i128);
    narrow([
        s0 * s1 * s2 * y1 * y2,
        s0 * s1 * s1 * y1 * y1,
        s0 * s0 * s1 * s1 * s2 * s3 * y1,
        s0 * s2 * s2 * y2 * y2,
        s0 * s0 * s1 * s2 * s2 * s3 * y2,
        s0 * s0 * s0 * s1 * s1 * s2 * s2 * s3 * s3,
        y1 * y2 * y3,
    ])
}

/// Outer parameters `(s0, s1, s2, s3)` with `s0^3 (s1 s2 s3)^2 <= B`, pairwise coprime.
fn outer(bound: u64) -> Vec<(u64, [u64; 3])> {
    let b = bound as u128;
    let mut out = Vec::new();
    let mut s0 = 1u64;
    while (s0 as u128).pow(3) <= b {
        let room = b / (s0 as u128).pow(3);
        let mut s1 = 1u64;
        while (s1 as u128).pow(2) <= room {
            let mut s2 = 1u64;
            while ((s1 * s2) as u128).pow(2) <= room {
                if gcd(s1 as i64, s2 as i64) == 1 {
                    let mut s3 = 1u64;
                    while ((s1 * s2 * s3) as u128).pow(2) <= room {
                        if gcd(s3 as i64, (s1 * s2) as i64) == 1 {
                            out.push((s0, [s1, s2, s3]));
                        }
                        s3 += 1;
                    }
                }
                s2 += 1;
            }
            s1 += 1;
        }
        s0 += 1;
    }
    out
}

fn isqrt_floor(n: u128) -> u64 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r as u64
}

/// Ranges of `y1` in `[1, top]` that can satisfy `|y1 (c - s1 y1)| <= k`.
///
/// The product is a downward parabola in `y1` with roots `0` and `c / s1`; the
/// admissible set is at most two intervals, found in floating point and then
/// widened, since every candidate is checked exactly afterwards.
fn y1_windows(c: i64, s1: u64, k: f64, top: u64) -> [(u64, u64); 2] {
    let (c, s1) = (c as f64, s1 as f64);
    let outer = (c + (c * c + 4.0 * s1 * k).sqrt()) / (2.0 * s1);
    let hi = top.min((outer + 2.0).max(0.0) as u64);
    let disc = c * c - 4.0 * s1 * k;
    if c > 0.0 && disc > 0.0 {
        let lo_v = (c - disc.sqrt()) / (2.0 * s1);
        let hi_v = (c + disc.sqrt()) / (2.0 * s1);
        let first_end = hi.min((lo_v + 2.0).max(0.0) as u64);
        let second_start = (first_end + 1).max((hi_v - 2.0).max(0.0) as u64);
        [(1, first_end), (second_start, hi)]
    } else {
        [(1, hi), (1, 0)]
    }
}

/// Fold over all torsor points with `Psi <= B`, in parallel over the outer
/// parameters. Results are merged in a fixed order.
pub fn a1_fold<A, V, M>(bound: u64, init: impl Fn() -> A + Sync + Send, visit: V, merge: M) -> A
where
    A: Send,
    V: Fn(&mut A, &TorsorPointA1) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if bound == 0 {
        return init();
    }
    let b = bound as i128;
    outer(bound)
        .into_par_iter()
        .map(|(s0, [s1, s2, s3])| {
            let mut acc = init();
            let y2_max = isqrt_floor(bound as u128 / (s0 * s2 * s2) as u128) as i64;
            let y1_max = isqrt_floor(bound as u128 / (s0 * s1 * s1) as u128);
            let inv_s1 = if s3 == 1 {
                0
            } else {
                inv_mod(s1 as i64, s3 as i64).expect("coprime")
            };
            for y2 in (-y2_max..=y2_max).filter(|&y| y != 0) {
                if gcd(y2, (s0 * s1 * s3) as i64) != 1 {
                    continue;
                }
                let c = s2 as i64 * y2;
                // y1 = c / s1 (mod s3)
                let r = (c.rem_euclid(s3 as i64) * inv_s1).rem_euclid(s3 as i64) as u64;
                let k = (s3 as f64) * (bound as f64) / (y2.unsigned_abs() as f64);
                for (lo, hi) in y1_windows(c, s1, k, y1_max) {
                    if lo > hi {
                        continue;
                    }
                    let mut y1 = lo + (r + s3 - lo % s3) % s3;
                    while y1 <= hi {
                        let num = c as i128 - (s1 * y1) as i128;
                        let y3 = (num / s3 as i128) as i64;
                        if (y1 as i128 * y2 as i128 * y3 as i128).abs() <= b
                            && gcd(y1 as i64, (s0 * s2 * s3) as i64) == 1
                            && gcd(y3, (s0 * s1 * s2) as i64) == 1
                        {
                            visit(
                                &mut acc,
                                &TorsorPointA1 {
                                    s0,
                                    s: [s1, s2, s3],
                                    y1,
                                    y2,
                                    y3,
                                },
                            );
                        }
                        y1 += s3;
                    }
                }
            }
            acc
        })
        .reduce_with(&merge)
        .unwrap_or_else(init)
}

pub fn a1_count(bound: u64) -> u64 {
    a1_fold(bound, || 0u64, |n, _| *n += 1, |a, b| a + b)
}

pub fn a1_points(bound: u64) -> Vec<TorsorPointA1> {
    let mut pts = a1_fold(
        bound,
        Vec::new,
        |v, t| v.push(*t),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    pts.sort();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::builtin;

    #[test]
    fn example_point() {
        let t = TorsorPointA1 {
            s0: 1,
            s: [1, 1, 1],
            y1: 1,
            y2: 2,
            y3: 1,
        };
        assert_eq!(a1_map(&t).unwrap(), [2, 1, 1, 4, 2, 1, 2]);
        assert_eq!(t.psi(), 4);
        let spec = builtin("dp6_a1_torsor").unwrap();
        assert!(spec.contains(&[2, 1, 1, 4, 2, 1, 2]));
    }

    #[test]
    fn rejects_bad_input() {
        let t = TorsorPointA1 {
            s0: 1,
            s: [2, 2, 1],
            y1: 1,
            y2: 1,
            y3: 0,
        };
        assert!(a1_map(&t).is_err());
    }

    /// All torsor points in a box, without the windowing.
    fn brute(bound: u64) -> Vec<TorsorPointA1> {
        let mut out = Vec::new();
        for (s0, s) in outer(bound) {
            let yb = bound as i64;
            for y1 in 1..=yb {
                for y2 in -yb..=yb {
                    let num = s[1] as i64 * y2 - s[0] as i64 * y1;
                    if num % s[2] as i64 != 0 {
                        continue;
                    }
                    let t = TorsorPointA1 {
                        s0,
                        s,
                        y1: y1 as u64,
                        y2,
                        y3: num / s[2] as i64,
                    };
                    if t.validate().is_ok() && t.psi() <= bound as u128 {
                        out.push(t);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn windows_lose_nothing() {
        for b in [0, 1, 2, 7, 30, 64] {
            assert_eq!(a1_points(b), brute(b), "B = {b}");
        }
    }

    #[test]
    fn height_matches_image() {
        for t in a1_points(200) {
            let x = a1_map(&t).unwrap();
            let h = x.iter().map(|v| v.unsigned_abs()).max().unwrap() as u128;
            assert_eq!(h, t.psi());
        }
    }
}
