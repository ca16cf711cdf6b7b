use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{invariant, narrow, TorsorError};
use crate::arith::{gcd, is_square, mobius};

/// A point on the torsor `s1 u1 y1^2 + s2 u2 y2^2 + s3 u3 y3^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsorPointD4 {
    pub v: u64,
    pub s: [u64; 3],
    pub u: [i64; 3],
    pub y: [u64; 3],
}

impl TorsorPointD4 {
    pub fn validate(&self) -> Result<(), TorsorError> {
        let [s1, s2, s3] = self.s.map(|v| v as i64);
        let [u1, u2, u3] = self.u;
        let [y1, y2, y3] = self.y.map(|v| v as i64);
        invariant(
            self.v >= 1 && s1 >= 1 && s2 >= 1 && s3 >= 1 && u3 >= 1,
            || "v, s_i, u3 must be positive".into(),
        )?;
        invariant(y1 >= 1 && y2 >= 1 && y3 >= 1, || {
            "y_i must be positive".into()
        })?;
        let uprod = (u1 as i128 * u2 as i128 * u3 as i128).unsigned_abs();
        invariant(
            uprod != 0 && u64::try_from(uprod).is_ok_and(|p| mobius(p) != 0),
            || "u1 u2 u3 is not squarefree".into(),
        )?;
        let sprod = s1 * s2 * s3;
        invariant(
            gcd(sprod, u1 * u2 * u3) == 1 && gcd(sprod, self.v as i64) == 1,
            || "s1 s2 s3 shares a factor with u1 u2 u3 v".into(),
        )?;
        invariant(
            gcd(y1, y2) == 1 && gcd(y1, y3) == 1 && gcd(y2, y3) == 1,
            || "y_i not pairwise coprime".into(),
        )?;
        invariant(
            gcd(y1, gcd(s2, s3)) == 1 && gcd(y2, gcd(s1, s3)) == 1 && gcd(y3, gcd(s1, s2)) == 1,
            || "some y_i shares a factor with both s_j and s_k".into(),
        )?;
        let lhs = [0, 1, 2]
            .iter()
            .map(|&i| self.s[i] as i128 * self.u[i] as i128 * (self.y[i] as i128).pow(2))
            .sum::<i128>();
        invariant(lhs == 0, || {
            "s1 u1 y1^2 + s2 u2 y2^2 + s3 u3 y3^2 != 0".into()
        })
    }

    /// The height function `Psi`; equal to the height of the image point.
    pub fn psi(&self) -> u128 {
        let [s1, s2, s3] = self.s.map(|v| v as u128);
        let [u1, u2, u3] = self.u.map(|v| v.unsigned_abs() as u128);
        let [y1, y2, y3] = self.y.map(|v| v as u128);
        let v = self.v as u128;
        let uu = u1 * u2 * u3;
        (s1 * s2 * s3)
            .max(uu * uu * v * v * v * y1 * y2 * y3)
            .max(s1 * u1 * u1 * u2 * u3 * v * v * y1 * y1)
            .max(s2 * u1 * u2 * u2 * u3 * v * v * y2 * y2)
    }
}

pub fn d4_map(t: &TorsorPointD4) -> Result<[i64; 4], TorsorError> {
    t.validate()?;
    let [s1, s2, s3] = t.s.map(|v| v as i128);
    let [u1, u2, u3] = t.u.map(|v| v as i128);
    let [y1, y2, y3] = t.y.map(|v| v as i128);
    let v = t.v as i128;
    narrow([
        -s1 * u1 * u1 * u2 * u3 * v * v * y1 * y1,
        -s2 * u1 * u2 * u2 * u3 * v * v * y2 * y2,
        u1 * u1 * u2 * u2 * u3 * u3 * v * v * v * y1 * y2 * y3,
        s1 * s2 * s3,
    ])
}

/// Outer parameters `(s1, s2, s3)` with `s1 s2 s3 <= B`.
fn outer(bound: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for s1 in 1..=bound {
        for s2 in 1..=bound / s1 {
            for s3 in 1..=bound / (s1 * s2) {
                out.push([s1, s2, s3]);
            }
        }
    }
    out
}

pub fn d4_fold<A, V, M>(bound: u64, init: impl Fn() -> A + Sync + Send, visit: V, merge: M) -> A
where
    A: Send,
    V: Fn(&mut A, &TorsorPointD4) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let b = bound as u128;
    outer(bound)
        .into_par_iter()
        .map(|s| {
            let mut acc = init();
            let [s1, s2, s3] = s.map(|x| x as u128);
            let sprod = (s1 * s2 * s3) as i64;
            let mut v = 1u128;
            while v * v * v <= b {
                let mut u3 = 1u128;
                while u3 * u3 * v * v * v <= b {
                    let mut a1 = 1u128;
                    while a1 * a1 * u3 * u3 * v * v * v <= b && s1 * a1 * a1 * u3 * v * v <= b {
                        let mut a2 = 1u128;
                        while (a1 * a2 * u3).pow(2) * v * v * v <= b
                            && s1 * a1 * a1 * a2 * u3 * v * v <= b
                            && s2 * a1 * a2 * a2 * u3 * v * v <= b
                        {
                            let up = (a1 * a2 * u3) as u64;
                            if mobius(up) != 0
                                && gcd(sprod, up as i64) == 1
                                && gcd(sprod, v as i64) == 1
                            {
                                // u1 and u2 cannot both be positive.
                                for (u1, u2) in [
                                    (a1 as i64, -(a2 as i64)),
                                    (-(a1 as i64), a2 as i64),
                                    (-(a1 as i64), -(a2 as i64)),
                                ] {
                                    inner(
                                        bound,
                                        s,
                                        [u1, u2, u3 as i64],
                                        v as u64,
                                        &mut acc,
                                        &visit,
                                    );
                                }
                            }
                            a2 += 1;
                        }
                        a1 += 1;
                    }
                    u3 += 1;
                }
                v += 1;
            }
            acc
        })
        .reduce_with(&merge)
        .unwrap_or_else(init)
}

fn inner<A>(
    bound: u64,
    s: [u64; 3],
    u: [i64; 3],
    v: u64,
    acc: &mut A,
    visit: &impl Fn(&mut A, &TorsorPointD4),
) {
    let b = bound as u128;
    let [s1, s2, s3] = s.map(|x| x as i128);
    let [u1, u2, u3] = u.map(|x| x as i128);
    let (a1, a2) = (u1.unsigned_abs(), u2.unsigned_abs());
    let vv = v as u128;
    let c1 = s1 as u128 * a1 * a1 * a2 * u3 as u128 * vv * vv;
    let c2 = s2 as u128 * a1 * a2 * a2 * u3 as u128 * vv * vv;
    let c3 = (a1 * a2 * u3 as u128).pow(2) * vv * vv * vv;
    let mut y1 = 1u128;
    while c1 * y1 * y1 <= b && c3 * y1 <= b {
        let mut y2 = 1u128;
        while c2 * y2 * y2 <= b && c3 * y1 * y2 <= b {
            let num = -(s1 * u1 * (y1 * y1) as i128 + s2 * u2 * (y2 * y2) as i128);
            let den = s3 * u3;
            if num > 0 && num % den == 0 {
                if let Some(y3) = is_square(num / den) {
                    let t = TorsorPointD4 {
                        v,
                        s,
                        u,
                        y: [y1 as u64, y2 as u64, y3 as u64],
                    };
                    if c3 * y1 * y2 * y3 as u128 <= b && t.validate().is_ok() {
                        visit(acc, &t);
                    }
                }
            }
            y2 += 1;
        }
        y1 += 1;
    }
}

pub fn d4_count(bound: u64) -> u64 {
    d4_fold(bound, || 0u64, |n, _| *n += 1, |a, b| a + b)
}

pub fn d4_points(bound: u64) -> Vec<TorsorPointD4> {
    let mut pts = d4_fold(
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

    #[test]
    fn example_point() {
        let t = TorsorPointD4 {
            v: 1,
            s: [1, 1, 1],
            u: [1, -1, 1],
            y: [3, 5, 4],
        };
        let x = d4_map(&t).unwrap();
        assert_eq!(x, [9, -25, 60, 1]);
        assert_eq!(
            x[0] as i128 * x[1] as i128 * (x[0] + x[1]) as i128,
            (x[2] as i128).pow(2) * x[3] as i128
        );
        assert_eq!(t.psi(), 60);
    }

    #[test]
    fn rejects_bad_input() {
        let square_u = TorsorPointD4 {
            v: 1,
            s: [1, 1, 1],
            u: [2, -2, 1],
            y: [1, 1, 1],
        };
        assert!(d4_map(&square_u).is_err());
        let shared_y = TorsorPointD4 {
            v: 1,
            s: [1, 1, 1],
            u: [1, -1, 1],
            y: [2, 2, 1],
        };
        assert!(d4_map(&shared_y).is_err());
    }

    #[test]
    fn empty_for_zero_bound() {
        assert_eq!(d4_count(0), 0);
    }
}
