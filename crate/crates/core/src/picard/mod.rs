//! The 27 lines on a diagonal cubic surface, the Galois action on them, and
//! the rank of the Picard group over `Q`.
//!
//! Write `alpha, alpha', alpha''` for the real cube roots of `a2/a1, a3/a1, a4/a1`
//! and `theta` for a primitive cube root of unity. The lines are
//!
//! ```text
//! L_i^(k):  x1 + theta^i alpha   x2 = 0,  x3 + theta^(i+k) beta   x4 = 0,  beta   = alpha''/alpha'
//! M_i^(k):  x1 + theta^i alpha'  x3 = 0,  x4 + theta^(i+k) beta'  x2 = 0,  beta'  = alpha/alpha''
//! N_i^(k):  x1 + theta^i alpha'' x4 = 0,  x2 + theta^(i+k) beta'' x3 = 0,  beta'' = alpha'/alpha
//! ```
//!
//! with `i, k` in `Z/3`; the accent `k` is printed as `'` repeated `k` times.
//! The splitting field is `Q(theta, alpha, alpha', alpha'')`; its Galois group
//! is generated by complex conjugation and the shifts
//! `(alpha, alpha', alpha'') -> (theta^e alpha, theta^e' alpha', theta^e'' alpha'')`
//! for `(e, e', e'')` in a subgroup `H(a)` of `(Z/3)^3` determined by which
//! products of the ratios are rational cubes.
//!
//! Classes are written in the basis `Lambda, E1, ..., E6` of the blown-up plane,
//! with intersection form `diag(1, -1, ..., -1)`.

mod poly;
pub mod segre;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_rational_cube, Rational};
use crate::linalg::QMatrix;
use num_bigint::BigInt;

pub use segre::{
    classify_dp4, classify_pencil, quadric_matrix, segre_symbol, Dp4Classification, SegreError,
    SegreSymbol,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    L,
    M,
    N,
}

/// One of the 27 lines: `family`, accent `k` and index `i`, both in `Z/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineLabel {
    pub family: Family,
    pub accent: u8,
    pub index: u8,
}

impl LineLabel {
    pub fn new(family: Family, accent: u8, index: u8) -> Self {
        LineLabel {
            family,
            accent: accent % 3,
            index: index % 3,
        }
    }

    pub fn all() -> Vec<LineLabel> {
        let mut out = Vec::with_capacity(27);
        for family in [Family::L, Family::M, Family::N] {
            for accent in 0..3 {
                for index in 0..3 {
                    out.push(LineLabel::new(family, accent, index));
                }
            }
        }
        out
    }

    /// Position in [`LineLabel::all`].
    pub fn ordinal(&self) -> usize {
        let f = match self.family {
            Family::L => 0,
            Family::M => 1,
            Family::N => 2,
        };
        9 * f + 3 * self.accent as usize + self.index as usize
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::L => "L",
            Family::M => "M",
            Family::N => "N",
        };
        write!(f, "{fam}{}{}", "'".repeat(self.accent as usize), self.index)
    }
}

impl FromStr for LineLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('L') => Family::L,
            Some('M') => Family::M,
            Some('N') => Family::N,
            _ => return Err(format!("bad line label {s:?}")),
        };
        let rest: String = chars.collect();
        let accent = rest.chars().take_while(|&c| c == '\'').count();
        let digits = &rest[accent..];
        let index: u8 = digits
            .parse()
            .map_err(|_| format!("bad line label {s:?}"))?;
        if accent > 2 || index > 2 {
            return Err(format!("bad line label {s:?}"));
        }
        Ok(LineLabel::new(family, accent as u8, index))
    }
}

/// An element `conj^c . shift(e, e', e'')` of the Galois group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisElement {
    pub shift: [u8; 3],
    pub conj: bool,
}

impl GaloisElement {
    pub const IDENTITY: GaloisElement = GaloisElement {
        shift: [0, 0, 0],
        conj: false,
    };
}

fn m3(x: i32) -> u8 {
    x.rem_euclid(3) as u8
}

/// Image of a line under a Galois element: first the shift, then conjugation.
pub fn line_action(g: &GaloisElement, l: LineLabel) -> LineLabel {
    let [e, e1, e2] = g.shift.map(|v| v as i32);
    let (i, k) = (l.index as i32, l.accent as i32);
    let (i, k) = match l.family {
        Family::L => (i + e, k + e2 - e1 - e),
        Family::M => (i + e1, k + e - e2 - e1),
        Family::N => (i + e2, k + e1 - e - e2),
    };
    let (i, k) = if g.conj { (-i, -k) } else { (i, k) };
    LineLabel::new(l.family, m3(k), m3(i))
}

/// Exponent vectors mod 3 of `a2/a1, a3/a1, a4/a1` at each prime, as columns.
fn cube_class_columns(a: [u64; 4]) -> Vec<[u8; 3]> {
    let mut primes: Vec<u64> = a
        .iter()
        .flat_map(|&x| factor(x).primes().collect::<Vec<_>>())
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|p| {
            let v: Vec<i32> = a.iter().map(|&x| factor(x).exponent_of(p) as i32).collect();
            [m3(v[1] - v[0]), m3(v[2] - v[0]), m3(v[3] - v[0])]
        })
        .collect()
}

fn all_f3_vectors() -> impl Iterator<Item = [u8; 3]> {
    (0..27u8).map(|n| [n % 3, (n / 3) % 3, n / 9])
}

fn dot3(u: [u8; 3], v: [u8; 3]) -> u8 {
    ((u[0] as u32 * v[0] as u32 + u[1] as u32 * v[1] as u32 + u[2] as u32 * v[2] as u32) % 3) as u8
}

/// The subgroup `H(a)` of admissible shifts.
///
/// A relation `m` (the product of the ratios to the powers `m` is a rational
/// cube) forces `m . e = 0`; `H(a)` is the annihilator of all relations, which is
/// the `F_3`-span of the exponent columns.
pub fn shift_subgroup(a: [u64; 4]) -> Vec<[u8; 3]> {
    let cols = cube_class_columns(a);
    let relations: Vec<[u8; 3]> = all_f3_vectors()
        .filter(|&m| cols.iter().all(|&c| dot3(m, c) == 0))
        .collect();
    all_f3_vectors()
        .filter(|&e| relations.iter().all(|&m| dot3(m, e) == 0))
        .collect()
}

/// The Galois group of the splitting field of the 27 lines.
pub fn galois_group(a: [u64; 4]) -> Vec<GaloisElement> {
    let mut out = Vec::new();
    for shift in shift_subgroup(a) {
        for conj in [false, true] {
            out.push(GaloisElement { shift, conj });
        }
    }
    out.sort();
    out
}

pub type PicClass = [i64; 7];

pub const ANTICANONICAL: PicClass = [3, -1, -1, -1, -1, -1, -1];

fn e(i: usize) -> PicClass {
    let mut v = [0; 7];
    v[i] = 1;
    v
}

fn lij(i: usize, j: usize) -> PicClass {
    let mut v = [0; 7];
    v[0] = 1;
    v[i] = -1;
    v[j] = -1;
    v
}

fn q(i: usize) -> PicClass {
    let mut v = [-1; 7];
    v[0] = 2;
    v[i] = 0;
    v
}

/// Class of a line in `Pic` of the blown-up plane.
pub fn class_of(l: LineLabel) -> PicClass {
    use Family::*;
    match (l.family, l.accent, l.index) {
        (L, 0, 0) => e(1),
        (L, 0, 1) => e(2),
        (L, 0, 2) => e(3),
        (M, 0, 1) => e(4),
        (M, 1, 2) => e(5),
        (M, 2, 0) => e(6),
        (L, 1, 1) => q(1),
        (L, 1, 2) => q(2),
        (L, 1, 0) => q(3),
        (M, 0, 0) => q(4),
        (M, 1, 1) => q(5),
        (M, 2, 2) => q(6),
        (L, 2, 1) => lij(1, 2),
        (L, 2, 2) => lij(2, 3),
        (L, 2, 0) => lij(1, 3),
        (M, 2, 1) => lij(4, 5),
        (M, 0, 2) => lij(5, 6),
        (M, 1, 0) => lij(4, 6),
        (N, 0, 0) => lij(1, 4),
        (N, 0, 1) => lij(1, 5),
        (N, 0, 2) => lij(1, 6),
        (N, 1, 1) => lij(2, 4),
        (N, 1, 2) => lij(2, 5),
        (N, 1, 0) => lij(2, 6),
        (N, 2, 2) => lij(3, 4),
        (N, 2, 0) => lij(3, 5),
        (N, 2, 1) => lij(3, 6),
        _ => unreachable!("accent and index are reduced mod 3"),
    }
}

pub fn intersection(u: &PicClass, v: &PicClass) -> i64 {
    u[0] * v[0] - (1..7).map(|i| u[i] * v[i]).sum::<i64>()
}

fn add(u: PicClass, v: PicClass) -> PicClass {
    std::array::from_fn(|i| u[i] + v[i])
}

/// Matrix of a Galois element on `Pic`, columns the images of `Lambda, E1..E6`.
///
/// `E_i` are classes of lines, and `Lambda = [L''1] + [L0] + [L1]` since
/// `L''1` has class `Lambda - E1 - E2`.
pub fn galois_matrix(g: &GaloisElement) -> [[i64; 7]; 7] {
    let image = |l: &str| class_of(line_action(g, l.parse().expect("valid label")));
    let mut cols = [[0i64; 7]; 7];
    cols[0] = add(add(image("L''1"), image("L0")), image("L1"));
    for (k, l) in ["L0", "L1", "L2", "M1", "M'2", "M''0"].iter().enumerate() {
        cols[k + 1] = image(l);
    }
    let mut m = [[0i64; 7]; 7];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..7 {
            m[i][j] = c[i];
        }
    }
    m
}

pub fn apply(m: &[[i64; 7]; 7], v: &PicClass) -> PicClass {
    std::array::from_fn(|i| (0..7).map(|j| m[i][j] * v[j]).sum())
}

/// Rank of the sublattice of `Pic` fixed by the Galois group.
pub fn picard_rank(a: [u64; 4]) -> u32 {
    let group = galois_group(a);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for g in &group {
        let m = galois_matrix(g);
        for (i, row) in m.iter().enumerate() {
            let mut r = row.to_vec();
            r[i] -= 1;
            rows.push(r);
        }
    }
    (7 - QMatrix::from_i64(&rows).rank()) as u32
}

/// The cube criterion: the rank is 1 exactly when no `a_i a_j / (a_k a_l)` with
/// `{i, j, k, l} = {1, 2, 3, 4}` is the cube of a rational number.
pub fn cube_criterion_rank_one(a: [u64; 4]) -> bool {
    let r = |i: usize, j: usize, k: usize, l: usize| {
        Rational::new(
            BigInt::from(a[i]) * BigInt::from(a[j]),
            BigInt::from(a[k]) * BigInt::from(a[l]),
        )
    };
    [r(0, 1, 2, 3), r(0, 2, 1, 3), r(0, 3, 1, 2)]
        .iter()
        .all(|x| !is_rational_cube(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn labels_round_trip() {
        for l in LineLabel::all() {
            assert_eq!(l.to_string().parse::<LineLabel>().unwrap(), l);
        }
        assert_eq!(LineLabel::all().len(), 27);
    }

    #[test]
    fn dictionary_examples() {
        assert_eq!(class_of("L0".parse().unwrap()), [0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(class_of("L''1".parse().unwrap()), [1, -1, -1, 0, 0, 0, 0]);
        assert_eq!(class_of("M0".parse().unwrap()), [2, -1, -1, -1, 0, -1, -1]);
    }

    #[test]
    fn classes_are_exceptional_curves() {
        let mut seen = std::collections::HashSet::new();
        for l in LineLabel::all() {
            let c = class_of(l);
            assert_eq!(intersection(&c, &c), -1);
            assert_eq!(intersection(&c, &ANTICANONICAL), 1);
            assert!(seen.insert(c));
        }
    }

    #[test]
    fn substitution_checks_of_the_action() {
        let shift = GaloisElement {
            shift: [1, 0, 0],
            conj: false,
        };
        for i in 0..3 {
            assert_eq!(
                line_action(&shift, LineLabel::new(Family::L, 0, i)),
                LineLabel::new(Family::L, 2, i + 1)
            );
        }
        let conj = GaloisElement {
            shift: [0, 0, 0],
            conj: true,
        };
        assert_eq!(
            line_action(&conj, "L'1".parse().unwrap()).to_string(),
            "L''2"
        );
        assert_eq!(line_action(&conj, "L0".parse().unwrap()).to_string(), "L0");
    }

    #[test]
    fn fermat_conjugation() {
        let conj = GaloisElement {
            shift: [0, 0, 0],
            conj: true,
        };
        let m = galois_matrix(&conj);
        let col = |j: usize| -> PicClass { std::array::from_fn(|i| m[i][j]) };
        // E4, E5, E6 go to lines through pairs of them, so Lambda goes to the
        // quadratic transform 2 Lambda - E4 - E5 - E6.
        assert_eq!(col(0), [2, 0, 0, 0, -1, -1, -1]);
        assert_eq!(col(1), e(1));
        assert_eq!(col(2), e(3));
        assert_eq!(col(3), e(2));
        assert_eq!(col(4), lij(5, 6));
        assert_eq!(col(5), lij(4, 5));
        assert_eq!(col(6), lij(4, 6));
    }

    #[test]
    fn group_orders() {
        assert_eq!(galois_group([1, 1, 1, 1]).len(), 2);
        assert_eq!(galois_group([1, 1, 1, 2]).len(), 6);
        assert_eq!(galois_group([1, 2, 3, 5]).len(), 54);
        assert_eq!(galois_group([1, 8, 27, 64]).len(), 2);
    }

    #[test]
    fn ranks() {
        assert_eq!(picard_rank([1, 1, 1, 1]), 4);
        assert_eq!(picard_rank([1, 1, 1, 2]), 1);
        assert_eq!(picard_rank([1, 8, 27, 64]), 4);
        for p in [2, 3, 5, 7] {
            assert_eq!(picard_rank([1, 1, 1, p]), 1);
        }
    }

    fn check_action(a: [u64; 4]) -> Result<(), TestCaseError> {
        for g in galois_group(a) {
            let m = galois_matrix(&g);
            for l in LineLabel::all() {
                prop_assert_eq!(apply(&m, &class_of(l)), class_of(line_action(&g, l)));
            }
            prop_assert_eq!(apply(&m, &ANTICANONICAL), ANTICANONICAL);
            for i in 0..7 {
                for j in 0..7 {
                    prop_assert_eq!(
                        intersection(&apply(&m, &e(i)), &apply(&m, &e(j))),
                        intersection(&e(i), &e(j))
                    );
                }
            }
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn action_is_an_isometry(a in prop::array::uniform4(1u64..200)) {
            check_action(a)?;
        }

        #[test]
        fn rank_one_iff_cube_criterion(a in prop::array::uniform4(1u64..60)) {
            prop_assert_eq!(picard_rank(a) == 1, cube_criterion_rank_one(a));
        }

        #[test]
        fn rank_in_range(a in prop::array::uniform4(1u64..500)) {
            let r = picard_rank(a);
            prop_assert!((1..=7).contains(&r));
        }
    }
}
