//! Surfaces, their excluded lines, and counting points of bounded height.
//!
//! The height of a rational point is the max-norm of a primitive integer
//! representative; each projective point is counted once by keeping the
//! representative whose first nonzero coordinate is positive.

mod catalogue;
mod enumerate;
mod form;
mod lines;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalogue::{
    builtin, diagonal_cubic, diagonal_line_loci, A1_TORSOR_SIGNS, BUILTIN_IDS, DP4_TYPES,
};
pub use enumerate::{Budget, System};
pub use form::{big, HomogeneousForm};
pub use lines::{on_any, vanishes, LineLocus};

use crate::arith::{gcd_slice, mobius, sign_normalised};
use enumerate::Split;

/// Default cap on enumeration steps.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("{0} variables is more than the enumerator supports")]
    TooManyVariables(usize),
    #[error("enumeration budget of {limit} steps exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("the lines of {0} are not known, so the open subset cannot be counted")]
    LinesUnknown(String),
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
    #[error("excluded locus {label} has dimension {dim}, not a line")]
    NotALine { label: String, dim: i64 },
    #[error("excluded line {0} does not lie on the surface")]
    LineNotOnSurface(String),
    #[error("Picard rank {rank} is outside [1, {max}]")]
    PicardRankOutOfRange { rank: u32, max: u32 },
}

/// Which points to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subset {
    #[serde(rename = "all")]
    All,
    /// Points off the excluded lines.
    #[serde(rename = "open_U")]
    OpenU,
}

impl std::str::FromStr for Subset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Subset::All),
            "open_U" | "open_u" | "U" => Ok(Subset::OpenU),
            _ => Err(format!("unknown subset {s:?} (expected all or open_U)")),
        }
    }
}

impl std::fmt::Display for Subset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Subset::All => "all",
            Subset::OpenU => "open_U",
        })
    }
}

/// A surface given by forms, with its excluded lines and Picard rank if known.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub id: String,
    pub nvars: usize,
    pub forms: Vec<HomogeneousForm>,
    /// `None` when the lines are not listed; counting `open_U` is then refused.
    pub lines: Option<Vec<LineLocus>>,
    pub picard_rank: Option<u32>,
    /// Degree of the del Pezzo surface.
    pub degree: u32,
}

impl SurfaceSpec {
    pub fn new(
        id: &str,
        nvars: usize,
        forms: Vec<HomogeneousForm>,
        lines: Option<Vec<LineLocus>>,
        picard_rank: Option<u32>,
        degree: u32,
    ) -> Result<Self, SurfaceError> {
        if forms.is_empty() {
            return Err(SurfaceError::ZeroForm);
        }
        if forms.iter().any(|f| f.nvars() != nvars) {
            return Err(SurfaceError::Parse(format!(
                "{id}: forms must all be in {nvars} variables"
            )));
        }
        if let Some(ls) = &lines {
            for l in ls {
                if !l.lies_on(&forms)? {
                    return Err(SurfaceError::LineNotOnSurface(l.label.clone()));
                }
            }
        }
        if let Some(r) = picard_rank {
            let max = 10 - degree;
            if !(1..=max).contains(&r) {
                return Err(SurfaceError::PicardRankOutOfRange { rank: r, max });
            }
        }
        Ok(SurfaceSpec {
            id: id.to_string(),
            nvars,
            forms,
            lines,
            picard_rank,
            degree,
        })
    }

    /// The same surface after `x_i -> s_i x_i`.
    pub fn sign_twisted(&self, id: &str, signs: &[i64]) -> Result<Self, SurfaceError> {
        let forms = self.forms.iter().map(|f| f.sign_twist(signs)).collect();
        let lines = self.lines.as_ref().map(|ls| {
            ls.iter()
                .map(|l| {
                    let fs = l
                        .forms
                        .iter()
                        .map(|v| v.iter().zip(signs).map(|(a, s)| a * s).collect())
                        .collect();
                    LineLocus::new(l.label.clone(), fs)
                })
                .collect()
        });
        SurfaceSpec::new(id, self.nvars, forms, lines, self.picard_rank, self.degree)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        vanishes(&self.forms, x)
    }

    pub fn on_lines(&self, x: &[i64]) -> bool {
        self.lines.as_ref().is_some_and(|ls| on_any(ls, x))
    }

    /// Fold over every nonzero integer solution in `[-bound, bound]^n`.
    pub fn fold_solutions<A, V, M>(
        &self,
        bound: i64,
        budget: &Budget,
        init: impl Fn() -> A + Sync + Send,
        visit: V,
        merge: M,
    ) -> Result<A, SurfaceError>
    where
        A: Send,
        V: Fn(&mut A, &[i64]) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        if let Some(split) = Split::detect(&self.forms).filter(|s| s.fits(bound)) {
            split.fold(bound, budget, init, visit, merge)
        } else {
            System::new(&self.forms)?.fold(bound, budget, init, visit, merge)
        }
    }

    /// Primitive, sign-normalised points of height at most `bound`, sorted.
    pub fn rational_points(
        &self,
        bound: i64,
        subset: Subset,
        budget: &Budget,
    ) -> Result<Vec<Vec<i64>>, SurfaceError> {
        self.check_subset(subset)?;
        let mut pts = self.fold_solutions(
            bound,
            budget,
            Vec::new,
            |acc: &mut Vec<Vec<i64>>, x| {
                if self.keep(x, subset) {
                    acc.push(x.to_vec());
                }
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        pts.sort();
        Ok(pts)
    }

    fn check_subset(&self, subset: Subset) -> Result<(), SurfaceError> {
        if subset == Subset::OpenU && self.lines.is_none() {
            return Err(SurfaceError::LinesUnknown(self.id.clone()));
        }
        Ok(())
    }

    fn keep(&self, x: &[i64], subset: Subset) -> bool {
        sign_normalised(x) && gcd_slice(x) == 1 && (subset == Subset::All || !self.on_lines(x))
    }
}

/// Result of a point count, as written to JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub surface: String,
    #[serde(rename = "B")]
    pub bound: u64,
    pub subset: Subset,
    pub count: u64,
    pub elapsed_ms: u64,
}

/// `N(B)` for the whole surface or for the complement of its lines.
pub fn count_surface(
    spec: &SurfaceSpec,
    bound: u64,
    subset: Subset,
    budget: u64,
) -> Result<CountRecord, SurfaceError> {
    let start = Instant::now();
    spec.check_subset(subset)?;
    let budget = Budget::new(budget);
    let count = spec.fold_solutions(
        bound as i64,
        &budget,
        || 0u64,
        |acc, x| {
            if spec.keep(x, subset) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )?;
    Ok(CountRecord {
        surface: spec.id.clone(),
        bound,
        subset,
        count,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// All nonzero integer solutions in `[-B, B]^n`, primitive or not.
pub fn count_affine(spec: &SurfaceSpec, bound: u64, budget: u64) -> Result<u64, SurfaceError> {
    let budget = Budget::new(budget);
    spec.fold_solutions(bound as i64, &budget, || 0u64, |a, _| *a += 1, |a, b| a + b)
}

/// Recover `N(B)` on the whole surface from affine counts:
/// `N(B) = 1/2 sum_k mu(k) N_aff(B/k)`.
pub fn count_via_mobius(spec: &SurfaceSpec, bound: u64, budget: u64) -> Result<u64, SurfaceError> {
    let mut total: i64 = 0;
    for k in 1..=bound.max(1) {
        let mu = mobius(k) as i64;
        if mu != 0 {
            total += mu * count_affine(spec, bound / k, budget)? as i64;
        }
    }
    Ok((total / 2) as u64)
}

/// `N(B)` for `P^{n-1}` by direct enumeration of primitive vectors with first
/// nonzero coordinate positive.
pub fn count_ambient(n: u32, bound: u64, budget: u64) -> Result<u64, SurfaceError> {
    use rayon::prelude::*;
    if n == 0 {
        return Ok(0);
    }
    let side = 2 * bound as u128 + 1;
    if side.pow(n) > budget as u128 {
        return Err(SurfaceError::BudgetExceeded { limit: budget });
    }
    let b = bound as i64;
    // Points whose first nonzero coordinate is at position `lead`: that
    // coordinate runs over 1..=B, earlier ones are 0, later ones are free.
    let mut total = 0u64;
    for lead in 0..n {
        let free = n - lead - 1;
        total += (1..=b)
            .into_par_iter()
            .map(|x0| count_coprime_tails(x0, free, b))
            .sum::<u64>();
    }
    Ok(total)
}

/// Number of `y in [-b, b]^k` with `gcd(g, y_1, ..., y_k) = 1`.
fn count_coprime_tails(g: i64, k: u32, b: i64) -> u64 {
    if g == 1 {
        return (2 * b as u64 + 1).pow(k);
    }
    if k == 0 {
        return 0;
    }
    (-b..=b)
        .map(|y| count_coprime_tails(num_integer::gcd(g, y), k - 1, b))
        .sum()
}

/// Leading constant of `N_{P^{n-1}}(B) ~ 2^{n-1} / zeta(n) B^n`.
pub fn ambient_leading_constant(n: u32) -> f64 {
    let zeta: f64 = (1..200_000u64)
        .map(|k| (k as f64).powi(-(n as i32)))
        .sum::<f64>()
        + (200_000f64).powi(1 - n as i32) / (n as f64 - 1.0);
    2f64.powi(n as i32 - 1) / zeta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primitive_count_box;

    #[test]
    fn ambient_small_values() {
        assert_eq!(count_ambient(2, 1, DEFAULT_BUDGET).unwrap(), 4);
        assert_eq!(count_ambient(2, 2, DEFAULT_BUDGET).unwrap(), 8);
        assert_eq!(count_ambient(3, 1, DEFAULT_BUDGET).unwrap(), 13);
        for n in 1..4 {
            for b in 0..8 {
                assert_eq!(
                    count_ambient(n, b, DEFAULT_BUDGET).unwrap(),
                    primitive_count_box(n, b) / 2
                );
            }
        }
    }

    #[test]
    fn ambient_budget() {
        assert!(count_ambient(4, 100, 1000).is_err());
    }

    #[test]
    fn open_subset_needs_lines() {
        let s = builtin("cayley_cubic").unwrap();
        assert_eq!(
            count_surface(&s, 5, Subset::OpenU, DEFAULT_BUDGET),
            Err(SurfaceError::LinesUnknown("cayley_cubic".into()))
        );
        assert!(count_surface(&s, 5, Subset::All, DEFAULT_BUDGET).is_ok());
    }

    #[test]
    fn fermat_small_height() {
        let s = builtin("fermat_cubic").unwrap();
        let pts = s
            .rational_points(10, Subset::OpenU, &Budget::new(DEFAULT_BUDGET))
            .unwrap();
        // Up to order and sign the points of height at most 10 off the lines
        // come from 3^3 + 4^3 + 5^3 = 6^3 and 1^3 + 6^3 + 8^3 = 9^3.
        assert!(pts.contains(&vec![3, 4, 5, -6]));
        assert!(pts.contains(&vec![1, 6, 8, -9]));
        assert_eq!(pts.len(), 48);
    }

    #[test]
    fn mobius_identity_on_surfaces() {
        for id in ["cubic_d4", "dp3_d4", "cubic_e6", "dp4_xv", "fermat_cubic"] {
            let s = builtin(id).unwrap();
            for b in [1u64, 4, 9] {
                let direct = count_surface(&s, b, Subset::All, DEFAULT_BUDGET)
                    .unwrap()
                    .count;
                assert_eq!(
                    count_via_mobius(&s, b, DEFAULT_BUDGET).unwrap(),
                    direct,
                    "{id} {b}"
                );
            }
        }
    }

    #[test]
    fn subset_parsing() {
        assert_eq!("open_U".parse::<Subset>().unwrap(), Subset::OpenU);
        assert!("nope".parse::<Subset>().is_err());
        assert_eq!(serde_json::to_string(&Subset::OpenU).unwrap(), "\"open_U\"");
    }
}
