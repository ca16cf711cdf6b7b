//! Universal torsors for two split surfaces, as explicit monomial maps.
//!
//! * The degree six surface with an `A1` singularity: tuples
//!   `(s0, s1, s2, s3, y1, y2, y3)` on `s1 y1 - s2 y2 + s3 y3 = 0`.
//! * The cubic surface with a `D4` singularity, `t1 t2 (t1 + t2) = t3^2 t4`:
//!   tuples `(v, s, u, y)` on `s1 u1 y1^2 + s2 u2 y2^2 + s3 u3 y3^2 = 0`.
//!
//! In both cases the map is checked against direct enumeration on the
//! surface, and the torsor side doubles as a much faster counter.

mod a1;
mod d4;

use serde::Serialize;
use thiserror::Error;

pub use a1::{a1_count, a1_fold, a1_map, a1_points, TorsorPointA1};
pub use d4::{d4_count, d4_fold, d4_map, d4_points, TorsorPointD4};

use crate::arith::gcd_slice;
use crate::surfaces::{builtin, Budget, Subset, SurfaceError, DEFAULT_BUDGET};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorsorError {
    #[error("torsor invariant violated: {0}")]
    Invariant(String),
    #[error("coordinates overflow 64 bits")]
    Overflow,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn invariant(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TorsorError> {
    if cond {
        Ok(())
    } else {
        Err(TorsorError::Invariant(msg()))
    }
}

fn narrow<const N: usize>(x: [i128; N]) -> Result<[i64; N], TorsorError> {
    let mut out = [0i64; N];
    for (o, v) in out.iter_mut().zip(x) {
        *o = i64::try_from(v).map_err(|_| TorsorError::Overflow)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TorsorKind {
    A1,
    D4,
}

impl TorsorKind {
    /// Surface whose points the torsor parametrises.
    pub fn surface_id(&self) -> &'static str {
        match self {
            TorsorKind::A1 => "dp6_a1_torsor",
            TorsorKind::D4 => "dp3_d4",
        }
    }

    pub fn count(&self, bound: u64) -> u64 {
        match self {
            TorsorKind::A1 => a1_count(bound),
            TorsorKind::D4 => d4_count(bound),
        }
    }
}

/// Direct enumeration against the image of the torsor map.
#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub surface: TorsorKind,
    #[serde(rename = "B")]
    pub bound: u64,
    pub matched: usize,
    /// Direct points not in the image.
    pub missing: Vec<Vec<i64>>,
    /// Image points not found directly.
    pub extra: Vec<Vec<i64>>,
    /// Every image point lies on the surface and is primitive.
    pub image_on_surface: bool,
    /// Image points hit more than once.
    pub duplicates: usize,
}

impl BijectionReport {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.duplicates == 0
            && self.image_on_surface
    }

    /// Every discrepancy has a vanishing coordinate among the first six.
    pub fn differences_on_boundary(&self) -> bool {
        self.missing
            .iter()
            .chain(&self.extra)
            .all(|x| x.iter().take(6).any(|&v| v == 0))
    }
}

/// The direct side: which representative of each point of `U` the torsor hits.
///
/// For `A1` the map lands in `x2, x3, x4, x6 > 0`; the involution negating
/// `x3, x5, x7` preserves the surface and its lines and swaps the sign of `x3`,
/// so the direct set is taken with `x2 > 0` and `x3 >= 0`.
/// For `D4` the map lands in `t3, t4 >= 1`, and `t3 -> -t3` plays the same role.
fn direct_side(kind: TorsorKind, bound: u64) -> Result<Vec<Vec<i64>>, TorsorError> {
    let spec = builtin(kind.surface_id())?;
    let pts = spec.rational_points(bound as i64, Subset::OpenU, &Budget::new(DEFAULT_BUDGET))?;
    let (sign_at, keep_at) = match kind {
        TorsorKind::A1 => (1, 2),
        TorsorKind::D4 => (3, 2),
    };
    let mut out: Vec<Vec<i64>> = pts
        .into_iter()
        .map(|mut x| {
            if x[sign_at] < 0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
            x
        })
        .filter(|x| match kind {
            TorsorKind::A1 => x[keep_at] >= 0,
            TorsorKind::D4 => x[keep_at] > 0,
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn verify_bijection(kind: TorsorKind, bound: u64) -> Result<BijectionReport, TorsorError> {
    let spec = builtin(kind.surface_id())?;
    let mut image: Vec<Vec<i64>> = match kind {
        TorsorKind::A1 => a1_points(bound)
            .iter()
            .map(|t| a1_map(t).map(|x| x.to_vec()))
            .collect::<Result<_, _>>()?,
        TorsorKind::D4 => d4_points(bound)
            .iter()
            .map(|t| d4_map(t).map(|x| x.to_vec()))
            .collect::<Result<_, _>>()?,
    };
    let image_on_surface = image.iter().all(|x| spec.contains(x) && gcd_slice(x) == 1);
    image.sort();
    let before = image.len();
    image.dedup();
    let duplicates = before - image.len();
    let direct = direct_side(kind, bound)?;

    let (mut missing, mut extra, mut matched) = (Vec::new(), Vec::new(), 0);
    let (mut i, mut j) = (0, 0);
    while i < direct.len() || j < image.len() {
        match (direct.get(i), image.get(j)) {
            (Some(a), Some(b)) if a == b => {
                matched += 1;
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                missing.push(a.clone());
                i += 1;
            }
            (Some(_), Some(b)) => {
                extra.push(b.clone());
                j += 1;
            }
            (Some(a), None) => {
                missing.push(a.clone());
                i += 1;
            }
            (None, Some(b)) => {
                extra.push(b.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(BijectionReport {
        surface: kind,
        bound,
        matched,
        missing,
        extra,
        image_on_surface,
        duplicates,
    })
}
