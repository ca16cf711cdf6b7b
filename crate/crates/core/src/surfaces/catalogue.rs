//! Built-in surfaces.
//!
//! Every entry is checked on construction: forms are homogeneous, every listed
//! line lies on the surface, and the declared Picard rank is in range.

use super::form::HomogeneousForm;
use super::lines::LineLocus;
use super::{SurfaceError, SurfaceSpec};
use crate::arith::{is_rational_cube, rat};
use num_traits::Signed;

/// Ids accepted by [`builtin`]. `diag_cubic:a1,a2,a3,a4` is accepted as well.
pub const BUILTIN_IDS: &[&str] = &[
    "fermat_cubic",
    "cubic_d4",
    "dp3_d4",
    "cubic_d4_alt",
    "cubic_e6",
    "cayley_cubic",
    "dp6_a1",
    "dp6_a1_torsor",
    "dp6_a2",
    "dp4_i",
    "dp4_ii",
    "dp4_iii",
    "dp4_iv",
    "dp4_v",
    "dp4_vi",
    "dp4_vii",
    "dp4_viii",
    "dp4_ix",
    "dp4_x",
    "dp4_xi",
    "dp4_xii",
    "dp4_xiii",
    "dp4_xiv",
    "dp4_xv",
    "dp4_pencil_a1",
    "dp4_d4_nonsplit",
];

/// The fifteen split singular quartic del Pezzo surfaces, one representative
/// pair of quadrics per type, with the expected Segre symbol, number of lines
/// and singularity type.
pub const DP4_TYPES: [(&str, &str, &str, &str, u32, &str); 15] = [
    (
        "i",
        "x1x2 - x3x4",
        "x1x4 - x2x3 + x3x5 + x4x5",
        "(2,1,1,1)",
        12,
        "A1",
    ),
    (
        "ii",
        "x1x2 - x3x4",
        "x1x4 - x2x3 + x3x5 + x5^2",
        "(2,2,1)",
        9,
        "2A1",
    ),
    (
        "iii",
        "x1x2 - x3^2",
        "x1x3 - x2x3 + x4x5",
        "((1,1),1,1,1)",
        8,
        "2A1",
    ),
    (
        "iv",
        "x1x2 - x3x4",
        "(x1+x2+x3+x4)x5 - x3x4",
        "(3,1,1)",
        8,
        "A2",
    ),
    (
        "v",
        "x1x2 - x3^2",
        "x2x3 + x3^2 + x4x5",
        "((1,1),2,1)",
        6,
        "3A1",
    ),
    (
        "vi",
        "x1x2 - x3x4",
        "x1x5 + x2x3 + x4x5",
        "(3,2)",
        6,
        "A1+A2",
    ),
    ("vii", "x1x2 - x3x4", "x1x4 + x2x4 + x3x5", "(4,1)", 5, "A3"),
    (
        "viii",
        "x1x4 - (x2-x3)x5",
        "(x1+x4)(x2+x3) + x2x3",
        "((2,1),1,1)",
        4,
        "A3",
    ),
    (
        "ix",
        "x1x2 - x3^2",
        "x3^2 - x4x5",
        "((1,1),(1,1),1)",
        4,
        "4A1",
    ),
    ("x", "x1x2 - x3^2", "x2x3 - x4x5", "((1,1),3)", 4, "2A1+A2"),
    (
        "xi",
        "x1x4 - x3x5",
        "x1x2 + x2x4 + x3^2",
        "((2,1),2)",
        3,
        "A1+A3",
    ),
    ("xii", "x1x2 - x3x4", "x1x5 + x2x3 + x4^2", "(5)", 3, "A4"),
    (
        "xiii",
        "x1x4 - x2x5",
        "x1x2 + x2x4 + x3^2",
        "((3,1),1)",
        2,
        "D4",
    ),
    (
        "xiv",
        "x1x2 - x3^2",
        "x1^2 - x4x5",
        "((2,1),(1,1))",
        2,
        "2A1+A3",
    ),
    (
        "xv",
        "x1x2 - x3^2",
        "x1x5 + x2x3 + x4^2",
        "((4,1))",
        1,
        "D5",
    ),
];

const DP6_A1: [&str; 9] = [
    "x1^2 - x2x4",
    "x1x5 - x3x4",
    "x1x3 - x2x5",
    "x1x6 - x3x5",
    "x2x6 - x3^2",
    "x4x6 - x5^2",
    "x1^2 + x1x4 + x5x7",
    "x1x2 + x1^2 + x3x7",
    "x1x3 + x1x5 + x6x7",
];

const DP6_A2: [&str; 9] = [
    "x1x6 - x4x5",
    "x1x7 - x2x5",
    "x1x7 - x3x4",
    "x3x7 + x4x5 + x5^2",
    "x5x7 - x3x4",
    "x2x7 + x4^2 + x4x5",
    "x4x7 - x2x6",
    "x4x6 + x5x6 + x7^2",
    "x2x3 - x1x4 + x1x5",
];

/// Sign change taking the A1 sextic system to the coordinates used by its torsor.
pub const A1_TORSOR_SIGNS: [i64; 7] = [-1, 1, -1, 1, 1, 1, 1];

fn forms(nvars: usize, srcs: &[&str]) -> Result<Vec<HomogeneousForm>, SurfaceError> {
    srcs.iter()
        .map(|s| HomogeneousForm::parse(nvars, s))
        .collect()
}

fn lines(nvars: usize, spec: &[(&str, &[&str])]) -> Result<Vec<LineLocus>, SurfaceError> {
    spec.iter()
        .map(|(label, fs)| LineLocus::parse(label, nvars, fs))
        .collect()
}

/// Look up a built-in surface by id.
pub fn builtin(id: &str) -> Result<SurfaceSpec, SurfaceError> {
    if let Some(rest) = id.strip_prefix("diag_cubic:") {
        let a: Vec<u64> = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| SurfaceError::UnknownSurface(id.to_string()))?;
        let a: [u64; 4] = a
            .try_into()
            .map_err(|_| SurfaceError::UnknownSurface(id.to_string()))?;
        return diagonal_cubic(a);
    }
    if let Some(t) = id.strip_prefix("dp4_") {
        if let Some(row) = DP4_TYPES.iter().find(|r| r.0 == t) {
            return SurfaceSpec::new(id, 5, forms(5, &[row.1, row.2])?, None, Some(6), 4);
        }
    }
    let spec = match id {
        "fermat_cubic" => return diagonal_cubic([1, 1, 1, 1]),
        "cubic_d4" => SurfaceSpec::new(
            id,
            4,
            forms(4, &["x1x2(x1+x2) + x4(x1+x2+x3)^2"])?,
            Some(lines(
                4,
                &[
                    ("x1=x4=0", &["x1", "x4"]),
                    ("x2=x4=0", &["x2", "x4"]),
                    ("x1+x2=x3=0", &["x1+x2", "x3"]),
                    ("x1+x2=x4=0", &["x1+x2", "x4"]),
                    ("x1=x1+x2+x3=0", &["x1", "x1+x2+x3"]),
                    ("x2=x1+x2+x3=0", &["x2", "x1+x2+x3"]),
                ],
            )?),
            Some(7),
            3,
        )?,
        "dp3_d4" => SurfaceSpec::new(
            id,
            4,
            forms(4, &["x1x2(x1+x2) - x3^2x4"])?,
            Some(lines(
                4,
                &[
                    ("t1=t3=0", &["x1", "x3"]),
                    ("t1=t4=0", &["x1", "x4"]),
                    ("t2=t3=0", &["x2", "x3"]),
                    ("t2=t4=0", &["x2", "x4"]),
                    ("t3=t1+t2=0", &["x3", "x1+x2"]),
                    ("t4=t1+t2=0", &["x4", "x1+x2"]),
                ],
            )?),
            Some(7),
            3,
        )?,
        "cubic_d4_alt" => SurfaceSpec::new(
            id,
            4,
            forms(4, &["x1x2x3 + x4(x1+x2+x3)^2"])?,
            None,
            Some(7),
            3,
        )?,
        "cubic_e6" => SurfaceSpec::new(
            id,
            4,
            forms(4, &["x1^2x3 + x2x3^2 + x4^3"])?,
            Some(lines(4, &[("x3=x4=0", &["x3", "x4"])])?),
            Some(7),
            3,
        )?,
        "cayley_cubic" => SurfaceSpec::new(
            id,
            4,
            forms(4, &["x1x2x3 + x1x2x4 + x1x3x4 + x2x3x4"])?,
            None,
            Some(7),
            3,
        )?,
        "dp6_a1" => SurfaceSpec::new(
            id,
            7,
            forms(7, &DP6_A1)?,
            Some(lines(
                7,
                &[
                    ("x1=x2=x3=x5=x6=0", &["x1", "x2", "x3", "x5", "x6"]),
                    ("x1=x3=x4=x5=x6=0", &["x1", "x3", "x4", "x5", "x6"]),
                    (
                        "x3=x5=x6=x1+x4=x1+x2=0",
                        &["x3", "x5", "x6", "x1+x4", "x1+x2"],
                    ),
                ],
            )?),
            Some(4),
            6,
        )?,
        "dp6_a1_torsor" => {
            let base = builtin("dp6_a1")?;
            base.sign_twisted(id, &A1_TORSOR_SIGNS)?
        }
        "dp6_a2" => SurfaceSpec::new(id, 7, forms(7, &DP6_A2)?, None, None, 6)?,
        "dp4_pencil_a1" => SurfaceSpec::new(
            id,
            5,
            forms(5, &["x1x2 + x3x4", "x1x4 + x2x3 + x3x5 + x4x5"])?,
            None,
            None,
            4,
        )?,
        "dp4_d4_nonsplit" => SurfaceSpec::new(
            id,
            5,
            forms(5, &["x1x2 - x3^2", "x1^2 + x2x5 + x4^2"])?,
            None,
            Some(4),
            4,
        )?,
        _ => return Err(SurfaceError::UnknownSurface(id.to_string())),
    };
    Ok(spec)
}

/// `a1 x1^3 + a2 x2^3 + a3 x3^3 + a4 x4^3` with the rational loci of its 27 lines.
pub fn diagonal_cubic(a: [u64; 4]) -> Result<SurfaceSpec, SurfaceError> {
    if a.contains(&0) {
        return Err(SurfaceError::UnknownSurface(format!("diag_cubic:{a:?}")));
    }
    let id = if a == [1, 1, 1, 1] {
        "fermat_cubic".to_string()
    } else {
        format!("diag_cubic:{},{},{},{}", a[0], a[1], a[2], a[3])
    };
    let src = format!("{}x1^3 + {}x2^3 + {}x3^3 + {}x4^3", a[0], a[1], a[2], a[3]);
    let rank = crate::picard::picard_rank(a);
    SurfaceSpec::new(
        &id,
        4,
        forms(4, &[&src])?,
        Some(diagonal_line_loci(a)),
        Some(rank),
        3,
    )
}

/// The rational points of the line `x_p + theta^k c x_q = 0`, `c^3 = num/den`,
/// as integer linear forms.
fn rational_part(p: usize, q: usize, num: u64, den: u64, k: u8) -> Vec<Vec<i64>> {
    let r = rat(num as i64, den as i64);
    let unit = |i: usize| {
        let mut v = vec![0i64; 4];
        v[i] = 1;
        v
    };
    if k % 3 == 0 && is_rational_cube(&r) {
        let cn = r.numer().abs().cbrt();
        let cd = r.denom().abs().cbrt();
        let mut v = vec![0i64; 4];
        v[p] = i64::try_from(cd).expect("small cube root");
        v[q] = i64::try_from(cn).expect("small cube root");
        vec![v]
    } else {
        vec![unit(p), unit(q)]
    }
}

/// Rational loci of the 27 lines on a diagonal cubic surface.
pub fn diagonal_line_loci(a: [u64; 4]) -> Vec<LineLocus> {
    use crate::picard::{Family, LineLabel};
    let mut out = Vec::new();
    for label in LineLabel::all() {
        let (i, acc) = (label.index, label.accent);
        let j = (i + acc) % 3;
        // (p, q, numerator/denominator of the cube) for the two equations.
        let (e1, e2) = match label.family {
            Family::L => ((0, 1, a[1], a[0]), (2, 3, a[3], a[2])),
            Family::M => ((0, 2, a[2], a[0]), (3, 1, a[1], a[3])),
            Family::N => ((0, 3, a[3], a[0]), (1, 2, a[2], a[1])),
        };
        let mut fs = rational_part(e1.0, e1.1, e1.2, e1.3, i);
        fs.extend(rational_part(e2.0, e2.1, e2.2, e2.3, j));
        out.push(LineLocus::new(label.to_string(), fs));
    }
    out
}
