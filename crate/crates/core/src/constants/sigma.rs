//! Real densities: the singular integrals for the split A1 sextic and for
//! the Fermat cubic, each by two unrelated methods.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ConstError;
use crate::quad::Quad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    AdaptiveQuadrature,
    QuasiMonteCarlo,
    MonteCarlo,
}

/// One evaluation of a region integral.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegionIntegral {
    pub dimension: usize,
    pub method: Method,
    pub tolerance: f64,
    pub value: f64,
    /// Quadrature error estimate, or one standard error for sampling.
    pub error: f64,
}

/// Both evaluations of a singular integral and the value reported.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SigmaInfty {
    pub value: f64,
    pub primary: RegionIntegral,
    pub check: RegionIntegral,
}

impl SigmaInfty {
    pub fn discrepancy(&self) -> f64 {
        (self.primary.value - self.check.value).abs()
    }
}

fn check_tol(tol: f64) -> Result<(), ConstError> {
    if (1e-6..=1e-2).contains(&tol) {
        Ok(())
    } else {
        Err(ConstError::Tolerance(tol))
    }
}

/// Measure of `{t in [lo, hi] : |a t^2 + b t| <= 1}`, `a != 0`.
fn band_measure(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let (a, b) = if a < 0.0 { (-a, -b) } else { (a, b) };
    let overlap = |x: f64, y: f64| (y.min(hi) - x.max(lo)).max(0.0);
    // a t^2 + b t - 1 <= 0 between its two real roots.
    let (r1, r2) = roots(a, b, -1.0).expect("positive discriminant");
    let mut m = overlap(r1, r2);
    // a t^2 + b t + 1 < 0 strictly between its roots, if real.
    if let Some((q1, q2)) = roots(a, b, 1.0) {
        m -= overlap(q1, q2);
    }
    m.max(0.0)
}

/// Real roots of `a t^2 + b t + c`, `a > 0`, in increasing order.
fn roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    let (x, y) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    Some((x.min(y), x.max(y)))
}

/// Membership of `(u, t, v)` in the region whose volume gives the A1 density:
/// `0 < u <= 1`, `t > 0`, `u t^2 <= 1`, `u v^2 <= 1`, `|t v (t - v)| <= 1`.
/// Without `u <= 1` the volume is infinite (`F2(u) = 2/u` once `u^{3/2} >= 2`).
pub fn in_a1_region(u: f64, t: f64, v: f64) -> bool {
    u > 0.0
        && u <= 1.0
        && t > 0.0
        && u * t * t <= 1.0
        && u * v * v <= 1.0
        && (t * v * (t - v)).abs() <= 1.0
}

/// `F1(u, v)`: the length of `{t >= 0 : u t^2 <= 1, |t v (t - v)| <= 1}`.
pub fn f1(u: f64, v: f64) -> f64 {
    assert!(u > 0.0, "F1 needs u > 0");
    let top = u.powf(-0.5);
    if v == 0.0 {
        return top;
    }
    band_measure(v, -v * v, 0.0, top)
}

/// Area of `{tau in (0,1], nu in [-1,1] : |tau nu (tau - nu)| <= c}`.
fn scaled_area(c: f64, quad: &Quad) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let inner = |tau: f64| {
        if tau <= 0.0 {
            return 0.0;
        }
        band_measure(-tau / c, tau * tau / c, -1.0, 1.0)
    };
    // Kinks of the inner measure: the band closes up at 4c = tau^3, and the
    // outer roots leave [-1, 1] where tau(1 - tau) = c or tau(1 + tau) = c.
    let mut cuts = vec![
        0.0,
        1.0,
        (4.0 * c).cbrt(),
        0.5 * ((1.0 + 4.0 * c).sqrt() - 1.0),
    ];
    if c <= 0.25 {
        let s = (1.0 - 4.0 * c).sqrt();
        cuts.extend([0.5 * (1.0 - s), 0.5 * (1.0 + s)]);
    }
    cuts.retain(|x| (0.0..=1.0).contains(x));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| quad.integrate(inner, w[0], w[1]).value)
        .sum()
}

/// `F2(u) = int F1(u, v) dv` over `u v^2 <= 1`.
///
/// With `t = tau u^{-1/2}` and `v = nu u^{-1/2}` this is `u^{-1}` times the
/// area of `|tau nu (tau - nu)| <= u^{3/2}` in `(0,1] x [-1,1]`.
pub fn f2(u: f64) -> f64 {
    assert!(u > 0.0, "F2 needs u > 0");
    scaled_area(u.powf(1.5), &Quad::tol(1e-14, 1e-12)) / u
}

/// Upper end of the `w = -log u` range. The area above is `O(c^{2/3})`, so
/// the integrand decays like `e^{-w}` and the cut-off costs `O(e^{-W})`.
const A1_W_MAX: f64 = 45.0;

fn sigma_a1_quadrature(tol: f64) -> RegionIntegral {
    let inner = Quad::tol(tol * 1e-4, 1e-12);
    let outer = Quad::tol(tol * 1e-2, tol * 1e-2);
    let g = |w: f64| scaled_area((-1.5 * w).exp(), &inner);
    // c = 1/4 at w = log(4)/1.5, where the band first closes.
    let knee = 4f64.ln() / 1.5;
    let a = outer.integrate(g, 0.0, knee);
    let b = outer.integrate(g, knee, A1_W_MAX);
    RegionIntegral {
        dimension: 3,
        method: Method::AdaptiveQuadrature,
        tolerance: tol,
        value: 6.0 * (a.value + b.value),
        error: 6.0 * (a.error + b.error + (-A1_W_MAX).exp()),
    }
}

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let (mut x, mut f) = (0.0, 1.0 / b as f64);
    while i > 0 {
        x += (i % b) as f64 * f;
        i /= b;
        f /= b as f64;
    }
    x
}

/// Randomised Halton rule in two dimensions: `shifts` independent
/// Cranley-Patterson rotations of the first `n` points. Returns the mean over
/// shifts and its standard error.
pub fn randomized_halton(
    f: impl Fn(f64, f64) -> f64 + Sync,
    n: u64,
    shifts: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets: Vec<(f64, f64)> = (0..shifts).map(|_| (rng.random(), rng.random())).collect();
    let means: Vec<f64> = offsets
        .par_iter()
        .map(|&(dx, dy)| {
            let mut s = 0.0;
            for i in 1..=n {
                let x = (radical_inverse(i, 2) + dx).fract();
                let y = (radical_inverse(i, 3) + dy).fract();
                s += f(x, y);
            }
            s / n as f64
        })
        .collect();
    mean_and_stderr(&means)
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// `vol = int_0^inf int_{-1}^{1} F1(e^{-w}, nu e^{w/2}) e^{-w/2} dnu dw`,
/// sampled on `(w, nu)` with `w = -log(1 - x)` so that `dw = e^w dx`.
fn sigma_a1_qmc(tol: f64, seed: u64) -> RegionIntegral {
    let g = |x: f64, y: f64| {
        let w = -(1.0 - x).ln();
        if !w.is_finite() {
            return 0.0;
        }
        let nu = 2.0 * y - 1.0;
        let u = (-w).exp();
        2.0 * f1(u, nu * (0.5 * w).exp()) * (0.5 * w).exp()
    };
    let (v, e) = randomized_halton(g, 1 << 18, 32, seed);
    RegionIntegral {
        dimension: 3,
        method: Method::QuasiMonteCarlo,
        tolerance: tol,
        value: 6.0 * v,
        error: 6.0 * e,
    }
}

/// The A1 singular integral `6 int_0^1 F2(u) du`, six times the volume of
/// the region in [`in_a1_region`].
pub fn sigma_infty_a1(tol: f64) -> Result<SigmaInfty, ConstError> {
    check_tol(tol)?;
    let primary = sigma_a1_quadrature(tol);
    let check = sigma_a1_qmc(tol, 0x51_61);
    agree(primary, check, tol)
}

fn agree(
    primary: RegionIntegral,
    check: RegionIntegral,
    tol: f64,
) -> Result<SigmaInfty, ConstError> {
    let s = SigmaInfty {
        value: primary.value,
        primary,
        check,
    };
    if s.discrepancy() > 3.0 * tol * s.value.abs().max(1.0) {
        return Err(ConstError::Disagreement {
            a: primary.value,
            b: check.value,
            tol,
        });
    }
    Ok(s)
}

/// Integrand of the Fermat singular integral, `|g|^{-2/3} / 6` with
/// `g = x1^3 + x2^3 + x3^3`, on the box `|x_i| <= 1` cut by `|g| <= 1`.
pub fn fermat_integrand(x: [f64; 3]) -> f64 {
    let g: f64 = x.iter().map(|t| t * t * t).sum();
    if x.iter().any(|t| t.abs() > 1.0) || g.abs() > 1.0 || g == 0.0 {
        return 0.0;
    }
    g.abs().powf(-2.0 / 3.0) / 6.0
}

/// Density of `x^3 + y^3` for `x, y` distributed as `dx/2` on `[-1, 1]`,
/// times 4: `h(w) = int f(s) f(w - s) ds` with `f(s) = |s|^{-2/3}/3` on `[-1,1]`.
///
/// With `s = r^3` this is `int (1/3)|w - r^3|^{-2/3} dr` over `|w - r^3| <= 1`,
/// and `r = r0 +- rho^3` around the singular point `r0 = w^{1/3}` leaves a
/// bounded integrand.
pub fn conv_density(w: f64, quad: &Quad) -> f64 {
    let w = w.abs();
    if w >= 2.0 {
        return 0.0;
    }
    let lo = (w - 1.0).cbrt().max(-1.0);
    let r0 = w.cbrt();
    let term = |r: f64| {
        let d = (w - r * r * r).abs();
        if d == 0.0 || d > 1.0 {
            0.0
        } else {
            d.powf(-2.0 / 3.0) / 3.0
        }
    };
    if r0 >= 1.0 {
        return quad.integrate(term, lo, 1.0).value;
    }
    let left = quad.integrate(
        |rho| 3.0 * rho * rho * term(r0 - rho * rho * rho),
        0.0,
        (r0 - lo).cbrt(),
    );
    let right = quad.integrate(
        |rho| 3.0 * rho * rho * term(r0 + rho * rho * rho),
        0.0,
        (1.0 - r0).cbrt(),
    );
    left.value + right.value
}

/// `B(1/3, 1/3)`.
const BETA_THIRD: f64 = 5.299916251350177;

/// Near `w = 0`, `h(w) <= H0 w^{-1/3}` with `H0 = B(1/3,1/3)/3`, and the
/// deficit `H0 w^{-1/3} - h(w)` lies in `[0, R0]` for `w <= 1/2`: the missing
/// mass sits at `|s| >= 1` or `|w - s| >= 1`, where the integrand is at most
/// `2^{2/3} |s|^{-4/3} / 9`, giving `R0 = (4/3) 2^{2/3}`.
const H0: f64 = BETA_THIRD / 3.0;
const R0: f64 = 2.1166342;

/// Singular integral with the band `w < eps` excised. Returns the value with
/// the excised piece replaced by its main term, and the proven bound on what
/// that replacement misses.
fn fermat_excised(eps: f64, tol: f64) -> (f64, f64) {
    let inner = Quad::tol(tol * 1e-4, 1e-12);
    let outer = Quad::tol(tol * 1e-3, tol * 1e-3);
    // w = y^3 removes the w^{-2/3} growth of h^2 at the origin.
    let g = |y: f64| {
        let h = conv_density(y * y * y, &inner);
        3.0 * y * y * h * h
    };
    let a = eps.cbrt();
    let bulk = outer.integrate(g, a, 1.0).value + outer.integrate(g, 1.0, 2f64.cbrt()).value;
    // int_0^eps (H0 w^{-1/3} - R)^2 = 3 H0^2 eps^{1/3} + O(3 H0 R0 eps^{2/3} + R0^2 eps).
    let main = 3.0 * H0 * H0 * eps.cbrt();
    let bound = 3.0 * H0 * R0 * eps.powf(2.0 / 3.0) + R0 * R0 * eps;
    (bulk + main, bound)
}

/// `sigma = (1/2) int h(w)^2 dw`: the box integral of `|g|^{-2/3}/6` equals
/// `(1/6) int k(s) |s|^{-2/3} ds` for the density `k` of `g`, and Fourier
/// inversion at 0 turns that into half the `L^2` norm of `h`.
fn sigma_fermat_quadrature(tol: f64) -> Result<RegionIntegral, ConstError> {
    let mut eps = 1e-3;
    let mut prev = fermat_excised(eps, tol);
    for _ in 0..8 {
        eps *= 1e-3;
        let cur = fermat_excised(eps, tol);
        if (cur.0 - prev.0).abs() < tol / 2.0 {
            return Ok(RegionIntegral {
                dimension: 3,
                method: Method::AdaptiveQuadrature,
                tolerance: tol,
                value: cur.0,
                error: cur.1 + (cur.0 - prev.0).abs(),
            });
        }
        prev = cur;
    }
    Err(ConstError::NoConvergence("Fermat excision"))
}

/// Importance sampling. Half the samples are uniform in the box; the other
/// half are `x = s y` with `s` uniform in `(0, 2]` and `y` drawn near the
/// cone `g = 0`: `y1, y2` uniform and `y3 = y3* + v^3` with `v` uniform,
/// `y3*` the real root. The mixture density is known in closed form, and
/// both singular directions (the cone and its vertex) get enough mass for a
/// finite variance. Letting `s` run past 1 keeps the cone component alive up
/// to the faces of the box.
fn sigma_fermat_mc(tol: f64, samples: u64, seed: u64) -> RegionIntegral {
    const CHUNKS: u64 = 64;
    let per = samples / CHUNKS;
    let chunk_means: Vec<f64> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ c.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut s = 0.0;
            for _ in 0..per {
                let x = if rng.random::<bool>() {
                    [0; 3].map(|_| rng.random_range(-1.0..1.0))
                } else {
                    let sc: f64 = CONE_SCALE * (1.0 - rng.random::<f64>());
                    let y1: f64 = rng.random_range(-1.0..1.0);
                    let y2: f64 = rng.random_range(-1.0..1.0);
                    let v: f64 = rng.random_range(-1.0..1.0);
                    let star = -(y1 * y1 * y1 + y2 * y2 * y2).cbrt();
                    [sc * y1, sc * y2, sc * (star + v * v * v)]
                };
                let f = fermat_integrand(x);
                if f > 0.0 {
                    s += f / mixture_density(x);
                }
            }
            s / per as f64
        })
        .collect();
    let (value, error) = mean_and_stderr(&chunk_means);
    RegionIntegral {
        dimension: 3,
        method: Method::MonteCarlo,
        tolerance: tol,
        value,
        error,
    }
}

const CONE_SCALE: f64 = 2.0;

fn mixture_density(x: [f64; 3]) -> f64 {
    let uniform = if x.iter().all(|t| t.abs() <= 1.0) {
        1.0 / 8.0
    } else {
        0.0
    };
    // y has density |tau|^{-2/3} / 24 on |y1|,|y2|,|tau| <= 1, where
    // tau = y3 - y3*(y1, y2) is homogeneous of degree 1. Then x = s y has
    // density (1/S) int_{s0}^S s^{-3} (s/|tau|)^{2/3} / 24 ds with
    // s0 = max(|x1|, |x2|, |tau|).
    // tau = g / (x3^2 + x3 x3* + x3*^2), the same rounding as the integrand,
    // so a sample whose g has cancelled away still gets its large density.
    let star = -(x[0] * x[0] * x[0] + x[1] * x[1] * x[1]).cbrt();
    let d = x[2] * x[2] + x[2] * star + star * star;
    let g: f64 = x.iter().map(|t| t * t * t).sum();
    let tau = if d > 0.0 { g / d } else { x[2] - star };
    let s0 = x[0].abs().max(x[1].abs()).max(tau.abs());
    let cone = if s0 < CONE_SCALE && tau != 0.0 {
        tau.abs().powf(-2.0 / 3.0) / (24.0 * CONE_SCALE)
            * 0.75
            * (s0.powf(-4.0 / 3.0) - CONE_SCALE.powf(-4.0 / 3.0))
    } else {
        0.0
    };
    0.5 * uniform + 0.5 * cone
}

/// Samples used by the Monte Carlo check of the Fermat density.
pub const FERMAT_MC_SAMPLES: u64 = 1 << 23;

/// The Fermat singular integral for `x1^3 + x2^3 + x3^3 + x4^3`.
pub fn sigma_infty_fermat(tol: f64) -> Result<SigmaInfty, ConstError> {
    check_tol(tol)?;
    let primary = sigma_fermat_quadrature(tol)?;
    let check = sigma_fermat_mc(tol, FERMAT_MC_SAMPLES, 0xFE_44);
    agree(primary, check, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_measure_brute() {
        for &(a, b) in &[(1.0, -1.0), (-2.0, 3.0), (0.3, 0.1), (5.0, 0.0)] {
            let n = 200_000;
            let (lo, hi) = (-1.5, 2.0);
            let hits = (0..n)
                .filter(|&i| {
                    let t = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
                    (a * t * t + b * t).abs() <= 1.0
                })
                .count();
            let est = (hi - lo) * hits as f64 / n as f64;
            assert!((band_measure(a, b, lo, hi) - est).abs() < 1e-4, "{a} {b}");
        }
    }

    #[test]
    fn region_membership() {
        assert!(in_a1_region(0.5, 0.5, -0.5));
        assert!(!in_a1_region(0.5, 2.0, 0.0));
        assert!(!in_a1_region(-0.5, 0.5, 0.0));
        assert!(!in_a1_region(0.5, -0.5, 0.5));
        assert!(!in_a1_region(1.5, 0.1, 0.1));
    }

    #[test]
    fn f2_nonincreasing() {
        let mut prev = f64::INFINITY;
        for k in 1..=40 {
            let v = f2(k as f64 / 40.0);
            assert!(v <= prev + 1e-12, "{k}: {v} > {prev}");
            prev = v;
        }
    }

    #[test]
    fn f2_is_integral_of_f1() {
        for &u in &[0.1f64, 0.5, 1.0] {
            let top = u.powf(-0.5);
            let q = Quad::tol(1e-12, 1e-10)
                .integrate(|v| f1(u, v), -top, top)
                .value;
            assert!((q - f2(u)).abs() < 1e-6 * f2(u), "{u}: {q} vs {}", f2(u));
        }
    }

    #[test]
    fn integrand_values() {
        let v = fermat_integrand([1.0, 1.0, -1.0]);
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
        // g(1,1,1) = 3 is outside |g| <= 1, but the formula there is 1/(6 3^{2/3}).
        let g: f64 = 3.0;
        assert!((g.powf(-2.0 / 3.0) / 6.0 - 1.0 / (6.0 * 3f64.powf(2.0 / 3.0))).abs() < 1e-15);
        let x = [0.3, -0.7, 0.5];
        for p in [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2]] {
            assert!((fermat_integrand(p.map(|i| x[i])) - fermat_integrand(x)).abs() < 1e-14);
        }
        assert_eq!(fermat_integrand(x.map(|t| -t)), fermat_integrand(x));
    }

    #[test]
    fn mixture_is_a_density() {
        // Midpoint rule in (z1, z2, r) with x1 = z1^3, x2 = z2^3 and
        // tau = x3 - x3* = r^3, which flattens both the cone and its vertex.
        let n = 320;
        let (cz, cr) = (2f64.cbrt(), 2.3f64.cbrt());
        let mid = |m: usize, c: f64| -c + 2.0 * c * (m as f64 + 0.5) / n as f64;
        let mut tot = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (z1, z2) = (mid(i, cz), mid(j, cz));
                let (x1, x2) = (z1 * z1 * z1, z2 * z2 * z2);
                let star = -(x1 * x1 * x1 + x2 * x2 * x2).cbrt();
                for k in 0..n {
                    let r = mid(k, cr);
                    let jac = 27.0 * z1 * z1 * z2 * z2 * r * r;
                    tot += mixture_density([x1, x2, star + r * r * r]) * jac;
                }
            }
        }
        tot *= (2.0 * cz / n as f64).powi(2) * 2.0 * cr / n as f64;
        assert!((tot - 1.0).abs() < 0.01, "{tot}");
    }

    #[test]
    fn conv_density_is_a_density() {
        // int h = (int f)^2 = 4.
        let inner = Quad::tol(1e-10, 1e-10);
        let tot = Quad::tol(1e-6, 1e-8).integrate(
            |y| 3.0 * y * y * conv_density(y * y * y, &inner),
            0.0,
            2f64.cbrt(),
        );
        assert!((2.0 * tot.value - 4.0).abs() < 1e-5, "{tot:?}");
    }

    #[test]
    fn conv_density_small_w_asymptotic() {
        let inner = Quad::tol(1e-12, 1e-12);
        for &w in &[1e-3, 1e-5, 1e-7] {
            let h = conv_density(w, &inner);
            let main = H0 * w.powf(-1.0 / 3.0);
            assert!(main - h >= -1e-6 && main - h <= R0, "{w}: {h} vs {main}");
        }
    }
}
