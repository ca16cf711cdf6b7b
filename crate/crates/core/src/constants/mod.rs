//! Leading constants: singular integrals, Euler products, the arithmetic
//! function `Delta(n)`, and fits of counts against `c B (log B)^(rho-1)`.

mod delta;
mod euler;
mod fit;
mod sigma;

use serde::Serialize;
use thiserror::Error;

pub use delta::{
    ap_identity_holds, ap_series, delta_fn, delta_main_term_ratio, delta_partial_sum, delta_terms,
    theta, theta_local_series, DeltaTerm,
};
pub use euler::{
    e2_local, e2_product, euler_product, g4_local, g4_product, g4_product_without_3, l1_lambda,
    l1_lambda_series, l2_lambda, lambda, zeta2, EulerProduct, ProductValue, MIN_PRIME_BOUND,
};
pub use fit::{fit_leading, fit_terms, Fit};
pub use sigma::{
    conv_density, f1, f2, fermat_integrand, in_a1_region, randomized_halton, sigma_infty_a1,
    sigma_infty_fermat, Method, RegionIntegral, SigmaInfty, FERMAT_MC_SAMPLES,
};

#[derive(Debug, Error, PartialEq)]
pub enum ConstError {
    #[error("tolerance {0} outside [1e-6, 1e-2]")]
    Tolerance(f64),
    #[error("methods disagree: {a} vs {b} at tolerance {tol}")]
    Disagreement { a: f64, b: f64, tol: f64 },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("tail exponent kappa = {0} is below 2")]
    Kappa(u32),
    #[error("prime bound {0} is below {MIN_PRIME_BOUND}")]
    PrimeBound(u64),
    #[error("need at least 4 sample points, got {0}")]
    TooFewPoints(usize),
    #[error("sample heights must be increasing and above 1")]
    NotIncreasing,
    #[error("degenerate design matrix")]
    Degenerate,
}

/// A reported constant.
#[derive(Clone, Debug, Serialize)]
pub struct Constant {
    pub value: f64,
    pub error_bar: f64,
    pub method: String,
}

/// Tolerance for the singular integrals behind the `c1` values.
pub const DEFAULT_TOL: f64 = 1e-4;
/// Prime bound for the Euler products behind the `c1` values.
pub const DEFAULT_PRIME_BOUND: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, serde::Deserialize)]
pub enum Which {
    #[value(name = "c1_a1")]
    #[serde(rename = "c1_a1")]
    C1A1,
    #[value(name = "c1_fermat")]
    #[serde(rename = "c1_fermat")]
    C1Fermat,
    #[value(name = "sigma_a1")]
    #[serde(rename = "sigma_a1")]
    SigmaA1,
    #[value(name = "sigma_fermat")]
    #[serde(rename = "sigma_fermat")]
    SigmaFermat,
    #[value(name = "E2")]
    #[serde(rename = "E2")]
    E2,
}

fn sigma_constant(s: &SigmaInfty) -> Constant {
    Constant {
        value: s.value,
        error_bar: s.primary.error + s.discrepancy(),
        method: format!(
            "adaptive quadrature; checked by {} ({:.10})",
            serde_json::to_value(s.check.method)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            s.check.value
        ),
    }
}

pub fn e2_zero(prime_bound: u64) -> Result<Constant, ConstError> {
    let e = euler_product(&e2_product(), prime_bound)?;
    Ok(Constant {
        value: e.value,
        error_bar: e.tail_bound,
        method: format!("Euler product to P = {prime_bound}, zeta(2)^-9 factored out"),
    })
}

/// `c1 = sigma_infty / 144 * prod_p (1 - 1/p)^4 (1 + 4/p + 1/p^2)` for the
/// split A1 sextic.
pub fn c1_a1_with(tol: f64, prime_bound: u64) -> Result<Constant, ConstError> {
    let s = sigma_infty_a1(tol)?;
    let e = euler_product(&e2_product(), prime_bound)?;
    let sigma = sigma_constant(&s);
    let value = sigma.value * e.value / 144.0;
    Ok(Constant {
        value,
        error_bar: value * (sigma.error_bar / sigma.value + e.tail_bound / e.value),
        method: format!("sigma_infty / 144 * E2(0); tol {tol}, P = {prime_bound}"),
    })
}

pub fn c1_a1() -> Result<Constant, ConstError> {
    c1_a1_with(DEFAULT_TOL, DEFAULT_PRIME_BOUND)
}

/// `c1 = sigma_infty 2^4 pi^3 sqrt(3) / (3! 3^8) * prod_{p != 3} G_p(4)` for
/// the Fermat cubic, which is `sigma_infty L(1,lambda)^3 G(4) / 3!`.
pub fn c1_fermat_with(tol: f64, prime_bound: u64) -> Result<Constant, ConstError> {
    let s = sigma_infty_fermat(tol)?;
    let g = euler_product(&g4_product_without_3(), prime_bound)?;
    let sigma = sigma_constant(&s);
    let pi = std::f64::consts::PI;
    let value = sigma.value * 16.0 * pi.powi(3) * 3f64.sqrt() / (6.0 * 3f64.powi(8)) * g.value;
    Ok(Constant {
        value,
        error_bar: value * (sigma.error_bar / sigma.value + g.tail_bound / g.value),
        method: format!(
            "sigma_infty * 2^4 pi^3 sqrt(3) / (3! 3^8) * prod G_p(4); tol {tol}, P = {prime_bound}"
        ),
    })
}

pub fn c1_fermat() -> Result<Constant, ConstError> {
    c1_fermat_with(DEFAULT_TOL, DEFAULT_PRIME_BOUND)
}

pub fn evaluate(which: Which, tol: f64, prime_bound: u64) -> Result<Constant, ConstError> {
    match which {
        Which::C1A1 => c1_a1_with(tol, prime_bound),
        Which::C1Fermat => c1_fermat_with(tol, prime_bound),
        Which::SigmaA1 => Ok(sigma_constant(&sigma_infty_a1(tol)?)),
        Which::SigmaFermat => Ok(sigma_constant(&sigma_infty_fermat(tol)?)),
        Which::E2 => e2_zero(prime_bound),
    }
}
