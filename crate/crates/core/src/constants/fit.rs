//! Least-squares fits of point counts against `B (log B)^k`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::ConstError;

#[derive(Clone, Debug, Serialize)]
pub struct Fit {
    /// Powers of `log B`, highest first.
    pub powers: Vec<u32>,
    pub coefficients: Vec<f64>,
    /// Euclidean norm of the residual in `N(B)/B`.
    pub residual: f64,
}

impl Fit {
    pub fn leading(&self) -> f64 {
        self.coefficients[0]
    }
}

/// Fit `N(B)/B = sum_k c_k (log B)^k` over the given powers.
pub fn fit_terms(counts: &[(f64, f64)], powers: &[u32]) -> Result<Fit, ConstError> {
    if counts.len() < 4 {
        return Err(ConstError::TooFewPoints(counts.len()));
    }
    if counts.windows(2).any(|w| w[1].0 <= w[0].0) || counts[0].0 <= 1.0 {
        return Err(ConstError::NotIncreasing);
    }
    let mut powers = powers.to_vec();
    powers.sort_unstable_by(|a, b| b.cmp(a));
    powers.dedup();
    let (m, n) = (counts.len(), powers.len());
    if n == 0 || n > m {
        return Err(ConstError::Degenerate);
    }
    // Scale each column by its largest entry so the singular values compare fairly.
    let mut a = DMatrix::from_fn(m, n, |i, j| counts[i].0.ln().powi(powers[j] as i32));
    let scales: Vec<f64> = (0..n).map(|j| a.column(j).amax()).collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).unscale_mut(*s);
    }
    let y = DVector::from_iterator(m, counts.iter().map(|&(b, c)| c / b));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(ConstError::Degenerate);
    }
    let x = svd.solve(&y, 0.0).map_err(|_| ConstError::Degenerate)?;
    let residual = (&a * &x - &y).norm();
    Ok(Fit {
        coefficients: (0..n).map(|j| x[j] / scales[j]).collect(),
        powers,
        residual,
    })
}

/// Fit against a full polynomial of degree `rho - 1` in `log B`; returns the
/// leading coefficient and the residual norm.
pub fn fit_leading(counts: &[(f64, f64)], rho: u32) -> Result<(f64, f64), ConstError> {
    if rho == 0 {
        return Err(ConstError::Degenerate);
    }
    let powers: Vec<u32> = (0..rho).rev().collect();
    let f = fit_terms(counts, &powers)?;
    Ok((f.leading(), f.residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        [1e3, 1e4, 1e5, 1e6, 1e7]
            .iter()
            .map(|&b| (b, f(b)))
            .collect()
    }

    #[test]
    fn exact_leading_term() {
        let c = grid(|b| 5.0 * b * b.ln().powi(3));
        let (lead, res) = fit_leading(&c, 4).unwrap();
        assert!((lead - 5.0).abs() < 1e-6, "{lead}");
        assert!(res < 1e-6);
    }

    #[test]
    fn lower_order_term() {
        let c = grid(|b| 5.0 * b * b.ln().powi(3) - 7.5 * b * b.ln().powi(2));
        let (lead, _) = fit_leading(&c, 4).unwrap();
        assert!((lead - 5.0).abs() < 1e-6, "{lead}");
        let two = fit_terms(&c, &[3, 2]).unwrap();
        assert!(
            (two.coefficients[0] - 5.0).abs() < 1e-6 && (two.coefficients[1] + 7.5).abs() < 1e-6
        );
    }

    #[test]
    fn preconditions() {
        let c = grid(|b| b);
        assert!(matches!(
            fit_leading(&c[..3], 1),
            Err(ConstError::TooFewPoints(3))
        ));
        let mut r = c.clone();
        r.swap(0, 1);
        assert!(matches!(fit_leading(&r, 1), Err(ConstError::NotIncreasing)));
        assert!(matches!(fit_terms(&c, &[]), Err(ConstError::Degenerate)));
        assert!(matches!(
            fit_leading(&c[..4], 5),
            Err(ConstError::Degenerate)
        ));
    }
}
