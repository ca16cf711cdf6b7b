//! Fit `c B (log B)^3 + c' B (log B)^2` to torsor counts for the `A1` surface
//! and compare `c` with the predicted leading constant.

use manin::constants::{c1_a1, fit_terms};
use manin::torsor::a1_count;

fn main() -> anyhow::Result<()> {
    let c1 = c1_a1()?.value;
    let mut pts = Vec::new();
    for b in [1_000u64, 10_000, 100_000, 1_000_000] {
        let n = 2.0 * a1_count(b) as f64;
        let bf = b as f64;
        println!(
            "B = {b:>8}: N_U ~ {n:>12}  N_U / (c1 B log^3 B) = {:.4}",
            n / (c1 * bf * bf.ln().powi(3))
        );
        pts.push((bf, n));
    }
    for powers in [&[3u32, 2][..], &[3, 2, 1, 0][..]] {
        let fit = fit_terms(&pts, powers)?;
        println!(
            "powers {powers:?}: coefficients {:?}, c / c1 = {:.3}",
            fit.coefficients,
            fit.leading() / c1
        );
    }
    Ok(())
}
