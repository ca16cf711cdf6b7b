//! Local data for the Fermat cubic: point counts modulo prime powers, the
//! character-sum formula for `N*(p)`, Jacobi sum magnitudes.

use manin::chars::{cubic_characters, jacobi_norm_expected, jacobi_sum, local_report};

fn main() -> anyhow::Result<()> {
    let a = [1, 1, 1, 1];
    for (p, e) in [(2, 3), (5, 2), (7, 1), (7, 2), (13, 2), (31, 1)] {
        let r = local_report(a, p, e)?;
        let density = r.n_star as f64 / (p as f64).powi(3 * e as i32);
        println!(
            "p = {p:>2} e = {e}: N = {:>8} N* = {:>8} N*/p^3e = {density:.6} delta = {:?} checks {:?}",
            r.n, r.n_star, r.delta, r.checks
        );
    }
    for p in [7, 13, 19] {
        let (chi, bar) = cubic_characters(p)?;
        for cs in [
            vec![chi.clone(), chi.clone(), chi.clone()],
            vec![chi.clone(), bar.clone()],
            vec![chi.clone(); 4],
        ] {
            let j = jacobi_sum(&cs)?;
            println!(
                "p = {p:>2} r = {}: |J|^2 = {:>6} expected {:>6}",
                cs.len(),
                j.norm(),
                jacobi_norm_expected(&cs)
            );
        }
    }
    Ok(())
}
