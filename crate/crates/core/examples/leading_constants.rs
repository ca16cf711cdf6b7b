//! Evaluate the singular integrals and Euler products, then the leading
//! constants for the Fermat cubic and the split A1 sextic.

use std::time::Instant;

use manin::constants::{self, euler_product};

fn main() -> anyhow::Result<()> {
    let tol = 1e-4;
    let t = Instant::now();
    let a1 = constants::sigma_infty_a1(tol)?;
    println!(
        "sigma_infty(A1)     quadrature {:.10} +- {:.1e}",
        a1.primary.value, a1.primary.error
    );
    println!(
        "                    quasi-MC   {:.10} +- {:.1e}  [{:.2?}]",
        a1.check.value,
        a1.check.error,
        t.elapsed()
    );

    let t = Instant::now();
    let fe = constants::sigma_infty_fermat(tol)?;
    println!(
        "sigma_infty(Fermat) quadrature {:.10} +- {:.1e}",
        fe.primary.value, fe.primary.error
    );
    println!(
        "                    MC         {:.10} +- {:.1e}  [{:.2?}]",
        fe.check.value,
        fe.check.error,
        t.elapsed()
    );

    for p in [10_000, 100_000] {
        let e2 = euler_product(&constants::e2_product(), p)?;
        let g4 = euler_product(&constants::g4_product(), p)?;
        println!(
            "P = {p:>6}: E2(0) = {:.12} (tail {:.1e}), G(4) = {:.12} (tail {:.1e})",
            e2.value, e2.tail_bound, g4.value, g4.tail_bound
        );
    }

    let c = constants::c1_a1()?;
    println!("c1(A1)     = {:.10} +- {:.1e}", c.value, c.error_bar);
    let c = constants::c1_fermat()?;
    println!("c1(Fermat) = {:.10} +- {:.1e}", c.value, c.error_bar);
    Ok(())
}
