//! The arithmetic function `Delta(n)` behind the `A1` count: first values,
//! partial sums against their predicted main term, and the Euler factor identity.

use manin::constants::{
    ap_identity_holds, delta_fn, delta_main_term_ratio, e2_zero, DEFAULT_PRIME_BOUND,
};

fn main() -> anyhow::Result<()> {
    let values: Vec<String> = (1..=16)
        .map(|n| format!("{:.4}", delta_fn(n) + 0.0))
        .collect();
    println!("Delta(1..16) = {}", values.join(" "));
    let e2 = e2_zero(DEFAULT_PRIME_BOUND)?.value;
    for x in [10_000u64, 1_000_000, 100_000_000] {
        println!(
            "X = {x:>10}: partial sum / main term = {:.4}",
            delta_main_term_ratio(x, e2)
        );
    }
    for p in [2, 3, 5, 7] {
        println!(
            "p = {p}: Euler factor identity to order 12 holds: {}",
            ap_identity_holds(p, 12)
        );
    }
    Ok(())
}
