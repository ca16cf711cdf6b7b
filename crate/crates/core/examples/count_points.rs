//! Count rational points of bounded height on catalogue surfaces, on the whole
//! surface and off its lines, and check the density of points in `P^1`, `P^2`.
//!
//! `cargo run --release --example count_points -- 200`

use manin::surfaces::{self, builtin, count_surface, Subset, DEFAULT_BUDGET};

fn main() -> anyhow::Result<()> {
    let b: u64 = std::env::args().nth(1).map_or(Ok(100), |s| s.parse())?;
    for n in [2, 3] {
        let bound = if n == 2 { 1000 } else { 200 };
        let count = surfaces::count_ambient(n, bound, DEFAULT_BUDGET)?;
        let ratio =
            count as f64 / (surfaces::ambient_leading_constant(n) * (bound as f64).powi(n as i32));
        println!(
            "P^{}: N({bound}) = {count}, ratio to the asymptotic {ratio:.5}",
            n - 1
        );
    }
    for id in [
        "fermat_cubic",
        "dp3_d4",
        "cubic_e6",
        "cayley_cubic",
        "dp6_a1",
    ] {
        let spec = builtin(id)?;
        let all = count_surface(&spec, b, Subset::All, DEFAULT_BUDGET)?;
        // Surfaces whose lines are not listed refuse the open subset.
        let open = match count_surface(&spec, b, Subset::OpenU, DEFAULT_BUDGET) {
            Ok(r) => r.count.to_string(),
            Err(e) => format!("({e})"),
        };
        println!(
            "{id:<14} B = {b}: all {:>8}  off lines {open}  [{} ms]",
            all.count, all.elapsed_ms
        );
    }
    Ok(())
}
