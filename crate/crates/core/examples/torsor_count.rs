//! Count points on the degree six `A1` surface through its torsor, for a range
//! of heights, and compare with `B (log B)^3`.
//!
//! ```text
//! cargo run --release --example torsor_count -- 1000000
//! ```

use std::time::Instant;

fn main() {
    let top: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    let mut b = 10;
    while b <= top {
        let start = Instant::now();
        let t = manin::torsor::a1_count(b);
        let l = (b as f64).ln();
        println!(
            "B = {b:>9}  2T(B) = {:>12}  2T/(B log^3 B) = {:.5}  [{:.2?}]",
            2 * t,
            2.0 * t as f64 / (b as f64 * l.powi(3)),
            start.elapsed()
        );
        b *= 10;
    }
}
