//! Oracle sweep for the geometry-of-numbers bounds: draw random instances
//! for each lemma and report the largest observed count/bound ratio.
//!
//! `cargo run --release --example gon_sweep -- [instances] [seed]`

use std::time::Instant;

use manin::gon::{self, LemmaReport};

fn show(r: &LemmaReport, secs: f64) {
    let worst = r.rows.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio));
    println!(
        "{:<6} n={} max ratio {:.4} (frozen {}) violations {}  [{secs:.1}s]",
        r.lemma, r.instances, r.max_ratio, r.constant, r.violations
    );
    if let Some(w) = worst {
        println!(
            "       worst: {} count {} bound {:.3}",
            w.instance, w.count, w.bound
        );
    }
}

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(1000), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(2024), |s| s.parse())?;

    let t = Instant::now();
    let r = gon::check_line_bound(&gon::sample(n, seed, gon::random_line_instance))?;
    show(&r, t.elapsed().as_secs_f64());

    let t = Instant::now();
    let r = gon::check_conic_bound(&gon::sample(n, seed, gon::random_conic_instance))?;
    show(&r, t.elapsed().as_secs_f64());

    let t = Instant::now();
    let r = gon::check_rho(&gon::sample(n, seed, gon::random_rho_instance));
    show(&r, t.elapsed().as_secs_f64());

    let t = Instant::now();
    let r = gon::check_serre(&gon::sample(n, seed, gon::random_serre_level), seed);
    show(&r, t.elapsed().as_secs_f64());
    Ok(())
}
