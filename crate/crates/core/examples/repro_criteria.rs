//! Run selected acceptance criteria and print their checks and measurements.
//!
//! `cargo run --release --example repro_criteria -- 4 5 10` (no ids: all of 1 to 10)

use manin::repro;

fn main() -> anyhow::Result<()> {
    let mut ids: Vec<u8> = std::env::args()
        .skip(1)
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    if ids.is_empty() {
        ids = repro::criteria().map(|c| c.0).collect();
    }
    for id in ids {
        let r = repro::run_criterion(id)?;
        println!("{}", repro::summary_line(&r));
        println!("{}", serde_json::to_string(&r.measurements)?);
    }
    Ok(())
}
