//! Segre symbols of the fifteen singular quartic del Pezzo types and of the
//! catalogue pencils.

use manin::picard::classify_dp4;
use manin::surfaces::{builtin, HomogeneousForm, DP4_TYPES};

fn main() -> anyhow::Result<()> {
    for (ty, q1, q2, ..) in DP4_TYPES {
        let c = classify_dp4(
            &HomogeneousForm::parse(5, q1)?,
            &HomogeneousForm::parse(5, q2)?,
        )?;
        println!(
            "{ty:<5} {:<16} {:<10} {:>2} lines",
            c.symbol.to_string(),
            c.singularity,
            c.lines
        );
    }
    for id in ["dp4_pencil_a1", "dp4_d4_nonsplit"] {
        let s = builtin(id)?;
        let c = classify_dp4(&s.forms[0], &s.forms[1])?;
        println!("{id:<16} {} {}", c.symbol, c.singularity);
    }
    Ok(())
}
