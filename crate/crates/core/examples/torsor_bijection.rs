//! Compare the image of each torsor map with a direct enumeration of the
//! surface: exact for the `D4` cubic, exact up to boundary points for `A1`.

use manin::torsor::{verify_bijection, TorsorKind};

fn main() -> anyhow::Result<()> {
    let b: u64 = std::env::args().nth(1).map_or(Ok(100), |s| s.parse())?;
    for kind in [TorsorKind::D4, TorsorKind::A1] {
        let r = verify_bijection(kind, b)?;
        println!(
            "{kind:?} B = {b}: matched {}, missing {}, extra {}, duplicates {}, exact {}, differences on boundary {}",
            r.matched,
            r.missing.len(),
            r.extra.len(),
            r.duplicates,
            r.is_exact(),
            r.differences_on_boundary()
        );
        if let Some(x) = r.missing.first() {
            println!("    e.g. missing {x:?}");
        }
    }
    Ok(())
}
