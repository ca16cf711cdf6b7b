//! How often a random diagonal conic `a1 b1 x^2 + a2 b2 y^2 + a3 b3 z^2` with
//! coefficients in dyadic ranges has a primitive point, weighted as in the
//! divisor-function sum.

use manin::gon::{conic_solvability_stats, DyadicLevel};

fn main() {
    let levels = [
        ([0, 0, 0], [0, 0, 0]),
        ([1, 1, 1], [1, 1, 1]),
        ([2, 1, 0], [0, 2, 1]),
        ([3, 3, 3], [1, 1, 1]),
        ([2, 2, 2], [3, 3, 3]),
        ([4, 3, 3], [3, 3, 4]),
    ];
    println!(
        "{:<22} {:>9} {:>6} {:>6} {:>9} {:>9}",
        "level (ka; kb)", "admiss.", "found", "Leg.", "all/AB", "sol/AB"
    );
    for (ka, kb) in levels {
        let s = conic_solvability_stats(DyadicLevel { ka, kb }, 2000, 1);
        println!(
            "{:<22} {:>9} {:>6} {:>6} {:>9.2} {:>9.2}",
            format!("{ka:?};{kb:?}"),
            s.admissible,
            s.found,
            s.legendre,
            s.ratio_all,
            s.ratio_soluble
        );
    }
}
