//! Picard ranks of diagonal cubic surfaces from the Galois action on the 27
//! lines, next to the cube criterion for rank one.

use manin::picard::{cube_criterion_rank_one, galois_group, picard_rank};

fn main() {
    let cases: [[u64; 4]; 9] = [
        [1, 1, 1, 1],
        [1, 1, 1, 2],
        [1, 1, 1, 8],
        [1, 2, 4, 8],
        [1, 1, 2, 4],
        [1, 1, 2, 2],
        [1, 2, 3, 6],
        [2, 3, 5, 7],
        [1, 8, 27, 64],
    ];
    println!(
        "{:<16} {:>5} {:>6} {:>14}",
        "a", "|G|", "rank", "cube crit."
    );
    for a in cases {
        println!(
            "{:<16} {:>5} {:>6} {:>14}",
            format!("{a:?}"),
            galois_group(a).len(),
            picard_rank(a),
            cube_criterion_rank_one(a)
        );
    }
}
