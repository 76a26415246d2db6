//! Exhaustive search over deterministic strategies on the 3-cycle, then the
//! edge-restricted affine model on a longer ring.

use std::time::Instant;

use spto::classical::{best_deterministic_triangle, best_edge_restricted_affine};
use spto::game::{check_win, input_patterns, GameInstance};

fn main() -> spto::Result<()> {
    let start = Instant::now();
    let report = best_deterministic_triangle();
    println!(
        "triangle: best deterministic strategy wins {} ({} evaluations, {} optimal strategies, {:.2?})",
        report.max_win_fraction(),
        report.evaluations,
        report.optimal_count,
        start.elapsed()
    );
    for x in input_patterns() {
        let inst = GameInstance::with_corner_bits(3, [0, 1, 2], x)?;
        let verdict = check_win(&inst, &report.witness.transcript(&inst))?;
        let why = verdict
            .violated
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        println!(
            "  x = {x:?}: {}",
            if verdict.win {
                "win".to_string()
            } else {
                format!("lose ({why})")
            }
        );
    }

    let (n, corners) = (12, [0, 4, 8]);
    let affine = best_edge_restricted_affine(n, corners)?;
    println!(
        "ring of {n}, corners {corners:?}: affine edge strategies win at most {}/8 (residual space rank {})",
        affine.won, affine.rank
    );
    Ok(())
}
