//! Plays the cluster-state strategy with the stabilizer simulator and checks
//! every round against the winning conditions.

use spto::game::{check_win, input_patterns, GameInstance};
use spto::stabilizer::{cluster_contexts, global_checks, play_round_traced, play_rounds};

fn main() -> spto::Result<()> {
    let contexts = cluster_contexts();
    println!(
        "row context {:?}",
        contexts
            .row
            .operators
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "column context {:?}",
        contexts
            .column
            .operators
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
    );

    for n in [3usize, 10, 25] {
        let corners = [0, n / 3, 2 * n / 3];
        let mut line = format!("n = {n:>2}, corners {corners:?}:");
        for x in input_patterns() {
            let inst = GameInstance::with_corner_bits(n, corners, x)?;
            let seeds: Vec<u64> = (0..200).map(|r| (n as u64) << 32 | r).collect();
            let wins = play_rounds(&inst, &contexts, &seeds)?
                .iter()
                .map(|t| check_win(&inst, t).map(|v| v.win as u32))
                .sum::<spto::Result<u32>>()?;
            line.push_str(&format!(" {wins}/{}", seeds.len()));
        }
        println!("{line}");
    }

    let inst = GameInstance::with_corner_bits(4, [0, 1, 2], [1, 0, 1])?;
    for check in global_checks(&inst, &contexts)? {
        println!(
            "{:<24} {} expects {:+}",
            check.label, check.operator, check.expected
        );
    }
    let (transcript, trace) = play_round_traced(&inst, &contexts, 3)?;
    for e in trace {
        println!(
            "player {} slot {}: measure {} -> {:+}",
            e.player, e.slot, e.operator, e.outcome
        );
    }
    println!(
        "answers {:?}, win {}",
        transcript.y,
        check_win(&inst, &transcript)?.win
    );
    Ok(())
}
