//! Light-cone analysis and witness search on the 27 x 27 grid.
//!
//! Writes the circuits it searches as JSON (`shallow_local.json`,
//! `perfect_nonlocal.json`) into the directory given as the first argument,
//! or the system temp directory.

use std::path::PathBuf;

use spto::lightcone::{
    find_failing_instance, generate_hard_instances, local_circuit, perfect_nonlocal_circuit,
    random_layered_circuit, BooleanCircuit, SearchOutcome, SearchReport,
};

fn describe(name: &str, c: &BooleanCircuit, report: &SearchReport) {
    let (max, bound) = c.backward_cone_stats();
    println!(
        "{name}: K = {}, depth {}, {} gates, largest backward cone {max} (K^D = {bound})",
        c.k,
        c.depth(),
        c.gate_count()
    );
    let s = &report.stats;
    println!(
        "  examined {} geometries: {} with overlapping cones, {} reaching the opposite edge",
        s.examined, s.cones_overlap, s.edge_reached
    );
    match &report.outcome {
        SearchOutcome::Witness(w) => {
            println!(
                "  witness at position {}: corners {:?}, cycle length {}, x = {:?}, violated {:?}",
                w.position,
                w.instance.corners,
                w.instance.cycle.len(),
                w.instance.x,
                w.verdict.violated
            );
            println!(
                "  missed edges {:?}, disjoint cones {}",
                w.failure.edges_missed, w.failure.disjoint_cones
            );
        }
        SearchOutcome::Exhausted { reason } => println!("  no witness: {reason}"),
    }
}

fn main() -> spto::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let n = 27;

    let mut tight = 0;
    for i in 0..100u64 {
        let c = random_layered_circuit(64, 2 + (i % 2) as usize, 1 + (i % 5) as usize, 32, i)?;
        let (max, bound) = c.backward_cone_stats();
        assert!(max as u128 <= bound);
        tight += (max as u128 == bound) as u32;
    }
    println!("100 random layered circuits respect |backward cone| <= K^D, {tight} of them tightly");

    let local = local_circuit(n, 2, 11)?;
    let stream = generate_hard_instances(n, 10_000, 2)?;
    let report = find_failing_instance(&local, stream, 0)?;
    describe("shallow local circuit", &local, &report);

    let wired = report
        .witness()
        .map(|w| w.instance.clone())
        .expect("a witness for the local circuit");
    let nonlocal = perfect_nonlocal_circuit(&wired)?;
    let report = find_failing_instance(&nonlocal, wired.family(), 0)?;
    describe("perfect nonlocal circuit", &nonlocal, &report);

    for (file, c) in [
        ("shallow_local.json", &local),
        ("perfect_nonlocal.json", &nonlocal),
    ] {
        let path = dir.join(file);
        std::fs::write(&path, c.to_json())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
