//! The hard-instance family: neighborhood boxes, family size against
//! N^(16/3), and one sampled cycle drawn on the grid (corners in capitals,
//! each path marked by the corner it leaves).

use spto::lightcone::{generate_hard_instances, HardFamily};

fn main() -> spto::Result<()> {
    println!(
        "{:>4} {:>5} {:>6} {:>14} {:>16} {:>7}",
        "N", "side", "boxes", "corner triples", "instances", "/N^16/3"
    );
    for n in [8usize, 16, 27, 40, 64] {
        let f = HardFamily::standard(n)?;
        let size = f.instance_count();
        println!(
            "{n:>4} {:>5} {:>6} {:>14} {size:>16} {:>7.4}",
            f.partition.side,
            f.partition.box_count(),
            f.corner_triples(),
            size as f64 / (n as f64).powf(16.0 / 3.0)
        );
    }

    let n = 27;
    let inst = generate_hard_instances(n, 1, 5)?.remove(0);
    inst.validate()?;
    let family = HardFamily::standard(n)?;
    println!(
        "\nsampled instance on the {n} x {n} grid, boxes of side {}:",
        family.partition.side
    );
    let mut canvas = vec![vec!['.'; n]; n];
    for (i, path) in inst.paths().iter().enumerate() {
        for &v in path {
            canvas[v / n][v % n] = ['a', 'b', 'g'][i];
        }
    }
    for (&v, mark) in inst.corners.iter().zip(['A', 'B', 'G']) {
        canvas[v / n][v % n] = mark;
    }
    for row in canvas {
        println!("  {}", row.into_iter().collect::<String>());
    }
    println!("{}", inst.to_json());
    Ok(())
}
