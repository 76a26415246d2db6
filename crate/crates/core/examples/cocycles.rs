//! Twist phases of the Pauli cocycle on Z2 x Z2 and the cocycle read off the
//! projective Pauli representation.

use spto::group::{CocycleTable, Group, ProjectiveRep};

fn main() -> spto::Result<()> {
    let group = Group::z2z2();
    let table = CocycleTable::pauli_z2z2();
    let report = table.verify();
    println!("cocycle condition holds: {}", report.valid);

    let labels = ["e", "x", "z", "y"];
    println!("twist phase Omega(g, h):");
    print!("    ");
    for l in labels {
        print!("{l:>4}");
    }
    println!();
    for g in group.elements() {
        print!("{:>4}", labels[g.index()]);
        for h in group.elements() {
            print!("{:>4}", table.twist_phase(&g, &h)?.to_string());
        }
        println!();
    }

    let derived = ProjectiveRep::pauli().cocycle()?;
    let mut agree = true;
    for g in group.elements() {
        for h in group.elements() {
            agree &= derived.twist_phase(&g, &h)? == table.twist_phase(&g, &h)?;
        }
    }
    println!("Pauli representation gives the same twists: {agree}");
    Ok(())
}
