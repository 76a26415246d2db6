//! Boundary operators of the two built-in fixed points: their Pauli content on
//! the cluster chain, the projective algebra they close, and the AKLT spin form.

use spto::group::GroupElement;
use spto::linalg::{self, CMat};
use spto::mps::builtin::{aklt_spin_form, aklt_vl_cartesian, aklt_vr_cartesian};
use spto::mps::{builtin_tensor, range_projector};

const LABELS: [&str; 4] = ["e", "x", "z", "y"];

/// Nonzero Pauli components of a two-qubit operator, e.g. `-1 ZX`.
fn pauli_content(m: &CMat) -> String {
    let singles = [
        ("I", linalg::identity(2)),
        ("X", linalg::pauli_x()),
        ("Y", linalg::pauli_y()),
        ("Z", linalg::pauli_z()),
    ];
    let mut terms = Vec::new();
    for (la, a) in &singles {
        for (lb, b) in &singles {
            let coeff = (linalg::kron(a, b).adjoint() * m).trace() / linalg::r(4.0);
            if coeff.norm() > 1e-12 {
                terms.push(format!("({:+.3}{:+.3}i) {la}{lb}", coeff.re, coeff.im));
            }
        }
    }
    terms.join(" + ")
}

fn main() -> spto::Result<()> {
    let cluster = builtin_tensor("cluster_fixed_point")?;
    for g in 0..4 {
        let b = cluster.boundary_pair(g)?;
        println!(
            "cluster {}: VL = {}, VR = {}",
            LABELS[g],
            pauli_content(&b.vl),
            pauli_content(&b.vr)
        );
    }

    for name in ["cluster_fixed_point", "aklt_fixed_point"] {
        let t = builtin_tensor(name)?;
        let proj = range_projector(&t.tensor);
        let ops = (0..4)
            .map(|g| t.boundary_pair(g))
            .collect::<spto::Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for g in 0..4 {
            for h in 0..4 {
                let gh = GroupElement::z2z2((g >> 1) as u32, (g & 1) as u32)
                    .multiply(&GroupElement::z2z2((h >> 1) as u32, (h & 1) as u32))?
                    .index();
                let w = t.symmetry.cocycle.omega_at(g, h).to_complex();
                worst = worst.max(linalg::max_abs(
                    &(&ops[g].vr * &ops[h].vr - &ops[gh].vr * w),
                ));
                worst = worst.max(linalg::max_abs(
                    &(&ops[g].vl * &ops[h].vl - &ops[gh].vl * w.conj()),
                ));
                worst = worst.max(linalg::max_abs(
                    &(&ops[g].vr * &ops[h].vl - &ops[h].vl * &ops[g].vr),
                ));
            }
            worst = worst.max(linalg::max_abs(
                &(&ops[g].vr * &ops[g].vl - &t.symmetry.u[g] * &proj),
            ));
        }
        println!("{name}: projective algebra residual {worst:.2e}");
    }

    let mut spin = 0.0f64;
    for mu in 0..3 {
        let (vl, vr) = aklt_spin_form(mu);
        spin = spin
            .max(linalg::max_abs(&(vl - aklt_vl_cartesian(mu))))
            .max(linalg::max_abs(&(vr - aklt_vr_cartesian(mu))));
    }
    println!("AKLT spin form vs Cartesian form: max deviation {spin:.2e}");
    Ok(())
}
