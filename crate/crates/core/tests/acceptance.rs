//! One line per acceptance criterion. Criteria listed in `KNOWN_RED` are
//! expected to fail as literally stated; the run fails only on a surprise in
//! either direction.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spto::classical::best_deterministic_triangle_sequential;
use spto::game::{check_win, input_patterns, GameInstance};
use spto::group::{CocycleTable, GroupElement};
use spto::lightcone::{
    find_failing_instance, generate_hard_instances, local_circuit, perfect_nonlocal_circuit,
    random_layered_circuit, BooleanCircuit, OutputBit,
};
use spto::linalg::{self, CMat};
use spto::mps::builtin::{aklt_isometry, aklt_spin_form, aklt_vl_cartesian, aklt_vr_cartesian};
use spto::mps::order::{
    aklt_string_order_closed_form, aklt_string_order_limit, aklt_win_probability, string_operators,
    twisted_string_operators,
};
use spto::mps::transfer::spectrum;
use spto::mps::*;
use spto::stabilizer::{cluster_contexts, cluster_state, play_rounds};

/// 3: the stated limits 0.97828 and 0.99588. 4: the stated eigenvalues +1/3.
/// 5: the stated cluster V^R(1,1), and V^R V^L = u off the AKLT range.
const KNOWN_RED: [u32; 3] = [3, 4, 5];

fn el(i: usize) -> GroupElement {
    GroupElement::z2z2((i >> 1) as u32, (i & 1) as u32)
}

fn max_dev(a: &CMat, b: &CMat) -> f64 {
    linalg::max_abs(&(a - b))
}

type Outcome = (bool, String);

fn classical_bound() -> Outcome {
    let start = Instant::now();
    let r = best_deterministic_triangle_sequential();
    let secs = start.elapsed().as_secs_f64();
    let ok = r.won == 7 && r.evaluations == 32768 * 8 && secs < 5.0;
    (
        ok,
        format!(
            "max win {} over {} evaluations in {secs:.2}s",
            r.max_win_fraction(),
            r.evaluations
        ),
    )
}

fn quantum_perfection() -> Outcome {
    let contexts = cluster_contexts();
    let mut losses = 0usize;
    let mut rounds = 0usize;
    for n in [3usize, 10, 25] {
        for (i, x) in input_patterns().into_iter().enumerate() {
            let inst = GameInstance::with_corner_bits(n, [0, n / 3, 2 * n / 3], x).unwrap();
            let seeds: Vec<u64> = (0..1000)
                .map(|r| (n as u64) << 40 | (i as u64) << 32 | r)
                .collect();
            for t in play_rounds(&inst, &contexts, &seeds).unwrap() {
                rounds += 1;
                losses += !check_win(&inst, &t).unwrap().win as usize;
            }
        }
    }
    (losses == 0, format!("{losses} losses in {rounds} rounds"))
}

fn aklt_numbers() -> Outcome {
    let b = builtin_tensor("aklt").unwrap();
    let z = el(2);
    let bounds = b.boundary_pair(2).unwrap();
    let mut worst: f64 = 0.0;
    for n in 6..=20 {
        let s = string_order(
            &b.tensor,
            &b.symmetry,
            &bounds,
            &z,
            0,
            n - 2,
            n,
            Normalization::Canonical,
        )
        .unwrap();
        worst = worst.max((s - linalg::r(aklt_string_order_closed_form(n))).norm());
    }
    let limit = aklt_string_order_limit();
    let p100 = aklt_win_probability(100);
    let closed_ok = worst < 1e-12;
    let limit_ok = (limit - 0.97828).abs() < 5e-6;
    let win_ok = (p100 - 0.99588).abs() < 5e-6;
    let three_dp = format!("{p100:.3}") == "0.996";
    (
        closed_ok && limit_ok && win_ok && three_dp,
        format!(
            "closed form dev {worst:.1e}; limit {limit:.6} vs 0.97828; win {p100:.6} vs 0.99588; rounds to {p100:.3}"
        ),
    )
}

fn transfer_spectra() -> Outcome {
    let a = builtin_tensor("aklt").unwrap().tensor;
    let mut ev: Vec<f64> = spectrum(&a).iter().map(|z| z.re).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    let expected = [1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
    let spec_ok = ev.iter().zip(expected).all(|(x, e)| (x - e).abs() < 1e-12);
    let xi = correlation_length(&a).unwrap();
    let xi_ok = (xi - 1.0 / 3f64.ln()).abs() < 1e-12;
    let p = fixed_point_transfer(&a).unwrap();
    let idem = max_dev(&(&p * &p), &p);
    (
        spec_ok && xi_ok && idem < 1e-12,
        format!("eigenvalues {ev:.6?}; xi {xi:.12}; idempotence {idem:.1e}"),
    )
}

fn boundary_algebra() -> Outcome {
    let mut algebra: f64 = 0.0;
    let mut product_dev: f64 = 0.0;
    let mut product_on_range: f64 = 0.0;
    for name in ["cluster_fixed_point", "aklt_fixed_point"] {
        let b = builtin_tensor(name).unwrap();
        let ops: Vec<_> = (0..4).map(|g| b.boundary_pair(g).unwrap()).collect();
        let proj = range_projector(&b.tensor);
        for g in 0..4 {
            for h in 0..4 {
                let gh = el(g).multiply(&el(h)).unwrap().index();
                let w = b.symmetry.cocycle.omega_at(g, h).to_complex();
                algebra = algebra
                    .max(max_dev(&(&ops[g].vr * &ops[h].vr), &(&ops[gh].vr * w)))
                    .max(max_dev(
                        &(&ops[g].vl * &ops[h].vl),
                        &(&ops[gh].vl * w.conj()),
                    ))
                    .max(max_dev(
                        &(&ops[g].vr * &ops[h].vl),
                        &(&ops[h].vl * &ops[g].vr),
                    ));
            }
            product_dev = product_dev.max(max_dev(&(&ops[g].vr * &ops[g].vl), &b.symmetry.u[g]));
            product_on_range = product_on_range.max(max_dev(
                &(&ops[g].vr * &ops[g].vl),
                &(&b.symmetry.u[g] * &proj),
            ));
        }
    }

    let (x, z, id) = (linalg::pauli_x(), linalg::pauli_z(), linalg::identity(2));
    let pow = |m: &CMat, k: u32| if k == 1 { m.clone() } else { id.clone() };
    let cluster = builtin_tensor("cluster_fixed_point").unwrap();
    let mut mismatched = Vec::new();
    for i in 0..4u32 {
        let (a, b) = (i >> 1, i & 1);
        let ops = cluster.boundary_pair(i as usize).unwrap();
        let vr = linalg::kron(&(pow(&z, b) * pow(&x, a)), &pow(&z, a));
        let vl = linalg::kron(&pow(&z, b), &(pow(&z, a) * pow(&x, b)));
        if max_dev(&ops.vr, &vr) > 1e-12 {
            mismatched.push(format!("V^R({a},{b})"));
        }
        if max_dev(&ops.vl, &vl) > 1e-12 {
            mismatched.push(format!("V^L({a},{b})"));
        }
    }

    let mut spin: f64 = 0.0;
    for mu in 0..3 {
        let (vl, vr) = aklt_spin_form(mu);
        spin = spin
            .max(max_dev(&vl, &aklt_vl_cartesian(mu)))
            .max(max_dev(&vr, &aklt_vr_cartesian(mu)));
    }
    let ok = algebra < 1e-10 && product_dev < 1e-10 && mismatched.is_empty() && spin < 1e-12;
    (
        ok,
        format!(
            "projective algebra dev {algebra:.1e}; V^R V^L = u dev {product_dev:.1e} ({product_on_range:.1e} on the tensor's range); \
             Pauli table mismatches {mismatched:?}; spin form dev {spin:.1e}"
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut placements = 0;
    for name in ["aklt", "aklt_fixed_point", "cluster_fixed_point"] {
        let b = builtin_tensor(name).unwrap();
        let (lo, hi) = if name == "aklt" { (4, 8) } else { (2, 4) };
        for _ in 0..25 {
            let n = rng.random_range(lo..=hi);
            let g = rng.random_range(1..4);
            let bounds = b.boundary_pair(g).unwrap();
            let l = if bounds.vl.nrows() == b.tensor.d() {
                1
            } else {
                2
            };
            let j = rng.random_range(0..n);
            let k = (j + rng.random_range(l..=n - l)) % n;
            let ops = match rng.random_range(0..3) {
                0 => string_operators(&b.symmetry, &bounds, &el(g), j, k, n).unwrap(),
                1 => twisted_string_operators(
                    &b.symmetry,
                    &bounds,
                    &el(g),
                    &el(rng.random_range(0..4)),
                    j,
                    k,
                    n,
                )
                .unwrap(),
                _ => {
                    let d = b.tensor.d();
                    let m = CMat::from_fn(d, d, |_, _| {
                        linalg::c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    });
                    vec![SiteOperator::new(j, &m + m.adjoint())]
                }
            };
            let chain = expectation_chain(&b.tensor, &ops, n, Normalization::Finite).unwrap();
            let psi = dense_state(&b.tensor, n, DEFAULT_DENSE_CAP).unwrap();
            let placed: Vec<(usize, CMat)> =
                ops.iter().map(|s| (s.position, s.op.clone())).collect();
            let dense = dense_expectation(&psi, b.tensor.d(), n, &placed).unwrap();
            worst = worst.max((chain - dense).norm());
            placements += 1;
        }
    }
    (
        placements >= 50 && worst < 1e-10,
        format!("{placements} placements, max deviation {worst:.1e}"),
    )
}

fn twist_phases() -> Outcome {
    let table = CocycleTable::pauli_z2z2();
    let mut table_ok = true;
    for g in 0..4usize {
        for h in 0..4usize {
            let (a, b, c, d) = (g >> 1, g & 1, h >> 1, h & 1);
            let expected = if (a * d + b * c) % 2 == 1 { -1.0 } else { 1.0 };
            table_ok &= (table.twist_phase(&el(g), &el(h)).unwrap().to_complex()
                - linalg::r(expected))
            .norm()
                < 1e-12;
        }
    }
    let b = builtin_tensor("aklt").unwrap();
    let mut worst: f64 = 0.0;
    for g in 1..4 {
        let bounds = b.boundary_pair(g).unwrap();
        let s = string_order(
            &b.tensor,
            &b.symmetry,
            &bounds,
            &el(g),
            0,
            8,
            12,
            Normalization::Finite,
        )
        .unwrap();
        for h in 0..4 {
            let t = twisted_string_order(
                &b.tensor,
                &b.symmetry,
                &bounds,
                &el(g),
                &el(h),
                0,
                8,
                12,
                Normalization::Finite,
            )
            .unwrap();
            let omega = table.twist_phase(&el(g), &el(h)).unwrap().to_complex();
            worst = worst.max((t / s - omega).norm());
        }
    }
    (
        table_ok && worst < 1e-10,
        format!("table exact: {table_ok}; max |T/S - Omega| {worst:.1e}"),
    )
}

fn transpose_consistent(c: &BooleanCircuit) -> bool {
    let bits: Vec<OutputBit> = c.output_bits().collect();
    let backward: Vec<_> = bits.iter().map(|&b| c.backward_cone(b)).collect();
    (0..c.source_wires()).all(|w| {
        let fwd = c.forward_cone(w);
        bits.iter()
            .zip(&backward)
            .all(|(b, cone)| fwd.contains(b) == cone.contains(&w))
    })
}

fn light_cones() -> Outcome {
    let (mut bound_ok, mut transpose_ok, mut tight) = (true, true, 0);
    for i in 0..100u64 {
        let k = 2 + (i % 2) as usize;
        let depth = 1 + (i / 2 % 5) as usize;
        let c = random_layered_circuit(64, k, depth, 32, 1000 + i).unwrap();
        let (max, bound) = c.backward_cone_stats();
        bound_ok &= max as u128 <= bound;
        tight += (max as u128 == bound) as u32;
        transpose_ok &= transpose_consistent(&c);
    }
    (
        bound_ok && tight > 0 && transpose_ok,
        format!("bound holds: {bound_ok}; {tight} tight; transpose consistent: {transpose_ok}"),
    )
}

fn separation_witness() -> Outcome {
    let local = local_circuit(27, 2, 11).unwrap();
    let report =
        find_failing_instance(&local, generate_hard_instances(27, 10_000, 2).unwrap(), 0).unwrap();
    let Some(w) = report.witness() else {
        return (false, "no witness within 10^4 instances".into());
    };
    let losing = w
        .instance
        .family()
        .iter()
        .filter(|inst| {
            let answers = local.evaluate(&inst.vertex_inputs(), 0).unwrap();
            !check_win(&inst.game_instance().unwrap(), &inst.transcript(&answers))
                .unwrap()
                .win
        })
        .count();
    let nonlocal = perfect_nonlocal_circuit(&w.instance).unwrap();
    let nonlocal_report = find_failing_instance(&nonlocal, w.instance.family(), 0).unwrap();
    let nonlocal_ok = nonlocal_report.witness().is_none();
    (
        losing >= 1 && nonlocal_ok,
        format!(
            "witness at stream position {}, {losing}/8 inputs lost; nonlocal circuit witness-free: {nonlocal_ok}",
            w.position
        ),
    )
}

fn isometry() -> Outcome {
    let pi = aklt_isometry();
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        let phi = linalg::kron_pow(&pi, n)
            * dense_state(
                &builtin_tensor("aklt_fixed_point").unwrap().tensor,
                n,
                DEFAULT_DENSE_CAP,
            )
            .unwrap();
        let phi = &phi / linalg::r(phi.norm());
        let reference = cluster_state(2 * n, 0).unwrap().state_vector();
        worst = worst.max((phi.dotc(&reference).norm() - 1.0).abs());
    }
    (
        worst < 1e-10,
        format!("max |1 - |<cluster|Pi psi>|| = {worst:.1e} for 2..4 blocks"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "classical bound", classical_bound),
        (2, "quantum perfection", quantum_perfection),
        (3, "AKLT numbers", aklt_numbers),
        (4, "transfer spectra", transfer_spectra),
        (5, "boundary-operator algebra", boundary_algebra),
        (6, "oracle equivalence", oracle_equivalence),
        (7, "twist phases", twist_phases),
        (8, "light cones", light_cones),
        (9, "separation witness", separation_witness),
        (10, "isometry", isometry),
    ];
    let mut surprises = 0;
    for (id, name, run) in criteria {
        let (pass, detail) = run();
        let expected_red = KNOWN_RED.contains(&id);
        let tag = match (pass, expected_red) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected FAIL)",
        };
        if pass == expected_red {
            surprises += 1;
        }
        println!("criterion {id:>2} {name}: {tag} - {detail}");
    }
    if surprises == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{surprises} unexpected result(s)");
        ExitCode::FAILURE
    }
}
