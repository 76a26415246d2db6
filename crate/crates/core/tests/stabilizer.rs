use proptest::prelude::*;
use spto::game::{check_win, input_patterns, GameInstance};
use spto::group::{CocycleTable, GroupElement};
use spto::linalg;
use spto::stabilizer::*;

fn el(i: usize) -> GroupElement {
    GroupElement::z2z2((i >> 1) as u32, (i & 1) as u32)
}

fn pauli_from(letters: &[u8]) -> PauliString {
    let s: String = letters
        .iter()
        .map(|&l| ['I', 'X', 'Y', 'Z'][l as usize])
        .collect();
    s.parse().unwrap()
}

#[test]
fn twist_table_is_symplectic_form() {
    let table = CocycleTable::pauli_z2z2();
    for g in 0..4 {
        for h in 0..4 {
            let (a, b, c, d) = (g >> 1, g & 1, h >> 1, h & 1);
            let expect = if (a * d + b * c) % 2 == 1 { -1.0 } else { 1.0 };
            let omega = table.twist_phase(&el(g), &el(h)).unwrap().to_complex();
            assert!((omega - linalg::r(expect)).norm() < 1e-12, "({g},{h})");
        }
    }
}

#[test]
fn contexts_exist_for_anticommuting_pairs() {
    let ops = SiteOperators::cluster();
    for g in 1..3 {
        for h in 1..4 {
            let r = build_contexts(&el(g), &el(h), &ops);
            assert_eq!(r.is_ok(), g != h, "({g},{h})");
        }
    }
}

#[test]
fn tabulated_vr_of_y_carries_an_extra_sign() {
    // With the tabulated V^R(1,1) the column product is -1; the operator
    // derived from the tensor differs from it by exactly that sign.
    let mut ops = SiteOperators::cluster();
    for h in [1, 2] {
        assert!(matches!(
            build_contexts(&el(3), &el(h), &ops),
            Err(spto::SptoError::ContextsUndefined(_))
        ));
    }
    ops.vr[3] = ops.vr[3].clone().negated();
    for h in [1, 2] {
        assert!(build_contexts(&el(3), &el(h), &ops).is_ok(), "h={h}");
    }
}

#[test]
fn cluster_rings_win_every_round() {
    let contexts = cluster_contexts();
    for n in [3usize, 10, 25] {
        let corners = [0, n / 3, 2 * n / 3];
        for x in input_patterns() {
            let inst = GameInstance::with_corner_bits(n, corners, x).unwrap();
            let seeds: Vec<u64> = (0..100).collect();
            for t in play_rounds(&inst, &contexts, &seeds).unwrap() {
                assert!(check_win(&inst, &t).unwrap().win, "n={n} x={x:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quantum_strategy_wins_random_instances(n in 3usize..16, picks in proptest::collection::btree_set(0usize..16, 3), seed in any::<u64>()) {
        let cs: Vec<usize> = picks.into_iter().collect();
        prop_assume!(cs[2] < n);
        let contexts = cluster_contexts();
        for x in input_patterns() {
            let inst = GameInstance::with_corner_bits(n, [cs[0], cs[1], cs[2]], x).unwrap();
            let t = play_round(&inst, &contexts, seed).unwrap();
            prop_assert!(check_win(&inst, &t).unwrap().win);
        }
    }

    #[test]
    fn global_checks_hold_on_the_ring(n in 3usize..12, seed in any::<u64>()) {
        let contexts = cluster_contexts();
        let corners = [0, n / 3, 2 * n / 3];
        prop_assume!(corners[0] < corners[1] && corners[1] < corners[2]);
        for x in input_patterns() {
            let inst = GameInstance::with_corner_bits(n, corners, x).unwrap();
            let state = cluster_state(2 * n, seed).unwrap();
            for c in global_checks(&inst, &contexts).unwrap() {
                prop_assert_eq!(state.expectation(&c.operator).unwrap(), c.expected);
            }
        }
    }

    #[test]
    fn tableau_expectation_matches_state_vector(q in 4usize..9, letters in proptest::collection::vec(0u8..4, 8), seed in any::<u64>()) {
        prop_assume!(q % 2 == 0);
        let p = pauli_from(&letters[..q]);
        let state = cluster_state(q, seed).unwrap();
        let psi = state.state_vector();
        let dense = psi.dotc(&p.apply(&psi));
        let tab = state.expectation(&p).unwrap() as f64;
        prop_assert!((dense - linalg::r(tab)).norm() < 1e-10);
    }

    #[test]
    fn measurement_projects_onto_outcome(letters in proptest::collection::vec(0u8..4, 6), seed in any::<u64>()) {
        let p = pauli_from(&letters);
        prop_assume!(!p.is_identity_up_to_phase());
        let mut state = cluster_state(6, seed).unwrap();
        let m = state.measure(&p).unwrap();
        prop_assert_eq!(state.expectation(&p).unwrap(), m);
        prop_assert_eq!(state.measure(&p).unwrap(), m);
    }

    #[test]
    fn pauli_products_match_matrices(a in proptest::collection::vec(0u8..4, 3), b in proptest::collection::vec(0u8..4, 3)) {
        let (pa, pb) = (pauli_from(&a), pauli_from(&b));
        let lhs = pa.mul(&pb).to_matrix();
        let rhs = pa.to_matrix() * pb.to_matrix();
        prop_assert!(linalg::max_abs(&(lhs - rhs)) < 1e-12);
        prop_assert_eq!(pa.commutes(&pb), pa.mul(&pb) == pb.mul(&pa));
    }
}
