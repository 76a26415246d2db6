use proptest::prelude::*;
use spto::classical::*;
use spto::game::{check_win, input_patterns, GameInstance, Transcript};

fn instance_strategy() -> impl Strategy<Value = (usize, [usize; 3])> {
    (3usize..14).prop_flat_map(|n| {
        proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3)
            .prop_map(move |c| (n, [c[0], c[1], c[2]]))
    })
}

fn wins(instance: &GameInstance, f: impl Fn(&GameInstance) -> Transcript) -> usize {
    instance
        .input_family()
        .iter()
        .filter(|i| check_win(i, &f(i)).unwrap().win)
        .count()
}

#[test]
fn triangle_search_agrees_with_sequential() {
    let par = best_deterministic_triangle();
    let seq = best_deterministic_triangle_sequential();
    assert_eq!(par, seq);
    assert_eq!(par.won, 7);
    assert_eq!(par.evaluations, 32768 * 8);
}

#[test]
fn triangle_witness_wins_seven_inputs() {
    let best = best_deterministic_triangle();
    let inst = GameInstance::with_corner_bits(3, [0, 1, 2], [0; 3]).unwrap();
    assert_eq!(wins(&inst, |i| best.witness.transcript(i)), 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn local_tables_never_beat_seven_eighths((n, corners) in instance_strategy(), bits in proptest::collection::vec(0u8..32, 14)) {
        let s = DeterministicStrategy { players: (0..n).map(|j| PlayerTable(bits[j])).collect() };
        let inst = GameInstance::with_corner_bits(n, corners, [0; 3]).unwrap();
        prop_assert!(wins(&inst, |i| s.transcript(i)) <= 7);
    }

    #[test]
    fn restricted_affine_never_beats_seven_eighths((n, corners) in instance_strategy(), bits in any::<u64>()) {
        let s = AffineEdgeStrategy::from_bits(bits);
        let inst = GameInstance::with_corner_bits(n, corners, [0; 3]).unwrap();
        // Forms on an edge without interior players cannot be realized.
        prop_assume!(inst.input_family().iter().all(|i| s.transcript(i).is_ok()));
        prop_assert!(wins(&inst, |i| s.transcript(i).unwrap()) <= 7);
    }

    #[test]
    fn nonlocal_strategy_is_perfect((n, corners) in instance_strategy()) {
        let has_interior = corners[1] > corners[0] + 1 && corners[2] > corners[1] + 1
            && (corners[0] > 0 || corners[2] < n - 1);
        for x in input_patterns() {
            let i = GameInstance::with_corner_bits(n, corners, x).unwrap();
            match nonlocal_perfect_strategy(&i, x) {
                Ok(t) => prop_assert!(check_win(&i, &t).unwrap().win),
                Err(_) => prop_assert!(!has_interior),
            }
        }
    }
}

#[test]
fn restricted_affine_optimum_is_seven_eighths_on_many_instances() {
    for (n, corners) in [
        (3, [0, 1, 2]),
        (6, [0, 2, 4]),
        (7, [1, 3, 6]),
        (12, [0, 5, 9]),
    ] {
        let r = best_edge_restricted_affine(n, corners).unwrap();
        assert_eq!(r.won, 7, "n={n}");
        let inst = GameInstance::with_corner_bits(n, corners, [0; 3]).unwrap();
        assert_eq!(wins(&inst, |i| r.witness.transcript(i).unwrap()), 7);
    }
}
