//! Quantum strategy on the cluster ring: contexts, string operators and rounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pauli::PauliString;
use super::tableau::{cluster_state, StabilizerTableau};
use crate::error::{Result, SptoError};
use crate::game::{Condition, GameInstance, Transcript};
use crate::group::GroupElement;

/// Qubits per player.
pub const BLOCK: usize = 2;

/// On-site symmetry `u` and boundary operators `V^L`, `V^R` for every element of
/// Z2 x Z2, indexed by `GroupElement::index`.
#[derive(Clone, Debug)]
pub struct SiteOperators {
    pub u: [PauliString; 4],
    pub vl: [PauliString; 4],
    pub vr: [PauliString; 4],
}

/// `X^a Z^b`-style products on one qubit, written left to right.
fn word(factors: &[(char, u32)]) -> PauliString {
    factors
        .iter()
        .fold(PauliString::identity(1), |acc, &(ch, pow)| {
            if pow % 2 == 1 {
                acc.mul(&PauliString::single(1, 0, ch))
            } else {
                acc
            }
        })
}

impl SiteOperators {
    /// Cluster-state operators: `u(a,b) = X^a ⊗ X^b`,
    /// `V^R(a,b) = Z^b X^a ⊗ Z^a`, `V^L(a,b) = Z^b ⊗ Z^a X^b`.
    pub fn cluster() -> SiteOperators {
        let u = std::array::from_fn(|i| {
            let (a, b) = ((i >> 1) as u32, (i & 1) as u32);
            word(&[('X', a)]).tensor(&word(&[('X', b)]))
        });
        let vr = std::array::from_fn(|i| {
            let (a, b) = ((i >> 1) as u32, (i & 1) as u32);
            word(&[('Z', b), ('X', a)]).tensor(&word(&[('Z', a)]))
        });
        let vl = std::array::from_fn(|i| {
            let (a, b) = ((i >> 1) as u32, (i & 1) as u32);
            word(&[('Z', b)]).tensor(&word(&[('Z', a), ('X', b)]))
        });
        SiteOperators { u, vl, vr }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Row,
    Column,
}

/// Three commuting observables on one player's block, one per output slot.
#[derive(Clone, Debug)]
pub struct MeasurementContext {
    pub orientation: Orientation,
    pub operators: [PauliString; 3],
}

impl MeasurementContext {
    pub fn product(&self) -> PauliString {
        self.operators[0]
            .mul(&self.operators[1])
            .mul(&self.operators[2])
    }
}

/// The row and column contexts shared by all players.
#[derive(Clone, Debug)]
pub struct ContextPair {
    pub row: MeasurementContext,
    pub column: MeasurementContext,
}

impl ContextPair {
    pub fn for_input(&self, bit: u8) -> &MeasurementContext {
        if bit == 1 {
            &self.column
        } else {
            &self.row
        }
    }
}

/// Multiplies a non-Hermitian Pauli by `i` so it becomes Hermitian; returns the
/// factor's exponent.
fn hermitian_factor(p: &PauliString) -> u8 {
    if p.is_hermitian() {
        0
    } else {
        1
    }
}

/// Twist phase `Omega(g, h)` read off from commuting `V^R(g)` past `V^R(h)`.
pub fn twist_sign(ops: &SiteOperators, g: &GroupElement, h: &GroupElement) -> i8 {
    if ops.vr[g.index()].commutes(&ops.vr[h.index()]) {
        1
    } else {
        -1
    }
}

/// Row `[u(h), u(g), u(gh)]` and column `[u(h)V^L(g), u(g), V^R(g)u(h)]`.
/// Column entries are rescaled by `i` and `-i` when needed to make them
/// Hermitian; the product of the context is unchanged.
pub fn build_contexts(
    g: &GroupElement,
    h: &GroupElement,
    ops: &SiteOperators,
) -> Result<ContextPair> {
    for x in [g, h] {
        if x.group.moduli != [2, 2] {
            return Err(SptoError::GroupMismatch(x.group.moduli.clone(), vec![2, 2]));
        }
    }
    if twist_sign(ops, g, h) != -1 {
        return Err(SptoError::ContextsUndefined(format!(
            "twist phase of ({:?}, {:?}) is +1",
            g.components, h.components
        )));
    }
    let (gi, hi) = (g.index(), h.index());
    let gh = g.multiply(h)?.index();
    let row = MeasurementContext {
        orientation: Orientation::Row,
        operators: [ops.u[hi].clone(), ops.u[gi].clone(), ops.u[gh].clone()],
    };
    let d = ops.u[hi].mul(&ops.vl[gi]);
    let e = ops.vr[gi].mul(&ops.u[hi]);
    let k = hermitian_factor(&d);
    let column = MeasurementContext {
        orientation: Orientation::Column,
        operators: [d.scale(k), ops.u[gi].clone(), e.scale((4 - k) % 4)],
    };
    for ctx in [&row, &column] {
        for a in &ctx.operators {
            if !a.is_hermitian() {
                return Err(SptoError::ContextsUndefined(format!(
                    "{a} is not Hermitian"
                )));
            }
            for b in &ctx.operators {
                if !a.commutes(b) {
                    return Err(SptoError::ContextsUndefined(format!(
                        "{a} and {b} anticommute"
                    )));
                }
            }
        }
        let prod = ctx.product();
        if !prod.is_identity_up_to_phase() || prod.phase() != 0 {
            return Err(SptoError::ContextsUndefined(format!(
                "{:?} product is {prod}",
                ctx.orientation
            )));
        }
    }
    Ok(ContextPair { row, column })
}

/// The standard pair `g = (0,1)`, `h = (1,0)` on cluster operators.
pub fn cluster_contexts() -> ContextPair {
    build_contexts(
        &GroupElement::z2z2(0, 1),
        &GroupElement::z2z2(1, 0),
        &SiteOperators::cluster(),
    )
    .expect("cluster contexts are well defined")
}

/// Places one block operator on player `j` of an `n`-player ring.
fn on_player(n: usize, j: usize, op: &PauliString) -> PauliString {
    op.embed(BLOCK * n, BLOCK * j)
}

fn players_between(n: usize, j: usize, k: usize) -> impl Iterator<Item = usize> {
    let len = (k + n - j) % n;
    (1..len).map(move |s| (j + s) % n)
}

/// `V^L_j(g) U_(j,k)(g) V^R_k(g)`: symmetry on the players strictly between
/// `j` and `k` (clockwise), capped by boundary operators.
pub fn string_operator(
    n: usize,
    j: usize,
    k: usize,
    g: &GroupElement,
    ops: &SiteOperators,
) -> PauliString {
    let gi = g.index();
    let mut out = on_player(n, j, &ops.vl[gi]).mul(&on_player(n, k, &ops.vr[gi]));
    for p in players_between(n, j, k) {
        out = out.mul(&on_player(n, p, &ops.u[gi]));
    }
    out
}

/// `V^R_k(g) U(h) V^L_j(g) U_(j,k)(g)`.
pub fn twisted_string_operator(
    n: usize,
    j: usize,
    k: usize,
    g: &GroupElement,
    h: &GroupElement,
    ops: &SiteOperators,
) -> PauliString {
    let (gi, hi) = (g.index(), h.index());
    let mut global_h = PauliString::identity(BLOCK * n);
    for p in 0..n {
        global_h = global_h.mul(&on_player(n, p, &ops.u[hi]));
    }
    let mut sym = PauliString::identity(BLOCK * n);
    for p in players_between(n, j, k) {
        sym = sym.mul(&on_player(n, p, &ops.u[gi]));
    }
    on_player(n, k, &ops.vr[gi])
        .mul(&global_h)
        .mul(&on_player(n, j, &ops.vl[gi]))
        .mul(&sym)
}

/// Global operator whose outcome the judge reads for one win condition, with
/// the sign the cluster state must produce.
#[derive(Clone, Debug)]
pub struct GlobalCheck {
    pub condition: Condition,
    pub label: &'static str,
    pub operator: PauliString,
    pub expected: i8,
}

/// Products of context operators matching conditions (I), (II) and (III)-(V).
/// Condition (II) splits into one product per constrained slot.
pub fn global_checks(instance: &GameInstance, contexts: &ContextPair) -> Result<Vec<GlobalCheck>> {
    instance.validate()?;
    let n = instance.n;
    let [a, b, g] = instance.corners;
    let product = |bits: [u8; 3], pick: &dyn Fn(usize, &MeasurementContext) -> Vec<usize>| {
        let inst =
            GameInstance::with_corner_bits(n, instance.corners, bits).expect("validated corners");
        let mut out = PauliString::identity(BLOCK * n);
        for p in 0..n {
            let ctx = contexts.for_input(inst.x[p]);
            for slot in pick(p, ctx) {
                out = out.mul(&on_player(n, p, &ctx.operators[slot]));
            }
        }
        out
    };
    let in_edge = |p: usize, lo: usize, hi: usize| players_between(n, lo, hi).any(|q| q == p);
    let twisted = |bits: [u8; 3], start: usize, end: usize| {
        product(bits, &|p, _| {
            if p != start && (p == end || in_edge(p, start, end)) {
                vec![2]
            } else {
                vec![0]
            }
        })
    };
    Ok(vec![
        GlobalCheck {
            condition: Condition::I,
            label: "I",
            operator: product([0, 0, 0], &|_, _| vec![1]),
            expected: 1,
        },
        GlobalCheck {
            condition: Condition::II,
            label: "II.0",
            operator: product([0, 0, 0], &|_, _| vec![0]),
            expected: 1,
        },
        GlobalCheck {
            condition: Condition::II,
            label: "II.2",
            operator: product([0, 0, 0], &|_, _| vec![2]),
            expected: 1,
        },
        GlobalCheck {
            condition: Condition::III,
            label: "III",
            operator: twisted([1, 1, 0], a, b),
            expected: -1,
        },
        GlobalCheck {
            condition: Condition::IV,
            label: "IV",
            operator: twisted([0, 1, 1], b, g),
            expected: -1,
        },
        GlobalCheck {
            condition: Condition::V,
            label: "V",
            operator: twisted([1, 0, 1], g, a),
            expected: -1,
        },
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub player: usize,
    pub slot: usize,
    pub operator: String,
    pub outcome: i8,
}

/// One round: every player measures its context on a fresh cluster ring, in
/// ascending player and slot order. Outcome `(-1)^bit`.
pub fn play_round(
    instance: &GameInstance,
    contexts: &ContextPair,
    seed: u64,
) -> Result<Transcript> {
    play_round_traced(instance, contexts, seed).map(|(t, _)| t)
}

pub fn play_round_traced(
    instance: &GameInstance,
    contexts: &ContextPair,
    seed: u64,
) -> Result<(Transcript, Vec<TraceEntry>)> {
    instance.validate()?;
    let n = instance.n;
    let mut state: StabilizerTableau = cluster_state(BLOCK * n, seed)?;
    let mut transcript = Transcript::zeros(n);
    let mut trace = Vec::with_capacity(3 * n);
    for p in 0..n {
        let ctx = contexts.for_input(instance.x[p]);
        for (slot, op) in ctx.operators.iter().enumerate() {
            let global = on_player(n, p, op);
            let outcome = state.measure(&global)?;
            transcript.y[p][slot] = ((1 - outcome) / 2) as u8;
            trace.push(TraceEntry {
                player: p,
                slot,
                operator: global.to_string(),
                outcome,
            });
        }
    }
    log::trace!("round seed={seed} transcript={}", transcript.to_json());
    Ok((transcript, trace))
}

/// Independent rounds in parallel, one per seed, results in seed order.
pub fn play_rounds(
    instance: &GameInstance,
    contexts: &ContextPair,
    seeds: &[u64],
) -> Result<Vec<Transcript>> {
    seeds
        .par_iter()
        .map(|&s| play_round(instance, contexts, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::check_win;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn pauli_pair(first: &str, second: &str) -> PauliString {
        p(first).tensor(&p(second))
    }

    fn g() -> GroupElement {
        GroupElement::z2z2(0, 1)
    }

    fn h() -> GroupElement {
        GroupElement::z2z2(1, 0)
    }

    #[test]
    fn cluster_operator_table() {
        let ops = SiteOperators::cluster();
        assert_eq!(ops.u[g().index()], p("IX"));
        assert_eq!(ops.u[h().index()], p("XI"));
        assert_eq!(ops.vl[g().index()], p("ZX"));
        assert_eq!(ops.vr[g().index()], p("ZI"));
        assert_eq!(ops.u[3], pauli_pair("X", "X"));
    }

    #[test]
    fn contexts_for_standard_pair() {
        let c = cluster_contexts();
        assert_eq!(c.row.operators, [p("XI"), p("IX"), p("XX")]);
        let ops = SiteOperators::cluster();
        let d = ops.u[h().index()].mul(&ops.vl[g().index()]);
        let e = ops.vr[g().index()].mul(&ops.u[h().index()]);
        assert_eq!(d, p("-iYX"));
        assert_eq!(e, p("iYI"));
        assert_eq!(c.column.operators, [p("YX"), p("IX"), p("YI")]);
        assert_eq!(c.row.product(), p("II"));
        assert_eq!(c.column.product(), p("II"));
    }

    #[test]
    fn commuting_pair_is_rejected() {
        let r = build_contexts(&g(), &g(), &SiteOperators::cluster());
        assert!(matches!(r, Err(SptoError::ContextsUndefined(_))));
    }

    #[test]
    fn string_and_twisted_string_on_cluster6() {
        let ops = SiteOperators::cluster();
        let state = cluster_state(6, 0).unwrap();
        let s = string_operator(3, 0, 1, &g(), &ops);
        assert_eq!(state.expectation(&s).unwrap(), 1);
        let t = twisted_string_operator(3, 0, 1, &g(), &h(), &ops);
        assert_eq!(t, p("YXYIXI"));
        assert_eq!(state.expectation(&t).unwrap(), -1);
        assert_eq!(state.expectation(&PauliString::identity(6)).unwrap(), 1);
    }

    #[test]
    fn global_checks_have_expected_signs() {
        let c = cluster_contexts();
        for (n, corners) in [(3, [0, 1, 2]), (10, [0, 4, 7]), (7, [1, 3, 6])] {
            let inst = GameInstance::with_corner_bits(n, corners, [0, 0, 0]).unwrap();
            let state = cluster_state(2 * n, 0).unwrap();
            let checks = global_checks(&inst, &c).unwrap();
            let signs: Vec<i8> = checks.iter().map(|k| k.expected).collect();
            assert_eq!(signs, vec![1, 1, 1, -1, -1, -1]);
            for k in checks {
                assert_eq!(
                    state.expectation(&k.operator).unwrap(),
                    k.expected,
                    "{} on n={n}",
                    k.label
                );
            }
        }
    }

    #[test]
    fn rounds_win_on_small_triangle() {
        let c = cluster_contexts();
        for bits in crate::game::input_patterns() {
            let inst = GameInstance::with_corner_bits(3, [0, 1, 2], bits).unwrap();
            for seed in 0..20 {
                let t = play_round(&inst, &c, seed).unwrap();
                assert!(check_win(&inst, &t).unwrap().win, "{bits:?} seed {seed}");
            }
        }
    }

    #[test]
    fn ten_player_rounds() {
        let c = cluster_contexts();
        let base = GameInstance::with_corner_bits(10, [0, 4, 7], [0, 0, 0]).unwrap();
        let seeds: Vec<u64> = (0..100).collect();
        let mut wins = 0;
        for inst in base.input_family() {
            for t in play_rounds(&inst, &c, &seeds).unwrap() {
                wins += check_win(&inst, &t).unwrap().win as usize;
            }
        }
        assert_eq!(wins, 800);
    }

    #[test]
    fn traced_round_repeats() {
        let c = cluster_contexts();
        let inst = GameInstance::with_corner_bits(5, [0, 2, 4], [1, 1, 0]).unwrap();
        let (t1, tr1) = play_round_traced(&inst, &c, 9).unwrap();
        let (t2, tr2) = play_round_traced(&inst, &c, 9).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(tr1, tr2);
        assert_eq!(tr1.len(), 15);
    }
}
