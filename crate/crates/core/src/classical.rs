//! Classical strategies: exhaustive deterministic search on the 3-player
//! triangle, the perfect strategy that needs nonlocal communication, and the
//! edge-restricted affine model.
//!
//! Shared randomness is never better than the best deterministic strategy (the
//! win probability is linear in the mixture), so only deterministic strategies
//! are searched.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SptoError};
use crate::game::{check_win, edge_sums, input_patterns, Edge, GameInstance, Transcript};

/// Five bits `(a, b, c, d, e)` packed as bits 0..5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct PlayerTable(pub u8);

impl PlayerTable {
    pub fn new(a: u8, b: u8, c: u8, d: u8, e: u8) -> PlayerTable {
        PlayerTable((a & 1) | (b & 1) << 1 | (c & 1) << 2 | (d & 1) << 3 | (e & 1) << 4)
    }

    pub fn bit(self, i: usize) -> u8 {
        (self.0 >> i) & 1
    }

    /// `y(0) = (a, b, c)`, `y(1) = (d, b, e)`.
    pub fn outputs(self, x: u8) -> [u8; 3] {
        if x == 0 {
            [self.bit(0), self.bit(1), self.bit(2)]
        } else {
            [self.bit(3), self.bit(1), self.bit(4)]
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PlayerJson {
    a: u8,
    b: u8,
    c: u8,
    d: u8,
    e: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub players: Vec<PlayerTable>,
}

impl DeterministicStrategy {
    pub fn zeros(n: usize) -> DeterministicStrategy {
        DeterministicStrategy {
            players: vec![PlayerTable(0); n],
        }
    }

    /// Decodes `index` as 5 bits per player, player 0 least significant.
    pub fn from_index(n: usize, index: u64) -> DeterministicStrategy {
        let players = (0..n)
            .map(|j| PlayerTable(((index >> (5 * j)) & 31) as u8))
            .collect();
        DeterministicStrategy { players }
    }

    pub fn transcript(&self, instance: &GameInstance) -> Transcript {
        let y = self
            .players
            .iter()
            .zip(&instance.x)
            .map(|(p, &x)| p.outputs(x))
            .collect();
        Transcript { y }
    }

    /// Number of the 8 corner inputs won on `instance`'s family.
    pub fn wins(&self, instance: &GameInstance) -> Result<u32> {
        let mut won = 0;
        for inst in instance.input_family() {
            if check_win(&inst, &self.transcript(&inst))?.win {
                won += 1;
            }
        }
        Ok(won)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let players: Vec<PlayerJson> = self
            .players
            .iter()
            .map(|p| PlayerJson {
                a: p.bit(0),
                b: p.bit(1),
                c: p.bit(2),
                d: p.bit(3),
                e: p.bit(4),
            })
            .collect();
        serde_json::json!({ "players": players })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalReport {
    /// Inputs won (out of 8) by the best strategy.
    pub won: u32,
    pub witness: DeterministicStrategy,
    /// Strategy evaluations performed (strategies x inputs).
    pub evaluations: u64,
    /// Number of strategies attaining `won`.
    pub optimal_count: u64,
}

impl ClassicalReport {
    pub fn max_win(&self) -> f64 {
        self.won as f64 / 8.0
    }

    pub fn max_win_fraction(&self) -> String {
        format!("{}/8", self.won)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "max_win": self.max_win_fraction(),
            "witness": self.witness.to_json_value(),
            "evaluations": self.evaluations,
        })
        .to_string()
    }
}

fn triangle_family() -> Vec<GameInstance> {
    input_patterns()
        .iter()
        .map(|&bits| GameInstance::with_corner_bits(3, [0, 1, 2], bits).expect("valid triangle"))
        .collect()
}

#[derive(Clone, Copy)]
struct Best {
    won: u32,
    first: u64,
    count: u64,
}

fn merge(a: Best, b: Best) -> Best {
    use std::cmp::Ordering::*;
    match a.won.cmp(&b.won) {
        Greater => a,
        Less => b,
        Equal => Best {
            won: a.won,
            first: a.first.min(b.first),
            count: a.count + b.count,
        },
    }
}

fn scan(family: &[GameInstance], range: std::ops::Range<u64>) -> Best {
    let mut best = Best {
        won: 0,
        first: u64::MAX,
        count: 0,
    };
    for idx in range {
        let s = DeterministicStrategy::from_index(3, idx);
        let won = family
            .iter()
            .filter(|inst| {
                check_win(inst, &s.transcript(inst))
                    .map(|v| v.win)
                    .unwrap_or(false)
            })
            .count() as u32;
        best = merge(
            best,
            Best {
                won,
                first: idx,
                count: 1,
            },
        );
    }
    best
}

/// Exhaustive search over all `32^3` deterministic strategies of the 3-player
/// game. Parallel over the last player's table; the witness is the lowest
/// strategy index attaining the optimum, so the result is schedule independent.
pub fn best_deterministic_triangle() -> ClassicalReport {
    let family = triangle_family();
    let best = (0..32u64)
        .into_par_iter()
        .map(|hi| scan(&family, hi << 10..(hi + 1) << 10))
        .reduce(
            || Best {
                won: 0,
                first: u64::MAX,
                count: 0,
            },
            merge,
        );
    report(best)
}

/// Same search on the calling thread only.
pub fn best_deterministic_triangle_sequential() -> ClassicalReport {
    report(scan(&triangle_family(), 0..1 << 15))
}

fn report(best: Best) -> ClassicalReport {
    ClassicalReport {
        won: best.won,
        witness: DeterministicStrategy::from_index(3, best.first),
        evaluations: (1u64 << 15) * 8,
        optimal_count: best.count,
    }
}

/// Perfect transcript when the edges may read the opposite corners:
/// `c_R = x_a + x_g`, `c_B = x_a + x_b`, `c_L = x_b + x_g` on the first
/// interior player of each edge, zeros elsewhere.
pub fn nonlocal_perfect_strategy(instance: &GameInstance, x: [u8; 3]) -> Result<Transcript> {
    instance.validate()?;
    let [xa, xb, xg] = x;
    let mut tr = Transcript::zeros(instance.n);
    for (edge, c) in [(Edge::R, xa ^ xg), (Edge::B, xa ^ xb), (Edge::L, xb ^ xg)] {
        let carrier = *instance
            .edge_players(edge)
            .first()
            .ok_or(SptoError::EdgeTooShort(edge.name()))?;
        tr.y[carrier][2] = c;
    }
    Ok(tr)
}

/// Affine form `c0 + c1 x_p + c2 x_q` in the two corners adjacent to an edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub constant: u8,
    pub coeffs: [u8; 2],
}

impl AffineForm {
    pub fn eval(self, xp: u8, xq: u8) -> u8 {
        self.constant ^ (self.coeffs[0] & xp) ^ (self.coeffs[1] & xq)
    }
}

/// Corner players use tables; each edge's collective slot sums are affine in
/// the two adjacent corner inputs only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineEdgeStrategy {
    pub corners: [PlayerTable; 3],
    /// `edges[E][slot]` for `E` in R, B, L order.
    pub edges: [[AffineForm; 3]; 3],
}

pub const AFFINE_VARIABLES: usize = 15 + 27;

impl AffineEdgeStrategy {
    /// Decodes a 42-bit vector: 15 corner bits then, per edge and slot,
    /// `(constant, coeff_p, coeff_q)`.
    pub fn from_bits(bits: u64) -> AffineEdgeStrategy {
        let corners = std::array::from_fn(|k| PlayerTable(((bits >> (5 * k)) & 31) as u8));
        let edges = std::array::from_fn(|e| {
            std::array::from_fn(|s| {
                let off = 15 + 9 * e + 3 * s;
                let b = |i: usize| ((bits >> (off + i)) & 1) as u8;
                AffineForm {
                    constant: b(0),
                    coeffs: [b(1), b(2)],
                }
            })
        });
        AffineEdgeStrategy { corners, edges }
    }

    /// Transcript on `instance` with the edge sums carried by the first interior
    /// player of each edge. Errors if an edge with a nonzero form is empty.
    pub fn transcript(&self, instance: &GameInstance) -> Result<Transcript> {
        let x = instance.corner_bits();
        let mut tr = Transcript::zeros(instance.n);
        for (k, &c) in instance.corners.iter().enumerate() {
            tr.y[c] = self.corners[k].outputs(x[k]);
        }
        for (e, edge) in Edge::ALL.iter().enumerate() {
            let [p, q] = edge.adjacent_corners();
            let outs: [u8; 3] = std::array::from_fn(|s| self.edges[e][s].eval(x[p], x[q]));
            match instance.edge_players(*edge).first() {
                Some(&j) => tr.y[j] = outs,
                None if outs == [0; 3] => {}
                None => return Err(SptoError::EdgeTooShort(edge.name())),
            }
        }
        Ok(tr)
    }
}

/// Residual bits of every linear win condition, one field per (input, equation);
/// an input is won iff all of its fields vanish.
/// Layout: bits 0..8 parity, 8..16 condition (I), 16/17 condition (II) slots 0/2,
/// 18/19/20 conditions (III)/(IV)/(V).
fn residuals(strategy: &AffineEdgeStrategy, instance: &GameInstance) -> Result<u32> {
    let mut r = 0u32;
    for (i, bits) in input_patterns().iter().enumerate() {
        let inst = GameInstance::with_corner_bits(instance.n, instance.corners, *bits)?;
        let tr = strategy.transcript(&inst)?;
        let [a, b, g] = inst.corners;
        let y = &tr.y;
        r |= (tr.parity() as u32) << i;
        r |= (tr.slot_sum(1) as u32) << (8 + i);
        let s0 = edge_sums(&inst, &tr, 0);
        let s2 = edge_sums(&inst, &tr, 2);
        match bits {
            [0, 0, 0] => {
                r |= (tr.slot_sum(0) as u32) << 16;
                r |= (tr.slot_sum(2) as u32) << 17;
            }
            [1, 1, 0] => {
                r |= ((y[a][0] ^ y[b][2] ^ y[g][0] ^ 1 ^ s2[0] ^ s0[1] ^ s0[2]) as u32) << 18
            }
            [0, 1, 1] => {
                r |= ((y[a][0] ^ y[b][0] ^ y[g][2] ^ 1 ^ s2[1] ^ s0[0] ^ s0[2]) as u32) << 19
            }
            [1, 0, 1] => {
                r |= ((y[a][2] ^ y[b][0] ^ y[g][0] ^ 1 ^ s2[2] ^ s0[0] ^ s0[1]) as u32) << 20
            }
            _ => {}
        }
    }
    Ok(r)
}

fn field_mask(input: usize) -> u32 {
    let mut m = 1 << input | 1 << (8 + input);
    match input {
        0 => m |= 1 << 16 | 1 << 17,
        6 => m |= 1 << 18,
        3 => m |= 1 << 19,
        5 => m |= 1 << 20,
        _ => {}
    }
    m
}

fn inputs_won(residual: u32) -> u32 {
    (0..8).filter(|&i| residual & field_mask(i) == 0).count() as u32
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineReport {
    pub won: u32,
    /// Residual vectors enumerated.
    pub evaluations: u64,
    /// Dimension of the space of reachable residuals.
    pub rank: u32,
    pub witness: AffineEdgeStrategy,
}

impl AffineReport {
    pub fn max_win(&self) -> f64 {
        self.won as f64 / 8.0
    }
}

/// Exact optimum of the edge-restricted affine model.
///
/// The residual of every win equation is an affine function of the 42 model
/// bits, so the set of reachable residual vectors is a coset of a subspace of
/// GF(2)^21. Enumerating that coset covers every strategy of the model.
pub fn best_edge_restricted_affine(n: usize, corners: [usize; 3]) -> Result<AffineReport> {
    let instance = GameInstance::with_corner_bits(n, corners, [0, 0, 0])?;
    let usable: Vec<usize> = (0..AFFINE_VARIABLES)
        .filter(|&v| v < 15 || !instance.edge_players(Edge::ALL[(v - 15) / 9]).is_empty())
        .collect();
    let base = residuals(&AffineEdgeStrategy::default(), &instance)?;
    // Basis of the linear part, remembering which model bits produce each vector.
    let mut basis: Vec<(u32, u64)> = Vec::new();
    for &v in &usable {
        let mut col = residuals(&AffineEdgeStrategy::from_bits(1 << v), &instance)? ^ base;
        let mut src = 1u64 << v;
        for &(b, bs) in &basis {
            if col ^ b < col {
                col ^= b;
                src ^= bs;
            }
        }
        if col != 0 {
            basis.push((col, src));
            basis.sort_by_key(|b| std::cmp::Reverse(b.0));
        }
    }
    let k = basis.len();
    let mut best = (inputs_won(base), 0u64);
    let mut current = (base, 0u64);
    // Gray-code walk over the coset.
    for step in 1u64..(1 << k) {
        let flip = step.trailing_zeros() as usize;
        current.0 ^= basis[flip].0;
        current.1 ^= basis[flip].1;
        let won = inputs_won(current.0);
        if won > best.0 {
            best = (won, current.1);
        }
    }
    Ok(AffineReport {
        won: best.0,
        evaluations: 1 << k,
        rank: k as u32,
        witness: AffineEdgeStrategy::from_bits(best.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_bound() {
        let r = best_deterministic_triangle();
        assert_eq!(r.won, 7);
        assert_eq!(r.max_win_fraction(), "7/8");
        assert!(r.optimal_count > 0);
        let tri = GameInstance::with_corner_bits(3, [0, 1, 2], [0, 0, 0]).unwrap();
        assert_eq!(r.witness.wins(&tri).unwrap(), 7);
        assert_eq!(r, best_deterministic_triangle_sequential());
    }

    #[test]
    fn zero_strategy_wins_at_least_half() {
        let tri = GameInstance::with_corner_bits(3, [0, 1, 2], [0, 0, 0]).unwrap();
        let won = DeterministicStrategy::zeros(3).wins(&tri).unwrap();
        // Only the three weight-2 inputs carry a right-hand side of 1.
        assert_eq!(won, 5);
    }

    #[test]
    fn nonlocal_examples() {
        let inst = GameInstance::with_corner_bits(6, [0, 2, 4], [1, 1, 1]).unwrap();
        let tr = nonlocal_perfect_strategy(&inst, [1, 1, 1]).unwrap();
        assert!(check_win(&inst, &tr).unwrap().win);
        let zero = nonlocal_perfect_strategy(&inst, [0, 0, 0]).unwrap();
        assert_eq!(zero, Transcript::zeros(6));
        let nine = GameInstance::with_corner_bits(9, [0, 3, 6], [0, 0, 0]).unwrap();
        for f in nine.input_family() {
            let tr = nonlocal_perfect_strategy(&f, f.corner_bits()).unwrap();
            assert!(check_win(&f, &tr).unwrap().win);
        }
    }

    #[test]
    fn nonlocal_needs_interior_players() {
        let inst = GameInstance::with_corner_bits(5, [0, 1, 3], [0, 0, 0]).unwrap();
        assert!(matches!(
            nonlocal_perfect_strategy(&inst, [0, 0, 0]),
            Err(SptoError::EdgeTooShort("R"))
        ));
    }

    #[test]
    fn restricted_affine_optimum() {
        let r = best_edge_restricted_affine(6, [0, 2, 4]).unwrap();
        assert_eq!(r.won, 7);
        let inst = GameInstance::with_corner_bits(6, [0, 2, 4], [0, 0, 0]).unwrap();
        let mut won = 0;
        for f in inst.input_family() {
            if check_win(&f, &r.witness.transcript(&f).unwrap())
                .unwrap()
                .win
            {
                won += 1;
            }
        }
        assert_eq!(won, 7);
    }

    #[test]
    fn restricted_zero_matches_deterministic_zero() {
        let inst = GameInstance::with_corner_bits(6, [0, 2, 4], [0, 0, 0]).unwrap();
        let mut won = 0;
        for f in inst.input_family() {
            let tr = AffineEdgeStrategy::default().transcript(&f).unwrap();
            won += check_win(&f, &tr).unwrap().win as u32;
        }
        assert_eq!(won, DeterministicStrategy::zeros(6).wins(&inst).unwrap());
    }

    #[test]
    fn restricted_model_on_triangle_is_deterministic_bound() {
        let r = best_edge_restricted_affine(3, [0, 1, 2]).unwrap();
        assert_eq!(r.won, 7);
    }
}
