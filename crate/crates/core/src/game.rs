//! Triangle game on a cycle of `n` players: instances, transcripts and the judge.
//!
//! Player `j` answers a three-bit string `y_j = (y0, y1, y2)`. With input 0 it
//! reads as `(a, b, c)`, with input 1 as `(d, b, e)`. Three corner players
//! `alpha < beta < gamma` may receive a 1; everyone else receives 0.
//!
//! Edges are the open cyclic intervals `R = (alpha, beta)`, `B = (beta, gamma)`
//! and `L = (gamma, alpha)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SptoError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameInstance {
    pub n: usize,
    pub corners: [usize; 3],
    pub x: Vec<u8>,
}

impl GameInstance {
    pub fn new(n: usize, corners: [usize; 3], x: Vec<u8>) -> Result<GameInstance> {
        let inst = GameInstance { n, corners, x };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance with the given corner inputs and zeros elsewhere.
    pub fn with_corner_bits(n: usize, corners: [usize; 3], bits: [u8; 3]) -> Result<GameInstance> {
        let mut x = vec![0u8; n];
        for (c, b) in corners.iter().zip(bits) {
            if *c < n {
                x[*c] = b;
            }
        }
        GameInstance::new(n, corners, x)
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b, g] = self.corners;
        if self.n < 3 {
            return Err(SptoError::InvalidInstance(format!(
                "need at least 3 players, got {}",
                self.n
            )));
        }
        if !(a < b && b < g && g < self.n) {
            return Err(SptoError::InvalidInstance(format!(
                "corners must satisfy 0 <= alpha < beta < gamma < n, got {:?} with n={}",
                self.corners, self.n
            )));
        }
        if self.x.len() != self.n {
            return Err(SptoError::InvalidInstance(format!(
                "x has {} bits, expected {}",
                self.x.len(),
                self.n
            )));
        }
        for (v, &bit) in self.x.iter().enumerate() {
            if bit > 1 {
                return Err(SptoError::InvalidInstance(format!(
                    "x[{v}] = {bit} is not a bit"
                )));
            }
            if bit == 1 && !self.corners.contains(&v) {
                return Err(SptoError::InvalidInstance(format!(
                    "x[{v}] = 1 on a non-corner player"
                )));
            }
        }
        Ok(())
    }

    pub fn corner_bits(&self) -> [u8; 3] {
        self.corners.map(|c| self.x[c])
    }

    /// The 8 instances differing only in the corner inputs, in order 000..111
    /// with `x_alpha` most significant.
    pub fn input_family(&self) -> Vec<GameInstance> {
        input_patterns()
            .into_iter()
            .map(|bits| {
                GameInstance::with_corner_bits(self.n, self.corners, bits)
                    .expect("corners already validated")
            })
            .collect()
    }

    /// Players strictly inside an edge, in cyclic order.
    pub fn edge_players(&self, edge: Edge) -> Vec<usize> {
        let [a, b, g] = self.corners;
        match edge {
            Edge::R => (a + 1..b).collect(),
            Edge::B => (b + 1..g).collect(),
            Edge::L => (g + 1..self.n).chain(0..a).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<GameInstance> {
        let inst: GameInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Corner input triples in order 000, 001, ..., 111 (`x_alpha` most significant).
pub fn input_patterns() -> [[u8; 3]; 8] {
    std::array::from_fn(|i| [(i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    R,
    B,
    L,
}

impl Edge {
    pub const ALL: [Edge; 3] = [Edge::R, Edge::B, Edge::L];

    pub fn name(self) -> &'static str {
        match self {
            Edge::R => "R",
            Edge::B => "B",
            Edge::L => "L",
        }
    }

    /// Indices (into the corner triple) of the two corners bounding the edge.
    pub fn adjacent_corners(self) -> [usize; 2] {
        match self {
            Edge::R => [0, 1],
            Edge::B => [1, 2],
            Edge::L => [2, 0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transcript {
    pub y: Vec<[u8; 3]>,
}

impl Transcript {
    pub fn zeros(n: usize) -> Transcript {
        Transcript { y: vec![[0; 3]; n] }
    }

    pub fn from_json(text: &str) -> Result<Transcript> {
        let t: Transcript = serde_json::from_str(text)?;
        if t.y.iter().flatten().any(|&b| b > 1) {
            return Err(SptoError::InvalidInstance(
                "transcript entries must be bits".into(),
            ));
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn parity(&self) -> u8 {
        self.y.iter().flatten().fold(0, |acc, b| acc ^ b)
    }

    pub fn slot_sum(&self, slot: usize) -> u8 {
        self.y.iter().fold(0, |acc, y| acc ^ y[slot])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    Parity,
    I,
    II,
    III,
    IV,
    V,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Parity => "parity",
            Condition::I => "I",
            Condition::II => "II",
            Condition::III => "III",
            Condition::IV => "IV",
            Condition::V => "V",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub win: bool,
    pub violated: Vec<Condition>,
}

/// Mod-2 sums of one output slot over the R, B and L edges.
pub fn edge_sums(instance: &GameInstance, transcript: &Transcript, slot: usize) -> [u8; 3] {
    Edge::ALL.map(|e| {
        instance
            .edge_players(e)
            .into_iter()
            .fold(0, |acc, j| acc ^ transcript.y[j][slot])
    })
}

pub fn check_win(instance: &GameInstance, transcript: &Transcript) -> Result<Verdict> {
    instance.validate()?;
    if transcript.y.len() != instance.n {
        return Err(SptoError::InvalidInstance(format!(
            "transcript has {} entries, instance has {} players",
            transcript.y.len(),
            instance.n
        )));
    }
    let mut violated = Vec::new();
    if transcript.parity() != 0 {
        violated.push(Condition::Parity);
    }
    if transcript.slot_sum(1) != 0 {
        violated.push(Condition::I);
    }
    let [a, b, g] = instance.corners;
    let y = &transcript.y;
    let s0 = edge_sums(instance, transcript, 0);
    let s2 = edge_sums(instance, transcript, 2);
    let (r, bl, l) = (0, 1, 2);
    match instance.corner_bits() {
        [0, 0, 0] => {
            if transcript.slot_sum(0) != 0 || transcript.slot_sum(2) != 0 {
                violated.push(Condition::II);
            }
        }
        [1, 1, 0] => {
            let lhs = y[a][0] ^ y[b][2] ^ y[g][0];
            if lhs != 1 ^ s2[r] ^ s0[bl] ^ s0[l] {
                violated.push(Condition::III);
            }
        }
        [0, 1, 1] => {
            let lhs = y[a][0] ^ y[b][0] ^ y[g][2];
            if lhs != 1 ^ s2[bl] ^ s0[r] ^ s0[l] {
                violated.push(Condition::IV);
            }
        }
        [1, 0, 1] => {
            let lhs = y[a][2] ^ y[b][0] ^ y[g][0];
            if lhs != 1 ^ s2[l] ^ s0[r] ^ s0[bl] {
                violated.push(Condition::V);
            }
        }
        _ => {}
    }
    Ok(Verdict {
        win: violated.is_empty(),
        violated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[[u8; 3]]) -> Transcript {
        Transcript { y: rows.to_vec() }
    }

    #[test]
    fn edge_sum_examples() {
        let inst = GameInstance::with_corner_bits(6, [0, 2, 4], [0, 0, 0]).unwrap();
        assert_eq!(edge_sums(&inst, &Transcript::zeros(6), 0), [0, 0, 0]);
        let mut tr = Transcript::zeros(6);
        tr.y[1][0] = 1;
        assert_eq!(edge_sums(&inst, &tr, 0), [1, 0, 0]);
        let tri = GameInstance::with_corner_bits(3, [0, 1, 2], [0, 0, 0]).unwrap();
        assert_eq!(
            edge_sums(&tri, &t(&[[1, 1, 1], [1, 0, 1], [0, 1, 1]]), 2),
            [0, 0, 0]
        );
    }

    #[test]
    fn wraparound_edge() {
        let inst = GameInstance::with_corner_bits(8, [2, 4, 6], [0, 0, 0]).unwrap();
        assert_eq!(inst.edge_players(Edge::L), vec![7, 0, 1]);
    }

    #[test]
    fn check_win_examples() {
        let zero = GameInstance::with_corner_bits(3, [0, 1, 2], [0, 0, 0]).unwrap();
        assert!(check_win(&zero, &Transcript::zeros(3)).unwrap().win);

        let inst = GameInstance::with_corner_bits(3, [0, 1, 2], [1, 1, 0]).unwrap();
        let v = check_win(&inst, &t(&[[1, 0, 1], [0, 0, 0], [0, 0, 0]])).unwrap();
        assert!(v.win, "{v:?}");

        let v = check_win(&zero, &t(&[[1, 0, 0], [0, 0, 0], [0, 0, 0]])).unwrap();
        assert!(!v.win);
        assert_eq!(v.violated, vec![Condition::Parity, Condition::II]);
    }

    #[test]
    fn invalid_instances() {
        assert!(GameInstance::new(3, [0, 0, 2], vec![0; 3]).is_err());
        assert!(GameInstance::new(4, [0, 1, 2], vec![0, 0, 0, 1]).is_err());
        assert!(GameInstance::new(2, [0, 1, 2], vec![0; 2]).is_err());
        assert!(GameInstance::from_json(r#"{"n":3,"corners":[0,1,2],"x":[1,0,2]}"#).is_err());
    }

    #[test]
    fn input_family_shape() {
        let inst = GameInstance::with_corner_bits(5, [0, 2, 4], [0, 0, 0]).unwrap();
        let fam = inst.input_family();
        assert_eq!(fam.len(), 8);
        for (i, f) in fam.iter().enumerate() {
            assert_eq!((f.n, f.corners), (5, [0, 2, 4]));
            assert_eq!(f.x[1], 0);
            assert_eq!(f.x[3], 0);
            assert_eq!(f.corner_bits(), input_patterns()[i]);
        }
    }

    #[test]
    fn json_round_trip() {
        let inst = GameInstance::with_corner_bits(4, [0, 1, 3], [1, 0, 1]).unwrap();
        assert_eq!(GameInstance::from_json(&inst.to_json()).unwrap(), inst);
        let tr = t(&[[1, 0, 1], [0, 1, 1]]);
        assert_eq!(tr.to_json(), r#"{"y":[[1,0,1],[0,1,1]]}"#);
        assert_eq!(Transcript::from_json(&tr.to_json()).unwrap(), tr);
    }
}
