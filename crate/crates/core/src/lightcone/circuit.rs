//! Layered Boolean circuits with bounded fan-in.
//!
//! Wires `0..inputs` carry the per-vertex inputs `x_v`, wires
//! `inputs..inputs + random` carry random bits fixed by an evaluation seed, and
//! every gate defines one new wire. Truth tables are indexed with the first
//! input as the most significant bit.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SptoError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub out: usize,
    pub ins: Vec<usize>,
    pub table: Vec<u8>,
}

impl Gate {
    pub fn new(out: usize, ins: Vec<usize>, table: Vec<u8>) -> Gate {
        Gate { out, ins, table }
    }

    pub fn constant(out: usize, bit: u8) -> Gate {
        Gate::new(out, vec![], vec![bit])
    }

    pub fn copy(out: usize, wire: usize) -> Gate {
        Gate::new(out, vec![wire], vec![0, 1])
    }

    pub fn xor(out: usize, ins: Vec<usize>) -> Gate {
        let table = (0..1usize << ins.len())
            .map(|i| (i.count_ones() & 1) as u8)
            .collect();
        Gate::new(out, ins, table)
    }

    pub fn and(out: usize, a: usize, b: usize) -> Gate {
        Gate::new(out, vec![a, b], vec![0, 0, 0, 1])
    }

    fn apply(&self, values: &[u8]) -> u8 {
        let idx = self
            .ins
            .iter()
            .fold(0usize, |acc, &w| (acc << 1) | values[w] as usize);
        self.table[idx]
    }
}

/// One output bit: slot `slot` of the answer at `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OutputBit {
    pub vertex: usize,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanCircuit {
    #[serde(rename = "K")]
    pub k: usize,
    pub inputs: usize,
    #[serde(default)]
    pub random: usize,
    pub layers: Vec<Vec<Gate>>,
    /// Answer wires per vertex; vertices not listed answer `000`.
    pub outputs: BTreeMap<usize, [usize; 3]>,
}

impl BooleanCircuit {
    pub fn from_json(text: &str) -> Result<BooleanCircuit> {
        let c: BooleanCircuit = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn source_wires(&self) -> usize {
        self.inputs + self.random
    }

    pub fn wire_count(&self) -> usize {
        self.source_wires() + self.layers.iter().map(Vec::len).sum::<usize>()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Largest fan-in actually used.
    pub fn max_fan_in(&self) -> usize {
        self.layers
            .iter()
            .flatten()
            .map(|g| g.ins.len())
            .max()
            .unwrap_or(0)
    }

    /// Checks fan-in, truth-table sizes, and that gates only read wires from
    /// earlier layers. Gate outputs must be numbered `source_wires()..wire_count()`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SptoError::InvalidCircuit(msg));
        let total = self.wire_count();
        let mut defined = vec![false; total];
        defined[..self.source_wires()].fill(true);
        for (li, layer) in self.layers.iter().enumerate() {
            for g in layer {
                if g.ins.len() > self.k {
                    return bad(format!(
                        "gate {} in layer {li} has fan-in {} > K = {}",
                        g.out,
                        g.ins.len(),
                        self.k
                    ));
                }
                if g.table.len() != 1 << g.ins.len() {
                    return bad(format!(
                        "gate {} has a table of {} entries for {} inputs",
                        g.out,
                        g.table.len(),
                        g.ins.len()
                    ));
                }
                if g.table.iter().any(|&b| b > 1) {
                    return bad(format!("gate {} has a non-bit table entry", g.out));
                }
                for &w in &g.ins {
                    if w >= total || !defined[w] {
                        return bad(format!(
                            "gate {} in layer {li} reads wire {w} before it is defined",
                            g.out
                        ));
                    }
                }
            }
            for g in layer {
                if g.out < self.source_wires() || g.out >= total || defined[g.out] {
                    return bad(format!(
                        "gate output wire {} is out of range or defined twice",
                        g.out
                    ));
                }
                defined[g.out] = true;
            }
        }
        for (v, ws) in &self.outputs {
            if *v >= self.inputs {
                return bad(format!("output vertex {v} has no input wire"));
            }
            if let Some(w) = ws.iter().find(|&&w| w >= total) {
                return bad(format!("output of vertex {v} refers to unknown wire {w}"));
            }
        }
        Ok(())
    }

    /// Random-wire values for an evaluation seed.
    pub fn random_bits(&self, seed: u64) -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.random).map(|_| rng.random_range(0..2u8)).collect()
    }

    /// All wire values. `x` must have one bit per input wire.
    pub fn wire_values(&self, x: &[u8], seed: u64) -> Result<Vec<u8>> {
        if x.len() < self.inputs {
            return Err(SptoError::MissingInput(x.len()));
        }
        let mut values = vec![0u8; self.wire_count()];
        values[..self.inputs].copy_from_slice(&x[..self.inputs]);
        values[self.inputs..self.source_wires()].copy_from_slice(&self.random_bits(seed));
        for layer in &self.layers {
            for g in layer {
                values[g.out] = g.apply(&values);
            }
        }
        Ok(values)
    }

    /// Answers `(y0, y1, y2)` for every vertex.
    pub fn evaluate(&self, x: &[u8], seed: u64) -> Result<Vec<[u8; 3]>> {
        let values = self.wire_values(x, seed)?;
        let mut out = vec![[0u8; 3]; self.inputs];
        for (v, ws) in &self.outputs {
            out[*v] = ws.map(|w| values[w]);
        }
        Ok(out)
    }

    fn output_readers(&self) -> BTreeMap<usize, Vec<OutputBit>> {
        let mut readers: BTreeMap<usize, Vec<OutputBit>> = BTreeMap::new();
        for (&vertex, ws) in &self.outputs {
            for (slot, &w) in ws.iter().enumerate() {
                readers
                    .entry(w)
                    .or_default()
                    .push(OutputBit { vertex, slot });
            }
        }
        readers
    }

    fn consumers(&self) -> Vec<Vec<usize>> {
        let mut consumers = vec![Vec::new(); self.wire_count()];
        for g in self.layers.iter().flatten() {
            for &w in &g.ins {
                consumers[w].push(g.out);
            }
        }
        consumers
    }

    /// Output bits reachable from `wire`.
    pub fn forward_cone(&self, wire: usize) -> BTreeSet<OutputBit> {
        let consumers = self.consumers();
        let readers = self.output_readers();
        forward_from(&consumers, &readers, wire)
    }

    /// Source wires (inputs and random wires) that `bit` depends on.
    pub fn backward_cone(&self, bit: OutputBit) -> BTreeSet<usize> {
        let Some(ws) = self.outputs.get(&bit.vertex) else {
            return BTreeSet::new();
        };
        let producers: BTreeMap<usize, &Gate> =
            self.layers.iter().flatten().map(|g| (g.out, g)).collect();
        let mut seen = BTreeSet::new();
        let mut sources = BTreeSet::new();
        let mut stack = vec![ws[bit.slot]];
        while let Some(w) = stack.pop() {
            if !seen.insert(w) {
                continue;
            }
            match producers.get(&w) {
                Some(g) => stack.extend(&g.ins),
                None => {
                    sources.insert(w);
                }
            }
        }
        sources
    }

    /// `(max |L^-(y)|, bound K^D)` over all output bits.
    pub fn backward_cone_stats(&self) -> (usize, u128) {
        let index = ConeIndex::new(self);
        let max = self
            .output_bits()
            .map(|b| index.backward[self.outputs[&b.vertex][b.slot]].count_ones(..))
            .max()
            .unwrap_or(0);
        (max, (self.k as u128).saturating_pow(self.depth() as u32))
    }

    pub fn output_bits(&self) -> impl Iterator<Item = OutputBit> + '_ {
        self.outputs
            .keys()
            .flat_map(|&vertex| (0..3).map(move |slot| OutputBit { vertex, slot }))
    }

    /// Number of input wires whose forward cone holds at least `threshold` output bits.
    pub fn big_input_count(&self, threshold: usize) -> usize {
        let index = ConeIndex::new(self);
        (0..self.inputs)
            .filter(|&i| index.forward[i].count_ones(..) >= threshold)
            .count()
    }
}

fn forward_from(
    consumers: &[Vec<usize>],
    readers: &BTreeMap<usize, Vec<OutputBit>>,
    wire: usize,
) -> BTreeSet<OutputBit> {
    let mut seen = vec![false; consumers.len()];
    let mut queue = VecDeque::from([wire]);
    let mut out = BTreeSet::new();
    while let Some(w) = queue.pop_front() {
        if w >= seen.len() || seen[w] {
            continue;
        }
        seen[w] = true;
        if let Some(r) = readers.get(&w) {
            out.extend(r.iter().copied());
        }
        queue.extend(&consumers[w]);
    }
    out
}

/// Forward cones of every vertex input, as bitsets over output bits
/// `3 * vertex + slot`, and backward cones of every wire over source wires.
#[derive(Clone, Debug)]
pub struct ConeIndex {
    pub forward: Vec<FixedBitSet>,
    pub backward: Vec<FixedBitSet>,
}

impl ConeIndex {
    pub fn new(c: &BooleanCircuit) -> ConeIndex {
        let sources = c.source_wires();
        let mut backward: Vec<FixedBitSet> = (0..c.wire_count())
            .map(|_| FixedBitSet::with_capacity(sources))
            .collect();
        for (w, set) in backward.iter_mut().enumerate().take(sources) {
            set.insert(w);
        }
        for g in c.layers.iter().flatten() {
            let mut acc = FixedBitSet::with_capacity(sources);
            for &w in &g.ins {
                acc.union_with(&backward[w]);
            }
            backward[g.out] = acc;
        }
        let mut forward: Vec<FixedBitSet> = (0..c.inputs)
            .map(|_| FixedBitSet::with_capacity(3 * c.inputs))
            .collect();
        for (&v, ws) in &c.outputs {
            for (slot, &w) in ws.iter().enumerate() {
                for i in backward[w].ones().filter(|&i| i < c.inputs) {
                    forward[i].insert(3 * v + slot);
                }
            }
        }
        ConeIndex { forward, backward }
    }

    /// Whether the forward cone of input `i` touches any answer bit of `vertex`.
    pub fn reaches_vertex(&self, i: usize, vertex: usize) -> bool {
        (0..3).any(|s| self.forward[i].contains(3 * vertex + s))
    }
}

/// Random layered circuit: every gate reads `k` distinct wires of the previous
/// layer (the inputs for the first layer) and has a random truth table. Every
/// one of the `inputs` vertices gets three answer wires from the last layer.
pub fn random_layered_circuit(
    inputs: usize,
    k: usize,
    depth: usize,
    width: usize,
    seed: u64,
) -> Result<BooleanCircuit> {
    if k == 0 || depth == 0 || inputs < k || width < k {
        return Err(SptoError::InvalidCircuit(format!(
            "need K >= 1, depth >= 1 and at least K wires per layer (K={k}, depth={depth}, inputs={inputs}, width={width})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prev: Vec<usize> = (0..inputs).collect();
    let mut next_wire = inputs;
    let mut layers = Vec::with_capacity(depth);
    for _ in 0..depth {
        let mut layer = Vec::with_capacity(width);
        for _ in 0..width {
            let ins = rand::seq::index::sample(&mut rng, prev.len(), k)
                .iter()
                .map(|i| prev[i])
                .collect();
            let table = (0..1 << k).map(|_| rng.random_range(0..2u8)).collect();
            layer.push(Gate::new(next_wire, ins, table));
            next_wire += 1;
        }
        prev = layer.iter().map(|g| g.out).collect();
        layers.push(layer);
    }
    let outputs = (0..inputs)
        .map(|v| {
            (
                v,
                std::array::from_fn(|_| prev[rng.random_range(0..prev.len())]),
            )
        })
        .collect();
    let c = BooleanCircuit {
        k,
        inputs,
        random: 0,
        layers,
        outputs,
    };
    c.validate()?;
    Ok(c)
}

/// Complete `k`-ary tree of the given depth over `k^depth` inputs whose root
/// is the `y0` answer of vertex 0.
pub fn tree_circuit(k: usize, depth: usize) -> Result<BooleanCircuit> {
    let inputs = k
        .checked_pow(depth as u32)
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            SptoError::InvalidCircuit(format!("tree of arity {k} and depth {depth} is too large"))
        })?;
    let mut prev: Vec<usize> = (0..inputs).collect();
    let mut next_wire = inputs;
    let mut layers = Vec::new();
    for _ in 0..depth {
        let layer: Vec<Gate> = prev
            .chunks(k)
            .map(|ch| {
                next_wire += 1;
                Gate::xor(next_wire - 1, ch.to_vec())
            })
            .collect();
        prev = layer.iter().map(|g| g.out).collect();
        layers.push(layer);
    }
    let root = prev[0];
    let c = BooleanCircuit {
        k,
        inputs,
        random: 0,
        layers,
        outputs: BTreeMap::from([(0, [root, root, root])]),
    };
    c.validate()?;
    Ok(c)
}
