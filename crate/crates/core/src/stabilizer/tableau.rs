use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pauli::PauliString;
use crate::error::{Result, SptoError};
use crate::linalg::{self, CVec};

/// Aaronson-Gottesman tableau: rows `0..q` are destabilizers, `q..2q` stabilizers.
#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    q: usize,
    rows: Vec<PauliString>,
    rng: ChaCha8Rng,
}

impl StabilizerTableau {
    /// `|0...0>` with a seeded outcome generator.
    pub fn zero_state(q: usize, seed: u64) -> StabilizerTableau {
        let mut rows = Vec::with_capacity(2 * q);
        rows.extend((0..q).map(|i| PauliString::single(q, i, 'X')));
        rows.extend((0..q).map(|i| PauliString::single(q, i, 'Z')));
        StabilizerTableau {
            q,
            rows,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Builds a tableau directly from generators and matching destabilizers.
    pub fn from_generators(
        stabilizers: Vec<PauliString>,
        destabilizers: Vec<PauliString>,
        seed: u64,
    ) -> Result<StabilizerTableau> {
        let q = stabilizers.len();
        if destabilizers.len() != q
            || stabilizers
                .iter()
                .chain(&destabilizers)
                .any(|p| p.num_qubits() != q)
        {
            return Err(SptoError::Dimension(
                "need q generators and q destabilizers on q qubits".into(),
            ));
        }
        for (i, s) in stabilizers.iter().enumerate() {
            if !s.is_hermitian() {
                return Err(SptoError::NonHermitian(s.to_string()));
            }
            for (j, t) in stabilizers.iter().enumerate() {
                if !s.commutes(t) {
                    return Err(SptoError::Dimension(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
                let d = &destabilizers[j];
                if s.commutes(d) == (i == j) {
                    return Err(SptoError::Dimension(format!(
                        "destabilizer {j} does not pair with generator {i}"
                    )));
                }
            }
        }
        let mut rows = destabilizers;
        rows.extend(stabilizers);
        Ok(StabilizerTableau {
            q,
            rows,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.q
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.q..]
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.rows[..self.q]
    }

    pub fn h(&mut self, a: usize) {
        for row in &mut self.rows {
            let (x, z) = (row.x_bit(a), row.z_bit(a));
            let flip = if x && z { 2 } else { 0 };
            let letter = match (z, x) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            row.set(a, letter);
            row.rotate_phase(flip);
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        for row in &mut self.rows {
            let (xa, za, xb, zb) = (row.x_bit(a), row.z_bit(a), row.x_bit(b), row.z_bit(b));
            let flip = if xa && xb && (za ^ zb) { 2 } else { 0 };
            let letter = |x: bool, z: bool| match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            row.set(a, letter(xa, za ^ xb));
            row.set(b, letter(xb, zb ^ xa));
            row.rotate_phase(flip);
        }
    }

    /// Outcome `+1`/`-1`; random outcomes come from the tableau's generator.
    pub fn measure(&mut self, p: &PauliString) -> Result<i8> {
        self.check(p)?;
        let q = self.q;
        let Some(pivot) = (q..2 * q).find(|&i| !self.rows[i].commutes(p)) else {
            return Ok(self.deterministic(p));
        };
        let pivot_row = self.rows[pivot].clone();
        for i in 0..2 * q {
            if i != pivot && !self.rows[i].commutes(p) {
                self.rows[i].mul_assign(&pivot_row);
            }
        }
        let outcome: i8 = if self.rng.random::<bool>() { -1 } else { 1 };
        self.rows[pivot - q] = pivot_row;
        self.rows[pivot] = if outcome == 1 {
            p.clone()
        } else {
            p.clone().negated()
        };
        Ok(outcome)
    }

    /// `+1`/`-1` if `+p`/`-p` stabilizes the state, `0` otherwise.
    pub fn expectation(&self, p: &PauliString) -> Result<i8> {
        self.check(p)?;
        if self.rows[self.q..].iter().any(|s| !s.commutes(p)) {
            return Ok(0);
        }
        Ok(self.deterministic(p))
    }

    fn check(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.q {
            return Err(SptoError::Dimension(format!(
                "{}-qubit operator on {}-qubit state",
                p.num_qubits(),
                self.q
            )));
        }
        if !p.is_hermitian() {
            return Err(SptoError::NonHermitian(p.to_string()));
        }
        Ok(())
    }

    fn deterministic(&self, p: &PauliString) -> i8 {
        let mut acc = PauliString::identity(self.q);
        for i in 0..self.q {
            if !self.rows[i].commutes(p) {
                acc.mul_assign(&self.rows[self.q + i]);
            }
        }
        debug_assert_eq!(acc.clone().with_phase(0), p.clone().with_phase(0));
        if acc.phase() == p.phase() {
            1
        } else {
            -1
        }
    }

    /// Dense state vector (qubit 0 most significant) for small registers, with
    /// the largest amplitude made real positive.
    pub fn state_vector(&self) -> CVec {
        assert!(self.q <= 16, "dense export limited to 16 qubits");
        let dim = 1usize << self.q;
        for start in 0..dim {
            let mut v = CVec::zeros(dim);
            v[start] = linalg::ONE;
            for s in self.stabilizers() {
                v = (&v + s.apply(&v)) * linalg::r(0.5);
            }
            let norm = v.norm();
            if norm > 1e-6 {
                return linalg::fix_phase(&(v / linalg::r(norm)));
            }
        }
        unreachable!("a stabilizer state has support on some basis vector")
    }
}

/// 1D cluster state on a ring of `q` qubits: `prod CZ_{k,k+1} |+>^q`,
/// stabilized by `Z_{k-1} X_k Z_{k+1}`.
pub fn cluster_state(q: usize, seed: u64) -> Result<StabilizerTableau> {
    if q % 2 == 1 {
        return Err(SptoError::OddQubitCount(q));
    }
    if q < 4 {
        return Err(SptoError::Dimension(format!(
            "cluster ring needs at least 4 qubits, got {q}"
        )));
    }
    let mut t = StabilizerTableau::zero_state(q, seed);
    for k in 0..q {
        t.h(k);
    }
    for k in 0..q {
        t.cz(k, (k + 1) % q);
    }
    Ok(t)
}

/// The generator `Z_{k-1} X_k Z_{k+1}` on a ring of `q` qubits.
pub fn cluster_generator(q: usize, k: usize) -> PauliString {
    let mut p = PauliString::single(q, k, 'X');
    p.set((k + q - 1) % q, 'Z');
    p.set((k + 1) % q, 'Z');
    p
}
