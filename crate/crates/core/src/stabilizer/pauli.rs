use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SptoError};
use crate::linalg::{self, CMat, CVec};

/// `i^phase` times a tensor product of `I, X, Y, Z` (qubit 0 first).
/// A qubit with both bits set is `Y`, not `XZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Exponent of `i` picked up by the single-qubit product `P1 P2`.
#[cfg(test)]
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            phase: 0,
        }
    }

    /// One non-identity factor `letter` in {I, X, Y, Z} on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> PauliString {
        let mut p = PauliString::identity(n);
        p.set(q, letter);
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Exponent `k` of the overall phase `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, k: u8) -> PauliString {
        self.phase = k % 4;
        self
    }

    /// Multiplies the phase by `i^k` in place.
    pub fn rotate_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    pub fn negated(self) -> PauliString {
        let k = self.phase + 2;
        self.with_phase(k)
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    fn set_bits(&mut self, q: usize, xb: bool, zb: bool) {
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | (xb as u64) << b;
        self.z[w] = (self.z[w] & !(1 << b)) | (zb as u64) << b;
    }

    pub fn set(&mut self, q: usize, letter: char) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = match letter {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            other => panic!("unknown Pauli letter {other}"),
        };
        self.set_bits(q, xb, zb);
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        parity == 0
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    /// `self <- self * other`.
    pub fn mul_assign(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut k = self.phase as i32 + other.phase as i32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], other.x[w], other.z[w]);
            // Word-parallel sum of `g` over the qubits: XY, YZ, ZX give +1; YX, XZ, ZY give -1.
            let plus = (x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2);
            let minus = (x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2);
            k += plus.count_ones() as i32 - minus.count_ones() as i32;
            self.x[w] ^= x2;
            self.z[w] ^= z2;
        }
        self.phase = k.rem_euclid(4) as u8;
    }

    pub fn scale(&self, k: u8) -> PauliString {
        self.clone().with_phase(self.phase + k)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let mut out = PauliString::identity(self.n + other.n);
        for q in 0..self.n {
            out.set_bits(q, self.x_bit(q), self.z_bit(q));
        }
        for q in 0..other.n {
            out.set_bits(self.n + q, other.x_bit(q), other.z_bit(q));
        }
        out.phase = (self.phase + other.phase) % 4;
        out
    }

    /// Places this operator on qubits `offset..offset+len` of an `n`-qubit register,
    /// wrapping around modulo `n`.
    pub fn embed(&self, n: usize, offset: usize) -> PauliString {
        let mut out = PauliString::identity(n);
        for q in 0..self.n {
            out.set_bits((offset + q) % n, self.x_bit(q), self.z_bit(q));
        }
        out.phase = self.phase;
        out
    }

    /// Dense matrix, qubit 0 the most significant tensor factor.
    pub fn to_matrix(&self) -> CMat {
        let mut m = linalg::identity(1);
        for q in 0..self.n {
            let f = match self.letter(q) {
                'I' => linalg::identity(2),
                'X' => linalg::pauli_x(),
                'Y' => linalg::pauli_y(),
                _ => linalg::pauli_z(),
            };
            m = m.kronecker(&f);
        }
        m * phase_value(self.phase)
    }

    /// `P |psi>` on a dense state vector (qubit 0 most significant).
    pub fn apply(&self, psi: &CVec) -> CVec {
        assert_eq!(psi.len(), 1 << self.n, "state dimension mismatch");
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in 0..self.n {
            let bit = 1 << (self.n - 1 - q);
            if self.x_bit(q) {
                xm |= bit;
            }
            if self.z_bit(q) {
                zm |= bit;
            }
        }
        let y_count = (xm & zm).count_ones() as u8;
        let base = phase_value(self.phase + y_count);
        let mut out = CVec::zeros(psi.len());
        for b in 0..psi.len() {
            let sign = if (b & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ xm] += psi[b] * base * sign;
        }
        out
    }
}

fn phase_value(k: u8) -> num_complex::Complex64 {
    [linalg::ONE, linalg::I, -linalg::ONE, -linalg::I][(k % 4) as usize]
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = SptoError;

    /// Dense form with an optional phase prefix: `"ZXZ"`, `"-XX"`, `"+iYI"`, `"-iZ"`.
    fn from_str(s: &str) -> Result<PauliString> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s.strip_prefix('+').unwrap_or(s))
        };
        let mut p = PauliString::identity(body.len());
        for (q, ch) in body.chars().enumerate() {
            if !"IXYZ".contains(ch) {
                return Err(SptoError::InvalidInstance(format!(
                    "bad Pauli letter {ch:?} in {s:?}"
                )));
            }
            p.set(q, ch);
        }
        Ok(p.with_phase(phase))
    }
}
