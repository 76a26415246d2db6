use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SptoError};
use crate::linalg::{self, CMat};

/// Uniform MPS tensor: `d` matrices `A^(j)` of size `D x D`.
///
/// A periodic chain of `N` sites has amplitudes
/// `psi(j_0, ..., j_{N-1}) = Tr(A^(j_0) A^(j_1) ... A^(j_{N-1}))`,
/// with site 0 the most significant digit of the state index.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsTensor {
    d: usize,
    bond: usize,
    a: Vec<CMat>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    d: usize,
    #[serde(rename = "D")]
    bond: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<[f64; 2]>>,
}

impl MpsTensor {
    pub fn new(a: Vec<CMat>) -> Result<MpsTensor> {
        let Some(first) = a.first() else {
            return Err(SptoError::Dimension(
                "tensor needs at least one component".into(),
            ));
        };
        let bond = first.nrows();
        if a.iter().any(|m| m.nrows() != bond || m.ncols() != bond) {
            return Err(SptoError::Dimension(
                "components must be square and of equal size".into(),
            ));
        }
        if a.iter()
            .flat_map(|m| m.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(SptoError::OutOfRange(
                "tensor has non-finite entries".into(),
            ));
        }
        Ok(MpsTensor {
            d: a.len(),
            bond,
            a,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bond(&self) -> usize {
        self.bond
    }

    pub fn component(&self, j: usize) -> &CMat {
        &self.a[j]
    }

    pub fn components(&self) -> &[CMat] {
        &self.a
    }

    /// Blocks `l` sites: `B^(j_1 ... j_l) = A^(j_1) ... A^(j_l)`, `j_1` most significant.
    pub fn block(&self, l: usize) -> MpsTensor {
        assert!(l >= 1, "block length must be at least 1");
        let mut out = vec![linalg::identity(self.bond)];
        for _ in 0..l {
            out = out
                .iter()
                .flat_map(|m| self.a.iter().map(move |aj| m * aj))
                .collect();
        }
        MpsTensor {
            d: out.len(),
            bond: self.bond,
            a: out,
        }
    }

    pub fn scaled(&self, s: f64) -> MpsTensor {
        MpsTensor {
            d: self.d,
            bond: self.bond,
            a: self.a.iter().map(|m| m * linalg::r(s)).collect(),
        }
    }

    /// Rescaled so the transfer matrix has spectral radius 1.
    pub fn normalized(&self) -> MpsTensor {
        let e = super::transfer::transfer_identity(self);
        let rho = linalg::eigenvalues(&e)[0].norm();
        if rho == 0.0 {
            return self.clone();
        }
        self.scaled(1.0 / rho.sqrt())
    }

    /// The `d x D^2` map from bond pairs to physical states; row `j` is
    /// `vec(A^(j))` in row-major order.
    pub fn physical_map(&self) -> CMat {
        let d2 = self.bond * self.bond;
        CMat::from_fn(self.d, d2, |j, k| self.a[j][(k / self.bond, k % self.bond)])
    }

    /// Applies a physical operator: `A'^(j) = sum_k O_jk A^(k)`.
    pub fn apply_physical(&self, o: &CMat) -> Result<MpsTensor> {
        if o.nrows() != self.d || o.ncols() != self.d {
            return Err(SptoError::Dimension(format!(
                "{}x{} operator on d={}",
                o.nrows(),
                o.ncols(),
                self.d
            )));
        }
        let a = (0..self.d)
            .map(|j| {
                (0..self.d).fold(CMat::zeros(self.bond, self.bond), |acc, k| {
                    acc + &self.a[k] * o[(j, k)]
                })
            })
            .collect();
        Ok(MpsTensor {
            d: self.d,
            bond: self.bond,
            a,
        })
    }

    pub fn from_json(text: &str) -> Result<MpsTensor> {
        let raw: TensorJson = serde_json::from_str(text)?;
        if raw.a.len() != raw.d {
            return Err(SptoError::Dimension(format!(
                "declared d={} but {} components",
                raw.d,
                raw.a.len()
            )));
        }
        let a = raw
            .a
            .iter()
            .map(|entries| {
                if entries.len() != raw.bond * raw.bond {
                    return Err(SptoError::Dimension(format!(
                        "component has {} entries, expected D^2 = {}",
                        entries.len(),
                        raw.bond * raw.bond
                    )));
                }
                let vals: Vec<Complex64> =
                    entries.iter().map(|[re, im]| linalg::c(*re, *im)).collect();
                Ok(linalg::mat(raw.bond, raw.bond, &vals))
            })
            .collect::<Result<Vec<_>>>()?;
        MpsTensor::new(a)
    }

    /// `{"d":..,"D":..,"A":[[[re,im],..],..]}`, each component flattened row-major.
    pub fn to_json(&self) -> String {
        let a = self
            .a
            .iter()
            .map(|m| m.transpose().iter().map(|z| [z.re, z.im]).collect())
            .collect();
        serde_json::to_string(&TensorJson {
            d: self.d,
            bond: self.bond,
            a,
        })
        .expect("plain data serializes")
    }
}
