use num_complex::Complex64;

use super::tensor::MpsTensor;
use super::transfer::support_len;
use crate::error::{Result, SptoError};
use crate::linalg::{self, CMat, CVec};

/// Largest state vector built by default (`3^8`).
pub const DEFAULT_DENSE_CAP: usize = 6561;

/// Amplitudes `Tr(A^(j_0) ... A^(j_{N-1}))`, site 0 most significant. Not normalized.
pub fn dense_state(a: &MpsTensor, n: usize, cap: usize) -> Result<CVec> {
    let dim = a.d().checked_pow(n as u32).filter(|&x| x <= cap);
    let Some(dim) = dim else {
        return Err(SptoError::CapExceeded {
            needed: a.d().saturating_pow(n as u32),
            cap,
        });
    };
    if n == 0 {
        return Ok(CVec::from_element(1, linalg::r(a.bond() as f64)));
    }
    let mut partial = vec![linalg::identity(a.bond())];
    for _ in 0..n {
        partial = partial
            .iter()
            .flat_map(|m| a.components().iter().map(move |aj| m * aj))
            .collect();
    }
    debug_assert_eq!(partial.len(), dim);
    Ok(CVec::from_iterator(dim, partial.iter().map(|m| m.trace())))
}

/// Applies `op` (spanning `len` sites of dimension `d`) starting at site `start`
/// of an `n`-site periodic register.
pub fn apply_local(psi: &CVec, d: usize, n: usize, start: usize, op: &CMat) -> Result<CVec> {
    let len = support_len(op.nrows(), d)
        .filter(|&l| l <= n && op.ncols() == op.nrows())
        .ok_or_else(|| {
            SptoError::Dimension(format!(
                "{}x{} operator on d={d}, n={n}",
                op.nrows(),
                op.ncols()
            ))
        })?;
    let sites: Vec<usize> = (0..len).map(|s| (start + s) % n).collect();
    let stride = |site: usize| d.pow((n - 1 - site) as u32);
    let mut out = CVec::zeros(psi.len());
    for idx in 0..psi.len() {
        let amp = psi[idx];
        if amp == linalg::ZERO {
            continue;
        }
        let digits: Vec<usize> = sites.iter().map(|&s| (idx / stride(s)) % d).collect();
        let col = digits.iter().fold(0, |acc, &x| acc * d + x);
        let base = sites
            .iter()
            .zip(&digits)
            .fold(idx, |acc, (&s, &x)| acc - x * stride(s));
        for row in 0..op.nrows() {
            let w = op[(row, col)];
            if w == linalg::ZERO {
                continue;
            }
            let mut target = base;
            let mut r = row;
            for &s in sites.iter().rev() {
                target += (r % d) * stride(s);
                r /= d;
            }
            out[target] += w * amp;
        }
    }
    Ok(out)
}

/// `<psi| O_1 O_2 ... |psi> / <psi|psi>` for local operators given as
/// `(start site, matrix)`.
pub fn dense_expectation(
    psi: &CVec,
    d: usize,
    n: usize,
    ops: &[(usize, CMat)],
) -> Result<Complex64> {
    let mut phi = psi.clone();
    for (start, op) in ops.iter().rev() {
        phi = apply_local(&phi, d, n, *start, op)?;
    }
    Ok(psi.dotc(&phi) / psi.dotc(psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_from_scalars() {
        let t = MpsTensor::new(vec![
            CMat::from_element(1, 1, linalg::r(0.6)),
            CMat::from_element(1, 1, linalg::r(0.8)),
        ])
        .unwrap();
        let psi = dense_state(&t, 2, DEFAULT_DENSE_CAP).unwrap();
        let expect = [0.36, 0.48, 0.48, 0.64];
        for (a, b) in psi.iter().zip(expect) {
            assert!((a - linalg::r(b)).norm() < 1e-15);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let t = MpsTensor::new(vec![linalg::identity(2); 3]).unwrap();
        assert!(matches!(
            dense_state(&t, 9, DEFAULT_DENSE_CAP),
            Err(SptoError::CapExceeded { .. })
        ));
        assert!(dense_state(&t, 8, DEFAULT_DENSE_CAP).is_ok());
    }

    #[test]
    fn local_operator_matches_kronecker() {
        let psi = CVec::from_fn(8, |i, _| linalg::c(i as f64, (i * i) as f64 * 0.1));
        let op = linalg::kron(&linalg::pauli_x(), &linalg::pauli_y());
        let a = apply_local(&psi, 2, 3, 1, &op).unwrap();
        let full = linalg::kron(&linalg::identity(2), &op);
        assert!((a - full * &psi).norm() < 1e-12);
    }

    #[test]
    fn wrapped_operator_matches_kronecker() {
        let psi = CVec::from_fn(8, |i, _| linalg::c(1.0 + i as f64, -(i as f64)));
        let op = linalg::kron(&linalg::pauli_z(), &linalg::pauli_x());
        let a = apply_local(&psi, 2, 3, 2, &op).unwrap();
        let full = linalg::kron_all([&linalg::pauli_x(), &linalg::identity(2), &linalg::pauli_z()]);
        assert!((a - full * &psi).norm() < 1e-12);
    }
}
