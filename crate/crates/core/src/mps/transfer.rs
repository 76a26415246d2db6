use num_complex::Complex64;

use super::tensor::MpsTensor;
use crate::error::{Result, SptoError};
use crate::linalg::{self, CMat};

/// Gap below which the two leading transfer eigenvalues count as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// `E_O = sum_jk O_jk A^(k) ⊗ conj(A^(j))`, ket bond index first, row-major.
/// `O` may act on `l` consecutive sites (`d^l x d^l`); the tensor is blocked to match.
pub fn transfer_matrix(a: &MpsTensor, o: &CMat) -> Result<CMat> {
    let l = support_len(o.nrows(), a.d()).ok_or_else(|| {
        SptoError::Dimension(format!(
            "{}x{} operator on d={}",
            o.nrows(),
            o.ncols(),
            a.d()
        ))
    })?;
    if o.ncols() != o.nrows() {
        return Err(SptoError::Dimension("operator must be square".into()));
    }
    let b = if l == 1 { a.clone() } else { a.block(l) };
    let dd = b.bond() * b.bond();
    let mut e = CMat::zeros(dd, dd);
    let conj: Vec<CMat> = b.components().iter().map(|m| m.map(|z| z.conj())).collect();
    for j in 0..b.d() {
        for k in 0..b.d() {
            let w = o[(j, k)];
            if w != linalg::ZERO {
                e += b.component(k).kronecker(&conj[j]) * w;
            }
        }
    }
    Ok(e)
}

pub fn transfer_identity(a: &MpsTensor) -> CMat {
    transfer_matrix(a, &linalg::identity(a.d())).expect("identity matches d")
}

/// Number of sites an operator of dimension `dim` spans, if `dim = d^l`.
pub fn support_len(dim: usize, d: usize) -> Option<usize> {
    let (mut p, mut l) = (1usize, 0usize);
    while p < dim {
        p = p.checked_mul(d)?;
        l += 1;
    }
    (p == dim && l >= 1).then_some(l)
}

/// Change of basis for `D = 2`: columns `vec(I), vec(X), vec(Y), vec(Z)` over sqrt 2.
pub fn pauli_basis() -> CMat {
    let cols: Vec<_> = [
        linalg::identity(2),
        linalg::pauli_x(),
        linalg::pauli_y(),
        linalg::pauli_z(),
    ]
    .iter()
    .map(|m| linalg::vec_row_major(m) * linalg::r(std::f64::consts::FRAC_1_SQRT_2))
    .collect();
    CMat::from_columns(&cols)
}

/// `P^† E P` for a `4 x 4` transfer matrix.
pub fn in_pauli_basis(e: &CMat) -> CMat {
    let p = pauli_basis();
    p.adjoint() * e * p
}

/// Eigenvalues of `E_1`, decreasing modulus.
pub fn spectrum(a: &MpsTensor) -> Vec<Complex64> {
    linalg::eigenvalues(&transfer_identity(a))
}

/// Second-largest eigenvalue modulus relative to the largest.
pub fn second_eigenvalue(a: &MpsTensor) -> Result<f64> {
    let ev = spectrum(a);
    let top = ev[0].norm();
    if top == 0.0 {
        return Err(SptoError::NonInjectiveMps);
    }
    let next = ev.get(1).map_or(0.0, |z| z.norm() / top);
    if 1.0 - next < DEGENERACY_TOL {
        return Err(SptoError::NonInjectiveMps);
    }
    Ok(next)
}

/// `xi = 1 / ln(1 / |lambda_2|)`, zero when `lambda_2` vanishes.
pub fn correlation_length(a: &MpsTensor) -> Result<f64> {
    let l2 = second_eigenvalue(a)?;
    if l2 < 1e-14 {
        return Ok(0.0);
    }
    Ok(1.0 / (1.0 / l2).ln())
}

/// `lim E^M = |r><l| / <l|r>` for the normalized tensor, built from the dominant
/// right and left eigenvectors.
pub fn fixed_point_transfer(a: &MpsTensor) -> Result<CMat> {
    second_eigenvalue(a)?;
    let e = transfer_identity(&a.normalized());
    let lambda = linalg::eigenvalues(&e)[0];
    let n = e.nrows();
    let shift = |m: &CMat, z: Complex64| m - linalg::identity(n) * z;
    let right = dominant_vector(&shift(&e, lambda))?;
    let left = dominant_vector(&shift(&e.adjoint(), lambda.conj()))?;
    let overlap = left.dotc(&right);
    if overlap.norm() < 1e-12 {
        return Err(SptoError::NonInjectiveMps);
    }
    Ok(&right * left.adjoint() / overlap)
}

fn dominant_vector(shifted: &CMat) -> Result<linalg::CVec> {
    let ns = linalg::null_space(shifted, 1e-8);
    if ns.ncols() != 1 {
        return Err(SptoError::NonInjectiveMps);
    }
    Ok(linalg::fix_phase(&ns.column(0).into_owned()))
}
