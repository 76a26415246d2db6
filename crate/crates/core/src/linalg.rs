//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn mat(rows: usize, cols: usize, data: &[Complex64]) -> CMat {
    DMatrix::from_row_slice(rows, cols, data)
}

pub fn real_mat(rows: usize, cols: usize, data: &[f64]) -> CMat {
    DMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| r(x)))
}

pub fn identity(n: usize) -> CMat {
    DMatrix::identity(n, n)
}

pub fn pauli_x() -> CMat {
    real_mat(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> CMat {
    mat(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    real_mat(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all<'a>(mats: impl IntoIterator<Item = &'a CMat>) -> CMat {
    mats.into_iter()
        .fold(identity(1), |acc, m| acc.kronecker(m))
}

pub fn kron_pow(a: &CMat, n: usize) -> CMat {
    (0..n).fold(identity(1), |acc, _| acc.kronecker(a))
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Moore-Penrose pseudo-inverse with relative rank tolerance, plus the numerical rank.
pub fn pinv(m: &CMat, rel_tol: f64) -> (CMat, usize) {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = rel_tol * smax;
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let k = svd.singular_values.len();
    let mut out = CMat::zeros(m.ncols(), m.nrows());
    let mut rank = 0;
    for i in 0..k {
        let s = svd.singular_values[i];
        if s > cutoff && s > 0.0 {
            rank += 1;
            let col = vt.row(i).adjoint() * u.column(i).adjoint() * r(1.0 / s);
            out += col;
        }
    }
    (out, rank)
}

/// Orthonormal basis of the null space of `m` (columns), with relative tolerance.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    // Pad to square so the SVD returns a full right basis.
    let mut sq = CMat::zeros(n.max(m.nrows()), n);
    sq.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max().max(1.0);
    let cols: Vec<CVec> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= rel_tol * smax)
        .map(|i| vt.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        CMat::zeros(n, 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// Eigenvalues of a general complex matrix, sorted by decreasing modulus.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    let mut ev: Vec<Complex64> = m
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
    ev
}

/// Fixes the global phase so the largest-magnitude entry is real positive.
pub fn fix_phase(v: &CVec) -> CVec {
    let (idx, _) = v.iter().enumerate().fold((0, -1.0), |(bi, bm), (i, z)| {
        if z.norm() > bm + 1e-12 {
            (i, z.norm())
        } else {
            (bi, bm)
        }
    });
    let p = v[idx];
    if p.norm() == 0.0 {
        return v.clone();
    }
    v * (p.conj() / p.norm())
}

/// Row-major vectorization.
pub fn vec_row_major(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.transpose().iter().copied())
}

pub fn unvec_row_major(v: &CVec, rows: usize, cols: usize) -> CMat {
    DMatrix::from_row_slice(rows, cols, v.as_slice())
}
