use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::BoundaryOperatorPair;
use super::builtin::SymmetryData;
use super::tensor::MpsTensor;
use super::transfer::{support_len, transfer_identity, transfer_matrix};
use crate::error::{Result, SptoError};
use crate::group::GroupElement;
use crate::linalg::{self, CMat};

/// How a chain expectation is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// Divide by `Tr(E_1^N)`: the exact value on the periodic `N`-site state.
    Finite,
    /// Rescale the tensor so `E_1` has spectral radius 1 and take the raw trace.
    Canonical,
}

/// An operator acting on consecutive sites starting at `position` (wrapping).
#[derive(Clone, Debug)]
pub struct SiteOperator {
    pub position: usize,
    pub op: CMat,
}

impl SiteOperator {
    pub fn new(position: usize, op: CMat) -> SiteOperator {
        SiteOperator { position, op }
    }
}

fn mat_pow(m: &CMat, mut k: usize) -> CMat {
    let mut base = m.clone();
    let mut acc = linalg::identity(m.nrows());
    while k > 0 {
        if k & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

/// Ordered product of transfer matrices around a periodic chain of `n` sites,
/// identity channels filling gaps.
pub fn expectation_chain(
    a: &MpsTensor,
    ops: &[SiteOperator],
    n: usize,
    norm: Normalization,
) -> Result<Complex64> {
    let a = a.normalized();
    let e1 = transfer_identity(&a);
    let mut placed: Vec<(usize, usize, &CMat)> = Vec::with_capacity(ops.len());
    for s in ops {
        let len = support_len(s.op.nrows(), a.d()).ok_or_else(|| {
            SptoError::Dimension(format!(
                "{}x{} operator on d={}",
                s.op.nrows(),
                s.op.ncols(),
                a.d()
            ))
        })?;
        if s.position >= n || len > n {
            return Err(SptoError::OutOfRange(format!(
                "operator at {} spanning {len} on {n} sites",
                s.position
            )));
        }
        placed.push((s.position, len, &s.op));
    }
    placed.sort_by_key(|p| p.0);
    let mut occupied = vec![false; n];
    for &(pos, len, _) in &placed {
        for k in 0..len {
            let site = (pos + k) % n;
            if occupied[site] {
                return Err(SptoError::OverlappingSupport(site));
            }
            occupied[site] = true;
        }
    }
    let raw = if placed.is_empty() {
        mat_pow(&e1, n).trace()
    } else {
        let start = placed[0].0;
        let mut acc = linalg::identity(e1.nrows());
        let mut cursor = start;
        for &(pos, len, op) in &placed {
            acc *= mat_pow(&e1, pos - cursor);
            acc *= transfer_matrix(&a, op)?;
            cursor = pos + len;
        }
        acc *= mat_pow(&e1, start + n - cursor);
        acc.trace()
    };
    Ok(match norm {
        Normalization::Canonical => raw,
        Normalization::Finite => raw / mat_pow(&e1, n).trace(),
    })
}

/// Operators making up `V^L_j(g) U_(j,k)(g) V^R_k(g)`, where `j` and `k` are the
/// first sites of the two boundary blocks and `u(g)` fills the sites between.
pub fn string_operators(
    sym: &SymmetryData,
    bounds: &BoundaryOperatorPair,
    g: &GroupElement,
    j: usize,
    k: usize,
    n: usize,
) -> Result<Vec<SiteOperator>> {
    twisted_operators(sym, bounds, g, None, j, k, n)
}

/// Operators making up `V^R_k(g) U(h) V^L_j(g) U_(j,k)(g)` site by site.
pub fn twisted_string_operators(
    sym: &SymmetryData,
    bounds: &BoundaryOperatorPair,
    g: &GroupElement,
    h: &GroupElement,
    j: usize,
    k: usize,
    n: usize,
) -> Result<Vec<SiteOperator>> {
    twisted_operators(sym, bounds, g, Some(h), j, k, n)
}

fn twisted_operators(
    sym: &SymmetryData,
    bounds: &BoundaryOperatorPair,
    g: &GroupElement,
    h: Option<&GroupElement>,
    j: usize,
    k: usize,
    n: usize,
) -> Result<Vec<SiteOperator>> {
    let d = sym.u[0].nrows();
    let l = support_len(bounds.vl.nrows(), d).ok_or_else(|| {
        SptoError::Dimension(format!(
            "boundary operators of size {} on d={d}",
            bounds.vl.nrows()
        ))
    })?;
    let span = (k + n - j) % n;
    if span < l || span + l > n {
        return Err(SptoError::OutOfRange(format!(
            "blocks at {j} and {k} of length {l} do not fit on {n} sites"
        )));
    }
    let ug = &sym.u[sym.group.index_of(g)?];
    let uh = match h {
        Some(h) => Some(&sym.u[sym.group.index_of(h)?]),
        None => None,
    };
    let uh_block = uh.map(|u| linalg::kron_pow(u, l));
    let mut out = Vec::with_capacity(n);
    let left = match &uh_block {
        Some(ub) => ub * &bounds.vl,
        None => bounds.vl.clone(),
    };
    out.push(SiteOperator::new(j, left));
    for s in l..span {
        let op = match uh {
            Some(u) => u * ug,
            None => ug.clone(),
        };
        out.push(SiteOperator::new((j + s) % n, op));
    }
    let right = match &uh_block {
        Some(ub) => &bounds.vr * ub,
        None => bounds.vr.clone(),
    };
    out.push(SiteOperator::new(k, right));
    if let Some(u) = uh {
        for s in span + l..n {
            out.push(SiteOperator::new((j + s) % n, u.clone()));
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn string_order(
    a: &MpsTensor,
    sym: &SymmetryData,
    bounds: &BoundaryOperatorPair,
    g: &GroupElement,
    j: usize,
    k: usize,
    n: usize,
    norm: Normalization,
) -> Result<Complex64> {
    expectation_chain(a, &string_operators(sym, bounds, g, j, k, n)?, n, norm)
}

#[allow(clippy::too_many_arguments)]
pub fn twisted_string_order(
    a: &MpsTensor,
    sym: &SymmetryData,
    bounds: &BoundaryOperatorPair,
    g: &GroupElement,
    h: &GroupElement,
    j: usize,
    k: usize,
    n: usize,
    norm: Normalization,
) -> Result<Complex64> {
    expectation_chain(
        a,
        &twisted_string_operators(sym, bounds, g, h, j, k, n)?,
        n,
        norm,
    )
}

/// `(13 + 3 S) / 16`.
pub fn win_probability_bound(s_min: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&s_min) {
        return Err(SptoError::OutOfRange(format!(
            "string order {s_min} outside [-1, 1]"
        )));
    }
    Ok((13.0 + 3.0 * s_min) / 16.0)
}

fn aklt_constants() -> (f64, f64) {
    let s = (2.0f64 / 3.0).sqrt();
    (s + 2.0 / 3.0, s - 2.0 / 3.0)
}

/// `(4/9)(sqrt(2/3) + 2/3)^2 + (4/9)(sqrt(2/3) - 2/3)^2 (-1/3)^(N-4)` for `N` AKLT sites.
pub fn aklt_string_order_closed_form(n: usize) -> f64 {
    let (p, m) = aklt_constants();
    4.0 / 9.0 * p * p + 4.0 / 9.0 * m * m * (-1.0f64 / 3.0).powi(n as i32 - 4)
}

/// `(4/9)(sqrt(2/3) + 2/3)^2`.
pub fn aklt_string_order_limit() -> f64 {
    let (p, _) = aklt_constants();
    4.0 / 9.0 * p * p
}

/// `13/16 + (1/12)(sqrt(2/3) + 2/3)^2 + (1/12)(sqrt(2/3) - 2/3)^2 (-1/3)^(N-4)`.
pub fn aklt_win_probability(n: usize) -> f64 {
    let (p, m) = aklt_constants();
    13.0 / 16.0 + p * p / 12.0 + m * m / 12.0 * (-1.0f64 / 3.0).powi(n as i32 - 4)
}

pub fn aklt_win_probability_limit() -> f64 {
    let (p, _) = aklt_constants();
    13.0 / 16.0 + p * p / 12.0
}
