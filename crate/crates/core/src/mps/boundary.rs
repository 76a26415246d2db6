use super::tensor::MpsTensor;
use crate::error::{Result, SptoError};
use crate::linalg::{self, CMat};

/// Relative singular-value cutoff for injectivity.
pub const RANK_TOL: f64 = 1e-10;
/// Allowed unitarity defect of boundary operators.
pub const FIXED_POINT_TOL: f64 = 1e-8;

/// Pseudo-inverse of the physical map of an already blocked tensor:
/// a `D^2 x d` matrix `L` with `L * physical_map = 1`.
pub fn left_inverse(blocked: &MpsTensor) -> Result<CMat> {
    let map = blocked.physical_map();
    let needed = blocked.bond() * blocked.bond();
    let (inv, rank) = linalg::pinv(&map, RANK_TOL);
    if rank < needed {
        return Err(SptoError::NotInjective { rank, needed });
    }
    Ok(inv)
}

/// Boundary operators on `l` blocked sites for one virtual symmetry matrix `V`.
#[derive(Clone, Debug)]
pub struct BoundaryOperatorPair {
    pub vl: CMat,
    pub vr: CMat,
    pub l: usize,
}

/// `V^L` and `V^R` of a fixed-point tensor for virtual symmetry `V`, acting on
/// `l` sites. On the span of the blocked tensor they satisfy
/// `sum_K V^L_JK B^K = B^J V` and `sum_K V^R_JK B^K = V^† B^J`, and they vanish
/// on its orthogonal complement.
pub fn boundary_operators(a_fix: &MpsTensor, l: usize, v: &CMat) -> Result<BoundaryOperatorPair> {
    let b = a_fix.block(l);
    if v.nrows() != b.bond() || v.ncols() != b.bond() {
        return Err(SptoError::Dimension(format!(
            "virtual operator is {}x{}, bond is {}",
            v.nrows(),
            v.ncols(),
            b.bond()
        )));
    }
    let inv = left_inverse(&b)?;
    let vd = v.adjoint();
    let right_mult = MpsTensor::new(b.components().iter().map(|m| m * v).collect())?;
    let left_mult = MpsTensor::new(b.components().iter().map(|m| &vd * m).collect())?;
    let vl = right_mult.physical_map() * &inv;
    let vr = left_mult.physical_map() * &inv;
    let proj = range_projector(&b);
    let residual = [&vl, &vr]
        .iter()
        .map(|m| linalg::op_norm(&(m.adjoint() * *m - &proj)))
        .fold(0.0, f64::max);
    if residual > FIXED_POINT_TOL {
        return Err(SptoError::NotFixedPoint(residual));
    }
    Ok(BoundaryOperatorPair { vl, vr, l })
}

/// Orthogonal projector onto the physical states reachable from the blocked tensor.
pub fn range_projector(blocked: &MpsTensor) -> CMat {
    let map = blocked.physical_map();
    let (inv, _) = linalg::pinv(&map, RANK_TOL);
    map * inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_deficient_map_is_rejected() {
        let t = MpsTensor::new(vec![linalg::pauli_x(), linalg::pauli_z()]).unwrap();
        assert!(matches!(
            left_inverse(&t),
            Err(SptoError::NotInjective { rank: 2, needed: 4 })
        ));
    }

    #[test]
    fn bond_mismatch_is_rejected() {
        let t = MpsTensor::new(vec![linalg::pauli_x(), linalg::pauli_z()]).unwrap();
        assert!(matches!(
            boundary_operators(&t, 2, &linalg::identity(3)),
            Err(SptoError::Dimension(_))
        ));
    }
}
