//! Finite abelian groups `Z_{n_1} x ... x Z_{n_k}`, 2-cocycles and twist phases.
//!
//! The default cocycle on `Z2 x Z2` is the Pauli multiplication phase
//! `omega((a,b),(c,d)) = (-1)^{bc}` coming from `V((a,b)) = X^a Z^b`. Only the
//! twist `Omega = omega(g,h)/omega(h,g)` is a phase invariant; the table itself
//! is one representative of its cohomology class.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SptoError};

const PHASE_TOL: f64 = 1e-12;

/// A unit-modulus phase, exact on the fourth roots of unity.
#[derive(Clone, Copy, Debug)]
pub enum Phase {
    /// `i^k`, k in 0..4.
    Exact(u8),
    Unit(Complex64),
}

impl Phase {
    pub const ONE: Phase = Phase::Exact(0);
    pub const I: Phase = Phase::Exact(1);
    pub const MINUS_ONE: Phase = Phase::Exact(2);
    pub const MINUS_I: Phase = Phase::Exact(3);

    /// Snaps to `i^k` when within tolerance; otherwise keeps the value normalized.
    pub fn from_complex(c: Complex64) -> Phase {
        for k in 0..4u8 {
            if (c - Phase::Exact(k).to_complex()).norm() < PHASE_TOL {
                return Phase::Exact(k);
            }
        }
        Phase::Unit(c / c.norm())
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::Exact(0) => Complex64::new(1.0, 0.0),
            Phase::Exact(1) => Complex64::new(0.0, 1.0),
            Phase::Exact(2) => Complex64::new(-1.0, 0.0),
            Phase::Exact(3) => Complex64::new(0.0, -1.0),
            Phase::Exact(k) => Phase::Exact(k % 4).to_complex(),
            Phase::Unit(c) => c,
        }
    }

    pub fn conj(self) -> Phase {
        match self {
            Phase::Exact(k) => Phase::Exact((4 - k % 4) % 4),
            Phase::Unit(c) => Phase::Unit(c.conj()),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Phase::Exact(_))
    }

    pub fn approx_eq(self, other: Phase, tol: f64) -> bool {
        (self.to_complex() - other.to_complex()).norm() < tol
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        match (self, rhs) {
            (Phase::Exact(a), Phase::Exact(b)) => Phase::Exact((a + b) % 4),
            _ => Phase::from_complex(self.to_complex() * rhs.to_complex()),
        }
    }
}

impl std::ops::Div for Phase {
    type Output = Phase;
    fn div(self, rhs: Phase) -> Phase {
        self * rhs.conj()
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Phase) -> bool {
        match (self, other) {
            (Phase::Exact(a), Phase::Exact(b)) => a % 4 == b % 4,
            _ => self.approx_eq(*other, PHASE_TOL),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Exact(k) => f.write_str(["+1", "+i", "-1", "-i"][(*k % 4) as usize]),
            Phase::Unit(c) => write!(f, "{:.6}{:+.6}i", c.re, c.im),
        }
    }
}

/// Group descriptor: the list of cyclic factor orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    pub moduli: Vec<u32>,
}

impl Group {
    pub fn new(moduli: Vec<u32>) -> Group {
        assert!(
            moduli.iter().all(|&n| n >= 1),
            "cyclic factors must have order >= 1"
        );
        Group { moduli }
    }

    pub fn z2z2() -> Group {
        Group::new(vec![2, 2])
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&n| n as usize).product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            components: vec![0; self.moduli.len()],
        }
    }

    pub fn element(&self, components: &[u32]) -> Result<GroupElement> {
        if components.len() != self.moduli.len()
            || components.iter().zip(&self.moduli).any(|(c, n)| c >= n)
        {
            return Err(SptoError::NotInGroup(format!(
                "{components:?} in {:?}",
                self.moduli
            )));
        }
        Ok(GroupElement {
            group: self.clone(),
            components: components.to_vec(),
        })
    }

    /// Elements in lexicographic order, first factor most significant.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut comps = vec![0u32; self.moduli.len()];
        for (slot, &n) in comps.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % n as usize) as u32;
            index /= n as usize;
        }
        GroupElement {
            group: self.clone(),
            components: comps,
        }
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(g.components
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize))
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.group != *self {
            return Err(SptoError::GroupMismatch(
                self.moduli.clone(),
                g.group.moduli.clone(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub group: Group,
    pub components: Vec<u32>,
}

impl GroupElement {
    /// Shorthand for an element of `Z2 x Z2`.
    pub fn z2z2(a: u32, b: u32) -> GroupElement {
        Group::z2z2().element(&[a, b]).expect("bits must be 0 or 1")
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.check(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .zip(&self.group.moduli)
            .map(|((a, b), n)| (a + b) % n)
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            components,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let components = self
            .components
            .iter()
            .zip(&self.group.moduli)
            .map(|(a, n)| (n - a) % n)
            .collect();
        GroupElement {
            group: self.group.clone(),
            components,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(|&c| c == 0)
    }

    pub fn index(&self) -> usize {
        self.group
            .index_of(self)
            .expect("element belongs to its own group")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `multiply` as a free function.
pub fn multiply(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    g.multiply(h)
}

/// A 2-cocycle stored row-major over lexicographically ordered elements.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTable {
    pub group: Group,
    omega: Vec<Phase>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub valid: bool,
    /// Index triples `(a, b, c)` with `omega(a,b) omega(ab,c) != omega(a,bc) omega(b,c)`.
    pub violations: Vec<(usize, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct CocycleJson {
    group: Vec<u32>,
    omega: Vec<Vec<[f64; 2]>>,
}

impl CocycleTable {
    pub fn new(group: Group, omega: Vec<Phase>) -> Result<CocycleTable> {
        let expected = group.order() * group.order();
        if omega.len() != expected {
            return Err(SptoError::IncompleteTable {
                expected,
                got: omega.len(),
            });
        }
        Ok(CocycleTable { group, omega })
    }

    pub fn trivial(group: Group) -> CocycleTable {
        let n = group.order();
        CocycleTable {
            group,
            omega: vec![Phase::ONE; n * n],
        }
    }

    /// `omega((a,b),(c,d)) = (-1)^{bc}`.
    pub fn pauli_z2z2() -> CocycleTable {
        let group = Group::z2z2();
        let omega = (0..4)
            .flat_map(|g| {
                (0..4).map(move |h| {
                    let b = g & 1;
                    let c = h >> 1;
                    if b * c == 1 {
                        Phase::MINUS_ONE
                    } else {
                        Phase::ONE
                    }
                })
            })
            .collect();
        CocycleTable { group, omega }
    }

    pub fn omega(&self, g: &GroupElement, h: &GroupElement) -> Result<Phase> {
        let n = self.group.order();
        Ok(self.omega[self.group.index_of(g)? * n + self.group.index_of(h)?])
    }

    pub fn omega_at(&self, g: usize, h: usize) -> Phase {
        self.omega[g * self.group.order() + h]
    }

    pub fn set(&mut self, g: usize, h: usize, value: Phase) {
        let n = self.group.order();
        self.omega[g * n + h] = value;
    }

    pub fn twist_phase(&self, g: &GroupElement, h: &GroupElement) -> Result<Phase> {
        Ok(self.omega(g, h)? / self.omega(h, g)?)
    }

    pub fn verify(&self) -> CocycleReport {
        let elems = self.group.elements();
        let n = elems.len();
        let mut violations = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = elems[a].multiply(&elems[b]).expect("same group").index();
                for c in 0..n {
                    let bc = elems[b].multiply(&elems[c]).expect("same group").index();
                    let lhs = self.omega_at(a, b) * self.omega_at(ab, c);
                    let rhs = self.omega_at(a, bc) * self.omega_at(b, c);
                    if !lhs.approx_eq(rhs, PHASE_TOL) {
                        violations.push((a, b, c));
                    }
                }
            }
        }
        CocycleReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn from_json(text: &str) -> Result<CocycleTable> {
        let raw: CocycleJson = serde_json::from_str(text)?;
        let group = Group::new(raw.group);
        let n = group.order();
        if raw.omega.len() != n || raw.omega.iter().any(|row| row.len() != n) {
            let got = raw.omega.iter().map(Vec::len).sum();
            return Err(SptoError::IncompleteTable {
                expected: n * n,
                got,
            });
        }
        let omega = raw
            .omega
            .iter()
            .flatten()
            .map(|[re, im]| Phase::from_complex(Complex64::new(*re, *im)))
            .collect();
        CocycleTable::new(group, omega)
    }

    pub fn to_json(&self) -> String {
        let n = self.group.order();
        let omega = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| {
                        let c = self.omega_at(g, h).to_complex();
                        [c.re, c.im]
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string(&CocycleJson {
            group: self.group.moduli.clone(),
            omega,
        })
        .expect("plain data serializes")
    }
}

/// `twist_phase` as a free function.
pub fn twist_phase(table: &CocycleTable, g: &GroupElement, h: &GroupElement) -> Result<Phase> {
    table.twist_phase(g, h)
}

/// `verify_cocycle` as a free function.
pub fn verify_cocycle(table: &CocycleTable) -> CocycleReport {
    table.verify()
}

/// Unitary matrices `V(g)` indexed like `group.elements()`.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub group: Group,
    pub matrices: Vec<DMatrix<Complex64>>,
}

impl ProjectiveRep {
    pub fn new(group: Group, matrices: Vec<DMatrix<Complex64>>) -> Result<ProjectiveRep> {
        if matrices.len() != group.order() {
            return Err(SptoError::IncompleteTable {
                expected: group.order(),
                got: matrices.len(),
            });
        }
        let dim = matrices[0].nrows();
        for m in &matrices {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(SptoError::Dimension(
                    "representation matrices must be square and equal size".into(),
                ));
            }
        }
        Ok(ProjectiveRep { group, matrices })
    }

    /// `V((a,b)) = X^a Z^b`.
    pub fn pauli() -> ProjectiveRep {
        let x = crate::linalg::pauli_x();
        let z = crate::linalg::pauli_z();
        let id = DMatrix::identity(2, 2);
        let mats = vec![id, z.clone(), x.clone(), &x * &z];
        ProjectiveRep {
            group: Group::z2z2(),
            matrices: mats,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, g: &GroupElement) -> Result<&DMatrix<Complex64>> {
        Ok(&self.matrices[self.group.index_of(g)?])
    }

    pub fn max_unitarity_residual(&self) -> f64 {
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        self.matrices
            .iter()
            .map(|m| crate::linalg::op_norm(&(m.adjoint() * m - &id)))
            .fold(0.0, f64::max)
    }

    pub fn projective_defect(&self, g: &GroupElement, h: &GroupElement) -> Result<Phase> {
        let gi = self.group.index_of(g)?;
        let hi = self.group.index_of(h)?;
        self.defect_at(gi, hi)
    }

    fn defect_at(&self, gi: usize, hi: usize) -> Result<Phase> {
        let elems = self.group.elements();
        let ghi = elems[gi].multiply(&elems[hi])?.index();
        let m = &self.matrices[gi] * &self.matrices[hi] * self.matrices[ghi].adjoint();
        let lambda = m.trace() / Complex64::new(self.dim() as f64, 0.0);
        let resid =
            crate::linalg::op_norm(&(&m - DMatrix::identity(self.dim(), self.dim()) * lambda));
        if resid > 1e-10 || (lambda.norm() - 1.0).abs() > 1e-10 {
            return Err(SptoError::NotProjective(gi, hi, resid));
        }
        Ok(Phase::from_complex(lambda))
    }

    /// Cocycle table assembled from the projective defects.
    pub fn cocycle(&self) -> Result<CocycleTable> {
        let n = self.group.order();
        let mut omega = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                omega.push(self.defect_at(g, h)?);
            }
        }
        CocycleTable::new(self.group.clone(), omega)
    }
}

/// `projective_defect` as a free function.
pub fn projective_defect(rep: &ProjectiveRep, g: &GroupElement, h: &GroupElement) -> Result<Phase> {
    rep.projective_defect(g, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: u32, b: u32) -> GroupElement {
        GroupElement::z2z2(a, b)
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(e(0, 1).multiply(&e(1, 0)).unwrap(), e(1, 1));
        assert_eq!(e(1, 1).multiply(&e(1, 1)).unwrap(), e(0, 0));
        assert_eq!(e(0, 0).multiply(&e(1, 0)).unwrap(), e(1, 0));
    }

    #[test]
    fn mismatched_groups_error() {
        let z4 = Group::new(vec![4]).element(&[1]).unwrap();
        assert!(matches!(
            e(1, 0).multiply(&z4),
            Err(SptoError::GroupMismatch(..))
        ));
    }

    #[test]
    fn lexicographic_indexing_round_trips() {
        let g = Group::new(vec![2, 3, 2]);
        for (i, el) in g.elements().iter().enumerate() {
            assert_eq!(el.index(), i);
        }
        assert_eq!(Group::z2z2().element_at(1), e(0, 1));
    }

    #[test]
    fn twist_examples() {
        let t = CocycleTable::pauli_z2z2();
        assert_eq!(t.twist_phase(&e(0, 1), &e(1, 0)).unwrap(), Phase::MINUS_ONE);
        for g in Group::z2z2().elements() {
            assert_eq!(t.twist_phase(&e(0, 0), &g).unwrap(), Phase::ONE);
            assert_eq!(t.twist_phase(&g, &g).unwrap(), Phase::ONE);
        }
    }

    #[test]
    fn verify_examples() {
        assert!(CocycleTable::pauli_z2z2().verify().valid);
        assert!(CocycleTable::trivial(Group::z2z2()).verify().valid);
        let mut broken = CocycleTable::trivial(Group::z2z2());
        broken.set(1, 1, Phase::MINUS_ONE);
        let report = broken.verify();
        assert!(!report.valid);
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let r = CocycleTable::new(Group::z2z2(), vec![Phase::ONE; 15]);
        assert!(matches!(
            r,
            Err(SptoError::IncompleteTable {
                expected: 16,
                got: 15
            })
        ));
        let r = CocycleTable::from_json(r#"{"group":[2,2],"omega":[[[1,0]]]}"#);
        assert!(matches!(r, Err(SptoError::IncompleteTable { .. })));
    }

    #[test]
    fn pauli_defects() {
        let rep = ProjectiveRep::pauli();
        let a = rep.projective_defect(&e(0, 1), &e(1, 0)).unwrap();
        let b = rep.projective_defect(&e(1, 0), &e(0, 1)).unwrap();
        assert_eq!(a, Phase::MINUS_ONE * b);
        for g in Group::z2z2().elements() {
            assert_eq!(rep.projective_defect(&e(0, 0), &g).unwrap(), Phase::ONE);
        }
        assert_eq!(rep.cocycle().unwrap(), CocycleTable::pauli_z2z2());
    }

    #[test]
    fn linear_rep_has_trivial_defects() {
        let diag = |s: f64, t: f64| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                Complex64::new(s, 0.0),
                Complex64::new(t, 0.0),
            ]))
        };
        let rep = ProjectiveRep::new(
            Group::z2z2(),
            vec![
                diag(1.0, 1.0),
                diag(1.0, -1.0),
                diag(-1.0, 1.0),
                diag(-1.0, -1.0),
            ],
        )
        .unwrap();
        let table = rep.cocycle().unwrap();
        assert_eq!(table, CocycleTable::trivial(Group::z2z2()));
    }

    #[test]
    fn non_projective_is_rejected() {
        let mut rep = ProjectiveRep::pauli();
        rep.matrices[3] = DMatrix::identity(2, 2);
        assert!(matches!(rep.cocycle(), Err(SptoError::NotProjective(..))));
    }

    #[test]
    fn json_round_trip() {
        let t = CocycleTable::pauli_z2z2();
        let back = CocycleTable::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
        assert!(back.omega_at(1, 2).is_exact());
    }
}
