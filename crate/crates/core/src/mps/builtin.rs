//! Built-in tensors: the AKLT chain, its two-site fixed point, and the cluster
//! state. Spin-1 states use the Cartesian basis `|x>, |y>, |z>` with
//! `S^mu |mu> = 0`.
//!
//! Group elements of Z2 x Z2 are identified with AKLT axes as
//! `(0,1) = x`, `(1,0) = z`, `(1,1) = y`, and the virtual representation is
//! `V(a,b) = Z^a X^b` for both chains.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::boundary::{boundary_operators, BoundaryOperatorPair};
use super::tensor::MpsTensor;
use crate::error::{Result, SptoError};
use crate::group::{CocycleTable, Group, ProjectiveRep};
use crate::linalg::{self, CMat, CVec};

/// Residual allowed in the push-through check.
pub const PUSH_THROUGH_TOL: f64 = 1e-10;

/// On-site unitaries `u(g)`, virtual matrices `V(g)` and their cocycle, indexed
/// by group element.
#[derive(Clone, Debug)]
pub struct SymmetryData {
    pub group: Group,
    pub u: Vec<CMat>,
    pub v: Vec<CMat>,
    pub cocycle: CocycleTable,
}

impl SymmetryData {
    pub fn new(group: Group, u: Vec<CMat>, v: Vec<CMat>) -> Result<SymmetryData> {
        if u.len() != group.order() {
            return Err(SptoError::IncompleteTable {
                expected: group.order(),
                got: u.len(),
            });
        }
        let cocycle = ProjectiveRep::new(group.clone(), v.clone())?.cocycle()?;
        Ok(SymmetryData {
            group,
            u,
            v,
            cocycle,
        })
    }

    /// `max_g max_j || sum_k u(g)_jk A^(k) - V(g)^† A^(j) V(g) ||`.
    pub fn push_through_residual(&self, a: &MpsTensor) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (u, v) in self.u.iter().zip(&self.v) {
            let moved = a.apply_physical(u)?;
            for j in 0..a.d() {
                let rhs = v.adjoint() * a.component(j) * v;
                worst = worst.max(linalg::op_norm(&(moved.component(j) - rhs)));
            }
        }
        Ok(worst)
    }

    pub fn validate(&self, a: &MpsTensor) -> Result<()> {
        let r = self.push_through_residual(a)?;
        if r > PUSH_THROUGH_TOL {
            return Err(SptoError::PushThrough(r));
        }
        Ok(())
    }

    /// `{"group":[2,2],"u":[..],"v":[..]}` with every matrix flattened row-major
    /// as `[re, im]` pairs.
    pub fn from_json(text: &str) -> Result<SymmetryData> {
        let raw: SymmetryJson = serde_json::from_str(text)?;
        let moduli = raw.group.unwrap_or_else(|| vec![2, 2]);
        if moduli.contains(&0) {
            return Err(SptoError::OutOfRange(format!("group moduli {moduli:?}")));
        }
        let group = Group::new(moduli);
        SymmetryData::new(group, parse_matrices(&raw.u)?, parse_matrices(&raw.v)?)
    }

    pub fn to_json(&self) -> String {
        let flat = |ms: &[CMat]| {
            ms.iter()
                .map(|m| m.transpose().iter().map(|z| [z.re, z.im]).collect())
                .collect()
        };
        let raw = SymmetryJson {
            group: Some(self.group.moduli.clone()),
            u: flat(&self.u),
            v: flat(&self.v),
        };
        serde_json::to_string(&raw).expect("plain data serializes")
    }

    /// The same symmetry on `l`-site blocks: `u(g)^{⊗l}`, same `V(g)`.
    pub fn blocked(&self, l: usize) -> SymmetryData {
        SymmetryData {
            group: self.group.clone(),
            u: self.u.iter().map(|u| linalg::kron_pow(u, l)).collect(),
            v: self.v.clone(),
            cocycle: self.cocycle.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SymmetryJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<Vec<u32>>,
    u: Vec<Vec<[f64; 2]>>,
    v: Vec<Vec<[f64; 2]>>,
}

fn parse_matrices(raw: &[Vec<[f64; 2]>]) -> Result<Vec<CMat>> {
    raw.iter()
        .map(|entries| {
            let dim = (entries.len() as f64).sqrt().round() as usize;
            if dim * dim != entries.len() || dim == 0 {
                return Err(SptoError::Dimension(format!(
                    "{} entries do not form a square matrix",
                    entries.len()
                )));
            }
            let vals: Vec<_> = entries.iter().map(|[re, im]| linalg::c(*re, *im)).collect();
            Ok(linalg::mat(dim, dim, &vals))
        })
        .collect()
}

/// `Z^a X^b` for element index `2a + b`.
pub fn virtual_rep() -> Vec<CMat> {
    (0..4)
        .map(|i| {
            let z = if i >> 1 == 1 {
                linalg::pauli_z()
            } else {
                linalg::identity(2)
            };
            let x = if i & 1 == 1 {
                linalg::pauli_x()
            } else {
                linalg::identity(2)
            };
            z * x
        })
        .collect()
}

/// AKLT axis (0 = x, 1 = y, 2 = z) for a group element index, `None` for the identity.
pub fn aklt_axis(index: usize) -> Option<usize> {
    match index {
        0 => None,
        1 => Some(0),
        2 => Some(2),
        3 => Some(1),
        _ => panic!("Z2 x Z2 index out of range: {index}"),
    }
}

fn sigma(mu: usize) -> CMat {
    [linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z()][mu].clone()
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    if a == b || b == c || a == c {
        0.0
    } else if (a, b, c) == (0, 1, 2) || (a, b, c) == (1, 2, 0) || (a, b, c) == (2, 0, 1) {
        1.0
    } else {
        -1.0
    }
}

/// `exp(i pi S^mu)` in the Cartesian basis: `+1` on `|mu>`, `-1` elsewhere.
pub fn aklt_u(mu: usize) -> CMat {
    CMat::from_diagonal(&CVec::from_fn(3, |i, _| {
        linalg::r(if i == mu { 1.0 } else { -1.0 })
    }))
}

/// Spin-1 operator `S^mu` in the Cartesian basis, `(S^a)_bc = -i eps_abc`.
pub fn spin_one(mu: usize) -> CMat {
    CMat::from_fn(3, 3, |b, c| linalg::c(0.0, -levi_civita(mu, b, c)))
}

/// Singlet `|e~> = sum_n |nn> / sqrt 3` on two spin-1 sites.
pub fn singlet() -> CVec {
    CVec::from_fn(9, |k, _| {
        linalg::r(if k / 3 == k % 3 {
            1.0 / 3f64.sqrt()
        } else {
            0.0
        })
    })
}

/// Triplet `|mu~> = (i / sqrt 2) sum eps_{mu n g} |n g>`.
pub fn triplet(mu: usize) -> CVec {
    CVec::from_fn(9, |k, _| {
        linalg::c(0.0, FRAC_1_SQRT_2 * levi_civita(mu, k / 3, k % 3))
    })
}

fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

/// `A = sum_mu sigma_mu ⊗ |mu> / sqrt 3`.
pub fn aklt_tensor() -> MpsTensor {
    MpsTensor::new(
        (0..3)
            .map(|mu| sigma(mu) * linalg::r(1.0 / 3f64.sqrt()))
            .collect(),
    )
    .expect("valid AKLT tensor")
}

fn two_site(e_weight: f64, mu_weight: f64) -> MpsTensor {
    let e = singlet();
    let t: Vec<CVec> = (0..3).map(triplet).collect();
    let comps = (0..9)
        .map(|j| {
            let mut m = linalg::identity(2) * (e[j] * e_weight);
            for (mu, tm) in t.iter().enumerate() {
                m += sigma(mu) * (tm[j] * mu_weight);
            }
            m
        })
        .collect();
    MpsTensor::new(comps).expect("valid two-site tensor")
}

/// `(1/sqrt 3) 1 ⊗ |e~> + sqrt(2/9) sum sigma_mu ⊗ |mu~>`: the AKLT tensor blocked twice.
pub fn aklt_two_site() -> MpsTensor {
    two_site(1.0 / 3f64.sqrt(), (2.0f64 / 9.0).sqrt())
}

/// `(1/2) 1 ⊗ |e~> + (1/2) sum sigma_mu ⊗ |mu~>`.
pub fn aklt_fixed_point() -> MpsTensor {
    two_site(0.5, 0.5)
}

pub fn aklt_symmetry() -> SymmetryData {
    let u = (0..4)
        .map(|i| aklt_axis(i).map_or_else(|| linalg::identity(3), aklt_u))
        .collect();
    SymmetryData::new(Group::z2z2(), u, virtual_rep()).expect("Pauli representation is projective")
}

/// Boundary operators in the singlet/triplet basis, with `sign = -1` for `V^L`
/// and `+1` for `V^R`.
fn aklt_cartesian(mu: usize, sign: f64) -> CMat {
    let e = singlet();
    let t: Vec<CVec> = (0..3).map(triplet).collect();
    let mut m = outer(&t[mu], &e) + outer(&e, &t[mu]);
    for n in 0..3 {
        for g in 0..3 {
            let w = levi_civita(mu, n, g);
            if w != 0.0 {
                m += outer(&t[n], &t[g]) * linalg::c(0.0, sign * w);
            }
        }
    }
    m
}

/// `V^L(mu) = |mu~><e~| + |e~><mu~| - i sum eps |n~><g~|`.
pub fn aklt_vl_cartesian(mu: usize) -> CMat {
    aklt_cartesian(mu, -1.0)
}

/// `V^R(mu) = |mu~><e~| + |e~><mu~| + i sum eps |n~><g~|`.
pub fn aklt_vr_cartesian(mu: usize) -> CMat {
    aklt_cartesian(mu, 1.0)
}

/// Spin-observable form: `{(S^2-4)/2, S1 - S2}/sqrt 24 ± {S^2(6-S^2)/8, S1 + S2}/2`,
/// returned as `(V^L, V^R)`.
pub fn aklt_spin_form(mu: usize) -> (CMat, CMat) {
    let id3 = linalg::identity(3);
    let id9 = linalg::identity(9);
    let s1: Vec<CMat> = (0..3).map(|a| linalg::kron(&spin_one(a), &id3)).collect();
    let s2: Vec<CMat> = (0..3).map(|a| linalg::kron(&id3, &spin_one(a))).collect();
    let total_sq = (0..3).fold(CMat::zeros(9, 9), |acc, a| {
        let s = &s1[a] + &s2[a];
        acc + &s * &s
    });
    let anti = |a: &CMat, b: &CMat| a * b + b * a;
    let first = anti(
        &((&total_sq - &id9 * linalg::r(4.0)) * linalg::r(0.5)),
        &(&s1[mu] - &s2[mu]),
    ) * linalg::r(1.0 / 24f64.sqrt());
    let p = &total_sq * (&id9 * linalg::r(6.0) - &total_sq) * linalg::r(1.0 / 8.0);
    let second = anti(&p, &(&s1[mu] + &s2[mu])) * linalg::r(0.5);
    (&first + &second, first - second)
}

/// Maps a spin-1 pair to a qubit pair: `|++><e~| + |-+><z~| + |+-><x~| - i|--><y~|`.
/// Rows are indexed by `(q_{2j}, q_{2j+1})` with `q_{2j}` most significant; the
/// first ket label above is qubit `2j+1`.
pub fn aklt_isometry() -> CMat {
    let s = FRAC_1_SQRT_2;
    let plus = CVec::from_vec(vec![linalg::r(s), linalg::r(s)]);
    let minus = CVec::from_vec(vec![linalg::r(s), linalg::r(-s)]);
    let pair = |first: &CVec, second: &CVec| second.kronecker(first);
    let e = singlet();
    outer(&pair(&plus, &plus), &e)
        + outer(&pair(&minus, &plus), &triplet(2))
        + outer(&pair(&plus, &minus), &triplet(0))
        + outer(&pair(&minus, &minus), &triplet(1)) * linalg::c(0.0, -1.0)
}

/// Qubit-level cluster tensor: `A^0 = [[1,0],[1,0]]/sqrt 2`, `A^1 = [[0,1],[0,-1]]/sqrt 2`.
pub fn cluster_qubit_tensor() -> MpsTensor {
    MpsTensor::new(vec![
        linalg::real_mat(2, 2, &[1.0, 0.0, 1.0, 0.0]) * linalg::r(FRAC_1_SQRT_2),
        linalg::real_mat(2, 2, &[0.0, 1.0, 0.0, -1.0]) * linalg::r(FRAC_1_SQRT_2),
    ])
    .expect("valid cluster tensor")
}

/// Cluster tensor with one site per player (qubits `2j, 2j+1`, `d = 4`).
pub fn cluster_fixed_point() -> MpsTensor {
    cluster_qubit_tensor().block(2)
}

/// `u(a,b) = X^a ⊗ X^b` on a player's two qubits.
pub fn cluster_symmetry() -> SymmetryData {
    let x = linalg::pauli_x();
    let id = linalg::identity(2);
    let u = (0..4)
        .map(|i| {
            let a = if i >> 1 == 1 { &x } else { &id };
            let b = if i & 1 == 1 { &x } else { &id };
            linalg::kron(a, b)
        })
        .collect();
    SymmetryData::new(Group::z2z2(), u, virtual_rep()).expect("Pauli representation is projective")
}

/// A named built-in state.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub tensor: MpsTensor,
    pub symmetry: SymmetryData,
    /// Map from one tensor site to qubits, when one exists.
    pub isometry: Option<CMat>,
}

impl Builtin {
    /// Boundary operators for group element `g`, taken from the fixed point of
    /// the chain (the two-site AKLT block for both AKLT entries).
    pub fn boundary_pair(&self, g: usize) -> Result<BoundaryOperatorPair> {
        let fixed = match self.name {
            "aklt" | "aklt_fixed_point" => aklt_fixed_point(),
            _ => self.tensor.clone(),
        };
        let v = self
            .symmetry
            .v
            .get(g)
            .ok_or_else(|| SptoError::OutOfRange(format!("group element {g}")))?;
        boundary_operators(&fixed, 1, v)
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["aklt", "aklt_fixed_point", "cluster_fixed_point"];

pub fn builtin_tensor(name: &str) -> Result<Builtin> {
    let b = match name {
        "aklt" => Builtin {
            name: "aklt",
            tensor: aklt_tensor(),
            symmetry: aklt_symmetry(),
            isometry: None,
        },
        "aklt_fixed_point" => Builtin {
            name: "aklt_fixed_point",
            tensor: aklt_fixed_point(),
            symmetry: aklt_symmetry().blocked(2),
            isometry: Some(aklt_isometry()),
        },
        "cluster_fixed_point" | "cluster" => Builtin {
            name: "cluster_fixed_point",
            tensor: cluster_fixed_point(),
            symmetry: cluster_symmetry(),
            isometry: Some(linalg::identity(4)),
        },
        other => return Err(SptoError::UnknownTensor(other.to_string())),
    };
    b.symmetry.validate(&b.tensor)?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_json_round_trip() {
        let sym = aklt_symmetry();
        let back = SymmetryData::from_json(&sym.to_json()).unwrap();
        for (a, b) in sym.u.iter().chain(&sym.v).zip(back.u.iter().chain(&back.v)) {
            assert!(linalg::max_abs(&(a - b)) < 1e-15);
        }
        assert!(SymmetryData::from_json(r#"{"u":[[[1,0],[0,0],[0,0]]],"v":[]}"#).is_err());
    }

    #[test]
    fn builtins_pass_push_through() {
        for name in BUILTIN_NAMES {
            let b = builtin_tensor(name).unwrap();
            assert!(
                b.symmetry.push_through_residual(&b.tensor).unwrap() < 1e-14,
                "{name}"
            );
        }
        assert!(matches!(
            builtin_tensor("heisenberg"),
            Err(SptoError::UnknownTensor(_))
        ));
    }

    #[test]
    fn aklt_cocycle_is_real_pauli() {
        let c = aklt_symmetry().cocycle;
        let z2 = crate::group::CocycleTable::pauli_z2z2();
        for g in 0..4 {
            for h in 0..4 {
                assert_eq!(c.omega_at(g, h), z2.omega_at(g, h), "({g},{h})");
            }
        }
    }

    #[test]
    fn singlet_and_triplets_are_cartesian() {
        let total: Vec<CMat> = (0..3)
            .map(|a| {
                linalg::kron(&spin_one(a), &linalg::identity(3))
                    + linalg::kron(&linalg::identity(3), &spin_one(a))
            })
            .collect();
        for mu in 0..3 {
            assert!((&total[mu] * triplet(mu)).norm() < 1e-15);
            for a in 0..3 {
                assert!((&total[a] * singlet()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn spin_form_matches_cartesian() {
        for mu in 0..3 {
            let (vl, vr) = aklt_spin_form(mu);
            assert!(linalg::max_abs(&(vl - aklt_vl_cartesian(mu))) < 1e-12);
            assert!(linalg::max_abs(&(vr - aklt_vr_cartesian(mu))) < 1e-12);
        }
    }

    #[test]
    fn isometry_is_isometric_on_span() {
        let p = aklt_isometry();
        let span = p.adjoint() * &p;
        for v in [singlet(), triplet(0), triplet(1), triplet(2)] {
            assert!((&span * &v - &v).norm() < 1e-14);
        }
        assert!(linalg::max_abs(&(&p * p.adjoint() - linalg::identity(4))) < 1e-14);
    }

    #[test]
    fn spin_ops_match_the_sz_basis_construction() {
        // [S^x, S^y] = i S^z
        let comm = spin_one(0) * spin_one(1) - spin_one(1) * spin_one(0);
        assert!(linalg::max_abs(&(comm - spin_one(2) * linalg::I)) < 1e-15);
    }
}
