//! Unitary representations of finite groups.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{commutant, is_factor, OperatorAlgebra};
use crate::error::{Error, Result, Violations};
use crate::groupvna::{left_regular, FiniteGroup};
use crate::numkit::{range_basis, Mat, StackedSystem, Tol};
use crate::structure::{block_decompose, type_label, TypeLabel};

/// Homomorphism `γ ↦ π_γ` into the unitary `dim × dim` matrices.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: FiniteGroup,
    matrices: Vec<Mat>,
}

impl UnitaryRep {
    pub fn new(group: FiniteGroup, matrices: Vec<Mat>, tol: Tol) -> Result<Self> {
        let mut v = Violations::new();
        v.check(matrices.len() == group.order(), || {
            format!("{} matrices for a group of order {}", matrices.len(), group.order())
        });
        let d = matrices.first().map_or(0, Mat::rows);
        for (g, m) in matrices.iter().enumerate() {
            v.check(m.shape() == (d, d), || {
                format!("π_{g} is {}x{}, expected {d}x{d}", m.rows(), m.cols())
            });
        }
        v.into_result()?;
        let mut v = Violations::new();
        let id = Mat::identity(d);
        let bound = tol.bound(d as f64);
        v.check(matrices[0].dist(&id) <= bound, || "π of the identity is not I".into());
        for (g, m) in matrices.iter().enumerate() {
            let r = m.adjoint().matmul(m).dist(&id);
            v.check(r <= bound, || format!("π_{g} is not unitary (defect {r:e})"));
        }
        'outer: for a in 0..group.order() {
            for b in 0..group.order() {
                let r = matrices[a].matmul(&matrices[b]).dist(&matrices[group.mul(a, b)]);
                if r > bound {
                    v.push(format!("π_{a}·π_{b} differs from π_{} by {r:e}", group.mul(a, b)));
                    break 'outer;
                }
            }
        }
        v.into_result()?;
        Ok(UnitaryRep { group, matrices })
    }

    /// Left regular representation.
    pub fn regular(group: &FiniteGroup) -> Self {
        UnitaryRep {
            matrices: left_regular(group),
            group: group.clone(),
        }
    }

    /// Trivial representation on `ℂ^d`.
    pub fn trivial(group: &FiniteGroup, d: usize) -> Self {
        UnitaryRep {
            matrices: vec![Mat::identity(d); group.order()],
            group: group.clone(),
        }
    }

    /// One-dimensional representation from unimodular values `χ(γ)`.
    pub fn character(group: &FiniteGroup, values: &[crate::numkit::C64], tol: Tol) -> Result<Self> {
        let matrices = values.iter().map(|z| Mat::diag(&[*z])).collect();
        UnitaryRep::new(group.clone(), matrices, tol)
    }

    /// `π ⊕ σ`.
    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::validation("representations of different groups"));
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| Mat::direct_sum(&[a.clone(), b.clone()]))
            .collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            matrices,
        })
    }

    /// `(u π_γ u*)_γ` for a unitary `u`.
    pub fn conjugated_by(&self, u: &Mat) -> Self {
        UnitaryRep {
            group: self.group.clone(),
            matrices: self.matrices.iter().map(|m| u.conjugate(m)).collect(),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.matrices
    }
}

/// Orthonormal basis (Hilbert–Schmidt) of `R_{π,σ} = {T : Tπ_γ = σ_γT}`,
/// as `dim σ × dim π` matrices.
pub fn intertwiners(pi: &UnitaryRep, sigma: &UnitaryRep, tol: Tol) -> Result<Vec<Mat>> {
    if pi.group != sigma.group {
        return Err(Error::validation("representations of different groups"));
    }
    let (dp, ds) = (pi.dim(), sigma.dim());
    let mut sys = StackedSystem::new(ds * dp);
    for (p, s) in pi.matrices.iter().zip(&sigma.matrices) {
        let mut a = Mat::zeros(ds * dp, ds * dp);
        for i in 0..ds {
            for j in 0..dp {
                let row = i * dp + j;
                for k in 0..dp {
                    a[(row, i * dp + k)] += p[(k, j)];
                }
                for k in 0..ds {
                    a[(row, k * dp + j)] -= s[(i, k)];
                }
            }
        }
        sys.push_scaled(&a, p.fro_norm() + s.fro_norm());
    }
    let kernel = sys.solve(tol);
    Ok((0..kernel.cols())
        .map(|j| kernel.col(j).reshape(ds, dp))
        .collect())
}

pub fn is_disjoint(pi: &UnitaryRep, sigma: &UnitaryRep, tol: Tol) -> Result<bool> {
    Ok(intertwiners(pi, sigma, tol)?.is_empty())
}

#[derive(Clone, Debug)]
pub struct RepDiagnostics {
    /// `R_π = π(G)′`.
    pub r_pi: OperatorAlgebra,
    pub irreducible: bool,
    pub factor_rep: bool,
    /// `None` for a non-factor representation.
    pub type_label: Option<TypeLabel>,
}

pub fn rep_diagnostics(pi: &UnitaryRep, tol: Tol) -> Result<RepDiagnostics> {
    let r_pi = commutant(pi.dim(), &pi.matrices, tol)?;
    let factor_rep = is_factor(&r_pi, tol)?;
    let type_label = if factor_rep {
        Some(type_label(&r_pi, tol)?)
    } else {
        None
    };
    Ok(RepDiagnostics {
        irreducible: r_pi.dim() == 1,
        factor_rep,
        type_label,
        r_pi,
    })
}

/// Isotypic component: `π` restricted to `ran(z)`, a multiple of one
/// irreducible.
#[derive(Clone, Debug)]
pub struct MackeyPiece {
    pub z: Mat,
    /// Orthonormal basis of `ran(z)` (columns); `sub_γ = basis*·π_γ·basis`.
    pub basis: Mat,
    pub sub: UnitaryRep,
    pub irrep_dim: usize,
    pub multiplicity: usize,
}

/// Splits `π` along the minimal central projections of `R_π`, ordered by
/// descending irreducible dimension, then descending multiplicity.
///
/// `R_π ≅ ⊕ M_{n_i} ⊗ I_{m_i}` means `π(G)″ ≅ ⊕ I_{n_i} ⊗ M_{m_i}`: block `i`
/// holds `n_i` copies of an irreducible of dimension `m_i`.
pub fn mackey_decompose(pi: &UnitaryRep, tol: Tol) -> Result<Vec<MackeyPiece>> {
    let r_pi = commutant(pi.dim(), &pi.matrices, tol)?;
    let dec = block_decompose(&r_pi, tol)?;
    let mut pieces = Vec::with_capacity(dec.blocks.len());
    for b in &dec.blocks {
        let basis = range_basis(&b.z);
        let matrices = pi.matrices.iter().map(|m| basis.conjugate_adj(m)).collect();
        let sub = UnitaryRep::new(pi.group.clone(), matrices, tol)?;
        pieces.push(MackeyPiece {
            z: b.z.clone(),
            basis,
            sub,
            irrep_dim: b.m,
            multiplicity: b.n,
        });
    }
    pieces.sort_by(|a, b| {
        b.irrep_dim
            .cmp(&a.irrep_dim)
            .then(b.multiplicity.cmp(&a.multiplicity))
    });
    Ok(pieces)
}

/// `Σ_i B_i·sub_i(γ)·B_i*`, which recovers `π_γ`.
pub fn reassemble(pieces: &[MackeyPiece], gamma: usize) -> Mat {
    let d = pieces.first().map_or(0, |p| p.basis.rows());
    let mut out = Mat::zeros(d, d);
    for p in pieces {
        out += &p.basis.conjugate(&p.sub.matrices[gamma]);
    }
    out
}
