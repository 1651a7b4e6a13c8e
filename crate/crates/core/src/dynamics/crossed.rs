//! Group-measure space crossed products and their identification with the
//! algebra of the orbit relation.
//!
//! `ℓ²(Γ × X)` is indexed by `(δ, x) ↦ δ·|X| + x`.

use alloc::format;
use alloc::vec::Vec;

use super::fm::fm_membership_residual;
use super::{action_analysis, FiniteAction};
use crate::algebra::{generate, OperatorAlgebra};
use crate::error::{Error, Result};
use crate::numkit::{c64, sqrt, Mat, Tol};

/// `L∞(X) ⋊ Γ` on `ℓ²(Γ × X)`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub algebra: OperatorAlgebra,
    /// Density matrix of `τ(x) = ⟨x e_1, e_1⟩/μ(X)`.
    pub tau: Option<Mat>,
    /// `U_γ`, indexed by group element.
    pub unitaries: Vec<Mat>,
    /// `m_{1_x}`, indexed by point.
    pub multipliers: Vec<Mat>,
}

fn unitaries(a: &FiniteAction) -> Vec<Mat> {
    let g = a.group();
    let nx = a.space().len();
    let d = g.order() * nx;
    (0..g.order())
        .map(|gamma| {
            let mut u = Mat::zeros(d, d);
            for delta in 0..g.order() {
                for x in 0..nx {
                    u[(g.mul(gamma, delta) * nx + a.act(gamma, x), delta * nx + x)] = c64(1.0, 0.0);
                }
            }
            u
        })
        .collect()
}

fn point_multipliers(a: &FiniteAction) -> Vec<Mat> {
    let nx = a.space().len();
    let order = a.group().order();
    (0..nx)
        .map(|y| {
            let mut f = alloc::vec![0.0; nx];
            f[y] = 1.0;
            let entries: Vec<f64> = (0..order * nx).map(|i| f[i % nx]).collect();
            Mat::diag_real(&entries)
        })
        .collect()
}

/// Built only for measure-preserving actions; others go through
/// [`crossed_product_nonsingular`].
pub fn crossed_product(a: &FiniteAction, tol: Tol) -> Result<CrossedProduct> {
    if !a.is_measure_preserving() {
        return Err(Error::validation(
            "action does not preserve the measure; use the non-singular crossed product",
        ));
    }
    let nx = a.space().len();
    let order = a.group().order();
    let d = order * nx;
    let us = unitaries(a);
    let ms = point_multipliers(a);
    // U_γ m_{1_y} U_γ* = m_{1_y ∘ σ_γ⁻¹} = m_{1_{σ_γ y}}
    for (gamma, u) in us.iter().enumerate() {
        for (y, m) in ms.iter().enumerate() {
            let r = u.conjugate(m).dist(&ms[a.act(gamma, y)]);
            if r > tol.subspace_abs() {
                return Err(Error::numerical(format!("covariance for γ = {gamma}"), r));
            }
        }
    }
    let mut gens = us.clone();
    gens.extend(ms.iter().cloned());
    let algebra = generate(d, &gens, tol)?;
    let mut e1 = Mat::zeros(d, 1);
    for x in 0..nx {
        e1[(x, 0)] = c64(sqrt(a.space().weight(x)), 0.0);
    }
    let tau = e1.matmul(&e1.adjoint()).scale_real(1.0 / a.space().total());
    Ok(CrossedProduct {
        algebra,
        tau: Some(tau),
        unitaries: us,
        multipliers: ms,
    })
}

/// The crossed product on `ℓ²(Γ, ℓ²(X, μ))` through `λ_γ = λ(γ) ⊗ I` and
/// `π_f`, with `(π_f ψ)(γ)(x) = f(σ_γ⁻¹ x)·ψ(γ)(x)`. Needs no invariance.
#[derive(Clone, Debug)]
pub struct NonsingularCrossedProduct {
    pub algebra: OperatorAlgebra,
    pub lambdas: Vec<Mat>,
    pub multipliers: Vec<Mat>,
}

pub fn crossed_product_nonsingular(a: &FiniteAction, tol: Tol) -> Result<NonsingularCrossedProduct> {
    let g = a.group();
    let nx = a.space().len();
    let order = g.order();
    let d = order * nx;
    let lambdas: Vec<Mat> = crate::groupvna::left_regular(g)
        .iter()
        .map(|l| l.kron(&Mat::identity(nx)))
        .collect();
    let multipliers: Vec<Mat> = (0..nx)
        .map(|y| {
            let entries: Vec<f64> = (0..d)
                .map(|i| {
                    let (gamma, x) = (i / nx, i % nx);
                    if a.act(g.inv(gamma), x) == y {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            Mat::diag_real(&entries)
        })
        .collect();
    let mut gens = lambdas.clone();
    gens.extend(multipliers.iter().cloned());
    let algebra = generate(d, &gens, tol)?;
    Ok(NonsingularCrossedProduct {
        algebra,
        lambdas,
        multipliers,
    })
}

/// Unitary `V : ℓ²(Γ × X) → ℓ²(E_σ, μ*)` from `(δ, x) ↦ (x, σ_δ⁻¹ x)`.
///
/// With `U_γ e_(δ,x) = e_(γδ, σ_γ x)` this bijection turns `U_γ` into
/// `L_{a_φ}` for `φ = σ_γ⁻¹` and `m_f` into `L_{a_{Δ,f}}`. Both images are
/// checked, against `M(E_σ)` and against the diagonal subalgebra.
pub fn gms_fm_bridge(a: &FiniteAction, tol: Tol) -> Result<Mat> {
    let info = action_analysis(a)?;
    let mut problems = Vec::new();
    if !info.measure_preserving {
        problems.push("action is not measure preserving".into());
    }
    if !info.free {
        problems.push("action is not free".into());
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    let e = info.orbit_relation;
    let g = a.group();
    let nx = a.space().len();
    let d = g.order() * nx;
    if e.num_pairs() != d {
        return Err(Error::numerical("orbit relation has the wrong size", e.num_pairs() as f64));
    }
    let mut v = Mat::zeros(d, d);
    for delta in 0..g.order() {
        for x in 0..nx {
            let y = a.act(g.inv(delta), x);
            let row = e.pair_index(x, y).expect("same orbit");
            v[(row, delta * nx + x)] = c64(1.0, 0.0);
        }
    }
    let defect = v.adjoint().matmul(&v).dist(&Mat::identity(d));
    if defect > tol.subspace_abs() {
        return Err(Error::numerical("bridge is not a bijection", defect));
    }
    for u in unitaries(a) {
        let r = fm_membership_residual(&e, &v.conjugate(&u))?;
        if r > tol.subspace_abs() {
            return Err(Error::numerical("image of U_γ outside M(E)", r));
        }
    }
    for (x, m) in point_multipliers(a).iter().enumerate() {
        let img = v.conjugate(m);
        let mut want = alloc::vec![0.0; e.num_pairs()];
        for (i, &(p, _)) in e.pairs().iter().enumerate() {
            if p == x {
                want[i] = 1.0;
            }
        }
        let r = img.dist(&Mat::diag_real(&want));
        if r > tol.subspace_abs() {
            return Err(Error::numerical("image of m_f outside the diagonal", r));
        }
    }
    Ok(v)
}
