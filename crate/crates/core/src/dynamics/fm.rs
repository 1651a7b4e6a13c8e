//! The von Neumann algebra `M(E)` of a finite equivalence relation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::kernel::left_operator_matrix;
use super::{build_left_operator, build_right_operator, FiniteEquivRelation, Kernel, PartialBijection};
use crate::algebra::{commutant_of, generate, is_factor, relative_commutant, OperatorAlgebra};
use crate::error::{Error, Result};
use crate::numkit::{c64, sqrt, Mat, Tol, C64};

/// `M(E)` together with the image `diag` of `L∞(X)`.
#[derive(Clone, Debug)]
pub struct FmAlgebra {
    pub algebra: OperatorAlgebra,
    pub diag: OperatorAlgebra,
}

/// `L_{a_{Δ,1_x}}` for every point.
fn point_projections(e: &FiniteEquivRelation) -> Result<Vec<Mat>> {
    let n = e.num_points();
    (0..n)
        .map(|x| {
            let mut f = vec![c64(0.0, 0.0); n];
            f[x] = c64(1.0, 0.0);
            build_left_operator(e, &Kernel::diagonal(e, &f)?)
        })
        .collect()
}

/// `L_{a_φ}` for the matrix units `c_i → c_{i+1}` along every class.
fn chain_units(e: &FiniteEquivRelation) -> Result<Vec<Mat>> {
    let mut out = Vec::new();
    for c in e.classes() {
        for w in c.windows(2) {
            out.push(build_left_operator(e, &Kernel::unit(e, w[0], w[1])?)?);
        }
    }
    Ok(out)
}

fn diag_algebra(e: &FiniteEquivRelation, points: Vec<Mat>) -> OperatorAlgebra {
    let basis = points
        .iter()
        .enumerate()
        .map(|(x, p)| p.scale_real(1.0 / sqrt(e.class_of(x).len() as f64)))
        .collect();
    OperatorAlgebra::from_parts(e.num_pairs(), basis, points)
}

pub fn fm_algebra(e: &FiniteEquivRelation, tol: Tol) -> Result<FmAlgebra> {
    let points = point_projections(e)?;
    let mut gens = chain_units(e)?;
    gens.extend(points.iter().cloned());
    let algebra = generate(e.num_pairs(), &gens, tol)?;
    let expected: usize = e.classes().iter().map(|c| c.len() * c.len()).sum();
    if algebra.dim() != expected {
        return Err(Error::numerical(
            format!("M(E) has dimension {} instead of {expected}", algebra.dim()),
            algebra.dim() as f64,
        ));
    }
    Ok(FmAlgebra {
        algebra,
        diag: diag_algebra(e, points),
    })
}

/// Kernel read off an operator on `ℓ²(E)`: `a(x,z) = x[(x,z),(z,z)]`.
fn kernel_table(e: &FiniteEquivRelation, t: &Mat) -> Mat {
    let n = e.num_points();
    Mat::from_fn(n, n, |x, z| match (e.pair_index(x, z), e.pair_index(z, z)) {
        (Some(r), Some(c)) => t[(r, c)],
        _ => c64(0.0, 0.0),
    })
}

/// `‖T − L_a‖` for the kernel `a` read off `T`; zero exactly when
/// `T ∈ M(E)`. Needs no materialized basis of `M(E)`.
pub fn fm_membership_residual(e: &FiniteEquivRelation, t: &Mat) -> Result<f64> {
    let d = e.num_pairs();
    if t.shape() != (d, d) {
        return Err(Error::validation(format!(
            "operator is {}x{}, ℓ²(E) has dimension {d}",
            t.rows(),
            t.cols()
        )));
    }
    Ok(t.dist(&left_operator_matrix(e, &kernel_table(e, t))))
}

/// `x = Σ_s L_{a_{φ_s, f_s}}` with `φ_s` the cyclic shift by `s` inside each
/// class (undefined on classes of size `≤ s`). The graphs of the `φ_s` are
/// disjoint and cover `E`, so the `f_s` are unique.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub shifts: Vec<PartialBijection>,
    pub coefficients: Vec<Vec<C64>>,
    /// `‖x − Σ_s L_{a_{φ_s, f_s}}‖`.
    pub residual: f64,
}

pub fn standard_form(e: &FiniteEquivRelation, t: &Mat) -> Result<StandardForm> {
    let residual_in = fm_membership_residual(e, t)?;
    let a = kernel_table(e, t);
    let n = e.num_points();
    let mut shifts = Vec::new();
    let mut coefficients = Vec::new();
    let mut recon = Mat::zeros(t.rows(), t.cols());
    for s in 0..e.max_class_size() {
        let mut map = vec![None; n];
        for c in e.classes() {
            if c.len() > s {
                for (i, &x) in c.iter().enumerate() {
                    map[x] = Some(c[(i + s) % c.len()]);
                }
            }
        }
        let phi = PartialBijection::new(map)?;
        let f: Vec<C64> = (0..n)
            .map(|x| phi.apply(x).map_or(c64(0.0, 0.0), |y| a[(x, y)]))
            .collect();
        recon += &build_left_operator(e, &phi.kernel(e, &f)?)?;
        shifts.push(phi);
        coefficients.push(f);
    }
    let residual = t.dist(&recon).max(residual_in);
    Ok(StandardForm {
        shifts,
        coefficients,
        residual,
    })
}

#[derive(Clone, Debug)]
pub struct CartanReport {
    pub maximal_abelian: bool,
    pub regular: bool,
    pub is_factor: bool,
    /// `τ(x) = ⟨x·1_Δ, 1_Δ⟩/μ(X)`, present when the weights are invariant.
    pub tau: Option<Mat>,
}

/// Normalizing unitaries: adjacent transpositions inside each class and
/// diagonal unitaries equal to `i` at a single point.
fn normalizer_sample(e: &FiniteEquivRelation) -> Result<Vec<Mat>> {
    let n = e.num_points();
    let mut out = Vec::new();
    for c in e.classes() {
        for w in c.windows(2) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(w[0], w[1]);
            let phi = PartialBijection::from_permutation(&perm)?;
            out.push(build_left_operator(e, &phi.indicator_kernel(e)?)?);
        }
    }
    for x in 0..n {
        let mut f = vec![c64(1.0, 0.0); n];
        f[x] = c64(0.0, 1.0);
        out.push(build_left_operator(e, &Kernel::diagonal(e, &f)?)?);
    }
    Ok(out)
}

/// `1_Δ` in the orthonormal basis of `ℓ²(E, μ*)`.
pub(crate) fn diagonal_vector(e: &FiniteEquivRelation) -> Mat {
    let mut v = Mat::zeros(e.num_pairs(), 1);
    for x in 0..e.num_points() {
        let i = e.pair_index(x, x).expect("reflexive");
        v[(i, 0)] = c64(sqrt(e.space().weight(x)), 0.0);
    }
    v
}

pub fn cartan_factor_trace(e: &FiniteEquivRelation, tol: Tol) -> Result<CartanReport> {
    let fm = fm_algebra(e, tol)?;
    let rel = relative_commutant(&fm.algebra, fm.diag.generating_set(), tol)?;
    let maximal_abelian = rel.same_subspace(&fm.diag, tol);
    let generated = generate(e.num_pairs(), &normalizer_sample(e)?, tol)?;
    let regular = generated.same_subspace(&fm.algebra, tol);
    let single = e.is_ergodic();
    if single != is_factor(&fm.algebra, tol)? {
        return Err(Error::numerical(
            "factor test disagrees with the class count",
            e.classes().len() as f64,
        ));
    }
    let tau = e.is_invariant_measure().then(|| {
        let v = diagonal_vector(e);
        v.matmul(&v.adjoint()).scale_real(1.0 / e.space().total())
    });
    Ok(CartanReport {
        maximal_abelian,
        regular,
        is_factor: single,
        tau,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RightCommutantReport {
    pub commute_ok: bool,
    pub equality_ok: bool,
    /// Largest `‖[L_a, R_b]‖` over the tested families.
    pub max_commutator: f64,
}

/// `[L_a, R_b] = 0` on spanning families and `M(E)′ = {R_b}″`.
pub fn right_commutant_check(e: &FiniteEquivRelation, tol: Tol) -> Result<RightCommutantReport> {
    let fm = fm_algebra(e, tol)?;
    let mut rights = Vec::with_capacity(e.num_pairs());
    for &(x, y) in e.pairs() {
        rights.push(build_right_operator(e, &Kernel::unit(e, x, y)?)?);
    }
    let mut max_commutator: f64 = 0.0;
    for l in fm.algebra.generating_set() {
        for r in &rights {
            max_commutator = max_commutator.max(l.commutator(r).fro_norm());
        }
    }
    let commute_ok = max_commutator <= tol.subspace_abs();
    let right_algebra = generate(e.num_pairs(), &rights, tol)?;
    let comm = commutant_of(&fm.algebra, tol)?;
    Ok(RightCommutantReport {
        commute_ok,
        equality_ok: right_algebra.same_subspace(&comm, tol),
        max_commutator,
    })
}

#[cfg(test)]
mod tests {
    use super::super::FiniteMeasuredSpace;
    use super::*;
    use crate::structure::{block_decompose, trace_with};

    fn tol() -> Tol {
        Tol::default()
    }

    fn rel(weights: &[f64], classes: Vec<Vec<usize>>) -> FiniteEquivRelation {
        FiniteEquivRelation::new(FiniteMeasuredSpace::weighted(weights).unwrap(), classes).unwrap()
    }

    #[test]
    fn fm_examples() {
        let full = rel(&[1.0; 3], vec![vec![0, 1, 2]]);
        let fm = fm_algebra(&full, tol()).unwrap();
        assert_eq!(fm.algebra.dim(), 9);
        assert!(is_factor(&fm.algebra, tol()).unwrap());

        let id = rel(&[1.0; 3], vec![vec![0], vec![1], vec![2]]);
        let fm = fm_algebra(&id, tol()).unwrap();
        assert_eq!(fm.algebra.dim(), 3);
        assert!(fm.algebra.same_subspace(&fm.diag, tol()));

        let two = rel(&[1.0, 2.0, 1.0], vec![vec![0, 1], vec![2]]);
        let fm = fm_algebra(&two, tol()).unwrap();
        let dec = block_decompose(&fm.algebra, tol()).unwrap();
        let profile: Vec<(usize, usize)> = dec.blocks.iter().map(|b| (b.n, b.m)).collect();
        assert_eq!(profile, vec![(2, 2), (1, 1)]);
    }

    #[test]
    fn cartan_examples() {
        let full = rel(&[1.0; 4], vec![vec![0, 1, 2, 3]]);
        let r = cartan_factor_trace(&full, tol()).unwrap();
        assert!(r.maximal_abelian && r.regular && r.is_factor);
        let tau = r.tau.unwrap();
        let f = [c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)];
        let la = build_left_operator(&full, &Kernel::diagonal(&full, &f).unwrap()).unwrap();
        assert!((trace_with(&tau, &la).re - 0.5).abs() < 1e-12);

        let id = rel(&[1.0, 2.0], vec![vec![0], vec![1]]);
        let r = cartan_factor_trace(&id, tol()).unwrap();
        assert!(r.maximal_abelian && !r.is_factor);

        let two = rel(&[1.0; 4], vec![vec![0, 2], vec![1, 3]]);
        let r = cartan_factor_trace(&two, tol()).unwrap();
        assert!(r.maximal_abelian && r.regular && !r.is_factor);

        let weighted = rel(&[1.0, 2.0], vec![vec![0, 1]]);
        assert!(cartan_factor_trace(&weighted, tol()).unwrap().tau.is_none());
    }

    #[test]
    fn right_commutant_examples() {
        for e in [
            rel(&[1.0; 3], vec![vec![0], vec![1], vec![2]]),
            rel(&[1.0; 3], vec![vec![0, 1, 2]]),
            rel(&[1.0, 2.0], vec![vec![0, 1]]),
        ] {
            let r = right_commutant_check(&e, tol()).unwrap();
            assert!(r.commute_ok && r.equality_ok, "{:?}", e.classes());
        }
    }

    #[test]
    fn standard_form_round_trip() {
        let e = rel(&[1.0, 2.0, 3.0, 1.0], vec![vec![0, 1, 3], vec![2]]);
        let a = Kernel::from_fn(&e, |x, y| c64(x as f64 - y as f64, 0.25 * (x + y) as f64));
        let la = build_left_operator(&e, &a).unwrap();
        let sf = standard_form(&e, &la).unwrap();
        assert_eq!(sf.shifts.len(), 3);
        assert!(sf.residual < 1e-12);
        assert!(fm_membership_residual(&e, &Mat::identity(e.num_pairs())).unwrap() < 1e-15);
        let outside = Mat::unit(e.num_pairs(), 0, 1);
        assert!(fm_membership_residual(&e, &outside).unwrap() > 0.5);
    }
}
