//! Dense complex linear algebra with explicit tolerances.
//!
//! All orthonormality statements use the un-normalized Hilbert–Schmidt
//! pairing `⟨x, y⟩ = trace(adjoint(y)·x)`, i.e. the Euclidean inner product
//! on the entries.

mod decomp;
mod mat;
mod projection;
mod subspace;

use alloc::vec::Vec;

use num_traits::Float;

pub use mat::Mat;
pub use projection::{
    is_projection, projection_defect, range_basis, snap_projection, support_projection,
};
pub use subspace::{nullspace, numerical_rank, span_basis, SpanBuilder, StackedSystem};

pub(crate) use decomp::{eigh, svd};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

/// Tolerance pair used throughout the crate.
///
/// `rank_rel` is the relative singular-value cutoff for numerical rank;
/// `subspace_abs` bounds residuals in subspace membership and equality tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    rank_rel: f64,
    subspace_abs: f64,
}

impl Tol {
    pub fn new(rank_rel: f64, subspace_abs: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if !ok(rank_rel) || !ok(subspace_abs) {
            return Err(Error::validation(alloc::format!(
                "tolerances must lie in (0, 1): rank_rel = {rank_rel}, subspace_abs = {subspace_abs}"
            )));
        }
        Ok(Tol {
            rank_rel,
            subspace_abs,
        })
    }

    #[inline]
    pub fn rank_rel(&self) -> f64 {
        self.rank_rel
    }

    #[inline]
    pub fn subspace_abs(&self) -> f64 {
        self.subspace_abs
    }

    /// Residual bound for an object of size `norm`.
    #[inline]
    pub(crate) fn bound(&self, norm: f64) -> f64 {
        self.subspace_abs * (1.0 + norm)
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rank_rel: 1e-9,
            subspace_abs: 1e-8,
        }
    }
}

/// Largest singular value.
pub fn op_norm(t: &Mat) -> f64 {
    if t.rows() == 0 || t.cols() == 0 {
        return 0.0;
    }
    let s = if t.cols() <= t.rows() {
        svd(t)
    } else {
        svd(&t.adjoint())
    };
    s.sigma[0]
}

/// Distinct eigenvalues (ascending) with their spectral projections.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub projections: Vec<Mat>,
}

impl SpectralDecomposition {
    /// `Σ λ_k p_k`.
    pub fn reconstruct(&self) -> Mat {
        let n = self.projections.first().map_or(0, Mat::rows);
        let mut out = Mat::zeros(n, n);
        for (v, p) in self.values.iter().zip(&self.projections) {
            out.axpy(c64(*v, 0.0), p);
        }
        out
    }
}

/// Eigenvalue clusters of a Hermitian matrix as `(value, orthonormal columns)`.
pub(crate) fn eigen_clusters(t: &Mat, tol: Tol) -> Result<Vec<(f64, Mat)>> {
    if !t.is_square() {
        return Err(Error::validation("Hermitian eigenproblem needs a square matrix"));
    }
    let defect = t.dist(&t.adjoint());
    if defect > tol.bound(t.fro_norm()) {
        return Err(Error::validation(alloc::format!(
            "matrix is not Hermitian (‖T − T*‖ = {defect:e})"
        )));
    }
    let n = t.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (vals, vecs) = eigh(t);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = tol.rank_rel() * scale;
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || vals[i] - vals[i - 1] > gap {
            groups.push((start, i));
            start = i;
        }
    }
    Ok(groups
        .into_iter()
        .map(|(a, b)| {
            let mean = vals[a..b].iter().sum::<f64>() / (b - a) as f64;
            let cols = Mat::from_fn(n, b - a, |i, j| vecs[(i, a + j)]);
            (mean, cols)
        })
        .collect())
}

/// Spectral decomposition of a Hermitian matrix. Eigenvalues closer than
/// `rank_rel·‖T‖` are merged into one projection.
pub fn herm_eig(t: &Mat, tol: Tol) -> Result<SpectralDecomposition> {
    let clusters = eigen_clusters(t, tol)?;
    let mut values = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for (v, q) in clusters {
        values.push(v);
        projections.push(q.matmul(&q.adjoint()));
    }
    Ok(SpectralDecomposition {
        values,
        projections,
    })
}

/// Polar factors `T = u·|T|`.
#[derive(Clone, Debug)]
pub struct Polar {
    /// Partial isometry with initial space `ker(T)⊥` and final space `ran(T)`.
    pub u: Mat,
    /// `(T*T)^{1/2}`.
    pub abs: Mat,
}

pub fn polar_decompose(t: &Mat, tol: Tol) -> Result<Polar> {
    if !t.is_square() {
        return Err(Error::validation(alloc::format!(
            "polar decomposition needs a square matrix, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let n = t.rows();
    let s = svd(t);
    let cutoff = s.sigma.first().copied().unwrap_or(0.0) * tol.rank_rel();
    let mut u = Mat::zeros(n, n);
    let mut abs = Mat::zeros(n, n);
    for k in 0..n {
        let sk = s.sigma[k];
        if sk <= cutoff || sk == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let vj = s.v[(j, k)].conj();
                u[(i, j)] += s.u[(i, k)] * vj;
                abs[(i, j)] += s.v[(i, k)] * vj * sk;
            }
        }
    }
    let residual = t.dist(&u.matmul(&abs));
    if residual > tol.bound(t.fro_norm()) {
        return Err(Error::numerical("polar decomposition", residual));
    }
    Ok(Polar { u, abs })
}
