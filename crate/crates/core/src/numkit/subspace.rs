use alloc::vec::Vec;

use super::decomp::{qr_r, svd};
use super::{Mat, Tol};
use crate::error::{Error, Result};

/// Incremental Gram–Schmidt over matrices of one fixed shape.
///
/// Each candidate is orthogonalized twice against the current basis; it is
/// kept when the residual exceeds `subspace_abs·(1 + ‖v‖)`, the same criterion
/// the membership test uses, so "rejected" and "contained" agree.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    shape: (usize, usize),
    basis: Vec<Mat>,
    tol: Tol,
}

impl SpanBuilder {
    pub fn new(rows: usize, cols: usize, tol: Tol) -> Self {
        SpanBuilder {
            shape: (rows, cols),
            basis: Vec::new(),
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Mat> {
        self.basis
    }

    /// Component of `v` orthogonal to the current span.
    pub fn residual(&self, v: &Mat) -> Mat {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = r.hs_inner(b);
                r.axpy(-c, b);
            }
        }
        r
    }

    /// Adds `v` if it is not already in the span; returns whether it was added.
    pub fn push(&mut self, v: &Mat) -> Result<bool> {
        if v.shape() != self.shape {
            return Err(Error::validation(alloc::format!(
                "span input of shape {}x{} does not match {}x{}",
                v.rows(),
                v.cols(),
                self.shape.0,
                self.shape.1
            )));
        }
        let r = self.residual(v);
        let rn = r.fro_norm();
        if rn <= self.tol.bound(v.fro_norm()) {
            return Ok(false);
        }
        self.basis.push(r.scale_real(1.0 / rn));
        Ok(true)
    }
}

/// Orthonormal basis (Hilbert–Schmidt) of the span of `vectors`.
/// Deterministic for a fixed input order.
pub fn span_basis(vectors: &[Mat], tol: Tol) -> Result<Vec<Mat>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let mut sb = SpanBuilder::new(first.rows(), first.cols(), tol);
    for v in vectors {
        sb.push(v)?;
    }
    Ok(sb.into_basis())
}

/// Singular values at least `rank_rel · max(σ_1, scale)`.
fn split_by_rank(sigma: &[f64], tol: Tol, scale: f64) -> usize {
    let top = sigma.first().copied().unwrap_or(0.0).max(scale);
    if top == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s >= tol.rank_rel() * top).count()
}

/// Number of singular values at least `rank_rel` times the largest.
pub fn numerical_rank(a: &Mat, tol: Tol) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    let r = qr_r(a);
    split_by_rank(&svd(&r).sigma, tol, 0.0)
}

/// Orthonormal basis of the numerical kernel of `a`, as the columns of a
/// `cols × k` matrix with `k = cols − numerical_rank(a)`.
pub fn nullspace(a: &Mat, tol: Tol) -> Mat {
    nullspace_scaled(a, tol, 0.0)
}

fn nullspace_scaled(a: &Mat, tol: Tol, scale: f64) -> Mat {
    let n = a.cols();
    if a.rows() == 0 {
        return Mat::identity(n);
    }
    let r = qr_r(a);
    let s = svd(&r);
    let rank = split_by_rank(&s.sigma, tol, scale);
    Mat::from_fn(n, n - rank, |i, j| s.v[(i, rank + j)])
}

/// Homogeneous linear system assembled block by block.
///
/// Rows are folded into a triangular factor as they arrive, so memory stays at
/// `O(cols²)` however many equation blocks are pushed.
///
/// Rank decisions are relative to the largest singular value, or to the
/// largest scale declared through [`StackedSystem::push_scaled`] if that is
/// bigger. A block built from an operator that is zero up to roundoff then
/// counts as zero instead of as a full-rank equation.
#[derive(Clone, Debug)]
pub struct StackedSystem {
    cols: usize,
    acc: Option<Mat>,
    scale: f64,
}

impl StackedSystem {
    pub fn new(cols: usize) -> Self {
        StackedSystem {
            cols,
            acc: None,
            scale: 0.0,
        }
    }

    /// Adds `block` whose natural magnitude is `scale` (e.g. the norm of the
    /// operator it was built from).
    pub fn push_scaled(&mut self, block: &Mat, scale: f64) {
        self.scale = self.scale.max(scale);
        self.push(block);
    }

    pub fn push(&mut self, block: &Mat) {
        assert_eq!(block.cols(), self.cols, "equation block width mismatch");
        let stacked = match self.acc.take() {
            None => block.clone(),
            Some(r) => Mat::vstack(&r, block),
        };
        self.acc = Some(if stacked.rows() > self.cols {
            qr_r(&stacked)
        } else {
            stacked
        });
    }

    /// Orthonormal basis of the joint kernel (columns).
    pub fn solve(&self, tol: Tol) -> Mat {
        match &self.acc {
            None => Mat::identity(self.cols),
            Some(r) => nullspace_scaled(r, tol, self.scale),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::c64;
    use super::*;
    use alloc::vec;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn span_of_colinear_inputs() {
        let i2 = Mat::identity(2);
        let b = span_basis(&[i2.clone(), i2.scale_real(2.0)], tol()).unwrap();
        assert_eq!(b.len(), 1);
        let expected = i2.scale_real(1.0 / super::super::sqrt(2.0));
        assert!(b[0].dist(&expected) < 1e-14);
    }

    #[test]
    fn span_of_nothing_is_empty() {
        assert!(span_basis(&[], tol()).unwrap().is_empty());
    }

    #[test]
    fn span_of_matrix_units() {
        let units: Vec<Mat> = (0..4).map(|k| Mat::unit(2, k / 2, k % 2)).collect();
        let b = span_basis(&units, tol()).unwrap();
        assert_eq!(b.len(), 4);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((x.hs_inner(y) - c64(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn span_rejects_shape_mismatch() {
        let err = span_basis(&[Mat::identity(2), Mat::identity(3)], tol()).unwrap_err();
        assert!(err.is_validation());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&Mat::zeros(3, 3), tol()).cols(), 3);
        assert_eq!(nullspace(&Mat::identity(3), tol()).cols(), 0);
        let k = nullspace(&Mat::diag_real(&[1.0, 0.0]), tol());
        assert_eq!(k.cols(), 1);
        assert!(k[(0, 0)].norm() < 1e-14);
        assert!((k[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stacked_matches_direct() {
        let a = Mat::from_real(2, 3, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = Mat::from_real(1, 3, &[1.0, 0.0, -1.0]).unwrap();
        let mut sys = StackedSystem::new(3);
        sys.push(&a);
        sys.push(&b);
        sys.push(&a);
        let k = sys.solve(tol());
        assert_eq!(k.cols(), 1);
        assert!(a.matmul(&k).fro_norm() < 1e-12);
        assert_eq!(numerical_rank(&Mat::vstack(&a, &b), tol()), 2);
        let _ = vec![0];
    }
}
