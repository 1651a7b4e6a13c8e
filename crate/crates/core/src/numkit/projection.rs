use super::decomp::eigh;
use super::{Mat, Tol};

/// `‖p² − p‖ + ‖p − p*‖` (Hilbert–Schmidt norms).
pub fn projection_defect(p: &Mat) -> f64 {
    if !p.is_square() {
        return f64::INFINITY;
    }
    p.matmul(p).dist(p) + p.dist(&p.adjoint())
}

pub fn is_projection(p: &Mat, tol: Tol) -> bool {
    projection_defect(p) < tol.bound(p.fro_norm())
}

/// Orthonormal basis of the range of a (near-)projection: eigenvectors of its
/// Hermitian part with eigenvalue above 1/2.
pub fn range_basis(p: &Mat) -> Mat {
    let n = p.rows();
    let (vals, vecs) = eigh(p);
    let keep: alloc::vec::Vec<usize> = (0..n).filter(|&k| vals[k] > 0.5).collect();
    Mat::from_fn(n, keep.len(), |i, j| vecs[(i, keep[j])])
}

/// Nearest exact projection (eigenvalues rounded to 0 or 1) and its rank.
pub fn snap_projection(p: &Mat) -> (Mat, usize) {
    let q = range_basis(p);
    let rank = q.cols();
    (q.matmul(&q.adjoint()), rank)
}

/// Projection onto the range of a positive semidefinite matrix.
///
/// Eigenvalues count when above `rank_rel · max(‖h‖, scale)`; pass the norm
/// of the inputs `h` was formed from as `scale` so that a sum cancelling to
/// roundoff has empty support.
pub fn support_projection(h: &Mat, scale: f64, tol: Tol) -> Mat {
    let n = h.rows();
    let (vals, vecs) = eigh(h);
    let top = vals.iter().fold(scale, |m, v| m.max(v.abs()));
    let keep: alloc::vec::Vec<usize> = (0..n)
        .filter(|&k| top > 0.0 && vals[k] > tol.rank_rel() * top)
        .collect();
    let q = Mat::from_fn(n, keep.len(), |i, j| vecs[(i, keep[j])]);
    q.matmul(&q.adjoint())
}
