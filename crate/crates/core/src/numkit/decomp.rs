//! Jacobi eigen/singular-value solvers and a Householder triangularization.
//!
//! Jacobi methods are slow compared with tridiagonal QR, but at the matrix
//! sizes this crate handles (a few hundred at most) they are fast enough and
//! they deliver small singular values to high relative accuracy, which is what
//! the rank decisions downstream depend on.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::{Mat, C64};

const MAX_SWEEPS: usize = 100;

/// Plane rotation that diagonalizes the Hermitian 2×2 block
/// `[[a, g], [conj(g), b]]`; returns `(c, s, phase)` for
/// `J = [[c, s·phase], [−s·conj(phase), c]]`.
#[inline]
fn jacobi_rotation(a: f64, b: f64, g: C64) -> (f64, f64, C64) {
    let abs = g.norm();
    let phase = g / abs;
    let theta = (b - a) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (theta.abs() + Float::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / Float::sqrt(1.0 + t * t);
    (c, t * c, phase)
}

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian
/// matrix. Only the Hermitian part of `h` is used.
pub(crate) fn eigh(h: &Mat) -> (Vec<f64>, Mat) {
    assert!(h.is_square(), "eigh needs a square matrix");
    let n = h.rows();
    let herm = h.real_part();
    let mut a: Vec<C64> = herm.into_data();
    let mut v = Mat::identity(n).into_data();
    let norm = Float::sqrt(a.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if n > 1 && norm > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let g = a[p * n + q];
                    let abs = g.norm();
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    if abs <= 1e-18 * norm
                        || abs <= 0.25 * f64::EPSILON * Float::sqrt((app * aqq).abs())
                    {
                        continue;
                    }
                    rotated = true;
                    let (c, s, ph) = jacobi_rotation(app, aqq, g);
                    let phc = ph.conj();
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * c - phc * akq * s;
                        a[k * n + q] = ph * akp * s + akq * c;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = apk * c - ph * aqk * s;
                        a[q * n + k] = phc * apk * s + aqk * c;
                    }
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    a[p * n + p].im = 0.0;
                    a[q * n + q].im = 0.0;
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - phc * vkq * s;
                        v[k * n + q] = ph * vkp * s + vkq * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vecs = Mat::from_fn(n, n, |i, j| v[i * n + order[j]]);
    (values, vecs)
}

/// Thin singular value decomposition `A = U·diag(sigma)·V*`, singular values
/// sorted descending. `u` is `m × n`; columns belonging to zero singular
/// values are zero.
pub(crate) struct Svd {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

/// One-sided (Hestenes) Jacobi SVD.
pub(crate) fn svd(a: &Mat) -> Svd {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let total: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    if n > 1 && total > 0.0 {
        let floor = 1e-36 * total;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let (left, right) = cols.split_at_mut(q);
                    let cp = &mut left[p];
                    let cq = &mut right[0];
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = C64::new(0.0, 0.0);
                    for (x, y) in cp.iter().zip(cq.iter()) {
                        alpha += x.norm_sqr();
                        beta += y.norm_sqr();
                        gamma += x.conj() * y;
                    }
                    let gabs = gamma.norm();
                    if gabs * gabs <= floor || gabs <= 0.5 * f64::EPSILON * Float::sqrt(alpha * beta)
                    {
                        continue;
                    }
                    rotated = true;
                    let (c, s, ph) = jacobi_rotation(alpha, beta, gamma);
                    let phc = ph.conj();
                    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                        let (xp, xq) = (*x, *y);
                        *x = xp * c - phc * xq * s;
                        *y = ph * xp * s + xq * c;
                    }
                    let (vl, vr) = vcols.split_at_mut(q);
                    for (x, y) in vl[p].iter_mut().zip(vr[0].iter_mut()) {
                        let (xp, xq) = (*x, *y);
                        *x = xp * c - phc * xq * s;
                        *y = ph * xp * s + xq * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }
    let norms: Vec<f64> = cols
        .iter()
        .map(|c| Float::sqrt(c.iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = Mat::from_fn(m, n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            cols[j][i] / norms[j]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = Mat::from_fn(n, n, |i, k| vcols[order[k]][i]);
    Svd { u, sigma, v }
}

/// Upper-triangular factor `R` (`n × n`) of a Householder QR of a tall
/// `m × n` matrix. `R` has the same singular values and right singular
/// vectors as `a`.
pub(crate) fn qr_r(a: &Mat) -> Mat {
    let (m, n) = a.shape();
    if m <= n {
        return a.clone();
    }
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v = vec![C64::new(0.0, 0.0); m];
    for k in 0..n {
        let alpha = Float::sqrt(cols[k][k..].iter().map(|z| z.norm_sqr()).sum::<f64>());
        if alpha == 0.0 {
            continue;
        }
        let x0 = cols[k][k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        v[k..].copy_from_slice(&cols[k][k..]);
        v[k] += phase * alpha;
        let beta: f64 = v[k..].iter().map(|z| z.norm_sqr()).sum();
        if beta == 0.0 {
            continue;
        }
        for col in cols.iter_mut().skip(k) {
            let dot: C64 = v[k..].iter().zip(&col[k..]).map(|(vi, ci)| vi.conj() * ci).sum();
            let f = dot * (2.0 / beta);
            for (ci, vi) in col[k..].iter_mut().zip(&v[k..]) {
                *ci -= f * vi;
            }
        }
    }
    Mat::from_fn(n, n, |i, j| if i <= j { cols[j][i] } else { C64::new(0.0, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(m: usize, n: usize, seed: u64) -> Mat {
        // Small LCG so the unit tests stay dependency free.
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        Mat::from_fn(m, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn eigh_reconstructs_hermitian() {
        let a = sample(6, 6, 7);
        let h = &a + &a.adjoint();
        let (vals, v) = eigh(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = Mat::diag_real(&vals);
        let back = v.matmul(&d).matmul(&v.adjoint());
        assert!(back.dist(&h) < 1e-12);
        assert!(v.adjoint().matmul(&v).dist(&Mat::identity(6)) < 1e-12);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        for &(m, n) in &[(5, 3), (3, 5), (4, 4)] {
            let a = sample(m, n, 11 + m as u64);
            let s = svd(&a);
            let k = n;
            let mut sig = Mat::zeros(k, k);
            for i in 0..k {
                sig[(i, i)] = C64::new(s.sigma[i], 0.0);
            }
            let back = s.u.matmul(&sig).matmul(&s.v.adjoint());
            assert!(back.dist(&a) < 1e-12, "{m}x{n}");
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn qr_r_preserves_gram() {
        let a = sample(9, 4, 3);
        let r = qr_r(&a);
        let g1 = a.adjoint().matmul(&a);
        let g2 = r.adjoint().matmul(&r);
        assert!(g1.dist(&g2) < 1e-12);
    }
}
