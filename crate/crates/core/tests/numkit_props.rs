mod common;

use common::*;
use proptest::prelude::*;
use vonlab_core::numkit::{
    herm_eig, nullspace, numerical_rank, op_norm, polar_decompose, span_basis, support_projection,
};
use vonlab_core::Mat;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_star_identity(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = rng(seed);
        let t = rand_mat(&mut rng, n, n);
        let lhs = op_norm(&t.adjoint().matmul(&t));
        let rhs = op_norm(&t).powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
    }

    #[test]
    fn polar_factor_is_partial_isometry(seed in any::<u64>(), n in 1usize..7, rank in 0usize..7) {
        let mut rng = rng(seed);
        let rank = rank.min(n);
        // rank-deficient products exercise the kernel of T
        let t = rand_mat(&mut rng, n, rank.max(1)).matmul(&rand_mat(&mut rng, rank.max(1), n));
        let t = if rank == 0 { Mat::zeros(n, n) } else { t };
        let p = polar_decompose(&t, tol()).unwrap();
        let u = &p.u;
        prop_assert!(u.matmul(&u.adjoint()).matmul(u).dist(u) < 1e-9);
        prop_assert!(u.matmul(&p.abs).dist(&t) < 1e-9);
    }

    #[test]
    fn span_is_idempotent(seed in any::<u64>(), k in 1usize..8) {
        let mut rng = rng(seed);
        let base: Vec<Mat> = (0..3).map(|_| rand_mat(&mut rng, 2, 2)).collect();
        // redundant combinations of three vectors
        let vs: Vec<Mat> = (0..k)
            .map(|_| {
                let mut v = Mat::zeros(2, 2);
                for b in &base {
                    v.axpy(rand_c(&mut rng), b);
                }
                v
            })
            .collect();
        let once = span_basis(&vs, tol()).unwrap();
        let twice = span_basis(&once, tol()).unwrap();
        prop_assert_eq!(once.len(), k.min(3));
        prop_assert_eq!(once.len(), twice.len());
        for v in &once {
            let mut r = v.clone();
            for b in &twice {
                r.axpy(-b.hs_inner(v), b);
            }
            prop_assert!(r.fro_norm() < 1e-8);
        }
    }

    #[test]
    fn nullity_plus_rank(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8, r in 0usize..8) {
        let mut rng = rng(seed);
        let r = r.min(rows).min(cols);
        let a = if r == 0 {
            Mat::zeros(rows, cols)
        } else {
            rand_mat(&mut rng, rows, r).matmul(&rand_mat(&mut rng, r, cols))
        };
        let rank = numerical_rank(&a, tol());
        prop_assert_eq!(rank, r);
        let ns = nullspace(&a, tol());
        prop_assert_eq!(ns.cols() + rank, cols);
        prop_assert!(a.matmul(&ns).fro_norm() < 1e-8 * (1.0 + a.fro_norm()));
    }

    #[test]
    fn spectral_decomposition_reconstructs(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = rng(seed);
        let x = rand_mat(&mut rng, n, n);
        let h = &x + &x.adjoint();
        let sd = herm_eig(&h, tol()).unwrap();
        prop_assert!(sd.reconstruct().dist(&h) < 1e-9);
        let mut sum = Mat::zeros(n, n);
        for p in &sd.projections {
            sum += p;
        }
        prop_assert!(sum.dist(&Mat::identity(n)) < 1e-9);
    }
}

#[test]
fn support_of_cancelled_sum_is_empty() {
    let mut rng = rng(3);
    let u = rand_unitary(&mut rng, 4);
    let p = u.matmul(&u.adjoint());
    let id = Mat::identity(4);
    let co = &(&id - &p) + &(&id - &p);
    assert_eq!(support_projection(&co, 2.0, tol()).trace().re.round(), 0.0);
    let q = rand_projection(&mut rng, 4, 2);
    assert!(support_projection(&q, 1.0, tol()).dist(&q) < 1e-9);
}
