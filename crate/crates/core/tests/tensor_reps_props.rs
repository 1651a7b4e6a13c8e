mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use vonlab_core::algebra::is_factor;
use vonlab_core::reps::{intertwiners, is_disjoint, mackey_decompose, reassemble, UnitaryRep};
use vonlab_core::structure::{canonical_trace, trace_with};
use vonlab_core::tensor::{itpfi_truncate, kron_algebra, left_multiplication, EigenvalueList};
use vonlab_core::{Mat, OperatorAlgebra};

fn random_list(rng: &mut impl Rng, k: usize, uniform: bool) -> EigenvalueList {
    let rows = (0..k)
        .map(|_| {
            if uniform {
                vec![0.5, 0.5]
            } else {
                let a: f64 = rng.gen_range(0.05..0.45);
                vec![a, 1.0 - a]
            }
        })
        .collect();
    EigenvalueList::new(rows).unwrap()
}

/// Direct sum of `S_3` irreducibles with the given multiplicities, in a
/// random basis.
fn s3_rep(rng: &mut impl Rng, mult: [usize; 3]) -> UnitaryRep {
    let (g, _) = symmetric_with_perms(3);
    let irreps = [UnitaryRep::trivial(&g, 1), sign_rep_s3(), standard_rep_s3()];
    let mut out: Option<UnitaryRep> = None;
    for (r, &m) in irreps.iter().zip(&mult) {
        for _ in 0..m {
            out = Some(match out {
                None => r.clone(),
                Some(o) => o.direct_sum(r).unwrap(),
            });
        }
    }
    let rep = out.unwrap_or_else(|| UnitaryRep::trivial(&g, 1));
    rep.conjugated_by(&rand_unitary(rng, rep.dim()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn phi_is_a_state(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = rng(seed);
        let tr = itpfi_truncate(&random_list(&mut rng, k, false), k).unwrap();
        let n = tr.size();
        prop_assert!((tr.phi(&Mat::identity(n * n)) - 1.0).norm() < 1e-12);
        for _ in 0..10 {
            let x = left_multiplication(&tr.dims, &rand_mat(&mut rng, n, n));
            prop_assert!(tr.phi(&x.adjoint().matmul(&x)).re >= -1e-12);
        }
    }

    #[test]
    fn rho_spectrum_is_product_measure(seed in any::<u64>(), k in 1usize..5) {
        let mut rng = rng(seed);
        let list = random_list(&mut rng, k, false);
        let tr = itpfi_truncate(&list, k).unwrap();
        let mut want = vec![1.0];
        for row in list.rows() {
            want = want.iter().flat_map(|w| row.iter().map(move |r| w * r)).collect();
        }
        let mut got = tr.rho_eigenvalues();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn tracial_iff_uniform_iff_trace(seed in any::<u64>(), k in 1usize..4, uniform in any::<bool>()) {
        let mut rng = rng(seed);
        let tr = itpfi_truncate(&random_list(&mut rng, k, uniform), k).unwrap();
        prop_assert_eq!(tr.tracial, uniform);
        let alg = tr.algebra.as_ref().unwrap();
        let canon = canonical_trace(alg, tol()).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let coords: Vec<_> = (0..alg.dim()).map(|_| rand_c(&mut rng)).collect();
            let x = alg.from_coordinates(&coords);
            worst = worst.max((tr.phi(&x) - trace_with(&canon, &x)).norm());
        }
        prop_assert_eq!(worst < 1e-9, uniform);
    }

    #[test]
    fn intertwiner_dimension_matches_characters(
        seed in any::<u64>(),
        a in prop::array::uniform3(0usize..3),
        b in prop::array::uniform3(0usize..3),
    ) {
        let mut rng = rng(seed);
        let pi = s3_rep(&mut rng, a);
        let sigma = s3_rep(&mut rng, b);
        let oracle = character_inner(&pi, &sigma).round() as usize;
        prop_assert_eq!(intertwiners(&pi, &sigma, tol()).unwrap().len(), oracle);
    }

    #[test]
    fn mackey_pieces(seed in any::<u64>(), m in prop::array::uniform3(0usize..3)) {
        let mut rng = rng(seed);
        let pi = s3_rep(&mut rng, m);
        let pieces = mackey_decompose(&pi, tol()).unwrap();
        let mut sum = Mat::zeros(pi.dim(), pi.dim());
        for (i, p) in pieces.iter().enumerate() {
            sum += &p.z;
            for u in pi.matrices() {
                prop_assert!(p.z.commutator(u).max_abs() < 1e-8);
            }
            for q in &pieces[..i] {
                prop_assert!(is_disjoint(&p.sub, &q.sub, tol()).unwrap());
            }
        }
        prop_assert!(sum.dist(&Mat::identity(pi.dim())) < 1e-8);
        for g in 0..6 {
            prop_assert!(reassemble(&pieces, g).dist(&pi.matrices()[g]) < 1e-8);
        }
    }
}

#[test]
fn kron_of_factors_is_factor() {
    let factors = [
        OperatorAlgebra::full(1),
        OperatorAlgebra::full(2),
        OperatorAlgebra::full(3),
        OperatorAlgebra::scalars(2),
    ];
    for a in &factors {
        for b in &factors {
            let k = kron_algebra(a, b);
            assert_eq!(k.dim(), a.dim() * b.dim());
            assert!(is_factor(&k, tol()).unwrap());
        }
    }
    let d = OperatorAlgebra::diagonal(2);
    assert!(!is_factor(&kron_algebra(&d, &OperatorAlgebra::full(2)), tol()).unwrap());
}

#[test]
fn mackey_with_noisy_center_basis() {
    let mut rng = rng(13117827903011396395);
    let pi = s3_rep(&mut rng, [1, 2, 0]);
    let pieces = mackey_decompose(&pi, tol()).unwrap();
    let profile: Vec<_> = pieces.iter().map(|p| (p.irrep_dim, p.multiplicity)).collect();
    assert_eq!(profile, vec![(1, 2), (1, 1)]);
}
