mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use vonlab_core::algebra::{generate, is_factor};
use vonlab_core::numkit::span_basis;
use vonlab_core::structure::{block_decompose, canonical_trace, trace_with, Comparison};
use vonlab_core::{Mat, OperatorAlgebra};

/// `U (⊕ M_{n_i} ⊗ I_{m_i}) U*` from random generators.
fn random_algebra(rng: &mut impl Rng, blocks: &[(usize, usize)]) -> OperatorAlgebra {
    let d: usize = blocks.iter().map(|(n, m)| n * m).sum();
    let u = rand_unitary(rng, d);
    let gens: Vec<Mat> = (0..2)
        .map(|_| {
            let parts: Vec<Mat> = blocks
                .iter()
                .map(|&(n, m)| rand_mat(rng, n, n).kron(&Mat::identity(m)))
                .collect();
            u.conjugate(&Mat::direct_sum(&parts))
        })
        .collect();
    generate(d, &gens, tol()).unwrap()
}

fn random_projection_in(rng: &mut impl Rng, cmp: &Comparison) -> Mat {
    let dec = cmp.decomposition();
    let comps: Vec<Mat> = dec
        .blocks
        .iter()
        .map(|b| {
            let r = rng.gen_range(0..=b.n);
            rand_projection(rng, b.n, r)
        })
        .collect();
    cmp.projection(&dec.assemble(&comps), "p").unwrap()
}

const SHAPES: [&[(usize, usize)]; 6] = [
    &[(2, 1)],
    &[(3, 2)],
    &[(2, 2), (1, 1)],
    &[(1, 1), (1, 2), (2, 1)],
    &[(4, 2)],
    &[(2, 1), (2, 1)],
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_matches_trace_in_factors(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = rng(seed);
        let m = random_algebra(&mut rng, &[(n, 8 / n)]);
        let cmp = Comparison::new(&m, tol()).unwrap();
        let tau = canonical_trace(&m, tol()).unwrap();
        for _ in 0..10 {
            let p = random_projection_in(&mut rng, &cmp);
            let q = random_projection_in(&mut rng, &cmp);
            let same = (trace_with(&tau, &p) - trace_with(&tau, &q)).norm() < 1e-9;
            prop_assert_eq!(cmp.mvn_equivalent(&p, &q).unwrap().equivalent, same);
        }
    }

    #[test]
    fn subordination_total_iff_factor(seed in any::<u64>(), shape in 0usize..6) {
        let mut rng = rng(seed);
        let m = random_algebra(&mut rng, SHAPES[shape]);
        let cmp = Comparison::new(&m, tol()).unwrap();
        let factor = is_factor(&m, tol()).unwrap();
        let dec = cmp.decomposition();
        let mut total = true;
        let mut samples: Vec<Mat> = (0..8).map(|_| random_projection_in(&mut rng, &cmp)).collect();
        if dec.blocks.len() >= 2 {
            // minimal projections under different central supports
            for i in 0..2 {
                let comps: Vec<Mat> = dec
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(j, b)| if j == i { Mat::unit(b.n, 0, 0) } else { Mat::zeros(b.n, b.n) })
                    .collect();
                samples.push(dec.assemble(&comps));
            }
        }
        for p in &samples {
            for q in &samples {
                if !cmp.subordinate(p, q).unwrap() && !cmp.subordinate(q, p).unwrap() {
                    total = false;
                }
            }
        }
        prop_assert_eq!(total, factor);
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(seed in any::<u64>(), shape in 0usize..6) {
        let mut rng = rng(seed);
        let m = random_algebra(&mut rng, SHAPES[shape]);
        let cmp = Comparison::new(&m, tol()).unwrap();
        let p = random_projection_in(&mut rng, &cmp);
        // a unitary conjugate inside M is equivalent to p
        let dec = cmp.decomposition();
        let us: Vec<Mat> = dec.blocks.iter().map(|b| rand_unitary(&mut rng, b.n)).collect();
        let u = dec.assemble(&us);
        let q = cmp.projection(&u.conjugate(&p), "q").unwrap();
        let r = cmp.projection(&dec.assemble(&dec.blocks.iter().map(|b| rand_unitary(&mut rng, b.n)).collect::<Vec<_>>()).conjugate(&q), "r").unwrap();
        let pp = cmp.mvn_equivalent(&p, &p).unwrap();
        prop_assert!(pp.equivalent);
        let pq = cmp.mvn_equivalent(&p, &q).unwrap();
        let qp = cmp.mvn_equivalent(&q, &p).unwrap();
        let qr = cmp.mvn_equivalent(&q, &r).unwrap();
        prop_assert!(pq.equivalent && qp.equivalent && qr.equivalent);
        let w = qr.witness.unwrap().matmul(&pq.witness.unwrap());
        prop_assert!(w.adjoint().matmul(&w).dist(&p) < 1e-8);
        prop_assert!(w.matmul(&w.adjoint()).dist(&r) < 1e-8);
        prop_assert!(m.contains(&w, tol()).unwrap());
    }

    #[test]
    fn reassembled_basis_spans_algebra(seed in any::<u64>(), shape in 0usize..6) {
        let mut rng = rng(seed);
        let m = random_algebra(&mut rng, SHAPES[shape]);
        let dec = block_decompose(&m, tol()).unwrap();
        let basis = span_basis(&dec.reassembled_basis(), tol()).unwrap();
        prop_assert_eq!(basis.len(), m.dim());
        for b in &basis {
            prop_assert!(m.residual(b) < 1e-8);
        }
    }

    #[test]
    fn canonical_trace_is_tracial(seed in any::<u64>(), n in 1usize..5, mult in 1usize..3) {
        let mut rng = rng(seed);
        let m = random_algebra(&mut rng, &[(n, mult)]);
        let tau = canonical_trace(&m, tol()).unwrap();
        for _ in 0..100 {
            let cx: Vec<_> = (0..m.dim()).map(|_| rand_c(&mut rng)).collect();
            let cy: Vec<_> = (0..m.dim()).map(|_| rand_c(&mut rng)).collect();
            let x = m.from_coordinates(&cx);
            let y = m.from_coordinates(&cy);
            let r = (trace_with(&tau, &x.matmul(&y)) - trace_with(&tau, &y.matmul(&x))).norm();
            prop_assert!(r < 1e-9);
        }
    }
}
