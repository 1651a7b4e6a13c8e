#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vonlab_core::dynamics::{FiniteAction, FiniteEquivRelation, FiniteMeasuredSpace};
use vonlab_core::groupvna::FiniteGroup;
use vonlab_core::numkit::polar_decompose;
use vonlab_core::reps::UnitaryRep;
use vonlab_core::{Mat, Tol, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tol {
    Tol::default()
}

pub fn rand_c(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn rand_mat(rng: &mut impl Rng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rand_c(rng))
}

pub fn rand_unitary(rng: &mut impl Rng, n: usize) -> Mat {
    polar_decompose(&rand_mat(rng, n, n), tol()).unwrap().u
}

pub fn rand_projection(rng: &mut impl Rng, n: usize, rank: usize) -> Mat {
    let u = rand_unitary(rng, n);
    let cols: Vec<Mat> = (0..rank).map(|j| u.col(j)).collect();
    if rank == 0 {
        return Mat::zeros(n, n);
    }
    let v = Mat::from_columns(n, &cols);
    v.matmul(&v.adjoint())
}

/// `U·diag(z)·U*` with random eigenvalues, some of them repeated.
pub fn rand_normal(rng: &mut impl Rng, n: usize) -> Mat {
    let u = rand_unitary(rng, n);
    let mut eig: Vec<C64> = (0..n).map(|_| rand_c(rng)).collect();
    if n > 1 && rng.gen_bool(0.5) {
        eig[n - 1] = eig[0];
    }
    u.conjugate(&Mat::diag(&eig))
}

/// Permutations of `0..n` in lexicographic order.
pub fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

pub fn parity(p: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `S_n` together with its elements as permutations, after checking that the
/// table is composition.
pub fn symmetric_with_perms(n: usize) -> (FiniteGroup, Vec<Vec<usize>>) {
    let g = FiniteGroup::symmetric(n).unwrap();
    let perms = lex_permutations(n);
    for a in 0..g.order() {
        for b in 0..g.order() {
            let comp: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
            assert_eq!(perms[g.mul(a, b)], comp, "S_{n} table is not composition");
        }
    }
    (g, perms)
}

pub fn sign_rep_s3() -> UnitaryRep {
    let (g, perms) = symmetric_with_perms(3);
    let m = perms.iter().map(|p| Mat::diag_real(&[parity(p)])).collect();
    UnitaryRep::new(g, m, tol()).unwrap()
}

/// The 2-dimensional irreducible of `S_3` on the sum-zero plane.
pub fn standard_rep_s3() -> UnitaryRep {
    let (g, perms) = symmetric_with_perms(3);
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let q = Mat::from_real(3, 2, &[1.0 / s2, 1.0 / s6, -1.0 / s2, 1.0 / s6, 0.0, -2.0 / s6]).unwrap();
    let m = perms
        .iter()
        .map(|p| {
            let mut pm = Mat::zeros(3, 3);
            for (i, &pi) in p.iter().enumerate() {
                pm[(pi, i)] = C64::new(1.0, 0.0);
            }
            q.adjoint().matmul(&pm).matmul(&q)
        })
        .collect();
    UnitaryRep::new(g, m, tol()).unwrap()
}

pub fn cyclic_character(n: usize, k: usize) -> UnitaryRep {
    let g = FiniteGroup::cyclic(n).unwrap();
    let vals: Vec<C64> = (0..n)
        .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64))
        .collect();
    UnitaryRep::character(&g, &vals, tol()).unwrap()
}

/// The 2-dimensional irreducible of `Q_8` (order `1, −1, i, −i, j, −j, k, −k`).
pub fn quaternion_rep() -> UnitaryRep {
    let g = FiniteGroup::quaternion().unwrap();
    let c = |re: f64, im: f64| C64::new(re, im);
    let one = Mat::identity(2);
    let i = Mat::from_vec(2, 2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
    let j = Mat::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let k = i.matmul(&j);
    let m = [one, i, j, k]
        .into_iter()
        .flat_map(|u| [u.clone(), u.scale_real(-1.0)])
        .collect();
    UnitaryRep::new(g, m, tol()).unwrap()
}

/// `⟨χ_π, χ_σ⟩ = |G|⁻¹ Σ conj(tr π_γ)·tr σ_γ`, which is `dim Hom(π, σ)`.
pub fn character_inner(pi: &UnitaryRep, sigma: &UnitaryRep) -> f64 {
    let n = pi.matrices().len() as f64;
    let s: C64 = pi
        .matrices()
        .iter()
        .zip(sigma.matrices())
        .map(|(a, b)| a.trace().conj() * b.trace())
        .sum();
    assert!(s.im.abs() / n < 1e-9);
    s.re / n
}

/// Conjugacy classes counted by brute force.
pub fn class_count(g: &FiniteGroup) -> usize {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut count = 0;
    for a in 0..n {
        if seen[a] {
            continue;
        }
        count += 1;
        for x in 0..n {
            let c = g.mul(g.mul(x, a), g.inv(x));
            seen[c] = true;
        }
    }
    count
}

/// Cyclic subgroup generated by `h`.
pub fn cyclic_subgroup(g: &FiniteGroup, h: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut x = h;
    while x != 0 {
        out.push(x);
        x = g.mul(x, h);
    }
    out.sort();
    out
}

/// Left action of `G` on the cosets `aH`.
pub fn coset_map(g: &FiniteGroup, h: &[usize]) -> Vec<Vec<usize>> {
    let rep = |a: usize| h.iter().map(|&x| g.mul(a, x)).min().unwrap();
    let mut reps: Vec<usize> = (0..g.order()).map(rep).collect();
    reps.sort();
    reps.dedup();
    (0..g.order())
        .map(|x| {
            reps.iter()
                .map(|&r| reps.binary_search(&rep(g.mul(x, r))).unwrap())
                .collect()
        })
        .collect()
}

/// Disjoint union of coset actions of one group, orbit `i` weighted `w[i]`
/// per point.
pub fn coset_action(g: &FiniteGroup, subgroups: &[Vec<usize>], w: &[f64]) -> FiniteAction {
    let maps: Vec<Vec<Vec<usize>>> = subgroups.iter().map(|h| coset_map(g, h)).collect();
    let mut weights = Vec::new();
    let mut map = vec![Vec::new(); g.order()];
    let mut offset = 0;
    for (m, &wi) in maps.iter().zip(w) {
        let size = m[0].len();
        weights.extend(std::iter::repeat_n(wi, size));
        for (x, row) in m.iter().enumerate() {
            map[x].extend(row.iter().map(|y| y + offset));
        }
        offset += size;
    }
    FiniteAction::new(g.clone(), FiniteMeasuredSpace::weighted(&weights).unwrap(), map).unwrap()
}

/// Twenty measure-preserving actions; free and ergodic flags as stated.
pub fn action_corpus() -> Vec<(FiniteAction, bool, bool)> {
    let c = |n| FiniteGroup::cyclic(n).unwrap();
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let d4 = FiniteGroup::dihedral(4).unwrap();
    let q8 = FiniteGroup::quaternion().unwrap();
    let triv = vec![0];
    let whole = |g: &FiniteGroup| (0..g.order()).collect::<Vec<_>>();
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push((coset_action(&c(n), std::slice::from_ref(&triv), &[1.0]), true, true));
    }
    for g in [&s3, &d4, &q8] {
        out.push((coset_action(g, std::slice::from_ref(&triv), &[0.5]), true, true));
    }
    let transposition = (1..6).find(|&a| s3.mul(a, a) == 0).unwrap();
    let three_cycle = (1..6).find(|&a| s3.mul(a, a) != 0).unwrap();
    let reflection = 4;
    out.push((coset_action(&c(2), &[whole(&c(2))], &[1.0]), false, true));
    out.push((coset_action(&c(4), &[cyclic_subgroup(&c(4), 2)], &[1.0]), false, true));
    out.push((coset_action(&s3, &[cyclic_subgroup(&s3, transposition)], &[1.0]), false, true));
    out.push((coset_action(&s3, &[cyclic_subgroup(&s3, three_cycle)], &[2.0]), false, true));
    out.push((coset_action(&d4, &[cyclic_subgroup(&d4, reflection)], &[1.0]), false, true));
    out.push((coset_action(&q8, &[cyclic_subgroup(&q8, 1)], &[1.0]), false, true));
    out.push((coset_action(&c(2), &[triv.clone(), triv.clone()], &[0.1, 0.4]), true, false));
    out.push((coset_action(&c(3), &[triv.clone(), triv.clone()], &[1.0, 3.0]), true, false));
    out.push((
        coset_action(&c(2), &[whole(&c(2)), whole(&c(2)), whole(&c(2))], &[1.0, 2.0, 3.0]),
        false,
        false,
    ));
    out.push((
        coset_action(&c(6), &[cyclic_subgroup(&c(6), 3), cyclic_subgroup(&c(6), 2)], &[0.2, 0.7]),
        false,
        false,
    ));
    out.push((
        coset_action(&s3, &[cyclic_subgroup(&s3, transposition), triv.clone()], &[1.0, 0.25]),
        false,
        false,
    ));
    out
}

/// Random partition of `0..n` into `c` nonempty classes with random weights.
pub fn rand_relation(rng: &mut impl Rng, n: usize, c: usize) -> FiniteEquivRelation {
    let mut pts: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        pts.swap(i, rng.gen_range(0..=i));
    }
    let mut cuts: Vec<usize> = (1..n).collect();
    for i in (1..cuts.len()).rev() {
        cuts.swap(i, rng.gen_range(0..=i));
    }
    let mut cuts: Vec<usize> = cuts.into_iter().take(c - 1).collect();
    cuts.sort();
    cuts.insert(0, 0);
    cuts.push(n);
    let classes = cuts.windows(2).map(|w| pts[w[0]..w[1]].to_vec()).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    FiniteEquivRelation::new(FiniteMeasuredSpace::weighted(&weights).unwrap(), classes).unwrap()
}
