//! Tensor products, pointed towers and truncated ITPFI factors.
//!
//! A tower slot is the matrix algebra `M_{n_i}` acting on itself by left
//! multiplication, with the Hilbert–Schmidt pairing `trace(y*·x)`. The slot
//! space is `ℂ^{n_i²}` (row-major `vec`), where left multiplication by `x` is
//! `x ⊗ I_{n_i}`. Slot spaces are combined in Kronecker order, slot 0 first.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::OperatorAlgebra;
use crate::dynamics::{
    fm_membership_residual, left_operator_matrix, FiniteEquivRelation, FiniteMeasuredSpace,
};
use crate::error::{Error, Result, Violations};
use crate::numkit::{c64, sqrt, Mat, Tol, C64};
use crate::structure::TypeLabel;

/// `M1 ⊗ M2` on `ℂ^{d1} ⊗ ℂ^{d2}`: basis `b_i ⊗ c_j`, generated by
/// `g ⊗ I` and `I ⊗ h`.
pub fn kron_algebra(m1: &OperatorAlgebra, m2: &OperatorAlgebra) -> OperatorAlgebra {
    let (d1, d2) = (m1.ambient_dim(), m2.ambient_dim());
    let mut basis = Vec::with_capacity(m1.dim() * m2.dim());
    for b in m1.basis() {
        for c in m2.basis() {
            basis.push(b.kron(c));
        }
    }
    let mut gens: Vec<Mat> = m1
        .generating_set()
        .iter()
        .map(|g| g.kron(&Mat::identity(d2)))
        .collect();
    gens.extend(m2.generating_set().iter().map(|h| Mat::identity(d1).kron(h)));
    OperatorAlgebra::from_parts(d1 * d2, basis, gens)
}

/// Hilbert space with a unit base vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedSpace {
    base: Mat,
}

impl PointedSpace {
    pub fn new(base: Mat, tol: Tol) -> Result<Self> {
        if base.cols() != 1 || base.rows() == 0 {
            return Err(Error::validation("base point must be a nonempty column vector"));
        }
        let norm = base.fro_norm();
        if (norm - 1.0).abs() > tol.subspace_abs() {
            return Err(Error::validation(format!("base point has norm {norm}, expected 1")));
        }
        Ok(PointedSpace { base })
    }

    pub fn dim(&self) -> usize {
        self.base.rows()
    }

    pub fn base(&self) -> &Mat {
        &self.base
    }
}

/// `η ↦ η ⊗ ξ_k`, from level `k` (the first `k` factors) to level `k + 1`.
pub fn pointed_embed(v: &Mat, spaces: &[PointedSpace], k: usize) -> Result<Mat> {
    if k >= spaces.len() {
        return Err(Error::validation(format!(
            "level {k} has no next factor among {} spaces",
            spaces.len()
        )));
    }
    let dim: usize = spaces[..k].iter().map(PointedSpace::dim).product();
    if v.shape() != (dim, 1) {
        return Err(Error::validation(format!(
            "vector has shape {}x{}, level {k} has dimension {dim}",
            v.rows(),
            v.cols()
        )));
    }
    Ok(v.kron(&spaces[k].base))
}

/// Probability rows `(λ²_{i,1}, …, λ²_{i,n_i})`, one per tower slot.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueList {
    rows: Vec<Vec<f64>>,
}

impl EigenvalueList {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut v = Violations::new();
        for (i, row) in rows.iter().enumerate() {
            v.check(!row.is_empty(), || format!("row {i} is empty"));
            v.check(row.iter().all(|p| p.is_finite() && *p >= 0.0), || {
                format!("row {i} has a negative or non-finite entry")
            });
            let s: f64 = row.iter().sum();
            v.check((s - 1.0).abs() <= 1e-12, || format!("row {i} sums to {s}, not 1"));
        }
        v.into_result()?;
        Ok(EigenvalueList { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// `k` rows `(λ/(1+λ), 1/(1+λ))`.
pub fn powers_list(lambda: f64, k: usize) -> Result<EigenvalueList> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::validation(format!("λ = {lambda} is outside (0, 1]")));
    }
    let row = vec![lambda / (1.0 + lambda), 1.0 / (1.0 + lambda)];
    EigenvalueList::new(vec![row; k])
}

/// Largest ambient dimension `Π n_i²` for which the tower algebra is
/// materialized as an explicit basis.
pub const MATERIALIZE_LIMIT: usize = 64;

/// Largest `Π n_i` accepted by [`itpfi_truncate`].
pub const TOWER_LIMIT: usize = 64;

/// Index of slot coordinates `(r_i, c_i)` in the Kronecker-ordered tower
/// space.
fn tower_index(dims: &[usize], r: &[usize], c: &[usize]) -> usize {
    let mut idx = 0;
    for i in 0..dims.len() {
        idx = idx * dims[i] * dims[i] + r[i] * dims[i] + c[i];
    }
    idx
}

/// Mixed-radix digits of `v` (slot 0 most significant).
fn digits(dims: &[usize], mut v: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = v % dims[i];
        v /= dims[i];
    }
    out
}

/// Left multiplication by `b ∈ ⊗ M_{n_i} = M_N` on the tower space.
pub fn left_multiplication(dims: &[usize], b: &Mat) -> Mat {
    let n: usize = dims.iter().product();
    assert_eq!(b.shape(), (n, n), "tower operator shape");
    let amb = n * n;
    let mut out = Mat::zeros(amb, amb);
    for r in 0..n {
        let rd = digits(dims, r);
        for rp in 0..n {
            let w = b[(r, rp)];
            if w == c64(0.0, 0.0) {
                continue;
            }
            let rpd = digits(dims, rp);
            for c in 0..n {
                let cd = digits(dims, c);
                out[(tower_index(dims, &rd, &cd), tower_index(dims, &rpd, &cd))] = w;
            }
        }
    }
    out
}

/// `‖T − L(B)‖` with `B` read off `T`; zero exactly when `T` lies in the
/// left-multiplication algebra of the tower.
pub fn tower_membership_residual(dims: &[usize], t: &Mat) -> f64 {
    let n: usize = dims.iter().product();
    let c0 = vec![0; dims.len()];
    let b = Mat::from_fn(n, n, |r, rp| {
        t[(
            tower_index(dims, &digits(dims, r), &c0),
            tower_index(dims, &digits(dims, rp), &c0),
        )]
    });
    t.dist(&left_multiplication(dims, &b))
}

/// Truncation of an ITPFI tower at depth `k`.
#[derive(Clone, Debug)]
pub struct ItpfiTruncation {
    pub dims: Vec<usize>,
    /// `⊗ M_{n_i}` on the tower space, when its ambient dimension is at most
    /// [`MATERIALIZE_LIMIT`].
    pub algebra: Option<OperatorAlgebra>,
    /// `ξ_1 ⊗ ⋯ ⊗ ξ_k` with `ξ_i = diag(√p_{i,j})`.
    pub xi: Mat,
    /// `⊗ diag(row_i)`, so that `φ(L(x)) = trace(ρ·x)`.
    pub rho: Mat,
    pub tracial: bool,
    pub type_label: TypeLabel,
}

impl ItpfiTruncation {
    /// `N = Π n_i`.
    pub fn size(&self) -> usize {
        self.rho.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.xi.rows()
    }

    /// `φ(X) = ⟨X·Ξ, Ξ⟩` for an operator on the tower space.
    pub fn phi(&self, x: &Mat) -> C64 {
        let y = x.matmul(&self.xi);
        y.hs_inner(&self.xi)
    }

    /// `φ(L(b)) = trace(ρ·b)` for `b ∈ M_N`.
    pub fn phi_reduced(&self, b: &Mat) -> C64 {
        b.hs_inner(&self.rho)
    }

    /// Eigenvalues of `ρ`, in Kronecker order.
    pub fn rho_eigenvalues(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.rho[(i, i)].re).collect()
    }
}

pub fn itpfi_truncate(list: &EigenvalueList, k: usize) -> Result<ItpfiTruncation> {
    if k > list.len() {
        return Err(Error::validation(format!(
            "depth {k} exceeds the {} rows of the eigenvalue list",
            list.len()
        )));
    }
    let rows = &list.rows()[..k];
    let dims: Vec<usize> = rows.iter().map(Vec::len).collect();
    let n: usize = dims.iter().product();
    if n > TOWER_LIMIT {
        return Err(Error::validation(format!(
            "tower of size Π n_i = {n} exceeds the limit {TOWER_LIMIT}"
        )));
    }
    let mut xi = Mat::identity(1);
    let mut rho = Mat::identity(1);
    for row in rows {
        let m = row.len();
        let sq: Vec<C64> = row.iter().map(|p| c64(sqrt(*p), 0.0)).collect();
        let slot = Mat::diag(&sq).reshape(m * m, 1);
        xi = xi.kron(&slot);
        rho = rho.kron(&Mat::diag_real(row));
    }
    let tracial = rows.iter().all(|row| {
        let u = 1.0 / row.len() as f64;
        row.iter().all(|p| (p - u).abs() <= 1e-12)
    });
    let algebra = (n * n <= MATERIALIZE_LIMIT).then(|| {
        let scale = 1.0 / sqrt(n as f64);
        let basis: Vec<Mat> = (0..n * n)
            .map(|e| left_multiplication(&dims, &Mat::unit(n, e / n, e % n)).scale_real(scale))
            .collect();
        let gens = (0..n.saturating_sub(1))
            .map(|i| left_multiplication(&dims, &Mat::unit(n, i, i + 1)))
            .collect();
        OperatorAlgebra::from_parts(n * n, basis, gens)
    });
    Ok(ItpfiTruncation {
        dims,
        algebra,
        xi,
        rho,
        tracial,
        type_label: TypeLabel { n },
    })
}

/// Result of matching the odometer relation with the ITPFI₂ tower.
#[derive(Clone, Debug)]
pub struct OdometerBridge {
    pub relation: FiniteEquivRelation,
    pub list: EigenvalueList,
    /// Permutation unitary `ℓ²(E, μ*) → ⊗ (M_2, ξ_i)`.
    pub v: Mat,
    pub matched: bool,
    /// Largest residual among the checks.
    pub residual: f64,
}

/// Conjugation `P x P*` by the permutation matrix with `P e_i = e_{perm[i]}`.
fn permute(perm: &[usize], x: &Mat) -> Mat {
    let mut out = Mat::zeros(x.rows(), x.cols());
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            out[(perm[i], perm[j])] = x[(i, j)];
        }
    }
    out
}

/// The odometer `v ↦ v + 1 mod 2^k` on strings `v = Σ s_i 2^{i-1}` under the
/// product measure with `μ(s_i = 0) = α_i`, matched against the tower with
/// rows `(α_i, 1 − α_i)`.
///
/// The point `v` with bits `s_1 … s_k` corresponds to the tower row index
/// whose slot `i` digit is `s_{i+1}`; the pair `(x, y)` goes to the slot
/// coordinates `(bits of x, bits of y)`. The checks: `M(E)` generators land in
/// the tower algebra, tower generators pull back into `M(E)`, the diagonal
/// subalgebras correspond, and `1_Δ` goes to `Ξ`.
pub fn odometer_bridge(k: usize, alphas: &[f64], tol: Tol) -> Result<OdometerBridge> {
    let mut v = Violations::new();
    v.check(k >= 1, || "odometer needs k ≥ 1".into());
    v.check(k <= 6, || format!("odometer depth {k} exceeds 6"));
    v.check(alphas.len() == k, || format!("{} weights for depth {k}", alphas.len()));
    for (i, a) in alphas.iter().enumerate() {
        v.check(*a > 0.0 && *a < 1.0, || format!("α_{} = {a} is outside (0, 1)", i + 1));
    }
    v.into_result()?;
    let n = 1usize << k;
    let bit = |x: usize, i: usize| (x >> i) & 1;
    let weights: Vec<f64> = (0..n)
        .map(|x| {
            (0..k)
                .map(|i| if bit(x, i) == 0 { alphas[i] } else { 1.0 - alphas[i] })
                .product()
        })
        .collect();
    let space = FiniteMeasuredSpace::weighted(&weights)?;
    let group = crate::groupvna::FiniteGroup::cyclic(n)?;
    let map = (0..n).map(|g| (0..n).map(|x| (x + g) % n).collect()).collect();
    let action = crate::dynamics::FiniteAction::new(group, space, map)?;
    let relation = action.orbit_relation()?;
    let list = EigenvalueList::new(alphas.iter().map(|a| vec![*a, 1.0 - a]).collect())?;
    let dims = vec![2usize; k];
    let row_index = |x: usize| (0..k).fold(0, |acc, i| 2 * acc + bit(x, i));
    let perm: Vec<usize> = relation
        .pairs()
        .iter()
        .map(|&(x, y)| {
            let r: Vec<usize> = (0..k).map(|i| bit(x, i)).collect();
            let c: Vec<usize> = (0..k).map(|i| bit(y, i)).collect();
            tower_index(&dims, &r, &c)
        })
        .collect();
    let amb = n * n;
    let mut vmat = Mat::zeros(amb, amb);
    for (i, &p) in perm.iter().enumerate() {
        vmat[(p, i)] = c64(1.0, 0.0);
    }
    let mut inverse = vec![0; amb];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let mut residual: f64 = 0.0;

    // M(E) → tower, diag → diagonal tensors
    let unit_table = |a: usize, b: usize| Mat::unit(n, a, b);
    let left = |t: &Mat| left_operator_matrix(&relation, t);
    for x in 0..n {
        let p = left(&unit_table(x, x));
        let img = permute(&perm, &p);
        let r = row_index(x);
        residual = residual.max(img.dist(&left_multiplication(&dims, &unit_table(r, r))));
        if x + 1 < n {
            let u = permute(&perm, &left(&unit_table(x, x + 1)));
            residual = residual.max(tower_membership_residual(&dims, &u));
        }
    }
    // tower → M(E), diagonal tensors → diag
    for s in 0..k {
        for (a, b) in [(0, 1), (1, 0), (0, 0)] {
            let mut slot = Mat::identity(1);
            for i in 0..k {
                let f = if i == s { Mat::unit(2, a, b) } else { Mat::identity(2) };
                slot = slot.kron(&f);
            }
            let back = permute(&inverse, &left_multiplication(&dims, &slot));
            residual = residual.max(fm_membership_residual(&relation, &back)?);
            if a == b {
                let off: f64 = (0..amb)
                    .flat_map(|i| (0..amb).map(move |j| (i, j)))
                    .filter(|(i, j)| i != j)
                    .map(|(i, j)| back[(i, j)].norm_sqr())
                    .sum();
                residual = residual.max(sqrt(off));
            }
        }
    }
    // state vectors
    let tower = itpfi_truncate(&list, k)?;
    let mut delta = Mat::zeros(amb, 1);
    for (x, &w) in weights.iter().enumerate().take(n) {
        let i = relation.pair_index(x, x).expect("reflexive");
        delta[(perm[i], 0)] = c64(sqrt(w), 0.0);
    }
    residual = residual.max(delta.dist(&tower.xi));

    Ok(OdometerBridge {
        relation,
        list,
        v: vmat,
        matched: residual < tol.subspace_abs(),
        residual,
    })
}
