//! Block decomposition and comparison theory of projections.
//!
//! Every finite-dimensional von Neumann algebra is unitarily equivalent to a
//! direct sum `⊕ M_{n_i} ⊗ I_{m_i}`. Once that form is known, Murray–von
//! Neumann equivalence of projections reduces to comparing ranks block by
//! block, and equivalences can be written down instead of searched for.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{center, OperatorAlgebra};
use crate::error::{Error, Result};
use crate::numkit::{
    c64, eigh, herm_eig, is_projection, polar_decompose, range_basis, snap_projection,
    support_projection, Mat, SpanBuilder, Tol,
};

/// One summand `M_n ⊗ I_m` with its central support `z`.
#[derive(Clone, Debug)]
pub struct Block {
    pub n: usize,
    pub m: usize,
    pub z: Mat,
}

/// `W* M W = ⊕_i M_{n_i} ⊗ I_{m_i}`, blocks in the order given.
///
/// Inside block `i` the column of `W` with index `offset_i + k·m_i + j`
/// belongs to matrix row `k` and multiplicity copy `j`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub w: Mat,
}

impl BlockDecomposition {
    pub fn ambient_dim(&self) -> usize {
        self.w.rows()
    }

    pub fn is_factor(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `Σ n_i²`.
    pub fn algebra_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.n * b.n).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            out.push(acc);
            acc += b.n * b.m;
        }
        out
    }

    /// `W* x W`.
    pub fn block_model(&self, x: &Mat) -> Mat {
        self.w.conjugate_adj(x)
    }

    /// The `n_i × n_i` component of `x` in block `i`, read off the first
    /// multiplicity copy.
    pub fn component(&self, x: &Mat, i: usize) -> Mat {
        let off = self.offsets()[i];
        let Block { n, m, .. } = self.blocks[i];
        let model = self.block_model(x);
        Mat::from_fn(n, n, |k, l| model[(off + k * m, off + l * m)])
    }

    /// `W (⊕ c_i ⊗ I_{m_i}) W*` for per-block components `c_i`.
    pub fn assemble(&self, components: &[Mat]) -> Mat {
        let parts: Vec<Mat> = self
            .blocks
            .iter()
            .zip(components)
            .map(|(b, c)| c.kron(&Mat::identity(b.m)))
            .collect();
        self.w.conjugate(&Mat::direct_sum(&parts))
    }

    /// Distance of `W* x W` from the block-diagonal pattern.
    pub fn pattern_residual(&self, x: &Mat) -> f64 {
        let comps: Vec<Mat> = (0..self.blocks.len()).map(|i| self.component(x, i)).collect();
        x.dist(&self.assemble(&comps))
    }

    /// Matrix units `E_kl` of every block mapped back through `W`; together
    /// they span the decomposed algebra.
    pub fn reassembled_basis(&self) -> Vec<Mat> {
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for k in 0..b.n * b.n {
                let comps: Vec<Mat> = self
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        if j == i {
                            Mat::unit(c.n, k / c.n, k % c.n)
                        } else {
                            Mat::zeros(c.n, c.n)
                        }
                    })
                    .collect();
                out.push(self.assemble(&comps));
            }
        }
        out
    }
}

/// Hermitian and skew-Hermitian parts as two Hermitian matrices.
fn hermitian_parts(x: &Mat) -> [Mat; 2] {
    [x.real_part(), x.imag_part()]
}

fn is_scalar_multiple(h: &Mat, p: &Mat, tol: Tol) -> bool {
    let pp = p.fro_norm_sqr();
    let c = h.hs_inner(p) / pp;
    let mut r = h.clone();
    r.axpy(-c, p);
    r.fro_norm() <= tol.bound(h.fro_norm())
}

fn corner_span(m: &OperatorAlgebra, p: &Mat, tol: Tol) -> Result<Vec<Mat>> {
    let d = m.ambient_dim();
    let mut sb = SpanBuilder::new(d, d, tol);
    for b in m.basis() {
        sb.push(&p.matmul(b).matmul(p))?;
    }
    Ok(sb.into_basis())
}

/// A minimal projection of `m` below the central projection `z`.
fn minimal_projection(m: &OperatorAlgebra, z: &Mat, tol: Tol) -> Result<Mat> {
    let mut p = z.clone();
    let d = m.ambient_dim();
    for _ in 0..=d {
        let corner = corner_span(m, &p, tol)?;
        if corner.len() <= 1 {
            return Ok(p);
        }
        let h = corner
            .iter()
            .flat_map(hermitian_parts)
            .find(|h| !is_scalar_multiple(h, &p, tol))
            .ok_or_else(|| Error::numerical("corner algebra has no non-scalar Hermitian element", 0.0))?;
        let sd = herm_eig(&h, tol)?;
        let mut best: Option<(usize, Mat)> = None;
        for q in &sd.projections {
            let (sub, rank) = snap_projection(&q.matmul(&p));
            if rank > 0 && best.as_ref().is_none_or(|(r, _)| rank < *r) {
                best = Some((rank, sub));
            }
        }
        p = best
            .ok_or_else(|| Error::numerical("empty spectral refinement", 0.0))?
            .1;
    }
    Err(Error::numerical("minimal projection search did not terminate", d as f64))
}

/// Minimal central projections. A generic real combination of the center
/// basis has one eigenvalue per summand, so its spectrum is cut at the
/// `dim Z − 1` widest gaps.
pub fn central_projections(m: &OperatorAlgebra, tol: Tol) -> Result<Vec<Mat>> {
    let d = m.ambient_dim();
    let z = center(m, tol)?;
    let k = z.dim();
    if k <= 1 {
        return Ok(alloc::vec![Mat::identity(d)]);
    }
    let parts: Vec<Mat> = z
        .basis()
        .iter()
        .flat_map(hermitian_parts)
        .filter(|h| h.fro_norm() > tol.subspace_abs())
        .collect();
    let mut worst = 0.0f64;
    for attempt in 0..8 {
        let mut h = Mat::zeros(d, d);
        for (i, x) in parts.iter().enumerate() {
            let c = 1.0 + libm::sin(1.0 + 0.754_877_666 * i as f64 + 0.569_840_291 * attempt as f64);
            h.axpy(c64(c, 0.0), x);
        }
        let (vals, vecs) = eigh(&h);
        let mut gaps: Vec<(f64, usize)> = (1..d).map(|i| (vals[i] - vals[i - 1], i)).collect();
        gaps.sort_by(|a, b| b.0.total_cmp(&a.0));
        let cut = gaps[k - 2].0;
        let noise = gaps.get(k - 1).map_or(0.0, |g| g.0).max(tol.bound(h.fro_norm()));
        if cut <= 100.0 * noise {
            worst = worst.max(noise / cut.max(f64::MIN_POSITIVE));
            continue;
        }
        let mut edges: Vec<usize> = gaps[..k - 1].iter().map(|g| g.1).collect();
        edges.push(0);
        edges.push(d);
        edges.sort_unstable();
        return Ok(edges
            .windows(2)
            .map(|w| {
                let q = Mat::from_fn(d, w[1] - w[0], |i, j| vecs[(i, w[0] + j)]);
                q.matmul(&q.adjoint())
            })
            .collect());
    }
    Err(Error::numerical(
        format!("center of dimension {k} has no separated spectrum"),
        worst,
    ))
}

fn reference_weight(z: &Mat) -> f64 {
    // ⟨z r, r⟩ with r_i = 1/(i + 1), a fixed vector with no symmetry.
    let d = z.rows();
    let mut acc = c64(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += z[(i, j)] * (1.0 / ((i + 1) * (j + 1)) as f64);
        }
    }
    acc.re
}

/// Decomposes `m` into factor blocks `M_{n_i} ⊗ I_{m_i}`.
pub fn block_decompose(m: &OperatorAlgebra, tol: Tol) -> Result<BlockDecomposition> {
    let d = m.ambient_dim();
    let mut found: Vec<(Block, Vec<Mat>, f64)> = Vec::new();
    for z in central_projections(m, tol)? {
        let rank = libm::round(z.trace().re) as usize;
        let mut zm = SpanBuilder::new(d, d, tol);
        for b in m.basis() {
            zm.push(&z.matmul(b))?;
        }
        let n = libm::round(libm::sqrt(zm.len() as f64)) as usize;
        if n == 0 || n * n != zm.len() || !rank.is_multiple_of(n) {
            return Err(Error::numerical(
                format!("block of rank {rank} has algebra dimension {}", zm.len()),
                zm.len() as f64,
            ));
        }
        let mult = rank / n;
        let e = minimal_projection(m, &z, tol)?;
        let v1 = range_basis(&e);
        if v1.cols() != mult {
            return Err(Error::numerical(
                format!("minimal projection has rank {} instead of {mult}", v1.cols()),
                v1.cols() as f64,
            ));
        }
        let mut ze = SpanBuilder::new(d, d, tol);
        for b in zm.basis() {
            ze.push(&b.matmul(&e))?;
        }
        if ze.len() != n {
            return Err(Error::numerical(
                format!("block column space has dimension {} instead of {n}", ze.len()),
                ze.len() as f64,
            ));
        }
        let scale = libm::sqrt(mult as f64);
        let mut cols = Vec::with_capacity(n * mult);
        for y in ze.basis() {
            let u = y.scale_real(scale).matmul(&v1);
            for j in 0..mult {
                cols.push(u.col(j));
            }
        }
        let weight = reference_weight(&z);
        found.push((Block { n, m: mult, z }, cols, weight));
    }
    found.sort_by(|a, b| {
        b.0.n
            .cmp(&a.0.n)
            .then(b.0.m.cmp(&a.0.m))
            .then(b.2.total_cmp(&a.2))
    });
    let cols: Vec<Mat> = found.iter().flat_map(|f| f.1.iter().cloned()).collect();
    if cols.len() != d {
        return Err(Error::numerical("block sizes do not fill the ambient space", cols.len() as f64));
    }
    let w = Mat::from_columns(d, &cols);
    let defect = w.adjoint().matmul(&w).dist(&Mat::identity(d));
    if defect > tol.bound(d as f64) {
        return Err(Error::numerical("change of basis is not unitary", defect));
    }
    Ok(BlockDecomposition {
        blocks: found.into_iter().map(|f| f.0).collect(),
        w,
    })
}

/// Factor type; only `I_n` occurs in finite dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeLabel {
    pub n: usize,
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_{}", self.n)
    }
}

/// An algebra together with its block decomposition, for repeated
/// projection comparisons.
#[derive(Clone, Debug)]
pub struct Comparison<'a> {
    algebra: &'a OperatorAlgebra,
    dec: BlockDecomposition,
    tol: Tol,
}

/// Outcome of an equivalence test.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Partial isometry `u ∈ M` with `u*u = p`, `uu* = q` when equivalent.
    pub witness: Option<Mat>,
}

impl<'a> Comparison<'a> {
    pub fn new(m: &'a OperatorAlgebra, tol: Tol) -> Result<Self> {
        Ok(Comparison {
            algebra: m,
            dec: block_decompose(m, tol)?,
            tol,
        })
    }

    pub fn decomposition(&self) -> &BlockDecomposition {
        &self.dec
    }

    /// Checks that `p` is a projection in `M` and snaps it to an exact one.
    pub fn projection(&self, p: &Mat, name: &str) -> Result<Mat> {
        let d = self.algebra.ambient_dim();
        if p.shape() != (d, d) {
            return Err(Error::validation(format!(
                "{name} is {}x{}, algebra acts on dimension {d}",
                p.rows(),
                p.cols()
            )));
        }
        if !is_projection(p, self.tol) {
            return Err(Error::validation(format!("{name} is not a projection")));
        }
        if !self.algebra.contains(p, self.tol)? {
            return Err(Error::validation(format!("{name} does not lie in the algebra")));
        }
        Ok(snap_projection(p).0)
    }

    /// `rank(z_i p) / m_i` for every block.
    pub fn rank_profile(&self, p: &Mat) -> Vec<usize> {
        (0..self.dec.blocks.len())
            .map(|i| libm::round(self.dec.component(p, i).trace().re) as usize)
            .collect()
    }

    pub fn mvn_equivalent(&self, p: &Mat, q: &Mat) -> Result<Equivalence> {
        let p = self.projection(p, "p")?;
        let q = self.projection(q, "q")?;
        if self.rank_profile(&p) != self.rank_profile(&q) {
            return Ok(Equivalence {
                equivalent: false,
                witness: None,
            });
        }
        let comps: Vec<Mat> = (0..self.dec.blocks.len())
            .map(|i| {
                let a = range_basis(&self.dec.component(&p, i));
                let b = range_basis(&self.dec.component(&q, i));
                b.matmul(&a.adjoint())
            })
            .collect();
        let u = self.dec.assemble(&comps);
        let defect = u.adjoint().matmul(&u).dist(&p) + u.matmul(&u.adjoint()).dist(&q);
        if defect > self.tol.bound(p.fro_norm() + q.fro_norm()) {
            return Err(Error::numerical("equivalence witness", defect));
        }
        Ok(Equivalence {
            equivalent: true,
            witness: Some(u),
        })
    }

    pub fn subordinate(&self, p: &Mat, q: &Mat) -> Result<bool> {
        let p = self.projection(p, "p")?;
        let q = self.projection(q, "q")?;
        Ok(self
            .rank_profile(&p)
            .iter()
            .zip(self.rank_profile(&q))
            .all(|(a, b)| *a <= b))
    }

    /// `(p ∨ q, p ∧ q)`, both checked to lie in `M`.
    pub fn lattice(&self, p: &Mat, q: &Mat) -> Result<(Mat, Mat)> {
        let p = self.projection(p, "p")?;
        let q = self.projection(q, "q")?;
        let d = p.rows();
        let id = Mat::identity(d);
        let join = snap_projection(&support_projection(&(&p + &q), 2.0, self.tol)).0;
        let co = &(&id - &p) + &(&id - &q);
        let meet = &id - &snap_projection(&support_projection(&co, 2.0, self.tol)).0;
        for (x, name) in [(&join, "join"), (&meet, "meet")] {
            let r = self.algebra.residual(x);
            if r > self.tol.bound(x.fro_norm()) {
                return Err(Error::numerical(format!("projection {name} left the algebra"), r));
            }
        }
        Ok((join, meet))
    }

    /// `p ∨ q − p ∼ q − p ∧ q`.
    pub fn kaplansky_check(&self, p: &Mat, q: &Mat) -> Result<bool> {
        let (join, meet) = self.lattice(p, q)?;
        let p = self.projection(p, "p")?;
        let q = self.projection(q, "q")?;
        Ok(self.mvn_equivalent(&(&join - &p), &(&q - &meet))?.equivalent)
    }
}

pub fn mvn_equivalent(m: &OperatorAlgebra, p: &Mat, q: &Mat, tol: Tol) -> Result<Equivalence> {
    Comparison::new(m, tol)?.mvn_equivalent(p, q)
}

pub fn subordinate(m: &OperatorAlgebra, p: &Mat, q: &Mat, tol: Tol) -> Result<bool> {
    Comparison::new(m, tol)?.subordinate(p, q)
}

pub fn kaplansky_check(m: &OperatorAlgebra, p: &Mat, q: &Mat, tol: Tol) -> Result<bool> {
    Comparison::new(m, tol)?.kaplansky_check(p, q)
}

/// Every projection is finite in finite dimension: `p ∼ q ≤ p` forces
/// `q = p` by rank. Kept so the finite/infinite vocabulary stays callable.
pub fn is_finite_projection(_p: &Mat) -> bool {
    true
}

/// Purely infinite projections do not exist in finite dimension.
pub fn is_purely_infinite(_m: &OperatorAlgebra) -> bool {
    false
}

fn require_member(m: &OperatorAlgebra, t: &Mat, tol: Tol) -> Result<()> {
    if !m.contains(t, tol)? {
        return Err(Error::validation("operator does not lie in the algebra"));
    }
    Ok(())
}

/// Joint spectral projections of a normal `T ∈ M`, through `Re T` and
/// `Im T`. Each returned projection is verified to lie in `M`.
pub fn spectral_projections_in(m: &OperatorAlgebra, t: &Mat, tol: Tol) -> Result<Vec<Mat>> {
    require_member(m, t, tol)?;
    let ta = t.adjoint();
    let defect = t.matmul(&ta).dist(&ta.matmul(t));
    if defect > tol.bound(t.fro_norm_sqr()) {
        return Err(Error::validation(format!(
            "operator is not normal (‖TT* − T*T‖ = {defect:e})"
        )));
    }
    let re = herm_eig(&t.real_part(), tol)?;
    let im = herm_eig(&t.imag_part(), tol)?;
    let mut out = Vec::new();
    for p in &re.projections {
        for q in &im.projections {
            let (r, rank) = snap_projection(&p.matmul(q));
            if rank == 0 {
                continue;
            }
            let res = m.residual(&r);
            if res > tol.bound(r.fro_norm()) {
                return Err(Error::numerical("spectral projection left the algebra", res));
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// Polar factors of `T ∈ M` with membership of both factors checked.
#[derive(Clone, Debug)]
pub struct PolarMembership {
    pub u: Mat,
    pub abs: Mat,
    pub both_in_m: bool,
}

pub fn polar_membership(m: &OperatorAlgebra, t: &Mat, tol: Tol) -> Result<PolarMembership> {
    require_member(m, t, tol)?;
    let p = polar_decompose(t, tol)?;
    let ru = m.residual(&p.u);
    let ra = m.residual(&p.abs);
    let both_in_m = ru <= tol.bound(p.u.fro_norm()) && ra <= tol.bound(p.abs.fro_norm());
    if !both_in_m {
        return Err(Error::numerical("polar factor left the algebra", ru.max(ra)));
    }
    Ok(PolarMembership {
        u: p.u,
        abs: p.abs,
        both_in_m,
    })
}

/// Density matrix `ρ` of the unique tracial state of a factor,
/// `τ(x) = trace(ρ·x)`.
///
/// For `M_n ⊗ I_m` the normalized trace of the `n × n` component equals the
/// normalized ambient trace, so `ρ = I/d`.
pub fn canonical_trace(m: &OperatorAlgebra, tol: Tol) -> Result<Mat> {
    let z = center(m, tol)?;
    if z.dim() != 1 {
        return Err(Error::validation(format!(
            "algebra is not a factor (center has dimension {}); its tracial state is not unique",
            z.dim()
        )));
    }
    let d = m.ambient_dim();
    Ok(Mat::identity(d).scale_real(1.0 / d as f64))
}

/// `trace(ρ·x)`.
pub fn trace_with(rho: &Mat, x: &Mat) -> crate::numkit::C64 {
    x.hs_inner(&rho.adjoint())
}

/// Type of a factor. Checks that the trace takes values in `{k/n}` on the
/// spectral projections of the algebra's basis.
pub fn type_label(m: &OperatorAlgebra, tol: Tol) -> Result<TypeLabel> {
    let rho = canonical_trace(m, tol)?;
    let dec = block_decompose(m, tol)?;
    let n = dec.blocks[0].n;
    let mut bad: Vec<String> = Vec::new();
    for x in m.basis() {
        for h in hermitian_parts(x) {
            for p in herm_eig(&h, tol)?.projections {
                let v = trace_with(&rho, &p).re * n as f64;
                if (v - libm::round(v)).abs() > tol.bound(n as f64) {
                    bad.push(format!("τ(p)·n = {v}"));
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::numerical(
            format!("trace values off the lattice 1/{n}: {}", bad.join(", ")),
            bad.len() as f64,
        ));
    }
    Ok(TypeLabel { n })
}
