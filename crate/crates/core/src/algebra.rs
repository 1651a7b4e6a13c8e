//! Unital `*`-subalgebras of `M_d(ℂ)`: generation, commutant, center.
//!
//! Weak, strong and norm closures coincide in finite dimension, so the von
//! Neumann algebra generated by a set is its linear-algebraic `*`-closure,
//! and the double commutant theorem becomes an equality of subspaces.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numkit::{Mat, SpanBuilder, StackedSystem, Tol, C64};

/// Unital `*`-closed subalgebra of `d × d` matrices, stored as a
/// Hilbert–Schmidt orthonormal basis.
///
/// `generators` is a set that generates the algebra as a `*`-algebra. It is
/// kept because commutant and center computations only need to test against
/// generators, which is much cheaper than testing against a full basis.
#[derive(Clone, Debug)]
pub struct OperatorAlgebra {
    ambient_dim: usize,
    basis: Vec<Mat>,
    generators: Vec<Mat>,
}

/// Residuals of the three structural invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantResiduals {
    pub unit: f64,
    pub adjoint: f64,
    pub product: f64,
}

impl InvariantResiduals {
    pub fn max(&self) -> f64 {
        self.unit.max(self.adjoint).max(self.product)
    }
}

impl OperatorAlgebra {
    /// Wraps an orthonormal basis that is already known to span a unital
    /// `*`-algebra.
    pub(crate) fn from_parts(ambient_dim: usize, basis: Vec<Mat>, generators: Vec<Mat>) -> Self {
        OperatorAlgebra {
            ambient_dim,
            basis,
            generators,
        }
    }

    /// `ℂ·I`.
    pub fn scalars(d: usize) -> Self {
        let unit = Mat::identity(d).scale_real(1.0 / crate::numkit::sqrt(d as f64));
        OperatorAlgebra::from_parts(d, alloc::vec![unit], Vec::new())
    }

    /// All of `M_d(ℂ)`, with the matrix units as basis.
    pub fn full(d: usize) -> Self {
        let basis = (0..d * d).map(|k| Mat::unit(d, k / d, k % d)).collect();
        let generators = (0..d.saturating_sub(1)).map(|i| Mat::unit(d, i, i + 1)).collect();
        OperatorAlgebra::from_parts(d, basis, generators)
    }

    /// Diagonal matrices `≅ ℓ^∞(d)`.
    pub fn diagonal(d: usize) -> Self {
        let basis: Vec<Mat> = (0..d).map(|k| Mat::unit(d, k, k)).collect();
        OperatorAlgebra::from_parts(d, basis.clone(), basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// A `*`-generating set (the basis when nothing smaller is known).
    pub fn generating_set(&self) -> &[Mat] {
        if self.generators.is_empty() {
            &self.basis
        } else {
            &self.generators
        }
    }

    /// Coordinates of the orthogonal projection of `t` onto the algebra.
    pub fn coordinates(&self, t: &Mat) -> Vec<C64> {
        self.basis.iter().map(|b| t.hs_inner(b)).collect()
    }

    pub fn from_coordinates(&self, coords: &[C64]) -> Mat {
        let d = self.ambient_dim;
        let mut out = Mat::zeros(d, d);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.axpy(*c, b);
        }
        out
    }

    /// Hilbert–Schmidt orthogonal projection onto the algebra.
    pub fn project(&self, t: &Mat) -> Mat {
        self.from_coordinates(&self.coordinates(t))
    }

    /// `‖t − P(t)‖_HS`.
    pub fn residual(&self, t: &Mat) -> f64 {
        t.dist(&self.project(t))
    }

    fn check_shape(&self, t: &Mat) -> Result<()> {
        if t.shape() != (self.ambient_dim, self.ambient_dim) {
            return Err(Error::validation(format!(
                "operator is {}x{}, algebra acts on dimension {}",
                t.rows(),
                t.cols(),
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// Membership test: residual at most `subspace_abs·(1 + ‖t‖)`.
    pub fn contains(&self, t: &Mat, tol: Tol) -> Result<bool> {
        self.check_shape(t)?;
        Ok(self.residual(t) <= tol.bound(t.fro_norm()))
    }

    /// Largest residual of a basis element of `self` projected onto `other`.
    pub fn inclusion_residual(&self, other: &OperatorAlgebra) -> f64 {
        self.basis
            .iter()
            .map(|b| other.residual(b))
            .fold(0.0, f64::max)
    }

    pub fn is_subalgebra_of(&self, other: &OperatorAlgebra, tol: Tol) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.inclusion_residual(other) < tol.subspace_abs()
    }

    /// Symmetric mutual-projection residual.
    pub fn subspace_distance(&self, other: &OperatorAlgebra) -> f64 {
        self.inclusion_residual(other)
            .max(other.inclusion_residual(self))
    }

    /// Subspace equality by mutual projection.
    pub fn same_subspace(&self, other: &OperatorAlgebra, tol: Tol) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.subspace_distance(other) < tol.subspace_abs()
    }

    /// Residuals of unitality, `*`-closure and multiplicative closure.
    pub fn invariant_residuals(&self) -> InvariantResiduals {
        let id = Mat::identity(self.ambient_dim);
        let unit = self.residual(&id);
        let adjoint = self
            .basis
            .iter()
            .map(|b| self.residual(&b.adjoint()))
            .fold(0.0, f64::max);
        let mut product: f64 = 0.0;
        for a in &self.basis {
            for b in &self.basis {
                product = product.max(self.residual(&a.matmul(b)));
            }
        }
        InvariantResiduals {
            unit,
            adjoint,
            product,
        }
    }

    /// Image under `x ↦ u·x·u*` for a unitary `u`.
    pub fn conjugated_by(&self, u: &Mat) -> OperatorAlgebra {
        let basis = self.basis.iter().map(|b| u.conjugate(b)).collect();
        let generators = self.generators.iter().map(|g| u.conjugate(g)).collect();
        OperatorAlgebra::from_parts(self.ambient_dim, basis, generators)
    }
}

fn check_generators(d: usize, generators: &[Mat]) -> Result<()> {
    let mut bad = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.shape() != (d, d) {
            bad.push(format!(
                "generator {i} is {}x{}, expected {d}x{d}",
                g.rows(),
                g.cols()
            ));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(bad))
    }
}

fn with_adjoints(generators: &[Mat]) -> Vec<Mat> {
    let mut out = Vec::with_capacity(2 * generators.len());
    for g in generators {
        out.push(g.clone());
        let a = g.adjoint();
        if a != *g {
            out.push(a);
        }
    }
    out
}

/// The von Neumann algebra generated by `generators` in `M_d(ℂ)`.
///
/// Starts from the span of `I`, the generators and their adjoints, then
/// multiplies newly found basis elements by the generators until nothing new
/// appears. Every word in the generators is reached this way, so the result is
/// the smallest unital `*`-algebra containing them.
pub fn generate(d: usize, generators: &[Mat], tol: Tol) -> Result<OperatorAlgebra> {
    check_generators(d, generators)?;
    let gens = with_adjoints(generators);
    let mut span = SpanBuilder::new(d, d, tol);
    span.push(&Mat::identity(d))?;
    for g in &gens {
        span.push(g)?;
    }
    let cap = d * d;
    let mut frontier = 0;
    let mut rounds = 0;
    while frontier < span.len() {
        rounds += 1;
        if rounds > cap + 1 {
            return Err(Error::numerical(
                "algebra generation did not stabilize",
                span.len() as f64,
            ));
        }
        let end = span.len();
        for k in frontier..end {
            let b = span.basis()[k].clone();
            for g in &gens {
                span.push(&g.matmul(&b))?;
                if span.len() > cap {
                    return Err(Error::numerical(
                        "algebra generation exceeded d² dimensions",
                        span.len() as f64,
                    ));
                }
            }
        }
        frontier = end;
    }
    Ok(OperatorAlgebra::from_parts(
        d,
        span.into_basis(),
        generators.to_vec(),
    ))
}

/// Matrix of `T ↦ T·g − g·T` acting on row-major `vec(T)`.
fn commutator_map(g: &Mat) -> Mat {
    let d = g.rows();
    let n = d * d;
    let mut a = Mat::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            for k in 0..d {
                // (T g)_{ij} = Σ_k T_{ik} g_{kj}
                a[(row, i * d + k)] += g[(k, j)];
                // (g T)_{ij} = Σ_k g_{ik} T_{kj}
                a[(row, k * d + j)] -= g[(i, k)];
            }
        }
    }
    a
}

/// Orthonormal basis of `{T : T·g = g·T}` over the generators and their
/// adjoints, so the result is `*`-closed even for non-normal input.
pub fn commutant(d: usize, generators: &[Mat], tol: Tol) -> Result<OperatorAlgebra> {
    check_generators(d, generators)?;
    let mut sys = StackedSystem::new(d * d);
    for g in with_adjoints(generators) {
        sys.push_scaled(&commutator_map(&g), g.fro_norm());
    }
    let kernel = sys.solve(tol);
    let basis: Vec<Mat> = (0..kernel.cols())
        .map(|j| kernel.col(j).reshape(d, d))
        .collect();
    Ok(OperatorAlgebra::from_parts(d, basis, Vec::new()))
}

/// Commutant of an algebra, computed from its generating set.
pub fn commutant_of(m: &OperatorAlgebra, tol: Tol) -> Result<OperatorAlgebra> {
    commutant(m.ambient_dim, m.generating_set(), tol)
}

/// Elements of `m` commuting with every operator in `others` (and their
/// adjoints), i.e. `m ∩ others′`, solved in the coordinates of `m`.
pub fn relative_commutant(
    m: &OperatorAlgebra,
    others: &[Mat],
    tol: Tol,
) -> Result<OperatorAlgebra> {
    check_generators(m.ambient_dim, others)?;
    let k = m.dim();
    let d = m.ambient_dim;
    let mut sys = StackedSystem::new(k);
    for g in with_adjoints(others) {
        let cols: Vec<Mat> = m.basis.iter().map(|b| b.commutator(&g)).collect();
        let block = Mat::from_fn(d * d, k, |r, c| cols[c].data()[r]);
        sys.push_scaled(&block, g.fro_norm());
    }
    let kernel = sys.solve(tol);
    let basis: Vec<Mat> = (0..kernel.cols())
        .map(|j| {
            let coords: Vec<C64> = (0..k).map(|i| kernel[(i, j)]).collect();
            m.from_coordinates(&coords)
        })
        .collect();
    Ok(OperatorAlgebra::from_parts(d, basis, Vec::new()))
}

/// Center `Z(M) = M ∩ M′`.
pub fn center(m: &OperatorAlgebra, tol: Tol) -> Result<OperatorAlgebra> {
    relative_commutant(m, m.generating_set(), tol)
}

pub fn is_factor(m: &OperatorAlgebra, tol: Tol) -> Result<bool> {
    Ok(center(m, tol)?.dim() == 1)
}

pub fn contains_operator(m: &OperatorAlgebra, t: &Mat, tol: Tol) -> Result<bool> {
    m.contains(t, tol)
}
