//! Kernels on a finite relation and their left and right convolution
//! operators on `ℓ²(E, μ*)`.
//!
//! `ℓ²(E, μ*)` uses the orthonormal basis `f_(x,y) = δ_(x,y)/√μ(y)`, indexed
//! by the relation's pair enumeration. In that basis `L_a` has entry `a(x, z)`
//! at `[(x,y), (z,y)]`, independent of the weights, and `R_b` has entry
//! `b(z, y)·√(μ(y)/μ(z))` at `[(x,y), (x,z)]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::FiniteEquivRelation;
use crate::error::{Error, Result};
use crate::numkit::{c64, op_norm, Mat, C64};

/// Complex function on `E`, stored as a dense `n × n` table that vanishes
/// off `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    relation: FiniteEquivRelation,
    values: Mat,
}

impl Kernel {
    /// Checks that `values` vanishes off `E`.
    pub fn new(relation: &FiniteEquivRelation, values: Mat) -> Result<Self> {
        let n = relation.num_points();
        if values.shape() != (n, n) {
            return Err(Error::validation(format!(
                "kernel table is {}x{}, relation has {n} points",
                values.rows(),
                values.cols()
            )));
        }
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if !relation.related(x, y) && values[(x, y)] != c64(0.0, 0.0) {
                    bad.push(format!("kernel is nonzero at ({x}, {y}) outside the relation"));
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(Kernel {
            relation: relation.clone(),
            values,
        })
    }

    pub fn zero(relation: &FiniteEquivRelation) -> Self {
        let n = relation.num_points();
        Kernel {
            relation: relation.clone(),
            values: Mat::zeros(n, n),
        }
    }

    /// Builds a kernel from a function on `E`.
    pub fn from_fn(relation: &FiniteEquivRelation, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = relation.num_points();
        let values = Mat::from_fn(n, n, |x, y| {
            if relation.related(x, y) {
                f(x, y)
            } else {
                c64(0.0, 0.0)
            }
        });
        Kernel {
            relation: relation.clone(),
            values,
        }
    }

    /// `1` at the single pair `(x, y)`.
    pub fn unit(relation: &FiniteEquivRelation, x: usize, y: usize) -> Result<Self> {
        let n = relation.num_points();
        let mut values = Mat::zeros(n, n);
        values[(x, y)] = c64(1.0, 0.0);
        Kernel::new(relation, values)
    }

    /// `a_{Δ,f}`: `f` on the diagonal.
    pub fn diagonal(relation: &FiniteEquivRelation, f: &[C64]) -> Result<Self> {
        PartialBijection::identity(relation.num_points()).kernel(relation, f)
    }

    pub fn relation(&self) -> &FiniteEquivRelation {
        &self.relation
    }

    pub fn values(&self) -> &Mat {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> C64 {
        self.values[(x, y)]
    }

    /// `(ab)(x,y) = Σ_z a(x,z)·b(z,y)`.
    pub fn compose(&self, other: &Kernel) -> Result<Kernel> {
        if self.relation != other.relation {
            return Err(Error::validation("kernels live on different relations"));
        }
        Ok(Kernel {
            relation: self.relation.clone(),
            values: self.values.matmul(&other.values),
        })
    }

    /// `a*(x,y) = conj(a(y,x))`.
    pub fn adjoint(&self) -> Kernel {
        Kernel {
            relation: self.relation.clone(),
            values: self.values.adjoint(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.max_abs()
    }
}

/// Partial injective map of points; `map[x] = Some(φ(x))` on the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBijection {
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn new(map: Vec<Option<usize>>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = *y {
                if y >= n {
                    return Err(Error::validation(format!("φ({x}) = {y} is out of range")));
                }
                if seen[y] {
                    return Err(Error::validation(format!("φ is not injective at value {y}")));
                }
                seen[y] = true;
            }
        }
        Ok(PartialBijection { map })
    }

    pub fn identity(n: usize) -> Self {
        PartialBijection {
            map: (0..n).map(Some).collect(),
        }
    }

    /// Total bijection from a permutation table.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        PartialBijection::new(perm.iter().map(|&y| Some(y)).collect())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut map = vec![None; self.map.len()];
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = *y {
                map[y] = Some(x);
            }
        }
        PartialBijection { map }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PartialBijection) -> PartialBijection {
        PartialBijection {
            map: self.map.iter().map(|y| y.and_then(|y| other.map[y])).collect(),
        }
    }

    /// Identity restricted to the domain of `self`.
    pub fn domain_identity(&self) -> PartialBijection {
        PartialBijection {
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(x, y)| y.map(|_| x))
                .collect(),
        }
    }

    /// `a_{φ,f}(x, y) = f(x)` if `y = φ(x)`, else 0.
    pub fn kernel(&self, relation: &FiniteEquivRelation, f: &[C64]) -> Result<Kernel> {
        let n = relation.num_points();
        if self.map.len() != n || f.len() != n {
            return Err(Error::validation(format!(
                "partial bijection of length {} and function of length {} on {n} points",
                self.map.len(),
                f.len()
            )));
        }
        let mut values = Mat::zeros(n, n);
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = *y {
                if !relation.related(x, y) {
                    return Err(Error::validation(format!(
                        "φ sends {x} to {y}, outside its class"
                    )));
                }
                values[(x, y)] = f[x];
            }
        }
        Ok(Kernel {
            relation: relation.clone(),
            values,
        })
    }

    /// `a_φ = a_{φ,1}`.
    pub fn indicator_kernel(&self, relation: &FiniteEquivRelation) -> Result<Kernel> {
        self.kernel(relation, &vec![c64(1.0, 0.0); relation.num_points()])
    }
}

/// `μ_*` and `μ*` on pairs (in pair order) and the Radon–Nikodym kernel
/// `D(x,y) = μ(x)/μ(y)`.
#[derive(Clone, Debug)]
pub struct RelMeasures {
    pub mu_star: Vec<f64>,
    pub mu_costar: Vec<f64>,
    pub d: Kernel,
}

pub fn rel_measures(e: &FiniteEquivRelation) -> RelMeasures {
    let w = e.space().weights();
    RelMeasures {
        mu_star: e.pairs().iter().map(|&(x, _)| w[x]).collect(),
        mu_costar: e.pairs().iter().map(|&(_, y)| w[y]).collect(),
        d: Kernel::from_fn(e, |x, y| c64(w[x] / w[y], 0.0)),
    }
}

/// `max_x |row support| + max_y |column support|`, the constant `n` in the
/// left-finiteness condition.
pub fn left_finiteness_constant(a: &Kernel) -> usize {
    let v = a.values();
    let n = v.rows();
    let zero = c64(0.0, 0.0);
    let row = (0..n)
        .map(|x| (0..n).filter(|&z| v[(x, z)] != zero).count())
        .max()
        .unwrap_or(0);
    let col = (0..n)
        .map(|y| (0..n).filter(|&z| v[(z, y)] != zero).count())
        .max()
        .unwrap_or(0);
    row + col
}

fn check_relation(e: &FiniteEquivRelation, a: &Kernel) -> Result<()> {
    if a.relation() != e {
        return Err(Error::validation("kernel belongs to a different relation"));
    }
    Ok(())
}

/// Matrix of `L_a` on `ℓ²(E, μ*)`. Asserts `‖L_a‖ ≤ 2n·max|a|` with `n` the
/// largest class size.
pub fn build_left_operator(e: &FiniteEquivRelation, a: &Kernel) -> Result<Mat> {
    check_relation(e, a)?;
    let out = left_operator_matrix(e, a.values());
    let bound = 2.0 * e.max_class_size() as f64 * a.max_abs();
    let norm = op_norm(&out);
    if norm > bound * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::numerical("left operator norm bound", norm - bound));
    }
    Ok(out)
}

/// `L_a` for a dense `n × n` kernel table; entries off `E` are ignored.
pub fn left_operator_matrix(e: &FiniteEquivRelation, a: &Mat) -> Mat {
    let dim = e.num_pairs();
    let mut out = Mat::zeros(dim, dim);
    for (row, &(x, y)) in e.pairs().iter().enumerate() {
        for &z in e.class_of(x) {
            let col = e.pair_index(z, y).expect("z ~ x ~ y");
            out[(row, col)] = a[(x, z)];
        }
    }
    out
}

/// Matrix of `R_b ψ(x,y) = Σ_z ψ(x,z)·b(z,y)` on `ℓ²(E, μ*)`.
pub fn build_right_operator(e: &FiniteEquivRelation, b: &Kernel) -> Result<Mat> {
    check_relation(e, b)?;
    let w = e.space().weights();
    let dim = e.num_pairs();
    let mut out = Mat::zeros(dim, dim);
    for (row, &(x, y)) in e.pairs().iter().enumerate() {
        for &z in e.class_of(x) {
            let col = e.pair_index(x, z).expect("z ~ x");
            out[(row, col)] = b.get(z, y) * libm::sqrt(w[y] / w[z]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::FiniteMeasuredSpace;
    use super::*;

    fn two_class(weights: &[f64]) -> FiniteEquivRelation {
        FiniteEquivRelation::new(
            FiniteMeasuredSpace::weighted(weights).unwrap(),
            vec![vec![0, 1], vec![2]],
        )
        .unwrap()
    }

    #[test]
    fn measures() {
        let e = FiniteEquivRelation::full(FiniteMeasuredSpace::weighted(&[1.0, 2.0]).unwrap()).unwrap();
        let m = rel_measures(&e);
        assert_eq!(m.d.get(0, 1), c64(0.5, 0.0));
        assert_eq!(m.d.get(1, 0), c64(2.0, 0.0));
        assert_eq!(m.mu_star, vec![1.0, 1.0, 2.0, 2.0]);
        assert_eq!(m.mu_costar, vec![1.0, 2.0, 1.0, 2.0]);
        let id = FiniteEquivRelation::identity(FiniteMeasuredSpace::weighted(&[1.0, 3.0]).unwrap()).unwrap();
        assert_eq!(rel_measures(&id).d.values(), &Mat::identity(2));
    }

    #[test]
    fn covariance_relation() {
        let e = FiniteEquivRelation::full(FiniteMeasuredSpace::uniform(3).unwrap()).unwrap();
        let phi0 = PartialBijection::new(vec![Some(1), Some(2), None]).unwrap();
        let phi1 = PartialBijection::new(vec![None, Some(0), Some(1)]).unwrap();
        let f = [c64(1.0, 2.0), c64(-1.0, 0.5), c64(3.0, 0.0)];
        let g = [c64(0.5, 0.0), c64(2.0, -1.0), c64(0.0, 1.0)];
        let lhs = phi0
            .kernel(&e, &f)
            .unwrap()
            .compose(&phi1.kernel(&e, &g).unwrap())
            .unwrap();
        let gf: Vec<C64> = (0..3)
            .map(|x| phi0.apply(x).map_or(c64(0.0, 0.0), |y| g[y] * f[x]))
            .collect();
        let rhs = phi0.then(&phi1).kernel(&e, &gf).unwrap();
        assert_eq!(lhs, rhs);

        let a = phi0.indicator_kernel(&e).unwrap();
        let b = phi0.inverse().indicator_kernel(&e).unwrap();
        assert_eq!(a.compose(&b).unwrap(), phi0.domain_identity().indicator_kernel(&e).unwrap());
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn escaping_phi_rejected() {
        let e = two_class(&[1.0, 1.0, 1.0]);
        let phi = PartialBijection::new(vec![Some(2), None, None]).unwrap();
        assert!(phi.indicator_kernel(&e).unwrap_err().is_validation());
        assert!(PartialBijection::new(vec![Some(1), Some(1)]).is_err());
        let mut v = Mat::zeros(3, 3);
        v[(0, 2)] = c64(1.0, 0.0);
        assert!(Kernel::new(&e, v).unwrap_err().is_validation());
    }

    #[test]
    fn left_operator_examples() {
        let e = two_class(&[1.0, 2.0, 5.0]);
        let delta = PartialBijection::identity(3).indicator_kernel(&e).unwrap();
        assert_eq!(build_left_operator(&e, &delta).unwrap(), Mat::identity(5));

        let swap = PartialBijection::new(vec![Some(1), Some(0), None])
            .unwrap()
            .indicator_kernel(&e)
            .unwrap();
        let l = build_left_operator(&e, &swap).unwrap();
        assert_eq!(l, l.adjoint());
        assert!((op_norm(&l) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn left_homomorphism() {
        let e = two_class(&[1.0, 2.0, 5.0]);
        let a = Kernel::from_fn(&e, |x, y| c64(x as f64 + 1.0, y as f64 - 0.5));
        let b = Kernel::from_fn(&e, |x, y| c64((x * y) as f64, 1.0));
        let la = build_left_operator(&e, &a).unwrap();
        let lb = build_left_operator(&e, &b).unwrap();
        let lab = build_left_operator(&e, &a.compose(&b).unwrap()).unwrap();
        assert!(la.matmul(&lb).dist(&lab) < 1e-12);
        assert_eq!(build_left_operator(&e, &a.adjoint()).unwrap(), la.adjoint());
    }

    #[test]
    fn right_operators_commute_with_left() {
        let e = FiniteEquivRelation::full(FiniteMeasuredSpace::weighted(&[1.0, 2.0]).unwrap()).unwrap();
        let a = Kernel::from_fn(&e, |x, y| c64(1.0 + x as f64, y as f64));
        let la = build_left_operator(&e, &a).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let rb = build_right_operator(&e, &Kernel::unit(&e, x, y).unwrap()).unwrap();
                assert!(la.commutator(&rb).fro_norm() < 1e-12);
            }
        }
    }
}
