//! Measured dynamics on finite weighted point sets.
//!
//! A finite space carries strictly positive point masses, so "almost
//! everywhere" means "everywhere" and an ergodic relation is one with a single
//! class. The operator constructions then become explicit permutation and
//! diagonal matrices.

mod crossed;
mod fm;
mod kernel;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, Violations};
use crate::groupvna::FiniteGroup;

pub use crossed::{
    crossed_product, crossed_product_nonsingular, gms_fm_bridge, CrossedProduct, NonsingularCrossedProduct,
};
pub use fm::{
    cartan_factor_trace, fm_algebra, fm_membership_residual, right_commutant_check, standard_form,
    CartanReport, FmAlgebra, RightCommutantReport, StandardForm,
};
pub use kernel::{
    build_left_operator, build_right_operator, left_finiteness_constant, left_operator_matrix, rel_measures, Kernel,
    PartialBijection, RelMeasures,
};

/// Points with strictly positive masses.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMeasuredSpace {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl FiniteMeasuredSpace {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        let mut v = Violations::new();
        v.check(labels.len() == weights.len(), || {
            format!("{} labels but {} weights", labels.len(), weights.len())
        });
        v.check(!weights.is_empty(), || "space has no points".into());
        for (i, w) in weights.iter().enumerate() {
            v.check(w.is_finite() && *w > 0.0, || {
                format!("weights strictly positive: point {i} has weight {w}")
            });
        }
        v.into_result()?;
        Ok(FiniteMeasuredSpace { labels, weights })
    }

    /// Unlabeled points `0, 1, …` with the given weights.
    pub fn weighted(weights: &[f64]) -> Result<Self> {
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        FiniteMeasuredSpace::new(labels, weights.to_vec())
    }

    /// `n` points of mass 1.
    pub fn uniform(n: usize) -> Result<Self> {
        FiniteMeasuredSpace::weighted(&vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.weights[x]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn measure(&self, set: &[usize]) -> f64 {
        set.iter().map(|&x| self.weights[x]).sum()
    }
}

fn same_weight(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Partition of the points of a space, classes sorted internally and by
/// their smallest point. Pairs `(x, y)` with `x ~ y` are enumerated in
/// lexicographic order; that order indexes `ℓ²(E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteEquivRelation {
    space: FiniteMeasuredSpace,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    pair_index: Vec<Vec<Option<usize>>>,
}

impl FiniteEquivRelation {
    pub fn new(space: FiniteMeasuredSpace, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let mut v = Violations::new();
        let mut class_of = vec![usize::MAX; n];
        for (c, cls) in classes.iter().enumerate() {
            v.check(!cls.is_empty(), || format!("class {c} is empty"));
            for &x in cls {
                if x >= n {
                    v.push(format!("class {c} names point {x}, space has {n} points"));
                } else if class_of[x] != usize::MAX {
                    v.push(format!("point {x} appears in more than one class"));
                } else {
                    class_of[x] = c;
                }
            }
        }
        for (x, c) in class_of.iter().enumerate() {
            v.check(*c != usize::MAX, || format!("point {x} is in no class"));
        }
        v.into_result()?;
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort_by_key(|c| c[0]);
        for (c, cls) in classes.iter().enumerate() {
            for &x in cls {
                class_of[x] = c;
            }
        }
        let mut pairs = Vec::new();
        let mut pair_index = vec![vec![None; n]; n];
        for x in 0..n {
            for &y in &classes[class_of[x]] {
                pair_index[x][y] = Some(pairs.len());
                pairs.push((x, y));
            }
        }
        Ok(FiniteEquivRelation {
            space,
            classes,
            class_of,
            pairs,
            pair_index,
        })
    }

    /// Every point in its own class.
    pub fn identity(space: FiniteMeasuredSpace) -> Result<Self> {
        let classes = (0..space.len()).map(|x| vec![x]).collect();
        FiniteEquivRelation::new(space, classes)
    }

    /// A single class.
    pub fn full(space: FiniteMeasuredSpace) -> Result<Self> {
        let classes = vec![(0..space.len()).collect()];
        FiniteEquivRelation::new(space, classes)
    }

    pub fn space(&self) -> &FiniteMeasuredSpace {
        &self.space
    }

    pub fn num_points(&self) -> usize {
        self.space.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> &[usize] {
        &self.classes[self.class_of[x]]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `|E|`, the dimension of `ℓ²(E)`.
    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, x: usize, y: usize) -> Option<usize> {
        self.pair_index[x][y]
    }

    /// One class; with every point of positive mass this is ergodicity.
    pub fn is_ergodic(&self) -> bool {
        self.classes.len() == 1
    }

    /// Point masses constant on every class, i.e. invariant under the full
    /// group `[E]`.
    pub fn is_invariant_measure(&self) -> bool {
        self.classes.iter().all(|c| {
            let w0 = self.space.weight(c[0]);
            c.iter().all(|&x| same_weight(self.space.weight(x), w0))
        })
    }

    /// The same relation with points renamed by `perm` (old point `x`
    /// becomes `perm[x]`), weights carried along.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_points();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::validation("relabeling is not a permutation"));
            }
            seen[p] = true;
        }
        if perm.len() != n {
            return Err(Error::validation("relabeling has the wrong length"));
        }
        let mut labels = vec![String::new(); n];
        let mut weights = vec![0.0; n];
        for x in 0..n {
            labels[perm[x]] = self.space.labels[x].clone();
            weights[perm[x]] = self.space.weights[x];
        }
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&x| perm[x]).collect())
            .collect();
        FiniteEquivRelation::new(FiniteMeasuredSpace::new(labels, weights)?, classes)
    }
}

/// Action `σ` of a finite group; `map[γ][x] = σ_γ(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAction {
    group: FiniteGroup,
    space: FiniteMeasuredSpace,
    map: Vec<Vec<usize>>,
}

impl FiniteAction {
    pub fn new(group: FiniteGroup, space: FiniteMeasuredSpace, map: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let order = group.order();
        let mut v = Violations::new();
        v.check(map.len() == order, || {
            format!("action table has {} rows for a group of order {order}", map.len())
        });
        for (g, row) in map.iter().enumerate() {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                v.push(format!("row {g} is not a map of the {n} points"));
                continue;
            }
            let mut seen = vec![false; n];
            for &x in row {
                seen[x] = true;
            }
            v.check(seen.iter().all(|&s| s), || format!("σ_{g} is not a bijection"));
        }
        v.into_result()?;
        let mut v = Violations::new();
        v.check((0..n).all(|x| map[0][x] == x), || "σ of the identity is not the identity map".into());
        'outer: for g in 0..order {
            for h in 0..order {
                let gh = group.mul(g, h);
                if (0..n).any(|x| map[gh][x] != map[g][map[h][x]]) {
                    v.push(format!("σ_{g}∘σ_{h} differs from σ_{gh}"));
                    break 'outer;
                }
            }
        }
        v.into_result()?;
        Ok(FiniteAction { group, space, map })
    }

    /// Left translation of a group on itself.
    pub fn translation(group: FiniteGroup) -> Result<Self> {
        let n = group.order();
        let map = (0..n).map(|g| (0..n).map(|x| group.mul(g, x)).collect()).collect();
        FiniteAction::new(group, FiniteMeasuredSpace::uniform(n)?, map)
    }

    /// Every group element acting as the identity.
    pub fn trivial(group: FiniteGroup, space: FiniteMeasuredSpace) -> Result<Self> {
        let map = vec![(0..space.len()).collect(); group.order()];
        FiniteAction::new(group, space, map)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &FiniteMeasuredSpace {
        &self.space
    }

    pub fn map(&self) -> &[Vec<usize>] {
        &self.map
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.map[g][x]
    }

    pub fn is_measure_preserving(&self) -> bool {
        self.map.iter().all(|row| {
            row.iter()
                .enumerate()
                .all(|(x, &y)| same_weight(self.space.weight(x), self.space.weight(y)))
        })
    }

    pub fn is_free(&self) -> bool {
        (1..self.group.order()).all(|g| (0..self.space.len()).all(|x| self.map[g][x] != x))
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.space.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.map.iter().map(|row| row[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn orbit_relation(&self) -> Result<FiniteEquivRelation> {
        FiniteEquivRelation::new(self.space.clone(), self.orbits())
    }
}

#[derive(Clone, Debug)]
pub struct ActionAnalysis {
    pub measure_preserving: bool,
    pub free: bool,
    pub ergodic: bool,
    pub orbit_relation: FiniteEquivRelation,
}

pub fn action_analysis(a: &FiniteAction) -> Result<ActionAnalysis> {
    let orbit_relation = a.orbit_relation()?;
    Ok(ActionAnalysis {
        measure_preserving: a.is_measure_preserving(),
        free: a.is_free(),
        ergodic: orbit_relation.is_ergodic(),
        orbit_relation,
    })
}
