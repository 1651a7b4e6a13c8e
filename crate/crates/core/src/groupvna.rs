//! Finite groups, the left regular representation and the group von Neumann
//! algebra `L(G)` with its trace.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{center, generate, OperatorAlgebra};
use crate::error::{Error, Result, Violations};
use crate::numkit::{c64, Mat, Tol};

/// Group given by its multiplication table; `table[g][h]` is the index of
/// `g·h` and index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates the table exhaustively: Latin square, identity at 0,
    /// associativity over all triples.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let mut v = Violations::new();
        v.check(n > 0, || "group table is empty".into());
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                v.push(format!("row {g} has {} entries, expected {n}", row.len()));
            } else if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                v.push(format!("row {g} contains out-of-range index {bad}"));
            }
        }
        v.into_result()?;
        let mut v = Violations::new();
        for g in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for h in 0..n {
                seen_row[table[g][h]] = true;
                seen_col[table[h][g]] = true;
            }
            v.check(seen_row.iter().all(|&s| s), || format!("row {g} is not a permutation"));
            v.check(seen_col.iter().all(|&s| s), || format!("column {g} is not a permutation"));
            v.check(table[0][g] == g && table[g][0] == g, || {
                format!("index 0 is not an identity for element {g}")
            });
        }
        v.into_result()?;
        let mut v = Violations::new();
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        v.push(format!("associativity fails for ({a}, {b}, {c}) in row {a}"));
                        break 'outer;
                    }
                }
            }
        }
        v.into_result()?;
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == 0).unwrap_or(0))
            .collect();
        Ok(FiniteGroup {
            table,
            inverse,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::validation(format!(
                "{} labels for a group of order {}",
                labels.len(),
                self.order()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Conjugacy classes by orbit enumeration, each sorted, in order of
    /// their smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    /// `ℤ/n` with `k ↦ k + j mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("cyclic group needs n ≥ 1"));
        }
        FiniteGroup::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// `S_n`, permutations in lexicographic order (identity first), product
    /// `(σ·τ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::validation("symmetric group supported for 1 ≤ n ≤ 5"));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap_or(0);
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        index(&st)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(table)
    }

    /// Dihedral group of order `2n`: element `r^k s^e` has index `k + n·e`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("dihedral group needs n ≥ 1"));
        }
        let order = 2 * n;
        let table = (0..order)
            .map(|a| {
                let (k1, e1) = (a % n, a / n);
                (0..order)
                    .map(|b| {
                        let (k2, e2) = (b % n, b / n);
                        // r^k1 s^e1 r^k2 s^e2 = r^(k1 ± k2) s^(e1+e2)
                        let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 } % n;
                        k + n * ((e1 + e2) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(table)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}` in that order.
    pub fn quaternion() -> Result<Self> {
        // unit index u ∈ {1,i,j,k} = 0..4, sign bit; element = u + 4·sign
        let mul_unit = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let order = [0usize, 4, 1, 5, 2, 6, 3, 7];
        let pos = |e: usize| order.iter().position(|&x| x == e).unwrap_or(0);
        let table = order
            .iter()
            .map(|&a| {
                order
                    .iter()
                    .map(|&b| {
                        let (u, s) = mul_unit(a % 4, b % 4);
                        let sign = (a / 4 + b / 4 + s as usize) % 2;
                        pos(u + 4 * sign)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(table)
    }

    /// Parses `cyclic(n)`, `symmetric(n)`, `dihedral(n)` or `quaternion(8)`.
    pub fn builtin(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, arg) = spec
            .strip_suffix(')')
            .and_then(|s| s.split_once('('))
            .ok_or_else(|| Error::validation(format!("cannot parse group name `{spec}`")))?;
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::validation(format!("bad group parameter in `{spec}`")))?;
        match name.trim() {
            "cyclic" => FiniteGroup::cyclic(n),
            "symmetric" => FiniteGroup::symmetric(n),
            "dihedral" => FiniteGroup::dihedral(n),
            "quaternion" if n == 8 => FiniteGroup::quaternion(),
            _ => Err(Error::validation(format!("unknown built-in group `{spec}`"))),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// `U_γ e_δ = e_{γδ}`.
pub fn left_regular(g: &FiniteGroup) -> Vec<Mat> {
    let n = g.order();
    (0..n)
        .map(|a| {
            let mut u = Mat::zeros(n, n);
            for b in 0..n {
                u[(g.mul(a, b), b)] = c64(1.0, 0.0);
            }
            u
        })
        .collect()
}

/// `L(G)` and the density matrix of `τ(x) = ⟨x e_1, e_1⟩`.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub algebra: OperatorAlgebra,
    pub tau: Mat,
    pub unitaries: Vec<Mat>,
}

pub fn group_algebra(g: &FiniteGroup, tol: Tol) -> Result<GroupAlgebra> {
    let n = g.order();
    let unitaries = left_regular(g);
    let algebra = generate(n, &unitaries, tol)?;
    if algebra.dim() != n {
        return Err(Error::numerical(
            format!("L(G) has dimension {} for a group of order {n}", algebra.dim()),
            algebra.dim() as f64,
        ));
    }
    Ok(GroupAlgebra {
        algebra,
        tau: Mat::unit(n, 0, 0),
        unitaries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CenterProfile {
    pub center_dim: usize,
    pub conjugacy_class_count: usize,
    pub is_factor: bool,
}

pub fn center_profile(g: &FiniteGroup, tol: Tol) -> Result<CenterProfile> {
    let l = group_algebra(g, tol)?;
    let center_dim = center(&l.algebra, tol)?.dim();
    let classes = g.conjugacy_classes().len();
    if center_dim != classes {
        return Err(Error::numerical(
            format!("center dimension {center_dim} but {classes} conjugacy classes"),
            (center_dim as f64 - classes as f64).abs(),
        ));
    }
    Ok(CenterProfile {
        center_dim,
        conjugacy_class_count: classes,
        is_factor: center_dim == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::trace_with;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn builtin_orders() {
        assert_eq!(FiniteGroup::cyclic(5).unwrap().order(), 5);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert_eq!(FiniteGroup::quaternion().unwrap().order(), 8);
        assert_eq!(FiniteGroup::builtin("dihedral(4)").unwrap(), FiniteGroup::dihedral(4).unwrap());
        assert!(FiniteGroup::builtin("free(2)").is_err());
    }

    #[test]
    fn class_counts() {
        let count = |g: FiniteGroup| g.conjugacy_classes().len();
        assert_eq!(count(FiniteGroup::symmetric(3).unwrap()), 3);
        assert_eq!(count(FiniteGroup::symmetric(4).unwrap()), 5);
        assert_eq!(count(FiniteGroup::dihedral(4).unwrap()), 5);
        assert_eq!(count(FiniteGroup::quaternion().unwrap()), 5);
        assert!(!FiniteGroup::quaternion().unwrap().is_abelian());
    }

    #[test]
    fn invalid_tables() {
        let err = FiniteGroup::new(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.is_validation());
        let err = FiniteGroup::new(vec![vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(err.is_validation());
        // Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::new(t).unwrap_err() {
            Error::Validation(v) => assert!(v[0].contains("associativity")),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn regular_representation() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let u = left_regular(&g);
        assert_eq!(u[0], Mat::identity(6));
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(u[a].matmul(&u[b]), u[g.mul(a, b)]);
            }
        }
        assert_eq!(left_regular(&FiniteGroup::cyclic(1).unwrap()), vec![Mat::identity(1)]);
    }

    #[test]
    fn group_algebra_trace() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let l = group_algebra(&g, tol()).unwrap();
        assert_eq!(l.algebra.dim(), 4);
        assert_eq!(center(&l.algebra, tol()).unwrap().dim(), 4);
        for a in 0..4 {
            for b in 0..4 {
                let t = trace_with(&l.tau, &l.unitaries[a].matmul(&l.unitaries[b]));
                let want = if b == g.inv(a) { 1.0 } else { 0.0 };
                assert!((t - c64(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn profiles() {
        let p = center_profile(&FiniteGroup::cyclic(1).unwrap(), tol()).unwrap();
        assert_eq!((p.center_dim, p.conjugacy_class_count, p.is_factor), (1, 1, true));
        let p = center_profile(&FiniteGroup::cyclic(4).unwrap(), tol()).unwrap();
        assert_eq!((p.center_dim, p.conjugacy_class_count, p.is_factor), (4, 4, false));
        let p = center_profile(&FiniteGroup::symmetric(3).unwrap(), tol()).unwrap();
        assert_eq!((p.center_dim, p.conjugacy_class_count, p.is_factor), (3, 3, false));
    }
}
