//! Tropical determinants as min-cost assignments, and enumeration of the
//! optimal bijections of a submatrix.
//!
//! The solver keeps exact dual potentials `u`, `v` with
//! `cost[i][j] - u[i] - v[j] >= 0` and equality along the optimal assignment.
//! By complementary slackness a bijection is optimal iff it uses only edges of
//! zero reduced cost, so all optimal bijections are the perfect matchings of
//! the tight subgraph. Enumeration walks that subgraph depth first and stops
//! once enough inequivalent witnesses are found.

use std::collections::HashSet;

use crate::error::MatchingError;
use crate::matrix::TropicalMatrix;
use crate::perm::Permutation;
use crate::scalar::Scalar;

/// How two optimal bijections are told apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Distinct as maps (ordinary tropical singularity).
    Standard,
    /// Distinct as monomials once `X[i][j] = X[j][i]` (symmetric singularity).
    Symmetric,
}

/// Optimal assignment plus the dual certificate.
#[derive(Clone, Debug)]
pub struct Assignment<T> {
    pub value: T,
    pub row_to_col: Vec<usize>,
    pub row_potential: Vec<T>,
    pub col_potential: Vec<T>,
}

impl<T: Scalar> Assignment<T> {
    fn reduced(&self, cost: &[Vec<T>], i: usize, j: usize) -> T {
        cost[i][j].clone() - self.row_potential[i].clone() - self.col_potential[j].clone()
    }
}

/// Min-cost perfect assignment on a square cost matrix (Hungarian method with
/// potentials, O(n^3), exact arithmetic).
pub fn solve_assignment<T: Scalar>(cost: &[Vec<T>]) -> Assignment<T> {
    let n = cost.len();
    debug_assert!(cost.iter().all(|r| r.len() == n));
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("just set");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] = u[p[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.clone() - delta.clone();
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    let value = row_to_col
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &j)| acc + cost[i][j].clone());
    let a = Assignment { value, row_to_col, row_potential: u[1..].to_vec(), col_potential: v[1..].to_vec() };
    debug_assert!((0..n).all(|i| (0..n).all(|j| !a.reduced(cost, i, j).is_negative())));
    debug_assert!((0..n).all(|i| a.reduced(cost, i, a.row_to_col[i]).is_zero()));
    a
}

/// A bijection from a row index set to a column index set of an ambient
/// matrix: `rows[k]` is sent to `cols[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bijection {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Bijection {
    /// The monomial of this bijection under `X[i][j] = X[j][i]`.
    pub fn pair_multiset(&self) -> PairMultiset {
        PairMultiset::of(&self.rows, &self.cols)
    }

    /// As a permutation, when row and column sets coincide (principal case).
    pub fn as_permutation(&self, n: usize) -> Option<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut row_set = self.rows.clone();
        let mut col_set = self.cols.clone();
        row_set.sort_unstable();
        col_set.sort_unstable();
        if row_set != col_set {
            return None;
        }
        for (&r, &c) in self.rows.iter().zip(&self.cols) {
            images[r] = c;
        }
        Permutation::from_images(images).ok()
    }

    pub fn cost<T: Scalar>(&self, a: &TropicalMatrix<T>) -> T {
        self.rows.iter().zip(&self.cols).fold(T::zero(), |acc, (&i, &j)| acc + a.get(i, j).clone())
    }
}

/// Sorted multiset of unordered index pairs `{i, j}` used by a bijection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairMultiset(Vec<(usize, usize)>);

impl PairMultiset {
    pub fn of(rows: &[usize], cols: &[usize]) -> Self {
        let mut pairs: Vec<(usize, usize)> =
            rows.iter().zip(cols).map(|(&i, &j)| (i.min(j), i.max(j))).collect();
        pairs.sort_unstable();
        PairMultiset(pairs)
    }

    pub fn of_permutation(p: &Permutation) -> Self {
        let rows: Vec<usize> = (0..p.len()).collect();
        Self::of(&rows, p.images())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }
}

fn check_index_sets<T: Scalar>(
    a: &TropicalMatrix<T>,
    rows: &[usize],
    cols: &[usize],
) -> Result<(), MatchingError> {
    if rows.len() != cols.len() {
        return Err(MatchingError::SizeMismatch { rows: rows.len(), cols: cols.len() });
    }
    let valid = |set: &[usize], dim: usize| {
        let mut seen = HashSet::new();
        !set.is_empty() && set.iter().all(|&x| x < dim && seen.insert(x))
    };
    if !valid(rows, a.n_rows()) || !valid(cols, a.n_cols()) {
        return Err(MatchingError::BadIndexSet);
    }
    Ok(())
}

fn sub_costs<T: Scalar>(a: &TropicalMatrix<T>, rows: &[usize], cols: &[usize]) -> Vec<Vec<T>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a.get(i, j).clone()).collect()).collect()
}

/// Tropical determinant of a square matrix.
pub fn trop_det<T: Scalar>(a: &TropicalMatrix<T>) -> Result<T, MatchingError> {
    if !a.is_square() {
        return Err(MatchingError::SizeMismatch { rows: a.n_rows(), cols: a.n_cols() });
    }
    let idx: Vec<usize> = (0..a.n_rows()).collect();
    sub_det(a, &idx, &idx)
}

/// Tropical determinant of the submatrix on `rows` x `cols`.
pub fn sub_det<T: Scalar>(a: &TropicalMatrix<T>, rows: &[usize], cols: &[usize]) -> Result<T, MatchingError> {
    check_index_sets(a, rows, cols)?;
    Ok(solve_assignment(&sub_costs(a, rows, cols)).value)
}

/// Depth-first enumeration of perfect matchings in a bipartite graph given by
/// adjacency lists; `visit` returns `false` to stop.
fn walk_matchings(adj: &[Vec<usize>], visit: &mut impl FnMut(&[usize]) -> bool) {
    fn go(
        row: usize,
        adj: &[Vec<usize>],
        used: &mut [bool],
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if row == adj.len() {
            return visit(current);
        }
        for &c in &adj[row] {
            if used[c] {
                continue;
            }
            used[c] = true;
            current.push(c);
            let keep_going = go(row + 1, adj, used, current, visit);
            current.pop();
            used[c] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }
    let mut used = vec![false; adj.len()];
    let mut current = Vec::with_capacity(adj.len());
    go(0, adj, &mut used, &mut current, visit);
}

/// Optimal bijections `rows -> cols`, deduplicated according to `mode`, at
/// most `limit` of them. The first entry is always the solver's assignment.
pub fn enumerate_optimal_bijections<T: Scalar>(
    a: &TropicalMatrix<T>,
    rows: &[usize],
    cols: &[usize],
    mode: Mode,
    limit: usize,
) -> Result<Vec<Bijection>, MatchingError> {
    check_index_sets(a, rows, cols)?;
    if mode == Mode::Symmetric && !a.is_symmetric() {
        return Err(MatchingError::SymmetryRequired);
    }
    if limit == 0 {
        return Ok(Vec::new());
    }
    let cost = sub_costs(a, rows, cols);
    let solved = solve_assignment(&cost);
    let r = rows.len();
    let adj: Vec<Vec<usize>> = (0..r)
        .map(|i| {
            let mut tight: Vec<usize> = (0..r).filter(|&j| solved.reduced(&cost, i, j).is_zero()).collect();
            // visit the solver's choice first so the first witness is stable
            let chosen = solved.row_to_col[i];
            tight.retain(|&j| j != chosen);
            tight.insert(0, chosen);
            tight
        })
        .collect();

    let mut found: Vec<Bijection> = Vec::new();
    let mut seen_pairs: HashSet<PairMultiset> = HashSet::new();
    walk_matchings(&adj, &mut |m| {
        let b = Bijection { rows: rows.to_vec(), cols: m.iter().map(|&k| cols[k]).collect() };
        let fresh = match mode {
            Mode::Standard => true,
            Mode::Symmetric => seen_pairs.insert(b.pair_multiset()),
        };
        if fresh {
            found.push(b);
        }
        found.len() < limit
    });
    Ok(found)
}

pub fn is_trop_singular<T: Scalar>(a: &TropicalMatrix<T>, rows: &[usize], cols: &[usize]) -> Result<bool, MatchingError> {
    Ok(enumerate_optimal_bijections(a, rows, cols, Mode::Standard, 2)?.len() >= 2)
}

pub fn is_sym_trop_singular<T: Scalar>(
    a: &TropicalMatrix<T>,
    rows: &[usize],
    cols: &[usize],
) -> Result<bool, MatchingError> {
    Ok(enumerate_optimal_bijections(a, rows, cols, Mode::Symmetric, 2)?.len() >= 2)
}

pub fn is_singular<T: Scalar>(a: &TropicalMatrix<T>, rows: &[usize], cols: &[usize], mode: Mode) -> Result<bool, MatchingError> {
    Ok(enumerate_optimal_bijections(a, rows, cols, mode, 2)?.len() >= 2)
}

/// Summary of a submatrix determinant.
#[derive(Clone, Debug)]
pub struct DetResult<T> {
    pub value: T,
    /// Number of distinct optimal bijections, capped at 2.
    pub distinct_monomials: usize,
    /// Number of optimal monomials distinct under `X[i][j] = X[j][i]`,
    /// capped at 2; `None` unless the ambient matrix is symmetric.
    pub distinct_classes: Option<usize>,
    pub standard_witnesses: Vec<Bijection>,
    pub symmetric_witnesses: Vec<Bijection>,
}

impl<T> DetResult<T> {
    pub fn is_singular(&self) -> bool {
        self.distinct_monomials >= 2
    }

    pub fn is_sym_singular(&self) -> Option<bool> {
        self.distinct_classes.map(|c| c >= 2)
    }
}

pub fn det_report<T: Scalar>(a: &TropicalMatrix<T>, rows: &[usize], cols: &[usize]) -> Result<DetResult<T>, MatchingError> {
    let standard = enumerate_optimal_bijections(a, rows, cols, Mode::Standard, 2)?;
    let symmetric = if a.is_symmetric() {
        Some(enumerate_optimal_bijections(a, rows, cols, Mode::Symmetric, 2)?)
    } else {
        None
    };
    Ok(DetResult {
        value: standard[0].cost(a),
        distinct_monomials: standard.len(),
        distinct_classes: symmetric.as_ref().map(Vec::len),
        standard_witnesses: standard,
        symmetric_witnesses: symmetric.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::cycle_similar;
    use crate::scalar::Rational;
    use itertools::Itertools;

    type M = TropicalMatrix<Rational>;

    fn m(rows: &[&[i64]]) -> M {
        M::from_i64_rows(rows).unwrap()
    }

    fn c2() -> M {
        m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    fn all3() -> Vec<usize> {
        vec![0, 1, 2]
    }

    #[test]
    fn small_determinants() {
        assert_eq!(trop_det(&c2()).unwrap(), Rational::from_integer(0));
        assert_eq!(trop_det(&m(&[&[5]])).unwrap(), Rational::from_integer(5));
        assert_eq!(trop_det(&m(&[&[0, 1], &[1, 0]])).unwrap(), Rational::from_integer(0));
        assert!(trop_det(&m(&[&[0, 1, 2]])).is_err());
    }

    #[test]
    fn c2_standard_singular_but_not_symmetric() {
        let a = c2();
        let std = enumerate_optimal_bijections(&a, &all3(), &all3(), Mode::Standard, 2).unwrap();
        assert_eq!(std.len(), 2);
        let perms: Vec<Permutation> = std.iter().map(|b| b.as_permutation(3).unwrap()).collect();
        assert!(perms.iter().all(|p| p.cycles().len() == 1));
        assert!(cycle_similar(&perms[0], &perms[1]).unwrap());
        let sym = enumerate_optimal_bijections(&a, &all3(), &all3(), Mode::Symmetric, 2).unwrap();
        assert_eq!(sym.len(), 1);
        assert!(is_trop_singular(&a, &all3(), &all3()).unwrap());
        assert!(!is_sym_trop_singular(&a, &all3(), &all3()).unwrap());
    }

    #[test]
    fn one_by_one_has_one_witness() {
        let a = c2();
        for mode in [Mode::Standard, Mode::Symmetric] {
            assert_eq!(enumerate_optimal_bijections(&a, &[1], &[2], mode, 2).unwrap().len(), 1);
        }
    }

    #[test]
    fn equal_rows_force_symmetric_singularity() {
        let a = m(&[&[1, 2, 0, 3], &[2, 5, 4, 1], &[0, 4, 2, 2], &[3, 1, 2, 7]]);
        let n = 5;
        let dup = M::from_fn(n, n, |i, j| *a.get(i.min(3), j.min(3))).unwrap();
        assert!(dup.is_symmetric());
        for size in 2..=n {
            for rows in (0..n).combinations(size).filter(|r| r.contains(&(n - 2)) && r.contains(&(n - 1))) {
                for cols in (0..n).combinations(size) {
                    assert!(is_sym_trop_singular(&dup, &rows, &cols).unwrap(), "{rows:?} {cols:?}");
                }
            }
        }
    }

    #[test]
    fn generic_three_by_three_is_nonsingular() {
        // entries are distinct powers of two, so all six sums differ
        let a = m(&[&[1, 2, 4], &[8, 16, 32], &[64, 128, 256]]);
        let sums: Vec<i64> = (0..3)
            .permutations(3)
            .map(|p| (0..3).map(|i| [1i64, 2, 4, 8, 16, 32, 64, 128, 256][i * 3 + p[i]]).sum())
            .collect();
        assert_eq!(sums.iter().unique().count(), 6);
        assert_eq!(trop_det(&a).unwrap(), Rational::from_integer(*sums.iter().min().unwrap()));
        assert!(!is_trop_singular(&a, &all3(), &all3()).unwrap());
        let s = m(&[&[1, 2, 4], &[2, 8, 16], &[4, 16, 64]]);
        assert_eq!(trop_det(&s).unwrap(), Rational::from_integer(16));
        assert!(!is_trop_singular(&s, &all3(), &all3()).unwrap());
        assert!(!is_sym_trop_singular(&s, &all3(), &all3()).unwrap());
    }

    #[test]
    fn symmetric_mode_needs_symmetric_matrix() {
        let a = m(&[&[0, 1], &[2, 0]]);
        assert_eq!(
            enumerate_optimal_bijections(&a, &[0, 1], &[0, 1], Mode::Symmetric, 2),
            Err(MatchingError::SymmetryRequired)
        );
        assert_eq!(sub_det(&a, &[0, 1], &[0]), Err(MatchingError::SizeMismatch { rows: 2, cols: 1 }));
        assert_eq!(sub_det(&a, &[0, 0], &[0, 1]), Err(MatchingError::BadIndexSet));
    }

    #[test]
    fn all_zero_matrix_stops_at_limit() {
        let a = M::from_fn(12, 12, |_, _| Rational::from_integer(0)).unwrap();
        let idx: Vec<usize> = (0..12).collect();
        let found = enumerate_optimal_bijections(&a, &idx, &idx, Mode::Symmetric, 5).unwrap();
        assert_eq!(found.len(), 5);
        let report = det_report(&a, &idx, &idx).unwrap();
        assert_eq!(report.distinct_monomials, 2);
        assert_eq!(report.distinct_classes, Some(2));
    }
}
