//! Tropical rank and symmetric tropical rank by scanning minors.
//!
//! The rank is the largest `r` such that some `r x r` submatrix is
//! (symmetrically) tropically nonsingular. Levels are scanned upward and the
//! search stops at the first level where every submatrix is singular, unless
//! the exhaustive option asks for every level to be scanned.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::RankError;
use crate::matching::{is_singular, Mode};
use crate::matrix::TropicalMatrix;
use crate::scalar::Scalar;

/// Outcome of a rank computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// Lexicographically first nonsingular `rank x rank` submatrix `(I, J)`.
    pub witness: (Vec<usize>, Vec<usize>),
    /// Every level above `rank` was scanned and found singular.
    pub exhaustive: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RankOptions {
    /// Scan all levels and check that nonsingular submatrices stop at one level.
    pub exhaustive: bool,
}

/// First `(I, J)` with `|I| = |J| = r` that is nonsingular in `mode`.
///
/// In symmetric mode `(I, J)` and `(J, I)` are singular together, so only
/// `J >= I` is scanned; the first witness overall always has that form.
pub fn first_nonsingular<T: Scalar>(a: &TropicalMatrix<T>, r: usize, mode: Mode) -> Option<(Vec<usize>, Vec<usize>)> {
    let row_sets: Vec<Vec<usize>> = (0..a.n_rows()).combinations(r).collect();
    let col_sets: Vec<Vec<usize>> = (0..a.n_cols()).combinations(r).collect();
    row_sets.par_iter().find_map_first(|rows| {
        col_sets
            .iter()
            .filter(|cols| mode == Mode::Standard || *cols >= rows)
            .find(|cols| !is_singular(a, rows, cols, mode).expect("valid index sets"))
            .map(|cols| (rows.clone(), cols.clone()))
    })
}

fn rank_in_mode<T: Scalar>(a: &TropicalMatrix<T>, mode: Mode, opts: RankOptions) -> Result<RankReport, RankError> {
    let top = a.n_rows().min(a.n_cols());
    let mut best: Option<(usize, (Vec<usize>, Vec<usize>))> = None;
    let mut first_empty: Option<usize> = None;
    for r in 1..=top {
        match first_nonsingular(a, r, mode) {
            Some(w) => {
                if let Some(below) = first_empty {
                    return Err(RankError::MonotonicityViolated { level: r, below });
                }
                best = Some((r, w));
            }
            None => {
                first_empty.get_or_insert(r);
                if !opts.exhaustive {
                    break;
                }
            }
        }
    }
    let (rank, witness) = best.expect("every 1x1 submatrix is nonsingular");
    Ok(RankReport { rank, witness, exhaustive: opts.exhaustive || rank == top })
}

pub fn tropical_rank<T: Scalar>(a: &TropicalMatrix<T>) -> RankReport {
    rank_in_mode(a, Mode::Standard, RankOptions::default()).expect("non-exhaustive scan cannot fail")
}

pub fn tropical_rank_with<T: Scalar>(a: &TropicalMatrix<T>, opts: RankOptions) -> Result<RankReport, RankError> {
    rank_in_mode(a, Mode::Standard, opts)
}

pub fn symmetric_tropical_rank<T: Scalar>(a: &TropicalMatrix<T>) -> Result<RankReport, RankError> {
    symmetric_tropical_rank_with(a, RankOptions::default())
}

pub fn symmetric_tropical_rank_with<T: Scalar>(
    a: &TropicalMatrix<T>,
    opts: RankOptions,
) -> Result<RankReport, RankError> {
    if !a.is_symmetric() {
        return Err(RankError::SymmetryRequired);
    }
    rank_in_mode(a, Mode::Symmetric, opts)
}

/// Every column is a tropical multiple of the first, i.e. tropical rank one
/// (for symmetric input, also symmetric tropical rank one).
pub fn rank_one_test<T: Scalar>(a: &TropicalMatrix<T>) -> Result<bool, RankError> {
    if !a.is_symmetric() {
        return Err(RankError::SymmetryRequired);
    }
    Ok(is_rank_one(a))
}

pub(crate) fn is_rank_one<T: Scalar>(a: &TropicalMatrix<T>) -> bool {
    (1..a.n_cols()).all(|j| {
        let shift = a.get(0, j).clone() - a.get(0, 0).clone();
        (1..a.n_rows()).all(|i| a.get(i, j).clone() - a.get(i, 0).clone() == shift)
    })
}

/// Largest dimension accepted by [`brute_rank_oracle`].
pub const ORACLE_LIMIT: usize = 7;

/// Rank by scoring every bijection of every square submatrix, with no
/// assignment solver and no early exit.
pub fn brute_rank_oracle<T: Scalar>(a: &TropicalMatrix<T>, mode: Mode) -> Result<usize, RankError> {
    if a.n_rows() > ORACLE_LIMIT || a.n_cols() > ORACLE_LIMIT {
        return Err(RankError::TooLarge { limit: ORACLE_LIMIT });
    }
    if mode == Mode::Symmetric && !a.is_symmetric() {
        return Err(RankError::SymmetryRequired);
    }
    let top = a.n_rows().min(a.n_cols());
    let mut rank = 0;
    for r in 1..=top {
        for rows in (0..a.n_rows()).combinations(r) {
            for cols in (0..a.n_cols()).combinations(r) {
                if !brute_singular(a, &rows, &cols, mode) {
                    rank = rank.max(r);
                }
            }
        }
    }
    Ok(rank)
}

fn brute_singular<T: Scalar>(a: &TropicalMatrix<T>, rows: &[usize], cols: &[usize], mode: Mode) -> bool {
    let r = rows.len();
    let mut best: Option<T> = None;
    let mut monomials: Vec<Vec<(usize, usize)>> = Vec::new();
    for p in (0..r).permutations(r) {
        let cost = (0..r).fold(T::zero(), |acc, k| acc + a.get(rows[k], cols[p[k]]).clone());
        let mut mono: Vec<(usize, usize)> = (0..r)
            .map(|k| {
                let (i, j) = (rows[k], cols[p[k]]);
                match mode {
                    Mode::Standard => (i, j),
                    Mode::Symmetric => (i.min(j), i.max(j)),
                }
            })
            .collect();
        mono.sort_unstable();
        match best.as_ref().map(|b| cost.cmp(b)) {
            Some(std::cmp::Ordering::Greater) => {}
            Some(std::cmp::Ordering::Equal) => {
                if !monomials.contains(&mono) {
                    monomials.push(mono);
                }
            }
            _ => {
                best = Some(cost);
                monomials = vec![mono];
            }
        }
    }
    monomials.len() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = TropicalMatrix<Rational>;

    fn m(rows: &[&[i64]]) -> M {
        M::from_i64_rows(rows).unwrap()
    }

    fn c2() -> M {
        m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    #[test]
    fn c2_ranks() {
        assert_eq!(tropical_rank(&c2()).rank, 2);
        let sym = symmetric_tropical_rank(&c2()).unwrap();
        assert_eq!(sym.rank, 3);
        assert_eq!(sym.witness, (vec![0, 1, 2], vec![0, 1, 2]));
        assert!(sym.exhaustive);
        assert_eq!(brute_rank_oracle(&c2(), Mode::Symmetric).unwrap(), 3);
        assert_eq!(brute_rank_oracle(&c2(), Mode::Standard).unwrap(), 2);
    }

    #[test]
    fn zero_matrix_has_rank_one() {
        let z = M::from_fn(4, 4, |_, _| Rational::from_integer(0)).unwrap();
        let report = tropical_rank(&z);
        assert_eq!(report.rank, 1);
        assert_eq!(report.witness, (vec![0], vec![0]));
        assert_eq!(symmetric_tropical_rank(&z).unwrap().rank, 1);
    }

    #[test]
    fn rank_one_examples() {
        assert!(rank_one_test(&m(&[&[0, 1], &[1, 2]])).unwrap());
        assert!(rank_one_test(&m(&[&[7]])).unwrap());
        assert!(!rank_one_test(&c2()).unwrap());
        assert!(rank_one_test(&m(&[&[0, 1], &[2, 0]])).is_err());
    }

    #[test]
    fn symmetric_rank_needs_symmetry() {
        assert_eq!(symmetric_tropical_rank(&m(&[&[0, 1], &[2, 0]])), Err(RankError::SymmetryRequired));
        let big = M::from_fn(8, 8, |_, _| Rational::from_integer(0)).unwrap();
        assert_eq!(brute_rank_oracle(&big, Mode::Standard), Err(RankError::TooLarge { limit: 7 }));
    }

    #[test]
    fn rectangular_rank() {
        let a = m(&[&[0, 1, 5], &[3, 0, 2]]);
        assert_eq!(tropical_rank(&a).rank, brute_rank_oracle(&a, Mode::Standard).unwrap());
    }

    #[test]
    fn agrees_with_oracle_on_small_random_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let n = rng.gen_range(1..=4);
            let mut rows = vec![vec![Rational::from_integer(0); n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = Rational::from_integer(rng.gen_range(0..4));
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let a = M::from_rows(rows).unwrap();
            let exhaustive = RankOptions { exhaustive: true };
            assert_eq!(
                tropical_rank_with(&a, exhaustive).unwrap().rank,
                brute_rank_oracle(&a, Mode::Standard).unwrap()
            );
            assert_eq!(
                symmetric_tropical_rank_with(&a, exhaustive).unwrap().rank,
                brute_rank_oracle(&a, Mode::Symmetric).unwrap()
            );
        }
    }
}
