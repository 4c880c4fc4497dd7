//! Catalog of foundational matrices and the two extension operations that
//! grow them into witnesses for the non-basis region.
//!
//! A witness for `(r, n)` is an `n x n` symmetric matrix of symmetric tropical
//! rank `r - 1` whose symmetric Kapranov rank is larger; its existence means
//! the symmetric `r x r` minors do not form a tropical basis. The Kapranov gap
//! of the catalog bases is imported as a known fact and carried along the
//! derivation; only the tropical ranks are recomputed.

use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::WitnessError;
use crate::matching::{is_sym_trop_singular, Mode};
use crate::matrix::TropicalMatrix;
use crate::perm::Permutation;
use crate::rank::{first_nonsingular, symmetric_tropical_rank, tropical_rank};
use crate::scalar::{Rational, Scalar};

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 7] = ["fano7", "fano7_symmetric", "fano13", "shitov6", "shitov6_symmetric", "c1", "c2"];

const FANO7: &str = "\
1 1 0 1 0 0 0
0 1 1 0 1 0 0
0 0 1 1 0 1 0
0 0 0 1 1 0 1
1 0 0 0 1 1 0
0 1 0 0 0 1 1
1 0 1 0 0 0 1";

const FANO7_SYMMETRIC: &str = "\
1 1 0 1 0 0 0
1 0 1 0 0 0 1
0 1 0 0 0 1 1
1 0 0 0 1 1 0
0 0 0 1 1 0 1
0 0 1 1 0 1 0
0 1 1 0 1 0 0";

const FANO13: &str = "\
0 0 0 0 0 0 1 1 0 1 0 0 0
0 0 0 0 0 0 1 0 1 0 0 0 1
0 0 0 0 0 0 0 1 0 0 0 1 1
0 0 0 0 0 0 1 0 0 0 1 1 0
0 0 0 0 0 0 0 0 0 1 1 0 1
0 0 0 0 0 0 0 0 1 1 0 1 0
1 1 0 1 0 0 0 1 1 0 1 0 0
1 0 1 0 0 0 1 0 0 0 0 0 0
0 1 0 0 0 1 1 0 0 0 0 0 0
1 0 0 0 1 1 0 0 0 0 0 0 0
0 0 0 1 1 0 1 0 0 0 0 0 0
0 0 1 1 0 1 0 0 0 0 0 0 0
0 1 1 0 1 0 0 0 0 0 0 0 0";

const SHITOV6: &str = "\
0 0 4 4 4 4
0 0 2 4 1 4
4 4 0 0 4 4
2 4 0 0 2 4
4 4 4 4 0 0
2 4 1 4 0 0";

const SHITOV6_SYMMETRIC: &str = "\
0 0 2 4 1 4
0 0 4 4 4 4
2 4 2 4 0 0
4 4 4 4 0 0
1 4 0 0 2 4
4 4 0 0 4 4";

const C1: &str = "\
1 0 0
0 1 0
0 0 0";

const C2: &str = "\
1 0 0
0 1 0
0 0 1";

/// One step in the derivation of a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Catalog(String),
    /// Repeat the last row and column.
    Duplicate,
    /// Border with a row and column of `p`, corner `m`.
    Border { p: Rational, m: Rational },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Catalog(name) => write!(f, "catalog:{name}"),
            Step::Duplicate => write!(f, "duplicate_extend"),
            Step::Border { p, m } => write!(f, "border_extend(P={p}, M={m})"),
        }
    }
}

/// A matrix with its claimed ranks and the chain of operations producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub matrix: TropicalMatrix<Rational>,
    pub claimed_trop_rank: Option<usize>,
    /// `None` for non-symmetric matrices.
    pub claimed_sym_trop_rank: Option<usize>,
    /// The (symmetric, when the matrix is symmetric) Kapranov rank exceeds the
    /// corresponding tropical rank. Imported from the catalog, never computed.
    pub claimed_kapranov_gap: bool,
    pub provenance: Vec<Step>,
}

impl WitnessRecord {
    pub fn provenance_string(&self) -> String {
        self.provenance.iter().map(ToString::to_string).join(" -> ")
    }
}

pub fn catalog(name: &str) -> Result<WitnessRecord, WitnessError> {
    let (text, trop, sym, gap) = match name {
        "fano7" => (FANO7, Some(3), None, true),
        "fano7_symmetric" => (FANO7_SYMMETRIC, Some(3), Some(4), false),
        "fano13" => (FANO13, None, Some(3), true),
        "shitov6" => (SHITOV6, Some(4), None, true),
        "shitov6_symmetric" => (SHITOV6_SYMMETRIC, None, Some(4), true),
        "c1" => (C1, Some(2), Some(2), false),
        "c2" => (C2, Some(2), Some(3), false),
        _ => return Err(WitnessError::UnknownName(name.to_string())),
    };
    let matrix = TropicalMatrix::parse(text).expect("catalog matrices are well formed");
    Ok(WitnessRecord {
        matrix,
        claimed_trop_rank: trop,
        claimed_sym_trop_rank: sym,
        claimed_kapranov_gap: gap,
        provenance: vec![Step::Catalog(name.to_string())],
    })
}

/// `[[A, a_n], [a_n^T, a_nn]]`: repeat the last row and column.
pub fn duplicate_matrix<T: Scalar>(a: &TropicalMatrix<T>) -> Result<TropicalMatrix<T>, WitnessError> {
    if !a.is_symmetric() {
        return Err(WitnessError::SymmetryRequired);
    }
    let n = a.n_rows();
    TropicalMatrix::from_fn(n + 1, n + 1, |i, j| a.get(i.min(n - 1), j.min(n - 1)).clone()).map_err(Into::into)
}

/// Border with `p` along the new row and column and `m` in the new corner.
pub fn border_matrix<T: Scalar>(a: &TropicalMatrix<T>, p: &T, m: &T) -> Result<TropicalMatrix<T>, WitnessError> {
    if !a.is_symmetric() {
        return Err(WitnessError::SymmetryRequired);
    }
    if !(m < a.min_entry() && p > a.max_entry()) {
        return Err(WitnessError::BadBounds {
            p: p.to_string(),
            m: m.to_string(),
            min: a.min_entry().to_string(),
            max: a.max_entry().to_string(),
        });
    }
    let n = a.n_rows();
    TropicalMatrix::from_fn(n + 1, n + 1, |i, j| match (i == n, j == n) {
        (true, true) => m.clone(),
        (false, false) => a.get(i, j).clone(),
        _ => p.clone(),
    })
    .map_err(Into::into)
}

pub fn duplicate_extend(w: &WitnessRecord) -> Result<WitnessRecord, WitnessError> {
    let mut provenance = w.provenance.clone();
    provenance.push(Step::Duplicate);
    Ok(WitnessRecord {
        matrix: duplicate_matrix(&w.matrix)?,
        claimed_trop_rank: None,
        claimed_sym_trop_rank: w.claimed_sym_trop_rank,
        claimed_kapranov_gap: w.claimed_kapranov_gap,
        provenance,
    })
}

/// Border extension; `None` bounds default to `max + 1` and `min - 1`.
pub fn border_extend(w: &WitnessRecord, p: Option<Rational>, m: Option<Rational>) -> Result<WitnessRecord, WitnessError> {
    let one = Rational::from_integer(1);
    let p = p.unwrap_or_else(|| *w.matrix.max_entry() + one);
    let m = m.unwrap_or_else(|| *w.matrix.min_entry() - one);
    let matrix = border_matrix(&w.matrix, &p, &m)?;
    let mut provenance = w.provenance.clone();
    provenance.push(Step::Border { p, m });
    Ok(WitnessRecord {
        matrix,
        claimed_trop_rank: None,
        claimed_sym_trop_rank: w.claimed_sym_trop_rank.map(|r| r + 1),
        claimed_kapranov_gap: w.claimed_kapranov_gap,
        provenance,
    })
}

/// Whether `(r, n)` lies in the region where the symmetric `r x r` minors of
/// an `n x n` matrix are known not to form a tropical basis.
pub fn in_non_basis_region(r: usize, n: usize) -> bool {
    (4 < r && r < n) || (r == 4 && n > 12)
}

/// An `n x n` witness of symmetric tropical rank `r - 1` with a Kapranov gap.
///
/// Starts from `fano13` for `r = 4` and from `shitov6_symmetric` otherwise,
/// borders until the rank is right, then duplicates until the size is right.
pub fn witness(r: usize, n: usize) -> Result<WitnessRecord, WitnessError> {
    if !in_non_basis_region(r, n) {
        return Err(WitnessError::OutsideRegion { r, n });
    }
    let (mut w, base_r) = if r == 4 { (catalog("fano13")?, 4) } else { (catalog("shitov6_symmetric")?, 5) };
    for _ in base_r..r {
        w = border_extend(&w, None, None)?;
    }
    while w.matrix.n_rows() < n {
        w = duplicate_extend(&w)?;
    }
    debug_assert_eq!(w.matrix.n_rows(), n);
    Ok(w)
}

/// Result of re-deriving the claimed ranks of a record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub trop_rank: Option<usize>,
    pub sym_trop_rank: Option<usize>,
    /// Some claim disagreed with the recomputed value.
    pub mismatch: bool,
    /// Only a random sample of the top-level minors was checked.
    pub sampled: bool,
}

/// Recompute every claimed rank exactly.
pub fn verify(w: &WitnessRecord) -> Verification {
    let trop_rank = w.claimed_trop_rank.map(|_| tropical_rank(&w.matrix).rank);
    let sym_trop_rank = w
        .claimed_sym_trop_rank
        .map(|_| symmetric_tropical_rank(&w.matrix).expect("symmetric claims are on symmetric matrices").rank);
    let mismatch = trop_rank != w.claimed_trop_rank || sym_trop_rank != w.claimed_sym_trop_rank;
    Verification { trop_rank, sym_trop_rank, mismatch, sampled: false }
}

/// Cheaper check of the symmetric rank claim `k`: find a nonsingular `k x k`
/// submatrix exactly, then test `samples` random `(k+1) x (k+1)` submatrices.
pub fn verify_sampled(w: &WitnessRecord, samples: usize, seed: u64) -> Verification {
    let Some(k) = w.claimed_sym_trop_rank else {
        return verify(w);
    };
    let a = &w.matrix;
    let n = a.n_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = first_nonsingular(a, k, Mode::Symmetric).is_some();
    if k < n {
        for _ in 0..samples {
            let mut rows = sample(&mut rng, n, k + 1).into_vec();
            let mut cols = sample(&mut rng, n, k + 1).into_vec();
            rows.sort_unstable();
            cols.sort_unstable();
            if !is_sym_trop_singular(a, &rows, &cols).expect("valid index sets") {
                ok = false;
                break;
            }
        }
    }
    Verification {
        trop_rank: None,
        sym_trop_rank: if ok { Some(k) } else { None },
        mismatch: !ok,
        sampled: true,
    }
}

/// The row and column permutations relating `shitov6` to `shitov6_symmetric`.
pub fn shitov_symmetrizing_permutations() -> (Permutation, Permutation) {
    (
        Permutation::parse_cycles(6, "(16)(25)(34)").expect("valid cycles"),
        Permutation::parse_cycles(6, "(153)(264)").expect("valid cycles"),
    )
}
