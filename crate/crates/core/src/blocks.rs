//! Canonical block form of a normalized symmetric matrix of symmetric
//! tropical rank two.
//!
//! After a diagonal permutation such a matrix reads
//!
//! ```text
//! [ 0  0   0   0   0 ]
//! [ 0  B1  0   0   0 ]
//! [ 0  0   B2  0   0 ]
//! [ 0  0   0   0   C ]
//! [ 0  0   0   C^T 0 ]
//! ```
//!
//! with `B1`, `B2` positive, `C` nonnegative without zero columns, and any of
//! the blocks possibly empty.

use std::ops::Range;

use rand::Rng;

use crate::error::BlocksError;
use crate::matrix::{ScalingVector, TropicalMatrix};
use crate::perm::Permutation;
use crate::rank::symmetric_tropical_rank;
use crate::scalar::Scalar;

/// `{i : A[i][j] != 0}`.
pub fn cosupport<T: Scalar>(a: &TropicalMatrix<T>, j: usize) -> Vec<usize> {
    (0..a.n_rows()).filter(|&i| !a.get(i, j).is_zero()).collect()
}

/// Positions of each block in the permuted matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub zero: Range<usize>,
    pub b1: Range<usize>,
    pub b2: Range<usize>,
    pub k: Range<usize>,
    pub l: Range<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition<T> {
    /// `permuted[i][j] = input[sigma(i)][sigma(j)]`.
    pub sigma: Permutation,
    pub permuted: TropicalMatrix<T>,
    pub layout: Layout,
}

impl<T: Scalar> BlockDecomposition<T> {
    pub fn zero_rows(&self) -> usize {
        self.layout.zero.len()
    }

    fn block(&self, rows: &Range<usize>, cols: &Range<usize>) -> Option<TropicalMatrix<T>> {
        if rows.is_empty() || cols.is_empty() {
            return None;
        }
        let r: Vec<usize> = rows.clone().collect();
        let c: Vec<usize> = cols.clone().collect();
        Some(self.permuted.submatrix(&r, &c).expect("layout ranges are in bounds"))
    }

    pub fn b1(&self) -> Option<TropicalMatrix<T>> {
        self.block(&self.layout.b1, &self.layout.b1)
    }

    pub fn b2(&self) -> Option<TropicalMatrix<T>> {
        self.block(&self.layout.b2, &self.layout.b2)
    }

    /// The `K x L` block `C`.
    pub fn c(&self) -> Option<TropicalMatrix<T>> {
        self.block(&self.layout.k, &self.layout.l)
    }

    /// Original indices of each block, in layout order.
    pub fn indices(&self, range: &Range<usize>) -> Vec<usize> {
        range.clone().map(|i| self.sigma.apply(i)).collect()
    }

    /// Rebuild the input from the block pattern alone.
    pub fn reassemble(&self) -> TropicalMatrix<T> {
        let n = self.permuted.n_rows();
        let lay = &self.layout;
        let inside = |r: &Range<usize>, i: usize, j: usize| r.contains(&i) && r.contains(&j);
        let pattern = TropicalMatrix::from_fn(n, n, |i, j| {
            let in_c = (lay.k.contains(&i) && lay.l.contains(&j)) || (lay.l.contains(&i) && lay.k.contains(&j));
            if inside(&lay.b1, i, j) || inside(&lay.b2, i, j) || in_c {
                self.permuted.get(i, j).clone()
            } else {
                T::zero()
            }
        })
        .expect("nonempty");
        pattern.diagonal_permute(&self.sigma.inverse()).expect("pattern is symmetric")
    }
}

fn violation(reason: &str, rows: &[usize], cols: &[usize]) -> BlocksError {
    BlocksError::StructureViolation {
        reason: reason.to_string(),
        rows: rows.iter().map(|i| i + 1).collect(),
        cols: cols.iter().map(|i| i + 1).collect(),
    }
}

/// Decompose a normalized symmetric matrix; with `check_rank` the symmetric
/// tropical rank is computed first and must be 2.
pub fn block_decompose<T: Scalar>(a: &TropicalMatrix<T>, check_rank: bool) -> Result<BlockDecomposition<T>, BlocksError> {
    if !a.is_symmetric() || !a.is_normalized() {
        return Err(BlocksError::NotNormalized);
    }
    if a.is_zero() {
        return Err(BlocksError::ZeroMatrix);
    }
    if check_rank {
        let r = symmetric_tropical_rank(a).expect("symmetric").rank;
        if r != 2 {
            return Err(BlocksError::WrongRank(r));
        }
    }
    let n = a.n_rows();
    // The bordered matrix adds a zero row/column at index 0; index i of `a`
    // is index i + 1 there.
    let supp: Vec<Vec<usize>> = (0..n).map(|j| cosupport(a, j)).collect();
    for p in 0..n {
        for q in 0..n {
            let shared = supp[p].iter().find(|i| supp[q].contains(i));
            let extra = supp[q].iter().find(|i| !supp[p].contains(i));
            if let (Some(&r1), Some(&r2)) = (shared, extra) {
                let r3 = (0..n).find(|i| !supp[q].contains(i)).expect("normalized columns contain a zero");
                return Err(violation(
                    "two columns have overlapping but unequal cosupports",
                    &[r1 + 1, r2 + 1, r3 + 1],
                    &[0, p + 1, q + 1],
                ));
            }
        }
    }

    let zero: Vec<usize> = (0..n).filter(|&i| supp[i].is_empty()).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in (0..n).filter(|&i| a.get(i, i).is_positive()) {
        if !groups.iter().any(|g| g.contains(&i)) {
            groups.push(supp[i].clone());
        }
    }
    if groups.len() > 2 {
        let reps = [groups[0][0], groups[1][0], groups[2][0]];
        let bordered: Vec<usize> = reps.iter().map(|i| i + 1).collect();
        return Err(violation("three positive diagonal blocks", &bordered, &bordered));
    }
    for g in &groups {
        if let Some(&i) = g.iter().find(|&&i| !a.get(i, i).is_positive()) {
            return Err(violation("positive block has a zero diagonal entry", &[i + 1], &[i + 1]));
        }
    }
    let b1 = groups.first().cloned().unwrap_or_default();
    let b2 = groups.get(1).cloned().unwrap_or_default();

    let rest: Vec<usize> = (0..n).filter(|i| !zero.contains(i) && !b1.contains(i) && !b2.contains(i)).collect();
    let mut k: Vec<usize> = Vec::new();
    for &i in &rest {
        if k.iter().all(|&j| a.get(i, j).is_zero()) {
            k.push(i);
        }
    }
    let l: Vec<usize> = rest.iter().copied().filter(|i| !k.contains(i)).collect();
    for &i in &l {
        for &j in &l {
            if !a.get(i, j).is_zero() {
                return Err(violation("residual block is not bipartite", &[i + 1, j + 1], &[i + 1, j + 1]));
            }
        }
    }
    for &j in &l {
        if k.iter().all(|&i| a.get(i, j).is_zero()) {
            return Err(violation("C has a zero column", &[], &[j + 1]));
        }
    }

    let order: Vec<usize> = [&zero, &b1, &b2, &k, &l].into_iter().flatten().copied().collect();
    let sigma = Permutation::from_images(order).expect("blocks partition the indices");
    let permuted = a.diagonal_permute(&sigma).expect("symmetric");
    let mut at = 0;
    let mut next = |len: usize| {
        let r = at..at + len;
        at += len;
        r
    };
    let layout = Layout { zero: next(zero.len()), b1: next(b1.len()), b2: next(b2.len()), k: next(k.len()), l: next(l.len()) };
    let dec = BlockDecomposition { sigma, permuted, layout };
    if dec.reassemble() != *a {
        return Err(violation("entries outside the block pattern", &[], &[]));
    }
    Ok(dec)
}

/// Sizes of the blocks of a generated matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSizes {
    pub zero: usize,
    pub b1: usize,
    pub b2: usize,
    pub k: usize,
    pub l: usize,
}

/// A random symmetric matrix with the block pattern above, integer entries in
/// `0..=max_entry`, then a random diagonal permutation and symmetric scaling.
///
/// The result is not rank-filtered; callers check the rank they need.
/// Returns `None` when the sizes cannot give a normalized matrix.
pub fn random_block_matrix<T: Scalar, R: Rng>(rng: &mut R, sizes: BlockSizes, max_entry: i64) -> Option<TropicalMatrix<T>> {
    let BlockSizes { zero, b1, b2, k, l } = sizes;
    let n = zero + b1 + b2 + k + l;
    if n == 0 || (k == 0) != (l == 0) || n == b1 || n == b2 || max_entry < 1 {
        return None;
    }
    let mut m = vec![vec![0i64; n]; n];
    let mut fill_positive = |m: &mut Vec<Vec<i64>>, start: usize, len: usize| {
        for i in start..start + len {
            for j in i..start + len {
                let v = rng.gen_range(1..=max_entry);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
    };
    fill_positive(&mut m, zero, b1);
    fill_positive(&mut m, zero + b1, b2);
    let k0 = zero + b1 + b2;
    let l0 = k0 + k;
    for j in l0..l0 + l {
        let forced = rng.gen_range(k0..k0 + k);
        for i in k0..k0 + k {
            let v = if i == forced { rng.gen_range(1..=max_entry) } else { rng.gen_range(0..=max_entry) };
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    let base = TropicalMatrix::<T>::from_i64_rows(&m.iter().map(Vec::as_slice).collect::<Vec<_>>()).ok()?;
    if !base.is_normalized() {
        return None;
    }
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    let sigma = Permutation::from_images(images).expect("shuffle is a bijection");
    let scaling = ScalingVector((0..n).map(|_| T::from_i64(rng.gen_range(-3..=3))).collect());
    base.diagonal_permute(&sigma).ok()?.symmetric_scale(&scaling).ok()
}
