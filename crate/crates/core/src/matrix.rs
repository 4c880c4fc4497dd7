//! Dense tropical matrices over an exact scalar type, with the symmetry
//! preserving operations: diagonal permutation and symmetric scaling.

use std::fmt;

use crate::error::{MatrixError, ParseError};
use crate::perm::Permutation;
use crate::scalar::Scalar;

/// A dense matrix of finite tropical values (min-plus convention).
///
/// The `symmetric` flag is either asserted (and checked) on construction or
/// auto-detected, and is kept consistent by every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
    symmetric: bool,
}

/// Per-index offsets `c`; scaling adds `c[i] + c[j]` to entry `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalingVector<T>(pub Vec<T>);

impl<T: Scalar> ScalingVector<T> {
    pub fn zeros(n: usize) -> Self {
        ScalingVector(vec![T::zero(); n])
    }

    pub fn negated(&self) -> Self {
        ScalingVector(self.0.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> TropicalMatrix<T> {
    /// Build from rows, auto-detecting symmetry.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(MatrixError::Ragged { row: i + 1, expected: n_cols, found: row.len() });
            }
            entries.extend(row);
        }
        let mut m = TropicalMatrix { rows: n_rows, cols: n_cols, entries, symmetric: false };
        m.symmetric = m.asymmetric_entry().is_none();
        Ok(m)
    }

    /// Build from rows and require symmetry.
    pub fn symmetric_from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let m = Self::from_rows(rows)?;
        if m.rows != m.cols {
            return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
        }
        if let Some((row, col)) = m.asymmetric_entry() {
            return Err(MatrixError::NotSymmetric { row: row + 1, col: col + 1 });
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self, MatrixError> {
        Self::from_rows((0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
    }

    fn asymmetric_entry(&self) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn require_symmetric(&self) -> Result<(), MatrixError> {
        if self.symmetric {
            Ok(())
        } else {
            Err(MatrixError::SymmetryRequired)
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.entries.iter()
    }

    pub fn min_entry(&self) -> &T {
        self.entries.iter().min().expect("nonempty")
    }

    pub fn max_entry(&self) -> &T {
        self.entries.iter().max().expect("nonempty")
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).expect("nonempty");
        t.symmetric = self.symmetric;
        t
    }

    /// Submatrix on the given (0-based) row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self, MatrixError> {
        for &i in rows {
            if i >= self.rows {
                return Err(MatrixError::IndexOutOfRange { index: i, dim: self.rows });
            }
        }
        for &j in cols {
            if j >= self.cols {
                return Err(MatrixError::IndexOutOfRange { index: j, dim: self.cols });
            }
        }
        Self::from_fn(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b]).clone())
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<Self, MatrixError> {
        self.submatrix(idx, idx)
    }

    /// `result[i][j] = A[sigma(i)][sigma(j)]`.
    pub fn diagonal_permute(&self, sigma: &Permutation) -> Result<Self, MatrixError> {
        self.require_symmetric()?;
        if sigma.len() != self.rows {
            return Err(MatrixError::DimensionMismatch { expected: self.rows, found: sigma.len() });
        }
        let idx: Vec<usize> = (0..self.rows).map(|i| sigma.apply(i)).collect();
        self.principal_submatrix(&idx)
    }

    /// `result[i] = A[sigma(i)]` (rows only); symmetry is re-detected.
    pub fn permute_rows(&self, sigma: &Permutation) -> Result<Self, MatrixError> {
        if sigma.len() != self.rows {
            return Err(MatrixError::DimensionMismatch { expected: self.rows, found: sigma.len() });
        }
        let idx: Vec<usize> = (0..self.rows).map(|i| sigma.apply(i)).collect();
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&idx, &all)
    }

    /// `result[i][j] = A[i][sigma(j)]`; symmetry is re-detected.
    pub fn permute_cols(&self, sigma: &Permutation) -> Result<Self, MatrixError> {
        if sigma.len() != self.cols {
            return Err(MatrixError::DimensionMismatch { expected: self.cols, found: sigma.len() });
        }
        let idx: Vec<usize> = (0..self.cols).map(|j| sigma.apply(j)).collect();
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, &idx)
    }

    /// Tropically multiply row `i` and column `i` by `c[i]`.
    pub fn symmetric_scale(&self, c: &ScalingVector<T>) -> Result<Self, MatrixError> {
        self.require_symmetric()?;
        if c.0.len() != self.rows {
            return Err(MatrixError::DimensionMismatch { expected: self.rows, found: c.0.len() });
        }
        let c = &c.0;
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + c[i].clone() + c[j].clone())
    }

    /// Every entry nonnegative and every row attains 0.
    pub fn is_normalized(&self) -> bool {
        (0..self.rows).all(|i| {
            let row = self.row(i);
            row.iter().all(|x| !x.is_negative()) && row.iter().any(|x| x.is_zero())
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Find a symmetric scaling making the matrix nonnegative with a zero
    /// minimum in every row and column.
    ///
    /// The feasible set `{c : A[i][j] + c[i] + c[j] >= 0}` is bounded below
    /// through the diagonal constraints, so a coordinatewise-minimal point
    /// exists and is exactly a normalizing scaling. Starting from a feasible
    /// point, each sweep lowers `c[i]` to the least value keeping row `i`
    /// nonnegative; the iterates decrease monotonically. A sweep that changes
    /// nothing is a fixed point. Gives up after `100 * n` sweeps.
    pub fn normalize(&self) -> Result<(Self, ScalingVector<T>), MatrixError> {
        self.require_symmetric()?;
        let n = self.rows;
        // feasible start: c_i = max(0, max_j -A[i][j])
        let mut c: Vec<T> = (0..n)
            .map(|i| {
                let worst = self.row(i).iter().min().expect("nonempty").clone();
                if worst.is_negative() {
                    -worst
                } else {
                    T::zero()
                }
            })
            .collect();
        let budget = 100 * n;
        for _ in 0..budget {
            let mut changed = false;
            for i in 0..n {
                let diag = -self.get(i, i).clone();
                let mut best = diag.checked_half().ok_or(MatrixError::Inexact)?;
                for j in (0..n).filter(|&j| j != i) {
                    let need = -self.get(i, j).clone() - c[j].clone();
                    if need > best {
                        best = need;
                    }
                }
                if best != c[i] {
                    debug_assert!(best < c[i]);
                    c[i] = best;
                    changed = true;
                }
            }
            if !changed {
                let scaling = ScalingVector(c);
                let scaled = self.symmetric_scale(&scaling)?;
                debug_assert!(scaled.is_normalized());
                return Ok((scaled, scaling));
            }
        }
        Err(MatrixError::NormalizationFailed { iterations: budget })
    }

    /// Convert every entry to another exact scalar type.
    pub fn convert<U: Scalar>(&self) -> Result<TropicalMatrix<U>, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.to_rational().and_then(|q| U::from_rational(&q)).ok_or(MatrixError::Inexact))
            .collect::<Result<Vec<U>, _>>()?;
        Ok(TropicalMatrix { rows: self.rows, cols: self.cols, entries, symmetric: self.symmetric })
    }

    /// Parse the text format: one row per line, whitespace separated exact
    /// rationals, `#` comments, optional leading `symmetric` header.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut rows = Vec::new();
        let mut assert_symmetric = false;
        let mut header_line = None;
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if trimmed.eq_ignore_ascii_case("symmetric") {
                if !rows.is_empty() || assert_symmetric {
                    return Err(ParseError::Structure {
                        line: lineno + 1,
                        message: "`symmetric` header must precede the first row".into(),
                    });
                }
                assert_symmetric = true;
                header_line = Some(lineno + 1);
                continue;
            }
            let mut row = Vec::new();
            let mut search_from = 0;
            for token in trimmed.split_whitespace() {
                let offset = line[search_from..].find(token).map_or(0, |p| p + search_from);
                search_from = offset + token.len();
                let value = T::parse_exact(token).ok_or_else(|| ParseError::BadEntry {
                    line: lineno + 1,
                    column: offset + 1,
                    token: token.to_string(),
                })?;
                row.push(value);
            }
            if let Some(first) = rows.first().map(Vec::len) {
                if first != row.len() {
                    return Err(ParseError::Structure {
                        line: lineno + 1,
                        message: format!("row has {} entries, expected {first}", row.len()),
                    });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(ParseError::Structure { line: header_line.unwrap_or(1), message: "no matrix rows".into() });
        }
        if assert_symmetric {
            Ok(Self::symmetric_from_rows(rows)?)
        } else {
            Ok(Self::from_rows(rows)?)
        }
    }

    /// Render in the text format; round-trips through [`TropicalMatrix::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.symmetric {
            out.push_str("symmetric\n");
        }
        out.push_str(&self.to_string());
        out
    }
}

impl<T: Scalar> fmt::Display for TropicalMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|j| format!("{:>width$}", cells[i * self.cols + j])).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_rational::Ratio;
    use num_traits::Zero;

    type M = TropicalMatrix<Rational>;

    fn m(rows: &[&[i64]]) -> M {
        M::from_i64_rows(rows).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn symmetry_detection() {
        assert!(m(&[&[1, 0], &[0, 1]]).is_symmetric());
        assert!(!m(&[&[1, 2], &[0, 1]]).is_symmetric());
        assert!(!m(&[&[1, 2, 3]]).is_symmetric());
        assert_eq!(
            M::symmetric_from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(1, 1)]]),
            Err(MatrixError::NotSymmetric { row: 1, col: 2 })
        );
    }

    #[test]
    fn identity_permutation_and_zero_scaling_are_identities() {
        let c2 = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(c2.diagonal_permute(&Permutation::identity(3)).unwrap(), c2);
        assert_eq!(c2.symmetric_scale(&ScalingVector::zeros(3)).unwrap(), c2);
        assert!(matches!(
            c2.diagonal_permute(&Permutation::identity(2)),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            c2.symmetric_scale(&ScalingVector::zeros(4)),
            Err(MatrixError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scaling_one_by_one() {
        let a = m(&[&[1]]);
        let scaled = a.symmetric_scale(&ScalingVector(vec![q(-1, 2)])).unwrap();
        assert_eq!(scaled, m(&[&[0]]));
    }

    #[test]
    fn normalize_examples() {
        let (b, c) = m(&[&[2]]).normalize().unwrap();
        assert_eq!(b, m(&[&[0]]));
        assert_eq!(c, ScalingVector(vec![q(-1, 1)]));

        let already = m(&[&[0, 1], &[1, 0]]);
        let (b, c) = already.normalize().unwrap();
        assert_eq!(b, already);
        assert!(c.0.iter().all(Zero::is_zero));

        let (b, c) = m(&[&[4, 1], &[1, 0]]).normalize().unwrap();
        assert!(b.is_normalized());
        assert_eq!(m(&[&[4, 1], &[1, 0]]).symmetric_scale(&c).unwrap(), b);
    }

    #[test]
    fn normalize_handles_negative_entries() {
        let a = m(&[&[-3, 5, -1], &[5, 2, 0], &[-1, 0, -4]]);
        let (b, c) = a.normalize().unwrap();
        assert!(b.is_normalized());
        assert_eq!(b.symmetric_scale(&c.negated()).unwrap(), a);
    }

    #[test]
    fn integer_normalization_may_be_inexact() {
        let a = TropicalMatrix::<i64>::from_i64_rows(&[&[1]]).unwrap();
        assert_eq!(a.normalize(), Err(MatrixError::Inexact));
    }

    #[test]
    fn row_permutation_of_fano_is_symmetric() {
        let fano = m(&[
            &[1, 1, 0, 1, 0, 0, 0],
            &[0, 1, 1, 0, 1, 0, 0],
            &[0, 0, 1, 1, 0, 1, 0],
            &[0, 0, 0, 1, 1, 0, 1],
            &[1, 0, 0, 0, 1, 1, 0],
            &[0, 1, 0, 0, 0, 1, 1],
            &[1, 0, 1, 0, 0, 0, 1],
        ]);
        assert!(!fano.is_symmetric());
        let sigma = Permutation::parse_cycles(7, "(27)(36)(45)").unwrap();
        let sym = fano.permute_rows(&sigma).unwrap();
        assert!(sym.is_symmetric());
        assert_eq!(sym.row(1), m(&[&[1, 0, 1, 0, 0, 0, 1]]).row(0));
    }

    #[test]
    fn parse_reports_offending_position() {
        let err = M::parse("1 2\n3 x7\n").unwrap_err();
        assert_eq!(err, ParseError::BadEntry { line: 2, column: 3, token: "x7".into() });
        let err = M::parse("# c\n1 inf\n").unwrap_err();
        assert!(matches!(err, ParseError::BadEntry { line: 2, column: 3, .. }));
        assert!(matches!(M::parse("1 2\n3\n"), Err(ParseError::Structure { line: 2, .. })));
        assert!(matches!(M::parse("symmetric\n1 2\n3 4\n"), Err(ParseError::Matrix(MatrixError::NotSymmetric { .. }))));
    }

    #[test]
    fn parse_and_render_round_trip() {
        let text = "# conic\nsymmetric\n1 -1/2 4.25\n-1/2 0 0\n4.25 0 3\n";
        let a = M::parse(text).unwrap();
        assert!(a.is_symmetric());
        assert_eq!(*a.get(0, 2), q(17, 4));
        assert_eq!(M::parse(&a.to_text()).unwrap(), a);
    }
}
