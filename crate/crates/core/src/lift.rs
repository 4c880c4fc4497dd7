//! Symmetric lifts of tropical matrices to truncated Puiseux series, and
//! their verification.
//!
//! Rank one lifts are monomial. Rank two lifts follow a recursion on the
//! block form of a normalized matrix:
//!
//! * no zero row: border with a zero row, lift, drop the border;
//! * several zero rows: drop one, lift, re-border with a generic combination
//!   of two columns;
//! * exactly one zero row `o`: either the `C`-pattern alone, lifted through a
//!   rank two lift of its upper-right corner, or two parts that only meet in
//!   `o`, lifted separately and joined through a singular central `3 x 3`.
//!
//! Constructions run in double-double precision. The finished lift is
//! dilated (`t` replaced by `lambda t`) so that its coefficients do not grow
//! along the exponents, rounded to `f64`, and checked by [`verify_lift`] as
//! given. Generic constants come from a seeded generator, so results are
//! reproducible.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::blocks::block_decompose;
use crate::error::LiftError;
use crate::matrix::{ScalingVector, TropicalMatrix};
use crate::rank::{is_rank_one, symmetric_tropical_rank};
use crate::scalar::{Rational, Scalar};
use twofloat::TwoFloat;

use crate::series::{quadratic_roots, Coeff, PuiseuxSeries, SeriesMatrix};

/// Relative size below which every coefficient of a vanishing minor must lie.
pub const MINOR_TOLERANCE: f64 = 1e-6;
/// Relative size some coefficient of a nonsingular minor must exceed.
pub const NONSINGULAR_TOLERANCE: f64 = 1e-3;
/// Seeds tried before a lift is reported as failed.
pub const SEED_ATTEMPTS: usize = 8;
const MAX_DEPTH: usize = 64;

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// A nonvanishing minor found during verification.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Leading coefficient relative to the minor's scale, see [`crate::series::MinorReport`].
    pub relative_magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftChecks {
    pub degree_match: bool,
    /// `None` when the tropical matrix is not symmetric.
    pub symmetric: Option<bool>,
    /// Largest coefficient over all `(r+1) x (r+1)` minors, each measured
    /// against the sum of the products of its entries' leading magnitudes.
    pub max_minor_residual: f64,
    pub witness_minor: Option<MinorWitness>,
}

impl LiftChecks {
    pub fn passed(&self) -> bool {
        self.degree_match
            && self.symmetric != Some(false)
            && self.max_minor_residual < MINOR_TOLERANCE
            && self.witness_minor.is_some()
    }
}

/// A lift together with the outcome of its verification.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftCertificate {
    pub matrix: SeriesMatrix,
    pub target_rank: usize,
    pub checks: LiftChecks,
    /// Seed that produced the lift, if one was needed.
    pub seed: Option<u64>,
    /// Number of seeds tried.
    pub attempts: usize,
}

impl LiftCertificate {
    pub fn is_valid(&self) -> bool {
        self.checks.passed()
    }
}

/// Column `column` equals `lambda * basis0 + mu * basis1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftCombination<F = f64> {
    pub column: usize,
    pub lambda: PuiseuxSeries<F>,
    pub mu: PuiseuxSeries<F>,
}

impl<F: Coeff> LiftCombination<F> {
    /// `deg(lambda) >= deg(mu) = 0`, a zero `lambda` counting as infinite degree.
    pub fn degrees_ok(&self) -> bool {
        self.mu.degree() == Some(q(0)) && self.lambda.degree().is_none_or(|d| d >= q(0))
    }
}

/// A rank two lift of an upper-right corner `[[0, C], [0, 0]]`, with every
/// column written in terms of the first two.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardLift {
    pub certificate: LiftCertificate,
    pub combinations: Vec<LiftCombination>,
}

/// Default truncation order for a lift of rank `r`: `min(A) + 2 (r + 1) (1 + spread)`.
pub fn default_trunc<T: Scalar>(a: &TropicalMatrix<T>, r: usize) -> Option<Rational> {
    let lo = a.min_entry().to_rational()?;
    let hi = a.max_entry().to_rational()?;
    Some(lo + q(2 * (r as i64 + 1)) * (q(1) + hi - lo))
}

/// Check that `l` is a rank `r` lift of `a`: exact degrees, exact symmetry
/// (when `a` is symmetric), vanishing `(r+1)`-minors and a nonvanishing
/// `r`-minor.
pub fn verify_lift<T: Scalar>(a: &TropicalMatrix<T>, l: &SeriesMatrix, r: usize) -> LiftChecks {
    verify_lift_with(a, l, r, a.is_symmetric())
}

fn verify_lift_with<T: Scalar>(a: &TropicalMatrix<T>, l: &SeriesMatrix, r: usize, check_symmetry: bool) -> LiftChecks {
    let symmetric = check_symmetry.then(|| l.is_symmetric());
    let l = &l.map(PuiseuxSeries::detached);
    if a.n_rows() != l.n_rows() || a.n_cols() != l.n_cols() || r == 0 {
        return LiftChecks { degree_match: false, symmetric, max_minor_residual: f64::INFINITY, witness_minor: None };
    }
    let degree_match = a.convert::<Rational>().ok().zip(l.degrees()).is_some_and(|(x, y)| x.to_rows() == y.to_rows());
    let (m, n) = (l.n_rows(), l.n_cols());
    let max_minor_residual = if r < m.min(n) {
        let row_sets: Vec<Vec<usize>> = (0..m).combinations(r + 1).collect();
        row_sets
            .par_iter()
            .map(|rows| {
                (0..n)
                    .combinations(r + 1)
                    .map(|cols| l.minor_report(rows, &cols).max_relative())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    } else {
        0.0
    };
    let witness_minor = if r <= m.min(n) {
        (0..m).combinations(r).find_map(|rows| {
            (0..n).combinations(r).find_map(|cols| {
                let lead = l.minor_report(&rows, &cols).leading_relative()?;
                (lead > NONSINGULAR_TOLERANCE).then(|| MinorWitness { rows: rows.clone(), cols, relative_magnitude: lead })
            })
        })
    } else {
        None
    };
    LiftChecks { degree_match, symmetric, max_minor_residual, witness_minor }
}

/// The monomial lift `t^A[i][j]` of a symmetric matrix of tropical rank one.
pub fn rank1_lift<T: Scalar>(a: &TropicalMatrix<T>) -> Result<LiftCertificate, LiftError> {
    if !a.is_symmetric() {
        return Err(LiftError::Precondition("matrix is not symmetric".into()));
    }
    if !is_rank_one(a) {
        return Err(LiftError::Precondition("matrix does not have tropical rank one".into()));
    }
    let trunc = default_trunc(a, 1).ok_or(LiftError::Matrix(crate::error::MatrixError::Inexact))?;
    let matrix = SeriesMatrix::monomial_lift(a, trunc).ok_or(LiftError::Matrix(crate::error::MatrixError::Inexact))?;
    let checks = verify_lift(a, &matrix, 1);
    Ok(LiftCertificate { matrix, target_rank: 1, checks, seed: None, attempts: 1 })
}

/// Options for [`rank2_symmetric_lift`].
#[derive(Clone, Debug)]
pub struct LiftOptions {
    pub seed: u64,
    /// Truncation order of the returned lift; defaults to [`default_trunc`].
    pub trunc: Option<Rational>,
    pub attempts: usize,
    /// Recompute the symmetric tropical rank and require it to be 2.
    pub check_rank: bool,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { seed: 0, trunc: None, attempts: SEED_ATTEMPTS, check_rank: true }
    }
}

/// A symmetric rank two lift of a symmetric matrix of symmetric tropical rank two.
///
/// Each seed is tried with a growing internal truncation until the unscaled
/// lift is known up to the target order; the first seed whose lift verifies
/// wins.
pub fn rank2_symmetric_lift<T: Scalar>(a: &TropicalMatrix<T>, opts: &LiftOptions) -> Result<LiftCertificate, LiftError> {
    if !a.is_symmetric() {
        return Err(LiftError::Precondition("matrix is not symmetric".into()));
    }
    if opts.check_rank {
        let r = symmetric_tropical_rank(a).expect("symmetric").rank;
        if r != 2 {
            return Err(LiftError::Precondition(format!("symmetric tropical rank is {r}, not 2")));
        }
    }
    let a: TropicalMatrix<Rational> = a.convert()?;
    let (b, c) = a.normalize()?;
    let target = match opts.trunc {
        Some(t) => t,
        None => default_trunc(&a, 2).expect("rational entries"),
    };
    if target <= *a.max_entry() {
        return Err(LiftError::Precondition(format!("truncation {target} does not exceed the largest entry")));
    }
    let c_max = c.0.iter().max().copied().unwrap_or_else(|| q(0));
    let spread_b = *b.max_entry() - *b.min_entry();
    let mut last_error = None;
    for attempt in 0..opts.attempts.max(1) {
        let seed = opts.seed.wrapping_add(attempt as u64);
        let mut margin = q(2) * (q(1) + spread_b);
        for _ in 0..3 {
            let internal = (target + q(2) * c_max + margin).max(*b.max_entry() + q(1));
            let mut builder = Builder { rng: ChaCha8Rng::seed_from_u64(seed), trunc: internal, depth: 0 };
            let lb = match builder.lift(&b) {
                Ok(lb) => lb,
                Err(e) => {
                    last_error = Some(e);
                    break;
                }
            };
            let la = unscale(&lb, &c);
            if la.trunc() < target {
                margin *= q(2);
                continue;
            }
            let la = la.with_trunc(target);
            let rho = la.growth_rate();
            let la = if rho > 1.0 { la.map(|s| s.dilate(rho.recip())) } else { la };
            let matrix = la.to_f64();
            let checks = verify_lift(&a, &matrix, 2);
            if checks.passed() {
                return Ok(LiftCertificate { matrix, target_rank: 2, checks, seed: Some(seed), attempts: attempt + 1 });
            }
            last_error = Some(LiftError::LiftFailed(format!("verification failed for seed {seed}: {checks:?}")));
            break;
        }
        if last_error.is_none() {
            last_error = Some(LiftError::LiftFailed("precision budget exhausted".into()));
        }
    }
    Err(last_error.unwrap_or_else(|| LiftError::LiftFailed("no attempts".into())))
}

/// Multiply entry `(i, j)` by `t^(-c_i - c_j)`.
fn unscale<F: Coeff>(l: &SeriesMatrix<F>, c: &ScalingVector<Rational>) -> SeriesMatrix<F> {
    SeriesMatrix::from_fn(l.n_rows(), l.n_cols(), |i, j| l.get(i, j).shift(-(c.0[i] + c.0[j])))
}

/// Rank two lift of `[[0, C], [0, 0]]` (rows `K + o`, columns `o + L`) with
/// columns written in terms of columns 0 and 1.
pub fn standard_rank2_lift(u: &TropicalMatrix<Rational>, seed: u64) -> Result<StandardLift, LiftError> {
    let (m, p) = (u.n_rows(), u.n_cols());
    if m < 2 || p < 2 {
        return Err(LiftError::Precondition("need at least one row of C and one column of C".into()));
    }
    let zero_border = (0..m).all(|i| u.get(i, 0).is_zero()) && (0..p).all(|j| u.get(m - 1, j).is_zero());
    let c_ok = (0..m - 1).all(|i| (1..p).all(|j| !u.get(i, j).is_negative()))
        && (1..p).all(|j| (0..m - 1).any(|i| u.get(i, j).is_positive()));
    if !zero_border || !c_ok {
        return Err(LiftError::Precondition("expected [[0, C], [0, 0]] with C nonnegative and no zero column".into()));
    }
    let trunc = default_trunc(u, 2).expect("rational") + q(1);
    let mut last = None;
    for attempt in 0..SEED_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (matrix, combinations) = corner_lift::<H>(u, &mut rng, trunc)?;
        let matrix = matrix.to_f64();
        let combinations: Vec<LiftCombination> = combinations
            .into_iter()
            .map(|c| LiftCombination { column: c.column, lambda: c.lambda.to_f64(), mu: c.mu.to_f64() })
            .collect();
        let checks = verify_lift_with(u, &matrix, 2, false);
        if checks.passed() && combinations.iter().all(LiftCombination::degrees_ok) {
            let certificate = LiftCertificate { matrix, target_rank: 2, checks, seed: Some(s), attempts: attempt + 1 };
            return Ok(StandardLift { certificate, combinations });
        }
        last = Some(checks);
    }
    Err(LiftError::LiftFailed(format!("standard lift did not verify: {last:?}")))
}

/// Points of the series field whose pairwise valuations of differences
/// realize `c[i][j] = v(z_i - w_j)`, built by splitting clusters at each
/// depth with distinct generic coefficients.
fn realize_points<H: Coeff>(
    c: &TropicalMatrix<Rational>,
    rng: &mut ChaCha8Rng,
    trunc: Rational,
) -> Result<(Vec<PuiseuxSeries<H>>, Vec<PuiseuxSeries<H>>), LiftError> {
    let (k, l) = (c.n_rows(), c.n_cols());
    let mut rows = vec![PuiseuxSeries::<H>::zero(trunc); k];
    let mut cols = vec![PuiseuxSeries::<H>::zero(trunc); l];
    let mut stack: Vec<(Vec<usize>, Vec<usize>, Rational, PuiseuxSeries<H>)> =
        vec![((0..k).collect(), (0..l).collect(), q(0), PuiseuxSeries::<H>::zero(trunc))];
    while let Some((rs, cs, depth, base)) = stack.pop() {
        // connected components of the graph with edges c[i][j] > depth
        let mut comp_of_row: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comp_of_col: BTreeMap<usize, usize> = BTreeMap::new();
        let mut parent: Vec<usize> = (0..rs.len() + cs.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (a, &i) in rs.iter().enumerate() {
            for (b, &j) in cs.iter().enumerate() {
                if *c.get(i, j) > depth {
                    let (x, y) = (find(&mut parent, a), find(&mut parent, rs.len() + b));
                    parent[x] = y;
                }
            }
        }
        for (a, &i) in rs.iter().enumerate() {
            comp_of_row.insert(i, find(&mut parent, a));
        }
        for (b, &j) in cs.iter().enumerate() {
            comp_of_col.insert(j, find(&mut parent, rs.len() + b));
        }
        let roots: Vec<usize> = comp_of_row.values().chain(comp_of_col.values()).copied().unique().collect();
        for root in roots {
            let r2: Vec<usize> = rs.iter().copied().filter(|i| comp_of_row[i] == root).collect();
            let c2: Vec<usize> = cs.iter().copied().filter(|j| comp_of_col[j] == root).collect();
            let g = PuiseuxSeries::<H>::generic_constant(rng, trunc).shift(depth);
            let next = &base + &g.truncate(trunc);
            if r2.is_empty() || c2.is_empty() {
                for &i in &r2 {
                    rows[i] = next.clone();
                }
                for &j in &c2 {
                    cols[j] = next.clone();
                }
                continue;
            }
            let pairs = r2.iter().cartesian_product(&c2);
            let inner = pairs.clone().map(|(&i, &j)| *c.get(i, j)).min().expect("nonempty");
            if inner <= depth {
                return Err(LiftError::LiftFailed("C block is not realizable on a tropical line".into()));
            }
            stack.push((r2, c2, inner, next));
        }
    }
    Ok((rows, cols))
}

/// `U[i][0] = a_i`, `U[i][j] = a_i c_j (z_i - w_j)`, with the last row `o`
/// placed at a generic point.
fn corner_lift<H: Coeff>(
    u: &TropicalMatrix<Rational>,
    rng: &mut ChaCha8Rng,
    trunc: Rational,
) -> Result<(SeriesMatrix<H>, Vec<LiftCombination<H>>), LiftError> {
    let (m, p) = (u.n_rows(), u.n_cols());
    let c_rows: Vec<usize> = (0..m - 1).collect();
    let c_cols: Vec<usize> = (1..p).collect();
    let c = u.submatrix(&c_rows, &c_cols)?;
    let (mut z, w) = realize_points(&c, rng, trunc)?;
    z.push(PuiseuxSeries::<H>::generic_constant(rng, trunc));
    let a: Vec<PuiseuxSeries<H>> = (0..m).map(|_| PuiseuxSeries::<H>::generic_constant(rng, trunc)).collect();
    let cc: Vec<PuiseuxSeries<H>> = (0..p - 1).map(|_| PuiseuxSeries::<H>::generic_constant(rng, trunc)).collect();
    let matrix = SeriesMatrix::<H>::from_fn(m, p, |i, j| {
        if j == 0 {
            a[i].clone()
        } else {
            &(&a[i] * &cc[j - 1]) * &(&z[i] - &w[j - 1])
        }
    });
    let inv_c1 = cc[0].invert()?;
    let combinations = (1..p)
        .map(|j| LiftCombination {
            column: j,
            lambda: &cc[j - 1] * &(&w[0] - &w[j - 1]),
            mu: &cc[j - 1] * &inv_c1,
        })
        .collect();
    Ok((matrix, combinations))
}

/// 3 x 3 determinant with entry `at` replaced by the unknown `x`, split as
/// `cof * x + rest`; returns `x = -rest / cof`.
fn solve_singular<H: Coeff>(m: &SeriesMatrix<H>, rows: [usize; 3], cols: [usize; 3], at: (usize, usize)) -> Result<PuiseuxSeries<H>, LiftError> {
    let trunc = m.trunc();
    let mut rest = PuiseuxSeries::<H>::zero(trunc);
    let mut cof = PuiseuxSeries::<H>::zero(trunc);
    for p in (0..3).permutations(3) {
        let odd = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count() % 2 == 1;
        let mut prod = PuiseuxSeries::<H>::one(trunc);
        let mut uses_x = false;
        for r in 0..3 {
            if (r, p[r]) == at {
                uses_x = true;
            } else {
                prod = &prod * m.get(rows[r], cols[p[r]]);
            }
        }
        let prod = if odd { -prod } else { prod };
        if uses_x {
            cof = &cof + &prod;
        } else {
            rest = &rest + &prod;
        }
    }
    Ok(-rest.div(&cof)?)
}

/// Write column `j` of `m` as `lambda * col b0 + mu * col b1`, using the pair
/// of rows from `rows` whose 2 x 2 system is best conditioned.
fn express<H: Coeff>(m: &SeriesMatrix<H>, rows: &[usize], j: usize, b0: usize, b1: usize) -> Result<(PuiseuxSeries<H>, PuiseuxSeries<H>), LiftError> {
    let det = |r1: usize, r2: usize| &(m.get(r1, b0) * m.get(r2, b1)) - &(m.get(r1, b1) * m.get(r2, b0));
    let best = rows
        .iter()
        .tuple_combinations()
        .map(|(&r1, &r2)| (r1, r2, det(r1, r2)))
        .filter(|(_, _, d)| !d.is_zero())
        .min_by(|x, y| {
            let kx = (x.2.degree(), -x.2.leading_magnitude());
            let ky = (y.2.degree(), -y.2.leading_magnitude());
            kx.partial_cmp(&ky).expect("finite magnitudes")
        })
        .ok_or_else(|| LiftError::LiftFailed("basis columns are dependent".into()))?;
    let (r1, r2, d) = best;
    let inv = d.invert()?;
    let lambda = &(&(m.get(r1, j) * m.get(r2, b1)) - &(m.get(r1, b1) * m.get(r2, j))) * &inv;
    let mu = &(&(m.get(r1, b0) * m.get(r2, j)) - &(m.get(r1, j) * m.get(r2, b0))) * &inv;
    Ok((lambda, mu))
}

fn set_sym<H: Coeff>(m: &mut SeriesMatrix<H>, i: usize, j: usize, s: PuiseuxSeries<H>) {
    m.set(j, i, s.clone());
    m.set(i, j, s);
}

fn expect_degree<H: Coeff>(s: &PuiseuxSeries<H>, d: Rational, what: &str) -> Result<(), LiftError> {
    if s.degree() == Some(d) {
        Ok(())
    } else {
        Err(LiftError::LiftFailed(format!("{what} has degree {:?}, expected {d}", s.degree())))
    }
}

/// Coefficient type used while a lift is built.
type H = TwoFloat;

struct Builder {
    rng: ChaCha8Rng,
    trunc: Rational,
    depth: usize,
}

impl Builder {
    fn generic(&mut self) -> PuiseuxSeries<H> {
        PuiseuxSeries::<H>::generic_constant(&mut self.rng, self.trunc)
    }

    fn blank(&self, n: usize) -> SeriesMatrix<H> {
        SeriesMatrix::<H>::from_fn(n, n, |_, _| PuiseuxSeries::<H>::zero(self.trunc))
    }

    /// Lift of a normalized symmetric matrix of symmetric tropical rank at most two.
    fn lift(&mut self, p: &TropicalMatrix<Rational>) -> Result<SeriesMatrix<H>, LiftError> {
        if self.depth > MAX_DEPTH {
            return Err(LiftError::LiftFailed("recursion too deep".into()));
        }
        self.depth += 1;
        let out = self.lift_inner(p);
        self.depth -= 1;
        out
    }

    fn lift_inner(&mut self, p: &TropicalMatrix<Rational>) -> Result<SeriesMatrix<H>, LiftError> {
        let n = p.n_rows();
        if p.is_zero() {
            let a: Vec<PuiseuxSeries<H>> = (0..n).map(|_| self.generic()).collect();
            return Ok(SeriesMatrix::<H>::from_fn(n, n, |i, j| &a[i] * &a[j]));
        }
        if n <= 2 {
            let mut m = self.blank(n);
            for i in 0..n {
                for j in i..n {
                    let g = self.generic().shift(*p.get(i, j)).truncate(self.trunc);
                    set_sym(&mut m, i, j, g);
                }
            }
            return Ok(m);
        }
        let zero_rows: Vec<usize> = (0..n).filter(|&i| p.row(i).iter().all(Zero::is_zero)).collect();
        match zero_rows.len() {
            0 => self.lift_bordered(p),
            1 => self.lift_one_zero_row(p),
            _ => self.lift_strip_zero_row(p, zero_rows[0], zero_rows[1]),
        }
    }

    fn lift_bordered(&mut self, p: &TropicalMatrix<Rational>) -> Result<SeriesMatrix<H>, LiftError> {
        let n = p.n_rows();
        let bordered = TropicalMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i == 0 || j == 0 {
                q(0)
            } else {
                *p.get(i - 1, j - 1)
            }
        })?;
        let x = self.lift(&bordered)?;
        Ok(SeriesMatrix::<H>::from_fn(n, n, |i, j| x.get(i + 1, j + 1).clone()))
    }

    /// Remove zero row `r0`, lift the rest, and add back `v = lambda a_i + mu a_j`
    /// where `i` is the other zero column `r1`.
    fn lift_strip_zero_row(&mut self, p: &TropicalMatrix<Rational>, r0: usize, r1: usize) -> Result<SeriesMatrix<H>, LiftError> {
        let n = p.n_rows();
        let others: Vec<usize> = (0..n).filter(|&i| i != r0).collect();
        let x = self.lift(&p.principal_submatrix(&others)?)?;
        let i = others.iter().position(|&k| k == r1).expect("second zero row");
        let j = if i == 0 { 1 } else { 0 };
        let (lambda, mu) = (self.generic(), self.generic());
        let v: Vec<PuiseuxSeries<H>> = (0..n - 1).map(|k| &(&lambda * x.get(k, i)) + &(&mu * x.get(k, j))).collect();
        let cross = &(&lambda * &mu) * x.get(i, j);
        let corner = &(&(&(&lambda * &lambda) * x.get(i, i)) + &(&cross + &cross)) + &(&(&mu * &mu) * x.get(j, j));
        expect_degree(&corner, q(0), "bordered corner")?;
        for s in &v {
            expect_degree(s, q(0), "bordered column")?;
        }
        let mut m = self.blank(n);
        m.set(r0, r0, corner);
        for (a, &ia) in others.iter().enumerate() {
            set_sym(&mut m, r0, ia, v[a].clone());
            for (b, &ib) in others.iter().enumerate() {
                m.set(ia, ib, x.get(a, b).clone());
            }
        }
        Ok(m)
    }

    fn lift_one_zero_row(&mut self, p: &TropicalMatrix<Rational>) -> Result<SeriesMatrix<H>, LiftError> {
        let dec = block_decompose(p, false).map_err(|e| LiftError::LiftFailed(e.to_string()))?;
        let qm = &dec.permuted;
        let lay = &dec.layout;
        let b: Vec<usize> = lay.b1.clone().chain(lay.b2.clone()).collect();
        let cl: Vec<usize> = lay.k.clone().chain(lay.l.clone()).collect();
        let lifted = if !cl.is_empty() {
            if b.is_empty() {
                self.lift_c_pattern(qm, lay.k.clone().collect(), lay.l.clone().collect())?
            } else {
                self.join(qm, &b, &cl)?
            }
        } else if !lay.b1.is_empty() && !lay.b2.is_empty() {
            self.join(qm, &lay.b1.clone().collect::<Vec<_>>(), &lay.b2.clone().collect::<Vec<_>>())?
        } else {
            self.lift_single_block(qm)?
        };
        // undo the diagonal permutation: permuted[i][j] = p[sigma(i)][sigma(j)]
        let inv = dec.sigma.inverse();
        Ok(SeriesMatrix::<H>::from_fn(p.n_rows(), p.n_rows(), |i, j| lifted.get(inv.apply(i), inv.apply(j)).clone()))
    }

    /// `[0 + B]` with a single positive block: rescale so that the zero row
    /// becomes positive on the diagonal and the block drops to minimum zero.
    fn lift_single_block(&mut self, qm: &TropicalMatrix<Rational>) -> Result<SeriesMatrix<H>, LiftError> {
        let n = qm.n_rows();
        let s = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).map(|(i, j)| *qm.get(i, j)).min().expect("block") / q(2);
        let c = ScalingVector((0..n).map(|i| if i == 0 { s } else { -s }).collect());
        let scaled = qm.symmetric_scale(&c)?;
        let x = self.lift(&scaled)?;
        Ok(unscale(&x, &c))
    }

    /// Lift two parts `{o} + s1` and `{o} + s2` that only meet in `o = 0`
    /// and join them into one rank two matrix.
    fn join(&mut self, qm: &TropicalMatrix<Rational>, s1: &[usize], s2: &[usize]) -> Result<SeriesMatrix<H>, LiftError> {
        let n = qm.n_rows();
        let idx1: Vec<usize> = std::iter::once(0).chain(s1.iter().copied()).collect();
        let idx2: Vec<usize> = std::iter::once(0).chain(s2.iter().copied()).collect();
        let x1 = self.lift(&qm.principal_submatrix(&idx1)?)?;
        let x2 = self.lift(&qm.principal_submatrix(&idx2)?)?;
        let kappa = x1.get(0, 0).div(x2.get(0, 0))?.sqrt()?;
        let mut m = self.blank(n);
        for (a, &ia) in idx1.iter().enumerate() {
            for (b, &ib) in idx1.iter().enumerate() {
                m.set(ia, ib, x1.get(a, b).clone());
            }
        }
        for (a, &ia) in idx2.iter().enumerate().skip(1) {
            set_sym(&mut m, 0, ia, &kappa * x2.get(a, 0));
            for (b, &ib) in idx2.iter().enumerate().skip(1) {
                m.set(ia, ib, x2.get(a, b).clone());
            }
        }
        let o = 0;
        let mut last = None;
        for (&u, &p) in s1.iter().cartesian_product(s2) {
            let qa = -m.get(o, o).clone();
            let qb = (&(m.get(u, o) * m.get(o, p)) + &(m.get(o, u) * m.get(p, o))).clone();
            let qc = &(m.get(u, u) * &(&(m.get(o, o) * m.get(p, p)) - &(m.get(o, p) * m.get(p, o))))
                - &(&(m.get(u, o) * m.get(o, u)) * m.get(p, p));
            let roots = match quadratic_roots(&qa, &qb, &qc) {
                Ok(r) => r,
                Err(e) => {
                    last = Some(LiftError::from(e));
                    continue;
                }
            };
            let Some(x) = [roots.0, roots.1].into_iter().find(|r| r.degree() == Some(q(0))) else {
                last = Some(LiftError::LiftFailed("no degree-zero root for the central entry".into()));
                continue;
            };
            let mut trial = m.clone();
            set_sym(&mut trial, u, p, x);
            match Self::fill_join(&mut trial, s1, s2, u, p) {
                Ok(()) => return Ok(trial),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| LiftError::LiftFailed("join has no candidate pair".into())))
    }

    fn fill_join(m: &mut SeriesMatrix<H>, s1: &[usize], s2: &[usize], u: usize, p: usize) -> Result<(), LiftError> {
        let o = 0;
        for &i in s1.iter().filter(|&&i| i != u) {
            let x = solve_singular(m, [u, o, i], [u, o, p], (2, 2))?;
            expect_degree(&x, q(0), "propagated cross entry")?;
            set_sym(m, i, p, x);
        }
        let rows2: Vec<usize> = std::iter::once(o).chain(s2.iter().copied()).collect();
        for &j in s2.iter().filter(|&&j| j != p) {
            let (lambda, mu) = express(m, &rows2, j, o, p)?;
            for &i in s1 {
                let x = &(&lambda * m.get(i, o)) + &(&mu * m.get(i, p));
                expect_degree(&x, q(0), "combined cross entry")?;
                set_sym(m, i, j, x);
            }
        }
        Ok(())
    }

    /// `[[0, 0, C], [0, 0, 0], [C^T, 0, 0]]` with `o = 0`, rows `k`, columns `l`.
    fn lift_c_pattern(&mut self, qm: &TropicalMatrix<Rational>, k: Vec<usize>, l: Vec<usize>) -> Result<SeriesMatrix<H>, LiftError> {
        let n = qm.n_rows();
        let o = 0;
        let l1 = l[0];
        let k1 = *k.iter().find(|&&i| qm.get(i, l1).is_positive()).expect("C has no zero column");
        let rows: Vec<usize> = k.iter().copied().chain(std::iter::once(o)).collect();
        let cols: Vec<usize> = std::iter::once(o).chain(l.iter().copied()).collect();
        let u = qm.submatrix(&rows, &cols)?;
        let (ul, combos) = corner_lift(&u, &mut self.rng, self.trunc)?;
        let mut m = self.blank(n);
        for (a, &ia) in rows.iter().enumerate() {
            for (b, &ib) in cols.iter().enumerate() {
                set_sym(&mut m, ia, ib, ul.get(a, b).clone());
            }
        }
        let g = self.generic();
        m.set(l1, l1, g);
        let x = solve_singular(&m, [k1, o, l1], [k1, o, l1], (0, 0))?;
        expect_degree(&x, q(0), "central diagonal entry")?;
        m.set(k1, k1, x);
        for &i in l.iter().filter(|&&i| i != l1) {
            let x = solve_singular(&m, [k1, o, i], [k1, o, l1], (2, 2))?;
            expect_degree(&x, q(0), "entry in the L block")?;
            set_sym(&mut m, i, l1, x);
        }
        for &i in k.iter().filter(|&&i| i != k1) {
            let x = solve_singular(&m, [i, o, l1], [k1, o, l1], (0, 0))?;
            expect_degree(&x, q(0), "entry in the K block")?;
            set_sym(&mut m, i, k1, x);
        }
        for (bi, &i) in l.iter().enumerate().skip(1) {
            for (bj, &j) in l.iter().enumerate().skip(bi) {
                let LiftCombination { lambda, mu, .. } = &combos[bj];
                let _ = bi;
                let x = &(lambda * m.get(i, o)) + &(mu * m.get(i, l1));
                expect_degree(&x, q(0), "filled L block entry")?;
                set_sym(&mut m, i, j, x);
            }
        }
        let rows_for_k: Vec<usize> = std::iter::once(o).chain(l.iter().copied()).collect();
        let k_rest: Vec<usize> = k.iter().copied().filter(|&i| i != k1).collect();
        let mut row_combos = Vec::with_capacity(k_rest.len());
        for &i in &k_rest {
            row_combos.push(express(&m, &rows_for_k, i, o, k1)?);
        }
        for (a, &i) in k_rest.iter().enumerate() {
            for &j in &k_rest[a..] {
                let (lambda, mu) = &row_combos[a];
                let x = &(lambda * m.get(o, j)) + &(mu * m.get(k1, j));
                expect_degree(&x, q(0), "filled K block entry")?;
                set_sym(&mut m, i, j, x);
            }
        }
        Ok(m)
    }
}

/// Symmetric Kapranov rank of a symmetric 3 x 3 matrix, which equals its
/// symmetric tropical rank.
pub fn kapranov_rank_3x3<T: Scalar>(a: &TropicalMatrix<T>) -> Result<usize, LiftError> {
    if !a.is_symmetric() || a.n_rows() != 3 {
        return Err(LiftError::Precondition("expected a symmetric 3x3 matrix".into()));
    }
    Ok(symmetric_tropical_rank(a).expect("symmetric").rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicClass {
    /// The conic is a union of two tropical lines.
    TwoLines,
    Nonsingular,
}

/// Classify the tropical conic `A x^2 + B xy + C y^2 + D x + E y + F` via the
/// matrix `[[A, B, D], [B, C, E], [D, E, F]]`.
pub fn classify_conic<T: Scalar>(coeffs: [T; 6]) -> ConicClass {
    let [a, b, c, d, e, f] = coeffs;
    let m = TropicalMatrix::from_rows(vec![
        vec![a, b.clone(), d.clone()],
        vec![b, c, e.clone()],
        vec![d, e, f],
    ])
    .expect("3x3");
    if kapranov_rank_3x3(&m).expect("symmetric 3x3") < 3 {
        ConicClass::TwoLines
    } else {
        ConicClass::Nonsingular
    }
}

/// Lift given by explicit polynomials in `t`: `entries[i][j]` lists
/// `(coefficient, exponent)` pairs.
pub fn polynomial_matrix(entries: &[Vec<Vec<(f64, i64)>>], trunc: Rational) -> SeriesMatrix {
    SeriesMatrix::from_fn(entries.len(), entries[0].len(), |i, j| {
        PuiseuxSeries::from_terms(entries[i][j].iter().map(|&(c, e)| (q(e), Complex64::new(c, 0.0))).collect(), trunc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = TropicalMatrix<Rational>;

    fn m(rows: &[&[i64]]) -> M {
        M::from_i64_rows(rows).unwrap()
    }

    fn c1() -> M {
        m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])
    }

    fn c2() -> M {
        m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    #[test]
    fn printed_lift_of_c1_verifies() {
        let l = polynomial_matrix(
            &[
                vec![vec![(1.0, 1)], vec![(1.0, 0)], vec![(1.0, 0), (1.0, 1)]],
                vec![vec![(1.0, 0)], vec![(1.0, 1)], vec![(1.0, 0), (1.0, 1)]],
                vec![vec![(1.0, 0), (1.0, 1)], vec![(1.0, 0), (1.0, 1)], vec![(2.0, 0), (2.0, 1)]],
            ],
            q(10),
        );
        assert!(verify_lift(&c1(), &l, 2).passed());
    }

    #[test]
    fn nonsymmetric_lift_of_c2_fails_symmetry() {
        let l = polynomial_matrix(
            &[
                vec![vec![(1.0, 1)], vec![(1.0, 0)], vec![(1.0, 0), (1.0, 1)]],
                vec![vec![(1.0, 0)], vec![(1.0, 1)], vec![(1.0, 0), (1.0, 1)]],
                vec![vec![(1.0, 0), (1.0, 1)], vec![(-1.0, 0)], vec![(1.0, 1)]],
            ],
            q(10),
        );
        let checks = verify_lift(&c2(), &l, 2);
        assert!(checks.degree_match);
        assert_eq!(checks.symmetric, Some(false));
        assert!(!checks.passed());
    }

    #[test]
    fn rank_one_lifts() {
        let cert = rank1_lift(&m(&[&[0, 1], &[1, 2]])).unwrap();
        assert!(cert.is_valid());
        assert!(cert.matrix.minor(&[0, 1], &[0, 1]).is_zero());
        assert!(rank1_lift(&m(&[&[3]])).unwrap().is_valid());
        assert!(rank1_lift(&c2()).is_err());
    }

    #[test]
    fn c1_and_c2_symmetric_lifts() {
        let cert = rank2_symmetric_lift(&c1(), &LiftOptions::default()).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.checks);
        assert!(matches!(rank2_symmetric_lift(&c2(), &LiftOptions::default()), Err(LiftError::Precondition(_))));
    }

    #[test]
    fn lifts_of_small_block_patterns() {
        for rows in [
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]],
            vec![vec![0, 0, 0, 0], vec![0, 0, 1, 2], vec![0, 1, 0, 0], vec![0, 2, 0, 0]],
            vec![vec![0, 0, 0, 0], vec![0, 3, 0, 0], vec![0, 0, 2, 3], vec![0, 0, 3, 2]],
        ] {
            let a = M::from_rows(rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect()).unwrap();
            assert_eq!(symmetric_tropical_rank(&a).unwrap().rank, 2, "{a}");
            let cert = rank2_symmetric_lift(&a, &LiftOptions::default()).unwrap_or_else(|e| panic!("{a}: {e}"));
            assert!(cert.is_valid());
        }
    }

    #[test]
    fn standard_lift_side_conditions() {
        let u = m(&[&[0, 1, 2], &[0, 2, 1], &[0, 0, 0]]);
        let lift = standard_rank2_lift(&u, 3).unwrap();
        assert!(lift.certificate.is_valid());
        assert!(lift.combinations.iter().all(LiftCombination::degrees_ok));
        let single = m(&[&[0, 2], &[0, 0]]);
        assert!(standard_rank2_lift(&single, 0).unwrap().certificate.is_valid());
        assert!(standard_rank2_lift(&m(&[&[0, 0], &[0, 0]]), 0).is_err());
    }

    #[test]
    fn conics_and_small_kapranov_ranks() {
        let z = q(0);
        let one = q(1);
        assert_eq!(classify_conic([one, z, one, z, z, z]), ConicClass::TwoLines);
        assert_eq!(classify_conic([one, z, one, z, z, one]), ConicClass::Nonsingular);
        assert_eq!(classify_conic([z; 6]), ConicClass::TwoLines);
        assert_eq!(kapranov_rank_3x3(&c2()).unwrap(), 3);
        assert_eq!(kapranov_rank_3x3(&c1()).unwrap(), 2);
        assert_eq!(kapranov_rank_3x3(&m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])).unwrap(), 1);
    }
}
