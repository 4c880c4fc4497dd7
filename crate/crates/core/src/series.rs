//! Truncated Puiseux series with exact rational exponents and complex
//! floating-point coefficients.
//!
//! A [`PuiseuxSeries`] is known modulo `t^trunc`: every stored exponent is
//! below `trunc`, and arithmetic propagates the truncation order so that no
//! reported term depends on unknown ones. Each term also carries the summed
//! magnitude of the products that produced it; a leading coefficient below
//! [`HARD_ZERO`] times that magnitude is treated as cancelled.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_complex::{Complex, Complex64};
use num_traits::{Float, NumAssign, NumCast, One, Zero};
use rand::Rng;

use crate::error::SeriesError;
use crate::matrix::TropicalMatrix;
use crate::scalar::{Rational, Scalar};

/// Relative magnitude below which a coefficient counts as zero.
pub const HARD_ZERO: f64 = 1e-12;

/// Real floating-point type of the coefficients.
pub trait Coeff: Float + NumAssign + Send + Sync + fmt::Debug + 'static {}

impl<F: Float + NumAssign + Send + Sync + fmt::Debug + 'static> Coeff for F {}

fn norm<F: Coeff>(c: &Complex<F>) -> f64 {
    c.re.to_f64().unwrap_or(f64::NAN).hypot(c.im.to_f64().unwrap_or(f64::NAN))
}

fn real<F: Coeff>(x: f64) -> Complex<F> {
    Complex::new(<F as NumCast>::from(x).expect("finite"), F::zero())
}

fn widen<F: Coeff>(c: Complex64) -> Complex<F> {
    Complex::new(<F as NumCast>::from(c.re).expect("finite"), <F as NumCast>::from(c.im).expect("finite"))
}

fn exponent_f64(e: Rational) -> f64 {
    *e.numer() as f64 / *e.denom() as f64
}

/// `1 / c` from a first approximation of the reciprocal of `|c|^2`,
/// refined by one Newton step, so only multiplication needs full precision.
fn complex_inv<F: Coeff>(c: Complex<F>) -> Complex<F> {
    let n = c.norm_sqr();
    let y = n.recip();
    let y = y + y * (F::one() - n * y);
    Complex::new(c.re * y, -c.im * y)
}

/// Principal square root without trigonometry.
fn complex_sqrt<F: Coeff>(c: Complex<F>) -> Complex<F> {
    let r = c.norm_sqr().sqrt();
    let half = real::<F>(0.5).re;
    let re = ((r + c.re) * half).sqrt();
    let im = ((r - c.re) * half).sqrt();
    Complex::new(re, if c.im.is_sign_negative() { -im } else { im })
}

#[derive(Clone, Debug)]
pub struct PuiseuxSeries<F = f64> {
    terms: Vec<(Rational, Complex<F>)>,
    /// Per term, the summed magnitude of every product that contributed to
    /// it; rounding error in the coefficient is a small multiple of this.
    mags: Vec<f64>,
    trunc: Rational,
}

impl<F: PartialEq> PartialEq for PuiseuxSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.trunc == other.trunc
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

impl<F: Coeff> PuiseuxSeries<F> {
    /// Merge, sort and truncate raw `(exponent, coefficient, magnitude)`
    /// triples. Leading coefficients below `HARD_ZERO` times the accumulated
    /// magnitude at their exponent are cancellation noise and are dropped;
    /// once a significant term is seen, every later term is kept.
    fn build(raw: impl IntoIterator<Item = (Rational, Complex<F>, f64)>, trunc: Rational) -> Self {
        let mut raw: Vec<(Rational, Complex<F>, f64)> = raw.into_iter().filter(|(e, _, _)| *e < trunc).collect();
        raw.sort_unstable_by_key(|a| a.0);
        let mut terms = Vec::new();
        let mut mags = Vec::new();
        let mut it = raw.into_iter().peekable();
        while let Some((e, mut c, mut mag)) = it.next() {
            while let Some((_, c2, m2)) = it.next_if(|x| x.0 == e) {
                c += c2;
                mag += m2;
            }
            let significant = norm(&c) >= HARD_ZERO * mag;
            if c != Complex::<F>::zero() && (significant || !terms.is_empty()) {
                terms.push((e, c));
                mags.push(mag);
            }
        }
        PuiseuxSeries { terms, mags, trunc }
    }

    fn triples(&self) -> impl Iterator<Item = (Rational, Complex<F>, f64)> + '_ {
        self.terms.iter().zip(&self.mags).map(|(&(e, c), &m)| (e, c, m))
    }

    pub fn from_terms(terms: Vec<(Rational, Complex<F>)>, trunc: Rational) -> Self {
        Self::build(terms.into_iter().map(|(e, c)| (e, c, norm(&c))), trunc)
    }

    pub fn zero(trunc: Rational) -> Self {
        PuiseuxSeries { terms: Vec::new(), mags: Vec::new(), trunc }
    }

    pub fn monomial(coeff: Complex<F>, exp: Rational, trunc: Rational) -> Self {
        Self::from_terms(vec![(exp, coeff)], trunc)
    }

    pub fn constant(coeff: Complex<F>, trunc: Rational) -> Self {
        Self::monomial(coeff, Rational::zero(), trunc)
    }

    pub fn one(trunc: Rational) -> Self {
        Self::constant(Complex::<F>::one(), trunc)
    }

    pub fn terms(&self) -> &[(Rational, Complex<F>)] {
        &self.terms
    }

    pub fn trunc(&self) -> Rational {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading exponent; `None` for the zero series.
    pub fn degree(&self) -> Option<Rational> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn leading_coeff(&self) -> Option<Complex<F>> {
        self.terms.first().map(|(_, c)| *c)
    }

    /// Substitute `lambda t` for `t`: the coefficient of `t^e` is multiplied
    /// by `lambda^e`.
    pub fn dilate(&self, lambda: f64) -> Self {
        let ln = lambda.ln();
        Self::build(
            self.triples().map(|(e, c, m)| {
                let f = (ln * exponent_f64(e)).exp();
                (e, c * real::<F>(f), m * f)
            }),
            self.trunc,
        )
    }

    /// Smallest `rho` with `|c_e| <= |c_v| rho^(e - v)` for every term, `v`
    /// being the degree.
    pub fn growth_rate(&self) -> f64 {
        let Some(&(v, c0)) = self.terms.first() else { return 0.0 };
        let lead = norm(&c0);
        self.terms[1..]
            .iter()
            .map(|(e, c)| (norm(c) / lead).powf(1.0 / exponent_f64(e - v)))
            .fold(0.0, f64::max)
    }

    pub fn leading_magnitude(&self) -> f64 {
        self.terms.first().map_or(0.0, |(_, c)| norm(c))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.iter().map(|(_, c)| norm(c)).fold(0.0, f64::max)
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: &Rational) -> Complex<F> {
        self.terms.iter().find(|(x, _)| x == e).map_or(Complex::<F>::zero(), |(_, c)| *c)
    }

    /// The same terms with their history forgotten: each magnitude becomes
    /// the coefficient's own, as for a series read from text.
    pub fn detached(&self) -> Self {
        Self::from_terms(self.terms.clone(), self.trunc)
    }

    /// Forget terms at or above `trunc` (never raises the truncation).
    pub fn truncate(&self, trunc: Rational) -> Self {
        let trunc = trunc.min(self.trunc);
        let keep = self.terms.partition_point(|(e, _)| *e < trunc);
        PuiseuxSeries { terms: self.terms[..keep].to_vec(), mags: self.mags[..keep].to_vec(), trunc }
    }

    pub fn scale(&self, c: Complex<F>) -> Self {
        Self::build(self.triples().map(|(e, x, m)| (e, x * c, m * norm(&c))), self.trunc)
    }

    /// Multiply by `t^e`.
    pub fn shift(&self, e: Rational) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(x, c)| (x + e, *c)).collect(),
            mags: self.mags.clone(),
            trunc: self.trunc + e,
        }
    }

    fn add_impl(&self, other: &Self, sign: f64) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let raw = self.triples().chain(other.triples().map(|(e, c, m)| (e, c * real::<F>(sign), m)));
        Self::build(raw, trunc)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let trunc = match (self.degree(), other.degree()) {
            (Some(vs), Some(vo)) => (self.trunc + vo).min(other.trunc + vs),
            (Some(vs), None) => other.trunc + vs,
            (None, Some(vo)) => self.trunc + vo,
            (None, None) => self.trunc + other.trunc,
        };
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1, m1) in self.triples() {
            for (e2, c2, m2) in other.triples() {
                let e = e1 + e2;
                if e >= trunc {
                    break;
                }
                raw.push((e, c1 * c2, m1 * m2));
            }
        }
        Self::build(raw, trunc)
    }

    /// `(1 + w)^alpha` for `w` of positive valuation and `alpha` in
    /// `{-1, 1/2}`, known modulo `t^rel`, by the coefficient recurrence of
    /// long division or of squaring on the grid of exponents of `w`.
    fn unit_power(w: &Self, root: bool, rel: Rational) -> Self {
        let d = w.terms.iter().fold(*rel.denom(), |d, (e, _)| lcm(d, *e.denom()));
        let len = (rel * Rational::from_integer(d)).ceil().to_integer().max(0) as usize;
        if len == 0 {
            return Self::zero(rel);
        }
        let mut wc = vec![(Complex::<F>::zero(), 0.0); len];
        for (e, c, m) in w.triples() {
            let k = (e * Rational::from_integer(d)).to_integer() as usize;
            if k < len {
                wc[k] = (c, m);
            }
        }
        let support: Vec<usize> = (1..len).filter(|&k| wc[k].1 > 0.0).collect();
        let mut out = vec![(Complex::<F>::zero(), 0.0); len];
        out[0] = (Complex::<F>::one(), 1.0);
        for k in 1..len {
            let (mut c, mut m) = (Complex::<F>::zero(), 0.0);
            if root {
                for j in 1..k {
                    c += out[j].0 * out[k - j].0;
                    m += out[j].1 * out[k - j].1;
                }
                c = (wc[k].0 - c) * real::<F>(0.5);
                m = (wc[k].1 + m) / 2.0;
            } else {
                for &j in support.iter().take_while(|&&j| j <= k) {
                    c -= wc[j].0 * out[k - j].0;
                    m += wc[j].1 * out[k - j].1;
                }
            }
            out[k] = (c, m);
        }
        let step = Rational::new(1, d);
        Self::build(
            out.into_iter().enumerate().filter(|(_, (c, _))| !c.is_zero()).map(|(k, (c, m))| (step * Rational::from_integer(k as i64), c, m)),
            rel,
        )
    }

    /// Split `self = c t^v (1 + w)`; returns `(c, v, w, precision of w)`.
    fn factor(&self) -> Result<(Complex<F>, Rational, Self, Rational), SeriesError> {
        let (v, c) = *self.terms.first().ok_or(SeriesError::ZeroSeries)?;
        let rel = self.trunc - v;
        let inv = complex_inv(c);
        let w = Self::build(self.triples().skip(1).map(|(e, x, m)| (e - v, x * inv, m / norm(&c))), rel);
        Ok((c, v, w, rel))
    }

    pub fn invert(&self) -> Result<Self, SeriesError> {
        let (c, v, w, rel) = self.factor()?;
        Ok(Self::unit_power(&w, false, rel).scale(complex_inv(c)).shift(-v))
    }

    /// Principal square root: the leading coefficient takes the principal
    /// branch, the exponent halves.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let (c, v, w, rel) = self.factor()?;
        Ok(Self::unit_power(&w, true, rel).scale(complex_sqrt(c)).shift(v / Rational::from_integer(2)))
    }

    /// Round every coefficient to `f64`, forgetting the history.
    pub fn to_f64(&self) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(e, c)| (*e, Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))));
        PuiseuxSeries::from_terms(terms.collect(), self.trunc)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.invert()?)
    }

    /// A degree-zero constant with magnitude in `[1, 2]` and uniform phase.
    pub fn generic_constant<R: Rng>(rng: &mut R, trunc: Rational) -> Self {
        let r: f64 = rng.gen_range(1.0..=2.0);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Self::constant(widen(Complex64::from_polar(r, theta)), trunc)
    }
}

impl PuiseuxSeries {
    /// Header line `series <trunc> <terms>` then one `re im exponent` line
    /// per term. Floats are written in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = format!("series {} {}\n", self.trunc, self.terms.len());
        for (e, c) in &self.terms {
            out.push_str(&format!("{:?} {:?} {}\n", c.re, c.im, e));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SeriesError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let s = parse_block(&mut lines)?;
        if let Some((i, _)) = lines.next() {
            return Err(SeriesError::Parse { line: i + 1, message: "trailing content".into() });
        }
        Ok(s)
    }
}

fn bad(line: usize, message: &str) -> SeriesError {
    SeriesError::Parse { line: line + 1, message: message.to_string() }
}

fn parse_block<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<PuiseuxSeries, SeriesError> {
    let (i, header) = lines.next().ok_or_else(|| bad(0, "missing series header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "series" {
        return Err(bad(i, "expected `series <trunc> <count>`"));
    }
    let trunc = Rational::parse_exact(parts[1]).ok_or_else(|| bad(i, "bad truncation order"))?;
    let count: usize = parts[2].parse().map_err(|_| bad(i, "bad term count"))?;
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let (i, line) = lines.next().ok_or_else(|| bad(i, "missing term line"))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad(i, "expected `re im exponent`"));
        }
        let re: f64 = f[0].parse().map_err(|_| bad(i, "bad real part"))?;
        let im: f64 = f[1].parse().map_err(|_| bad(i, "bad imaginary part"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(bad(i, "non-finite coefficient"));
        }
        let e = Rational::parse_exact(f[2]).ok_or_else(|| bad(i, "bad exponent"))?;
        terms.push((e, Complex64::new(re, im)));
    }
    let sorted = terms.windows(2).all(|w| w[0].0 < w[1].0);
    if !sorted || terms.iter().any(|(e, c)| *e >= trunc || c.is_zero()) {
        return Err(bad(i, "terms must have increasing exponents below the truncation"));
    }
    let mags = terms.iter().map(|(_, c)| c.norm()).collect();
    Ok(PuiseuxSeries { terms, mags, trunc })
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{}", fmt_coeff(*c))?;
            } else {
                write!(f, "{}*t^{}", fmt_coeff(*c), e)?;
            }
        }
        write!(f, " + O(t^{})", self.trunc)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<F: Coeff> $trait<&PuiseuxSeries<F>> for &PuiseuxSeries<F> {
            type Output = PuiseuxSeries<F>;
            fn $method(self, rhs: &PuiseuxSeries<F>) -> PuiseuxSeries<F> {
                $body(self, rhs)
            }
        }
        impl<F: Coeff> $trait for PuiseuxSeries<F> {
            type Output = PuiseuxSeries<F>;
            fn $method(self, rhs: PuiseuxSeries<F>) -> PuiseuxSeries<F> {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &PuiseuxSeries<F>, b: &PuiseuxSeries<F>| a.add_impl(b, 1.0));
forward_binop!(Sub, sub, |a: &PuiseuxSeries<F>, b: &PuiseuxSeries<F>| a.add_impl(b, -1.0));
forward_binop!(Mul, mul, |a: &PuiseuxSeries<F>, b: &PuiseuxSeries<F>| a.mul_impl(b));

impl<F: Coeff> Neg for &PuiseuxSeries<F> {
    type Output = PuiseuxSeries<F>;
    fn neg(self) -> PuiseuxSeries<F> {
        PuiseuxSeries { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(), mags: self.mags.clone(), trunc: self.trunc }
    }
}

impl<F: Coeff> Neg for PuiseuxSeries<F> {
    type Output = PuiseuxSeries<F>;
    fn neg(self) -> PuiseuxSeries<F> {
        -&self
    }
}

/// Both roots of `a x^2 + b x + c`, ordered by degree (zero root last).
///
/// Uses `q = -(b + s sqrt(b^2 - 4ac)) / 2` with the sign `s` that avoids
/// cancellation, and returns `q / a` and `c / q`.
pub fn quadratic_roots<F: Coeff>(
    a: &PuiseuxSeries<F>,
    b: &PuiseuxSeries<F>,
    c: &PuiseuxSeries<F>,
) -> Result<(PuiseuxSeries<F>, PuiseuxSeries<F>), SeriesError> {
    if a.is_zero() {
        return Err(SeriesError::ZeroSeries);
    }
    let four_ac = (a * c).scale(real(4.0));
    let disc = &(b * b) - &four_ac;
    if disc.is_zero() {
        return Err(SeriesError::DegenerateDiscriminant);
    }
    let root = disc.sqrt()?;
    let plus = b + &root;
    let minus = b - &root;
    let bigger = |x: &PuiseuxSeries<F>, y: &PuiseuxSeries<F>| match (x.degree(), y.degree()) {
        (Some(dx), Some(dy)) if dx != dy => dx < dy,
        (Some(_), Some(_)) => x.leading_coeff().map(|c| norm(&c)) >= y.leading_coeff().map(|c| norm(&c)),
        (a, _) => a.is_some(),
    };
    let sum = if bigger(&plus, &minus) { plus } else { minus };
    let q = sum.scale(real(-0.5));
    let x1 = q.div(a)?;
    let x2 = c.div(&q)?;
    let key = |x: &PuiseuxSeries<F>| x.degree().map_or((1, Rational::zero()), |d| (0, d));
    if key(&x2) < key(&x1) {
        Ok((x2, x1))
    } else {
        Ok((x1, x2))
    }
}

/// A minor together with its scale, the sum over all permutations of the
/// products of the entries' leading magnitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorReport<F = f64> {
    pub value: PuiseuxSeries<F>,
    pub scale: f64,
}

impl<F: Coeff> MinorReport<F> {
    fn relative(&self, c: f64) -> f64 {
        if self.scale > 0.0 {
            c / self.scale
        } else {
            c
        }
    }

    /// Largest coefficient relative to the scale.
    pub fn max_relative(&self) -> f64 {
        self.relative(self.value.max_magnitude())
    }

    pub fn leading_relative(&self) -> Option<f64> {
        (!self.value.is_zero()).then(|| self.relative(self.value.leading_magnitude()))
    }
}

/// Dense matrix of series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix<F = f64> {
    rows: usize,
    cols: usize,
    entries: Vec<PuiseuxSeries<F>>,
}

impl<F: Coeff> SeriesMatrix<F> {
    pub fn from_rows(rows: Vec<Vec<PuiseuxSeries<F>>>) -> Result<Self, SeriesError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 || rows.iter().any(|r| r.len() != n_cols) {
            return Err(SeriesError::Shape);
        }
        Ok(SeriesMatrix { rows: n_rows, cols: n_cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PuiseuxSeries<F>) -> Self {
        assert!(rows > 0 && cols > 0);
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        SeriesMatrix { rows, cols, entries }
    }

    /// `t^A[i][j]` with unit coefficients.
    pub fn monomial_lift<T: Scalar>(a: &TropicalMatrix<T>, trunc: Rational) -> Option<Self> {
        let exps: Vec<Rational> = a.entries().map(Scalar::to_rational).collect::<Option<_>>()?;
        Some(Self::from_fn(a.n_rows(), a.n_cols(), |i, j| {
            PuiseuxSeries::monomial(Complex::one(), exps[i * a.n_cols() + j], trunc)
        }))
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxSeries<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: PuiseuxSeries<F>) {
        self.entries[i * self.cols + j] = s;
    }

    pub fn entries(&self) -> impl Iterator<Item = &PuiseuxSeries<F>> {
        self.entries.iter()
    }

    /// Smallest truncation order among the entries.
    pub fn trunc(&self) -> Rational {
        self.entries.iter().map(PuiseuxSeries::<F>::trunc).min().expect("nonempty")
    }

    pub fn map<G: Coeff>(&self, f: impl FnMut(&PuiseuxSeries<F>) -> PuiseuxSeries<G>) -> SeriesMatrix<G> {
        SeriesMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Largest [`PuiseuxSeries::growth_rate`] over the entries.
    pub fn growth_rate(&self) -> f64 {
        self.entries.iter().map(PuiseuxSeries::growth_rate).fold(0.0, f64::max)
    }

    /// Round every entry to `f64`.
    pub fn to_f64(&self) -> SeriesMatrix {
        SeriesMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(PuiseuxSeries::to_f64).collect() }
    }

    /// Truncate every entry to a common order.
    pub fn with_trunc(&self, trunc: Rational) -> Self {
        SeriesMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|s| s.truncate(trunc)).collect() }
    }

    /// Entries `(i, j)` and `(j, i)` agree term for term.
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j).terms == self.get(j, i).terms))
    }

    /// Entrywise degrees; `None` if some entry is zero.
    pub fn degrees(&self) -> Option<TropicalMatrix<Rational>> {
        let rows: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).degree()).collect::<Option<_>>())
            .collect::<Option<_>>()?;
        TropicalMatrix::from_rows(rows).ok()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Determinant of the `rows x cols` submatrix by the Leibniz expansion.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> PuiseuxSeries<F> {
        let r = rows.len();
        let trunc = self.trunc() * Rational::from_integer(r as i64);
        let mut raw = Vec::new();
        for p in (0..r).permutations(r) {
            let inversions = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let mut prod = self.get(rows[0], cols[p[0]]).clone();
            for k in 1..r {
                prod = &prod * self.get(rows[k], cols[p[k]]);
            }
            let prod = if inversions % 2 == 1 { -prod } else { prod };
            raw.push(prod);
        }
        let trunc = raw.iter().map(PuiseuxSeries::<F>::trunc).fold(trunc, Rational::min);
        PuiseuxSeries::build(raw.iter().flat_map(PuiseuxSeries::<F>::triples), trunc)
    }

    /// The minor and its scale.
    pub fn minor_report(&self, rows: &[usize], cols: &[usize]) -> MinorReport<F> {
        let value = self.minor(rows, cols);
        let r = rows.len();
        let scale = (0..r)
            .permutations(r)
            .map(|p| (0..r).map(|k| self.get(rows[k], cols[p[k]]).leading_magnitude()).product::<f64>())
            .sum();
        MinorReport { value, scale }
    }

}

impl SeriesMatrix {
    /// Row-major text: `seriesmatrix <rows> <cols>`, then per entry a line
    /// `entry <i> <j>` (1-based) followed by the series block.
    pub fn to_text(&self) -> String {
        let mut out = format!("seriesmatrix {} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push_str(&format!("entry {} {}\n", i + 1, j + 1));
                out.push_str(&self.get(i, j).to_text());
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SeriesError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (i, header) = lines.next().ok_or_else(|| bad(0, "empty input"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let dims = match parts.as_slice() {
            ["seriesmatrix", r, c] => r.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
            _ => None,
        };
        let (rows, cols) = dims.filter(|&(r, c)| r > 0 && c > 0).ok_or_else(|| bad(i, "expected `seriesmatrix <rows> <cols>`"))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let (i, line) = lines.next().ok_or_else(|| bad(i, "missing entry"))?;
                if line.split_whitespace().collect::<Vec<_>>() != ["entry", &(r + 1).to_string(), &(c + 1).to_string()] {
                    return Err(bad(i, &format!("expected `entry {} {}`", r + 1, c + 1)));
                }
                entries.push(parse_block(&mut lines)?);
            }
        }
        if let Some((i, _)) = lines.next() {
            return Err(bad(i, "trailing content"));
        }
        Ok(SeriesMatrix { rows, cols, entries })
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" | "))?;
        }
        Ok(())
    }
}

/// Rational exponent helper.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Largest relative deviation of `s` from zero, measured against `scale`.
pub fn relative_residual(s: &PuiseuxSeries, scale: f64) -> f64 {
    if scale == 0.0 {
        return s.max_magnitude();
    }
    s.max_magnitude() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn poly(coeffs: &[(f64, i64)], trunc: i64) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(coeffs.iter().map(|&(x, e)| (z(e), c(x))).collect(), z(trunc))
    }

    #[test]
    fn degrees_add_under_multiplication() {
        let t = poly(&[(1.0, 1)], 10);
        let one_plus_t = poly(&[(1.0, 0), (1.0, 1)], 10);
        assert_eq!((&t * &one_plus_t).degree(), Some(z(1)));
    }

    #[test]
    fn leading_terms_cancel() {
        let s = poly(&[(1.0, 0), (1.0, 1)], 10) + poly(&[(-1.0, 0), (1.0, 1)], 10);
        assert_eq!(s.terms(), &[(z(1), c(2.0))]);
    }

    #[test]
    fn inverses() {
        let t = poly(&[(1.0, 1)], 10);
        let inv = t.invert().unwrap();
        assert_eq!(inv.terms(), &[(z(-1), c(1.0))]);
        let geo = poly(&[(1.0, 0), (1.0, 1)], 6).invert().unwrap();
        let expected: Vec<(Rational, Complex64)> = (0..6).map(|k| (z(k), c(if k % 2 == 0 { 1.0 } else { -1.0 }))).collect();
        assert_eq!(geo.terms(), expected.as_slice());
        assert!(PuiseuxSeries::<f64>::zero(z(3)).invert().is_err());
    }

    #[test]
    fn square_roots() {
        let t2 = poly(&[(1.0, 2)], 10);
        assert_eq!(t2.sqrt().unwrap().terms(), &[(z(1), c(1.0))]);
        let s = poly(&[(4.0, 0), (4.0, 1)], 8);
        let r = s.sqrt().unwrap();
        assert!((r.coeff(&z(0)) - c(2.0)).norm() < 1e-15);
        assert!((r.coeff(&z(1)) - c(1.0)).norm() < 1e-15);
        assert!((r.coeff(&z(2)) - c(-0.25)).norm() < 1e-15);
        assert!(relative_residual(&(&(&r * &r) - &s), 4.0) < 1e-12);
        let neg = poly(&[(-4.0, 0)], 3).sqrt().unwrap();
        assert!((neg.leading_coeff().unwrap() - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_quadratic() {
        let (x1, x2) = quadratic_roots(&poly(&[(1.0, 0)], 5), &poly(&[(-3.0, 0)], 5), &poly(&[(2.0, 0)], 5)).unwrap();
        let mut roots = [x1.leading_coeff().unwrap().re, x2.leading_coeff().unwrap().re];
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] - 1.0).abs() < 1e-14 && (roots[1] - 2.0).abs() < 1e-14);
        let err = quadratic_roots(&poly(&[(1.0, 0)], 5), &poly(&[(2.0, 0)], 5), &poly(&[(1.0, 0)], 5));
        assert_eq!(err, Err(SeriesError::DegenerateDiscriminant));
    }

    #[test]
    fn root_degrees_in_both_regimes() {
        let a = poly(&[(1.0, 0), (0.5, 1)], 8);
        let b = poly(&[(2.0, 0)], 8);
        let small_c = poly(&[(3.0, 1)], 8);
        let (x1, x2) = quadratic_roots(&a, &b, &small_c).unwrap();
        assert_eq!(x1.degree(), Some(z(0)));
        assert_eq!(x2.degree(), Some(z(1)));
        let (y1, y2) = quadratic_roots(&a, &b, &poly(&[(-3.0, 0)], 8)).unwrap();
        assert_eq!((y1.degree(), y2.degree()), (Some(z(0)), Some(z(0))));
    }

    #[test]
    fn generic_constants() {
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let a = PuiseuxSeries::<f64>::generic_constant(&mut r1, z(4));
        assert_eq!(a, PuiseuxSeries::generic_constant(&mut r2, z(4)));
        let b = PuiseuxSeries::generic_constant(&mut r1, z(4));
        assert_ne!(a, b);
        for s in [a, b] {
            let m = s.leading_coeff().unwrap().norm();
            assert!((1.0..=2.0 + 1e-12).contains(&m));
            assert_eq!(s.degree(), Some(z(0)));
        }
    }

    #[test]
    fn text_round_trip() {
        let s = PuiseuxSeries::from_terms(
            vec![(q(-1, 3), Complex64::new(0.1, -2.5e-7)), (q(5, 2), Complex64::new(1.0 / 3.0, 0.0))],
            q(7, 2),
        );
        assert_eq!(PuiseuxSeries::parse(&s.to_text()).unwrap(), s);
        let m = SeriesMatrix::from_fn(2, 3, |i, j| s.shift(z((i + j) as i64)));
        assert_eq!(SeriesMatrix::parse(&m.to_text()).unwrap(), m);
        assert!(PuiseuxSeries::parse("series 1 1\n1 0 2\n").is_err());
    }

    #[test]
    fn minors_of_monomial_lift() {
        let a = TropicalMatrix::<Rational>::from_i64_rows(&[&[0, 1], &[1, 2]]).unwrap();
        let l = SeriesMatrix::<f64>::monomial_lift(&a, z(10)).unwrap();
        assert!(l.minor(&[0, 1], &[0, 1]).is_zero());
        assert!(l.is_symmetric());
        assert_eq!(l.degrees().unwrap(), a);
    }
}
