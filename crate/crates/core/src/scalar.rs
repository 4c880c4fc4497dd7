//! Exact scalar types usable as tropical entries.
//!
//! Every tropical routine in this crate is generic over [`Scalar`]. Ties in a
//! tropical determinant decide singularity, so only exact, totally ordered
//! number types implement the trait: machine integers, `Ratio<i64>` and
//! arbitrary-precision rationals.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rational number with `i64` numerator and denominator.
pub type Rational = Ratio<i64>;

/// An exact, totally ordered number type.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Send + Sync + Signed + 'static
{
    /// `self / 2` when it is representable exactly.
    fn checked_half(&self) -> Option<Self>;

    /// Parse an integer, a fraction `p/q`, or a terminating decimal exactly.
    fn parse_exact(s: &str) -> Option<Self>;

    /// Convert into an `i64` rational, if it fits.
    fn to_rational(&self) -> Option<Rational>;

    /// Convert from an `i64` rational, if exactly representable.
    fn from_rational(q: &Rational) -> Option<Self>;

    fn from_i64(v: i64) -> Self;
}

/// Split a literal into an exact big-rational value.
fn parse_big(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_big(num)?;
        let den = parse_big(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if neg { -value } else { value })
}

impl Scalar for Rational {
    fn checked_half(&self) -> Option<Self> {
        Some(self / 2)
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let big = parse_big(s)?;
        Some(Ratio::new(big.numer().to_i64()?, big.denom().to_i64()?))
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(*self)
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(*q)
    }

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for BigRational {
    fn checked_half(&self) -> Option<Self> {
        Some(self / BigRational::from_integer(BigInt::from(2)))
    }

    fn parse_exact(s: &str) -> Option<Self> {
        parse_big(s)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(Ratio::new(self.numer().to_i64()?, self.denom().to_i64()?))
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom())))
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Scalar for i64 {
    fn checked_half(&self) -> Option<Self> {
        (self % 2 == 0).then(|| self / 2)
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let big = parse_big(s)?;
        if !big.denom().is_one() {
            return None;
        }
        big.numer().to_i64()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(Ratio::from_integer(*self))
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        q.is_integer().then(|| q.to_integer())
    }

    fn from_i64(v: i64) -> Self {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_exactly() {
        assert_eq!(Rational::parse_exact("4.25"), Some(Ratio::new(17, 4)));
        assert_eq!(Rational::parse_exact("-1/2"), Some(Ratio::new(-1, 2)));
        assert_eq!(Rational::parse_exact("-.5"), Some(Ratio::new(-1, 2)));
        assert_eq!(Rational::parse_exact("3"), Some(Ratio::from_integer(3)));
    }

    #[test]
    fn rejects_non_finite_and_garbage() {
        for bad in ["inf", "-inf", "NaN", "1/0", "", "1e3", "1..2", "-"] {
            assert_eq!(Rational::parse_exact(bad), None, "{bad}");
        }
    }

    #[test]
    fn integers_refuse_fractions() {
        assert_eq!(i64::parse_exact("2.0"), Some(2));
        assert_eq!(i64::parse_exact("1/2"), None);
        assert_eq!(3i64.checked_half(), None);
        assert_eq!(BigRational::parse_exact("7/3").unwrap().to_rational(), Some(Ratio::new(7, 3)));
    }
}
