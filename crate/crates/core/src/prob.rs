//! Probability arithmetic shared by the exact and floating engines.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact probabilities and expectations.
pub type Rational = BigRational;

/// Number type the Markov-chain engine is generic over.
///
/// `Rational` gives exact answers; `f64` is the escape hatch for chains whose
/// denominators grow too large (documented tolerance 1e-9 against exact).
pub trait Weight: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn ratio(num: u64, den: u64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Weight for Rational {
    fn ratio(num: u64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Weight for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses "p/q", a decimal such as "0.95", or an integer, exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("not a number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(Rational::new(num * sign, den))
}

/// Parses a probability strictly inside (0, 1).
pub fn parse_open_probability(text: &str) -> Result<Rational> {
    let a = parse_rational(text)?;
    check_open_unit(&a)?;
    Ok(a)
}

pub(crate) fn check_open_unit<W: Weight>(alpha: &W) -> Result<()> {
    if *alpha > W::zero() && *alpha < W::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("confidence level must lie in (0, 1), got {alpha:?}")))
    }
}

/// `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
