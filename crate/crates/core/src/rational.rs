//! Exact rational helpers shared by every rule.

use num::{BigInt, BigRational, One, Zero};

/// Voting weight, support and quota values are all exact rationals.
pub type Rational = BigRational;

pub fn int(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Lowest-terms `p/q` text. The denominator is always written, so `6` is `6/1`.
pub fn to_text(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or an integer `p`.
pub fn from_text(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Largest integer `l` with `l <= value`, for nonnegative values.
pub(crate) fn floor_usize(value: &Rational) -> usize {
    let floor = value.floor().to_integer();
    usize::try_from(floor).unwrap_or(usize::MAX)
}

/// Smallest integer `l` with `l >= value`, for nonnegative values.
pub(crate) fn ceil_usize(value: &Rational) -> usize {
    let ceil = value.ceil().to_integer();
    usize::try_from(ceil).unwrap_or(usize::MAX)
}
