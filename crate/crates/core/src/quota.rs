//! Quota values and threshold semantics.
//!
//! A quota is an exact rational together with a comparison mode. The Droop
//! quota `n/(k+1) + ε` is represented as a [`QuotaMode::Strict`] threshold at
//! `n/(k+1)`: support must strictly exceed the value.

use std::cmp::Ordering;
use std::fmt;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, ceil_usize, floor_usize, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuotaMode {
    /// Support must be at least the value.
    Inclusive,
    /// Support must be strictly greater than the value.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quota {
    value: Rational,
    mode: QuotaMode,
}

impl Quota {
    pub fn new(value: Rational, mode: QuotaMode) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::InvalidQuota(format!(
                "value {} must be positive",
                rational::to_text(&value)
            )));
        }
        Ok(Quota { value, mode })
    }

    pub fn inclusive(value: Rational) -> Result<Self> {
        Quota::new(value, QuotaMode::Inclusive)
    }

    /// Hare quota `n/k`.
    pub fn hare(n: usize, k: usize) -> Self {
        Quota {
            value: rational::ratio(n as i64, k as i64),
            mode: QuotaMode::Inclusive,
        }
    }

    /// Droop quota `n/(k+1) + ε`.
    pub fn droop(n: usize, k: usize) -> Self {
        Quota {
            value: rational::ratio(n as i64, k as i64 + 1),
            mode: QuotaMode::Strict,
        }
    }

    /// The EAR default `n/(k+1) + (⌊n/(k+1)⌋ + 1 − n/(k+1)) / (m+1)`.
    pub fn default_ear(n: usize, k: usize, m: usize) -> Self {
        let base = rational::ratio(n as i64, k as i64 + 1);
        let slack = base.floor() + rational::one() - &base;
        let value = &base + slack / rational::int(m + 1);
        Quota {
            value,
            mode: QuotaMode::Inclusive,
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn mode(&self) -> QuotaMode {
        self.mode
    }

    pub fn is_strict(&self) -> bool {
        self.mode == QuotaMode::Strict
    }

    /// Whether `support` reaches the quota.
    pub fn support_meets(&self, support: &Rational) -> bool {
        match self.mode {
            QuotaMode::Inclusive => support >= &self.value,
            QuotaMode::Strict => support > &self.value,
        }
    }

    /// Largest `ℓ` such that a group of total weight `total` satisfies
    /// `total ≥ ℓ·q` (inclusive) or `total > ℓ·q` (strict).
    pub fn max_multiple(&self, total: &Rational) -> usize {
        if !total.is_positive() {
            return 0;
        }
        let ratio = total / &self.value;
        match self.mode {
            QuotaMode::Inclusive => floor_usize(&ratio),
            QuotaMode::Strict => ceil_usize(&ratio) - 1,
        }
    }

    /// Whether the effective threshold lies in `(n/(k+1), n/k]`.
    pub fn is_admissible(&self, n: usize, k: usize) -> bool {
        let lower = rational::ratio(n as i64, k as i64 + 1);
        let upper = rational::ratio(n as i64, k as i64);
        match self.mode {
            QuotaMode::Inclusive => self.value > lower && self.value <= upper,
            QuotaMode::Strict => self.value >= lower && self.value < upper,
        }
    }

    pub fn check_admissible(&self, n: usize, k: usize) -> Result<()> {
        if self.is_admissible(n, k) {
            Ok(())
        } else {
            Err(Error::QuotaNotAdmissible {
                quota: self.to_string(),
                lower: rational::to_text(&rational::ratio(n as i64, k as i64 + 1)),
                upper: rational::to_text(&rational::ratio(n as i64, k as i64)),
            })
        }
    }

    /// Orders quotas by effective threshold; a strict quota sits an
    /// infinitesimal above an inclusive one of the same value.
    pub fn threshold_cmp(&self, other: &Quota) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| match (self.mode, other.mode) {
                (QuotaMode::Inclusive, QuotaMode::Strict) => Ordering::Less,
                (QuotaMode::Strict, QuotaMode::Inclusive) => Ordering::Greater,
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for Quota {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            QuotaMode::Inclusive => write!(f, "{}", rational::to_text(&self.value)),
            QuotaMode::Strict => write!(f, "{},strict", rational::to_text(&self.value)),
        }
    }
}

/// A quota named independently of the election size, resolved per profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotaSpec {
    Hare,
    Droop,
    Default,
    Fixed(Quota),
}

impl QuotaSpec {
    pub fn resolve(&self, n: usize, k: usize, m: usize) -> Quota {
        match self {
            QuotaSpec::Hare => Quota::hare(n, k),
            QuotaSpec::Droop => Quota::droop(n, k),
            QuotaSpec::Default => Quota::default_ear(n, k, m),
            QuotaSpec::Fixed(q) => q.clone(),
        }
    }
}

impl std::str::FromStr for QuotaSpec {
    type Err = Error;

    /// `hare`, `droop`, `default`, or `<p>/<q>[,strict]`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hare" => Ok(QuotaSpec::Hare),
            "droop" => Ok(QuotaSpec::Droop),
            "default" => Ok(QuotaSpec::Default),
            other => {
                let (value, mode) = match other.strip_suffix(",strict") {
                    Some(v) => (v, QuotaMode::Strict),
                    None => (other, QuotaMode::Inclusive),
                };
                let value = rational::from_text(value)
                    .ok_or_else(|| Error::InvalidQuota(other.to_string()))?;
                if value.is_zero() {
                    return Err(Error::InvalidQuota(other.to_string()));
                }
                Ok(QuotaSpec::Fixed(Quota::new(value, mode)?))
            }
        }
    }
}

impl fmt::Display for QuotaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotaSpec::Hare => f.write_str("hare"),
            QuotaSpec::Droop => f.write_str("droop"),
            QuotaSpec::Default => f.write_str("default"),
            QuotaSpec::Fixed(q) => write!(f, "{q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn hare_values() {
        assert_eq!(Quota::hare(9, 3).value(), &int(3));
        assert_eq!(Quota::hare(100, 5).value(), &int(20));
        assert_eq!(Quota::hare(4, 2).value(), &int(2));
        assert!(!Quota::hare(4, 2).is_strict());
    }

    #[test]
    fn droop_is_strict_at_hagenbach_bischoff() {
        let q = Quota::droop(9, 3);
        assert_eq!(q.value(), &ratio(9, 4));
        assert!(q.is_strict());
        assert_eq!(Quota::droop(100, 1).value(), &int(50));
        assert_eq!(Quota::droop(6, 5).value(), &int(1));
    }

    #[test]
    fn default_quota_values() {
        assert_eq!(Quota::default_ear(9, 3, 8).value(), &ratio(7, 3));
        assert_eq!(Quota::default_ear(100, 5, 7).value(), &ratio(401, 24));
        assert_eq!(Quota::default_ear(4, 2, 6).value(), &ratio(10, 7));
        assert_eq!(Quota::default_ear(100, 1, 3).value(), &ratio(201, 4));
    }

    #[test]
    fn support_meets_respects_mode() {
        assert!(!Quota::droop(9, 3).support_meets(&ratio(9, 4)));
        assert!(Quota::droop(100, 1).support_meets(&int(51)));
        assert!(Quota::default_ear(9, 3, 8).support_meets(&ratio(7, 3)));
    }

    #[test]
    fn max_multiple_examples() {
        assert_eq!(Quota::droop(9, 3).max_multiple(&int(6)), 2);
        assert_eq!(Quota::hare(9, 3).max_multiple(&int(3)), 1);
        assert_eq!(Quota::hare(9, 3).max_multiple(&int(0)), 0);
        assert_eq!(Quota::droop(9, 3).max_multiple(&int(0)), 0);
        // Exactly 2·q with a strict quota only buys one seat.
        assert_eq!(Quota::droop(8, 3).max_multiple(&int(4)), 1);
    }

    #[test]
    fn parses_specs() {
        assert_eq!("hare".parse::<QuotaSpec>().unwrap(), QuotaSpec::Hare);
        let QuotaSpec::Fixed(q) = "9/4,strict".parse::<QuotaSpec>().unwrap() else {
            panic!()
        };
        assert_eq!(q, Quota::droop(9, 3));
        assert!("0/3".parse::<QuotaSpec>().is_err());
        assert!("-1/3".parse::<QuotaSpec>().is_err());
        assert!("abc".parse::<QuotaSpec>().is_err());
    }

    #[test]
    fn admissibility() {
        assert!(Quota::hare(9, 3).is_admissible(9, 3));
        assert!(Quota::droop(9, 3).is_admissible(9, 3));
        assert!(Quota::default_ear(9, 3, 8).is_admissible(9, 3));
        assert!(!Quota::inclusive(ratio(9, 4)).unwrap().is_admissible(9, 3));
        assert!(!Quota::inclusive(int(4)).unwrap().is_admissible(9, 3));
        // Too few voters for the default quota to stay below n/k.
        assert!(!Quota::default_ear(1, 3, 3).is_admissible(1, 3));
    }

    #[test]
    fn threshold_order() {
        let droop = Quota::droop(9, 3);
        let default = Quota::default_ear(9, 3, 8);
        let hare = Quota::hare(9, 3);
        assert_eq!(droop.threshold_cmp(&default), Ordering::Less);
        assert_eq!(default.threshold_cmp(&hare), Ordering::Less);
        let incl = Quota::inclusive(ratio(9, 4)).unwrap();
        assert_eq!(incl.threshold_cmp(&droop), Ordering::Less);
    }

    /// Brute-force `max_multiple`: count up while the next multiple still fits.
    fn max_multiple_oracle(total: usize, q: &Quota) -> usize {
        let fits = |l: usize| {
            let need = q.value() * int(l);
            if q.is_strict() {
                int(total) > need
            } else {
                int(total) >= need
            }
        };
        let mut l = 0;
        while fits(l + 1) {
            l += 1;
        }
        l
    }

    #[test]
    fn droop_demand_can_exceed_default_demand_for_larger_multiples() {
        // 94 voters clear 3 Droop quotas (3 · 156/5 = 93.6) but not 3 · q̄ = 94.08.
        let q = Quota::default_ear(156, 4, 4);
        let droop = Quota::droop(156, 4);
        assert_eq!(q.value(), &ratio(784, 25));
        assert_eq!(droop.max_multiple(&int(94)), 3);
        assert_eq!(q.max_multiple(&int(94)), 2);
    }

    proptest! {
        #[test]
        fn default_quota_bounds(n in 1usize..300, k in 1usize..12, extra in 0usize..12) {
            let m = k + extra;
            let q = Quota::default_ear(n, k, m);
            let droop = ratio(n as i64, k as i64 + 1);
            prop_assert!(q.value() > &droop);
            for l in 1..=k {
                prop_assert!(int(l) * q.value() < int(l) * &droop + int(1));
            }
            if n >= k {
                prop_assert!(int(k) * q.value() < int(n));
                prop_assert!(q.is_admissible(n, k));
            }
        }

        #[test]
        fn droop_single_demand_implies_default_demand(n in 1usize..300, k in 1usize..12, extra in 0usize..12, size in 0usize..300) {
            let q = Quota::default_ear(n, k, k + extra);
            let droop = Quota::droop(n, k);
            let size = size.min(n);
            if int(size) > droop.value().clone() {
                prop_assert!(int(size) >= q.value().clone());
            }
            prop_assert!(droop.max_multiple(&int(size)) >= q.max_multiple(&int(size)).min(k));
        }

        #[test]
        fn max_multiple_matches_counting(total in 0usize..40, p in 1i64..30, d in 1i64..10, strict in any::<bool>()) {
            let mode = if strict { QuotaMode::Strict } else { QuotaMode::Inclusive };
            let q = Quota::new(ratio(p, d), mode).unwrap();
            prop_assert_eq!(q.max_multiple(&int(total)), max_multiple_oracle(total, &q));
        }
    }
}
