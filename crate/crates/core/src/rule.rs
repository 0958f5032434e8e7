//! A single handle over the deterministic rules, for code that treats the
//! rule as a parameter (monotonicity search, the CLI).

use std::collections::BTreeSet;
use std::fmt;

use crate::ear::{ear, EarConfig};
use crate::error::Result;
use crate::phragmen::phragmen_first;
use crate::profile::{Candidate, Committee, Profile};
use crate::qbs::qbs;
use crate::quota::QuotaSpec;
use crate::stv::{stv, StvConfig};

/// Committees reachable under different tie resolutions.
pub type Outcomes = BTreeSet<BTreeSet<Candidate>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Ear(EarConfig),
    Stv(StvConfig),
    Qbs(QuotaSpec),
    PhragmenFirst,
}

impl Rule {
    pub fn run(&self, profile: &Profile) -> Result<Committee> {
        match self {
            Rule::Ear(config) => ear(profile, config).map(|(w, _)| w),
            Rule::Stv(config) => stv(profile, config).map(|(w, _)| w),
            Rule::Qbs(quota) => qbs(profile, quota),
            Rule::PhragmenFirst => phragmen_first(profile),
        }
    }

    /// STV and QBS are only defined on linear orders.
    pub fn requires_strict(&self) -> bool {
        matches!(self, Rule::Stv(_) | Rule::Qbs(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ear(_) => "ear",
            Rule::Stv(_) => "stv",
            Rule::Qbs(_) => "qbs",
            Rule::PhragmenFirst => "phragmen1",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
