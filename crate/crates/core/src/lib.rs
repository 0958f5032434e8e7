//! Proportional multiwinner voting over weak orders: EAR, STV, QBS and
//! Phragmén-style rules, solid-coalition axiom checkers, and
//! committee-monotonicity analysis.

pub mod axioms;
pub mod ballots;
pub mod ear;
pub mod error;
pub mod monotonicity;
pub mod phragmen;
pub mod profile;
pub mod qbs;
pub mod quota;
pub mod rational;
pub mod report;
pub mod rule;
pub mod stv;
pub mod testkit;

pub use error::{Error, Result};
pub use profile::{Candidate, CandidateSet, Committee, Profile, WeakOrder, Weights};
pub use quota::{Quota, QuotaMode, QuotaSpec};
pub use rational::Rational;
pub use rule::{Outcomes, Rule};
