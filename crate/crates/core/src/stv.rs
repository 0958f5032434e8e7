//! The q-STV family on strict profiles.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::profile::{Candidate, Committee, Profile, Weights};
use crate::quota::{Quota, QuotaSpec};
use crate::rational::{self, Rational};
use crate::rule::Outcomes;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reweighting {
    /// Each supporter keeps `(T − q)/T` of their weight.
    Fractional,
    /// Exactly `p` units of weight are removed, zeroing supporters in voter
    /// order; the last one touched may be reduced only partially.
    Discrete(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StvConfig {
    pub quota: QuotaSpec,
    pub reweighting: Reweighting,
    pub allow_any_quota: bool,
}

impl Default for StvConfig {
    fn default() -> Self {
        StvConfig {
            quota: QuotaSpec::Droop,
            reweighting: Reweighting::Fractional,
            allow_any_quota: false,
        }
    }
}

impl StvConfig {
    pub fn with_quota(quota: QuotaSpec) -> Self {
        StvConfig {
            quota,
            ..StvConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StvAction {
    Elect(Candidate),
    Eliminate(Candidate),
    BulkElect(Vec<Candidate>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StvRound {
    /// Plurality support of every candidate still in the working profile.
    pub supports: BTreeMap<Candidate, Rational>,
    pub action: StvAction,
    pub weights_after: Weights,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StvTrace {
    pub quota: Quota,
    pub rounds: Vec<StvRound>,
}

/// Default bound on `m` for tie-branch enumeration.
pub const ALL_OUTCOMES_MAX_M: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    active: Vec<bool>,
    weights: Vec<Rational>,
    elected: Vec<Candidate>,
}

struct Run<'a> {
    profile: &'a Profile,
    quota: Quota,
    reweighting: Reweighting,
}

impl<'a> Run<'a> {
    fn new(profile: &'a Profile, config: &StvConfig) -> Result<Self> {
        profile.require_strict()?;
        let quota = config.quota.resolve(profile.n(), profile.k(), profile.m());
        if !config.allow_any_quota {
            quota.check_admissible(profile.n(), profile.k())?;
        }
        if let Reweighting::Discrete(p) = config.reweighting {
            if !quota.support_meets(&rational::int(p)) {
                return Err(Error::InvalidConfig(format!(
                    "discrete reweighting amount {p} is below the quota {quota}"
                )));
            }
        }
        Ok(Run {
            profile,
            quota,
            reweighting: config.reweighting.clone(),
        })
    }

    fn initial(&self) -> State {
        State {
            active: vec![true; self.profile.m()],
            weights: vec![rational::one(); self.profile.n()],
            elected: Vec::new(),
        }
    }

    fn top(&self, state: &State, voter: usize) -> Option<Candidate> {
        self.profile
            .voter(voter)
            .flatten()
            .find(|c| state.active[c.index()])
    }

    fn supports(&self, state: &State) -> BTreeMap<Candidate, Rational> {
        let mut out: BTreeMap<Candidate, Rational> = self
            .profile
            .candidates()
            .iter()
            .filter(|c| state.active[c.index()])
            .map(|c| (c, rational::zero()))
            .collect();
        for (i, w) in state.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if let Some(c) = self.top(state, i) {
                *out.get_mut(&c).expect("active") += w;
            }
        }
        out
    }

    /// Candidate actions for the next round; more than one only when a tie
    /// is branched on.
    fn actions(
        &self,
        state: &State,
        supports: &BTreeMap<Candidate, Rational>,
        branch: bool,
    ) -> Vec<StvAction> {
        if state.elected.len() + supports.len() == self.profile.k() {
            return vec![StvAction::BulkElect(supports.keys().copied().collect())];
        }
        let electable: Vec<Candidate> = supports
            .iter()
            .filter(|(_, s)| self.quota.support_meets(s))
            .map(|(&c, _)| c)
            .collect();
        if !electable.is_empty() {
            let take = if branch { electable.len() } else { 1 };
            return electable
                .into_iter()
                .take(take)
                .map(StvAction::Elect)
                .collect();
        }
        let lowest = supports.values().min().expect("working profile nonempty");
        let tied = supports
            .iter()
            .filter(|(_, s)| *s == lowest)
            .map(|(&c, _)| c);
        let take = if branch { usize::MAX } else { 1 };
        tied.take(take).map(StvAction::Eliminate).collect()
    }

    fn apply(&self, state: &State, action: &StvAction) -> State {
        let mut next = state.clone();
        match action {
            StvAction::BulkElect(rest) => {
                for &c in rest {
                    next.active[c.index()] = false;
                    next.elected.push(c);
                }
            }
            StvAction::Eliminate(c) => next.active[c.index()] = false,
            StvAction::Elect(c) => {
                let supporters: Vec<usize> = (0..self.profile.n())
                    .filter(|&i| self.top(state, i) == Some(*c))
                    .collect();
                self.reweight(&mut next.weights, &supporters);
                next.active[c.index()] = false;
                next.elected.push(*c);
            }
        }
        next
    }

    fn reweight(&self, weights: &mut [Rational], supporters: &[usize]) {
        let total = supporters
            .iter()
            .fold(rational::zero(), |acc, &i| acc + &weights[i]);
        match self.reweighting {
            Reweighting::Fractional => {
                let factor = (&total - self.quota.value()) / &total;
                for &i in supporters {
                    weights[i] = &weights[i] * &factor;
                }
            }
            Reweighting::Discrete(p) => {
                let mut remaining = std::cmp::min(rational::int(p), total);
                for &i in supporters {
                    if remaining.is_zero() {
                        break;
                    }
                    let take = std::cmp::min(weights[i].clone(), remaining.clone());
                    weights[i] -= &take;
                    remaining -= take;
                }
            }
        }
    }

    fn done(&self, state: &State) -> bool {
        state.elected.len() >= self.profile.k()
    }
}

/// Runs q-STV with lexicographic tie-breaking for both elections and
/// eliminations.
pub fn stv(profile: &Profile, config: &StvConfig) -> Result<(Committee, StvTrace)> {
    let run = Run::new(profile, config)?;
    let mut state = run.initial();
    let mut rounds = Vec::new();
    while !run.done(&state) {
        let supports = run.supports(&state);
        let action = run.actions(&state, &supports, false).remove(0);
        state = run.apply(&state, &action);
        rounds.push(StvRound {
            supports,
            action,
            weights_after: Weights::from_vec(state.weights.clone()),
        });
    }
    Ok((
        Committee::from_order(state.elected),
        StvTrace {
            quota: run.quota,
            rounds,
        },
    ))
}

/// Every committee reachable under some resolution of the election and
/// elimination ties met along the way.
pub fn stv_all_outcomes(profile: &Profile, config: &StvConfig, max_m: usize) -> Result<Outcomes> {
    if profile.m() > max_m {
        return Err(Error::BoundExceeded {
            what: "candidates for tie enumeration (use deterministic tie-breaking)",
            value: profile.m(),
            limit: max_m,
        });
    }
    let run = Run::new(profile, config)?;
    let mut outcomes = BTreeSet::new();
    let mut seen = HashSet::new();
    let mut stack = vec![run.initial()];
    while let Some(state) = stack.pop() {
        if run.done(&state) {
            outcomes.insert(state.elected.iter().copied().collect());
            continue;
        }
        let supports = run.supports(&state);
        for action in run.actions(&state, &supports, true) {
            let next = run.apply(&state, &action);
            let mut key = next.clone();
            key.elected.sort();
            if seen.insert(key) {
                stack.push(next);
            }
        }
    }
    Ok(outcomes)
}
