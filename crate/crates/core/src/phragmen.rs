//! Phragmén's first method.
//!
//! Every round each voter approves their most preferred class among the
//! unelected candidates. The candidate with the largest weighted approval is
//! elected, and its supporters' total weight drops by the Hare quota (or to
//! zero if they hold less than that).

use std::collections::{BTreeSet, HashSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::profile::{Candidate, Committee, Profile};
use crate::quota::Quota;
use crate::rational::{self, Rational};
use crate::rule::Outcomes;

pub const ALL_OUTCOMES_MAX_M: usize = 12;

struct Round {
    supports: Vec<Rational>,
    approvals: Vec<Vec<Candidate>>,
}

fn tally(profile: &Profile, weights: &[Rational], elected: &BTreeSet<Candidate>) -> Round {
    let mut supports = vec![rational::zero(); profile.m()];
    let mut approvals = Vec::with_capacity(profile.n());
    for (v, w) in profile.voters().iter().zip(weights) {
        let top: Vec<Candidate> = v
            .classes()
            .iter()
            .map(|class| {
                class
                    .iter()
                    .copied()
                    .filter(|c| !elected.contains(c))
                    .collect::<Vec<_>>()
            })
            .find(|class| !class.is_empty())
            .unwrap_or_default();
        for c in &top {
            supports[c.index()] += w;
        }
        approvals.push(top);
    }
    Round {
        supports,
        approvals,
    }
}

fn leaders(round: &Round, elected: &BTreeSet<Candidate>) -> Vec<Candidate> {
    let open = || {
        (0..round.supports.len())
            .map(Candidate::from_index)
            .filter(|c| !elected.contains(c))
    };
    let best = open()
        .map(|c| &round.supports[c.index()])
        .max()
        .expect("k <= m");
    open()
        .filter(|c| &round.supports[c.index()] == best)
        .collect()
}

fn elect(round: &Round, weights: &mut [Rational], c: Candidate, hare: &Quota) {
    let total = round.supports[c.index()].clone();
    let factor = if &total > hare.value() {
        (&total - hare.value()) / &total
    } else {
        rational::zero()
    };
    for (w, approved) in weights.iter_mut().zip(&round.approvals) {
        if approved.contains(&c) && !w.is_zero() {
            *w = &*w * &factor;
        }
    }
}

/// Phragmén's first method with ties broken toward the lexicographically
/// smallest candidate.
pub fn phragmen_first(profile: &Profile) -> Result<Committee> {
    let hare = Quota::hare(profile.n(), profile.k());
    let mut weights = vec![rational::one(); profile.n()];
    let mut committee = Committee::new();
    while committee.len() < profile.k() {
        let round = tally(profile, &weights, committee.members());
        let c = leaders(&round, committee.members())[0];
        elect(&round, &mut weights, c, &hare);
        committee.push(c);
    }
    Ok(committee)
}

/// Every committee reachable under some resolution of the max-support ties.
pub fn phragmen_first_all(profile: &Profile, max_m: usize) -> Result<Outcomes> {
    if profile.m() > max_m {
        return Err(Error::BoundExceeded {
            what: "candidates for tie enumeration (use deterministic tie-breaking)",
            value: profile.m(),
            limit: max_m,
        });
    }
    let hare = Quota::hare(profile.n(), profile.k());
    let mut outcomes = Outcomes::new();
    let mut seen = HashSet::new();
    let mut stack = vec![(vec![rational::one(); profile.n()], BTreeSet::new())];
    while let Some((weights, elected)) = stack.pop() {
        if elected.len() == profile.k() {
            outcomes.insert(elected);
            continue;
        }
        let round = tally(profile, &weights, &elected);
        for c in leaders(&round, &elected) {
            let mut next_weights = weights.clone();
            elect(&round, &mut next_weights, c, &hare);
            let mut next_elected = elected.clone();
            next_elected.insert(c);
            if seen.insert((next_weights.clone(), next_elected.clone())) {
                stack.push((next_weights, next_elected));
            }
        }
    }
    Ok(outcomes)
}
