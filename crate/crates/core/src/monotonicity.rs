//! Candidate-monotonicity checks by exhaustive single-voter reinforcement.
//!
//! A reinforcement of `c` in one ballot moves `c` up — into a better class
//! or into a new class of its own — leaving every pair not involving `c`
//! untouched, never letting `c` lose ground against anyone, and crossing at
//! least one candidate that was weakly above it.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::profile::{Candidate, Committee, Profile, WeakOrder};
use crate::rule::Rule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reinforcement {
    pub voter: usize,
    pub candidate: Candidate,
    pub before: WeakOrder,
    pub after: WeakOrder,
    /// Candidates `d` with `d ≿ c` before and `c ≻ d` after.
    pub crossed: BTreeSet<Candidate>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// A reinforced winner stays a winner.
    Cm,
    /// As CM, for reinforcements that keep every other winner's rank.
    Rrcm,
    /// As CM, for reinforcements that cross no other winner.
    Nccm,
    /// Some original winner stays a winner.
    Wcm,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Cm => "cm",
            Variant::Rrcm => "rrcm",
            Variant::Nccm => "nccm",
            Variant::Wcm => "wcm",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cm" => Ok(Variant::Cm),
            "rrcm" => Ok(Variant::Rrcm),
            "nccm" => Ok(Variant::Nccm),
            "wcm" => Ok(Variant::Wcm),
            other => Err(Error::InvalidConfig(format!(
                "unknown monotonicity variant `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// One reinforcement, or two in paired mode.
    pub reinforcements: Vec<Reinforcement>,
    pub before: Committee,
    pub after: Committee,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoVerdict {
    Holds,
    Violated(Box<Counterexample>),
}

impl MonoVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MonoVerdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            MonoVerdict::Holds => None,
            MonoVerdict::Violated(c) => Some(c),
        }
    }
}

/// Every reinforcement of `c` in `voter`'s ballot, from the highest placement
/// of `c` down.
pub fn enumerate_reinforcements(
    profile: &Profile,
    voter: usize,
    c: Candidate,
) -> Result<Vec<Reinforcement>> {
    if c.index() >= profile.m() {
        return Err(Error::UnknownCandidate(format!("#{}", c.index())));
    }
    let before = profile.voter(voter);
    let m = profile.m();
    let rest: Vec<Vec<Candidate>> = before
        .classes()
        .iter()
        .map(|class| {
            class
                .iter()
                .copied()
                .filter(|&d| d != c)
                .collect::<Vec<_>>()
        })
        .filter(|class| !class.is_empty())
        .collect();

    let mut out = Vec::new();
    for slot in 0..=2 * rest.len() {
        let mut classes = rest.clone();
        let position = slot / 2;
        if slot % 2 == 0 {
            classes.insert(position, vec![c]);
        } else {
            classes[position].push(c);
            classes[position].sort();
        }
        let after = WeakOrder::new(classes, m)?;
        let worsens = profile.candidates().iter().any(|d| {
            d != c
                && ((before.strictly_prefers(c, d) && !after.strictly_prefers(c, d))
                    || (before.weakly_prefers(c, d) && !after.weakly_prefers(c, d)))
        });
        if worsens {
            continue;
        }
        let crossed: BTreeSet<Candidate> = profile
            .candidates()
            .iter()
            .filter(|&d| d != c && before.weakly_prefers(d, c) && after.strictly_prefers(c, d))
            .collect();
        if crossed.is_empty() {
            continue;
        }
        out.push(Reinforcement {
            voter,
            candidate: c,
            before: before.clone(),
            after,
            crossed,
        });
    }
    Ok(out)
}

fn admissible(rule: &Rule, variant: Variant, r: &Reinforcement, w: &Committee) -> bool {
    if rule.requires_strict() && !r.after.is_strict() {
        return false;
    }
    let others = || w.members().iter().copied().filter(|&x| x != r.candidate);
    match variant {
        Variant::Rrcm => others().all(|x| r.before.class_index(x) == r.after.class_index(x)),
        Variant::Nccm => others().all(|x| !r.crossed.contains(&x)),
        Variant::Cm | Variant::Wcm => true,
    }
}

fn violated(variant: Variant, c: Candidate, w: &Committee, after: &Committee) -> bool {
    match variant {
        Variant::Wcm => w.members().is_disjoint(after.members()),
        _ => !after.contains(c),
    }
}

/// Searches winners in election order, voters in index order and
/// reinforcements in enumeration order; the first counterexample wins.
pub fn check_monotonicity(rule: &Rule, profile: &Profile, variant: Variant) -> Result<MonoVerdict> {
    let w = rule.run(profile)?;
    for &c in w.election_order() {
        for voter in 0..profile.n() {
            for r in enumerate_reinforcements(profile, voter, c)? {
                if !admissible(rule, variant, &r, &w) {
                    continue;
                }
                let after = rule.run(&profile.with_voter(voter, r.after.clone()))?;
                if violated(variant, c, &w, &after) {
                    return Ok(MonoVerdict::Violated(Box::new(Counterexample {
                        reinforcements: vec![r],
                        before: w,
                        after,
                    })));
                }
            }
        }
    }
    Ok(MonoVerdict::Holds)
}

/// As [`check_monotonicity`], but reinforcing the same winner in two ballots
/// at once. Voter pairs whose ballots repeat an already searched pair are
/// skipped.
pub fn check_monotonicity_paired(
    rule: &Rule,
    profile: &Profile,
    variant: Variant,
) -> Result<MonoVerdict> {
    let w = rule.run(profile)?;
    for &c in w.election_order() {
        let options: Vec<Vec<Reinforcement>> = (0..profile.n())
            .map(|i| {
                enumerate_reinforcements(profile, i, c).map(|rs| {
                    rs.into_iter()
                        .filter(|r| admissible(rule, variant, r, &w))
                        .collect()
                })
            })
            .collect::<Result<_>>()?;
        let mut seen = HashSet::new();
        for i in 0..profile.n() {
            for j in i + 1..profile.n() {
                if !seen.insert((profile.voter(i), profile.voter(j))) {
                    continue;
                }
                for ri in &options[i] {
                    for rj in &options[j] {
                        let changed = profile
                            .with_voter(i, ri.after.clone())
                            .with_voter(j, rj.after.clone());
                        let after = rule.run(&changed)?;
                        if violated(variant, c, &w, &after) {
                            return Ok(MonoVerdict::Violated(Box::new(Counterexample {
                                reinforcements: vec![ri.clone(), rj.clone()],
                                before: w,
                                after,
                            })));
                        }
                    }
                }
            }
        }
    }
    Ok(MonoVerdict::Holds)
}
