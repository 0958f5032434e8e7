//! Seeded profile generation and independent oracles for property suites.
//!
//! The generator is `ChaCha8Rng::seed_from_u64(seed)` and consumes only
//! `next_u64`. A draw below `bound` masks a word to the next power of two
//! at or above `bound` and rejects values `>= bound`. Profiles are built
//! voter by voter:
//!
//! - strict: Fisher–Yates over the candidate indices, `i` from `m-1` down
//!   to 1 swapping with `below(i+1)`;
//! - weak: a strict draw, then `r = 1 + below(min(max_classes, m))` classes
//!   cut at the first `r-1` entries of a Fisher–Yates shuffle of `1..m`;
//! - dichotomous: candidate by candidate, approved iff `below(den) < num`;
//!   an empty or full approval set becomes a single class.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::profile::{Candidate, CandidateSet, Profile, WeakOrder};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Culture {
    ImpartialStrict,
    RandomWeak {
        max_classes: usize,
    },
    /// Each candidate approved with probability `numer/denom`.
    Dichotomous {
        numer: u64,
        denom: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ProfileSpec {
    pub culture: Culture,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

pub struct Draws(ChaCha8Rng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Draws(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mask = bound
            .checked_next_power_of_two()
            .map_or(u64::MAX, |p| p - 1);
        loop {
            let x = self.next_u64() & mask;
            if x < bound {
                return x;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// `c01, c02, …`, zero-padded to at least two digits so that name order
/// equals numeric order.
pub fn candidate_names(m: usize) -> Vec<String> {
    let width = m.to_string().len().max(2);
    (1..=m).map(|i| format!("c{i:0width$}")).collect()
}

fn strict(draws: &mut Draws, m: usize) -> Vec<Candidate> {
    let mut order: Vec<Candidate> = (0..m).map(Candidate::from_index).collect();
    draws.shuffle(&mut order);
    order
}

pub fn random_profile(spec: &ProfileSpec) -> Result<Profile> {
    let ProfileSpec {
        culture,
        n,
        m,
        k,
        seed,
    } = *spec;
    let mut draws = Draws::new(seed);
    let mut voters = Vec::with_capacity(n);
    for _ in 0..n {
        let classes: Vec<Vec<Candidate>> = match culture {
            Culture::ImpartialStrict => {
                strict(&mut draws, m).into_iter().map(|c| vec![c]).collect()
            }
            Culture::RandomWeak { max_classes } => {
                if max_classes == 0 {
                    return Err(Error::InvalidConfig("max_classes must be positive".into()));
                }
                let order = strict(&mut draws, m);
                let r = 1 + draws.below(max_classes.min(m) as u64) as usize;
                let mut gaps: Vec<usize> = (1..m).collect();
                draws.shuffle(&mut gaps);
                let mut cuts = gaps[..r - 1].to_vec();
                cuts.sort_unstable();
                cuts.push(m);
                let mut start = 0;
                cuts.into_iter()
                    .map(|end| {
                        let class = order[start..end].to_vec();
                        start = end;
                        class
                    })
                    .collect()
            }
            Culture::Dichotomous { numer, denom } => {
                if denom == 0 || numer > denom {
                    return Err(Error::InvalidConfig(
                        "approval probability must lie in [0, 1]".into(),
                    ));
                }
                let (yes, no): (Vec<Candidate>, Vec<Candidate>) = (0..m)
                    .map(Candidate::from_index)
                    .partition(|_| draws.below(denom) < numer);
                if yes.is_empty() || no.is_empty() {
                    vec![(0..m).map(Candidate::from_index).collect()]
                } else {
                    vec![yes, no]
                }
            }
        };
        let mut classes = classes;
        for class in &mut classes {
            class.sort();
        }
        voters.push(WeakOrder::new(classes, m)?);
    }
    Profile::new(CandidateSet::new(candidate_names(m))?, voters, k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bucklin {
    /// First depth at which some candidate is ranked within the top `depth`
    /// positions by more than half the voters.
    pub depth: usize,
    pub counts: Vec<usize>,
    pub winner: Candidate,
    /// Exactly one candidate has a majority at `depth`.
    pub unique: bool,
}

/// Bucklin winner on a strict profile: the candidate with the largest count
/// at the first majority depth, lexicographically smallest on ties.
pub fn bucklin_winner(profile: &Profile) -> Result<Bucklin> {
    profile.require_strict()?;
    let (n, m) = (profile.n(), profile.m());
    let positions: Vec<Vec<usize>> = profile
        .voters()
        .iter()
        .map(|v| {
            let mut pos = vec![0; m];
            for (p, c) in v.flatten().enumerate() {
                pos[c.index()] = p;
            }
            pos
        })
        .collect();
    for depth in 1..=m {
        let counts: Vec<usize> = (0..m)
            .map(|c| positions.iter().filter(|pos| pos[c] < depth).count())
            .collect();
        let majorities = counts.iter().filter(|&&x| 2 * x > n).count();
        if majorities == 0 {
            continue;
        }
        let best = *counts.iter().max().expect("m >= 1");
        let winner =
            Candidate::from_index(counts.iter().position(|&x| x == best).expect("max exists"));
        return Ok(Bucklin {
            depth,
            counts,
            winner,
            unique: majorities == 1,
        });
    }
    unreachable!("every candidate is ranked by all voters at depth m")
}
