#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use propvote::ballots::parse_ballots;
use propvote::{Candidate, Committee, Profile};

pub fn fixture(name: &str) -> Profile {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_ballots(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn set(profile: &Profile, names: &[&str]) -> BTreeSet<Candidate> {
    profile.candidate_set(names).unwrap()
}

pub fn committee(profile: &Profile, names: &[&str]) -> Committee {
    Committee::from_order(
        names
            .iter()
            .map(|n| profile.candidate(n).unwrap())
            .collect(),
    )
}

pub fn names(profile: &Profile, cs: impl IntoIterator<Item = Candidate>) -> Vec<String> {
    cs.into_iter()
        .map(|c| profile.name(c).to_string())
        .collect()
}

/// All `size`-subsets of the candidates, as committees.
pub fn all_committees(profile: &Profile, size: usize) -> Vec<Committee> {
    let m = profile.m();
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize == size)
        .map(|mask| {
            Committee::from_order(
                (0..m)
                    .filter(|b| mask & 1 << b != 0)
                    .map(Candidate::from_index)
                    .collect(),
            )
        })
        .collect()
}
