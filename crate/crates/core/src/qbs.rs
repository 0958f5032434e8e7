//! The Quota Borda System on strict complete orders.
//!
//! For growing prefix depths `j`, voters sharing the same top-`j` set form a
//! coalition whose demand is `min(⌊|N′| / q⌋, j)`. Unmet demands are filled
//! with the highest-Borda unelected member of the coalition's set.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::profile::{Candidate, Committee, Profile};
use crate::quota::{Quota, QuotaSpec};
use crate::rational;

/// `Σ_i (m − rank_i(c))` with 1-based ranks.
pub fn borda_score(profile: &Profile, c: Candidate) -> Result<usize> {
    profile.require_strict()?;
    let m = profile.m();
    profile
        .voters()
        .iter()
        .map(|v| v.rank_of(c).map(|r| m - r))
        .sum()
}

pub fn borda_scores(profile: &Profile) -> Result<Vec<usize>> {
    profile
        .candidates()
        .iter()
        .map(|c| borda_score(profile, c))
        .collect()
}

/// Voters grouped by identical top-`j` candidate set; keys are sorted sets.
fn prefix_classes(profile: &Profile, j: usize) -> BTreeMap<Vec<Candidate>, usize> {
    let mut classes = BTreeMap::new();
    for v in profile.voters() {
        let mut top: Vec<Candidate> = v.flatten().take(j).collect();
        top.sort();
        *classes.entry(top).or_insert(0) += 1;
    }
    classes
}

fn unmet<'a>(
    classes: &'a BTreeMap<Vec<Candidate>, usize>,
    quota: &Quota,
    committee: &Committee,
) -> Option<&'a Vec<Candidate>> {
    classes.iter().find_map(|(set, &size)| {
        let demand = quota.max_multiple(&rational::int(size)).min(set.len());
        let met = set.iter().filter(|&&c| committee.contains(c)).count();
        (met < demand).then_some(set)
    })
}

pub fn qbs(profile: &Profile, quota: &QuotaSpec) -> Result<Committee> {
    profile.require_strict()?;
    let (n, k, m) = (profile.n(), profile.k(), profile.m());
    let quota = quota.resolve(n, k, m);
    let borda = borda_scores(profile)?;
    let best = |pool: &mut dyn Iterator<Item = Candidate>| {
        pool.max_by(|a, b| borda[a.index()].cmp(&borda[b.index()]).then(b.cmp(a)))
    };

    let mut committee = Committee::new();
    let mut j = 1;
    'depths: while j < m && committee.len() < k {
        let mut classes = prefix_classes(profile, j);
        while unmet(&classes, &quota, &committee).is_none() {
            j += 1;
            if j >= m {
                break 'depths;
            }
            classes = prefix_classes(profile, j);
        }
        while let Some(set) = unmet(&classes, &quota, &committee) {
            if committee.len() == k {
                break 'depths;
            }
            let c = best(&mut set.iter().copied().filter(|&c| !committee.contains(c)))
                .expect("unmet demand leaves an unelected member");
            committee.push(c);
        }
    }
    // Every demand can be met before k seats are taken; fill any remainder
    // by Borda score.
    while committee.len() < k {
        let c = best(
            &mut profile
                .candidates()
                .iter()
                .filter(|&c| !committee.contains(c)),
        )
        .expect("k <= m");
        committee.push(c);
    }
    Ok(committee)
}
