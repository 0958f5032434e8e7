//! Proportionality axiom testers.
//!
//! The strict testers only look at maximal prefix coalitions, which is
//! polynomial. The generalised testers are brute force: for every candidate
//! set `C′` and every `T ⊆ W`, the largest sub-coalition of `N′` whose
//! qualifying winners all lie in `T` is the one to test, so the check is
//! exact without enumerating voter subsets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{Candidate, Committee, Profile};
use crate::quota::Quota;
use crate::rational;

pub const GENERALISED_MAX_M: usize = 20;
pub const PJR_MAX_N: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolidCoalition {
    pub supported: BTreeSet<Candidate>,
    pub voters: Vec<usize>,
    pub generalised: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub coalition: SolidCoalition,
    /// The demand the coalition is entitled to, `min(ℓ, |C′|)`.
    pub ell: usize,
    /// Winners counting toward the demand.
    pub represented: BTreeSet<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Psc,
    WeakPsc,
    GeneralisedPsc,
    GeneralisedWeakPsc,
    Pjr,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Psc => "psc",
            Axiom::WeakPsc => "weak-psc",
            Axiom::GeneralisedPsc => "gpsc",
            Axiom::GeneralisedWeakPsc => "weak-gpsc",
            Axiom::Pjr => "pjr",
        })
    }
}

/// Runs one tester; `quota` is ignored by PJR.
pub fn check(axiom: Axiom, profile: &Profile, w: &Committee, quota: &Quota) -> Result<Verdict> {
    match axiom {
        Axiom::Psc => check_psc(profile, w, quota),
        Axiom::WeakPsc => check_weak_psc(profile, w, quota),
        Axiom::GeneralisedPsc => check_generalised_psc(profile, w, quota, GENERALISED_MAX_M),
        Axiom::GeneralisedWeakPsc => {
            check_generalised_weak_psc(profile, w, quota, GENERALISED_MAX_M)
        }
        Axiom::Pjr => check_pjr(profile, w, PJR_MAX_N),
    }
}

fn require_size(profile: &Profile, w: &Committee) -> Result<()> {
    if w.len() != profile.k() {
        return Err(Error::CommitteeSize {
            k: profile.k(),
            got: w.len(),
        });
    }
    Ok(())
}

/// Every distinct top-`j` set of some voter, paired with all voters whose
/// top-`j` set equals it. Sorted by size, then by set.
pub fn maximal_solid_coalitions(profile: &Profile) -> Result<Vec<SolidCoalition>> {
    profile.require_strict()?;
    let mut records: BTreeMap<(usize, Vec<Candidate>), Vec<usize>> = BTreeMap::new();
    for (i, v) in profile.voters().iter().enumerate() {
        let order: Vec<Candidate> = v.flatten().collect();
        for j in 1..=order.len() {
            let mut prefix = order[..j].to_vec();
            prefix.sort();
            records.entry((j, prefix)).or_default().push(i);
        }
    }
    Ok(records
        .into_iter()
        .map(|((_, set), voters)| SolidCoalition {
            supported: set.into_iter().collect(),
            voters,
            generalised: false,
        })
        .collect())
}

fn strict_check(profile: &Profile, w: &Committee, quota: &Quota, weak: bool) -> Result<Verdict> {
    require_size(profile, w)?;
    for record in maximal_solid_coalitions(profile)? {
        let ell = quota.max_multiple(&rational::int(record.voters.len()));
        let size = record.supported.len();
        let represented: BTreeSet<Candidate> = record
            .supported
            .iter()
            .copied()
            .filter(|&c| w.contains(c))
            .collect();
        let violated = if weak {
            ell >= size && represented.len() < size
        } else {
            represented.len() < ell.min(size)
        };
        if violated {
            return Ok(Verdict::Violated(Witness {
                ell: ell.min(size),
                coalition: record,
                represented,
            }));
        }
    }
    Ok(Verdict::Holds)
}

pub fn check_psc(profile: &Profile, w: &Committee, quota: &Quota) -> Result<Verdict> {
    strict_check(profile, w, quota, false)
}

pub fn check_weak_psc(profile: &Profile, w: &Committee, quota: &Quota) -> Result<Verdict> {
    strict_check(profile, w, quota, true)
}

/// Voters weakly preferring every member of `supported` to every other
/// candidate.
pub fn maximal_generalised_coalition(
    profile: &Profile,
    supported: &BTreeSet<Candidate>,
) -> Vec<usize> {
    profile
        .voters()
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            let worst_inside = supported.iter().map(|&c| v.class_index(c)).max();
            let best_outside = profile
                .candidates()
                .iter()
                .filter(|c| !supported.contains(c))
                .map(|c| v.class_index(c))
                .min();
            match (worst_inside, best_outside) {
                (Some(a), Some(b)) => a <= b,
                _ => true,
            }
        })
        .map(|(i, _)| i)
        .collect()
}

/// Lexicographic `size`-subsets of `0..m`, as index vectors.
fn combinations(m: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (size <= m).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = size;
        current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < m - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                break Some(next);
            }
        };
        Some(out)
    })
}

fn generalised_check(
    profile: &Profile,
    w: &Committee,
    quota: &Quota,
    max_m: usize,
    weak: bool,
) -> Result<Verdict> {
    require_size(profile, w)?;
    let m = profile.m();
    if m > max_m {
        return Err(Error::BoundExceeded {
            what: "candidates for generalised PSC",
            value: m,
            limit: max_m,
        });
    }
    let winners: Vec<Candidate> = w.members().iter().copied().collect();
    for size in 1..=m {
        for combo in combinations(m, size) {
            let supported: BTreeSet<Candidate> =
                combo.into_iter().map(Candidate::from_index).collect();
            let coalition = maximal_generalised_coalition(profile, &supported);
            if coalition.is_empty() {
                continue;
            }
            // Winners each member ranks at least as high as their
            // |C′|-th candidate, as a bitmask over `winners`.
            let masks: Vec<u32> = coalition
                .iter()
                .map(|&i| {
                    let approved = profile
                        .voter(i)
                        .approval_set_at_depth(size)
                        .expect("size <= m");
                    winners
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| approved.binary_search(c).is_ok())
                        .fold(0u32, |acc, (b, _)| acc | 1 << b)
                })
                .collect();
            for t in 0u32..1 << winners.len() {
                let bound = t.count_ones() as usize;
                if bound >= size {
                    continue;
                }
                let members: Vec<usize> = (0..coalition.len())
                    .filter(|&x| masks[x] & !t == 0)
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let ell = quota.max_multiple(&rational::int(members.len()));
                let violated = if weak {
                    ell >= size
                } else {
                    bound < ell.min(size)
                };
                if violated {
                    let union = members.iter().fold(0u32, |acc, &x| acc | masks[x]);
                    let represented = winners
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| union & 1 << b != 0)
                        .map(|(_, &c)| c)
                        .collect();
                    return Ok(Verdict::Violated(Witness {
                        coalition: SolidCoalition {
                            supported,
                            voters: members.into_iter().map(|x| coalition[x]).collect(),
                            generalised: true,
                        },
                        ell: ell.min(size),
                        represented,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

pub fn check_generalised_psc(
    profile: &Profile,
    w: &Committee,
    quota: &Quota,
    max_m: usize,
) -> Result<Verdict> {
    generalised_check(profile, w, quota, max_m, false)
}

pub fn check_generalised_weak_psc(
    profile: &Profile,
    w: &Committee,
    quota: &Quota,
    max_m: usize,
) -> Result<Verdict> {
    generalised_check(profile, w, quota, max_m, true)
}

/// Proportional justified representation on dichotomous profiles, by brute
/// force over voter subsets in Gray-code order. Voters indifferent between
/// all candidates never join a violating group.
pub fn check_pjr(profile: &Profile, w: &Committee, max_n: usize) -> Result<Verdict> {
    if !profile.is_dichotomous() {
        return Err(Error::NotDichotomous);
    }
    require_size(profile, w)?;
    let (n, k, m) = (profile.n(), profile.k(), profile.m());
    if n > max_n {
        return Err(Error::BoundExceeded {
            what: "voters for PJR",
            value: n,
            limit: max_n,
        });
    }
    let eligible: Vec<usize> = (0..n)
        .filter(|&i| profile.voter(i).classes().len() >= 2)
        .collect();
    let approvals: Vec<&[Candidate]> = eligible
        .iter()
        .map(|&i| profile.voter(i).classes()[0].as_slice())
        .collect();
    let mut counts = vec![0usize; m];
    let mut inside = vec![false; eligible.len()];
    let mut size = 0usize;
    for step in 1u64..1 << eligible.len() {
        let flip = step.trailing_zeros() as usize;
        let delta: isize = if inside[flip] { -1 } else { 1 };
        inside[flip] = !inside[flip];
        size = (size as isize + delta) as usize;
        for c in approvals[flip] {
            counts[c.index()] = (counts[c.index()] as isize + delta) as usize;
        }
        // Largest ℓ with |N*| ≥ ℓ·n/k and |∩ A_i| ≥ ℓ.
        let common = counts.iter().filter(|&&x| x == size).count();
        let ell = (size * k / n).min(common);
        let covered = w.members().iter().filter(|c| counts[c.index()] > 0).count();
        if covered < ell {
            let voters: Vec<usize> = (0..eligible.len())
                .filter(|&x| inside[x])
                .map(|x| eligible[x])
                .collect();
            let supported = (0..m)
                .filter(|&c| counts[c] == size)
                .map(Candidate::from_index)
                .collect();
            let represented = w
                .members()
                .iter()
                .copied()
                .filter(|c| counts[c.index()] > 0)
                .collect();
            return Ok(Verdict::Violated(Witness {
                coalition: SolidCoalition {
                    supported,
                    voters,
                    generalised: true,
                },
                ell,
                represented,
            }));
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breach {
    pub premise: String,
    pub conclusion: String,
}

/// Outcomes of every applicable tester at the Droop, default and Hare
/// quotas, plus any violated implication between them. A breach means a
/// tester bug or a false implication.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImplicationReport {
    pub evaluated: BTreeMap<String, bool>,
    pub breaches: Vec<Breach>,
}

pub fn check_implications(profile: &Profile, w: &Committee) -> Result<ImplicationReport> {
    let (n, k, m) = (profile.n(), profile.k(), profile.m());
    let mut quotas = vec![
        ("droop", Quota::droop(n, k)),
        ("default", Quota::default_ear(n, k, m)),
        ("hare", Quota::hare(n, k)),
    ];
    quotas.sort_by(|a, b| a.1.threshold_cmp(&b.1));

    let mut axioms = Vec::new();
    if m <= GENERALISED_MAX_M {
        axioms.extend([Axiom::GeneralisedPsc, Axiom::GeneralisedWeakPsc]);
    }
    if profile.is_strict() {
        axioms.extend([Axiom::Psc, Axiom::WeakPsc]);
    }

    let mut report = ImplicationReport::default();
    let key = |a: Axiom, q: &str| format!("{a}@{q}");
    for &(name, ref q) in &quotas {
        for &a in &axioms {
            report
                .evaluated
                .insert(key(a, name), check(a, profile, w, q)?.holds());
        }
    }
    let pjr = profile.is_dichotomous() && n <= PJR_MAX_N;
    if pjr {
        report.evaluated.insert(
            Axiom::Pjr.to_string(),
            check_pjr(profile, w, PJR_MAX_N)?.holds(),
        );
    }

    let mut implies = |p: String, c: String| {
        if report.evaluated[&p] && !report.evaluated[&c] {
            report.breaches.push(Breach {
                premise: p,
                conclusion: c,
            });
        }
    };
    for (idx, &(name, _)) in quotas.iter().enumerate() {
        let pairs = [
            (Axiom::GeneralisedPsc, Axiom::GeneralisedWeakPsc),
            (Axiom::Psc, Axiom::WeakPsc),
            (Axiom::Psc, Axiom::GeneralisedPsc),
            (Axiom::GeneralisedPsc, Axiom::Psc),
            (Axiom::WeakPsc, Axiom::GeneralisedWeakPsc),
            (Axiom::GeneralisedWeakPsc, Axiom::WeakPsc),
        ];
        for (a, b) in pairs {
            if axioms.contains(&a) && axioms.contains(&b) {
                implies(key(a, name), key(b, name));
            }
        }
        for &(larger, _) in &quotas[idx + 1..] {
            for &a in &axioms {
                implies(key(a, name), key(a, larger));
            }
        }
    }
    if pjr && axioms.contains(&Axiom::GeneralisedPsc) {
        let hare = |a: Axiom| key(a, "hare");
        implies(Axiom::Pjr.to_string(), hare(Axiom::GeneralisedPsc));
        implies(hare(Axiom::GeneralisedPsc), Axiom::Pjr.to_string());
        implies(Axiom::Pjr.to_string(), hare(Axiom::GeneralisedWeakPsc));
        implies(hare(Axiom::GeneralisedWeakPsc), Axiom::Pjr.to_string());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::parse_ballots;

    fn committee(p: &Profile, names: &[&str]) -> Committee {
        Committee::from_order(names.iter().map(|n| p.candidate(n).unwrap()).collect())
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = combinations(4, 2).collect();
        assert_eq!(all, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn identical_ballots_give_one_record_per_prefix() {
        let p = parse_ballots("candidates: a b c\nk: 1\n3: b > c > a\n").unwrap();
        let records = maximal_solid_coalitions(&p).unwrap();
        assert_eq!(records.len(), 3);
        assert!(records.iter().all(|r| r.voters == [0, 1, 2]));
    }

    #[test]
    fn full_committee_satisfies_everything() {
        let p = parse_ballots("candidates: a b c\nk: 3\na > b > c\nc > a > b\n").unwrap();
        let w = committee(&p, &["a", "b", "c"]);
        for q in [Quota::droop(2, 3), Quota::hare(2, 3)] {
            assert!(check_psc(&p, &w, &q).unwrap().holds());
            assert!(check_weak_psc(&p, &w, &q).unwrap().holds());
            assert!(check_generalised_psc(&p, &w, &q, 20).unwrap().holds());
        }
    }

    #[test]
    fn psc_violation_reports_maximal_coalition() {
        let p = parse_ballots("candidates: x y z\nk: 1\n3: x > y > z\n").unwrap();
        let v = check_psc(&p, &committee(&p, &["y"]), &Quota::droop(3, 1)).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.ell, 1);
        assert_eq!(w.coalition.supported, p.candidate_set(&["x"]).unwrap());
        assert_eq!(w.coalition.voters, [0, 1, 2]);
        assert!(w.represented.is_empty());
    }

    #[test]
    fn committee_size_is_checked() {
        let p = parse_ballots("candidates: x y z\nk: 2\nx > y > z\n").unwrap();
        assert!(matches!(
            check_psc(&p, &committee(&p, &["x"]), &Quota::hare(1, 2)),
            Err(Error::CommitteeSize { .. })
        ));
    }

    #[test]
    fn generalised_coalition_includes_indifferent_voters() {
        let p =
            parse_ballots("candidates: a b c\nk: 1\n{a, b, c}\na > b > c\nb > a > c\n").unwrap();
        let a = p.candidate_set(&["a"]).unwrap();
        assert_eq!(maximal_generalised_coalition(&p, &a), [0, 1]);
        let all = p.candidate_set(&["a", "b", "c"]).unwrap();
        assert_eq!(maximal_generalised_coalition(&p, &all), [0, 1, 2]);
    }

    #[test]
    fn generalised_check_finds_sub_coalition_violation() {
        // The indifferent voter makes every winner qualify for the maximal
        // coalition behind {a}, but the two a-first voters alone still
        // exceed the Droop quota and get nothing.
        let p = parse_ballots("candidates: a b\nk: 1\n{a, b}\n2: a > b\n").unwrap();
        let w = committee(&p, &["b"]);
        let v = check_generalised_psc(&p, &w, &Quota::droop(3, 1), 20).unwrap();
        let witness = v.witness().unwrap();
        assert_eq!(witness.coalition.voters, [1, 2]);
        assert_eq!(witness.ell, 1);
        assert!(witness.represented.is_empty());
        assert!(
            check_generalised_psc(&p, &committee(&p, &["a"]), &Quota::droop(3, 1), 20)
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn pjr_trivial_cases() {
        let p = parse_ballots("candidates: x y\nk: 1\n3: x > y\n").unwrap();
        assert!(check_pjr(&p, &committee(&p, &["x"]), 20).unwrap().holds());
        let v = check_pjr(&p, &committee(&p, &["y"]), 20).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.ell, 1);
        assert_eq!(w.coalition.voters, [0, 1, 2]);
    }

    #[test]
    fn pjr_ignores_fully_indifferent_voters() {
        let p = parse_ballots("candidates: x y\nk: 1\n{x, y}\nx > y\n").unwrap();
        assert!(check_pjr(&p, &committee(&p, &["x"]), 20).unwrap().holds());
        // One of two voters cannot claim a seat alone when n/k = 2.
        assert!(check_pjr(&p, &committee(&p, &["y"]), 20).unwrap().holds());
    }

    #[test]
    fn pjr_rejects_non_dichotomous() {
        let p = parse_ballots("candidates: x y z\nk: 1\nx > y > z\n").unwrap();
        assert!(matches!(
            check_pjr(&p, &committee(&p, &["x"]), 20),
            Err(Error::NotDichotomous)
        ));
    }

    #[test]
    fn implications_have_no_breaches_on_small_examples() {
        let p = parse_ballots("candidates: a b c d\nk: 2\n3: a > b > c > d\n2: c > d > a > b\n")
            .unwrap();
        for names in [["a", "b"], ["a", "c"], ["c", "d"]] {
            let report = check_implications(&p, &committee(&p, &names)).unwrap();
            assert!(report.breaches.is_empty(), "{:?}", report.breaches);
            assert_eq!(report.evaluated.len(), 12);
        }
    }
}
