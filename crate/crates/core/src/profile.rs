//! Candidates, weak-order ballots and preference profiles.
//!
//! Candidates are identified by string labels. A [`CandidateSet`] keeps the
//! labels sorted by byte value, so the numeric order of [`Candidate`] handles
//! coincides with the lexicographic order used for every tie-break.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Handle to a candidate of a [`CandidateSet`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate(u32);

impl Candidate {
    pub fn from_index(index: usize) -> Self {
        Candidate(u32::try_from(index).expect("candidate index overflows u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The candidate labels of an election, sorted by byte value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    names: Vec<String>,
}

impl CandidateSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if let Some(empty) = names.iter().find(|n| n.is_empty()) {
            return Err(Error::UnknownCandidate(empty.clone()));
        }
        names.sort();
        if let Some(pair) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCandidateId(pair[0].clone()));
        }
        if names.is_empty() {
            return Err(Error::NoCandidates);
        }
        Ok(CandidateSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<Candidate> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(Candidate::from_index)
    }

    pub fn lookup(&self, name: &str) -> Result<Candidate> {
        self.get(name)
            .ok_or_else(|| Error::UnknownCandidate(name.to_string()))
    }

    pub fn name(&self, c: Candidate) -> &str {
        &self.names[c.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate> + '_ {
        (0..self.names.len()).map(Candidate::from_index)
    }
}

/// One voter's ranking: ordered, disjoint, nonempty equivalence classes that
/// together cover every candidate.
///
/// Candidates the voter did not list are kept as a final implicit class; the
/// number of classes the voter actually wrote is remembered so the
/// partial-list variant of EAR can refuse to approve the implicit tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakOrder {
    classes: Vec<Vec<Candidate>>,
    explicit: usize,
    class_of: Vec<u32>,
}

impl WeakOrder {
    /// Builds a complete order over `m` candidates from the listed classes.
    pub fn new(listed: Vec<Vec<Candidate>>, m: usize) -> Result<Self> {
        let mut class_of = vec![u32::MAX; m];
        let mut classes = Vec::with_capacity(listed.len() + 1);
        for (idx, mut class) in listed.into_iter().enumerate() {
            if class.is_empty() {
                return Err(Error::EmptyClass);
            }
            class.sort();
            for &c in &class {
                if c.index() >= m {
                    return Err(Error::UnknownCandidate(format!("#{}", c.index())));
                }
                if class_of[c.index()] != u32::MAX {
                    return Err(Error::DuplicateCandidate(format!("#{}", c.index())));
                }
                class_of[c.index()] = idx as u32;
            }
            classes.push(class);
        }
        let explicit = classes.len();
        let tail: Vec<Candidate> = (0..m)
            .filter(|&i| class_of[i] == u32::MAX)
            .map(Candidate::from_index)
            .collect();
        if !tail.is_empty() {
            for &c in &tail {
                class_of[c.index()] = explicit as u32;
            }
            classes.push(tail);
        }
        Ok(WeakOrder {
            classes,
            explicit,
            class_of,
        })
    }

    /// A linear order listing candidates from most to least preferred.
    pub fn strict(order: &[Candidate], m: usize) -> Result<Self> {
        WeakOrder::new(order.iter().map(|&c| vec![c]).collect(), m)
    }

    pub fn classes(&self) -> &[Vec<Candidate>] {
        &self.classes
    }

    /// Number of classes written by the voter (excludes the implicit tail).
    pub fn explicit_classes(&self) -> usize {
        self.explicit
    }

    pub fn has_implicit_tail(&self) -> bool {
        self.explicit < self.classes.len()
    }

    pub fn num_candidates(&self) -> usize {
        self.class_of.len()
    }

    pub fn contains(&self, c: Candidate) -> bool {
        c.index() < self.class_of.len()
    }

    /// 0-based index of the class holding `c`.
    pub fn class_index(&self, c: Candidate) -> usize {
        self.class_of[c.index()] as usize
    }

    /// 1-based rank: `j` such that `c` lies in the `j`-th class.
    pub fn rank_of(&self, c: Candidate) -> Result<usize> {
        if !self.contains(c) {
            return Err(Error::UnknownCandidate(format!("#{}", c.index())));
        }
        Ok(self.class_index(c) + 1)
    }

    pub fn weakly_prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.class_of[a.index()] <= self.class_of[b.index()]
    }

    pub fn strictly_prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.class_of[a.index()] < self.class_of[b.index()]
    }

    /// Candidates in preference order, lexicographic within each class.
    pub fn flatten(&self) -> impl Iterator<Item = Candidate> + '_ {
        self.classes.iter().flatten().copied()
    }

    fn check_position(&self, j: usize) -> Result<()> {
        let m = self.num_candidates();
        if j == 0 || j > m {
            return Err(Error::DepthOutOfRange {
                position: j,
                max: m,
            });
        }
        Ok(())
    }

    /// The `j`-th most preferred candidate under lexicographic tie-breaking.
    pub fn jth_preferred(&self, j: usize) -> Result<Candidate> {
        self.check_position(j)?;
        Ok(self
            .flatten()
            .nth(j - 1)
            .expect("order covers all candidates"))
    }

    /// Candidates approved in a `j`-approval vote: everything weakly preferred
    /// to the `j`-th most preferred candidate. Sorted by candidate.
    pub fn approval_set_at_depth(&self, j: usize) -> Result<Vec<Candidate>> {
        self.check_position(j)?;
        let mut covered = 0;
        let mut out = Vec::new();
        for class in &self.classes {
            if covered >= j {
                break;
            }
            covered += class.len();
            out.extend_from_slice(class);
        }
        out.sort();
        Ok(out)
    }

    /// Smallest `j` whose `j`-approval set contains `c`.
    pub fn approval_depth(&self, c: Candidate) -> usize {
        let class = self.class_index(c);
        1 + self.classes[..class].iter().map(Vec::len).sum::<usize>()
    }

    /// Number of candidates in classes strictly above the class of `c`.
    pub fn strictly_above(&self, c: Candidate) -> usize {
        self.approval_depth(c) - 1
    }

    pub fn is_strict(&self) -> bool {
        self.classes.iter().all(|class| class.len() == 1)
    }
}

/// A multiset of weak-order ballots over a candidate set, with committee size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    candidates: CandidateSet,
    voters: Vec<WeakOrder>,
    k: usize,
}

impl Profile {
    pub fn new(candidates: CandidateSet, voters: Vec<WeakOrder>, k: usize) -> Result<Self> {
        let m = candidates.len();
        if k == 0 || k > m {
            return Err(Error::InvalidCommitteeSize { k, m });
        }
        if voters.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(bad) = voters.iter().find(|v| v.num_candidates() != m) {
            return Err(Error::InvalidConfig(format!(
                "ballot covers {} candidates, profile has {m}",
                bad.num_candidates()
            )));
        }
        Ok(Profile {
            candidates,
            voters,
            k,
        })
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn voters(&self) -> &[WeakOrder] {
        &self.voters
    }

    pub fn voter(&self, i: usize) -> &WeakOrder {
        &self.voters[i]
    }

    pub fn candidate(&self, name: &str) -> Result<Candidate> {
        self.candidates.lookup(name)
    }

    pub fn name(&self, c: Candidate) -> &str {
        self.candidates.name(c)
    }

    /// Resolves a list of labels to a set of candidates.
    pub fn candidate_set(&self, names: &[&str]) -> Result<BTreeSet<Candidate>> {
        names.iter().map(|n| self.candidate(n)).collect()
    }

    pub fn with_k(&self, k: usize) -> Result<Profile> {
        Profile::new(self.candidates.clone(), self.voters.clone(), k)
    }

    /// Copy of the profile with voter `i`'s ballot replaced.
    pub fn with_voter(&self, i: usize, order: WeakOrder) -> Profile {
        let mut out = self.clone();
        out.voters[i] = order;
        out
    }

    pub fn is_strict(&self) -> bool {
        self.voters.iter().all(WeakOrder::is_strict)
    }

    pub fn is_dichotomous(&self) -> bool {
        self.voters.iter().all(|v| v.classes().len() <= 2)
    }

    pub(crate) fn require_strict(&self) -> Result<()> {
        if self.is_strict() {
            Ok(())
        } else {
            Err(Error::NotStrict)
        }
    }
}

/// An elected committee together with the order of election.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Committee {
    members: BTreeSet<Candidate>,
    order: Vec<Candidate>,
}

impl Committee {
    pub fn new() -> Self {
        Committee::default()
    }

    pub fn from_order(order: Vec<Candidate>) -> Self {
        let members = order.iter().copied().collect();
        Committee { members, order }
    }

    pub(crate) fn push(&mut self, c: Candidate) {
        if self.members.insert(c) {
            self.order.push(c);
        }
    }

    pub fn contains(&self, c: Candidate) -> bool {
        self.members.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn members(&self) -> &BTreeSet<Candidate> {
        &self.members
    }

    pub fn election_order(&self) -> &[Candidate] {
        &self.order
    }

    pub fn names<'a>(&self, profile: &'a Profile) -> Vec<&'a str> {
        self.members.iter().map(|&c| profile.name(c)).collect()
    }
}

/// One exact, nonnegative voting weight per voter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights(Vec<Rational>);

impl Weights {
    pub fn ones(n: usize) -> Self {
        Weights(vec![rational::one(); n])
    }

    pub fn from_vec(weights: Vec<Rational>) -> Self {
        Weights(weights)
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub(crate) fn set(&mut self, i: usize, w: Rational) {
        self.0[i] = w;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(rational::zero(), |acc, w| acc + w)
    }

    pub fn total_of(&self, voters: &[usize]) -> Rational {
        voters
            .iter()
            .fold(rational::zero(), |acc, &i| acc + &self.0[i])
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::to_text).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::parse_ballots;
    use proptest::prelude::*;

    fn order(profile: &Profile, i: usize) -> &WeakOrder {
        profile.voter(i)
    }

    #[test]
    fn rank_of_strict_and_tied() {
        let p = parse_ballots("candidates: c1 c2 c3 c4\nk: 1\nc4 > c1 > c2 > c3\n").unwrap();
        let c1 = p.candidate("c1").unwrap();
        assert_eq!(order(&p, 0).rank_of(c1).unwrap(), 2);

        let p = parse_ballots("candidates: a b c\nk: 1\n{a, b} > c\n").unwrap();
        let b = p.candidate("b").unwrap();
        let a = p.candidate("a").unwrap();
        assert_eq!(order(&p, 0).rank_of(b).unwrap(), 1);
        assert_eq!(order(&p, 0).rank_of(a).unwrap(), 1);
    }

    #[test]
    fn rank_of_unknown_candidate_is_error() {
        let p = parse_ballots("candidates: a b\nk: 1\na > b\n").unwrap();
        assert!(order(&p, 0).rank_of(Candidate::from_index(7)).is_err());
    }

    #[test]
    fn jth_preferred_breaks_ties_lexicographically() {
        let p = parse_ballots("candidates: a b c\nk: 1\n{b, a} > c\n").unwrap();
        let v = order(&p, 0);
        let names: Vec<&str> = (1..=3)
            .map(|j| p.name(v.jth_preferred(j).unwrap()))
            .collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(v.jth_preferred(0).is_err());
        assert!(v.jth_preferred(4).is_err());

        let p = parse_ballots("candidates: x y z\nk: 1\n{x, y, z}\n").unwrap();
        assert_eq!(p.name(order(&p, 0).jth_preferred(2).unwrap()), "y");
    }

    #[test]
    fn approval_sets_take_whole_classes() {
        let p = parse_ballots("candidates: a b c\nk: 1\n{a, b} > c\n").unwrap();
        let v = order(&p, 0);
        assert_eq!(v.approval_set_at_depth(1).unwrap().len(), 2);
        assert_eq!(v.approval_set_at_depth(3).unwrap().len(), 3);

        let p =
            parse_ballots("candidates: e1 e2 e3 e4 d1\nk: 1\ne1 > e2 > e3 > e4 > d1\n").unwrap();
        let got: Vec<&str> = order(&p, 0)
            .approval_set_at_depth(2)
            .unwrap()
            .into_iter()
            .map(|c| p.name(c))
            .collect();
        assert_eq!(got, ["e1", "e2"]);
    }

    #[test]
    fn strict_and_dichotomous_flags() {
        let p = parse_ballots("candidates: a b c\nk: 1\n{a, b} > c\n").unwrap();
        assert!(p.is_dichotomous());
        assert!(!p.is_strict());
        let p = parse_ballots("candidates: a b c d\nk: 1\na > {b, c} > d\n").unwrap();
        assert!(!p.is_dichotomous());
        assert!(!p.is_strict());
        // A single omitted candidate becomes a singleton tail class.
        let p = parse_ballots("candidates: a b c\nk: 1\na > b\n").unwrap();
        assert!(p.is_strict());
    }

    #[test]
    fn omitted_candidates_form_the_last_class() {
        let p = parse_ballots("candidates: a b c d\nk: 1\nb\n").unwrap();
        let v = order(&p, 0);
        assert_eq!(v.classes().len(), 2);
        assert_eq!(v.explicit_classes(), 1);
        assert!(v.has_implicit_tail());
        assert_eq!(v.rank_of(p.candidate("d").unwrap()).unwrap(), 2);
    }

    #[test]
    fn candidate_set_rejects_duplicates() {
        assert!(matches!(
            CandidateSet::new(["a", "b", "a"]),
            Err(Error::DuplicateCandidateId(_))
        ));
        assert!(CandidateSet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn profile_rejects_bad_k() {
        let set = CandidateSet::new(["a", "b"]).unwrap();
        let v = WeakOrder::new(vec![], 2).unwrap();
        assert!(Profile::new(set.clone(), vec![v.clone()], 3).is_err());
        assert!(Profile::new(set.clone(), vec![v], 0).is_err());
        assert!(matches!(
            Profile::new(set, vec![], 1),
            Err(Error::EmptyProfile)
        ));
    }

    fn arb_order() -> impl Strategy<Value = WeakOrder> {
        (1usize..7)
            .prop_flat_map(|m| {
                (
                    Just(m),
                    Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
                    proptest::collection::vec(any::<bool>(), m),
                )
            })
            .prop_map(|(m, perm, cuts)| {
                let mut classes: Vec<Vec<Candidate>> = vec![];
                for (pos, &c) in perm.iter().enumerate() {
                    if pos == 0 || cuts[pos] {
                        classes.push(vec![]);
                    }
                    classes.last_mut().unwrap().push(Candidate::from_index(c));
                }
                WeakOrder::new(classes, m).unwrap()
            })
    }

    proptest! {
        #[test]
        fn approval_sets_are_nested_and_large_enough(v in arb_order()) {
            let m = v.num_candidates();
            for j in 1..=m {
                let here = v.approval_set_at_depth(j).unwrap();
                prop_assert!(here.len() >= j);
                prop_assert!(here.contains(&v.jth_preferred(j).unwrap()));
                if j < m {
                    let next = v.approval_set_at_depth(j + 1).unwrap();
                    prop_assert!(here.iter().all(|c| next.contains(c)));
                }
            }
            prop_assert_eq!(v.approval_set_at_depth(m).unwrap().len(), m);
        }

        #[test]
        fn rank_is_constant_on_classes(v in arb_order()) {
            for (idx, class) in v.classes().iter().enumerate() {
                for &c in class {
                    prop_assert_eq!(v.rank_of(c).unwrap(), idx + 1);
                    prop_assert!(v.approval_set_at_depth(v.approval_depth(c)).unwrap().contains(&c));
                    if v.approval_depth(c) > 1 {
                        prop_assert!(!v.approval_set_at_depth(v.approval_depth(c) - 1).unwrap().contains(&c));
                    }
                }
            }
        }

        #[test]
        fn strict_ranks_form_a_permutation(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            let order: Vec<Candidate> = perm.iter().map(|&i| Candidate::from_index(i)).collect();
            let v = WeakOrder::strict(&order, 6).unwrap();
            let mut ranks: Vec<usize> = (0..6).map(|i| v.rank_of(Candidate::from_index(i)).unwrap()).collect();
            ranks.sort();
            prop_assert_eq!(ranks, (1..=6).collect::<Vec<_>>());
        }
    }
}
