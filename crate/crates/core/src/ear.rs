//! The Expanding Approvals Rule.
//!
//! Voters start with unit weight. Each round runs `j`-approval votes with
//! the current weights, increasing `j` until some unelected candidate's
//! weighted support meets the quota. The highest-priority such candidate is
//! elected and the weight of its `j`-approval supporters drops by exactly the
//! quota. `j` never decreases between rounds.

use std::collections::HashMap;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::profile::{Candidate, Committee, Profile, Weights};
use crate::quota::{Quota, QuotaSpec};
use crate::rational::{self, Rational};

/// Candidate priority `L` used to pick among quota-reaching candidates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Priority {
    /// Lexicographically best rank vector first, computed once from the
    /// initial ballots.
    #[default]
    RankMaximal,
    /// An explicit order, most preferred first.
    Given(Vec<Candidate>),
    /// Highest weighted support first; rank-maximal order breaks ties.
    MaxSupport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarConfig {
    pub quota: QuotaSpec,
    pub priority: Priority,
    /// Never approve a voter's unlisted candidates; if the quota can no
    /// longer be reached, fill remaining seats in priority order.
    pub partial_list: bool,
    /// Accept quotas outside `(n/(k+1), n/k]`.
    pub allow_any_quota: bool,
}

impl Default for EarConfig {
    fn default() -> Self {
        EarConfig {
            quota: QuotaSpec::Default,
            priority: Priority::RankMaximal,
            partial_list: false,
            allow_any_quota: false,
        }
    }
}

impl EarConfig {
    pub fn with_quota(quota: QuotaSpec) -> Self {
        EarConfig {
            quota,
            ..EarConfig::default()
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EarStep {
    /// Elected by reaching the quota at the recorded depth.
    Quota,
    /// Seat filled by priority after the quota became unreachable.
    Fill,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarRound {
    pub depth: usize,
    /// Weighted `depth`-approval support, indexed by candidate.
    pub supports: Vec<Rational>,
    pub elected: Candidate,
    pub step: EarStep,
    pub weights_after: Weights,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarTrace {
    pub quota: Quota,
    pub priority: Vec<Candidate>,
    pub rounds: Vec<EarRound>,
}

/// Per-candidate count of voters placing it in each equivalence class.
pub fn rank_vector(profile: &Profile, c: Candidate) -> Vec<usize> {
    let mut counts = vec![0; profile.m()];
    for v in profile.voters() {
        counts[v.class_index(c)] += 1;
    }
    counts
}

/// Candidates sorted by lexicographically larger rank vector; ties go to the
/// lexicographically smaller id.
pub fn rank_maximal_order(profile: &Profile) -> Vec<Candidate> {
    let vectors: Vec<Vec<usize>> = profile
        .candidates()
        .iter()
        .map(|c| rank_vector(profile, c))
        .collect();
    let mut order: Vec<Candidate> = profile.candidates().iter().collect();
    order.sort_by(|a, b| vectors[b.index()].cmp(&vectors[a.index()]).then(a.cmp(b)));
    order
}

/// Scales each supporter by `(T − q)/T`, removing exactly `q` of weight.
pub fn reweight_supporters(weights: &Weights, supporters: &[usize], q: &Quota) -> Result<Weights> {
    let total = weights.total_of(supporters);
    if !q.support_meets(&total) {
        return Err(Error::BelowQuota {
            support: rational::to_text(&total),
            quota: q.to_string(),
        });
    }
    let factor = (&total - q.value()) / &total;
    let mut out = weights.clone();
    for &i in supporters {
        out.set(i, weights.get(i) * &factor);
    }
    Ok(out)
}

const NEVER: u32 = u32::MAX;

/// Incremental weighted `j`-approval tally.
///
/// Voters sharing a weight are pooled into one class. Class weights are kept
/// as integer numerators over one shared denominator: exact weights grow to
/// thousands of bits within a few rounds, and summing integers avoids a gcd
/// per addition.
pub(crate) struct ApprovalTally {
    m: usize,
    depth_of: Vec<Vec<u32>>,
    by_depth: Vec<Vec<(u32, u32)>>,
    class_of: Vec<usize>,
    class_numer: Vec<BigInt>,
    class_size: Vec<usize>,
    denom: BigInt,
    counts: Vec<Vec<u32>>,
    depth: usize,
}

impl ApprovalTally {
    pub(crate) fn new(profile: &Profile, partial_list: bool) -> Self {
        let m = profile.m();
        let n = profile.n();
        let mut depth_of = Vec::with_capacity(n);
        let mut by_depth = vec![Vec::new(); m];
        for (i, v) in profile.voters().iter().enumerate() {
            let mut row = vec![NEVER; m];
            for (idx, class) in v.classes().iter().enumerate() {
                if partial_list && idx >= v.explicit_classes() {
                    break;
                }
                for &c in class {
                    let d = v.approval_depth(c);
                    row[c.index()] = d as u32;
                    by_depth[d - 1].push((i as u32, c.index() as u32));
                }
            }
            depth_of.push(row);
        }
        ApprovalTally {
            m,
            depth_of,
            by_depth,
            class_of: vec![0; n],
            class_numer: vec![BigInt::one()],
            class_size: vec![n],
            denom: BigInt::one(),
            counts: vec![vec![0; m]],
            depth: 0,
        }
    }

    pub(crate) fn depth(&self) -> usize {
        self.depth
    }

    pub(crate) fn advance(&mut self) {
        self.depth += 1;
        for &(i, c) in &self.by_depth[self.depth - 1] {
            self.counts[self.class_of[i as usize]][c as usize] += 1;
        }
    }

    pub(crate) fn approves(&self, voter: usize, c: Candidate) -> bool {
        self.depth_of[voter][c.index()] as usize <= self.depth
    }

    pub(crate) fn supports(&self) -> Vec<Rational> {
        let mut sums = vec![BigInt::zero(); self.m];
        for (class, numer) in self.class_numer.iter().enumerate() {
            if numer.is_zero() {
                continue;
            }
            for (c, &count) in self.counts[class].iter().enumerate() {
                if count > 0 {
                    sums[c] += numer * BigInt::from(count);
                }
            }
        }
        sums.into_iter()
            .map(|s| Rational::new(s, self.denom.clone()))
            .collect()
    }

    /// Removes `amount` of weight from the current supporters of `c`,
    /// scaling each by `(T − amount)/T`. Returns the supporters' total `T`.
    pub(crate) fn reweight(&mut self, c: Candidate, amount: &Rational) -> Rational {
        let supporters: Vec<usize> = (0..self.class_of.len())
            .filter(|&i| self.approves(i, c))
            .collect();
        let mut moving = vec![0usize; self.class_numer.len()];
        for &i in &supporters {
            moving[self.class_of[i]] += 1;
        }
        let total_numer: BigInt = moving
            .iter()
            .zip(&self.class_numer)
            .filter(|(&k, _)| k > 0)
            .map(|(&k, numer)| numer * BigInt::from(k))
            .sum();
        let total = Rational::new(total_numer, self.denom.clone());
        debug_assert!(&total >= amount);
        let factor = if total.is_positive() {
            (&total - amount) / &total
        } else {
            rational::zero()
        };
        let (a, b) = (factor.numer(), factor.denom());

        // Bystanders keep their weight over the new denominator `denom·b`;
        // supporters move to a sibling class scaled by `a`.
        let classes = self.class_numer.len();
        let mut numer: Vec<BigInt> = self.class_numer.iter().map(|x| x * b).collect();
        let mut sibling = vec![usize::MAX; classes];
        for old in 0..classes {
            if moving[old] > 0 {
                sibling[old] = numer.len();
                numer.push(&self.class_numer[old] * a);
            }
        }
        let mut size = self.class_size.clone();
        size.resize(numer.len(), 0);
        let mut counts = std::mem::take(&mut self.counts);
        counts.resize(numer.len(), vec![0; self.m]);
        for &i in &supporters {
            let (old, new) = (self.class_of[i], sibling[self.class_of[i]]);
            for (cand, &d) in self.depth_of[i].iter().enumerate() {
                if d as usize <= self.depth {
                    counts[old][cand] -= 1;
                    counts[new][cand] += 1;
                }
            }
            size[old] -= 1;
            size[new] += 1;
            self.class_of[i] = new;
        }
        let mut denom = &self.denom * b;
        let g = numer.iter().fold(denom.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            denom /= &g;
            for x in &mut numer {
                *x /= &g;
            }
        }

        // Merge classes that now share a weight and drop empty ones.
        let mut lookup: HashMap<BigInt, usize> = HashMap::new();
        let mut remap = vec![usize::MAX; numer.len()];
        self.class_numer.clear();
        self.class_size.clear();
        self.counts.clear();
        for (idx, x) in numer.into_iter().enumerate() {
            if size[idx] == 0 {
                continue;
            }
            match lookup.get(&x) {
                Some(&to) => {
                    remap[idx] = to;
                    self.class_size[to] += size[idx];
                    for (dst, src) in self.counts[to].iter_mut().zip(&counts[idx]) {
                        *dst += src;
                    }
                }
                None => {
                    let to = self.class_numer.len();
                    remap[idx] = to;
                    lookup.insert(x.clone(), to);
                    self.class_numer.push(x);
                    self.class_size.push(size[idx]);
                    self.counts.push(std::mem::take(&mut counts[idx]));
                }
            }
        }
        for g in &mut self.class_of {
            *g = remap[*g];
        }
        self.denom = denom;
        total
    }

    pub(crate) fn weights(&self) -> Weights {
        let per_class: Vec<Rational> = self
            .class_numer
            .iter()
            .map(|x| Rational::new(x.clone(), self.denom.clone()))
            .collect();
        Weights::from_vec(
            self.class_of
                .iter()
                .map(|&g| per_class[g].clone())
                .collect(),
        )
    }
}

fn priority_order(profile: &Profile, priority: &Priority) -> Result<Vec<Candidate>> {
    match priority {
        Priority::RankMaximal | Priority::MaxSupport => Ok(rank_maximal_order(profile)),
        Priority::Given(order) => {
            let mut seen = vec![false; profile.m()];
            for &c in order {
                if c.index() >= profile.m() || std::mem::replace(&mut seen[c.index()], true) {
                    return Err(Error::InvalidConfig(
                        "priority order must list every candidate exactly once".into(),
                    ));
                }
            }
            if order.len() != profile.m() {
                return Err(Error::InvalidConfig(
                    "priority order must list every candidate exactly once".into(),
                ));
            }
            Ok(order.clone())
        }
    }
}

/// Runs EAR and returns the committee with a per-round trace.
pub fn ear(profile: &Profile, config: &EarConfig) -> Result<(Committee, EarTrace)> {
    let (n, k, m) = (profile.n(), profile.k(), profile.m());
    let quota = config.quota.resolve(n, k, m);
    if !config.allow_any_quota {
        quota.check_admissible(n, k)?;
    }
    let order = priority_order(profile, &config.priority)?;
    let mut position = vec![0; m];
    for (pos, c) in order.iter().enumerate() {
        position[c.index()] = pos;
    }

    let mut tally = ApprovalTally::new(profile, config.partial_list);
    tally.advance();
    let mut committee = Committee::new();
    let mut rounds = Vec::with_capacity(k);

    while committee.len() < k {
        let (supports, electable) = loop {
            let supports = tally.supports();
            let electable: Vec<Candidate> = profile
                .candidates()
                .iter()
                .filter(|&c| !committee.contains(c) && quota.support_meets(&supports[c.index()]))
                .collect();
            if !electable.is_empty() || tally.depth() == m {
                break (supports, electable);
            }
            tally.advance();
        };

        if electable.is_empty() {
            if !config.partial_list {
                return Err(Error::Stalled {
                    elected: committee.len(),
                    k,
                });
            }
            for &c in &order {
                if committee.len() == k {
                    break;
                }
                if !committee.contains(c) {
                    committee.push(c);
                    rounds.push(EarRound {
                        depth: tally.depth(),
                        supports: supports.clone(),
                        elected: c,
                        step: EarStep::Fill,
                        weights_after: tally.weights(),
                    });
                }
            }
            break;
        }

        let chosen = match config.priority {
            Priority::MaxSupport => *electable
                .iter()
                .max_by(|a, b| {
                    supports[a.index()]
                        .cmp(&supports[b.index()])
                        .then(position[b.index()].cmp(&position[a.index()]))
                })
                .expect("nonempty"),
            _ => *electable
                .iter()
                .min_by_key(|c| position[c.index()])
                .expect("nonempty"),
        };
        tally.reweight(chosen, quota.value());
        committee.push(chosen);
        rounds.push(EarRound {
            depth: tally.depth(),
            supports,
            elected: chosen,
            step: EarStep::Quota,
            weights_after: tally.weights(),
        });
    }

    Ok((
        committee,
        EarTrace {
            quota,
            priority: order,
            rounds,
        },
    ))
}

/// EAR with the Hare quota `n/k`.
pub fn hare_ear(profile: &Profile) -> Result<Committee> {
    ear(profile, &EarConfig::with_quota(QuotaSpec::Hare)).map(|(w, _)| w)
}

/// Budgeted EAR: candidate `c` costs `cost[c]`, and is electable while it
/// fits the remaining budget and its approval support reaches
/// `n/B · cost[c]`. Electing it removes that much weight from its supporters.
/// Stops once no affordable candidate can reach its threshold.
pub fn ear_budgeted(profile: &Profile, costs: &[Rational], budget: &Rational) -> Result<Committee> {
    let m = profile.m();
    if costs.len() != m {
        return Err(Error::InvalidConfig(format!(
            "expected {m} costs, got {}",
            costs.len()
        )));
    }
    if !budget.is_positive() {
        return Err(Error::InvalidConfig("budget must be positive".into()));
    }
    if let Some(bad) = costs.iter().find(|c| !c.is_positive() || *c > budget) {
        return Err(Error::InvalidConfig(format!(
            "cost {} must be positive and at most the budget",
            rational::to_text(bad)
        )));
    }
    let rate = rational::int(profile.n()) / budget;
    let order = rank_maximal_order(profile);
    let mut tally = ApprovalTally::new(profile, false);
    tally.advance();
    let mut committee = Committee::new();
    let mut spent = rational::zero();

    loop {
        let affordable: Vec<Candidate> = order
            .iter()
            .copied()
            .filter(|&c| !committee.contains(c) && &spent + &costs[c.index()] <= *budget)
            .collect();
        if affordable.is_empty() {
            break;
        }
        let chosen = loop {
            let supports = tally.supports();
            let hit = affordable
                .iter()
                .copied()
                .find(|&c| supports[c.index()] >= &rate * &costs[c.index()]);
            if hit.is_some() || tally.depth() == m {
                break hit;
            }
            tally.advance();
        };
        let Some(c) = chosen else { break };
        tally.reweight(c, &(&rate * &costs[c.index()]));
        spent += &costs[c.index()];
        committee.push(c);
    }
    Ok(committee)
}
