mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use propvote::axioms::{
    check_generalised_psc, check_generalised_weak_psc, check_pjr, check_psc, check_weak_psc,
    Verdict, GENERALISED_MAX_M, PJR_MAX_N,
};
use propvote::ballots::{parse_ballots, serialize_ballots};
use propvote::ear::{ear, rank_maximal_order, rank_vector, EarConfig};
use propvote::qbs::qbs;
use propvote::rational::int;
use propvote::testkit::{random_profile, Culture, ProfileSpec};
use propvote::{Candidate, Committee, Profile, Quota, QuotaSpec};

use common::all_committees;

fn small(culture: Culture, max_n: usize, max_m: usize) -> impl Strategy<Value = Profile> {
    (2..=max_m, 1..=max_n, any::<u64>())
        .prop_flat_map(move |(m, n, seed)| (Just(m), Just(n), 1..=m.min(n), Just(seed)))
        .prop_map(move |(m, n, k, seed)| {
            let culture = match culture {
                Culture::RandomWeak { .. } => Culture::RandomWeak { max_classes: m },
                other => other,
            };
            random_profile(&ProfileSpec {
                culture,
                n,
                m,
                k,
                seed,
            })
            .unwrap()
        })
}

fn any_culture(max_n: usize, max_m: usize) -> impl Strategy<Value = Profile> {
    prop_oneof![
        small(Culture::ImpartialStrict, max_n, max_m),
        small(Culture::RandomWeak { max_classes: 0 }, max_n, max_m),
        small(Culture::Dichotomous { numer: 1, denom: 2 }, max_n, max_m),
    ]
}

fn quotas(p: &Profile) -> [Quota; 3] {
    let (n, k, m) = (p.n(), p.k(), p.m());
    [
        Quota::droop(n, k),
        Quota::default_ear(n, k, m),
        Quota::hare(n, k),
    ]
}

fn subsets(len: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << len).map(move |mask| (0..len).filter(|b| mask & 1 << b != 0).collect())
}

/// Solid-coalition PSC straight from the definition, over every candidate
/// subset rather than over observed prefixes.
fn psc_oracle(p: &Profile, w: &Committee, q: &Quota, weak: bool) -> bool {
    let m = p.m();
    subsets(m).all(|cs| {
        let inside: BTreeSet<Candidate> = cs.iter().map(|&c| Candidate::from_index(c)).collect();
        let supporters = p
            .voters()
            .iter()
            .filter(|v| {
                inside.iter().all(|&a| {
                    (0..m)
                        .map(Candidate::from_index)
                        .filter(|b| !inside.contains(b))
                        .all(|b| v.strictly_prefers(a, b))
                })
            })
            .count();
        let ell = q.max_multiple(&int(supporters));
        let hit = inside.iter().filter(|&&c| w.contains(c)).count();
        if weak {
            !(ell >= inside.len() && hit < inside.len())
        } else {
            hit >= ell.min(inside.len())
        }
    })
}

/// Generalised PSC from the definition: every sub-coalition of weak
/// supporters, with representation by winners some member ranks at least as
/// high as some supported candidate.
fn generalised_oracle(p: &Profile, w: &Committee, q: &Quota, weak: bool) -> bool {
    let m = p.m();
    subsets(m).all(|cs| {
        let inside: Vec<Candidate> = cs.iter().map(|&c| Candidate::from_index(c)).collect();
        let coalition: Vec<usize> = (0..p.n())
            .filter(|&i| {
                let v = p.voter(i);
                inside.iter().all(|&a| {
                    (0..m)
                        .map(Candidate::from_index)
                        .filter(|b| !inside.contains(b))
                        .all(|b| v.weakly_prefers(a, b))
                })
            })
            .collect();
        subsets(coalition.len()).all(|pick| {
            let members: Vec<usize> = pick.iter().map(|&x| coalition[x]).collect();
            let ell = q.max_multiple(&int(members.len()));
            let represented = w
                .members()
                .iter()
                .filter(|&&c| {
                    members
                        .iter()
                        .any(|&i| inside.iter().any(|&a| p.voter(i).weakly_prefers(c, a)))
                })
                .count();
            if weak {
                !(ell >= inside.len() && represented < inside.len())
            } else {
                represented >= ell.min(inside.len())
            }
        })
    })
}

fn witness_is_sound(p: &Profile, w: &Committee, verdict: &Verdict) {
    if let Verdict::Violated(wit) = verdict {
        assert!(!wit.coalition.voters.is_empty());
        assert!(wit.represented.len() < wit.ell);
        assert!(wit.represented.iter().all(|&c| w.contains(c)));
        let m = p.m();
        for &i in &wit.coalition.voters {
            let v = p.voter(i);
            for &a in &wit.coalition.supported {
                for b in (0..m)
                    .map(Candidate::from_index)
                    .filter(|b| !wit.coalition.supported.contains(b))
                {
                    if wit.coalition.generalised {
                        assert!(v.weakly_prefers(a, b));
                    } else {
                        assert!(v.strictly_prefers(a, b));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ear_conserves_weight(p in any_culture(12, 7)) {
        let (w, trace) = ear(&p, &EarConfig::default()).unwrap();
        prop_assert_eq!(w.len(), p.k());
        for (r, round) in trace.rounds.iter().enumerate() {
            let expected = int(p.n()) - int(r + 1) * trace.quota.value();
            prop_assert_eq!(round.weights_after.total(), expected);
            prop_assert!(round.weights_after.as_slice().iter().all(|x| x >= &int(0)));
        }
        let depths: Vec<usize> = trace.rounds.iter().map(|r| r.depth).collect();
        prop_assert!(depths.windows(2).all(|d| d[0] <= d[1]));
    }

    #[test]
    fn psc_matches_definition(p in small(Culture::ImpartialStrict, 6, 5)) {
        for w in all_committees(&p, p.k()) {
            for q in quotas(&p) {
                let strong = check_psc(&p, &w, &q).unwrap();
                let weak = check_weak_psc(&p, &w, &q).unwrap();
                prop_assert_eq!(strong.holds(), psc_oracle(&p, &w, &q, false));
                prop_assert_eq!(weak.holds(), psc_oracle(&p, &w, &q, true));
                witness_is_sound(&p, &w, &strong);
                witness_is_sound(&p, &w, &weak);
            }
        }
    }

    #[test]
    fn generalised_psc_matches_definition(p in any_culture(6, 5)) {
        for w in all_committees(&p, p.k()) {
            for q in quotas(&p) {
                let strong = check_generalised_psc(&p, &w, &q, GENERALISED_MAX_M).unwrap();
                let weak = check_generalised_weak_psc(&p, &w, &q, GENERALISED_MAX_M).unwrap();
                prop_assert_eq!(strong.holds(), generalised_oracle(&p, &w, &q, false));
                prop_assert_eq!(weak.holds(), generalised_oracle(&p, &w, &q, true));
                witness_is_sound(&p, &w, &strong);
                witness_is_sound(&p, &w, &weak);
            }
        }
    }

    #[test]
    fn enlarging_the_committee_keeps_holds(p in any_culture(6, 5)) {
        prop_assume!(p.k() < p.m());
        let wider = p.with_k(p.k() + 1).unwrap();
        for w in all_committees(&p, p.k()) {
            for q in quotas(&p) {
                let holds = check_generalised_psc(&p, &w, &q, GENERALISED_MAX_M).unwrap().holds();
                let strict_holds = p.is_strict() && check_psc(&p, &w, &q).unwrap().holds();
                for c in (0..p.m()).map(Candidate::from_index).filter(|&c| !w.contains(c)) {
                    let mut order = w.election_order().to_vec();
                    order.push(c);
                    let bigger = Committee::from_order(order);
                    if holds {
                        prop_assert!(check_generalised_psc(&wider, &bigger, &q, GENERALISED_MAX_M).unwrap().holds());
                    }
                    if strict_holds {
                        prop_assert!(check_psc(&wider, &bigger, &q).unwrap().holds());
                    }
                }
            }
        }
    }

    #[test]
    fn ear_satisfies_pjr_on_dichotomous(p in small(Culture::Dichotomous { numer: 1, denom: 2 }, 8, 5)) {
        let (w, _) = ear(&p, &EarConfig::default()).unwrap();
        let verdict = check_pjr(&p, &w, PJR_MAX_N).unwrap();
        witness_is_sound(&p, &w, &verdict);
        prop_assert!(verdict.holds());
    }

    #[test]
    fn demand_is_monotone(n in 1usize..200, k in 1usize..10, m in 1usize..12, a in 0usize..300, b in 0usize..300) {
        let (lo, hi) = (a.min(b), a.max(b));
        for q in [Quota::droop(n, k), Quota::default_ear(n, k, m), Quota::hare(n, k)] {
            prop_assert!(q.max_multiple(&int(lo)) <= q.max_multiple(&int(hi)));
        }
    }

    #[test]
    fn rank_maximal_order_matches_pairwise_comparison(p in small(Culture::ImpartialStrict, 6, 5)) {
        let order = rank_maximal_order(&p);
        for (x, y) in order.iter().zip(order.iter().skip(1)) {
            let (rx, ry) = (rank_vector(&p, *x), rank_vector(&p, *y));
            let better = (0..p.m()).find(|&i| rx[i] != ry[i]).map(|i| rx[i] > ry[i]);
            prop_assert!(better.unwrap_or(x < y));
        }
    }

    #[test]
    fn ballots_round_trip(p in any_culture(10, 6)) {
        prop_assert_eq!(parse_ballots(&serialize_ballots(&p)).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn qbs_satisfies_psc(p in small(Culture::ImpartialStrict, 8, 6)) {
        let w = qbs(&p, &QuotaSpec::Default).unwrap();
        prop_assert_eq!(w.len(), p.k());
        let q = Quota::default_ear(p.n(), p.k(), p.m());
        prop_assert!(check_psc(&p, &w, &q).unwrap().holds());
    }
}
