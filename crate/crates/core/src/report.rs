//! JSON records for rule runs, traces and verdicts.
//!
//! Every record carries `schema_version`. Rationals are reduced `p/q`
//! strings, candidates are names, voters are 0-based indices, and object
//! keys are sorted, so records diff cleanly.

use serde_json::{json, Map, Value};

use crate::axioms::{Axiom, Verdict};
use crate::ballots::format_order;
use crate::ear::{EarStep, EarTrace};
use crate::monotonicity::{MonoVerdict, Variant};
use crate::profile::{Candidate, Committee, Profile, Weights};
use crate::quota::Quota;
use crate::rational::{to_text, Rational};
use crate::rule::Outcomes;
use crate::stv::{StvAction, StvTrace};

pub const SCHEMA_VERSION: u32 = 1;

fn names<'a>(profile: &Profile, cs: impl IntoIterator<Item = &'a Candidate>) -> Value {
    cs.into_iter()
        .map(|&c| Value::from(profile.name(c)))
        .collect()
}

fn weights(w: &Weights) -> Value {
    w.as_slice()
        .iter()
        .map(|x| Value::from(to_text(x)))
        .collect()
}

fn supports<'a>(
    profile: &Profile,
    it: impl IntoIterator<Item = (Candidate, &'a Rational)>,
) -> Value {
    let map: Map<String, Value> = it
        .into_iter()
        .map(|(c, s)| (profile.name(c).to_string(), Value::from(to_text(s))))
        .collect();
    Value::Object(map)
}

fn committee(profile: &Profile, w: &Committee) -> Value {
    json!({
        "members": names(profile, w.members()),
        "election_order": names(profile, w.election_order()),
    })
}

pub fn committee_json(profile: &Profile, rule: &str, w: &Committee) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "rule": rule,
        "committee": committee(profile, w),
    })
}

pub fn outcomes_json(profile: &Profile, rule: &str, outcomes: &Outcomes) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "rule": rule,
        "outcomes": outcomes.iter().map(|w| names(profile, w)).collect::<Vec<_>>(),
    })
}

pub fn ear_trace_json(profile: &Profile, w: &Committee, trace: &EarTrace) -> Value {
    let rounds: Vec<Value> = trace
        .rounds
        .iter()
        .enumerate()
        .map(|(r, round)| {
            json!({
                "round": r + 1,
                "depth": round.depth,
                "action": match round.step {
                    EarStep::Quota => "elect",
                    EarStep::Fill => "fill",
                },
                "elected": profile.name(round.elected),
                "supports": supports(
                    profile,
                    round.supports.iter().enumerate().map(|(i, s)| (Candidate::from_index(i), s)),
                ),
                "weights_after": weights(&round.weights_after),
                "total_weight_after": to_text(&round.weights_after.total()),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "rule": "ear",
        "quota": trace.quota.to_string(),
        "priority": names(profile, &trace.priority),
        "committee": committee(profile, w),
        "rounds": rounds,
    })
}

pub fn stv_trace_json(profile: &Profile, w: &Committee, trace: &StvTrace) -> Value {
    let rounds: Vec<Value> = trace
        .rounds
        .iter()
        .enumerate()
        .map(|(r, round)| {
            let (action, who) = match &round.action {
                StvAction::Elect(c) => ("elect", names(profile, [c])),
                StvAction::Eliminate(c) => ("eliminate", names(profile, [c])),
                StvAction::BulkElect(cs) => ("bulk_elect", names(profile, cs)),
            };
            json!({
                "round": r + 1,
                "action": action,
                "candidates": who,
                "supports": supports(profile, round.supports.iter().map(|(&c, s)| (c, s))),
                "weights_after": weights(&round.weights_after),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "rule": "stv",
        "quota": trace.quota.to_string(),
        "committee": committee(profile, w),
        "rounds": rounds,
    })
}

pub fn verdict_json(
    profile: &Profile,
    axiom: Axiom,
    quota: Option<&Quota>,
    w: &Committee,
    verdict: &Verdict,
) -> Value {
    let witness = verdict.witness().map(|wit| {
        json!({
            "supported": names(profile, &wit.coalition.supported),
            "voters": wit.coalition.voters,
            "generalised": wit.coalition.generalised,
            "ell": wit.ell,
            "represented": names(profile, &wit.represented),
        })
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "axiom": axiom.to_string(),
        "quota": quota.map(Quota::to_string),
        "committee": names(profile, w.members()),
        "status": if verdict.holds() { "HOLDS" } else { "VIOLATED" },
        "witness": witness,
    })
}

pub fn mono_json(profile: &Profile, rule: &str, variant: Variant, verdict: &MonoVerdict) -> Value {
    let counterexample = verdict.counterexample().map(|cx| {
        let changes: Vec<Value> = cx
            .reinforcements
            .iter()
            .map(|r| {
                json!({
                    "voter": r.voter,
                    "candidate": profile.name(r.candidate),
                    "before": format_order(profile, &r.before),
                    "after": format_order(profile, &r.after),
                    "crossed": names(profile, &r.crossed),
                })
            })
            .collect();
        json!({
            "reinforcements": changes,
            "before": names(profile, cx.before.members()),
            "after": names(profile, cx.after.members()),
        })
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "rule": rule,
        "variant": variant.to_string(),
        "status": if verdict.holds() { "HOLDS" } else { "VIOLATED" },
        "counterexample": counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::parse_ballots;
    use crate::ear::{ear, EarConfig};

    #[test]
    fn ear_trace_fields() {
        let p = parse_ballots("candidates: a b\nk: 1\n2: a > b\nb > a\n").unwrap();
        let (w, trace) = ear(&p, &EarConfig::default()).unwrap();
        let v = ear_trace_json(&p, &w, &trace);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["rounds"][0]["elected"], "a");
        assert_eq!(v["rounds"][0]["supports"]["a"], "2/1");
        assert_eq!(v["rounds"][0]["depth"], 1);
        // Default quota for (3, 1, 2) is 3/2 + (1/2)/3 = 5/3.
        assert_eq!(v["quota"], "5/3");
        assert_eq!(v["rounds"][0]["weights_after"][0], "1/6");
        assert_eq!(v["rounds"][0]["total_weight_after"], "4/3");
    }

    #[test]
    fn output_is_stable() {
        let p = parse_ballots("candidates: b a\nk: 1\na > b\n").unwrap();
        let w = Committee::from_order(vec![p.candidate("a").unwrap()]);
        let text = serde_json::to_string(&committee_json(&p, "ear", &w)).unwrap();
        assert_eq!(
            text,
            r#"{"committee":{"election_order":["a"],"members":["a"]},"rule":"ear","schema_version":1}"#
        );
    }
}
