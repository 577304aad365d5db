mod common;

use common::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use riskbook::io::{parse_instance, serialize_instance};
use riskbook::{corpus, Error, Instance};

fn same_instance(a: &Instance, b: &Instance) {
    assert_eq!(a.space().scenarios(), b.space().scenarios());
    assert_eq!(a.space().probs(), b.space().probs());
    assert_eq!(a.trajectories(), b.trajectories());
    assert_eq!(a.rulebook().env_trajectories(), b.rulebook().env_trajectories());
    assert_eq!(a.rule_ids(), b.rule_ids());
    for (ra, rb) in a.rulebook().rules().iter().zip(b.rulebook().rules()) {
        assert_eq!(ra.violations, rb.violations);
    }
    let (pa, pb) = (a.rulebook().priority(), b.rulebook().priority());
    assert_eq!(pa.pairs(), pb.pairs());
    for t in 0..a.trajectories().len() {
        for w in 0..a.space().len() {
            assert_eq!(a.interaction().env_at(t, w), b.interaction().env_at(t, w));
        }
    }
    assert_eq!(a.risk_configs(), b.risk_configs());
}

#[test]
fn bundled_corpus_parses() {
    for text in [
        corpus::AV_PEDESTRIAN,
        corpus::AV_PEDESTRIAN_CAUTIOUS,
        corpus::AV_PEDESTRIAN_LANE_TOLERANT,
        corpus::AV_PEDESTRIAN_WORST_CASE,
    ] {
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.space().len(), 4);
        assert_eq!(inst.trajectories().len(), 4);
        assert_eq!(inst.rulebook().env_trajectories().len(), 2);
        assert_eq!(inst.rule_ids().len(), 4);
    }
}

#[test]
fn round_trip_random_instances() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let inst = random_instance(&mut rng, GenOpts::default());
        let text = serialize_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        same_instance(&inst, &back);
        assert_eq!(serialize_instance(&back).unwrap(), text);
    }
}

#[test]
fn parse_errors_carry_a_location() {
    let mut v: serde_json::Value = serde_json::from_str(corpus::AV_PEDESTRIAN).unwrap();
    v["rules"][2]["risk"]["measure"] = serde_json::json!("median");
    match parse_instance(&v.to_string()) {
        Err(Error::Parse { path, .. }) => assert_eq!(path, "rules[2].risk.measure"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_priority_rule_is_rejected() {
    let mut v: serde_json::Value = serde_json::from_str(corpus::AV_PEDESTRIAN).unwrap();
    v["priority"][0][1] = serde_json::json!("r9");
    assert!(matches!(parse_instance(&v.to_string()), Err(Error::UnknownElement(_))
        | Err(Error::Validation(_))));
}
