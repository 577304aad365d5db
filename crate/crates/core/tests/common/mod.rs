#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use riskbook::io::parse_instance;
use riskbook::{
    corpus, FiniteProbSpace, Instance, InteractionModel, RiskConfig, RiskMeasure, Rule, Rulebook,
};

pub const TOL: f64 = 1e-9;

pub fn av() -> Instance {
    parse_instance(corpus::AV_PEDESTRIAN).expect("bundled instance parses")
}

/// The bundled instance with `measure`/`threshold` on r1 and the given
/// thresholds on r2..r4 (expected-value measures, which are exact for their
/// scenario-independent tables).
pub fn av_with(measure: RiskMeasure, g1: f64, g2: f64) -> Instance {
    av().with_risk_config("r1", RiskConfig::new(measure, g1))
        .unwrap()
        .with_risk_config("r2", RiskConfig::new(RiskMeasure::Expected, g2))
        .unwrap()
}

#[derive(Debug, Clone, Copy)]
pub struct GenOpts {
    pub max_traj: usize,
    pub max_rules: usize,
    pub max_scen: usize,
    pub zero_prob: bool,
    pub expected_only: bool,
}

impl Default for GenOpts {
    fn default() -> Self {
        GenOpts {
            max_traj: 6,
            max_rules: 5,
            max_scen: 6,
            zero_prob: true,
            expected_only: false,
        }
    }
}

pub const ALPHAS: [f64; 6] = [0.0, 0.3, 0.5, 0.75, 0.9, 1.0];

pub fn random_measure(rng: &mut StdRng) -> RiskMeasure {
    let alpha = *ALPHAS.choose(rng).unwrap();
    match rng.gen_range(0..4) {
        0 => RiskMeasure::Expected,
        1 => RiskMeasure::WorstCase,
        2 => RiskMeasure::VaR(alpha),
        _ => RiskMeasure::CVaR(alpha),
    }
}

pub fn random_probs(rng: &mut StdRng, n: usize, zero_prob: bool) -> Vec<f64> {
    loop {
        let lo = if zero_prob { 0 } else { 1 };
        let w: Vec<u32> = (0..n).map(|_| rng.gen_range(lo..=4)).collect();
        let total: u32 = w.iter().sum();
        if total > 0 {
            return w.iter().map(|&x| x as f64 / total as f64).collect();
        }
    }
}

/// Random rule priorities: rules get levels, lower level means higher
/// priority; cross-level pairs are ordered with some probability and
/// same-level pairs are sometimes declared equal rank.
pub fn random_priority(rng: &mut StdRng, ids: &[String]) -> Vec<(String, String)> {
    let levels: Vec<u32> = ids.iter().map(|_| rng.gen_range(0..3)).collect();
    let mut edges = Vec::new();
    for a in 0..ids.len() {
        for b in 0..ids.len() {
            if a == b {
                continue;
            }
            if levels[a] < levels[b] && rng.gen_bool(0.7) {
                edges.push((ids[a].clone(), ids[b].clone()));
            } else if levels[a] == levels[b] && a < b && rng.gen_bool(0.3) {
                edges.push((ids[a].clone(), ids[b].clone()));
                edges.push((ids[b].clone(), ids[a].clone()));
            }
        }
    }
    edges
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Violation values on a half-integer grid so that distinct values are far
/// apart relative to the comparison tolerance.
fn grid_value(rng: &mut StdRng) -> f64 {
    if rng.gen_bool(0.3) {
        0.0
    } else {
        rng.gen_range(0..=10) as f64 * 0.5
    }
}

pub fn random_instance(rng: &mut StdRng, opts: GenOpts) -> Instance {
    let nt = rng.gen_range(1..=opts.max_traj);
    let nr = rng.gen_range(1..=opts.max_rules);
    let nw = rng.gen_range(1..=opts.max_scen);
    let ne = rng.gen_range(1..=3);
    let trajs = names("t", nt);
    let envs = names("x", ne);
    let rule_ids = names("r", nr);
    let space = FiniteProbSpace::new(&names("w", nw), &random_probs(rng, nw, opts.zero_prob)).unwrap();
    let rules = rule_ids
        .iter()
        .map(|id| Rule {
            id: id.clone(),
            violations: (0..nt)
                .map(|_| (0..ne).map(|_| grid_value(rng)).collect())
                .collect(),
        })
        .collect();
    let edges = random_priority(rng, &rule_ids);
    let rulebook = Rulebook::new(trajs, envs, rules, &edges).unwrap();
    let interaction = InteractionModel::new(
        (0..nt)
            .map(|_| (0..nw).map(|_| rng.gen_range(0..ne)).collect())
            .collect(),
    );
    let risk = (0..nr)
        .map(|_| {
            let m = if opts.expected_only {
                RiskMeasure::Expected
            } else {
                random_measure(rng)
            };
            let g = [0.0, 0.0, 0.5, 1.0, 2.0][rng.gen_range(0..5)];
            RiskConfig::new(m, g)
        })
        .collect();
    Instance::new(space, rulebook, interaction, risk).unwrap()
}

/// Copy of `inst` with rule `rule`'s violation table and threshold both
/// multiplied by `c`.
pub fn scale_rule(inst: &Instance, rule: usize, c: f64) -> Instance {
    let rb = inst.rulebook();
    let mut rules = rb.rules().to_vec();
    for row in &mut rules[rule].violations {
        for v in row.iter_mut() {
            *v *= c;
        }
    }
    let edges: Vec<(String, String)> = rb
        .priority()
        .pairs()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let rulebook = Rulebook::new(
        rb.trajectories().to_vec(),
        rb.env_trajectories().to_vec(),
        rules,
        &edges,
    )
    .unwrap();
    let mut risk = inst.risk_configs().to_vec();
    risk[rule].threshold *= c;
    Instance::new(inst.space().clone(), rulebook, inst.interaction().clone(), risk).unwrap()
}

/// Raw cost `r(τ, E(τ, ω))` read straight from the tables.
pub fn raw_cost(inst: &Instance, rule: usize, traj: usize, scen: usize) -> f64 {
    let e = inst.interaction().env_at(traj, scen);
    inst.rulebook().rules()[rule].violations[traj][e]
}
