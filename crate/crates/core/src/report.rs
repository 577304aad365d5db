//! Deterministic reports: ranking, per-rule risk tables, pairwise
//! explanations and instance checks. Every report serializes to JSON and
//! renders as a plain-text table; rows follow declaration order.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::preorder::{Preorder, Verdict};
use crate::risk::{spot_check_monotone, RiskMeasure};
use crate::riskaware::{RiskAwareRulebook, RiskConfig, TradeoffWitness};
use crate::TOLERANCE;

/// Levels used by [`run_risk_table`] when none are given.
pub const DEFAULT_ALPHAS: [f64; 7] = [0.9, 0.98, 0.99, 0.995, 0.999, 0.9995, 1.0];

const SPOT_CHECK_TRIALS: usize = 500;
const SPOT_CHECK_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleSummary {
    pub id: String,
    pub measure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub threshold: f64,
}

impl RuleSummary {
    fn new(id: &str, cfg: &RiskConfig) -> Self {
        let measure = match &cfg.measure {
            RiskMeasure::Custom(c) => format!("custom:{}", c.name()),
            m => m.keyword().unwrap_or_default().to_string(),
        };
        RuleSummary {
            id: id.to_string(),
            measure,
            alpha: cfg.measure.alpha(),
            threshold: cfg.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub id: String,
    pub safe: bool,
    pub optimal: bool,
    /// `ρ_r(τ)` per rule.
    pub risk: Vec<f64>,
    /// `max{ρ_r(τ) − γ_r, 0}` per rule.
    pub violation: Vec<f64>,
}

/// Why an optimal trajectory keeps its place although a competitor beats it
/// on `witness.improving_rule`. `witness` is `None` only when no rule
/// compensates, which monotone measures rule out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Justification {
    pub optimal: String,
    pub competitor: String,
    pub improving_rule: String,
    pub witness: Option<TradeoffWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport {
    pub rules: Vec<RuleSummary>,
    pub trajectories: Vec<TrajectoryRow>,
    /// `verdicts[a][b]` compares trajectory `a` against `b`; `lower` means
    /// `a` is strictly less risky.
    pub verdicts: Vec<Vec<Verdict>>,
    pub safe: Vec<String>,
    pub optimal: Vec<String>,
    pub explanations: Vec<Justification>,
}

fn rule_summaries(inst: &Instance) -> Vec<RuleSummary> {
    inst.rule_ids()
        .iter()
        .zip(inst.risk_configs())
        .map(|(id, cfg)| RuleSummary::new(id, cfg))
        .collect()
}

/// Rules (by index) on which `other` is strictly less risky than `star`.
fn improving_rules(rar: &RiskAwareRulebook<'_>, star: usize, other: usize) -> Vec<usize> {
    (0..rar.rules().len())
        .filter(|&r| rar.violation_at(r, star) - rar.violation_at(r, other) > TOLERANCE)
        .collect()
}

fn justifications(
    rar: &RiskAwareRulebook<'_>,
    star: usize,
    other: usize,
    all: bool,
) -> Result<Vec<Justification>> {
    let ts = rar.instance().trajectories();
    let ids = rar.instance().rule_ids();
    let mut out = Vec::new();
    for r in improving_rules(rar, star, other) {
        let found = if all {
            rar.tradeoff_witnesses(&ts[star], &ts[other], ids[r])?
        } else {
            match rar.tradeoff_witness(&ts[star], &ts[other], ids[r]) {
                Ok(w) => vec![w],
                Err(Error::NoWitness(_)) => vec![],
                Err(e) => return Err(e),
            }
        };
        let base = Justification {
            optimal: ts[star].clone(),
            competitor: ts[other].clone(),
            improving_rule: ids[r].to_string(),
            witness: None,
        };
        if found.is_empty() {
            out.push(base);
        } else {
            out.extend(found.into_iter().map(|w| Justification {
                witness: Some(w),
                ..base.clone()
            }));
        }
    }
    Ok(out)
}

pub fn run_rank(inst: &Instance) -> Result<RankingReport> {
    let rar = inst.risk_aware()?;
    let ts = inst.trajectories();
    let nt = ts.len();
    let nr = rar.rules().len();
    let optimal = rar.optimal_set();
    let trajectories = (0..nt)
        .map(|t| TrajectoryRow {
            id: ts[t].clone(),
            safe: rar.profile(t).iter().all(|&v| v <= TOLERANCE),
            optimal: optimal.contains(&ts[t]),
            risk: (0..nr).map(|r| rar.risk_at(r, t)).collect(),
            violation: rar.profile(t),
        })
        .collect();
    let verdicts = (0..nt)
        .map(|a| (0..nt).map(|b| rar.compare_idx(a, b)).collect())
        .collect();
    let mut explanations = Vec::new();
    for star in (0..nt).filter(|&t| optimal.contains(&ts[t])) {
        for other in (0..nt).filter(|&u| u != star) {
            explanations.extend(justifications(&rar, star, other, false)?);
        }
    }
    Ok(RankingReport {
        rules: rule_summaries(inst),
        trajectories,
        verdicts,
        safe: rar.safe_set(),
        optimal,
        explanations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskRow {
    pub trajectory: String,
    /// Probability mass function of the rule's cost: `(value, probability)`.
    pub distribution: Vec<(f64, f64)>,
    pub expected: f64,
    pub worst_case: f64,
    pub var: Vec<f64>,
    pub cvar: Vec<f64>,
    pub configured_risk: f64,
    pub risk_aware_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskTable {
    pub rule: RuleSummary,
    pub alphas: Vec<f64>,
    pub rows: Vec<RiskRow>,
}

pub fn run_risk_table(inst: &Instance, rule_id: &str, alphas: &[f64]) -> Result<RiskTable> {
    let cfg = inst.risk_config(rule_id)?;
    let space = inst.space();
    let mut rows = Vec::new();
    for t in inst.trajectories() {
        let f = inst.induced_random_cost(rule_id, t)?;
        let var = alphas
            .iter()
            .map(|&a| RiskMeasure::VaR(a).assess(space, &f))
            .collect::<Result<Vec<_>>>()?;
        let cvar = alphas
            .iter()
            .map(|&a| RiskMeasure::CVaR(a).assess(space, &f))
            .collect::<Result<Vec<_>>>()?;
        let configured_risk = cfg.measure.assess(space, &f)?;
        rows.push(RiskRow {
            trajectory: t.clone(),
            distribution: space.distribution(&f)?,
            expected: RiskMeasure::Expected.assess(space, &f)?,
            worst_case: RiskMeasure::WorstCase.assess(space, &f)?,
            var,
            cvar,
            configured_risk,
            risk_aware_violation: cfg.excess(configured_risk),
        });
    }
    Ok(RiskTable {
        rule: RuleSummary::new(rule_id, cfg),
        alphas: alphas.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleDisadvantage {
    pub rule: String,
    pub worse: f64,
    pub better: f64,
    /// Strictly higher-priority rules on which the worse side wins back.
    pub compensated_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub a: String,
    pub b: String,
    pub verdict: Verdict,
    pub summary: String,
    pub a_no_riskier_than_b: bool,
    pub b_no_riskier_than_a: bool,
    /// Rules on which `a` has the larger risk-aware violation.
    pub a_worse_on: Vec<RuleDisadvantage>,
    pub b_worse_on: Vec<RuleDisadvantage>,
    pub a_optimal: bool,
    pub b_optimal: bool,
    pub witnesses: Vec<Justification>,
}

fn disadvantages(rar: &RiskAwareRulebook<'_>, worse: usize, better: usize) -> Vec<RuleDisadvantage> {
    let ids = rar.instance().rule_ids();
    let p: &Preorder = rar.priority();
    (0..ids.len())
        .filter(|&r| rar.violation_at(r, worse) - rar.violation_at(r, better) > TOLERANCE)
        .map(|r| RuleDisadvantage {
            rule: ids[r].to_string(),
            worse: rar.violation_at(r, worse),
            better: rar.violation_at(r, better),
            compensated_by: (0..ids.len())
                .filter(|&h| {
                    p.strictly_above(h, r)
                        && rar.violation_at(h, better) - rar.violation_at(h, worse) > TOLERANCE
                })
                .map(|h| ids[h].to_string())
                .collect(),
        })
        .collect()
}

pub fn run_explain(inst: &Instance, a: &str, b: &str) -> Result<Explanation> {
    let rar = inst.risk_aware()?;
    let rb = inst.rulebook();
    let (ia, ib) = (rb.trajectory_index(a)?, rb.trajectory_index(b)?);
    let verdict = rar.compare_idx(ia, ib);
    let summary = match verdict {
        Verdict::Lower => format!("{a} strictly less risky than {b}"),
        Verdict::Higher => format!("{b} strictly less risky than {a}"),
        Verdict::Equal => format!("{a} and {b} equally risky"),
        Verdict::Incomparable => format!("{a} and {b} incomparable"),
    };
    let a_optimal = rar.is_optimal(a)?;
    let b_optimal = rar.is_optimal(b)?;
    let mut witnesses = Vec::new();
    if ia != ib {
        if a_optimal {
            witnesses.extend(justifications(&rar, ia, ib, true)?);
        }
        if b_optimal {
            witnesses.extend(justifications(&rar, ib, ia, true)?);
        }
    }
    Ok(Explanation {
        a: a.to_string(),
        b: b.to_string(),
        verdict,
        summary,
        a_no_riskier_than_b: rar.no_riskier_idx(ia, ib),
        b_no_riskier_than_a: rar.no_riskier_idx(ib, ia),
        a_worse_on: disadvantages(&rar, ia, ib),
        b_worse_on: disadvantages(&rar, ib, ia),
        a_optimal,
        b_optimal,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<CheckItem>,
}

fn item(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckItem {
    CheckItem {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_check(inst: &Instance) -> Result<CheckReport> {
    let mut checks = Vec::new();
    let space = inst.space();
    let sum: f64 = space.probs().iter().sum();
    checks.push(item(
        "probabilities",
        (sum - 1.0).abs() <= TOLERANCE,
        format!("{} scenarios, total probability {sum}", space.len()),
    ));

    let p = inst.rulebook().priority();
    let closed: Vec<(&str, &str)> = p.pairs();
    let rebuilt = Preorder::new(p.elements(), &closed)?;
    checks.push(item(
        "priority closure",
        &rebuilt == p,
        format!("{} rules, {} ordered pairs", p.len(), closed.len()),
    ));

    for (id, cfg) in inst.rule_ids().iter().zip(inst.risk_configs()) {
        let (passed, detail) = match &cfg.measure {
            RiskMeasure::Custom(_) => {
                let c = spot_check_monotone(&cfg.measure, space, SPOT_CHECK_TRIALS, SPOT_CHECK_SEED)?;
                match c.counterexample {
                    None => (
                        true,
                        format!("unverified custom measure; spot check passed ({} trials)", c.trials),
                    ),
                    Some((lo, hi)) => (false, format!("not monotone: {lo:?} <= {hi:?}")),
                }
            }
            m => (true, format!("built-in {m} is monotone")),
        };
        checks.push(item(format!("monotonicity {id}"), passed, detail));
    }

    let rar = inst.risk_aware()?;
    let nt = inst.trajectories().len();
    let reflexive = (0..nt).all(|t| rar.compare_idx(t, t) == Verdict::Equal);
    let mut transitive = true;
    for a in 0..nt {
        for b in 0..nt {
            if !rar.no_riskier_idx(a, b) {
                continue;
            }
            for c in 0..nt {
                if rar.no_riskier_idx(b, c) && !rar.no_riskier_idx(a, c) {
                    transitive = false;
                }
            }
        }
    }
    checks.push(item(
        "trajectory preorder",
        reflexive && transitive,
        format!("reflexive: {reflexive}, transitive: {transitive}"),
    ));

    let safe = rar.safe_set();
    let optimal = rar.optimal_set();
    let safe_optimal = safe.iter().all(|t| optimal.contains(t));
    let cone = safe.is_empty() || safe == optimal;
    checks.push(item(
        "safe and optimal sets",
        safe_optimal && cone && !optimal.is_empty(),
        format!("safe: {safe:?}, optimal: {optimal:?}"),
    ));

    Ok(CheckReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn describe_rule(r: &RuleSummary) -> String {
    match r.alpha {
        Some(a) => format!("{} {}(alpha={a}), threshold {}", r.id, r.measure, r.threshold),
        None => format!("{} {}, threshold {}", r.id, r.measure, r.threshold),
    }
}

fn push_witness(out: &mut String, j: &Justification) {
    match &j.witness {
        Some(w) => {
            let _ = writeln!(
                out,
                "  {} beats optimal {} on {}; compensated by {} on [{}] with probability {}",
                j.competitor,
                j.optimal,
                j.improving_rule,
                w.compensating_rule,
                w.witness_scenarios.join(", "),
                w.witness_probability
            );
        }
        None => {
            let _ = writeln!(
                out,
                "  {} beats optimal {} on {}; no compensating rule found",
                j.competitor, j.optimal, j.improving_rule
            );
        }
    }
}

impl RankingReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("rules:\n");
        for r in &self.rules {
            let _ = writeln!(out, "  {}", describe_rule(r));
        }
        let ids: Vec<&str> = self.rules.iter().map(|r| r.id.as_str()).collect();
        let _ = writeln!(out, "\nrisk-aware violations ({}):", ids.join(", "));
        for t in &self.trajectories {
            let mut flags = Vec::new();
            if t.safe {
                flags.push("safe");
            }
            if t.optimal {
                flags.push("optimal");
            }
            let line = format!("  {}: [{}] {}", t.id, join(&t.violation), flags.join(" "));
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out.push_str("\nverdicts (row vs column):\n");
        let names: Vec<&str> = self.trajectories.iter().map(|t| t.id.as_str()).collect();
        for (a, row) in self.verdicts.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(b, v)| format!("{}:{v}", names[b]))
                .collect();
            let _ = writeln!(out, "  {}: {}", names[a], cells.join(" "));
        }
        let _ = writeln!(out, "\nsafe: [{}]", self.safe.join(", "));
        let _ = writeln!(out, "optimal: [{}]", self.optimal.join(", "));
        if !self.explanations.is_empty() {
            out.push_str("\ntradeoffs:\n");
            for j in &self.explanations {
                push_witness(&mut out, j);
            }
        }
        out
    }
}

impl RiskTable {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rule {}", describe_rule(&self.rule));
        for row in &self.rows {
            let pmf: Vec<String> = row
                .distribution
                .iter()
                .map(|(v, p)| format!("{v}:{p}"))
                .collect();
            let _ = writeln!(out, "\n{}", row.trajectory);
            let _ = writeln!(out, "  pmf         {}", pmf.join(" "));
            let _ = writeln!(out, "  expected    {}", row.expected);
            let _ = writeln!(out, "  worst_case  {}", row.worst_case);
            for (i, a) in self.alphas.iter().enumerate() {
                let _ = writeln!(out, "  alpha {a:<7} var {} cvar {}", row.var[i], row.cvar[i]);
            }
            let _ = writeln!(
                out,
                "  configured  risk {} violation {}",
                row.configured_risk, row.risk_aware_violation
            );
        }
        out
    }
}

impl Explanation {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.summary);
        let _ = writeln!(
            out,
            "{} no riskier than {}: {}; {} no riskier than {}: {}",
            self.a, self.b, self.a_no_riskier_than_b, self.b, self.a, self.b_no_riskier_than_a
        );
        for (who, other, list) in [
            (&self.a, &self.b, &self.a_worse_on),
            (&self.b, &self.a, &self.b_worse_on),
        ] {
            if list.is_empty() {
                let _ = writeln!(out, "{who} is worse than {other} on no rule");
            }
            for d in list {
                let comp = if d.compensated_by.is_empty() {
                    "uncompensated".to_string()
                } else {
                    format!("compensated by {}", d.compensated_by.join(", "))
                };
                let _ = writeln!(
                    out,
                    "{who} worse than {other} on {} ({} vs {}): {comp}",
                    d.rule, d.worse, d.better
                );
            }
        }
        let _ = writeln!(out, "{} optimal: {}; {} optimal: {}", self.a, self.a_optimal, self.b, self.b_optimal);
        if !self.witnesses.is_empty() {
            out.push_str("tradeoff witnesses:\n");
            for j in &self.witnesses {
                push_witness(&mut out, j);
            }
        }
        out
    }
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "checks failed" });
        out
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}
