//! Risk-aware rules and the trajectory preorder they induce.
//!
//! Each rule `r` is paired with a risk measure `ρ_r` and a threshold `γ_r`.
//! A trajectory `τ` turns `r` into a random cost `r_τ(ω) = r(τ, E(τ, ω))`,
//! and the risk-aware rule scores `τ` by `max{ρ_r(r_τ) − γ_r, 0}`. The
//! scores, ordered by the original rule priorities, form a rulebook on
//! trajectories alone, which is what ranks the candidates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::preorder::{Preorder, Verdict};
use crate::probspace::{FiniteProbSpace, Relation};
use crate::risk::RiskMeasure;
use crate::rulebook::{at_least_as_good, compare_profiles, Rulebook};
use crate::TOLERANCE;

/// Environment response `E(τ, ω)`, stored as `table[trajectory][scenario]`
/// holding an environment-trajectory index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionModel {
    table: Vec<Vec<usize>>,
}

impl InteractionModel {
    pub fn new(table: Vec<Vec<usize>>) -> Self {
        InteractionModel { table }
    }

    /// Builds the model from identifiers, `lookup(trajectory, scenario)`
    /// naming the environment trajectory.
    pub fn from_ids<F>(rulebook: &Rulebook, space: &FiniteProbSpace, lookup: F) -> Result<Self>
    where
        F: Fn(&str, &str) -> Option<String>,
    {
        let mut table = Vec::with_capacity(rulebook.trajectories().len());
        for t in rulebook.trajectories() {
            let mut row = Vec::with_capacity(space.len());
            for w in space.scenarios() {
                let env = lookup(t, w).ok_or_else(|| {
                    Error::validation(format!(
                        "interaction has no entry for trajectory {t}, scenario {w}"
                    ))
                })?;
                let e = rulebook.env_index(&env).ok_or_else(|| {
                    Error::validation(format!(
                        "interaction for trajectory {t}, scenario {w} names unknown environment trajectory `{env}`"
                    ))
                })?;
                row.push(e);
            }
            table.push(row);
        }
        Ok(InteractionModel { table })
    }

    pub fn env_at(&self, traj: usize, scenario: usize) -> usize {
        self.table[traj][scenario]
    }

    pub(crate) fn validate(&self, rulebook: &Rulebook, space: &FiniteProbSpace) -> Result<()> {
        let nt = rulebook.trajectories().len();
        let ne = rulebook.env_trajectories().len();
        if self.table.len() != nt {
            return Err(Error::validation(format!(
                "interaction has {} trajectory rows, expected {nt}",
                self.table.len()
            )));
        }
        for (t, row) in self.table.iter().enumerate() {
            if row.len() != space.len() {
                return Err(Error::validation(format!(
                    "interaction row for trajectory {} has {} entries, expected {}",
                    rulebook.trajectories()[t],
                    row.len(),
                    space.len()
                )));
            }
            if let Some(&e) = row.iter().find(|&&e| e >= ne) {
                return Err(Error::validation(format!(
                    "interaction row for trajectory {} references environment index {e}",
                    rulebook.trajectories()[t]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskConfig {
    pub measure: RiskMeasure,
    pub threshold: f64,
}

impl RiskConfig {
    pub fn new(measure: RiskMeasure, threshold: f64) -> Self {
        RiskConfig { measure, threshold }
    }

    pub fn validate(&self) -> Result<()> {
        self.measure.validate()?;
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(Error::validation(format!(
                "threshold must be a finite nonnegative number, got {}",
                self.threshold
            )));
        }
        Ok(())
    }

    /// Amount by which `risk` exceeds the threshold, zero within tolerance.
    pub fn excess(&self, risk: f64) -> f64 {
        let d = risk - self.threshold;
        if d > TOLERANCE {
            d
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskAwareRule {
    pub base_rule: String,
    pub config: RiskConfig,
}

/// Evidence that an optimal trajectory's apparent disadvantage on one rule
/// is offset elsewhere: a rule not below the improving rule on which the
/// competitor is strictly worse with positive probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffWitness {
    pub improving_rule: String,
    pub compensating_rule: String,
    pub witness_scenarios: Vec<String>,
    pub witness_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum PointwiseCase {
    /// The competitor's advantage only occurs with probability zero.
    NullAdvantage { advantage_probability: f64 },
    /// The optimal trajectory's risk already sits within the threshold.
    SafeAtStar { risk: f64, threshold: f64 },
    CompensatedElsewhere { witness: TradeoffWitness },
}

/// Risk-aware rulebook evaluated on one instance. Risks are computed once
/// per (rule, trajectory) at construction.
#[derive(Debug, Clone)]
pub struct RiskAwareRulebook<'a> {
    instance: &'a Instance,
    rules: Vec<RiskAwareRule>,
    // [rule][trajectory]
    risks: Vec<Vec<f64>>,
    violations: Vec<Vec<f64>>,
}

impl<'a> RiskAwareRulebook<'a> {
    pub fn evaluate(instance: &'a Instance) -> Result<Self> {
        let nt = instance.trajectories().len();
        let mut rules = Vec::new();
        let mut risks = Vec::new();
        let mut violations = Vec::new();
        for (r, (rule, cfg)) in instance
            .rulebook()
            .rules()
            .iter()
            .zip(instance.risk_configs())
            .enumerate()
        {
            let row = (0..nt)
                .map(|t| instance.risk_by_index(r, t))
                .collect::<Result<Vec<_>>>()?;
            violations.push(row.iter().map(|&v| cfg.excess(v)).collect());
            risks.push(row);
            rules.push(RiskAwareRule {
                base_rule: rule.id.clone(),
                config: cfg.clone(),
            });
        }
        Ok(RiskAwareRulebook {
            instance,
            rules,
            risks,
            violations,
        })
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn rules(&self) -> &[RiskAwareRule] {
        &self.rules
    }

    /// Priorities carry over unchanged from the base rulebook.
    pub fn priority(&self) -> &'a Preorder {
        self.instance.rulebook().priority()
    }

    fn traj(&self, id: &str) -> Result<usize> {
        self.instance.rulebook().trajectory_index(id)
    }

    fn rule(&self, id: &str) -> Result<usize> {
        self.instance.rulebook().rule_index(id)
    }

    pub fn risk(&self, rule_id: &str, traj: &str) -> Result<f64> {
        Ok(self.risks[self.rule(rule_id)?][self.traj(traj)?])
    }

    pub fn violation(&self, rule_id: &str, traj: &str) -> Result<f64> {
        Ok(self.violations[self.rule(rule_id)?][self.traj(traj)?])
    }

    pub fn risk_at(&self, rule: usize, traj: usize) -> f64 {
        self.risks[rule][traj]
    }

    pub fn violation_at(&self, rule: usize, traj: usize) -> f64 {
        self.violations[rule][traj]
    }

    /// Risk-aware violations of one trajectory in rule order.
    pub fn profile(&self, traj: usize) -> Vec<f64> {
        self.violations.iter().map(|row| row[traj]).collect()
    }

    fn safe_idx(&self, t: usize) -> bool {
        self.violations.iter().all(|row| row[t] <= TOLERANCE)
    }

    pub fn is_safe(&self, traj: &str) -> Result<bool> {
        Ok(self.safe_idx(self.traj(traj)?))
    }

    pub fn safe_set(&self) -> Vec<String> {
        let ts = self.instance.trajectories();
        (0..ts.len())
            .filter(|&t| self.safe_idx(t))
            .map(|t| ts[t].clone())
            .collect()
    }

    /// `a` is no riskier than `b`.
    pub fn no_riskier_idx(&self, a: usize, b: usize) -> bool {
        at_least_as_good(self.priority(), &self.profile(a), &self.profile(b))
    }

    pub fn compare_idx(&self, a: usize, b: usize) -> Verdict {
        compare_profiles(self.priority(), &self.profile(a), &self.profile(b))
    }

    /// `Lower` means `a` is strictly less risky than `b`.
    pub fn compare_trajectories(&self, a: &str, b: &str) -> Result<Verdict> {
        Ok(self.compare_idx(self.traj(a)?, self.traj(b)?))
    }

    fn optimal_idx(&self, t: usize) -> bool {
        let n = self.instance.trajectories().len();
        !(0..n).any(|u| u != t && self.compare_idx(u, t) == Verdict::Lower)
    }

    pub fn is_optimal(&self, traj: &str) -> Result<bool> {
        Ok(self.optimal_idx(self.traj(traj)?))
    }

    /// Trajectories with no strictly less risky competitor, in declaration order.
    pub fn optimal_set(&self) -> Vec<String> {
        let ts = self.instance.trajectories();
        (0..ts.len())
            .filter(|&t| self.optimal_idx(t))
            .map(|t| ts[t].clone())
            .collect()
    }

    /// The trajectory ranking as a [`Preorder`]: `(a, b)` holds when `a` is
    /// at least as risky as `b`, so minimal elements are the optimal ones.
    pub fn trajectory_preorder(&self) -> Result<Preorder> {
        Preorder::from_relation(self.instance.trajectories(), |i, j| self.no_riskier_idx(j, i))
    }

    fn witnesses_idx(&self, star: usize, other: usize, improving: usize, first: bool) -> Vec<TradeoffWitness> {
        let inst = self.instance;
        let space = inst.space();
        let priority = self.priority();
        let ids = inst.rule_ids();
        let mut out = Vec::new();
        for r in 0..ids.len() {
            if priority.strictly_above(improving, r) {
                continue;
            }
            let f_other = inst.cost_by_index(r, other);
            let f_star = inst.cost_by_index(r, star);
            let scen: Vec<usize> = (0..space.len())
                .filter(|&w| {
                    space.probs()[w] > 0.0
                        && Relation::Gt.holds(f_other.values()[w], f_star.values()[w])
                })
                .collect();
            if scen.is_empty() {
                continue;
            }
            out.push(TradeoffWitness {
                improving_rule: ids[improving].to_string(),
                compensating_rule: ids[r].to_string(),
                witness_probability: scen.iter().map(|&w| space.probs()[w]).sum(),
                witness_scenarios: scen.iter().map(|&w| space.scenarios()[w].clone()).collect(),
            });
            if first {
                break;
            }
        }
        out
    }

    fn check_improvement(&self, star: &str, other: &str, rule: &str) -> Result<(usize, usize, usize)> {
        let (s, o, r) = (self.traj(star)?, self.traj(other)?, self.rule(rule)?);
        if self.violations[r][s] - self.violations[r][o] <= TOLERANCE {
            return Err(Error::PreconditionViolated(format!(
                "{other} is not strictly less risky than {star} under {rule} ({} vs {})",
                self.violations[r][o], self.violations[r][s]
            )));
        }
        Ok((s, o, r))
    }

    /// First rule (declaration order) not below `improving_rule` on which
    /// `other` is strictly worse than `star` with positive probability.
    /// Such a rule exists whenever `star` is optimal, `other` beats it on
    /// `improving_rule` and every measure is monotone.
    pub fn tradeoff_witness(&self, star: &str, other: &str, improving_rule: &str) -> Result<TradeoffWitness> {
        let (s, o, r) = self.check_improvement(star, other, improving_rule)?;
        self.witnesses_idx(s, o, r, true).pop().ok_or_else(|| {
            Error::NoWitness(format!(
                "no rule compensates {other}'s advantage over {star} under {improving_rule}; \
                 {star} is not optimal or a risk measure is not monotone"
            ))
        })
    }

    /// Every witness for the triple, in rule declaration order.
    pub fn tradeoff_witnesses(&self, star: &str, other: &str, improving_rule: &str) -> Result<Vec<TradeoffWitness>> {
        let (s, o, r) = self.check_improvement(star, other, improving_rule)?;
        Ok(self.witnesses_idx(s, o, r, false))
    }

    /// Classifies why `other` being better than the optimal `star` under
    /// `rule` at `scenario` does not make it a better trajectory. Requires
    /// every configured measure to be strictly monotone.
    pub fn pointwise_case(&self, star: &str, other: &str, rule: &str, scenario: &str) -> Result<PointwiseCase> {
        if let Some(bad) = self
            .rules
            .iter()
            .find(|rr| !rr.config.measure.is_strictly_monotone_class())
        {
            return Err(Error::AssumptionUnmet(format!(
                "risk measure {} of rule {} is not strictly monotone",
                bad.config.measure, bad.base_rule
            )));
        }
        let inst = self.instance;
        let space = inst.space();
        let (s, o, r) = (self.traj(star)?, self.traj(other)?, self.rule(rule)?);
        let w = space.index_of(scenario)?;
        let f_other = inst.cost_by_index(r, o);
        let f_star = inst.cost_by_index(r, s);
        if !Relation::Lt.holds(f_other.values()[w], f_star.values()[w]) {
            return Err(Error::PreconditionViolated(format!(
                "{rule} does not favour {other} over {star} at {scenario}"
            )));
        }
        if !self.optimal_idx(s) {
            return Err(Error::PreconditionViolated(format!("{star} is not optimal")));
        }
        let advantage = space.exceedance_prob(&f_other, &f_star, Relation::Lt)?;
        if advantage <= 0.0 {
            return Ok(PointwiseCase::NullAdvantage {
                advantage_probability: advantage,
            });
        }
        let cfg = &self.rules[r].config;
        if self.risks[r][s] <= cfg.threshold + TOLERANCE {
            return Ok(PointwiseCase::SafeAtStar {
                risk: self.risks[r][s],
                threshold: cfg.threshold,
            });
        }
        self.witnesses_idx(s, o, r, true)
            .pop()
            .map(|witness| PointwiseCase::CompensatedElsewhere { witness })
            .ok_or_else(|| {
                Error::NoWitness(format!(
                    "no rule compensates {other}'s advantage over {star} under {rule}"
                ))
            })
    }
}
