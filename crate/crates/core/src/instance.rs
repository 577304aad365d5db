use crate::error::{Error, Result};
use crate::preorder::Verdict;
use crate::probspace::{FiniteProbSpace, RandomCost};
use crate::riskaware::{InteractionModel, RiskAwareRulebook, RiskConfig};
use crate::rulebook::{compare_profiles, Rulebook};
use crate::TOLERANCE;

/// A complete evaluation problem: scenarios with probabilities, candidate
/// trajectories, how the environment responds to each, the rulebook and one
/// risk configuration per rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    space: FiniteProbSpace,
    rulebook: Rulebook,
    interaction: InteractionModel,
    risk: Vec<RiskConfig>,
}

impl Instance {
    pub fn new(
        space: FiniteProbSpace,
        rulebook: Rulebook,
        interaction: InteractionModel,
        risk: Vec<RiskConfig>,
    ) -> Result<Self> {
        interaction.validate(&rulebook, &space)?;
        if risk.len() != rulebook.rules().len() {
            return Err(Error::validation(format!(
                "{} risk configurations for {} rules",
                risk.len(),
                rulebook.rules().len()
            )));
        }
        for (cfg, rule) in risk.iter().zip(rulebook.rules()) {
            cfg.validate()
                .map_err(|e| Error::validation(format!("rule {}: {e}", rule.id)))?;
        }
        Ok(Instance {
            space,
            rulebook,
            interaction,
            risk,
        })
    }

    pub fn space(&self) -> &FiniteProbSpace {
        &self.space
    }

    pub fn rulebook(&self) -> &Rulebook {
        &self.rulebook
    }

    pub fn interaction(&self) -> &InteractionModel {
        &self.interaction
    }

    pub fn trajectories(&self) -> &[String] {
        self.rulebook.trajectories()
    }

    pub fn rule_ids(&self) -> Vec<&str> {
        self.rulebook.rules().iter().map(|r| r.id.as_str()).collect()
    }

    pub fn risk_configs(&self) -> &[RiskConfig] {
        &self.risk
    }

    pub fn risk_config(&self, rule_id: &str) -> Result<&RiskConfig> {
        Ok(&self.risk[self.rulebook.rule_index(rule_id)?])
    }

    /// Replaces the risk configuration of one rule.
    pub fn set_risk_config(&mut self, rule_id: &str, config: RiskConfig) -> Result<()> {
        let r = self.rulebook.rule_index(rule_id)?;
        config.validate()?;
        self.risk[r] = config;
        Ok(())
    }

    pub fn with_risk_config(mut self, rule_id: &str, config: RiskConfig) -> Result<Self> {
        self.set_risk_config(rule_id, config)?;
        Ok(self)
    }

    pub(crate) fn cost_by_index(&self, rule: usize, traj: usize) -> RandomCost {
        self.space
            .cost_from_fn(|w| {
                self.rulebook
                    .violation_at(rule, traj, self.interaction.env_at(traj, w))
            })
            .expect("violation tables are validated nonnegative")
    }

    /// `r_τ(ω) = r(τ, E(τ, ω))`.
    pub fn induced_random_cost(&self, rule_id: &str, traj: &str) -> Result<RandomCost> {
        let r = self.rulebook.rule_index(rule_id)?;
        let t = self.rulebook.trajectory_index(traj)?;
        Ok(self.cost_by_index(r, t))
    }

    pub(crate) fn risk_by_index(&self, rule: usize, traj: usize) -> Result<f64> {
        self.risk[rule]
            .measure
            .assess(&self.space, &self.cost_by_index(rule, traj))
    }

    pub fn risk_of(&self, rule_id: &str, traj: &str) -> Result<f64> {
        let r = self.rulebook.rule_index(rule_id)?;
        let t = self.rulebook.trajectory_index(traj)?;
        self.risk_by_index(r, t)
    }

    /// `max{ρ_r(r_τ) − γ_r, 0}`, snapped to exactly zero when the risk is
    /// within tolerance of the threshold.
    pub fn risk_aware_violation(&self, rule_id: &str, traj: &str) -> Result<f64> {
        let r = self.rulebook.rule_index(rule_id)?;
        Ok(self.risk[r].excess(self.risk_of(rule_id, traj)?))
    }

    pub fn is_safe_wrt_rule(&self, rule_id: &str, traj: &str) -> Result<bool> {
        Ok(self.risk_aware_violation(rule_id, traj)? <= TOLERANCE)
    }

    /// Compares trajectories once the scenario is known; `Lower` means `a`
    /// is strictly better under `scenario`.
    pub fn compare_given_scenario(&self, a: &str, b: &str, scenario: &str) -> Result<Verdict> {
        let ta = self.rulebook.trajectory_index(a)?;
        let tb = self.rulebook.trajectory_index(b)?;
        let w = self.space.index_of(scenario)?;
        let (ea, eb) = (self.interaction.env_at(ta, w), self.interaction.env_at(tb, w));
        let n = self.rulebook.rules().len();
        let pa: Vec<f64> = (0..n).map(|r| self.rulebook.violation_at(r, ta, ea)).collect();
        let pb: Vec<f64> = (0..n).map(|r| self.rulebook.violation_at(r, tb, eb)).collect();
        Ok(compare_profiles(self.rulebook.priority(), &pa, &pb))
    }

    /// Evaluates every risk-aware rule on every trajectory.
    pub fn risk_aware(&self) -> Result<RiskAwareRulebook<'_>> {
        RiskAwareRulebook::evaluate(self)
    }

    pub fn is_safe(&self, traj: &str) -> Result<bool> {
        self.risk_aware()?.is_safe(traj)
    }

    pub fn compare_trajectories(&self, a: &str, b: &str) -> Result<Verdict> {
        self.risk_aware()?.compare_trajectories(a, b)
    }

    pub fn optimal_set(&self) -> Result<Vec<String>> {
        Ok(self.risk_aware()?.optimal_set())
    }
}
