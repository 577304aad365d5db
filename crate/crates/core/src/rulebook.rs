//! Rulebooks over realizations: pairs of a system trajectory and an
//! environment trajectory, each rule scoring how badly a realization
//! violates it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preorder::{Preorder, Verdict};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Realization {
    pub trajectory: String,
    pub env: String,
}

impl Realization {
    pub fn new(trajectory: impl Into<String>, env: impl Into<String>) -> Self {
        Realization {
            trajectory: trajectory.into(),
            env: env.into(),
        }
    }
}

/// Violation table of one rule, `violations[trajectory][env]`, indexed in
/// the declaration order of the owning [`Rulebook`].
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub id: String,
    pub violations: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rulebook {
    trajectories: Vec<String>,
    env_trajectories: Vec<String>,
    traj_index: HashMap<String, usize>,
    env_index: HashMap<String, usize>,
    rules: Vec<Rule>,
    priority: Preorder,
}

fn index_ids(ids: &[String], kind: &str) -> Result<HashMap<String, usize>> {
    let mut idx = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if idx.insert(id.clone(), i).is_some() {
            return Err(Error::validation(format!("duplicate {kind} `{id}`")));
        }
    }
    Ok(idx)
}

impl Rulebook {
    pub fn new(
        trajectories: Vec<String>,
        env_trajectories: Vec<String>,
        rules: Vec<Rule>,
        priority_edges: &[(String, String)],
    ) -> Result<Self> {
        let traj_index = index_ids(&trajectories, "trajectory")?;
        let env_index = index_ids(&env_trajectories, "environment trajectory")?;
        for rule in &rules {
            if rule.violations.len() != trajectories.len() {
                return Err(Error::validation(format!(
                    "rule {} has {} trajectory rows, expected {}",
                    rule.id,
                    rule.violations.len(),
                    trajectories.len()
                )));
            }
            for (t, row) in rule.violations.iter().enumerate() {
                if row.len() != env_trajectories.len() {
                    return Err(Error::validation(format!(
                        "rule {} row for trajectory {} has {} entries, expected {}",
                        rule.id,
                        trajectories[t],
                        row.len(),
                        env_trajectories.len()
                    )));
                }
                for (e, &v) in row.iter().enumerate() {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(Error::validation(format!(
                            "rule {} violation at ({}, {}) is {v}, expected a finite nonnegative value",
                            rule.id, trajectories[t], env_trajectories[e]
                        )));
                    }
                }
            }
        }
        let ids: Vec<&str> = rules.iter().map(|r| r.id.as_str()).collect();
        let priority = Preorder::new(&ids, priority_edges).map_err(|e| match e {
            Error::DuplicateElement(id) => Error::validation(format!("duplicate rule `{id}`")),
            Error::UnknownElement(id) => {
                Error::validation(format!("priority references unknown rule `{id}`"))
            }
            other => other,
        })?;
        Ok(Rulebook {
            trajectories,
            env_trajectories,
            traj_index,
            env_index,
            rules,
            priority,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn priority(&self) -> &Preorder {
        &self.priority
    }

    pub fn trajectories(&self) -> &[String] {
        &self.trajectories
    }

    pub fn env_trajectories(&self) -> &[String] {
        &self.env_trajectories
    }

    pub fn rule_index(&self, id: &str) -> Result<usize> {
        self.priority
            .index_of(id)
            .map_err(|_| Error::UnknownRule(id.to_string()))
    }

    pub fn trajectory_index(&self, id: &str) -> Result<usize> {
        self.traj_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownTrajectory(id.to_string()))
    }

    pub fn env_index(&self, id: &str) -> Option<usize> {
        self.env_index.get(id).copied()
    }

    fn realization_index(&self, x: &Realization) -> Result<(usize, usize)> {
        let unknown = || Error::UnknownRealization(x.trajectory.clone(), x.env.clone());
        let t = self.traj_index.get(&x.trajectory).ok_or_else(unknown)?;
        let e = self.env_index.get(&x.env).ok_or_else(unknown)?;
        Ok((*t, *e))
    }

    /// Violation of rule `rule` by trajectory index `t` and environment index `e`.
    pub fn violation_at(&self, rule: usize, t: usize, e: usize) -> f64 {
        self.rules[rule].violations[t][e]
    }

    pub fn violation(&self, rule_id: &str, x: &Realization) -> Result<f64> {
        let r = self.rule_index(rule_id)?;
        let (t, e) = self.realization_index(x)?;
        Ok(self.violation_at(r, t, e))
    }

    /// Vector of all rule values at a realization, in rule order.
    pub fn profile(&self, x: &Realization) -> Result<Vec<f64>> {
        let (t, e) = self.realization_index(x)?;
        Ok((0..self.rules.len())
            .map(|r| self.violation_at(r, t, e))
            .collect())
    }

    /// `Lower` means `x` is strictly better than `y`.
    pub fn compare_realizations(&self, x: &Realization, y: &Realization) -> Result<Verdict> {
        let px = self.profile(x)?;
        let py = self.profile(y)?;
        Ok(compare_profiles(&self.priority, &px, &py))
    }
}

/// `x ≲ y` under rule priorities: every rule on which `x` is worse than `y`
/// is outweighed by a strictly higher-priority rule on which `x` is better.
pub fn at_least_as_good(priority: &Preorder, x: &[f64], y: &[f64]) -> bool {
    (0..x.len()).all(|r| {
        x[r] - y[r] <= TOLERANCE
            || (0..x.len()).any(|hi| priority.strictly_above(hi, r) && y[hi] - x[hi] > TOLERANCE)
    })
}

/// Rules (by index) on which `x` is worse than `y` with no strictly
/// higher-priority rule in its favour.
pub fn uncompensated(priority: &Preorder, x: &[f64], y: &[f64]) -> Vec<usize> {
    (0..x.len())
        .filter(|&r| {
            x[r] - y[r] > TOLERANCE
                && !(0..x.len()).any(|hi| priority.strictly_above(hi, r) && y[hi] - x[hi] > TOLERANCE)
        })
        .collect()
}

/// Compares two violation profiles. `Lower` means `x` is strictly better.
pub fn compare_profiles(priority: &Preorder, x: &[f64], y: &[f64]) -> Verdict {
    // x ≲ y puts y "above" x in the badness order
    Verdict::from_relation(at_least_as_good(priority, y, x), at_least_as_good(priority, x, y))
}
