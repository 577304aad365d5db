//! The JSON instance document.
//!
//! ```json
//! {
//!   "scenarios": [{"id": "w1", "prob": 0.98}, ...],
//!   "system_trajectories": ["t1", ...],
//!   "environment_trajectories": ["x1", ...],
//!   "interaction": {"t1": {"w1": "x1", ...}, ...},
//!   "rules": [{"id": "r1",
//!              "violations": {"t1": {"x1": 0, "x2": 225}, ...},
//!              "risk": {"measure": "cvar", "alpha": 0.99, "threshold": 0}}],
//!   "priority": [["r1", "r2"], ...]
//! }
//! ```

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::probspace::FiniteProbSpace;
use crate::risk::RiskMeasure;
use crate::riskaware::{InteractionModel, RiskConfig};
use crate::rulebook::{Rule, Rulebook};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub scenarios: Vec<ScenarioDoc>,
    pub system_trajectories: Vec<String>,
    pub environment_trajectories: Vec<String>,
    pub interaction: IndexMap<String, IndexMap<String, String>>,
    pub rules: Vec<RuleDoc>,
    #[serde(default)]
    pub priority: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub id: String,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub id: String,
    pub violations: IndexMap<String, IndexMap<String, f64>>,
    pub risk: RiskDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Expected,
    WorstCase,
    Var,
    Cvar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskDoc {
    pub measure: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub threshold: f64,
}

impl RiskDoc {
    pub fn to_measure(&self) -> Result<RiskMeasure> {
        let need_alpha = |name: &str| {
            self.alpha
                .ok_or_else(|| Error::validation(format!("{name} requires an alpha")))
        };
        let m = match self.measure {
            MeasureKind::Expected | MeasureKind::WorstCase if self.alpha.is_some() => {
                return Err(Error::validation(format!(
                    "alpha is not used by measure {:?}",
                    self.measure
                )))
            }
            MeasureKind::Expected => RiskMeasure::Expected,
            MeasureKind::WorstCase => RiskMeasure::WorstCase,
            MeasureKind::Var => RiskMeasure::VaR(need_alpha("var")?),
            MeasureKind::Cvar => RiskMeasure::CVaR(need_alpha("cvar")?),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn to_config(&self) -> Result<RiskConfig> {
        let cfg = RiskConfig::new(self.to_measure()?, self.threshold);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_config(cfg: &RiskConfig) -> Result<Self> {
        let measure = match cfg.measure {
            RiskMeasure::Expected => MeasureKind::Expected,
            RiskMeasure::WorstCase => MeasureKind::WorstCase,
            RiskMeasure::VaR(_) => MeasureKind::Var,
            RiskMeasure::CVaR(_) => MeasureKind::Cvar,
            RiskMeasure::Custom(ref c) => {
                return Err(Error::validation(format!(
                    "custom measure `{}` has no document form",
                    c.name()
                )))
            }
        };
        Ok(RiskDoc {
            measure,
            alpha: cfg.measure.alpha(),
            threshold: cfg.threshold,
        })
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_document(text)?.into_instance()
}

pub fn parse_document(text: &str) -> Result<InstanceDoc> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = match e.path().to_string() {
            p if p == "?" || p == "." => "document root".to_string(),
            p => p,
        };
        Error::Parse {
            path,
            message: e.into_inner().to_string(),
        }
    })
}

/// Serializes an instance back to its document form (pretty JSON).
pub fn serialize_instance(instance: &Instance) -> Result<String> {
    let doc = InstanceDoc::from_instance(instance)?;
    Ok(serde_json::to_string_pretty(&doc).expect("document serializes"))
}

fn check_keys<V>(
    map: &IndexMap<String, V>,
    declared: &[String],
    what: &str,
) -> Result<()> {
    if let Some(k) = map.keys().find(|k| !declared.contains(k)) {
        return Err(Error::validation(format!("{what} references unknown id `{k}`")));
    }
    Ok(())
}

impl InstanceDoc {
    pub fn into_instance(self) -> Result<Instance> {
        let ids: Vec<&str> = self.scenarios.iter().map(|s| s.id.as_str()).collect();
        let probs: Vec<f64> = self.scenarios.iter().map(|s| s.prob).collect();
        let space = FiniteProbSpace::new(&ids, &probs).map_err(|e| match e {
            Error::DuplicateElement(id) => Error::validation(format!("duplicate scenario `{id}`")),
            other => other,
        })?;

        let trajs = &self.system_trajectories;
        let envs = &self.environment_trajectories;
        let mut rules = Vec::with_capacity(self.rules.len());
        let mut risk = Vec::with_capacity(self.rules.len());
        for rd in &self.rules {
            check_keys(&rd.violations, trajs, &format!("rule {} violations", rd.id))?;
            let mut table = Vec::with_capacity(trajs.len());
            for t in trajs {
                let row = rd.violations.get(t).ok_or_else(|| {
                    Error::validation(format!("rule {} has no violations for trajectory {t}", rd.id))
                })?;
                check_keys(row, envs, &format!("rule {} violations for {t}", rd.id))?;
                let mut vals = Vec::with_capacity(envs.len());
                for e in envs {
                    let v = row.get(e).ok_or_else(|| {
                        Error::validation(format!(
                            "rule {} has no violation for ({t}, {e})",
                            rd.id
                        ))
                    })?;
                    vals.push(*v);
                }
                table.push(vals);
            }
            rules.push(Rule {
                id: rd.id.clone(),
                violations: table,
            });
            risk.push(
                rd.risk
                    .to_config()
                    .map_err(|e| Error::validation(format!("rule {}: {e}", rd.id)))?,
            );
        }
        let rulebook = Rulebook::new(trajs.clone(), envs.clone(), rules, &self.priority)?;

        check_keys(&self.interaction, trajs, "interaction")?;
        for (t, row) in &self.interaction {
            check_keys(row, space.scenarios(), &format!("interaction for {t}"))?;
        }
        let interaction = InteractionModel::from_ids(&rulebook, &space, |t, w| {
            self.interaction.get(t).and_then(|row| row.get(w)).cloned()
        })?;
        Instance::new(space, rulebook, interaction, risk)
    }

    pub fn from_instance(inst: &Instance) -> Result<Self> {
        let space = inst.space();
        let rb = inst.rulebook();
        let envs = rb.env_trajectories();
        let scenarios = space
            .scenarios()
            .iter()
            .zip(space.probs())
            .map(|(id, &prob)| ScenarioDoc { id: id.clone(), prob })
            .collect();
        let interaction = rb
            .trajectories()
            .iter()
            .enumerate()
            .map(|(t, tid)| {
                let row = space
                    .scenarios()
                    .iter()
                    .enumerate()
                    .map(|(w, wid)| (wid.clone(), envs[inst.interaction().env_at(t, w)].clone()))
                    .collect();
                (tid.clone(), row)
            })
            .collect();
        let rules = rb
            .rules()
            .iter()
            .zip(inst.risk_configs())
            .map(|(rule, cfg)| {
                let violations = rb
                    .trajectories()
                    .iter()
                    .zip(&rule.violations)
                    .map(|(tid, row)| {
                        (tid.clone(), envs.iter().cloned().zip(row.iter().copied()).collect())
                    })
                    .collect();
                Ok(RuleDoc {
                    id: rule.id.clone(),
                    violations,
                    risk: RiskDoc::from_config(cfg)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        // closed relation minus the reflexive pairs reproduces the same preorder
        let priority = rb
            .priority()
            .pairs()
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Ok(InstanceDoc {
            scenarios,
            system_trajectories: rb.trajectories().to_vec(),
            environment_trajectories: envs.to_vec(),
            interaction,
            rules,
            priority,
        })
    }
}
