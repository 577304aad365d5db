//! Risk measures on random costs over a finite probability space.
//!
//! The built-in measures are expectation, worst case, the α-quantile
//! (VaR, `min{d : Pr(f ≤ d) ≥ α}`) and CVaR evaluated from its variational
//! form `inf_β { β + E[(f − β)⁺] / (1 − α) }`. All of them are monotone:
//! `f ≤ f'` almost surely implies `ρ(f) ≤ ρ(f')`.

use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::probspace::{FiniteProbSpace, RandomCost};
use crate::TOLERANCE;

type RiskFn = dyn Fn(&FiniteProbSpace, &RandomCost) -> f64 + Send + Sync;

/// A user-supplied risk measure. Monotonicity cannot be proven for these,
/// only spot-checked with [`spot_check_monotone`].
#[derive(Clone)]
pub struct CustomMeasure {
    name: String,
    func: Arc<RiskFn>,
}

impl CustomMeasure {
    pub fn new(
        name: impl Into<String>,
        func: impl Fn(&FiniteProbSpace, &RandomCost) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomMeasure {
            name: name.into(),
            func: Arc::new(func),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomMeasure")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.func, &other.func)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RiskMeasure {
    Expected,
    WorstCase,
    VaR(f64),
    CVaR(f64),
    Custom(CustomMeasure),
}

impl RiskMeasure {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            RiskMeasure::VaR(a) | RiskMeasure::CVaR(a) => Some(*a),
            _ => None,
        }
    }

    /// Keyword used in instance documents, `None` for custom measures.
    pub fn keyword(&self) -> Option<&'static str> {
        match self {
            RiskMeasure::Expected => Some("expected"),
            RiskMeasure::WorstCase => Some("worst_case"),
            RiskMeasure::VaR(_) => Some("var"),
            RiskMeasure::CVaR(_) => Some("cvar"),
            RiskMeasure::Custom(_) => None,
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, RiskMeasure::Custom(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self.alpha() {
            Some(a) if !(0.0..=1.0).contains(&a) => Err(Error::InvalidAlpha(a)),
            _ => Ok(()),
        }
    }

    pub fn assess(&self, space: &FiniteProbSpace, f: &RandomCost) -> Result<f64> {
        self.validate()?;
        if let RiskMeasure::Custom(c) = self {
            space.check(f)?;
            return Ok((c.func)(space, f));
        }
        let dist = space.distribution(f)?;
        Ok(match *self {
            RiskMeasure::Expected => space.expectation(f)?,
            RiskMeasure::WorstCase => worst_case(&dist),
            RiskMeasure::VaR(alpha) => value_at_risk(&dist, alpha),
            RiskMeasure::CVaR(alpha) => conditional_value_at_risk(&dist, alpha),
            RiskMeasure::Custom(_) => unreachable!(),
        })
    }

    /// Whether the measure is strictly monotone: `f ≤ f'` a.s. with
    /// `Pr(f < f') > 0` forces `ρ(f) < ρ(f')`. Only expectation qualifies
    /// among the built-ins; tail and quantile measures ignore changes away
    /// from the tail, and custom measures are never assumed to qualify.
    pub fn is_strictly_monotone_class(&self) -> bool {
        matches!(self, RiskMeasure::Expected)
    }
}

impl fmt::Display for RiskMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiskMeasure::Expected => f.write_str("expected"),
            RiskMeasure::WorstCase => f.write_str("worst_case"),
            RiskMeasure::VaR(a) => write!(f, "var({a})"),
            RiskMeasure::CVaR(a) => write!(f, "cvar({a})"),
            RiskMeasure::Custom(c) => write!(f, "custom({})", c.name),
        }
    }
}

fn worst_case(dist: &[(f64, f64)]) -> f64 {
    dist.last().map(|&(v, _)| v).unwrap_or(0.0)
}

fn value_at_risk(dist: &[(f64, f64)], alpha: f64) -> f64 {
    if alpha >= 1.0 {
        return worst_case(dist);
    }
    let mut cum = 0.0;
    for &(v, p) in dist {
        cum += p;
        if cum >= alpha - TOLERANCE {
            return v;
        }
    }
    worst_case(dist)
}

// The objective β + E[(f − β)⁺]/(1 − α) is convex and piecewise linear in β
// with kinks only at support values, so its infimum is attained at one.
fn conditional_value_at_risk(dist: &[(f64, f64)], alpha: f64) -> f64 {
    if alpha >= 1.0 {
        return worst_case(dist);
    }
    let scale = 1.0 / (1.0 - alpha);
    dist.iter()
        .map(|&(beta, _)| beta + scale * tail_excess(dist, beta))
        .fold(f64::INFINITY, f64::min)
}

fn tail_excess(dist: &[(f64, f64)], beta: f64) -> f64 {
    dist.iter()
        .filter(|(v, _)| *v > beta)
        .map(|(v, p)| p * (v - beta))
        .sum()
}

/// Result of randomly probing a measure for monotonicity violations.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityCheck {
    pub trials: usize,
    /// First dominated pair `(f, f')` with `ρ(f) > ρ(f') + tol`, if any.
    pub counterexample: Option<(Vec<f64>, Vec<f64>)>,
}

impl MonotonicityCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Draws `trials` pointwise-dominated pairs `f ≤ f'` on `space` and checks
/// `ρ(f) ≤ ρ(f')`. Deterministic for a given `seed`.
pub fn spot_check_monotone(
    measure: &RiskMeasure,
    space: &FiniteProbSpace,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityCheck> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = space.len();
    for _ in 0..trials {
        let lo: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..100.0)).collect();
        let hi: Vec<f64> = lo
            .iter()
            .map(|v| if rng.gen_bool(0.5) { *v } else { v + rng.gen_range(0.0..50.0) })
            .collect();
        let a = measure.assess(space, &space.cost(lo.clone())?)?;
        let b = measure.assess(space, &space.cost(hi.clone())?)?;
        if a > b + TOLERANCE {
            return Ok(MonotonicityCheck {
                trials,
                counterexample: Some((lo, hi)),
            });
        }
    }
    Ok(MonotonicityCheck {
        trials,
        counterexample: None,
    })
}
