//! Finite probability spaces over named scenarios and the random costs
//! defined on them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProbSpace {
    scenarios: Arc<[String]>,
    probs: Vec<f64>,
    index: HashMap<String, usize>,
}

impl FiniteProbSpace {
    pub fn new<S: AsRef<str>>(scenarios: &[S], probs: &[f64]) -> Result<Self> {
        if scenarios.len() != probs.len() {
            return Err(Error::validation(format!(
                "{} scenarios but {} probabilities",
                scenarios.len(),
                probs.len()
            )));
        }
        if scenarios.is_empty() {
            return Err(Error::validation("scenario set is empty"));
        }
        let mut index = HashMap::with_capacity(scenarios.len());
        for (i, s) in scenarios.iter().enumerate() {
            if index.insert(s.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateElement(s.as_ref().to_string()));
            }
        }
        for (s, &p) in scenarios.iter().zip(probs) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(format!(
                    "probability of scenario {} is {p}, outside [0, 1]",
                    s.as_ref()
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(Error::validation(format!("probabilities sum to {sum}")));
        }
        Ok(FiniteProbSpace {
            scenarios: scenarios.iter().map(|s| s.as_ref().to_string()).collect(),
            probs: probs.to_vec(),
            index,
        })
    }

    pub fn scenarios(&self) -> &[String] {
        &self.scenarios
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn index_of(&self, scenario: &str) -> Result<usize> {
        self.index
            .get(scenario)
            .copied()
            .ok_or_else(|| Error::UnknownScenario(scenario.to_string()))
    }

    pub fn prob(&self, scenario: &str) -> Result<f64> {
        Ok(self.probs[self.index_of(scenario)?])
    }

    /// Builds a random cost on this space from values in scenario order.
    pub fn cost(&self, values: Vec<f64>) -> Result<RandomCost> {
        if values.len() != self.len() {
            return Err(Error::DomainMismatch);
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0 && v.is_finite()))
        {
            return Err(Error::validation(format!(
                "cost at scenario {} is {v}, expected a finite nonnegative value",
                self.scenarios[i]
            )));
        }
        Ok(RandomCost {
            scenarios: Arc::clone(&self.scenarios),
            values,
        })
    }

    /// Builds a random cost by evaluating `f` on every scenario index.
    pub fn cost_from_fn(&self, f: impl Fn(usize) -> f64) -> Result<RandomCost> {
        self.cost((0..self.len()).map(f).collect())
    }

    pub(crate) fn check(&self, f: &RandomCost) -> Result<()> {
        if Arc::ptr_eq(&self.scenarios, &f.scenarios) || self.scenarios == f.scenarios {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// `E[f]`.
    pub fn expectation(&self, f: &RandomCost) -> Result<f64> {
        self.check(f)?;
        Ok(self.probs.iter().zip(&f.values).map(|(p, v)| p * v).sum())
    }

    /// Total probability of the scenarios selected by `pred`.
    pub fn prob_where(&self, pred: impl Fn(usize) -> bool) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, p)| p)
            .sum()
    }

    /// `Pr({ω : f(ω) ⋆ g(ω)})` with values compared at the global tolerance.
    pub fn exceedance_prob(&self, f: &RandomCost, g: &RandomCost, rel: Relation) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.prob_where(|i| rel.holds(f.values[i], g.values[i])))
    }

    /// Probability mass function of `f`: ascending distinct values with
    /// their probabilities. Zero-probability scenarios contribute nothing and
    /// values within the tolerance of an atom are merged into it.
    pub fn distribution(&self, f: &RandomCost) -> Result<Vec<(f64, f64)>> {
        self.check(f)?;
        let mut pts: Vec<(f64, f64)> = f
            .values
            .iter()
            .zip(&self.probs)
            .filter(|(_, &p)| p > 0.0)
            .map(|(&v, &p)| (v, p))
            .collect();
        if pts.is_empty() {
            return Err(Error::EmptySupport);
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for (v, p) in pts {
            match out.last_mut() {
                Some(last) if v - last.0 <= TOLERANCE => last.1 += p,
                _ => out.push((v, p)),
            }
        }
        Ok(out)
    }
}

/// A nonnegative cost per scenario of a [`FiniteProbSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCost {
    scenarios: Arc<[String]>,
    values: Vec<f64>,
}

impl RandomCost {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scenarios(&self) -> &[String] {
        &self.scenarios
    }

    pub fn value(&self, scenario: &str) -> Option<f64> {
        self.scenarios
            .iter()
            .position(|s| s == scenario)
            .map(|i| self.values[i])
    }

    /// Pointwise `c·f` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> RandomCost {
        RandomCost {
            scenarios: Arc::clone(&self.scenarios),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            Relation::Gt => a - b > TOLERANCE,
            Relation::Lt => b - a > TOLERANCE,
            Relation::Ge => b - a <= TOLERANCE,
            Relation::Le => a - b <= TOLERANCE,
            Relation::Eq => (a - b).abs() <= TOLERANCE,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn av_space() -> FiniteProbSpace {
        FiniteProbSpace::new(&["w1", "w2", "w3", "w4"], &[0.98, 0.001, 0.009, 0.01]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    #[test]
    fn expectation_of_collision_costs() {
        let s = av_space();
        let t1 = s.cost(vec![0.0, 225.0, 0.0, 0.0]).unwrap();
        let t2 = s.cost(vec![0.0, 175.0, 175.0, 0.0]).unwrap();
        assert!(close(s.expectation(&t1).unwrap(), 0.225));
        assert!(close(s.expectation(&t2).unwrap(), 1.75));
        assert_eq!(s.expectation(&s.cost(vec![0.0; 4]).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn exceedance_between_trajectories() {
        let s = av_space();
        let t1 = s.cost(vec![0.0, 225.0, 0.0, 0.0]).unwrap();
        let t2 = s.cost(vec![0.0, 175.0, 175.0, 0.0]).unwrap();
        assert!(close(s.exceedance_prob(&t1, &t2, Relation::Gt).unwrap(), 0.001));
        assert!(close(s.exceedance_prob(&t1, &t2, Relation::Lt).unwrap(), 0.009));
        assert!(close(s.exceedance_prob(&t1, &t2, Relation::Eq).unwrap(), 0.99));
        assert_eq!(s.exceedance_prob(&t1, &t1, Relation::Gt).unwrap(), 0.0);
    }

    #[test]
    fn distribution_merges_and_sorts() {
        let s = av_space();
        let t1 = s.cost(vec![0.0, 225.0, 0.0, 0.0]).unwrap();
        let d = s.distribution(&t1).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d[0].0 == 0.0 && close(d[0].1, 0.999));
        assert!(d[1].0 == 225.0 && close(d[1].1, 0.001));
        assert_eq!(s.distribution(&s.cost(vec![5.0; 4]).unwrap()).unwrap().len(), 1);
        let d3 = s.distribution(&s.cost(vec![0.0; 4]).unwrap()).unwrap();
        assert!(d3[0].0 == 0.0 && close(d3[0].1, 1.0));
        let noisy = s.cost(vec![1.0, 1.0 + 1e-12, 2.0, 2.0]).unwrap();
        assert_eq!(s.distribution(&noisy).unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_spaces_and_costs() {
        let err = FiniteProbSpace::new(&["a", "b"], &[0.5, 0.6]).unwrap_err();
        assert_eq!(err, Error::Validation("probabilities sum to 1.1".into()));
        assert!(matches!(
            FiniteProbSpace::new(&["a", "a"], &[0.5, 0.5]),
            Err(Error::DuplicateElement(_))
        ));
        assert!(FiniteProbSpace::new(&["a", "b"], &[-0.5, 1.5]).is_err());
        let s = av_space();
        assert!(matches!(s.cost(vec![1.0]), Err(Error::DomainMismatch)));
        assert!(s.cost(vec![-1.0, 0.0, 0.0, 0.0]).is_err());
        let other = FiniteProbSpace::new(&["a", "b", "c", "d"], &[0.25; 4]).unwrap();
        let f = other.cost(vec![1.0; 4]).unwrap();
        assert_eq!(s.expectation(&f), Err(Error::DomainMismatch));
        assert_eq!(s.distribution(&f), Err(Error::DomainMismatch));
        assert_eq!(s.exceedance_prob(&f, &f, Relation::Gt), Err(Error::DomainMismatch));
    }

    fn arb_space_and_costs() -> impl Strategy<Value = (FiniteProbSpace, Vec<f64>, Vec<f64>)> {
        (1usize..7).prop_flat_map(|n| {
            (
                prop::collection::vec(0u32..5, n),
                prop::collection::vec(0.0f64..100.0, n),
                prop::collection::vec(0.0f64..100.0, n),
            )
                .prop_filter_map("needs positive mass", move |(w, f, g)| {
                    let total: u32 = w.iter().sum();
                    if total == 0 {
                        return None;
                    }
                    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
                    let probs: Vec<f64> = w.iter().map(|&x| x as f64 / total as f64).collect();
                    Some((FiniteProbSpace::new(&names, &probs).ok()?, f, g))
                })
        })
    }

    proptest! {
        #[test]
        fn expectation_is_linear((s, f, g) in arb_space_and_costs(), a in 0.0f64..5.0, b in 0.0f64..5.0) {
            let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
            let lhs = s.expectation(&s.cost(mix).unwrap()).unwrap();
            let rhs = a * s.expectation(&s.cost(f).unwrap()).unwrap()
                + b * s.expectation(&s.cost(g).unwrap()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }

        #[test]
        fn gt_and_le_partition((s, f, g) in arb_space_and_costs()) {
            let f = s.cost(f).unwrap();
            let g = s.cost(g).unwrap();
            let total = s.exceedance_prob(&f, &g, Relation::Gt).unwrap()
                + s.exceedance_prob(&f, &g, Relation::Le).unwrap();
            prop_assert!((total - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn distribution_reproduces_expectation((s, f, _g) in arb_space_and_costs()) {
            let f = s.cost(f).unwrap();
            let d = s.distribution(&f).unwrap();
            let mass: f64 = d.iter().map(|(_, p)| p).sum();
            let mean: f64 = d.iter().map(|(v, p)| v * p).sum();
            prop_assert!((mass - 1.0).abs() <= 1e-9);
            prop_assert!(d.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!((mean - s.expectation(&f).unwrap()).abs() <= 1e-9 * (1.0 + mean.abs()));
        }
    }
}
