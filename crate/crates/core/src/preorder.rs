//! Preorders over small finite sets of identifiers.
//!
//! A pair `(a, b)` in the relation reads "`a` ranks at least as high as `b`".
//! For rule priorities that is "at least as important"; for trajectory
//! rankings built by [`Preorder::from_relation`] it is "at least as risky".

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of comparing `a` against `b` in a preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Higher,
    Lower,
    Equal,
    Incomparable,
}

impl Verdict {
    /// Verdict from the two directed memberships `a ≥ b` and `b ≥ a`.
    pub fn from_relation(a_over_b: bool, b_over_a: bool) -> Self {
        match (a_over_b, b_over_a) {
            (true, true) => Verdict::Equal,
            (true, false) => Verdict::Higher,
            (false, true) => Verdict::Lower,
            (false, false) => Verdict::Incomparable,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Verdict::Higher => Verdict::Lower,
            Verdict::Lower => Verdict::Higher,
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Higher => "higher",
            Verdict::Lower => "lower",
            Verdict::Equal => "equal",
            Verdict::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    // row-major n*n, rel[a*n + b] is true iff (a, b) is in the relation
    rel: Vec<bool>,
}

impl Preorder {
    /// Reflexive-transitive closure of `edges`, each edge `(higher, lower)`.
    pub fn new<S, T>(elements: &[S], edges: &[(T, T)]) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut index = HashMap::with_capacity(elements.len());
        let mut names = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let e = e.as_ref();
            if index.insert(e.to_string(), i).is_some() {
                return Err(Error::DuplicateElement(e.to_string()));
            }
            names.push(e.to_string());
        }
        let n = names.len();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (hi, lo) in edges {
            let a = *index
                .get(hi.as_ref())
                .ok_or_else(|| Error::UnknownElement(hi.as_ref().to_string()))?;
            let b = *index
                .get(lo.as_ref())
                .ok_or_else(|| Error::UnknownElement(lo.as_ref().to_string()))?;
            rel[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if !rel[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
        Ok(Preorder {
            elements: names,
            index,
            rel,
        })
    }

    /// Builds a preorder from a dense relation given by `holds(i, j)`,
    /// closing it reflexively and transitively.
    pub fn from_relation<S: AsRef<str>>(
        elements: &[S],
        holds: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let n = elements.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && holds(i, j) {
                    edges.push((elements[i].as_ref(), elements[j].as_ref()));
                }
            }
        }
        Preorder::new(elements, &edges)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    /// `(a, b)` membership by index.
    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.len() + b]
    }

    pub fn contains(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.holds(self.index_of(a)?, self.index_of(b)?))
    }

    /// Strictly higher: `(a, b)` present and `(b, a)` absent.
    pub fn strictly_above(&self, a: usize, b: usize) -> bool {
        self.holds(a, b) && !self.holds(b, a)
    }

    pub fn compare_idx(&self, a: usize, b: usize) -> Verdict {
        Verdict::from_relation(self.holds(a, b), self.holds(b, a))
    }

    pub fn compare(&self, a: &str, b: &str) -> Result<Verdict> {
        Ok(self.compare_idx(self.index_of(a)?, self.index_of(b)?))
    }

    /// All pairs of the closed relation, in declaration order.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.holds(a, b) {
                    out.push((self.elements[a].as_str(), self.elements[b].as_str()));
                }
            }
        }
        out
    }

    /// Elements of `subset` with nothing in `subset` strictly below them.
    /// Output keeps the order of `subset`.
    pub fn minimal_elements<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<String>> {
        let idx = subset
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(idx
            .iter()
            .filter(|&&a| !idx.iter().any(|&b| self.strictly_above(a, b)))
            .map(|&a| self.elements[a].clone())
            .collect())
    }
}
