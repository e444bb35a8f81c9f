//! Exact discrete distributions over named finite-valued variables.
//!
//! A [`JointDistribution`] stores a dense probability table in mixed-radix
//! order: the first variable is the most significant digit. Variables may be
//! flagged as *inputs* (settings chosen by an experimenter); such variables
//! carry a uniform prior and relations involving them are read conditionally.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::CausalError;

/// Tolerance on total probability mass.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub card: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, card: usize) -> Self {
        Variable {
            name: name.into(),
            card,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    vars: Vec<Variable>,
    probs: Vec<f64>,
    inputs: BTreeSet<String>,
}

pub(crate) fn table_size(cards: impl IntoIterator<Item = usize>) -> usize {
    cards.into_iter().product()
}

/// Decodes a mixed-radix index into an assignment.
pub(crate) fn decode(mut index: usize, cards: &[usize], out: &mut [usize]) {
    for (slot, &card) in out.iter_mut().zip(cards).rev() {
        *slot = index % card;
        index /= card;
    }
}

pub(crate) fn encode(assignment: &[usize], cards: &[usize]) -> usize {
    assignment
        .iter()
        .zip(cards)
        .fold(0, |acc, (&v, &card)| acc * card + v)
}

impl JointDistribution {
    /// Builds a distribution from a dense table, checking non-negativity and unit mass.
    pub fn new(vars: Vec<Variable>, probs: Vec<f64>) -> Result<Self, CausalError> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if v.card == 0 {
                return Err(CausalError::ZeroCardinality(v.name.clone()));
            }
            if !seen.insert(v.name.as_str()) {
                return Err(CausalError::DuplicateNode(v.name.clone()));
            }
        }
        let size = table_size(vars.iter().map(|v| v.card));
        if probs.len() != size {
            return Err(CausalError::InvalidDistribution(format!(
                "table has {} entries, variables need {size}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(CausalError::InvalidDistribution(format!(
                "negative or non-finite probability {p}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(CausalError::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(JointDistribution {
            vars,
            probs,
            inputs: BTreeSet::new(),
        })
    }

    /// Builds a distribution by evaluating `f` on every assignment.
    pub fn from_fn(
        vars: Vec<Variable>,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self, CausalError> {
        let cards: Vec<usize> = vars.iter().map(|v| v.card).collect();
        let size = table_size(cards.iter().copied());
        let mut assignment = vec![0; cards.len()];
        let probs = (0..size)
            .map(|i| {
                decode(i, &cards, &mut assignment);
                f(&assignment)
            })
            .collect();
        Self::new(vars, probs)
    }

    /// Marks variables as inputs. Fails if a name is unknown.
    pub fn with_inputs<I, S>(mut self, names: I) -> Result<Self, CausalError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for name in names {
            let name = name.into();
            self.var_index(&name)?;
            self.inputs.insert(name);
        }
        Ok(self)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn inputs(&self) -> &BTreeSet<String> {
        &self.inputs
    }

    pub fn cards(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.card).collect()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn var_index(&self, name: &str) -> Result<usize, CausalError> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| CausalError::UnknownNode(name.to_string()))
    }

    pub fn prob(&self, assignment: &[usize]) -> f64 {
        self.probs[encode(assignment, &self.cards())]
    }

    /// Iterates `(assignment, probability)` pairs in table order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let cards = self.cards();
        self.probs.iter().enumerate().map(move |(i, &p)| {
            let mut a = vec![0; cards.len()];
            decode(i, &cards, &mut a);
            (a, p)
        })
    }

    /// Marginal over the named variables, in the order given.
    pub fn marginal<S: AsRef<str>>(&self, names: &[S]) -> Result<JointDistribution, CausalError> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.var_index(n.as_ref()))
            .collect::<Result<_, _>>()?;
        let vars: Vec<Variable> = idx.iter().map(|&i| self.vars[i].clone()).collect();
        let table = self.marginal_table(&idx);
        let inputs = self
            .inputs
            .iter()
            .filter(|n| vars.iter().any(|v| &v.name == *n))
            .cloned()
            .collect();
        Ok(JointDistribution {
            vars,
            probs: table,
            inputs,
        })
    }

    /// Dense marginal table over the variables at positions `idx` (mixed radix in that order).
    pub(crate) fn marginal_table(&self, idx: &[usize]) -> Vec<f64> {
        let cards = self.cards();
        let sub_cards: Vec<usize> = idx.iter().map(|&i| cards[i]).collect();
        let mut out = vec![0.0; table_size(sub_cards.iter().copied())];
        let mut a = vec![0; cards.len()];
        let mut sub = vec![0; idx.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            decode(i, &cards, &mut a);
            for (s, &k) in sub.iter_mut().zip(idx) {
                *s = a[k];
            }
            out[encode(&sub, &sub_cards)] += p;
        }
        out
    }

    fn check_same_shape(&self, other: &JointDistribution) -> Result<(), CausalError> {
        if self.vars != other.vars {
            return Err(CausalError::VariableMismatch(format!(
                "{:?} vs {:?}",
                self.vars.iter().map(|v| &v.name).collect::<Vec<_>>(),
                other.vars.iter().map(|v| &v.name).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }

    /// Largest absolute difference between corresponding entries.
    pub fn max_abs_diff(&self, other: &JointDistribution) -> Result<f64, CausalError> {
        self.check_same_shape(other)?;
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn total_variation(&self, other: &JointDistribution) -> Result<f64, CausalError> {
        self.check_same_shape(other)?;
        Ok(0.5
            * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }
}

impl fmt::Display for JointDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_distribution(self))
    }
}
