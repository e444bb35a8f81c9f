//! Causal models: a DAG plus one conditional probability table per node.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::CheckedAdd;

use crate::distribution::{decode, table_size, JointDistribution};
use crate::error::CausalError;

use super::dag::Dag;

/// Tolerance on CPT row sums with floating-point entries.
pub const ROW_TOLERANCE: f64 = 1e-12;

/// A probability entry, kept exact when it was given as a fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prob {
    Rational(Ratio<i64>),
    Real(f64),
}

impl Prob {
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Prob::Rational(Ratio::new(numer, denom))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Prob::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Prob::Real(x) => x,
        }
    }
}

impl From<f64> for Prob {
    fn from(x: f64) -> Self {
        Prob::Real(x)
    }
}

/// Fractions print as `p/q` (or `p`), reals in a form that always contains `.` or `e`.
impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prob::Rational(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Prob::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Prob::Real(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for Prob {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(Prob::Rational(Ratio::new(n, d)));
        }
        if s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN") {
            return s.parse().map(Prob::Real).map_err(|_| format!("bad number {s:?}"));
        }
        s.parse::<i64>()
            .map(|n| Prob::Rational(Ratio::from_integer(n)))
            .map_err(|_| format!("bad number {s:?}"))
    }
}

/// `P(node | parents)`; `rows` is indexed by the parent assignment in mixed
/// radix over `parents` (first parent most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub node: String,
    pub parents: Vec<String>,
    pub rows: Vec<Vec<Prob>>,
}

impl Cpt {
    pub fn new(node: impl Into<String>, parents: &[&str], rows: Vec<Vec<Prob>>) -> Self {
        Cpt {
            node: node.into(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            rows,
        }
    }

    /// CPT with real entries.
    pub fn real(node: impl Into<String>, parents: &[&str], rows: Vec<Vec<f64>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Prob::Real).collect())
            .collect();
        Self::new(node, parents, rows)
    }

    /// Uniform prior for a root node.
    pub fn uniform(node: impl Into<String>, card: usize) -> Self {
        Self::new(node, &[], vec![vec![Prob::ratio(1, card as i64); card]])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalModel {
    dag: Dag,
    /// In node order; each CPT's parent list is a permutation of the node's parents.
    cpts: Vec<Cpt>,
    /// Maps each CPT's parent order to node indices.
    cpt_parents: Vec<Vec<usize>>,
    latent: BTreeSet<String>,
}

fn bad_cpt(node: &str, reason: impl Into<String>) -> CausalError {
    CausalError::InvalidCpt {
        node: node.to_string(),
        reason: reason.into(),
    }
}

fn check_row(node: &str, row: &[Prob], card: usize) -> Result<(), CausalError> {
    if row.len() != card {
        return Err(bad_cpt(node, format!("row has {} entries, expected {card}", row.len())));
    }
    if let Some(p) = row.iter().find(|p| !(p.value().is_finite() && p.value() >= 0.0)) {
        return Err(bad_cpt(node, format!("entry {p} is not a probability")));
    }
    let exact: Option<Ratio<i128>> = row.iter().try_fold(Ratio::from_integer(0i128), |acc, p| match p {
        Prob::Rational(r) => acc.checked_add(&Ratio::new(i128::from(*r.numer()), i128::from(*r.denom()))),
        Prob::Real(_) => None,
    });
    match exact {
        Some(sum) if sum != Ratio::from_integer(1) => {
            Err(bad_cpt(node, format!("row sums to {sum}, expected exactly 1")))
        }
        Some(_) => Ok(()),
        None => {
            let sum: f64 = row.iter().map(Prob::value).sum();
            if (sum - 1.0).abs() > ROW_TOLERANCE {
                Err(bad_cpt(node, format!("row sums to {sum}")))
            } else {
                Ok(())
            }
        }
    }
}

impl CausalModel {
    /// Validates and attaches CPTs (given in any order, one per node).
    pub fn new(dag: Dag, cpts: Vec<Cpt>) -> Result<Self, CausalError> {
        let mut ordered: Vec<Option<Cpt>> = vec![None; dag.len()];
        for cpt in cpts {
            let i = dag.index(&cpt.node)?;
            if ordered[i].is_some() {
                return Err(bad_cpt(&cpt.node, "given more than once"));
            }
            ordered[i] = Some(cpt);
        }
        let mut cpts = Vec::with_capacity(dag.len());
        let mut cpt_parents = Vec::with_capacity(dag.len());
        for (i, slot) in ordered.into_iter().enumerate() {
            let cpt = slot.ok_or_else(|| bad_cpt(dag.name(i), "missing"))?;
            let idx: Vec<usize> = cpt
                .parents
                .iter()
                .map(|p| dag.index(p))
                .collect::<Result<_, _>>()?;
            let given: BTreeSet<usize> = idx.iter().copied().collect();
            let actual: BTreeSet<usize> = dag.parents(i).iter().copied().collect();
            if given != actual || given.len() != idx.len() {
                return Err(bad_cpt(
                    &cpt.node,
                    format!(
                        "conditioning set {:?} differs from the parents {:?}",
                        cpt.parents,
                        dag.parents(i).iter().map(|&p| dag.name(p)).collect::<Vec<_>>()
                    ),
                ));
            }
            let rows = table_size(idx.iter().map(|&p| dag.card(p)));
            if cpt.rows.len() != rows {
                return Err(bad_cpt(
                    &cpt.node,
                    format!("{} rows given, parents need {rows}", cpt.rows.len()),
                ));
            }
            for row in &cpt.rows {
                check_row(&cpt.node, row, dag.card(i))?;
            }
            cpts.push(cpt);
            cpt_parents.push(idx);
        }
        Ok(CausalModel {
            dag,
            cpts,
            cpt_parents,
            latent: BTreeSet::new(),
        })
    }

    /// Marks nodes as latent: sampled by circuits but not measured.
    pub fn with_latent<I, S>(mut self, names: I) -> Result<Self, CausalError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for n in names {
            let n = n.into();
            self.dag.index(&n)?;
            self.latent.insert(n);
        }
        Ok(self)
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn cpt(&self, node: usize) -> &Cpt {
        &self.cpts[node]
    }

    /// Node indices of the CPT's conditioning variables, in the CPT's order.
    pub fn cpt_parent_indices(&self, node: usize) -> &[usize] {
        &self.cpt_parents[node]
    }

    pub fn latent(&self) -> &BTreeSet<String> {
        &self.latent
    }

    pub fn is_latent(&self, node: usize) -> bool {
        self.latent.contains(self.dag.name(node))
    }

    /// Row of `node`'s CPT selected by a full assignment of the graph.
    pub fn row_for(&self, node: usize, assignment: &[usize]) -> &[Prob] {
        let parents = &self.cpt_parents[node];
        let row = parents
            .iter()
            .fold(0, |acc, &p| acc * self.dag.card(p) + assignment[p]);
        &self.cpts[node].rows[row]
    }

    /// `P(node = value | parents)` under a full assignment.
    pub fn factor(&self, node: usize, assignment: &[usize]) -> f64 {
        self.row_for(node, assignment)[assignment[node]].value()
    }

    /// The product `Π_j P(X_j | Pa(X_j))` over every assignment.
    pub fn joint_distribution(&self) -> JointDistribution {
        let vars = self.dag.nodes().to_vec();
        let cards: Vec<usize> = vars.iter().map(|v| v.card).collect();
        let size = table_size(cards.iter().copied());
        let mut a = vec![0; cards.len()];
        let probs: Vec<f64> = (0..size)
            .map(|i| {
                decode(i, &cards, &mut a);
                (0..cards.len()).map(|n| self.factor(n, &a)).product()
            })
            .collect();
        JointDistribution::new(vars, probs).expect("valid CPTs give a normalized product")
    }
}

/// Free-function form of [`CausalModel::joint_distribution`].
pub fn joint_distribution(model: &CausalModel) -> JointDistribution {
    model.joint_distribution()
}
