//! Markov and faithfulness audits of a distribution against a graph.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::distribution::JointDistribution;
use crate::error::CausalError;

use super::ci::{ci_deviation, CiKind, CiRelation};
use super::dag::Dag;
use super::model::CausalModel;

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovViolation {
    pub node: String,
    /// `(T ⊥ Nd(T)∖Pa(T) | Pa(T))`
    pub relation: CiRelation,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MarkovReport {
    pub violations: Vec<MarkovViolation>,
    pub nodes_checked: usize,
}

impl MarkovReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_variables(dag: &Dag, dist: &JointDistribution) -> Result<(), CausalError> {
    let graph: BTreeSet<_> = dag.nodes().iter().map(|v| (&v.name, v.card)).collect();
    let data: BTreeSet<_> = dist.variables().iter().map(|v| (&v.name, v.card)).collect();
    if graph != data {
        return Err(CausalError::VariableMismatch(format!(
            "graph has {graph:?}, distribution has {data:?}"
        )));
    }
    Ok(())
}

/// Checks `P(T | Nd(T), Pa(T)) = P(T | Pa(T))` for every node of `model`.
pub fn markov_audit(model: &CausalModel, tol: f64) -> Result<MarkovReport, CausalError> {
    markov_audit_joint(model.dag(), &model.joint_distribution(), tol)
}

/// Markov audit of an arbitrary joint distribution against `dag`.
pub fn markov_audit_joint(
    dag: &Dag,
    dist: &JointDistribution,
    tol: f64,
) -> Result<MarkovReport, CausalError> {
    check_variables(dag, dist)?;
    let mut report = MarkovReport::default();
    for t in 0..dag.len() {
        report.nodes_checked += 1;
        let parents: BTreeSet<usize> = dag.parents(t).iter().copied().collect();
        let others: Vec<&str> = dag
            .nondescendants_of(t)
            .into_iter()
            .filter(|v| !parents.contains(v))
            .map(|v| dag.name(v))
            .collect();
        if others.is_empty() {
            continue;
        }
        let pa: Vec<&str> = parents.iter().map(|&p| dag.name(p)).collect();
        let deviation = ci_deviation(dist, &[dag.name(t)], &others, &pa)?;
        if deviation > tol {
            report.violations.push(MarkovViolation {
                node: dag.name(t).to_string(),
                relation: CiRelation::statistical(&[dag.name(t)], &others, &pa)?,
                deviation,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FaithfulnessReport {
    /// Some statistical independence is not implied by d-separation.
    pub finetuned: bool,
    /// Statistical independences the graph does not encode.
    pub mismatches: Vec<CiRelation>,
    /// d-separations the distribution violates (the graph is not even Markov for it).
    pub markov_violations: Vec<CiRelation>,
    pub relations_checked: usize,
}

impl FaithfulnessReport {
    /// Whether the mismatch list contains `(j ⊥ k | l)` in either orientation.
    pub fn flags(&self, j: &str, k: &str, l: &[&str]) -> bool {
        let probe = CiRelation {
            j: BTreeSet::from([j.to_string()]),
            k: BTreeSet::from([k.to_string()]),
            l: l.iter().map(|s| s.to_string()).collect(),
            kind: CiKind::Statistical,
        };
        self.mismatches.iter().any(|m| m.same_as(&probe))
    }
}

/// Compares every singleton relation `(j ⊥ k | L)` in `dist` with d-separation in `dag`.
pub fn faithfulness_audit(
    dag: &Dag,
    dist: &JointDistribution,
    tol: f64,
) -> Result<FaithfulnessReport, CausalError> {
    check_variables(dag, dist)?;
    let n = dag.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();

    type Outcome = (CiRelation, bool, bool);
    let per_pair: Vec<Result<Vec<Outcome>, CausalError>> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let rest: Vec<usize> = (0..n).filter(|&v| v != j && v != k).collect();
            let mut out = Vec::with_capacity(1 << rest.len());
            for mask in 0u32..1 << rest.len() {
                let l: BTreeSet<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let separated =
                    dag.d_separated_idx(&BTreeSet::from([j]), &BTreeSet::from([k]), &l)?;
                let l_names: Vec<&str> = l.iter().map(|&v| dag.name(v)).collect();
                let independent =
                    ci_deviation(dist, &[dag.name(j)], &[dag.name(k)], &l_names)? <= tol;
                let rel = CiRelation::statistical(&[dag.name(j)], &[dag.name(k)], &l_names)?;
                out.push((rel, separated, independent));
            }
            Ok(out)
        })
        .collect();

    let mut report = FaithfulnessReport::default();
    for outcomes in per_pair {
        for (rel, separated, independent) in outcomes? {
            report.relations_checked += 1;
            match (separated, independent) {
                (false, true) => report.mismatches.push(rel),
                (true, false) => report.markov_violations.push(CiRelation {
                    kind: CiKind::DSeparation,
                    ..rel
                }),
                _ => {}
            }
        }
    }
    report.finetuned = !report.mismatches.is_empty();
    Ok(report)
}
