//! Conditional-independence relations, graphical and statistical.

use std::collections::BTreeSet;
use std::fmt;

use crate::distribution::{decode, table_size, JointDistribution};
use crate::error::CausalError;

use super::dag::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CiKind {
    DSeparation,
    Statistical,
}

/// `(J ⊥ K | L)` over named nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CiRelation {
    pub j: BTreeSet<String>,
    pub k: BTreeSet<String>,
    pub l: BTreeSet<String>,
    pub kind: CiKind,
}

fn owned<S: AsRef<str>>(names: &[S]) -> BTreeSet<String> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl CiRelation {
    pub fn new<S: AsRef<str>>(j: &[S], k: &[S], l: &[S], kind: CiKind) -> Result<Self, CausalError> {
        let rel = CiRelation {
            j: owned(j),
            k: owned(k),
            l: owned(l),
            kind,
        };
        rel.check_disjoint()?;
        Ok(rel)
    }

    pub fn statistical<S: AsRef<str>>(j: &[S], k: &[S], l: &[S]) -> Result<Self, CausalError> {
        Self::new(j, k, l, CiKind::Statistical)
    }

    pub fn graphical<S: AsRef<str>>(j: &[S], k: &[S], l: &[S]) -> Result<Self, CausalError> {
        Self::new(j, k, l, CiKind::DSeparation)
    }

    fn check_disjoint(&self) -> Result<(), CausalError> {
        for (a, b) in [(&self.j, &self.k), (&self.j, &self.l), (&self.k, &self.l)] {
            if let Some(shared) = a.intersection(b).next() {
                return Err(CausalError::NotDisjoint(shared.clone()));
            }
        }
        Ok(())
    }

    /// Same sets up to swapping J and K, ignoring the kind.
    pub fn same_as(&self, other: &CiRelation) -> bool {
        self.l == other.l
            && ((self.j == other.j && self.k == other.k) || (self.j == other.k && self.k == other.j))
    }

    /// Does `dag` d-separate J from K given L?
    pub fn holds_in(&self, dag: &Dag) -> Result<bool, CausalError> {
        let v = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>();
        dag.d_separated(&v(&self.j), &v(&self.k), &v(&self.l))
    }
}

impl fmt::Display for CiRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(",");
        write!(f, "({} ⊥ {} | {})", join(&self.j), join(&self.k), join(&self.l))?;
        if self.kind == CiKind::DSeparation {
            f.write_str("_d")?;
        }
        Ok(())
    }
}

/// Largest `|P(j,k|l) − P(j|l)P(k|l)|` over assignments with `P(l) > 0`.
pub fn ci_deviation<S: AsRef<str>>(
    dist: &JointDistribution,
    j: &[S],
    k: &[S],
    l: &[S],
) -> Result<f64, CausalError> {
    let idx = |names: &[S]| -> Result<Vec<usize>, CausalError> {
        names.iter().map(|n| dist.var_index(n.as_ref())).collect()
    };
    let (ji, ki, li) = (idx(j)?, idx(k)?, idx(l)?);
    if ji.is_empty() {
        return Err(CausalError::EmptySet("J"));
    }
    if ki.is_empty() {
        return Err(CausalError::EmptySet("K"));
    }
    let all: Vec<usize> = li.iter().chain(&ji).chain(&ki).copied().collect();
    let mut seen = BTreeSet::new();
    if let Some(&dup) = all.iter().find(|&&v| !seen.insert(v)) {
        return Err(CausalError::NotDisjoint(dist.variables()[dup].name.clone()));
    }

    let cards = dist.cards();
    let card_of = |ix: &[usize]| table_size(ix.iter().map(|&i| cards[i]));
    let (nl, nj, nk) = (card_of(&li), card_of(&ji), card_of(&ki));
    // Table over (L, J, K), L most significant.
    let lj_k = dist.marginal_table(&all);
    let mut worst: f64 = 0.0;
    let mut scratch = [0; 2];
    for lv in 0..nl {
        let block = &lj_k[lv * nj * nk..(lv + 1) * nj * nk];
        let pl: f64 = block.iter().sum();
        if pl <= 0.0 {
            continue;
        }
        let pj: Vec<f64> = (0..nj).map(|a| block[a * nk..(a + 1) * nk].iter().sum()).collect();
        let pk: Vec<f64> = (0..nk).map(|b| (0..nj).map(|a| block[a * nk + b]).sum()).collect();
        for (idx, &pjk) in block.iter().enumerate() {
            decode(idx, &[nj, nk], &mut scratch);
            let (a, b) = (scratch[0], scratch[1]);
            let d = (pjk / pl - (pj[a] / pl) * (pk[b] / pl)).abs();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Whether the statistical relation holds in `dist` within `tol`.
pub fn ci_holds(dist: &JointDistribution, rel: &CiRelation, tol: f64) -> Result<bool, CausalError> {
    if rel.kind != CiKind::Statistical {
        return Err(CausalError::WrongRelationKind("Statistical"));
    }
    fn v(s: &BTreeSet<String>) -> Vec<&str> {
        s.iter().map(String::as_str).collect()
    }
    Ok(ci_deviation(dist, &v(&rel.j), &v(&rel.k), &v(&rel.l))? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::model::{CausalModel, Cpt};
    use crate::distribution::Variable;

    fn bits(names: &[&str], probs: Vec<f64>) -> JointDistribution {
        JointDistribution::new(names.iter().map(|n| Variable::new(*n, 2)).collect(), probs).unwrap()
    }

    #[test]
    fn independent_bits() {
        let d = bits(&["J", "K"], vec![0.25; 4]);
        let rel = CiRelation::statistical(&["J"], &["K"], &[]).unwrap();
        assert!(ci_holds(&d, &rel, 1e-12).unwrap());
    }

    #[test]
    fn correlated_bits() {
        let d = bits(&["J", "K"], vec![0.5, 0.0, 0.0, 0.5]);
        let rel = CiRelation::statistical(&["J"], &["K"], &[]).unwrap();
        assert!(!ci_holds(&d, &rel, 1e-12).unwrap());
        assert!((ci_deviation(&d, &["J"], &["K"], &[]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn common_cause_screens_off() {
        let dag = Dag::build(&[("L", 2), ("J", 2), ("K", 2)], &[("L", "J"), ("L", "K")]).unwrap();
        let m = CausalModel::new(
            dag,
            vec![
                Cpt::real("L", &[], vec![vec![0.4, 0.6]]),
                Cpt::real("J", &["L"], vec![vec![0.9, 0.1], vec![0.2, 0.8]]),
                Cpt::real("K", &["L"], vec![vec![0.7, 0.3], vec![0.35, 0.65]]),
            ],
        )
        .unwrap();
        let d = m.joint_distribution();
        let given = CiRelation::statistical(&["J"], &["K"], &["L"]).unwrap();
        let marginal = CiRelation::statistical(&["J"], &["K"], &[]).unwrap();
        assert!(ci_holds(&d, &given, 1e-12).unwrap());
        assert!(!ci_holds(&d, &marginal, 1e-3).unwrap());
    }

    #[test]
    fn zero_probability_conditions_are_skipped() {
        // L is always 0; J and K are independent given L = 0.
        let d = JointDistribution::from_fn(
            ["L", "J", "K"].iter().map(|n| Variable::new(*n, 2)).collect(),
            |a| if a[0] == 0 { 0.25 } else { 0.0 },
        )
        .unwrap();
        let rel = CiRelation::statistical(&["J"], &["K"], &["L"]).unwrap();
        assert!(ci_holds(&d, &rel, 0.0).unwrap());
    }

    #[test]
    fn relation_errors() {
        assert_eq!(
            CiRelation::statistical(&["A"], &["B"], &["A"]).unwrap_err(),
            CausalError::NotDisjoint("A".into())
        );
        let d = bits(&["J", "K"], vec![0.25; 4]);
        let rel = CiRelation::statistical(&["J"], &["Q"], &[]).unwrap();
        assert_eq!(ci_holds(&d, &rel, 1e-9), Err(CausalError::UnknownNode("Q".into())));
        let g = CiRelation::graphical(&["J"], &["K"], &[]).unwrap();
        assert!(ci_holds(&d, &g, 1e-9).is_err());
    }

    #[test]
    fn display_and_symmetry() {
        let a = CiRelation::statistical(&["B"], &["X"], &["Y"]).unwrap();
        let b = CiRelation::graphical(&["X"], &["B"], &["Y"]).unwrap();
        assert_eq!(a.to_string(), "(B ⊥ X | Y)");
        assert_eq!(b.to_string(), "(X ⊥ B | Y)_d");
        assert!(a.same_as(&b));
    }
}
