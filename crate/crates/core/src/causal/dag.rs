//! Directed acyclic graphs over named finite-valued variables.

use std::collections::{BTreeSet, VecDeque};

use crate::distribution::Variable;
use crate::error::CausalError;

/// A causal structure. Edges point from direct cause to effect.
#[derive(Debug, Clone)]
pub struct Dag {
    nodes: Vec<Variable>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

/// Genealogical sets of one node, by name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Genealogy {
    pub parents: BTreeSet<String>,
    pub ancestors: BTreeSet<String>,
    pub descendants: BTreeSet<String>,
    /// Every node outside the descendants, excluding the node itself.
    pub nondescendants: BTreeSet<String>,
}

impl Dag {
    pub fn new() -> Self {
        Dag {
            nodes: Vec::new(),
            parents: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Builds a graph from `(name, cardinality)` nodes and `(from, to)` edges.
    pub fn from_parts<N, E>(nodes: N, edges: E) -> Result<Self, CausalError>
    where
        N: IntoIterator<Item = (String, usize)>,
        E: IntoIterator<Item = (String, String)>,
    {
        let mut dag = Dag::new();
        for (name, card) in nodes {
            dag.add_node(name, card)?;
        }
        for (from, to) in edges {
            dag.add_edge(&from, &to)?;
        }
        Ok(dag)
    }

    /// Convenience for literals: `Dag::build(&[("R", 2)], &[("R", "S")])`.
    pub fn build(nodes: &[(&str, usize)], edges: &[(&str, &str)]) -> Result<Self, CausalError> {
        Self::from_parts(
            nodes.iter().map(|(n, c)| (n.to_string(), *c)),
            edges.iter().map(|(a, b)| (a.to_string(), b.to_string())),
        )
    }

    pub fn add_node(&mut self, name: impl Into<String>, card: usize) -> Result<usize, CausalError> {
        let name = name.into();
        if card == 0 {
            return Err(CausalError::ZeroCardinality(name));
        }
        if self.nodes.iter().any(|v| v.name == name) {
            return Err(CausalError::DuplicateNode(name));
        }
        self.nodes.push(Variable::new(name, card));
        self.parents.push(Vec::new());
        self.children.push(Vec::new());
        Ok(self.nodes.len() - 1)
    }

    /// Adds `from → to`, rejecting unknown endpoints, repeats and cycles.
    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<(), CausalError> {
        let (f, t) = (self.index(from)?, self.index(to)?);
        if f == t || self.reaches(t, f) {
            return Err(CausalError::Cycle(from.to_string(), to.to_string()));
        }
        if !self.children[f].contains(&t) {
            self.children[f].push(t);
            self.parents[t].push(f);
        }
        Ok(())
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        self.descendants_of(from).contains(&to)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Variable] {
        &self.nodes
    }

    pub fn name(&self, i: usize) -> &str {
        &self.nodes[i].name
    }

    pub fn card(&self, i: usize) -> usize {
        self.nodes[i].card
    }

    pub fn index(&self, name: &str) -> Result<usize, CausalError> {
        self.nodes
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| CausalError::UnknownNode(name.to_string()))
    }

    /// Parents in edge-insertion order.
    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|t| self.parents[t].iter().map(move |&f| (f, t)))
            .collect()
    }

    /// Kahn order; ties are broken by declaration order.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.len()).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &c in &self.children[i] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        order
    }

    fn walk<'a>(&'a self, start: usize, next: impl Fn(usize) -> &'a [usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = next(start).to_vec();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend_from_slice(next(v));
            }
        }
        seen
    }

    pub fn ancestors_of(&self, i: usize) -> BTreeSet<usize> {
        self.walk(i, |v| &self.parents[v])
    }

    pub fn descendants_of(&self, i: usize) -> BTreeSet<usize> {
        self.walk(i, |v| &self.children[v])
    }

    pub fn nondescendants_of(&self, i: usize) -> BTreeSet<usize> {
        let de = self.descendants_of(i);
        (0..self.len()).filter(|v| *v != i && !de.contains(v)).collect()
    }

    fn names(&self, set: impl IntoIterator<Item = usize>) -> BTreeSet<String> {
        set.into_iter().map(|i| self.name(i).to_string()).collect()
    }

    pub fn genealogy(&self, node: &str) -> Result<Genealogy, CausalError> {
        let i = self.index(node)?;
        Ok(Genealogy {
            parents: self.names(self.parents[i].iter().copied()),
            ancestors: self.names(self.ancestors_of(i)),
            descendants: self.names(self.descendants_of(i)),
            nondescendants: self.names(self.nondescendants_of(i)),
        })
    }

    pub(crate) fn index_set<S: AsRef<str>>(&self, names: &[S]) -> Result<BTreeSet<usize>, CausalError> {
        names.iter().map(|n| self.index(n.as_ref())).collect()
    }

    /// Whether `conditioning` screens off every path between `left` and `right`.
    pub fn d_separated<S: AsRef<str>>(
        &self,
        left: &[S],
        right: &[S],
        conditioning: &[S],
    ) -> Result<bool, CausalError> {
        let j = self.index_set(left)?;
        let k = self.index_set(right)?;
        let l = self.index_set(conditioning)?;
        self.d_separated_idx(&j, &k, &l)
    }

    pub fn d_separated_idx(
        &self,
        left: &BTreeSet<usize>,
        right: &BTreeSet<usize>,
        conditioning: &BTreeSet<usize>,
    ) -> Result<bool, CausalError> {
        if left.is_empty() {
            return Err(CausalError::EmptySet("J"));
        }
        if right.is_empty() {
            return Err(CausalError::EmptySet("K"));
        }
        for (a, b) in [(left, right), (left, conditioning), (right, conditioning)] {
            if let Some(&shared) = a.intersection(b).next() {
                return Err(CausalError::NotDisjoint(self.name(shared).to_string()));
            }
        }
        Ok(!self.active_reach(left, conditioning).iter().any(|v| right.contains(v)))
    }

    /// Nodes joined to `sources` by a path that is active given `conditioning`.
    ///
    /// Traversal over (node, direction) states: `Up` means the node was
    /// entered from one of its children, `Down` from one of its parents. A
    /// chain or fork passes through a node only if it is unconditioned; a
    /// collider passes only if the node is in the conditioning set or is an
    /// ancestor of a member of it.
    fn active_reach(
        &self,
        sources: &BTreeSet<usize>,
        conditioning: &BTreeSet<usize>,
    ) -> BTreeSet<usize> {
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
        enum Dir {
            Up,
            Down,
        }

        let mut opens_collider = conditioning.clone();
        for &c in conditioning {
            opens_collider.extend(self.ancestors_of(c));
        }

        let mut visited = BTreeSet::new();
        let mut reached = BTreeSet::new();
        let mut queue: VecDeque<(usize, Dir)> = sources.iter().map(|&s| (s, Dir::Up)).collect();
        while let Some((v, dir)) = queue.pop_front() {
            if !visited.insert((v, dir)) {
                continue;
            }
            let observed = conditioning.contains(&v);
            if !observed {
                reached.insert(v);
            }
            match dir {
                Dir::Up if !observed => {
                    queue.extend(self.parents[v].iter().map(|&p| (p, Dir::Up)));
                    queue.extend(self.children[v].iter().map(|&c| (c, Dir::Down)));
                }
                Dir::Up => {}
                Dir::Down => {
                    if !observed {
                        queue.extend(self.children[v].iter().map(|&c| (c, Dir::Down)));
                    }
                    if opens_collider.contains(&v) {
                        queue.extend(self.parents[v].iter().map(|&p| (p, Dir::Up)));
                    }
                }
            }
        }
        reached
    }
}

/// Equal when nodes and parent lists agree; child order is not compared.
impl PartialEq for Dag {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.parents == other.parents
    }
}

impl Eq for Dag {}

impl Default for Dag {
    fn default() -> Self {
        Self::new()
    }
}
