use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::CategoricalVariable;

/// Directed acyclic graph over named nodes.
///
/// Parent lists are ordered; the order fixes the configuration indexing of
/// the node's conditional probability table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    nodes: Vec<String>,
    parents: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl Dag {
    /// Graph with the given nodes and no arcs.
    pub fn empty<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, name) in nodes.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        let parents = vec![Vec::new(); nodes.len()];
        Ok(Dag { nodes, parents, index })
    }

    /// Build from explicit ordered parent lists, validating acyclicity.
    pub fn from_parents(nodes: Vec<String>, parents: Vec<Vec<usize>>) -> Result<Self> {
        let mut dag = Dag::empty(nodes)?;
        if parents.len() != dag.len() {
            return Err(Error::InvalidNetwork(format!(
                "{} parent lists for {} nodes",
                parents.len(),
                dag.len()
            )));
        }
        for (child, ps) in parents.iter().enumerate() {
            for (i, &p) in ps.iter().enumerate() {
                if p >= dag.len() {
                    return Err(Error::InvalidNetwork(format!("parent index {p} out of range")));
                }
                if p == child {
                    return Err(dag.arc_error(p, child, "self-loop"));
                }
                if ps[..i].contains(&p) {
                    return Err(dag.arc_error(p, child, "duplicate arc"));
                }
            }
        }
        topological_order(&dag.nodes, &parents)?;
        dag.parents = parents;
        Ok(dag)
    }

    /// Build from `(from, to)` name pairs.
    pub fn from_arcs<S: AsRef<str>>(nodes: &[S], arcs: &[(S, S)]) -> Result<Self> {
        let mut dag = Dag::empty(nodes.iter().map(|s| s.as_ref().to_string()))?;
        for (from, to) in arcs {
            let f = dag.require(from.as_ref())?;
            let t = dag.require(to.as_ref())?;
            dag.add_arc(f, t)?;
        }
        Ok(dag)
    }

    fn arc_error(&self, from: usize, to: usize, reason: &str) -> Error {
        Error::InvalidArc {
            from: self.nodes[from].clone(),
            to: self.nodes[to].clone(),
            reason: reason.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn name(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn parent_names(&self, i: usize) -> Vec<&str> {
        self.parents[i].iter().map(|&p| self.nodes[p].as_str()).collect()
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parents[c].contains(&i)).collect()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.parents[to].contains(&from)
    }

    /// Are `a` and `b` joined by an arc in either direction?
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_arc(a, b) || self.has_arc(b, a)
    }

    /// All arcs as `(from, to)`, ordered by child then parent position.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
            .collect()
    }

    pub fn n_arcs(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    /// Is there a directed path `from ⇝ to` (length ≥ 0)?
    pub fn has_path(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let children = self.children_lists();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                if c == to {
                    return true;
                }
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    pub(crate) fn children_lists(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.len()];
        for (c, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                children[p].push(c);
            }
        }
        children
    }

    /// Append `from` to the parents of `to`. Rejects self-loops, duplicates
    /// and arcs that would close a cycle.
    pub fn add_arc(&mut self, from: usize, to: usize) -> Result<()> {
        if from == to {
            return Err(self.arc_error(from, to, "self-loop"));
        }
        if self.has_arc(from, to) {
            return Err(self.arc_error(from, to, "duplicate arc"));
        }
        if self.has_path(to, from) {
            return Err(self.arc_error(from, to, "would create a cycle"));
        }
        self.parents[to].push(from);
        Ok(())
    }

    pub fn remove_arc(&mut self, from: usize, to: usize) -> bool {
        let before = self.parents[to].len();
        self.parents[to].retain(|&p| p != from);
        before != self.parents[to].len()
    }

    /// Sort every parent list by node index.
    pub fn canonicalize(&mut self) {
        for ps in &mut self.parents {
            ps.sort_unstable();
        }
    }

    /// Nodes in an order placing parents before children (smallest index first
    /// among ready nodes).
    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(&self.nodes, &self.parents).expect("Dag invariant: acyclic")
    }

    /// Ancestors of the given nodes, including the nodes themselves.
    pub fn ancestral_set(&self, of: &[usize]) -> Vec<bool> {
        let mut mark = vec![false; self.len()];
        let mut stack: Vec<usize> = of.to_vec();
        while let Some(v) = stack.pop() {
            if mark[v] {
                continue;
            }
            mark[v] = true;
            stack.extend(self.parents[v].iter().copied().filter(|&p| !mark[p]));
        }
        mark
    }

    /// Strict ancestors of `node`.
    pub fn ancestors(&self, node: usize) -> Vec<usize> {
        let mark = self.ancestral_set(&[node]);
        (0..self.len()).filter(|&i| mark[i] && i != node).collect()
    }

    /// d-separation of `x` and `y` given `given`, by name.
    pub fn d_separated(&self, x: &str, y: &str, given: &[&str]) -> Result<bool> {
        let xi = self.require(x)?;
        let yi = self.require(y)?;
        let zi = given.iter().map(|g| self.require(g)).collect::<Result<Vec<_>>>()?;
        if xi == yi {
            return Err(Error::InvalidQuery(format!("d-separation of `{x}` with itself")));
        }
        if zi.contains(&xi) || zi.contains(&yi) {
            return Err(Error::InvalidQuery(
                "queried node is in the conditioning set".to_string(),
            ));
        }
        Ok(!self.reachable(xi, &zi)[yi])
    }

    /// Nodes d-connected to `source` given `given` (Bayes-ball traversal).
    ///
    /// A trail passes a non-collider iff it is unobserved, and a collider iff
    /// the collider or one of its descendants is observed.
    pub fn reachable(&self, source: usize, given: &[usize]) -> Vec<bool> {
        let n = self.len();
        let mut observed = vec![false; n];
        for &z in given {
            observed[z] = true;
        }
        let has_observed_desc = self.ancestral_set(given);
        let children = self.children_lists();

        // direction: true = arrived from a child (moving up), false = from a parent.
        let mut visited = vec![[false; 2]; n];
        let mut reach = vec![false; n];
        let mut queue = VecDeque::from([(source, true)]);
        while let Some((v, up)) = queue.pop_front() {
            let slot = usize::from(up);
            if visited[v][slot] {
                continue;
            }
            visited[v][slot] = true;
            if !observed[v] {
                reach[v] = true;
            }
            if up {
                if !observed[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, true)));
                    queue.extend(children[v].iter().map(|&c| (c, false)));
                }
            } else {
                if !observed[v] {
                    queue.extend(children[v].iter().map(|&c| (c, false)));
                }
                if has_observed_desc[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, true)));
                }
            }
        }
        reach[source] = false;
        reach
    }
}

/// Kahn ordering over raw parent lists; reports one offending cycle on failure.
pub fn topological_order(names: &[String], parents: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Walk parents among the remaining nodes until a node repeats.
    let remaining: Vec<bool> = (0..n).map(|i| indegree[i] > 0).collect();
    let start = (0..n).find(|&i| remaining[i]).expect("some node left");
    let mut path = vec![start];
    let mut pos = vec![usize::MAX; n];
    pos[start] = 0;
    let mut v = start;
    loop {
        let p = *parents[v]
            .iter()
            .find(|&&p| remaining[p])
            .expect("remaining node has a remaining parent");
        if pos[p] != usize::MAX {
            let mut cycle: Vec<String> = path[pos[p]..].iter().rev().map(|&i| names[i].clone()).collect();
            cycle.push(cycle[0].clone());
            return Err(Error::CycleDetected(cycle));
        }
        pos[p] = path.len();
        path.push(p);
        v = p;
    }
}

/// Number of free parameters: Σ q_i (r_i − 1).
pub fn parameter_count(dag: &Dag, variables: &[CategoricalVariable]) -> usize {
    (0..dag.len())
        .map(|i| {
            let q: usize = dag.parents(i).iter().map(|&p| variables[p].cardinality()).product();
            q * (variables[i].cardinality() - 1)
        })
        .sum()
}
