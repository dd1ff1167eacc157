use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::Dag;

/// Status of an unordered pair `(a, b)`, `a < b`, in a CPDAG.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairStatus {
    None,
    Forward,
    Backward,
    Undirected,
}

/// Completed partially directed graph of a DAG's Markov equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cpdag {
    nodes: Vec<String>,
    directed: BTreeSet<(usize, usize)>,
    /// Stored as `(a, b)` with `a < b`.
    undirected: BTreeSet<(usize, usize)>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Cpdag {
    /// Orient v-structures, then apply Meek's rules 1-3 until nothing changes.
    pub fn from_dag(dag: &Dag) -> Cpdag {
        let n = dag.len();
        let mut cp = Cpdag {
            nodes: dag.nodes().to_vec(),
            directed: BTreeSet::new(),
            undirected: dag.arcs().into_iter().map(|(a, b)| key(a, b)).collect(),
        };
        for c in 0..n {
            let ps = dag.parents(c);
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    if !dag.adjacent(a, b) {
                        cp.orient(a, c);
                        cp.orient(b, c);
                    }
                }
            }
        }
        while cp.meek_pass() {}
        cp
    }

    fn orient(&mut self, a: usize, b: usize) {
        if self.undirected.remove(&key(a, b)) {
            self.directed.insert((a, b));
        }
    }

    fn is_undirected(&self, a: usize, b: usize) -> bool {
        self.undirected.contains(&key(a, b))
    }

    fn is_directed(&self, a: usize, b: usize) -> bool {
        self.directed.contains(&(a, b))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.is_undirected(a, b) || self.is_directed(a, b) || self.is_directed(b, a)
    }

    fn meek_pass(&mut self) -> bool {
        let n = self.nodes.len();
        let edges: Vec<(usize, usize)> = self.undirected.iter().copied().collect();
        for (x, y) in edges {
            for (a, b) in [(x, y), (y, x)] {
                if !self.is_undirected(a, b) {
                    continue;
                }
                let r1 = (0..n).any(|c| self.is_directed(c, a) && !self.adjacent(c, b));
                let r2 = (0..n).any(|c| self.is_directed(a, c) && self.is_directed(c, b));
                let r3 = {
                    let feeders: Vec<usize> = (0..n)
                        .filter(|&c| self.is_undirected(a, c) && self.is_directed(c, b))
                        .collect();
                    feeders
                        .iter()
                        .enumerate()
                        .any(|(i, &c)| feeders[i + 1..].iter().any(|&d| !self.adjacent(c, d)))
                };
                if r1 || r2 || r3 {
                    self.orient(a, b);
                    return true;
                }
            }
        }
        false
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn directed(&self) -> &BTreeSet<(usize, usize)> {
        &self.directed
    }

    pub fn undirected(&self) -> &BTreeSet<(usize, usize)> {
        &self.undirected
    }

    /// Unordered adjacent pairs `(a, b)`, `a < b`.
    pub fn skeleton(&self) -> BTreeSet<(usize, usize)> {
        self.undirected
            .iter()
            .copied()
            .chain(self.directed.iter().map(|&(a, b)| key(a, b)))
            .collect()
    }

    pub fn pair_status(&self, a: usize, b: usize) -> PairStatus {
        let (a, b) = key(a, b);
        if self.is_undirected(a, b) {
            PairStatus::Undirected
        } else if self.is_directed(a, b) {
            PairStatus::Forward
        } else if self.is_directed(b, a) {
            PairStatus::Backward
        } else {
            PairStatus::None
        }
    }
}

/// Structural Hamming distance between the CPDAGs of two DAGs over the
/// same nodes: the number of unordered pairs whose status differs.
pub fn shd(a: &Dag, b: &Dag) -> Result<usize> {
    let b = align_nodes(a, b)?;
    let (ca, cb) = (Cpdag::from_dag(a), Cpdag::from_dag(&b));
    let n = a.len();
    let mut d = 0;
    for x in 0..n {
        for y in x + 1..n {
            if ca.pair_status(x, y) != cb.pair_status(x, y) {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// `b` with its nodes renumbered to `a`'s order.
pub(crate) fn align_nodes(a: &Dag, b: &Dag) -> Result<Dag> {
    if a.len() != b.len() {
        return Err(Error::InvalidQuery("graphs have different node sets".into()));
    }
    let map = b.nodes().iter().map(|n| a.require(n)).collect::<Result<Vec<_>>>()?;
    let mut parents = vec![Vec::new(); a.len()];
    for (p, c) in b.arcs() {
        parents[map[c]].push(map[p]);
    }
    for ps in &mut parents {
        ps.sort_unstable();
    }
    Dag::from_parents(a.nodes().to_vec(), parents)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(nodes: &[&str], arcs: &[(&str, &str)]) -> Dag {
        Dag::from_arcs(nodes, arcs).unwrap()
    }

    #[test]
    fn chain_is_fully_undirected() {
        let cp = Cpdag::from_dag(&dag(&["A", "B", "C"], &[("A", "B"), ("B", "C")]));
        assert!(cp.directed().is_empty());
        assert_eq!(cp.undirected().len(), 2);
    }

    #[test]
    fn collider_is_compelled_and_propagates() {
        let cp = Cpdag::from_dag(&dag(&["A", "B", "C", "D"], &[("A", "C"), ("B", "C"), ("C", "D")]));
        assert_eq!(cp.directed().len(), 3);
        assert_eq!(cp.pair_status(2, 3), PairStatus::Forward);
    }

    #[test]
    fn equivalent_dags_have_zero_shd() {
        let a = dag(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        let b = dag(&["A", "B", "C"], &[("C", "B"), ("B", "A")]);
        assert_eq!(shd(&a, &b).unwrap(), 0);
        let v = dag(&["A", "B", "C"], &[("A", "B"), ("C", "B")]);
        assert_eq!(shd(&a, &v).unwrap(), 2);
        let e = dag(&["A", "B", "C"], &[]);
        assert_eq!(shd(&a, &e).unwrap(), 2);
    }

    #[test]
    fn triangle_below_collider() {
        // A→B and A→C follow from the collider at A; B–C stays reversible.
        let d = dag(
            &["X", "Y", "A", "B", "C"],
            &[("X", "A"), ("Y", "A"), ("A", "B"), ("B", "C"), ("A", "C")],
        );
        let cp = Cpdag::from_dag(&d);
        assert_eq!(cp.pair_status(2, 4), PairStatus::Forward);
        assert_eq!(cp.pair_status(2, 3), PairStatus::Forward);
        assert_eq!(cp.pair_status(3, 4), PairStatus::Undirected);
    }

    #[test]
    fn rule_two() {
        // Colliders at B compel A→B and B→C; R2 then orients A→C.
        let d = dag(
            &["X", "Y", "A", "B", "C"],
            &[("X", "B"), ("Y", "B"), ("A", "B"), ("B", "C"), ("A", "C")],
        );
        let cp = Cpdag::from_dag(&d);
        assert_eq!(cp.pair_status(3, 4), PairStatus::Forward);
        assert_eq!(cp.pair_status(2, 4), PairStatus::Forward);
        assert!(cp.undirected().is_empty());
    }

    #[test]
    fn rule_three() {
        // C→B←D collider with A adjacent to all three: A→B by R3.
        let d = dag(
            &["A", "B", "C", "D"],
            &[("A", "C"), ("A", "D"), ("A", "B"), ("C", "B"), ("D", "B")],
        );
        let cp = Cpdag::from_dag(&d);
        assert_eq!(cp.pair_status(0, 1), PairStatus::Forward);
        assert_eq!(cp.pair_status(0, 2), PairStatus::Undirected);
        assert_eq!(cp.pair_status(0, 3), PairStatus::Undirected);
    }
}
