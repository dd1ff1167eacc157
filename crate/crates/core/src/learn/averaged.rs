use serde::Serialize;

use crate::error::{Error, Result};
use crate::learn::{ArcStrengthTable, Constraints};
use crate::model::Dag;

/// Why an edge above the threshold was left out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    Cycle,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedEdge {
    pub from: String,
    pub to: String,
    pub strength: f64,
    pub reason: SkipReason,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AveragedNetwork {
    pub dag: Dag,
    pub skipped: Vec<SkippedEdge>,
}

/// Consensus DAG: required arcs first, then every edge with strength
/// `≥ t` in decreasing strength order (ties by pair index), oriented by
/// majority direction (`a → b` for `a < b` on an even split). An edge whose
/// orientation would close a cycle or is forbidden is skipped.
pub fn averaged_network(strengths: &ArcStrengthTable, t: f64, constraints: &Constraints) -> Result<AveragedNetwork> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidConfig(format!("threshold {t} is outside (0, 1]")));
    }
    if constraints.variables() != strengths.variables() {
        return Err(Error::InvalidConfig(
            "constraints and strengths are over different variables".into(),
        ));
    }
    constraints.validate()?;
    let names = strengths.variables();
    let mut dag = Dag::empty(names.to_vec())?;
    for &(a, b) in constraints.whitelist() {
        dag.add_arc(a, b)?;
    }

    let n = strengths.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let s = strengths.strength(a, b);
            if s >= t {
                edges.push((s, a, b));
            }
        }
    }
    edges.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut skipped = Vec::new();
    for (s, a, b) in edges {
        if dag.adjacent(a, b) {
            continue;
        }
        let (from, to) = if strengths.direction(b, a) > strengths.direction(a, b) {
            (b, a)
        } else {
            (a, b)
        };
        let reason = if constraints.is_forbidden(from, to) {
            Some(SkipReason::Forbidden)
        } else if dag.add_arc(from, to).is_err() {
            Some(SkipReason::Cycle)
        } else {
            None
        };
        if let Some(reason) = reason {
            log::warn!("averaged network skips {} -> {} ({:?})", names[from], names[to], reason);
            skipped.push(SkippedEdge {
                from: names[from].clone(),
                to: names[to].clone(),
                strength: s,
                reason,
            });
        }
    }
    dag.canonicalize();
    Ok(AveragedNetwork { dag, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_arc_majority_direction() {
        let t = ArcStrengthTable::from_counts(names(&["A", "B"]), 10, vec![0, 9, 1, 0]).unwrap();
        let avg = averaged_network(&t, 0.5, &Constraints::none(names(&["A", "B"]))).unwrap();
        assert_eq!(avg.dag.arcs(), vec![(0, 1)]);
        assert!(avg.skipped.is_empty());
    }

    #[test]
    fn weakest_arc_of_a_cycle_is_skipped() {
        // A→B 10, B→C 9, C→A 8 of 10.
        let c = vec![0, 10, 0, 0, 0, 9, 8, 0, 0];
        let t = ArcStrengthTable::from_counts(names(&["A", "B", "C"]), 10, c).unwrap();
        let avg = averaged_network(&t, 0.5, &Constraints::none(names(&["A", "B", "C"]))).unwrap();
        assert_eq!(avg.dag.n_arcs(), 2);
        assert_eq!(avg.skipped.len(), 1);
        assert_eq!(avg.skipped[0].reason, SkipReason::Cycle);
        assert_eq!((avg.skipped[0].from.as_str(), avg.skipped[0].to.as_str()), ("C", "A"));
    }

    #[test]
    fn forbidden_and_required() {
        let t = ArcStrengthTable::from_counts(names(&["A", "B", "C"]), 10, vec![0, 10, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let mut c = Constraints::none(names(&["A", "B", "C"]));
        c.forbid("A", "B").unwrap();
        c.require("C", "B").unwrap();
        let avg = averaged_network(&t, 0.5, &c).unwrap();
        assert_eq!(avg.dag.arcs(), vec![(2, 1)]);
        assert_eq!(avg.skipped[0].reason, SkipReason::Forbidden);
    }
}
