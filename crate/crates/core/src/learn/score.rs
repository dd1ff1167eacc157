use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::{counts, CountTable, DataTable};
use crate::error::Result;
use crate::model::Dag;

/// Network score. AIC penalizes the log-likelihood by `d` (not `2d`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    #[default]
    Aic,
    Bic,
    #[serde(rename = "loglik")]
    LogLik,
}

/// `Σ_j Σ_k N_ijk ln(N_ijk / N_ij)` with `0 ln 0 = 0`.
pub fn local_loglik(counts: &CountTable) -> f64 {
    let mut ll = 0.0;
    for j in 0..counts.n_configs() {
        let nij = counts.n_ij(j);
        if nij == 0 {
            continue;
        }
        let nij = nij as f64;
        for &n in counts.row(j) {
            if n > 0 {
                let n = n as f64;
                ll += n * (n / nij).ln();
            }
        }
    }
    ll
}

/// Local score of one family; `n_rows` is the sample size used by BIC.
pub fn local_score(counts: &CountTable, kind: ScoreKind, n_rows: usize) -> f64 {
    let ll = local_loglik(counts);
    let d = (counts.n_configs() * (counts.cardinality() - 1)) as f64;
    match kind {
        ScoreKind::LogLik => ll,
        ScoreKind::Aic => ll - d,
        ScoreKind::Bic => ll - 0.5 * d * (n_rows as f64).ln(),
    }
}

/// Columns of `data` aligned with `dag`'s nodes.
pub(crate) fn align(dag: &Dag, data: &DataTable) -> Result<Vec<usize>> {
    dag.nodes().iter().map(|n| data.require(n)).collect()
}

/// Decomposable network score: sum of local family scores.
pub fn score(dag: &Dag, data: &DataTable, kind: ScoreKind) -> Result<f64> {
    let cols = align(dag, data)?;
    Ok((0..dag.len())
        .map(|i| {
            let parents: Vec<usize> = dag.parents(i).iter().map(|&p| cols[p]).collect();
            local_score(&counts(data, cols[i], &parents), kind, data.n_rows())
        })
        .sum())
}

/// Memo of local scores keyed by `(node, sorted parent set)` over one
/// data table (column indices).
#[derive(Debug)]
pub struct ScoreCache<'a> {
    data: &'a DataTable,
    kind: ScoreKind,
    map: HashMap<(usize, Vec<usize>), f64>,
    hits: u64,
    misses: u64,
}

impl<'a> ScoreCache<'a> {
    pub fn new(data: &'a DataTable, kind: ScoreKind) -> Self {
        ScoreCache {
            data,
            kind,
            map: HashMap::new(),
            hits: 0,
            misses: 0,
        }
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn data(&self) -> &DataTable {
        self.data
    }

    /// Local score of `node` with parent columns `parents` (must be sorted).
    pub fn local(&mut self, node: usize, parents: &[usize]) -> f64 {
        debug_assert!(parents.windows(2).all(|w| w[0] < w[1]));
        if let Some(&v) = self.map.get(&(node, parents.to_vec())) {
            self.hits += 1;
            return v;
        }
        self.misses += 1;
        let v = local_score(&counts(self.data, node, parents), self.kind, self.data.n_rows());
        self.map.insert((node, parents.to_vec()), v);
        v
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CategoricalVariable;

    #[test]
    fn balanced_binary() {
        let c = CountTable::from_counts(2, vec![], vec![5, 5]);
        assert!((local_loglik(&c) - 10.0 * 0.5f64.ln()).abs() < 1e-12);
        assert!((local_loglik(&c) + 6.9315).abs() < 1e-4);
    }

    #[test]
    fn deterministic_column_is_zero() {
        let c = CountTable::from_counts(2, vec![], vec![10, 0]);
        assert_eq!(local_loglik(&c), 0.0);
    }

    #[test]
    fn empty_graph_two_uniform_columns() {
        let v = |n: &str| CategoricalVariable::new(n, ["0", "1"]).unwrap();
        let col: Vec<Option<usize>> = (0..100).map(|i| Some(i % 2)).collect();
        let col2: Vec<Option<usize>> = (0..100).map(|i| Some((i / 2) % 2)).collect();
        let data = DataTable::new(vec![v("A"), v("B")], vec![col, col2]).unwrap();
        let dag = Dag::empty(["A", "B"]).unwrap();
        let ll = 200.0 * 0.5f64.ln();
        assert!((score(&dag, &data, ScoreKind::LogLik).unwrap() - ll).abs() < 1e-9);
        assert!((score(&dag, &data, ScoreKind::Aic).unwrap() - (ll - 2.0)).abs() < 1e-9);
        let bic = ll - 0.5 * 2.0 * 100f64.ln();
        assert!((score(&dag, &data, ScoreKind::Bic).unwrap() - bic).abs() < 1e-9);
    }

    #[test]
    fn cache_counts_hits() {
        let v = |n: &str| CategoricalVariable::new(n, ["0", "1"]).unwrap();
        let data = DataTable::new(
            vec![v("A"), v("B")],
            vec![vec![Some(0), Some(1)], vec![Some(1), Some(1)]],
        )
        .unwrap();
        let mut cache = ScoreCache::new(&data, ScoreKind::Aic);
        let a = cache.local(1, &[0]);
        let b = cache.local(1, &[0]);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!((cache.hits(), cache.misses()), (1, 1));
    }
}
