use std::collections::BTreeMap;

use crate::data::{counts, CountTable, DataTable};
use crate::error::{Error, Result};
use crate::model::{Cpt, Dag, FittedNetwork};

/// Columns of `data` aligned with the nodes of `dag`.
fn align(dag: &Dag, data: &DataTable) -> Result<Vec<usize>> {
    dag.nodes().iter().map(|n| data.require(n)).collect()
}

fn node_counts(dag: &Dag, data: &DataTable, cols: &[usize], i: usize) -> CountTable {
    let parents: Vec<usize> = dag.parents(i).iter().map(|&p| cols[p]).collect();
    counts(data, cols[i], &parents)
}

fn assemble(dag: &Dag, data: &DataTable, cols: &[usize], rows: Vec<Vec<f64>>) -> Result<FittedNetwork> {
    let variables: Vec<_> = cols.iter().map(|&c| data.variable(c).clone()).collect();
    let mut cpts = Vec::with_capacity(dag.len());
    for (i, values) in rows.into_iter().enumerate() {
        let parent_cards = dag.parents(i).iter().map(|&p| variables[p].cardinality()).collect();
        cpts.push(Cpt::new(
            dag.name(i),
            dag.parent_names(i).into_iter().map(String::from).collect(),
            parent_cards,
            variables[i].cardinality(),
            values,
        )?);
    }
    FittedNetwork::new(variables, dag.clone(), cpts, BTreeMap::new())
}

/// Dirichlet posterior mean `(N_ijk + α) / (N_ij + r_i α)`.
pub fn bayes_estimate(counts: &CountTable, alpha: f64) -> Vec<f64> {
    let r = counts.cardinality();
    let mut out = Vec::with_capacity(counts.n_configs() * r);
    for j in 0..counts.n_configs() {
        let denom = counts.n_ij(j) as f64 + r as f64 * alpha;
        out.extend(counts.row(j).iter().map(|&n| (n as f64 + alpha) / denom));
    }
    out
}

/// Fit CPTs with a symmetric Dirichlet prior of concentration `alpha`
/// (α = 1 is the uniform prior). Every entry is strictly positive.
pub fn fit_bayes(dag: &Dag, data: &DataTable, alpha: f64) -> Result<FittedNetwork> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    let cols = align(dag, data)?;
    let rows = (0..dag.len())
        .map(|i| bayes_estimate(&node_counts(dag, data, &cols, i), alpha))
        .collect();
    Ok(assemble(dag, data, &cols, rows)?
        .with_metadata("estimator", "bayes")
        .with_metadata("alpha", alpha.to_string()))
}

/// Maximum-likelihood CPTs `N_ijk / N_ij`.
///
/// Unobserved parent configurations get a uniform row; each one is logged
/// as a warning and the total is recorded under `mle_unseen_configs`.
pub fn fit_mle(dag: &Dag, data: &DataTable) -> Result<FittedNetwork> {
    let cols = align(dag, data)?;
    let mut unseen = 0usize;
    let mut rows = Vec::with_capacity(dag.len());
    for i in 0..dag.len() {
        let c = node_counts(dag, data, &cols, i);
        let r = c.cardinality();
        let mut values = Vec::with_capacity(c.n_configs() * r);
        for j in 0..c.n_configs() {
            let nij = c.n_ij(j);
            if nij == 0 {
                log::warn!(
                    "`{}`: parent configuration {j} unobserved, using uniform row",
                    dag.name(i)
                );
                unseen += 1;
                values.extend(std::iter::repeat_n(1.0 / r as f64, r));
            } else {
                values.extend(c.row(j).iter().map(|&n| n as f64 / nij as f64));
            }
        }
        rows.push(values);
    }
    Ok(assemble(dag, data, &cols, rows)?
        .with_metadata("estimator", "mle")
        .with_metadata("mle_unseen_configs", unseen.to_string()))
}
