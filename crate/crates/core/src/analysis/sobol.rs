use serde::Serialize;

use crate::error::{Error, Result};
use crate::infer::{posterior, ZERO_EVIDENCE_THRESHOLD};
use crate::model::{Evidence, FittedNetwork};
use crate::par::{try_map_indexed, Execution};

/// First-order index of one input for one categorical target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolResult {
    pub target: String,
    pub input: String,
    pub target_levels: Vec<String>,
    /// `S^(k)` for the indicator of each target state; 0 where the state
    /// has no variance.
    pub per_state: Vec<f64>,
    /// `Σ_k Var(E[1{Y=k} | X]) / Σ_k Var(1{Y=k})`.
    pub aggregate: f64,
}

/// Variance of `E[1{Y = k} | X]` over `X`'s marginal, for every `k`, plus
/// the target marginal.
fn explained_variances(net: &FittedNetwork, target: &str, input: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = posterior(net, target, &Evidence::new())?.distribution;
    let px = posterior(net, input, &Evidence::new())?.distribution;
    let mut explained = vec![0.0; p.len()];
    if net.dag().d_separated(input, target, &[])? {
        return Ok((p, explained));
    }
    let levels = net.variable(net.require(input)?).levels();
    for (x, &w) in px.iter().enumerate() {
        if w < ZERO_EVIDENCE_THRESHOLD {
            continue;
        }
        let cond = posterior(net, target, &Evidence::new().with(input, levels[x].clone()))?.distribution;
        for k in 0..p.len() {
            explained[k] += w * (cond[k] - p[k]).powi(2);
        }
    }
    Ok((p, explained))
}

/// First-order Sobol index of `input` for `target` under observational
/// conditioning, with each target state encoded as an indicator.
///
/// The aggregate pools the indicator variances, so it is the fraction of
/// the summed state variances explained by `input`; for a binary target it
/// equals the ordinary index of either indicator. Exactly 0 when the two
/// variables are marginally d-separated.
pub fn sobol_first_order(net: &FittedNetwork, target: &str, input: &str) -> Result<SobolResult> {
    if target == input {
        return Err(Error::InvalidQuery(format!("`{target}` cannot be its own input")));
    }
    let t = net.require(target)?;
    net.require(input)?;
    let (p, explained) = explained_variances(net, target, input)?;
    let mut per_state = Vec::with_capacity(p.len());
    let (mut num, mut den) = (0.0, 0.0);
    for (k, &pk) in p.iter().enumerate() {
        let var = pk * (1.0 - pk);
        if var <= 0.0 {
            per_state.push(0.0);
            continue;
        }
        per_state.push(explained[k] / var);
        num += explained[k];
        den += var;
    }
    if den <= 0.0 {
        return Err(Error::DegenerateTarget(target.to_string()));
    }
    Ok(SobolResult {
        target: target.to_string(),
        input: input.to_string(),
        target_levels: net.variable(t).levels().to_vec(),
        per_state,
        aggregate: num / den,
    })
}

/// Aggregate indices in percent; rows are inputs, columns targets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolMatrix {
    pub targets: Vec<String>,
    pub inputs: Vec<String>,
    /// `None` where the input is the target itself.
    pub values: Vec<Vec<Option<f64>>>,
}

impl SobolMatrix {
    pub fn get(&self, input: &str, target: &str) -> Option<f64> {
        let r = self.inputs.iter().position(|i| i == input)?;
        let c = self.targets.iter().position(|t| t == target)?;
        self.values[r][c]
    }
}

pub fn sobol_matrix<S: AsRef<str> + Sync>(net: &FittedNetwork, targets: &[S], inputs: &[S]) -> Result<SobolMatrix> {
    sobol_matrix_with(net, targets, inputs, Execution::default())
}

/// Every (input, target) cell, rows sorted by the first target column
/// descending (stable; the dash cell sorts last).
pub fn sobol_matrix_with<S: AsRef<str> + Sync>(
    net: &FittedNetwork,
    targets: &[S],
    inputs: &[S],
    exec: Execution,
) -> Result<SobolMatrix> {
    let (nt, ni) = (targets.len(), inputs.len());
    let cells = try_map_indexed(nt * ni, exec, |c| {
        let (input, target) = (inputs[c / nt].as_ref(), targets[c % nt].as_ref());
        if input == target {
            Ok(None)
        } else {
            sobol_first_order(net, target, input).map(|r| Some(100.0 * r.aggregate))
        }
    })?;
    let mut rows: Vec<(String, Vec<Option<f64>>)> = inputs
        .iter()
        .zip(cells.chunks(nt.max(1)))
        .map(|(i, row)| (i.as_ref().to_string(), row.to_vec()))
        .collect();
    if nt > 0 {
        rows.sort_by(|a, b| match (a.1[0], b.1[0]) {
            (Some(x), Some(y)) => y.total_cmp(&x),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        });
    }
    let (inputs, values) = rows.into_iter().unzip();
    Ok(SobolMatrix {
        targets: targets.iter().map(|t| t.as_ref().to_string()).collect(),
        inputs,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CategoricalVariable, Cpt, Dag};

    fn bin(name: &str) -> CategoricalVariable {
        CategoricalVariable::new(name, ["0", "1"]).unwrap()
    }

    fn copy_net() -> FittedNetwork {
        let dag = Dag::from_arcs(&["X", "Y", "Z"], &[("X", "Y")]).unwrap();
        let cpts = vec![
            Cpt::new("X", vec![], vec![], 2, vec![0.3, 0.7]).unwrap(),
            Cpt::new("Y", vec!["X".into()], vec![2], 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap(),
            Cpt::new("Z", vec![], vec![], 2, vec![0.5, 0.5]).unwrap(),
        ];
        FittedNetwork::new(vec![bin("X"), bin("Y"), bin("Z")], dag, cpts, Default::default()).unwrap()
    }

    #[test]
    fn deterministic_copy_explains_everything() {
        let r = sobol_first_order(&copy_net(), "Y", "X").unwrap();
        assert!((r.aggregate - 1.0).abs() < 1e-12);
        assert!(r.per_state.iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn separated_input_is_exactly_zero() {
        let r = sobol_first_order(&copy_net(), "Y", "Z").unwrap();
        assert_eq!(r.aggregate, 0.0);
    }

    #[test]
    fn degenerate_target() {
        let dag = Dag::from_arcs(&["X", "Y"], &[("X", "Y")]).unwrap();
        let cpts = vec![
            Cpt::new("X", vec![], vec![], 2, vec![0.5, 0.5]).unwrap(),
            Cpt::new("Y", vec!["X".into()], vec![2], 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap(),
        ];
        let net = FittedNetwork::new(vec![bin("X"), bin("Y")], dag, cpts, Default::default()).unwrap();
        assert!(matches!(
            sobol_first_order(&net, "Y", "X"),
            Err(Error::DegenerateTarget(_))
        ));
    }

    #[test]
    fn matrix_layout() {
        let net = copy_net();
        let m = sobol_matrix(&net, &["Y", "X"], &["Z", "X", "Y"]).unwrap();
        assert_eq!(m.inputs, vec!["X", "Z", "Y"]);
        assert_eq!(m.get("X", "X"), None);
        assert!((m.get("X", "Y").unwrap() - 100.0).abs() < 1e-9);
        assert_eq!(m.get("Z", "Y"), Some(0.0));
    }
}
