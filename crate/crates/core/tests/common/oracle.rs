//! Brute-force reference computations by full-joint enumeration and direct
//! counting. Deliberately naive: nothing here shares code with the
//! elimination, scoring or Sobol paths it checks.

#![allow(dead_code)]

use std::collections::HashMap;

use beliefnet::data::DataTable;
use beliefnet::model::{Dag, FittedNetwork};
use beliefnet::synth::RandomNetworkSpec;

/// Every full assignment with its joint probability.
pub fn joint_table(net: &FittedNetwork) -> Vec<(Vec<usize>, f64)> {
    let cards = net.cardinalities();
    let n = cards.len();
    let total: usize = cards.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut x = vec![0usize; n];
    for _ in 0..total {
        let mut p = 1.0;
        for i in 0..n {
            let levels: Vec<usize> = net.dag().parents(i).iter().map(|&q| x[q]).collect();
            let cpt = net.cpt(i);
            p *= cpt.prob(cpt.config_index(&levels), x[i]);
        }
        out.push((x.clone(), p));
        for i in (0..n).rev() {
            x[i] += 1;
            if x[i] < cards[i] {
                break;
            }
            x[i] = 0;
        }
    }
    out
}

/// `(P(target | evidence), P(evidence))` by summing the joint.
pub fn posterior(net: &FittedNetwork, target: usize, evidence: &[(usize, usize)]) -> (Vec<f64>, f64) {
    let mut dist = vec![0.0; net.variable(target).cardinality()];
    for (x, p) in joint_table(net) {
        if evidence.iter().all(|&(v, k)| x[v] == k) {
            dist[x[target]] += p;
        }
    }
    let z: f64 = dist.iter().sum();
    (dist.iter().map(|d| d / z).collect(), z)
}

/// Per-state and aggregate first-order indices from the joint of
/// `(input, target)`.
pub fn sobol(net: &FittedNetwork, target: usize, input: usize) -> (Vec<f64>, f64) {
    let (rx, ry) = (net.variable(input).cardinality(), net.variable(target).cardinality());
    let mut pxy = vec![vec![0.0; ry]; rx];
    for (x, p) in joint_table(net) {
        pxy[x[input]][x[target]] += p;
    }
    let px: Vec<f64> = pxy.iter().map(|r| r.iter().sum()).collect();
    let py: Vec<f64> = (0..ry).map(|k| pxy.iter().map(|r| r[k]).sum()).collect();
    let mut per_state = Vec::new();
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..ry {
        let var = py[k] * (1.0 - py[k]);
        let explained: f64 = (0..rx)
            .filter(|&x| px[x] > 0.0)
            .map(|x| px[x] * (pxy[x][k] / px[x] - py[k]).powi(2))
            .sum();
        if var > 0.0 {
            per_state.push(explained / var);
            num += explained;
            den += var;
        } else {
            per_state.push(0.0);
        }
    }
    (per_state, num / den)
}

/// Numerical conditional independence `X ⊥ Y | Z` in the network's joint.
pub fn independent(net: &FittedNetwork, x: usize, y: usize, z: &[usize], tol: f64) -> bool {
    let mut groups: HashMap<Vec<usize>, HashMap<(usize, usize), f64>> = HashMap::new();
    for (a, p) in joint_table(net) {
        let key: Vec<usize> = z.iter().map(|&v| a[v]).collect();
        *groups.entry(key).or_default().entry((a[x], a[y])).or_default() += p;
    }
    let (rx, ry) = (net.variable(x).cardinality(), net.variable(y).cardinality());
    groups.values().all(|g| {
        let pz: f64 = g.values().sum();
        if pz <= 0.0 {
            return true;
        }
        (0..rx).all(|i| {
            (0..ry).all(|j| {
                let pij = g.get(&(i, j)).copied().unwrap_or(0.0) / pz;
                let pi: f64 = (0..ry).map(|jj| g.get(&(i, jj)).copied().unwrap_or(0.0)).sum::<f64>() / pz;
                let pj: f64 = (0..rx).map(|ii| g.get(&(ii, j)).copied().unwrap_or(0.0)).sum::<f64>() / pz;
                (pij - pi * pj).abs() <= tol
            })
        })
    })
}

/// `Σ_j Σ_k N_ijk ln(N_ijk / N_ij)` by one pass over complete rows.
pub fn local_loglik(data: &DataTable, child: usize, parents: &[usize]) -> f64 {
    let mut n_ijk: HashMap<(Vec<usize>, usize), f64> = HashMap::new();
    let mut n_ij: HashMap<Vec<usize>, f64> = HashMap::new();
    for r in 0..data.n_rows() {
        let Some(k) = data.value(r, child) else { continue };
        let j: Option<Vec<usize>> = parents.iter().map(|&p| data.value(r, p)).collect();
        let Some(j) = j else { continue };
        *n_ijk.entry((j.clone(), k)).or_default() += 1.0;
        *n_ij.entry(j).or_default() += 1.0;
    }
    n_ijk.iter().map(|((j, _), &n)| n * (n / n_ij[j]).ln()).sum()
}

/// AIC as log-likelihood minus free parameters, by direct counting.
pub fn aic(dag: &Dag, data: &DataTable) -> f64 {
    let cols: Vec<usize> = dag.nodes().iter().map(|n| data.index_of(n).unwrap()).collect();
    let cards = data.cardinalities();
    (0..dag.len())
        .map(|i| {
            let parents: Vec<usize> = dag.parents(i).iter().map(|&p| cols[p]).collect();
            let q: usize = parents.iter().map(|&p| cards[p]).product();
            local_loglik(data, cols[i], &parents) - (q * (cards[cols[i]] - 1)) as f64
        })
        .sum()
}

/// Random network for the oracle suites.
pub fn random_net(seed: u64, nodes: usize, max_levels: usize) -> FittedNetwork {
    RandomNetworkSpec {
        nodes,
        max_parents: 3,
        arc_probability: 0.4,
        min_levels: 2,
        max_levels,
        concentration: 1.0,
    }
    .generate(seed)
    .expect("valid spec")
}

/// Six three-level nodes, `A→B, A→C, B→D, C→D, D→E, E→F`; each child puts
/// 0.7 on the largest parent level.
pub fn generator_network() -> FittedNetwork {
    use beliefnet::model::{CategoricalVariable, Cpt};
    let names = ["A", "B", "C", "D", "E", "F"];
    let arcs = [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D"), ("D", "E"), ("E", "F")];
    let dag = Dag::from_arcs(&names, &arcs).unwrap();
    let peaked = |k: usize| -> Vec<f64> { (0..3).map(|s| if s == k { 0.7 } else { 0.15 }).collect() };
    let mut cpts = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let parents: Vec<String> = dag.parent_names(i).into_iter().map(String::from).collect();
        let cards = vec![3; parents.len()];
        let q: usize = cards.iter().product();
        let values: Vec<f64> = if parents.is_empty() {
            vec![0.3, 0.4, 0.3]
        } else {
            (0..q)
                .flat_map(|j| peaked(beliefnet::model::config_levels(&cards, j).into_iter().max().unwrap()))
                .collect()
        };
        cpts.push(Cpt::new(*name, parents, cards, 3, values).unwrap());
    }
    let vars = names
        .iter()
        .map(|n| CategoricalVariable::new(*n, ["0", "1", "2"]).unwrap())
        .collect();
    FittedNetwork::new(vars, dag, cpts, Default::default()).unwrap()
}
