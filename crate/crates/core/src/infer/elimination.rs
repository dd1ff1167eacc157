use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infer::Factor;
use crate::model::{Evidence, FittedNetwork};

/// Evidence whose probability falls below this is treated as impossible.
pub const ZERO_EVIDENCE_THRESHOLD: f64 = 1e-300;

/// Posterior distribution of one variable under evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub target: String,
    pub levels: Vec<String>,
    pub distribution: Vec<f64>,
    pub evidence: Evidence,
    pub evidence_probability: f64,
    pub elimination_order: Vec<String>,
}

/// Outcome of eliminating everything except (optionally) one variable.
pub(crate) struct Eliminated {
    /// Unnormalized values over the kept variable (single entry when none kept).
    pub values: Vec<f64>,
    /// Natural-log scale factor pulled out during elimination.
    pub log_scale: f64,
    pub order: Vec<usize>,
}

impl Eliminated {
    pub fn log_evidence(&self) -> f64 {
        self.log_scale + self.values.iter().sum::<f64>().ln()
    }

    pub fn normalized(&self) -> Vec<f64> {
        let z: f64 = self.values.iter().sum();
        self.values.iter().map(|v| v / z).collect()
    }
}

fn cpt_factor(net: &FittedNetwork, i: usize) -> Factor {
    let mut scope = net.dag().parents(i).to_vec();
    scope.push(i);
    let mut cards = net.cpt(i).parent_cards().to_vec();
    cards.push(net.cpt(i).cardinality());
    Factor::new(scope, cards, net.cpt(i).values().to_vec())
}

/// Greedy min-fill order over the interaction graph of `factors`
/// (ties: fewer neighbours, then smaller index).
pub(crate) fn min_fill_order(factors: &[Factor], eliminate: &[usize], n: usize) -> Vec<usize> {
    let mut adj = vec![BTreeSet::new(); n];
    for f in factors {
        for &a in f.scope() {
            for &b in f.scope() {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let mut remaining: BTreeSet<usize> = eliminate.iter().copied().collect();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let best = *remaining
            .iter()
            .min_by_key(|&&v| {
                let nb: Vec<usize> = adj[v].iter().copied().collect();
                let mut fill = 0usize;
                for (i, &a) in nb.iter().enumerate() {
                    for &b in &nb[i + 1..] {
                        if !adj[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                (fill, nb.len(), v)
            })
            .expect("non-empty");
        let nb: Vec<usize> = adj[best].iter().copied().collect();
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
            adj[a].remove(&best);
        }
        adj[best].clear();
        remaining.remove(&best);
        order.push(best);
    }
    order
}

/// Variable elimination over the ancestral closure of `keep ∪ evidence`.
///
/// `order`, when given, must contain every variable that needs eliminating;
/// extra entries are ignored. Intermediate factors are rescaled by their
/// maximum and the scale is tracked in log space, so tiny evidence
/// probabilities do not underflow.
pub(crate) fn eliminate(
    net: &FittedNetwork,
    keep: Option<usize>,
    evidence: &[(usize, usize)],
    order: Option<&[usize]>,
) -> Result<Eliminated> {
    let n = net.len();
    let mut observed: Vec<Option<usize>> = vec![None; n];
    for &(v, k) in evidence {
        observed[v] = Some(k);
    }
    let mut roots: Vec<usize> = evidence.iter().map(|&(v, _)| v).collect();
    roots.extend(keep);
    let relevant = net.dag().ancestral_set(&roots);

    let mut log_scale = 0.0;
    let mut factors = Vec::new();
    for i in (0..n).filter(|&i| relevant[i]) {
        let mut f = cpt_factor(net, i);
        for &v in f.scope().to_vec().iter() {
            if let Some(k) = observed[v] {
                f = f.reduce(v, k);
            }
        }
        if f.scope().is_empty() {
            log_scale += f.values()[0].ln();
        } else {
            factors.push(f);
        }
    }
    if log_scale == f64::NEG_INFINITY {
        return Err(Error::ZeroProbabilityEvidence { scenario: None });
    }

    let to_eliminate: Vec<usize> = (0..n)
        .filter(|&i| relevant[i] && observed[i].is_none() && Some(i) != keep)
        .collect();
    let order: Vec<usize> = match order {
        Some(given) => {
            let filtered: Vec<usize> = given.iter().copied().filter(|v| to_eliminate.contains(v)).collect();
            let set: BTreeSet<usize> = filtered.iter().copied().collect();
            if set.len() != to_eliminate.len() || filtered.len() != set.len() {
                return Err(Error::InvalidQuery(
                    "elimination order must list each hidden variable exactly once".into(),
                ));
            }
            filtered
        }
        None => min_fill_order(&factors, &to_eliminate, n),
    };

    for &var in &order {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.contains(var));
        factors = rest;
        let Some(first) = touching.first() else {
            continue;
        };
        let mut prod = first.clone();
        for f in &touching[1..] {
            prod = prod.product(f);
        }
        let mut marg = prod.sum_out(var);
        let max = marg.max();
        if max <= 0.0 {
            return Err(Error::ZeroProbabilityEvidence { scenario: None });
        }
        marg.scale(1.0 / max);
        log_scale += max.ln();
        if marg.scope().is_empty() {
            log_scale += marg.values()[0].ln();
        } else {
            factors.push(marg);
        }
    }

    let mut result = match keep {
        Some(v) => Factor::new(
            vec![v],
            vec![net.variable(v).cardinality()],
            vec![1.0; net.variable(v).cardinality()],
        ),
        None => Factor::scalar(1.0),
    };
    for f in &factors {
        result = result.product(f);
    }
    let out = Eliminated {
        values: result.values().to_vec(),
        log_scale,
        order,
    };
    let log_evidence = out.log_evidence();
    if log_evidence.is_nan() || log_evidence < ZERO_EVIDENCE_THRESHOLD.ln() {
        return Err(Error::ZeroProbabilityEvidence { scenario: None });
    }
    Ok(out)
}

fn check_target(net: &FittedNetwork, target: &str, evidence: &Evidence) -> Result<usize> {
    let t = net.require(target)?;
    if evidence.contains(target) {
        return Err(Error::InvalidQuery(format!(
            "target `{target}` is part of the evidence"
        )));
    }
    Ok(t)
}

fn build_result(net: &FittedNetwork, t: usize, evidence: &Evidence, el: Eliminated) -> QueryResult {
    QueryResult {
        target: net.variable(t).name().to_string(),
        levels: net.variable(t).levels().to_vec(),
        distribution: el.normalized(),
        evidence: evidence.clone(),
        evidence_probability: el.log_evidence().exp(),
        elimination_order: el.order.iter().map(|&i| net.variable(i).name().to_string()).collect(),
    }
}

/// Exact `P(target | evidence)` by variable elimination with a min-fill order.
pub fn posterior(net: &FittedNetwork, target: &str, evidence: &Evidence) -> Result<QueryResult> {
    let t = check_target(net, target, evidence)?;
    let ev = evidence.resolve(net)?;
    let el = eliminate(net, Some(t), &ev, None)?;
    Ok(build_result(net, t, evidence, el))
}

/// [`posterior`] with a caller-supplied elimination order (variable names).
pub fn posterior_with_order<S: AsRef<str>>(
    net: &FittedNetwork,
    target: &str,
    evidence: &Evidence,
    order: &[S],
) -> Result<QueryResult> {
    let t = check_target(net, target, evidence)?;
    let ev = evidence.resolve(net)?;
    let order = order
        .iter()
        .map(|s| net.require(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let el = eliminate(net, Some(t), &ev, Some(&order))?;
    Ok(build_result(net, t, evidence, el))
}

/// `P(evidence)`; 1 for empty evidence.
pub fn evidence_probability(net: &FittedNetwork, evidence: &Evidence) -> Result<f64> {
    let ev = evidence.resolve(net)?;
    if ev.is_empty() {
        return Ok(1.0);
    }
    Ok(eliminate(net, None, &ev, None)?.log_evidence().exp())
}

/// Baseline marginal of `target` followed by one row per level of `sweep`.
pub fn conditional_table(net: &FittedNetwork, target: &str, sweep: &str) -> Result<Vec<QueryResult>> {
    if target == sweep {
        return Err(Error::InvalidQuery("sweep variable equals the target".into()));
    }
    let s = net.require(sweep)?;
    let mut rows = vec![posterior(net, target, &Evidence::new())?];
    for level in net.variable(s).levels() {
        rows.push(posterior(net, target, &Evidence::new().with(sweep, level.clone()))?);
    }
    Ok(rows)
}
