use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infer::{evidence_probability, posterior, QueryResult};
use crate::model::{Evidence, FittedNetwork};

/// Named evidence profile; empty evidence is the baseline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDef {
    pub name: String,
    #[serde(default)]
    pub evidence: Evidence,
}

impl ScenarioDef {
    pub fn new(name: impl Into<String>, evidence: Evidence) -> Self {
        ScenarioDef {
            name: name.into(),
            evidence,
        }
    }

    pub fn baseline() -> Self {
        ScenarioDef::new("Baseline", Evidence::new())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub evidence: Evidence,
    pub evidence_probability: f64,
    /// One posterior per requested target, in target order.
    pub posteriors: Vec<QueryResult>,
}

fn name_scenario(e: Error, name: &str) -> Error {
    match e {
        Error::ZeroProbabilityEvidence { .. } => Error::ZeroProbabilityEvidence {
            scenario: Some(name.to_string()),
        },
        other => other,
    }
}

/// Posterior of every target under every scenario, in scenario order.
pub fn scenario_posteriors<S: AsRef<str>>(
    net: &FittedNetwork,
    scenarios: &[ScenarioDef],
    targets: &[S],
) -> Result<Vec<ScenarioResult>> {
    scenarios
        .iter()
        .map(|sc| {
            for t in targets {
                if sc.evidence.contains(t.as_ref()) {
                    return Err(Error::InvalidQuery(format!(
                        "scenario `{}` fixes the target `{}`",
                        sc.name,
                        t.as_ref()
                    )));
                }
            }
            let pe = evidence_probability(net, &sc.evidence).map_err(|e| name_scenario(e, &sc.name))?;
            let posteriors = targets
                .iter()
                .map(|t| posterior(net, t.as_ref(), &sc.evidence).map_err(|e| name_scenario(e, &sc.name)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ScenarioResult {
                scenario: sc.name.clone(),
                evidence: sc.evidence.clone(),
                evidence_probability: pe,
                posteriors,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CategoricalVariable, Cpt, Dag};

    fn net() -> FittedNetwork {
        let v = |n: &str| CategoricalVariable::new(n, ["no", "yes"]).unwrap();
        let dag = Dag::from_arcs(&["A", "B"], &[("A", "B")]).unwrap();
        let cpts = vec![
            Cpt::new("A", vec![], vec![], 2, vec![1.0, 0.0]).unwrap(),
            Cpt::new("B", vec!["A".into()], vec![2], 2, vec![0.2, 0.8, 0.6, 0.4]).unwrap(),
        ];
        FittedNetwork::new(vec![v("A"), v("B")], dag, cpts, Default::default()).unwrap()
    }

    #[test]
    fn baseline_is_marginal() {
        let out = scenario_posteriors(&net(), &[ScenarioDef::baseline()], &["B"]).unwrap();
        assert_eq!(out[0].evidence_probability, 1.0);
        assert!((out[0].posteriors[0].distribution[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn impossible_scenario_is_named() {
        let sc = ScenarioDef::new("Impossible", Evidence::new().with("A", "yes"));
        match scenario_posteriors(&net(), &[sc], &["B"]) {
            Err(Error::ZeroProbabilityEvidence { scenario }) => assert_eq!(scenario.as_deref(), Some("Impossible")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn target_in_evidence_is_rejected() {
        let sc = ScenarioDef::new("S", Evidence::new().with("B", "yes"));
        assert!(matches!(
            scenario_posteriors(&net(), &[sc], &["B"]),
            Err(Error::InvalidQuery(_))
        ));
    }
}
