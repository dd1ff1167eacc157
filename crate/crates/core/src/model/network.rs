use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CategoricalVariable, Cpt, Dag, Evidence};

/// A DAG together with one CPT per node.
///
/// Immutable once built; perturbation helpers return new networks.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedNetwork {
    variables: Vec<CategoricalVariable>,
    dag: Dag,
    cpts: Vec<Cpt>,
    metadata: BTreeMap<String, String>,
}

impl FittedNetwork {
    /// Node `i` of `dag` must be variable `i`, and `cpts[i]` its table.
    pub fn new(
        variables: Vec<CategoricalVariable>,
        dag: Dag,
        cpts: Vec<Cpt>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self> {
        if variables.len() != dag.len() || cpts.len() != dag.len() {
            return Err(Error::InvalidNetwork(format!(
                "{} variables, {} nodes, {} tables",
                variables.len(),
                dag.len(),
                cpts.len()
            )));
        }
        for (i, var) in variables.iter().enumerate() {
            var.validate()?;
            if var.name() != dag.name(i) {
                return Err(Error::InvalidNetwork(format!(
                    "variable `{}` does not match node `{}`",
                    var.name(),
                    dag.name(i)
                )));
            }
            let cpt = &cpts[i];
            let invalid = |reason: String| Error::InvalidCpt {
                variable: var.name().to_string(),
                reason,
            };
            if cpt.variable() != var.name() {
                return Err(invalid(format!("table is for `{}`", cpt.variable())));
            }
            if cpt.cardinality() != var.cardinality() {
                return Err(invalid("state count does not match the variable".into()));
            }
            let parents = dag.parent_names(i);
            if cpt.parents() != parents.as_slice() {
                return Err(invalid("parent order does not match the graph".into()));
            }
            for (&p, &card) in dag.parents(i).iter().zip(cpt.parent_cards()) {
                if variables[p].cardinality() != card {
                    return Err(invalid(format!(
                        "parent `{}` cardinality mismatch",
                        variables[p].name()
                    )));
                }
            }
        }
        Ok(FittedNetwork {
            variables,
            dag,
            cpts,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[CategoricalVariable] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &CategoricalVariable {
        &self.variables[i]
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn cpt(&self, i: usize) -> &Cpt {
        &self.cpts[i]
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.dag.index_of(name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.dag.require(name)
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(CategoricalVariable::cardinality).collect()
    }

    /// Copy with table `i` replaced.
    pub fn with_cpt(&self, i: usize, cpt: Cpt) -> Result<Self> {
        let mut cpts = self.cpts.clone();
        cpts[i] = cpt;
        FittedNetwork::new(self.variables.clone(), self.dag.clone(), cpts, self.metadata.clone())
    }

    /// Configuration index of node `i`'s parents under a full assignment.
    pub(crate) fn parent_config(&self, i: usize, assignment: &[usize]) -> usize {
        let cpt = &self.cpts[i];
        self.dag
            .parents(i)
            .iter()
            .zip(cpt.parent_cards())
            .fold(0, |acc, (&p, &c)| acc * c + assignment[p])
    }

    /// Product of CPT entries for a full assignment given as level indices.
    pub fn joint_probability_indices(&self, assignment: &[usize]) -> f64 {
        (0..self.len())
            .map(|i| self.cpts[i].prob(self.parent_config(i, assignment), assignment[i]))
            .product()
    }

    /// `∏ P(x_i | parents(x_i))` for an assignment covering every variable.
    pub fn joint_probability(&self, assignment: &Evidence) -> Result<f64> {
        let dense = assignment.resolve_full(self)?;
        Ok(self.joint_probability_indices(&dense))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(p_yes: f64) -> FittedNetwork {
        let var = CategoricalVariable::new("A", ["yes", "no"]).unwrap();
        let dag = Dag::empty(["A"]).unwrap();
        let cpt = Cpt::new("A", vec![], vec![], 2, vec![p_yes, 1.0 - p_yes]).unwrap();
        FittedNetwork::new(vec![var], dag, vec![cpt], BTreeMap::new()).unwrap()
    }

    #[test]
    fn single_node_joint() {
        let net = single(0.7);
        let p = net.joint_probability(&Evidence::new().with("A", "yes")).unwrap();
        assert_eq!(p, 0.7);
    }

    #[test]
    fn independent_uniform_pair() {
        let vars = vec![
            CategoricalVariable::new("A", ["0", "1"]).unwrap(),
            CategoricalVariable::new("B", ["0", "1"]).unwrap(),
        ];
        let dag = Dag::empty(["A", "B"]).unwrap();
        let cpts = vec![
            Cpt::uniform("A", vec![], vec![], 2),
            Cpt::uniform("B", vec![], vec![], 2),
        ];
        let net = FittedNetwork::new(vars, dag, cpts, BTreeMap::new()).unwrap();
        for a in ["0", "1"] {
            for b in ["0", "1"] {
                let e = Evidence::new().with("A", a).with("B", b);
                assert_eq!(net.joint_probability(&e).unwrap(), 0.25);
            }
        }
    }

    #[test]
    fn incomplete_and_unknown() {
        let net = single(0.7);
        assert!(matches!(
            net.joint_probability(&Evidence::new()),
            Err(Error::IncompleteAssignment(_))
        ));
        assert!(matches!(
            net.joint_probability(&Evidence::new().with("A", "maybe")),
            Err(Error::UnknownLevel { .. })
        ));
    }

    #[test]
    fn rejects_mismatched_parent_order() {
        let vars = vec![
            CategoricalVariable::new("A", ["0", "1"]).unwrap(),
            CategoricalVariable::new("B", ["0", "1"]).unwrap(),
        ];
        let dag = Dag::from_arcs(&["A", "B"], &[("A", "B")]).unwrap();
        let cpts = vec![
            Cpt::uniform("A", vec![], vec![], 2),
            Cpt::uniform("B", vec![], vec![], 2),
        ];
        assert!(FittedNetwork::new(vars, dag, cpts, BTreeMap::new()).is_err());
    }
}
