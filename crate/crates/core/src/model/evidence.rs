use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FittedNetwork;

/// Observed states keyed by variable name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Evidence {
    assignments: BTreeMap<String, String>,
}

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insert; a later value for the same variable replaces the
    /// earlier one.
    pub fn with(mut self, variable: impl Into<String>, level: impl Into<String>) -> Self {
        self.assignments.insert(variable.into(), level.into());
        self
    }

    pub fn insert(&mut self, variable: impl Into<String>, level: impl Into<String>) {
        self.assignments.insert(variable.into(), level.into());
    }

    pub fn get(&self, variable: &str) -> Option<&str> {
        self.assignments.get(variable).map(String::as_str)
    }

    pub fn contains(&self, variable: &str) -> bool {
        self.assignments.contains_key(variable)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.assignments.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Resolve names to `(variable index, level index)` pairs against `net`.
    pub fn resolve(&self, net: &FittedNetwork) -> Result<Vec<(usize, usize)>> {
        self.iter()
            .map(|(var, level)| {
                let i = net.require(var)?;
                let k = net.variables()[i].require_level(level)?;
                Ok((i, k))
            })
            .collect()
    }

    /// Dense form: one slot per variable.
    pub fn resolve_dense(&self, net: &FittedNetwork) -> Result<Vec<Option<usize>>> {
        let mut dense = vec![None; net.len()];
        for (i, k) in self.resolve(net)? {
            dense[i] = Some(k);
        }
        Ok(dense)
    }

    /// Resolve a full assignment; every variable must be present.
    pub fn resolve_full(&self, net: &FittedNetwork) -> Result<Vec<usize>> {
        let dense = self.resolve_dense(net)?;
        dense
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::IncompleteAssignment(net.variables()[i].name().to_string())))
            .collect()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Evidence {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        Evidence {
            assignments: iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }
}
