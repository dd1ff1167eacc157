use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named discrete variable with an ordered set of level labels.
///
/// `ordinal` is carried as metadata only; every variable is modelled as
/// unordered categorical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoricalVariable {
    name: String,
    levels: Vec<String>,
    #[serde(default)]
    ordinal: bool,
}

impl CategoricalVariable {
    pub fn new<S: Into<String>>(name: impl Into<String>, levels: impl IntoIterator<Item = S>) -> Result<Self> {
        let var = CategoricalVariable {
            name: name.into(),
            levels: levels.into_iter().map(Into::into).collect(),
            ordinal: false,
        };
        var.validate()?;
        Ok(var)
    }

    pub fn ordinal(mut self, ordinal: bool) -> Self {
        self.ordinal = ordinal;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidVariable {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if self.name.is_empty() {
            return Err(invalid("empty name"));
        }
        if self.levels.len() < 2 {
            return Err(invalid("fewer than two levels"));
        }
        for (i, level) in self.levels.iter().enumerate() {
            if self.levels[..i].contains(level) {
                return Err(invalid(&format!("duplicate level `{level}`")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn is_ordinal(&self) -> bool {
        self.ordinal
    }

    pub fn cardinality(&self) -> usize {
        self.levels.len()
    }

    pub fn level_index(&self, level: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == level)
    }

    /// Index of `level`, or `UnknownLevel`.
    pub fn require_level(&self, level: &str) -> Result<usize> {
        self.level_index(level).ok_or_else(|| Error::UnknownLevel {
            variable: self.name.clone(),
            level: level.to_string(),
        })
    }

    /// Same variable restricted to the levels at `keep` (in their existing order).
    pub(crate) fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let var = CategoricalVariable {
            name: self.name.clone(),
            levels: keep.iter().map(|&i| self.levels[i].clone()).collect(),
            ordinal: self.ordinal,
        };
        var.validate()?;
        Ok(var)
    }
}
