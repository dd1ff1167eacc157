use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::table::{DataTable, MISSING};
use crate::data::RawTable;
use crate::error::{Error, Result};
use crate::model::CategoricalVariable;

/// What to do with a raw token that no rule covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnmappedPolicy {
    /// Fail with `UnmappedToken`.
    #[default]
    Strict,
    /// Treat the cell as missing.
    Missing,
}

/// Recoding rule for one output variable.
///
/// Token resolution (after trimming whitespace): tokens listed in `missing`
/// become missing; tokens in `map` become the mapped level; a token equal to a
/// level label maps to that level; anything else falls to the unmapped policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableRecode {
    pub name: String,
    /// Raw column; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub levels: Vec<String>,
    #[serde(default)]
    pub ordinal: bool,
    #[serde(default)]
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub missing: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unmapped: Option<UnmappedPolicy>,
}

impl VariableRecode {
    pub fn source(&self) -> &str {
        self.source.as_deref().unwrap_or(&self.name)
    }
}

/// Ordered list of recoding rules plus the default unmapped-token policy.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecodeSpec {
    #[serde(default)]
    pub unmapped: UnmappedPolicy,
    #[serde(default)]
    pub variable: Vec<VariableRecode>,
}

impl RecodeSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Raw columns the spec reads.
    pub fn source_columns(&self) -> Vec<&str> {
        let mut cols: Vec<&str> = self.variable.iter().map(VariableRecode::source).collect();
        cols.dedup();
        cols
    }
}

/// Map raw cells to level indices according to `spec`.
pub fn recode(raw: &RawTable, spec: &RecodeSpec) -> Result<DataTable> {
    let mut variables = Vec::with_capacity(spec.variable.len());
    let mut columns = Vec::with_capacity(spec.variable.len());
    for rule in &spec.variable {
        let var = CategoricalVariable::new(rule.name.clone(), rule.levels.clone())?.ordinal(rule.ordinal);
        let src = raw
            .column_index(rule.source())
            .ok_or_else(|| Error::MissingColumn(rule.source().to_string()))?;
        for target in rule.map.values() {
            var.require_level(target)?;
        }
        let policy = rule.unmapped.unwrap_or(spec.unmapped);
        let mut col = Vec::with_capacity(raw.n_rows());
        for row in raw.rows() {
            let token = row[src].trim();
            let code = if rule.missing.iter().any(|m| m == token) {
                MISSING
            } else if let Some(level) = rule.map.get(token) {
                var.require_level(level)? as u16
            } else if let Some(k) = var.level_index(token) {
                k as u16
            } else {
                match policy {
                    UnmappedPolicy::Missing => MISSING,
                    UnmappedPolicy::Strict => {
                        return Err(Error::UnmappedToken {
                            variable: rule.name.clone(),
                            token: token.to_string(),
                        })
                    }
                }
            };
            col.push(code);
        }
        variables.push(var);
        columns.push(col);
    }
    DataTable::from_encoded(variables, columns, raw.n_rows())
}
