//! Native model file: a versioned TOML document.
//!
//! ```toml
//! format = "beliefnet-model"
//! version = 1
//!
//! [metadata]
//! seed = "7"
//!
//! [[variable]]
//! name = "A"
//! levels = ["yes", "no"]
//! ordinal = false
//! parents = []
//! cpt = [[0.7, 0.3]]
//! ```
//!
//! Variables appear in node order. `cpt` holds one row per parent
//! configuration (mixed radix over `parents`, last parent fastest). Floats
//! are written in shortest round-trip form, so a save/load cycle is exact.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CategoricalVariable, Cpt, Dag, FittedNetwork};

pub const FORMAT_NAME: &str = "beliefnet-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
    #[serde(default)]
    variable: Vec<NodeEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeEntry {
    name: String,
    levels: Vec<String>,
    #[serde(default)]
    ordinal: bool,
    #[serde(default)]
    parents: Vec<String>,
    cpt: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct Header {
    format: Option<String>,
    version: Option<u32>,
}

pub fn serialize(net: &FittedNetwork) -> String {
    let file = ModelFile {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        metadata: net.metadata().clone(),
        variable: net
            .variables()
            .iter()
            .zip(net.cpts())
            .map(|(var, cpt)| NodeEntry {
                name: var.name().to_string(),
                levels: var.levels().to_vec(),
                ordinal: var.is_ordinal(),
                parents: cpt.parents().to_vec(),
                cpt: (0..cpt.n_configs()).map(|j| cpt.row(j).to_vec()).collect(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("model file serializes")
}

fn malformed(text: &str, err: &toml::de::Error) -> Error {
    let (line, column) = match err.span() {
        Some(span) => line_col(text, span.start),
        None => (0, 0),
    };
    Error::MalformedFile {
        line,
        column,
        message: err.message().to_string(),
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

fn structural(message: impl Into<String>) -> Error {
    Error::MalformedFile {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

pub fn deserialize(text: &str) -> Result<FittedNetwork> {
    let header: Header = toml::from_str(text).map_err(|e| malformed(text, &e))?;
    if header.format.as_deref() != Some(FORMAT_NAME) {
        return Err(structural(format!("missing `format = \"{FORMAT_NAME}\"`")));
    }
    match header.version {
        Some(FORMAT_VERSION) => {}
        Some(found) => {
            return Err(Error::VersionMismatch {
                found,
                expected: FORMAT_VERSION,
            })
        }
        None => return Err(structural("missing `version`")),
    }
    let file: ModelFile = toml::from_str(text).map_err(|e| malformed(text, &e))?;

    let names: Vec<String> = file.variable.iter().map(|v| v.name.clone()).collect();
    let mut variables = Vec::with_capacity(names.len());
    for entry in &file.variable {
        variables.push(CategoricalVariable::new(entry.name.clone(), entry.levels.clone())?.ordinal(entry.ordinal));
    }
    let mut dag = Dag::empty(names.clone())?;
    let mut parent_lists = Vec::with_capacity(names.len());
    for entry in &file.variable {
        let ps = entry
            .parents
            .iter()
            .map(|p| dag.require(p))
            .collect::<Result<Vec<_>>>()?;
        parent_lists.push(ps);
    }
    dag = Dag::from_parents(names, parent_lists)?;

    let mut cpts = Vec::with_capacity(variables.len());
    for (i, entry) in file.variable.iter().enumerate() {
        let parent_cards: Vec<usize> = dag.parents(i).iter().map(|&p| variables[p].cardinality()).collect();
        let q: usize = parent_cards.iter().product();
        let r = variables[i].cardinality();
        if entry.cpt.len() != q || entry.cpt.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidCpt {
                variable: entry.name.clone(),
                reason: format!("expected {q} rows of {r} entries"),
            });
        }
        let values = entry.cpt.iter().flatten().copied().collect();
        let (cpt, fixed) = Cpt::new_lenient(entry.name.clone(), entry.parents.clone(), parent_cards, r, values)?;
        if !fixed.is_empty() {
            log::warn!("renormalized rows {fixed:?} of `{}`", entry.name);
        }
        cpts.push(cpt);
    }
    FittedNetwork::new(variables, dag, cpts, file.metadata)
}

pub fn save(net: &FittedNetwork, path: &Path) -> Result<()> {
    std::fs::write(path, serialize(net)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<FittedNetwork> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    deserialize(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"format = "beliefnet-model"
version = 1

[[variable]]
name = "A"
levels = ["yes", "no"]
parents = []
cpt = [[0.7, 0.3]]
"#;

    #[test]
    fn parses_minimal_file() {
        let net = deserialize(SMALL).unwrap();
        assert_eq!(net.len(), 1);
        assert_eq!(net.cpt(0).row(0), &[0.7, 0.3]);
    }

    #[test]
    fn version_mismatch() {
        let text = SMALL.replace("version = 1", "version = 2");
        assert!(matches!(
            deserialize(&text),
            Err(Error::VersionMismatch { found: 2, expected: 1 })
        ));
    }

    #[test]
    fn malformed_reports_position() {
        let text = SMALL.replace("cpt = [[0.7, 0.3]]", "cpt = [[0.7, \"x\"]]");
        match deserialize(&text) {
            Err(Error::MalformedFile { line, .. }) => assert!(line >= 1),
            other => panic!("unexpected {other:?}"),
        }
        let text = "format = \"beliefnet-model\"\nversion = = 1\n";
        match deserialize(text) {
            Err(Error::MalformedFile { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_rows() {
        let text = SMALL.replace("[[0.7, 0.3]]", "[[0.7, 0.4]]");
        assert!(matches!(deserialize(&text), Err(Error::InvalidCpt { .. })));
        let text = SMALL.replace("[[0.7, 0.3]]", "[[0.7, 0.3, 0.0]]");
        assert!(deserialize(&text).is_err());
    }

    #[test]
    fn renormalizes_tiny_drift() {
        let text = SMALL.replace("[[0.7, 0.3]]", "[[0.7000000005, 0.3]]");
        let net = deserialize(&text).unwrap();
        assert!((net.cpt(0).row(0).iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
