//! Persisted encoded tables: a CSV of level labels (empty cell = missing)
//! plus a TOML variable dictionary listing each column's ordered levels.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::table::{DataTable, MISSING};
use crate::error::{Error, Result};
use crate::model::CategoricalVariable;

#[derive(Serialize, Deserialize)]
struct Dictionary {
    variable: Vec<CategoricalVariable>,
}

pub fn dictionary_to_toml(variables: &[CategoricalVariable]) -> String {
    toml::to_string(&Dictionary {
        variable: variables.to_vec(),
    })
    .expect("dictionary serializes")
}

pub fn dictionary_from_toml(text: &str) -> Result<Vec<CategoricalVariable>> {
    let dict: Dictionary = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    for v in &dict.variable {
        v.validate()?;
    }
    Ok(dict.variable)
}

pub fn table_to_csv(table: &DataTable) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(table.variables().iter().map(CategoricalVariable::name))?;
    for r in 0..table.n_rows() {
        w.write_record((0..table.n_vars()).map(|c| table.label(r, c).unwrap_or("")))?;
    }
    w.into_inner().map_err(|e| Error::io("<buffer>", e.into_error()))
}

pub fn table_from_csv(bytes: &[u8], variables: Vec<CategoricalVariable>) -> Result<DataTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let names: Vec<&str> = variables.iter().map(CategoricalVariable::name).collect();
    if header != names {
        return Err(Error::InvalidConfig(format!(
            "table header {header:?} does not match dictionary {names:?}"
        )));
    }
    let mut columns: Vec<Vec<u16>> = vec![Vec::new(); variables.len()];
    let mut n_rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != variables.len() {
            return Err(Error::RaggedRow(i + 1));
        }
        for ((cell, var), col) in record.iter().zip(&variables).zip(columns.iter_mut()) {
            col.push(if cell.is_empty() {
                MISSING
            } else {
                var.require_level(cell)? as u16
            });
        }
        n_rows += 1;
    }
    DataTable::from_encoded(variables, columns, n_rows)
}

/// Write `<stem>.csv` and `<stem>.vars.toml` next to each other.
pub fn save_table(table: &DataTable, csv_path: &Path, dict_path: &Path) -> Result<()> {
    std::fs::write(csv_path, table_to_csv(table)?).map_err(|e| Error::io(csv_path, e))?;
    std::fs::write(dict_path, dictionary_to_toml(table.variables())).map_err(|e| Error::io(dict_path, e))
}

pub fn load_table(csv_path: &Path, dict_path: &Path) -> Result<DataTable> {
    let dict = std::fs::read_to_string(dict_path).map_err(|e| Error::io(dict_path, e))?;
    let bytes = std::fs::read(csv_path).map_err(|e| Error::io(csv_path, e))?;
    table_from_csv(&bytes, dictionary_from_toml(&dict)?)
}
