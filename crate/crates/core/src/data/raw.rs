use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Content hash and row count of an input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub sha256: String,
    pub rows: usize,
}

impl Fingerprint {
    pub fn of_bytes(bytes: &[u8], rows: usize) -> Self {
        Fingerprint {
            sha256: hex::encode(Sha256::digest(bytes)),
            rows,
        }
    }
}

/// Unparsed survey table; cells are kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTable {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    fingerprint: Fingerprint,
}

impl RawTable {
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Parse CSV bytes (header row required). `required` columns must exist.
    pub fn from_csv_bytes<S: AsRef<str>>(bytes: &[u8], required: &[S]) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(bytes);
        let columns: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        for name in required {
            if !columns.iter().any(|c| c == name.as_ref()) {
                return Err(Error::MissingColumn(name.as_ref().to_string()));
            }
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != columns.len() {
                return Err(Error::RaggedRow(i + 1));
            }
            rows.push(record.iter().map(str::to_string).collect());
        }
        let fingerprint = Fingerprint::of_bytes(bytes, rows.len());
        Ok(RawTable {
            columns,
            rows,
            fingerprint,
        })
    }
}

/// Read a UTF-8 CSV file with a header row.
///
/// Ragged rows are reported by 1-based data-row number (header excluded).
pub fn load_csv<S: AsRef<str>>(path: &Path, required: &[S]) -> Result<RawTable> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    RawTable::from_csv_bytes(&bytes, required)
}
