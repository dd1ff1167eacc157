use crate::error::{Error, Result};
use crate::model::CategoricalVariable;

/// Sentinel marking a missing cell in an encoded column.
pub(crate) const MISSING: u16 = u16::MAX;

/// Encoded observation matrix: one column of level indices per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataTable {
    variables: Vec<CategoricalVariable>,
    columns: Vec<Vec<u16>>,
    n_rows: usize,
}

impl DataTable {
    /// Build from columns of optional level indices.
    pub fn new(variables: Vec<CategoricalVariable>, columns: Vec<Vec<Option<usize>>>) -> Result<Self> {
        if variables.len() != columns.len() {
            return Err(Error::InvalidNetwork(format!(
                "{} variables but {} columns",
                variables.len(),
                columns.len()
            )));
        }
        let n_rows = columns.first().map_or(0, Vec::len);
        let mut encoded = Vec::with_capacity(columns.len());
        for (var, col) in variables.iter().zip(columns) {
            if col.len() != n_rows {
                return Err(Error::InvalidNetwork(format!(
                    "column `{}` has {} rows, expected {n_rows}",
                    var.name(),
                    col.len()
                )));
            }
            let r = var.cardinality();
            let enc = col
                .into_iter()
                .map(|cell| match cell {
                    None => Ok(MISSING),
                    Some(k) if k < r => Ok(k as u16),
                    Some(k) => Err(Error::UnknownLevel {
                        variable: var.name().to_string(),
                        level: k.to_string(),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            encoded.push(enc);
        }
        DataTable::from_encoded(variables, encoded, n_rows)
    }

    pub(crate) fn from_encoded(
        variables: Vec<CategoricalVariable>,
        columns: Vec<Vec<u16>>,
        n_rows: usize,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &variables {
            if !seen.insert(v.name()) {
                return Err(Error::DuplicateVariable(v.name().to_string()));
            }
        }
        debug_assert!(columns.iter().all(|c| c.len() == n_rows));
        Ok(DataTable {
            variables,
            columns,
            n_rows,
        })
    }

    /// Zero-row table with the given variables.
    pub fn empty(variables: Vec<CategoricalVariable>) -> Self {
        let columns = vec![Vec::new(); variables.len()];
        DataTable {
            variables,
            columns,
            n_rows: 0,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[CategoricalVariable] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &CategoricalVariable {
        &self.variables[i]
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name().to_string()).collect()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(CategoricalVariable::cardinality).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name() == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn value(&self, row: usize, col: usize) -> Option<usize> {
        match self.columns[col][row] {
            MISSING => None,
            v => Some(v as usize),
        }
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.columns[col][row] == MISSING
    }

    pub(crate) fn column(&self, col: usize) -> &[u16] {
        &self.columns[col]
    }

    /// Level label of a cell, `None` when missing.
    pub fn label(&self, row: usize, col: usize) -> Option<&str> {
        self.value(row, col).map(|k| self.variables[col].levels()[k].as_str())
    }

    /// Does any cell of the listed columns contain a missing value?
    pub fn has_missing(&self, cols: &[usize]) -> bool {
        cols.iter().any(|&c| self.columns[c].contains(&MISSING))
    }

    /// Observed count per level of column `col` (missing cells skipped).
    pub fn level_counts(&self, col: usize) -> Vec<usize> {
        let mut counts = vec![0; self.variables[col].cardinality()];
        for &v in &self.columns[col] {
            if v != MISSING {
                counts[v as usize] += 1;
            }
        }
        counts
    }

    /// Keep only rows where `keep[row]` is true, preserving order.
    pub fn filter_rows(&self, keep: &[bool]) -> DataTable {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .zip(keep)
                    .filter(|(_, &k)| k)
                    .map(|(&v, _)| v)
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let n_rows = keep.iter().filter(|&&k| k).count();
        DataTable {
            variables: self.variables.clone(),
            columns,
            n_rows,
        }
    }

    /// Rows at `indices` (repetition allowed), e.g. a bootstrap resample.
    pub fn take_rows(&self, indices: &[usize]) -> DataTable {
        let columns = self
            .columns
            .iter()
            .map(|col| indices.iter().map(|&i| col[i]).collect())
            .collect();
        DataTable {
            variables: self.variables.clone(),
            columns,
            n_rows: indices.len(),
        }
    }

    /// Projection onto the named columns, in the given order.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<DataTable> {
        let idx = names
            .iter()
            .map(|n| self.require(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        DataTable::from_encoded(
            idx.iter().map(|&i| self.variables[i].clone()).collect(),
            idx.iter().map(|&i| self.columns[i].clone()).collect(),
            self.n_rows,
        )
    }

    pub(crate) fn replace_column(&mut self, col: usize, variable: CategoricalVariable, values: Vec<u16>) {
        debug_assert_eq!(values.len(), self.n_rows);
        self.variables[col] = variable;
        self.columns[col] = values;
    }

    pub(crate) fn push_column(&mut self, variable: CategoricalVariable, values: Vec<u16>) -> Result<()> {
        if self.index_of(variable.name()).is_some() {
            return Err(Error::DuplicateVariable(variable.name().to_string()));
        }
        debug_assert_eq!(values.len(), self.n_rows);
        self.variables.push(variable);
        self.columns.push(values);
        Ok(())
    }

    pub(crate) fn remove_columns(&mut self, drop: &[usize]) {
        let mut i = 0;
        self.variables.retain(|_| {
            i += 1;
            !drop.contains(&(i - 1))
        });
        let mut i = 0;
        self.columns.retain(|_| {
            i += 1;
            !drop.contains(&(i - 1))
        });
    }
}
