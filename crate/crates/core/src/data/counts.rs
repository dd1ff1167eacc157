use crate::data::table::{DataTable, MISSING};
use crate::error::Result;

/// Sufficient statistics N_ijk for one variable and an ordered parent set.
///
/// Configurations `j` are mixed radix over `parents`, last parent fastest,
/// and every configuration is present even when unobserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    variable: usize,
    parents: Vec<usize>,
    parent_cards: Vec<usize>,
    cardinality: usize,
    counts: Vec<u64>,
}

impl CountTable {
    pub fn variable(&self) -> usize {
        self.variable
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn n_configs(&self) -> usize {
        self.parent_cards.iter().product()
    }

    pub fn n_ijk(&self, config: usize, state: usize) -> u64 {
        self.counts[config * self.cardinality + state]
    }

    pub fn row(&self, config: usize) -> &[u64] {
        let r = self.cardinality;
        &self.counts[config * r..(config + 1) * r]
    }

    /// N_ij = Σ_k N_ijk.
    pub fn n_ij(&self, config: usize) -> u64 {
        self.row(config).iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Build directly from dense counts (used by tests and tools).
    pub fn from_counts(cardinality: usize, parent_cards: Vec<usize>, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len(), parent_cards.iter().product::<usize>() * cardinality);
        CountTable {
            variable: 0,
            parents: (1..=parent_cards.len()).collect(),
            parent_cards,
            cardinality,
            counts,
        }
    }

    /// Sum out the parent at position `pos` of the parent list.
    pub fn marginalize_parent(&self, pos: usize) -> CountTable {
        let mut parents = self.parents.clone();
        parents.remove(pos);
        let mut parent_cards = self.parent_cards.clone();
        parent_cards.remove(pos);
        let q: usize = parent_cards.iter().product();
        let mut counts = vec![0; q * self.cardinality];
        for j in 0..self.n_configs() {
            let mut levels = crate::model::config_levels(&self.parent_cards, j);
            levels.remove(pos);
            let jj = crate::model::config_index(&parent_cards, &levels);
            for k in 0..self.cardinality {
                counts[jj * self.cardinality + k] += self.n_ijk(j, k);
            }
        }
        CountTable {
            variable: self.variable,
            parents,
            parent_cards,
            cardinality: self.cardinality,
            counts,
        }
    }
}

/// Tally N_ijk for `variable` given `parents` (column indices).
///
/// Rows with a missing cell in any involved column are skipped.
pub fn counts(table: &DataTable, variable: usize, parents: &[usize]) -> CountTable {
    let cardinality = table.variable(variable).cardinality();
    let parent_cards: Vec<usize> = parents.iter().map(|&p| table.variable(p).cardinality()).collect();
    let q: usize = parent_cards.iter().product();
    let mut counts = vec![0u64; q * cardinality];
    let child = table.column(variable);
    let cols: Vec<&[u16]> = parents.iter().map(|&p| table.column(p)).collect();
    'rows: for (row, &k) in child.iter().enumerate() {
        if k == MISSING {
            continue;
        }
        let mut j = 0usize;
        for (col, &card) in cols.iter().zip(&parent_cards) {
            let v = col[row];
            if v == MISSING {
                continue 'rows;
            }
            j = j * card + v as usize;
        }
        counts[j * cardinality + k as usize] += 1;
    }
    CountTable {
        variable,
        parents: parents.to_vec(),
        parent_cards,
        cardinality,
        counts,
    }
}

/// Name-based variant of [`counts`].
pub fn counts_by_name<S: AsRef<str>>(table: &DataTable, variable: &str, parents: &[S]) -> Result<CountTable> {
    let v = table.require(variable)?;
    let ps = parents
        .iter()
        .map(|p| table.require(p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(counts(table, v, &ps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CategoricalVariable;

    fn table() -> DataTable {
        let v = |n: &str, r: usize| CategoricalVariable::new(n, (0..r).map(|i| i.to_string())).unwrap();
        DataTable::new(
            vec![v("X", 2), v("P", 3)],
            vec![
                vec![Some(0), Some(1), Some(1), Some(0), None],
                vec![Some(0), Some(0), Some(1), Some(1), Some(2)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn marginal_histogram() {
        let c = counts(&table(), 0, &[]);
        assert_eq!(c.n_configs(), 1);
        assert_eq!(c.row(0), &[2, 2]);
        assert_eq!(c.total(), 4);
    }

    #[test]
    fn unobserved_config_is_zero_row() {
        let c = counts(&table(), 0, &[1]);
        assert_eq!(c.n_configs(), 3);
        assert_eq!(c.row(0), &[1, 1]);
        assert_eq!(c.row(1), &[1, 1]);
        // P = 2 appears only with X missing.
        assert_eq!(c.row(2), &[0, 0]);
        assert_eq!(c.n_ij(2), 0);
    }

    #[test]
    fn marginalizing_a_parent() {
        let c = counts(&table(), 0, &[1]);
        assert_eq!(c.marginalize_parent(0), counts(&table(), 0, &[]));
    }
}
