use crate::error::{Error, Result};

/// Row sums must match 1 within this tolerance to be accepted as-is.
pub const ROW_TOLERANCE: f64 = 1e-12;
/// Rows off by at most this much are renormalized on load (with a warning).
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// Conditional probability table `P(X | parents)`.
///
/// Rows are parent configurations `j` in mixed radix over `parents` with the
/// last parent varying fastest; columns are the states `k` of the variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    variable: String,
    parents: Vec<String>,
    parent_cards: Vec<usize>,
    cardinality: usize,
    values: Vec<f64>,
}

impl Cpt {
    /// Build from row-major values, requiring every row to sum to 1 within
    /// [`ROW_TOLERANCE`].
    pub fn new(
        variable: impl Into<String>,
        parents: Vec<String>,
        parent_cards: Vec<usize>,
        cardinality: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        let cpt = Cpt::unchecked(variable.into(), parents, parent_cards, cardinality, values)?;
        for j in 0..cpt.n_configs() {
            let sum: f64 = cpt.row(j).iter().sum();
            if (sum - 1.0).abs() > ROW_TOLERANCE {
                return Err(cpt.invalid(format!("row {j} sums to {sum}")));
            }
        }
        Ok(cpt)
    }

    /// Like [`Cpt::new`] but renormalizes rows within [`RENORMALIZE_TOLERANCE`]
    /// of 1. Returns the indices of rows that were renormalized.
    pub fn new_lenient(
        variable: impl Into<String>,
        parents: Vec<String>,
        parent_cards: Vec<usize>,
        cardinality: usize,
        values: Vec<f64>,
    ) -> Result<(Self, Vec<usize>)> {
        let mut cpt = Cpt::unchecked(variable.into(), parents, parent_cards, cardinality, values)?;
        let mut fixed = Vec::new();
        for j in 0..cpt.n_configs() {
            let sum: f64 = cpt.row(j).iter().sum();
            let err = (sum - 1.0).abs();
            if err > RENORMALIZE_TOLERANCE {
                return Err(cpt.invalid(format!("row {j} sums to {sum}")));
            }
            if err > ROW_TOLERANCE {
                cpt.row_mut(j).iter_mut().for_each(|v| *v /= sum);
                fixed.push(j);
            }
        }
        Ok((cpt, fixed))
    }

    fn unchecked(
        variable: String,
        parents: Vec<String>,
        parent_cards: Vec<usize>,
        cardinality: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        let cpt = Cpt {
            variable,
            parents,
            parent_cards,
            cardinality,
            values,
        };
        if cpt.parents.len() != cpt.parent_cards.len() {
            return Err(cpt.invalid("parent list and cardinalities differ in length".into()));
        }
        if cpt.cardinality < 2 || cpt.parent_cards.iter().any(|&c| c < 2) {
            return Err(cpt.invalid("cardinalities must be at least 2".into()));
        }
        let expected = cpt.n_configs() * cpt.cardinality;
        if cpt.values.len() != expected {
            return Err(cpt.invalid(format!("{} entries, expected {expected}", cpt.values.len())));
        }
        if let Some(v) = cpt.values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(cpt.invalid(format!("entry {v} outside [0, 1]")));
        }
        Ok(cpt)
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidCpt {
            variable: self.variable.clone(),
            reason,
        }
    }

    /// Uniform table over the given parent cardinalities.
    pub fn uniform(
        variable: impl Into<String>,
        parents: Vec<String>,
        parent_cards: Vec<usize>,
        cardinality: usize,
    ) -> Self {
        let q: usize = parent_cards.iter().product();
        Cpt {
            variable: variable.into(),
            parents,
            parent_cards,
            cardinality,
            values: vec![1.0 / cardinality as f64; q * cardinality],
        }
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn parents(&self) -> &[String] {
        &self.parents
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    /// q_i, the number of parent configurations.
    pub fn n_configs(&self) -> usize {
        self.parent_cards.iter().product()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn prob(&self, config: usize, state: usize) -> f64 {
        self.values[config * self.cardinality + state]
    }

    pub fn row(&self, config: usize) -> &[f64] {
        let r = self.cardinality;
        &self.values[config * r..(config + 1) * r]
    }

    pub(crate) fn row_mut(&mut self, config: usize) -> &mut [f64] {
        let r = self.cardinality;
        &mut self.values[config * r..(config + 1) * r]
    }

    /// Replace one row; the replacement must be a distribution up to
    /// [`RENORMALIZE_TOLERANCE`], and entries are clamped into `[0, 1]`.
    pub fn with_row(&self, config: usize, row: &[f64]) -> Result<Self> {
        if row.len() != self.cardinality {
            return Err(self.invalid("replacement row has wrong length".into()));
        }
        let sum: f64 = row.iter().sum();
        let tol = RENORMALIZE_TOLERANCE;
        if (sum - 1.0).abs() > tol || row.iter().any(|v| !(-tol..=1.0 + tol).contains(v)) {
            return Err(self.invalid(format!("replacement row is not a distribution (sum {sum})")));
        }
        let mut out = self.clone();
        for (dst, &v) in out.row_mut(config).iter_mut().zip(row) {
            *dst = v.clamp(0.0, 1.0);
        }
        Ok(out)
    }

    /// Mixed-radix configuration index of parent levels (last parent fastest).
    pub fn config_index(&self, parent_levels: &[usize]) -> usize {
        config_index(&self.parent_cards, parent_levels)
    }

    /// Parent levels of configuration `j`.
    pub fn config_levels(&self, config: usize) -> Vec<usize> {
        config_levels(&self.parent_cards, config)
    }
}

/// Mixed-radix index over `cards`, last position fastest.
pub fn config_index(cards: &[usize], levels: &[usize]) -> usize {
    debug_assert_eq!(cards.len(), levels.len());
    cards.iter().zip(levels).fold(0, |acc, (&c, &l)| acc * c + l)
}

/// Inverse of [`config_index`].
pub fn config_levels(cards: &[usize], mut index: usize) -> Vec<usize> {
    let mut levels = vec![0; cards.len()];
    for (slot, &c) in levels.iter_mut().zip(cards).rev() {
        *slot = index % c;
        index /= c;
    }
    levels
}
