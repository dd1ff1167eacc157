use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::DataTable;
use crate::error::{Error, Result};
use crate::learn::{tabu_search, Constraints, ScoreKind, TabuConfig};
use crate::model::Dag;
use crate::par::{try_map_indexed, Execution};

/// Bootstrap replicates used when none are configured.
pub const DEFAULT_REPLICATES: usize = 2000;

/// Directed arc tallies over `replicates` bootstrap DAGs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcStrengthTable {
    variables: Vec<String>,
    replicates: usize,
    /// Row-major `n × n`; entry `a * n + b` counts DAGs containing `a → b`.
    counts: Vec<u64>,
}

impl ArcStrengthTable {
    /// Table with no replicates tallied yet.
    pub fn new(variables: Vec<String>) -> Self {
        let n = variables.len();
        ArcStrengthTable {
            variables,
            replicates: 0,
            counts: vec![0; n * n],
        }
    }

    /// Build directly from directed counts (row-major `n × n`).
    pub fn from_counts(variables: Vec<String>, replicates: usize, counts: Vec<u64>) -> Result<Self> {
        let n = variables.len();
        if counts.len() != n * n {
            return Err(Error::InvalidConfig(format!(
                "expected {} arc counts, got {}",
                n * n,
                counts.len()
            )));
        }
        for a in 0..n {
            if counts[a * n + a] != 0 {
                return Err(Error::InvalidConfig(format!("self-loop count for `{}`", variables[a])));
            }
            for b in a + 1..n {
                if counts[a * n + b] + counts[b * n + a] > replicates as u64 {
                    return Err(Error::InvalidConfig(format!(
                        "arc counts for {} - {} exceed the replicate count",
                        variables[a], variables[b]
                    )));
                }
            }
        }
        Ok(ArcStrengthTable {
            variables,
            replicates,
            counts,
        })
    }

    /// Tally one DAG over the same variables.
    pub fn add(&mut self, dag: &Dag) {
        debug_assert_eq!(dag.nodes(), self.variables.as_slice());
        let n = self.variables.len();
        for (a, b) in dag.arcs() {
            self.counts[a * n + b] += 1;
        }
        self.replicates += 1;
    }

    /// Combine two tables over the same variables.
    pub fn merge(mut self, other: &ArcStrengthTable) -> Self {
        debug_assert_eq!(self.variables, other.variables);
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.replicates += other.replicates;
        self
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.len() + b]
    }

    /// Fraction of DAGs containing `a → b`.
    pub fn arc_frequency(&self, a: usize, b: usize) -> f64 {
        if self.replicates == 0 {
            0.0
        } else {
            self.count(a, b) as f64 / self.replicates as f64
        }
    }

    /// Fraction of DAGs containing an arc between `a` and `b` in either
    /// direction.
    pub fn strength(&self, a: usize, b: usize) -> f64 {
        if self.replicates == 0 {
            0.0
        } else {
            (self.count(a, b) + self.count(b, a)) as f64 / self.replicates as f64
        }
    }

    /// Fraction of the DAGs containing the edge that orient it `a → b`;
    /// 0 when the edge never appears.
    pub fn direction(&self, a: usize, b: usize) -> f64 {
        let both = self.count(a, b) + self.count(b, a);
        if both == 0 {
            0.0
        } else {
            self.count(a, b) as f64 / both as f64
        }
    }

    /// Strengths of all unordered pairs `a < b`, zeros included.
    pub fn pair_strengths(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                out.push(self.strength(a, b));
            }
        }
        out
    }
}

/// Bootstrap settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub score: ScoreKind,
    pub tabu: TabuConfig,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: DEFAULT_REPLICATES,
            score: ScoreKind::Aic,
            tabu: TabuConfig::default(),
        }
    }
}

/// Random source of replicate `index`: stream `index` of the master seed.
fn replicate_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Learn one DAG from the `index`-th resample of `data`.
pub fn bootstrap_replicate(
    data: &DataTable,
    config: &BootstrapConfig,
    constraints: &Constraints,
    seed: u64,
    index: usize,
) -> Result<Dag> {
    let mut rng = replicate_rng(seed, index);
    let n = data.n_rows();
    let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let tabu = TabuConfig {
        seed: rng.random(),
        ..config.tabu.clone()
    };
    tabu_search(&data.take_rows(&rows), config.score, constraints, &tabu)
}

/// Nonparametric bootstrap of the structure search with the default
/// execution mode.
pub fn bootstrap_strengths(
    data: &DataTable,
    config: &BootstrapConfig,
    constraints: &Constraints,
    seed: u64,
) -> Result<ArcStrengthTable> {
    bootstrap_strengths_with(data, config, constraints, seed, Execution::default())
}

/// Each replicate draws `N` rows with replacement from its own random
/// stream, so the table depends only on `seed` and not on scheduling.
pub fn bootstrap_strengths_with(
    data: &DataTable,
    config: &BootstrapConfig,
    constraints: &Constraints,
    seed: u64,
    exec: Execution,
) -> Result<ArcStrengthTable> {
    if config.replicates == 0 {
        return Err(Error::InvalidConfig("bootstrap needs at least one replicate".into()));
    }
    if data.n_rows() == 0 {
        return Err(Error::InvalidConfig("cannot bootstrap an empty table".into()));
    }
    config.tabu.validate()?;
    constraints.validate()?;
    let dags = try_map_indexed(config.replicates, exec, |b| {
        bootstrap_replicate(data, config, constraints, seed, b).map_err(|e| Error::Replicate {
            index: b,
            source: Box::new(e),
        })
    })?;
    let mut table = ArcStrengthTable::new(data.names());
    for dag in &dags {
        table.add(dag);
    }
    log::info!("bootstrap finished: {} replicates", table.replicates());
    Ok(table)
}
