//! Seeded random networks for tests, benchmarks and fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::model::{CategoricalVariable, Cpt, Dag, FittedNetwork};

/// Shape of a random network.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomNetworkSpec {
    pub nodes: usize,
    pub max_parents: usize,
    /// Probability of each candidate arc before the parent cap applies.
    pub arc_probability: f64,
    pub min_levels: usize,
    pub max_levels: usize,
    /// Symmetric Dirichlet concentration of every CPT row.
    pub concentration: f64,
}

impl Default for RandomNetworkSpec {
    fn default() -> Self {
        RandomNetworkSpec {
            nodes: 5,
            max_parents: 2,
            arc_probability: 0.5,
            min_levels: 2,
            max_levels: 3,
            concentration: 1.0,
        }
    }
}

impl RandomNetworkSpec {
    pub fn generate(&self, seed: u64) -> Result<FittedNetwork> {
        if self.min_levels < 2
            || self.max_levels < self.min_levels
            || self.concentration.is_nan()
            || self.concentration <= 0.0
        {
            return Err(Error::InvalidConfig("invalid random network spec".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = random_dag(&mut rng, self.nodes, self.max_parents, self.arc_probability)?;
        let cards: Vec<usize> = (0..self.nodes)
            .map(|_| rng.random_range(self.min_levels..=self.max_levels))
            .collect();
        dirichlet_network(&mut rng, dag, &cards, self.concentration)
    }
}

/// Random DAG over nodes `V0..V{n-1}` that respects a random hidden order.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize, max_parents: usize, arc_probability: f64) -> Result<Dag> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parents = vec![Vec::new(); n];
    for (pos, &child) in order.iter().enumerate() {
        let mut earlier: Vec<usize> = order[..pos].to_vec();
        earlier.shuffle(rng);
        for p in earlier {
            if parents[child].len() >= max_parents {
                break;
            }
            if rng.random::<f64>() < arc_probability {
                parents[child].push(p);
            }
        }
        parents[child].sort_unstable();
    }
    Dag::from_parents((0..n).map(|i| format!("V{i}")).collect(), parents)
}

/// One row drawn from a symmetric Dirichlet.
pub fn dirichlet_row<R: Rng + ?Sized>(rng: &mut R, len: usize, concentration: f64) -> Vec<f64> {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    loop {
        let draws: Vec<f64> = (0..len).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            let mut row: Vec<f64> = draws.iter().map(|d| d / total).collect();
            let head: f64 = row[..len - 1].iter().sum();
            row[len - 1] = (1.0 - head).max(0.0);
            return row;
        }
    }
}

/// Network over `dag` with `cards[i]` levels (`s0`, `s1`, ...) per node and
/// Dirichlet-drawn CPT rows.
pub fn dirichlet_network<R: Rng + ?Sized>(
    rng: &mut R,
    dag: Dag,
    cards: &[usize],
    concentration: f64,
) -> Result<FittedNetwork> {
    let variables = dag
        .nodes()
        .iter()
        .zip(cards)
        .map(|(n, &r)| CategoricalVariable::new(n.clone(), (0..r).map(|k| format!("s{k}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut cpts = Vec::with_capacity(dag.len());
    for i in 0..dag.len() {
        let parent_cards: Vec<usize> = dag.parents(i).iter().map(|&p| cards[p]).collect();
        let q: usize = parent_cards.iter().product();
        let values: Vec<f64> = (0..q)
            .flat_map(|_| dirichlet_row(rng, cards[i], concentration))
            .collect();
        let parents = dag.parent_names(i).into_iter().map(String::from).collect();
        let (cpt, _) = Cpt::new_lenient(dag.name(i).to_string(), parents, parent_cards, cards[i], values)?;
        cpts.push(cpt);
    }
    FittedNetwork::new(variables, dag, cpts, Default::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_networks_are_valid_and_seeded() {
        let spec = RandomNetworkSpec {
            nodes: 8,
            ..Default::default()
        };
        let a = spec.generate(3).unwrap();
        let b = spec.generate(3).unwrap();
        assert_eq!(a, b);
        assert!((0..8).all(|i| a.dag().parents(i).len() <= 2));
    }

    #[test]
    fn dirichlet_rows_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let row = dirichlet_row(&mut rng, 4, 0.5);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
