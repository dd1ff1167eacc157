use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::DataTable;
use crate::model::FittedNetwork;

/// Draw a state from a probability row by inversion.
pub(crate) fn draw<R: Rng + ?Sized>(rng: &mut R, row: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &p) in row.iter().enumerate() {
        if p > 0.0 {
            last_positive = k;
        }
        acc += p;
        if u < acc {
            return k;
        }
    }
    last_positive
}

/// Ancestral sampling of `n` complete rows; deterministic in `seed`.
pub fn sample(net: &FittedNetwork, n: usize, seed: u64) -> DataTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = net.dag().topological_order();
    let mut columns = vec![Vec::with_capacity(n); net.len()];
    let mut assignment = vec![0usize; net.len()];
    for _ in 0..n {
        for &i in &order {
            let j = net.parent_config(i, &assignment);
            assignment[i] = draw(&mut rng, net.cpt(i).row(j));
        }
        for (col, &v) in columns.iter_mut().zip(&assignment) {
            col.push(Some(v));
        }
    }
    DataTable::new(net.variables().to_vec(), columns).expect("sampled levels are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CategoricalVariable, Cpt, Dag};

    fn deterministic() -> FittedNetwork {
        let vars = vec![
            CategoricalVariable::new("A", ["0", "1"]).unwrap(),
            CategoricalVariable::new("B", ["0", "1", "2"]).unwrap(),
        ];
        let dag = Dag::from_arcs(&["A", "B"], &[("A", "B")]).unwrap();
        let cpts = vec![
            Cpt::new("A", vec![], vec![], 2, vec![0.0, 1.0]).unwrap(),
            Cpt::new("B", vec!["A".into()], vec![2], 3, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap(),
        ];
        FittedNetwork::new(vars, dag, cpts, Default::default()).unwrap()
    }

    #[test]
    fn empty_sample() {
        assert_eq!(sample(&deterministic(), 0, 1).n_rows(), 0);
    }

    #[test]
    fn deterministic_tables_give_identical_rows() {
        let t = sample(&deterministic(), 50, 3);
        for r in 0..50 {
            assert_eq!((t.value(r, 0), t.value(r, 1)), (Some(1), Some(2)));
        }
    }

    #[test]
    fn seeded() {
        let net = deterministic();
        assert_eq!(sample(&net, 10, 9), sample(&net, 10, 9));
    }
}
