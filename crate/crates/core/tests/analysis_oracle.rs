mod common;

use beliefnet::analysis::{
    finite_difference_slope, node_influence, scenario_posteriors, sensitivity_slope, sobol_first_order, sobol_matrix,
    tornado, CptParameterId, ScenarioDef, TargetEvent, FD_EPSILON,
};
use beliefnet::infer::posterior;
use beliefnet::model::{CategoricalVariable, Cpt, Dag, Evidence, FittedNetwork};
use common::oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Proportional co-variation written out independently of the library.
fn covary(net: &FittedNetwork, node: usize, config: usize, state: usize, value: f64) -> FittedNetwork {
    let cpt = net.cpt(node);
    let theta = cpt.prob(config, state);
    let row: Vec<f64> = (0..cpt.cardinality())
        .map(|k| {
            if k == state {
                value
            } else {
                cpt.prob(config, k) * (1.0 - value) / (1.0 - theta)
            }
        })
        .collect();
    net.with_cpt(node, cpt.with_row(config, &row).unwrap()).unwrap()
}

/// `P(target = state | evidence)` by enumeration.
fn event_prob(net: &FittedNetwork, target: usize, state: usize, ev: &[(usize, usize)]) -> f64 {
    oracle::posterior(net, target, ev).0[state]
}

fn random_parameter(net: &FittedNetwork, rng: &mut ChaCha8Rng) -> Option<(usize, usize, usize)> {
    let node = rng.random_range(0..net.len());
    let cpt = net.cpt(node);
    let config = rng.random_range(0..cpt.n_configs());
    let state = rng.random_range(0..cpt.cardinality());
    (cpt.prob(config, state) < 1.0).then_some((node, config, state))
}

fn random_evidence(net: &FittedNetwork, rng: &mut ChaCha8Rng, target: usize, p: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..net.len() {
        if i != target && rng.random::<f64>() < p {
            out.push((i, rng.random_range(0..net.variable(i).cardinality())));
        }
    }
    out
}

fn named(net: &FittedNetwork, ev: &[(usize, usize)]) -> Evidence {
    let mut out = Evidence::new();
    for &(v, k) in ev {
        let var = net.variable(v);
        out.insert(var.name(), var.levels()[k].clone());
    }
    out
}

fn event(net: &FittedNetwork, target: usize, state: usize, ev: &[(usize, usize)]) -> TargetEvent {
    let var = net.variable(target);
    TargetEvent::new(var.name(), var.levels()[state].clone()).with_evidence(named(net, ev))
}

fn id(net: &FittedNetwork, node: usize, config: usize, state: usize) -> CptParameterId {
    CptParameterId {
        variable: net.variable(node).name().to_string(),
        config,
        state,
    }
}

#[test]
fn sobol_matches_enumeration_on_random_nets() {
    for seed in 0..50 {
        let net = oracle::random_net(seed + 300, 5, 4);
        for t in 0..5 {
            for x in (0..5).filter(|&x| x != t) {
                let (tn, xn) = (net.variable(t).name(), net.variable(x).name());
                let got = sobol_first_order(&net, tn, xn).unwrap();
                let (per_state, agg) = oracle::sobol(&net, t, x);
                assert!((got.aggregate - agg).abs() < 1e-9, "seed {seed} {xn}->{tn}");
                for (a, b) in got.per_state.iter().zip(&per_state) {
                    assert!((a - b).abs() < 1e-9);
                }
                for s in got.per_state.iter().chain([&got.aggregate]) {
                    assert!((0.0..=1.0 + 1e-9).contains(s));
                }
                if net.dag().d_separated(xn, tn, &[]).unwrap() {
                    assert!(got.aggregate.abs() < 1e-9);
                    assert!(got.per_state.iter().all(|s| s.abs() < 1e-9));
                }
            }
        }
    }
}

#[test]
fn sobol_of_a_deterministic_copy_is_one() {
    let v = |n: &str| CategoricalVariable::new(n, ["a", "b", "c"]).unwrap();
    let dag = Dag::from_arcs(&["X", "Y"], &[("X", "Y")]).unwrap();
    let identity = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    let cpts = vec![
        Cpt::new("X", vec![], vec![], 3, vec![0.2, 0.5, 0.3]).unwrap(),
        Cpt::new("Y", vec!["X".into()], vec![3], 3, identity).unwrap(),
    ];
    let net = FittedNetwork::new(vec![v("X"), v("Y")], dag, cpts, Default::default()).unwrap();
    let s = sobol_first_order(&net, "Y", "X").unwrap();
    assert!((s.aggregate - 1.0).abs() < 1e-9);
    assert!(s.per_state.iter().all(|v| (v - 1.0).abs() < 1e-9));
}

#[test]
fn sobol_matrix_equals_cellwise_calls() {
    let net = oracle::random_net(17, 6, 3);
    let names: Vec<String> = net.variables().iter().map(|v| v.name().to_string()).collect();
    let m = sobol_matrix(&net, &names[..2], &names).unwrap();
    for input in &names {
        for target in &names[..2] {
            let cell = m.get(input, target);
            if input == target {
                assert_eq!(cell, None);
            } else {
                let want = sobol_first_order(&net, target, input).unwrap().aggregate * 100.0;
                assert!((cell.unwrap() - want).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn slopes_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checked = 0;
    while checked < 500 {
        let net = oracle::random_net(rng.random(), 5, 3);
        let Some((node, config, state)) = random_parameter(&net, &mut rng) else {
            continue;
        };
        let target = rng.random_range(0..net.len());
        let k = rng.random_range(0..net.variable(target).cardinality());
        let ev = if rng.random::<bool>() {
            random_evidence(&net, &mut rng, target, 0.3)
        } else {
            vec![]
        };
        let theta = net.cpt(node).prob(config, state);
        let (hi, lo) = ((theta + FD_EPSILON).min(1.0), (theta - FD_EPSILON).max(0.0));
        let want = (event_prob(&covary(&net, node, config, state, hi), target, k, &ev)
            - event_prob(&covary(&net, node, config, state, lo), target, k, &ev))
            / (hi - lo);
        let got = sensitivity_slope(&net, &event(&net, target, k, &ev), &id(&net, node, config, state)).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        checked += 1;
    }
}

#[test]
fn evidence_free_events_are_linear_in_theta() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut checked = 0;
    while checked < 200 {
        let net = oracle::random_net(rng.random(), 5, 3);
        let Some((node, config, state)) = random_parameter(&net, &mut rng) else {
            continue;
        };
        let target = rng.random_range(0..net.len());
        let k = rng.random_range(0..net.variable(target).cardinality());
        let ev = event(&net, target, k, &[]);
        let theta = net.cpt(node).prob(config, state);
        let xs = [0.0, theta * 0.5, (theta + 1.0) * 0.5];
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| ev.probability(&covary(&net, node, config, state, x)).unwrap())
            .collect();
        let interpolated = ys[0] + (ys[2] - ys[0]) * (xs[1] - xs[0]) / (xs[2] - xs[0]);
        assert!((ys[1] - interpolated).abs() < 1e-10);
        checked += 1;
    }
}

#[test]
fn tornado_shifts_are_slope_times_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let net = oracle::random_net(rng.random(), 5, 3);
        let target = rng.random_range(0..net.len());
        let ev = event(&net, target, 0, &[]);
        let delta = rng.random_range(0.01..0.3);
        let bars = tornado(&net, &ev, None, delta).unwrap();
        for b in &bars {
            let slope = sensitivity_slope(&net, &ev, &b.parameter).unwrap();
            assert!((b.shift_up - slope * b.delta_up).abs() < 1e-9);
            assert!((b.shift_down + slope * b.delta_down).abs() < 1e-9);
            assert!(b.delta_up <= delta + 1e-15 && b.delta_down <= delta + 1e-15);
            assert!(b.max_shift() <= 1.0);
        }
        for w in bars.windows(2) {
            assert!(w[0].max_shift() >= w[1].max_shift());
        }
    }
}

#[test]
fn influence_is_max_slope_over_ancestors() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..30 {
        let net = oracle::random_net(rng.random(), 6, 3);
        let target = rng.random_range(0..net.len());
        let ev = event(&net, target, 0, &[]);
        let infl = node_influence(&net, &ev).unwrap();
        let anc = net.dag().ancestral_set(&[target]);
        let bars = tornado(&net, &ev, None, 0.1).unwrap();
        for (i, &in_set) in anc.iter().enumerate() {
            let name = net.variable(i).name();
            if !in_set || i == target {
                assert_eq!(infl[name], 0.0);
                continue;
            }
            let from_bars = bars
                .iter()
                .filter(|b| b.parameter.variable == name)
                .map(|b| (b.shift_up / b.delta_up).abs().max((b.shift_down / b.delta_down).abs()))
                .fold(0.0, f64::max);
            let v = if from_bars < 1e-12 { 0.0 } else { from_bars };
            assert!((infl[name] - v).abs() < 1e-9);
        }
    }
}

#[test]
fn chain_ancestors_have_positive_influence() {
    let v = |n: &str| CategoricalVariable::new(n, ["0", "1"]).unwrap();
    let dag = Dag::from_arcs(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
    let cpts = vec![
        Cpt::new("A", vec![], vec![], 2, vec![0.3, 0.7]).unwrap(),
        Cpt::new("B", vec!["A".into()], vec![2], 2, vec![0.8, 0.2, 0.25, 0.75]).unwrap(),
        Cpt::new("C", vec!["B".into()], vec![2], 2, vec![0.6, 0.4, 0.1, 0.9]).unwrap(),
    ];
    let net = FittedNetwork::new(vec![v("A"), v("B"), v("C")], dag, cpts, Default::default()).unwrap();
    let infl = node_influence(&net, &TargetEvent::new("C", "1")).unwrap();
    assert!(infl["A"] > 0.0 && infl["B"] > 0.0);
    assert_eq!(infl["C"], 0.0);
    // Hand value: dP(C=1)/dP(A=0) = (0.2·0.9 + 0.8·0.4) − (0.75·0.9 + 0.25·0.4).
    let slope = sensitivity_slope(&net, &TargetEvent::new("C", "1"), &id(&net, 0, 0, 0)).unwrap();
    assert!((slope - ((0.2 * 0.9 + 0.8 * 0.4) - (0.75 * 0.9 + 0.25 * 0.4))).abs() < 1e-12);
}

#[test]
fn finite_difference_helper_agrees_with_slope_on_linear_events() {
    let net = oracle::random_net(5, 5, 3);
    let ev = event(&net, 4, 0, &[]);
    for node in 0..net.len() {
        let p = id(&net, node, 0, 0);
        let a = sensitivity_slope(&net, &ev, &p).unwrap();
        let b = finite_difference_slope(&net, &ev, &p, FD_EPSILON).unwrap();
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn scenarios_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for seed in 0..20 {
        let net = oracle::random_net(seed + 700, 5, 3);
        let targets = [net.variable(0).name().to_string(), net.variable(1).name().to_string()];
        let mut defs = vec![ScenarioDef::baseline()];
        let mut dense = vec![vec![]];
        for s in 0..3 {
            let ev: Vec<(usize, usize)> = random_evidence(&net, &mut rng, 0, 0.5)
                .into_iter()
                .filter(|&(v, _)| v != 1)
                .collect();
            defs.push(ScenarioDef::new(format!("S{s}"), named(&net, &ev)));
            dense.push(ev);
        }
        let results = scenario_posteriors(&net, &defs, &targets).unwrap();
        for ((r, ev), def) in results.iter().zip(&dense).zip(&defs) {
            assert_eq!(r.scenario, def.name);
            for (t, q) in [0, 1].iter().zip(&r.posteriors) {
                let (want, pe) = oracle::posterior(&net, *t, ev);
                assert!((r.evidence_probability - pe).abs() < 1e-12);
                for (a, b) in q.distribution.iter().zip(&want) {
                    assert!((a - b).abs() < 1e-9);
                }
                assert_eq!(
                    q.distribution,
                    posterior(&net, &targets[*t], &def.evidence).unwrap().distribution
                );
            }
        }
    }
}
