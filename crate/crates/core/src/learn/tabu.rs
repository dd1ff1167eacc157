use std::collections::VecDeque;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::DataTable;
use crate::error::{Error, Result};
use crate::learn::{Constraints, ScoreCache, ScoreKind};
use crate::model::Dag;

/// Score gains at or below this are not improvements.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TabuConfig {
    /// Number of recent move inverses that stay tabu.
    pub tenure: usize,
    pub max_iter: usize,
    /// Consecutive non-improving moves before a run stops.
    pub stall_limit: usize,
    /// Extra runs started from a randomly perturbed copy of the best graph.
    pub restarts: usize,
    /// Random moves applied before each restart.
    pub perturbation: usize,
    pub seed: u64,
}

impl Default for TabuConfig {
    fn default() -> Self {
        TabuConfig {
            tenure: 10,
            max_iter: 10_000,
            stall_limit: 100,
            restarts: 1,
            perturbation: 5,
            seed: 0,
        }
    }
}

impl TabuConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tenure == 0 || self.max_iter == 0 || self.stall_limit == 0 {
            return Err(Error::InvalidConfig(
                "tabu tenure, max_iter and stall_limit must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    AddArc,
    DeleteArc,
    ReverseArc,
}

/// Single-arc change to a DAG.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub from: usize,
    pub to: usize,
}

impl Move {
    /// The move that undoes this one.
    pub fn inverse(self) -> Move {
        match self.kind {
            MoveKind::AddArc => Move {
                kind: MoveKind::DeleteArc,
                ..self
            },
            MoveKind::DeleteArc => Move {
                kind: MoveKind::AddArc,
                ..self
            },
            MoveKind::ReverseArc => Move {
                kind: MoveKind::ReverseArc,
                from: self.to,
                to: self.from,
            },
        }
    }
}

/// Result of a search, with the best-seen score after every step.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub dag: Dag,
    pub score: f64,
    pub best_trace: Vec<f64>,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

fn sorted_with(set: &[usize], extra: usize) -> Vec<usize> {
    let mut v = set.to_vec();
    let pos = v.binary_search(&extra).unwrap_err();
    v.insert(pos, extra);
    v
}

fn sorted_without(set: &[usize], gone: usize) -> Vec<usize> {
    set.iter().copied().filter(|&p| p != gone).collect()
}

struct State {
    parents: Vec<Vec<usize>>,
    local: Vec<f64>,
}

impl State {
    fn total(&self) -> f64 {
        self.local.iter().sum()
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.parents[b].binary_search(&a).is_ok()
    }

    /// reach[a][b]: directed path a ⇝ b of length ≥ 1.
    fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.parents.len();
        let mut children = vec![Vec::new(); n];
        for (c, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                children[p].push(c);
            }
        }
        (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                let mut stack = children[s].clone();
                while let Some(v) = stack.pop() {
                    if !seen[v] {
                        seen[v] = true;
                        stack.extend(children[v].iter().copied());
                    }
                }
                seen
            })
            .collect()
    }
}

struct Searcher<'a, 'd> {
    cache: ScoreCache<'d>,
    constraints: &'a Constraints,
    n: usize,
}

impl Searcher<'_, '_> {
    fn initial_state(&mut self) -> State {
        let mut parents = vec![Vec::new(); self.n];
        for &(a, b) in self.constraints.whitelist() {
            parents[b].push(a);
        }
        for ps in &mut parents {
            ps.sort_unstable();
        }
        let local = (0..self.n).map(|i| self.cache.local(i, &parents[i])).collect();
        State { parents, local }
    }

    /// Every legal move with its score delta, in a fixed enumeration order.
    #[allow(clippy::needless_range_loop)]
    fn moves(&mut self, state: &State) -> Vec<(Move, f64)> {
        let reach = state.reachability();
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a == b {
                    continue;
                }
                if state.has(a, b) {
                    if !self.constraints.is_required(a, b) {
                        let without = sorted_without(&state.parents[b], a);
                        let d_b = self.cache.local(b, &without) - state.local[b];
                        out.push((
                            Move {
                                kind: MoveKind::DeleteArc,
                                from: a,
                                to: b,
                            },
                            d_b,
                        ));
                        let other_path = state
                            .parents
                            .iter()
                            .enumerate()
                            .any(|(c, ps)| c != b && ps.binary_search(&a).is_ok() && reach[c][b]);
                        if !self.constraints.is_forbidden(b, a) && !other_path {
                            let with = sorted_with(&state.parents[a], b);
                            let d_a = self.cache.local(a, &with) - state.local[a];
                            out.push((
                                Move {
                                    kind: MoveKind::ReverseArc,
                                    from: a,
                                    to: b,
                                },
                                d_b + d_a,
                            ));
                        }
                    }
                } else if !state.has(b, a) && !reach[b][a] && !self.constraints.is_forbidden(a, b) {
                    let with = sorted_with(&state.parents[b], a);
                    let d = self.cache.local(b, &with) - state.local[b];
                    out.push((
                        Move {
                            kind: MoveKind::AddArc,
                            from: a,
                            to: b,
                        },
                        d,
                    ));
                }
            }
        }
        out
    }

    fn apply(&mut self, state: &mut State, m: Move) {
        let (a, b) = (m.from, m.to);
        match m.kind {
            MoveKind::AddArc => {
                state.parents[b] = sorted_with(&state.parents[b], a);
            }
            MoveKind::DeleteArc => {
                state.parents[b] = sorted_without(&state.parents[b], a);
            }
            MoveKind::ReverseArc => {
                state.parents[b] = sorted_without(&state.parents[b], a);
                state.parents[a] = sorted_with(&state.parents[a], b);
                state.local[a] = self.cache.local(a, &state.parents[a]);
            }
        }
        state.local[b] = self.cache.local(b, &state.parents[b]);
    }

    /// Steepest-ascent until no move improves the score.
    fn polish(&mut self, state: &mut State, trace: &mut Vec<f64>) {
        loop {
            let best = self
                .moves(state)
                .into_iter()
                .fold(None::<(Move, f64)>, |acc, (m, d)| match acc {
                    Some((_, bd)) if bd >= d => acc,
                    _ => Some((m, d)),
                });
            match best {
                Some((m, d)) if d > IMPROVEMENT_TOLERANCE => {
                    self.apply(state, m);
                    trace.push(state.total());
                }
                _ => return,
            }
        }
    }

    /// One tabu run from `state`; returns the best state seen (polished).
    fn run(&mut self, mut state: State, config: &TabuConfig, trace: &mut Vec<f64>) -> State {
        let mut best_parents = state.parents.clone();
        let mut best_local = state.local.clone();
        let mut best_score = state.total();
        let mut tabu: VecDeque<Move> = VecDeque::with_capacity(config.tenure);
        let mut stall = 0;
        for _ in 0..config.max_iter {
            let current = state.total();
            let mut chosen: Option<(Move, f64)> = None;
            for (m, d) in self.moves(&state) {
                let aspirates = current + d > best_score + IMPROVEMENT_TOLERANCE;
                if tabu.contains(&m) && !aspirates {
                    continue;
                }
                if chosen.is_none_or(|(_, bd)| d > bd) {
                    chosen = Some((m, d));
                }
            }
            let Some((m, _)) = chosen else { break };
            self.apply(&mut state, m);
            if tabu.len() == config.tenure {
                tabu.pop_front();
            }
            tabu.push_back(m.inverse());
            let score = state.total();
            if score > best_score + IMPROVEMENT_TOLERANCE {
                best_score = score;
                best_parents = state.parents.clone();
                best_local = state.local.clone();
                stall = 0;
            } else {
                stall += 1;
            }
            trace.push(best_score);
            if stall >= config.stall_limit {
                break;
            }
        }
        let mut best = State {
            parents: best_parents,
            local: best_local,
        };
        self.polish(&mut best, trace);
        best
    }
}

/// Score-based structure search over all columns of `data`.
///
/// Moves are arc additions, deletions and reversals that keep the graph
/// acyclic and within `constraints`. The inverse of each applied move stays
/// tabu for `tenure` steps unless it would beat the best score so far. The
/// best graph seen is hill-climbed to a local optimum, so no single legal
/// move improves the returned graph.
pub fn tabu_search(data: &DataTable, kind: ScoreKind, constraints: &Constraints, config: &TabuConfig) -> Result<Dag> {
    Ok(tabu_search_traced(data, kind, constraints, config)?.dag)
}

/// [`tabu_search`] with the best-score trace and cache statistics.
pub fn tabu_search_traced(
    data: &DataTable,
    kind: ScoreKind,
    constraints: &Constraints,
    config: &TabuConfig,
) -> Result<SearchOutcome> {
    config.validate()?;
    let names = data.names();
    if constraints.variables() != names.as_slice() {
        return Err(Error::InvalidConfig(
            "constraints are not defined over the data's variables".into(),
        ));
    }
    constraints.validate()?;

    let mut searcher = Searcher {
        cache: ScoreCache::new(data, kind),
        constraints,
        n: names.len(),
    };
    let mut trace = Vec::new();
    let start = searcher.initial_state();
    trace.push(start.total());
    let mut best = searcher.run(start, config, &mut trace);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        let mut state = State {
            parents: best.parents.clone(),
            local: best.local.clone(),
        };
        for _ in 0..config.perturbation {
            let moves = searcher.moves(&state);
            let Some(&(m, _)) = moves.choose(&mut rng) else { break };
            searcher.apply(&mut state, m);
        }
        let mut run_trace = Vec::new();
        let candidate = searcher.run(state, config, &mut run_trace);
        let best_score = best.total();
        if candidate.total() > best_score + IMPROVEMENT_TOLERANCE {
            best = candidate;
        }
        let overall = best.total();
        trace.extend(run_trace.iter().map(|&s| s.max(best_score)));
        trace.push(overall);
    }

    let score = best.total();
    let dag = Dag::from_parents(names, best.parents)?;
    Ok(SearchOutcome {
        dag,
        score,
        best_trace: trace,
        cache_hits: searcher.cache.hits(),
        cache_misses: searcher.cache.misses(),
    })
}
