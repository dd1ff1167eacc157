use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infer::posterior;
use crate::model::{Evidence, FittedNetwork};
use crate::par::{map_indexed, try_map_indexed, Execution};

/// Default tornado perturbation.
pub const DEFAULT_DELTA: f64 = 0.1;
/// Step of the two-point slope.
pub const SLOPE_STEP: f64 = 0.1;
/// Step of the central finite difference used for evidence-bearing events.
pub const FD_EPSILON: f64 = 1e-4;
/// Influences below this are reported as exactly 0.
pub const INFLUENCE_FLOOR: f64 = 1e-12;
/// Fill of nodes with no measurable influence.
pub const ZERO_INFLUENCE_COLOR: &str = "#d9d9d9";

/// One CPT entry: `P(variable = state | parents = config)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CptParameterId {
    pub variable: String,
    pub config: usize,
    pub state: usize,
}

impl fmt::Display for CptParameterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.variable, self.config, self.state)
    }
}

/// `P(variable = state | evidence)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetEvent {
    pub variable: String,
    pub state: String,
    #[serde(default)]
    pub evidence: Evidence,
}

impl TargetEvent {
    pub fn new(variable: impl Into<String>, state: impl Into<String>) -> Self {
        TargetEvent {
            variable: variable.into(),
            state: state.into(),
            evidence: Evidence::new(),
        }
    }

    pub fn with_evidence(mut self, evidence: Evidence) -> Self {
        self.evidence = evidence;
        self
    }

    /// Evidence-free events are linear in any single co-varied parameter.
    pub fn is_linear(&self) -> bool {
        self.evidence.is_empty()
    }

    pub fn probability(&self, net: &FittedNetwork) -> Result<f64> {
        let t = net.require(&self.variable)?;
        let k = net.variable(t).require_level(&self.state)?;
        Ok(posterior(net, &self.variable, &self.evidence)?.distribution[k])
    }
}

impl fmt::Display for TargetEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.variable, self.state)?;
        if !self.evidence.is_empty() {
            let ev: Vec<String> = self.evidence.iter().map(|(v, l)| format!("{v}={l}")).collect();
            write!(f, " | {}", ev.join(", "))?;
        }
        Ok(())
    }
}

struct Parameter {
    node: usize,
    config: usize,
    state: usize,
    theta: f64,
}

fn locate(net: &FittedNetwork, id: &CptParameterId) -> Result<Parameter> {
    let node = net.require(&id.variable)?;
    let cpt = net.cpt(node);
    if id.config >= cpt.n_configs() || id.state >= cpt.cardinality() {
        return Err(Error::InvalidQuery(format!("parameter {id} is out of range")));
    }
    Ok(Parameter {
        node,
        config: id.config,
        state: id.state,
        theta: cpt.prob(id.config, id.state),
    })
}

/// Network with the parameter set to `value` and the rest of its row
/// scaled by `(1 − value)/(1 − θ)`.
fn covaried(net: &FittedNetwork, p: &Parameter, value: f64) -> Result<FittedNetwork> {
    let cpt = net.cpt(p.node);
    if p.theta >= 1.0 {
        return Err(Error::SaturatedParameter(format!(
            "{}[{},{}]",
            cpt.variable(),
            p.config,
            p.state
        )));
    }
    let scale = (1.0 - value) / (1.0 - p.theta);
    let row: Vec<f64> = cpt
        .row(p.config)
        .iter()
        .enumerate()
        .map(|(k, &v)| if k == p.state { value } else { v * scale })
        .collect();
    net.with_cpt(p.node, cpt.with_row(p.config, &row)?)
}

fn event_at(net: &FittedNetwork, event: &TargetEvent, p: &Parameter, value: f64) -> Result<f64> {
    event.probability(&covaried(net, p, value)?)
}

/// `dP(event)/dθ` under proportional co-variation.
///
/// Evidence-free events are linear in `θ`, so the slope is exact from `θ`
/// and `θ ± 0.1` (whichever stays in `[0, 1]`). Events with evidence are a
/// ratio of linear functions and use [`finite_difference_slope`].
pub fn sensitivity_slope(net: &FittedNetwork, event: &TargetEvent, param: &CptParameterId) -> Result<f64> {
    if !event.is_linear() {
        return finite_difference_slope(net, event, param, FD_EPSILON);
    }
    let p = locate(net, param)?;
    let base = event_at(net, event, &p, p.theta)?;
    let other = if p.theta + SLOPE_STEP <= 1.0 {
        p.theta + SLOPE_STEP
    } else {
        p.theta - SLOPE_STEP
    };
    Ok((event_at(net, event, &p, other)? - base) / (other - p.theta))
}

/// Central difference with step `eps`, one-sided at the ends of `[0, 1]`.
pub fn finite_difference_slope(
    net: &FittedNetwork,
    event: &TargetEvent,
    param: &CptParameterId,
    eps: f64,
) -> Result<f64> {
    let p = locate(net, param)?;
    let hi = (p.theta + eps).min(1.0);
    let lo = (p.theta - eps).max(0.0);
    Ok((event_at(net, event, &p, hi)? - event_at(net, event, &p, lo)?) / (hi - lo))
}

/// Effect of moving one parameter down and up by `delta` (clipped).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TornadoBar {
    pub parameter: CptParameterId,
    /// `Var=state | Parent=level, ...`
    pub label: String,
    pub theta: f64,
    /// Applied decrease, `θ − max(θ − δ, 0)`.
    pub delta_down: f64,
    /// Applied increase, `min(θ + δ, 1) − θ`.
    pub delta_up: f64,
    /// `P(event)` at the lowered value minus the baseline.
    pub shift_down: f64,
    /// `P(event)` at the raised value minus the baseline.
    pub shift_up: f64,
}

impl TornadoBar {
    pub fn max_shift(&self) -> f64 {
        self.shift_down.abs().max(self.shift_up.abs())
    }

    /// Whether raising the parameter raises the event probability.
    pub fn increasing(&self) -> bool {
        self.shift_up > self.shift_down
    }
}

/// Nodes whose CPTs can affect `event`: ancestors of the target and of the
/// evidence, without the target itself.
pub fn default_nodes(net: &FittedNetwork, event: &TargetEvent) -> Result<Vec<String>> {
    let t = net.require(&event.variable)?;
    let mut roots = vec![t];
    for (v, _) in event.evidence.iter() {
        roots.push(net.require(v)?);
    }
    let set = net.dag().ancestral_set(&roots);
    Ok((0..net.len())
        .filter(|&i| set[i] && i != t)
        .map(|i| net.variable(i).name().to_string())
        .collect())
}

fn parameters(net: &FittedNetwork, nodes: &[String]) -> Result<Vec<CptParameterId>> {
    let mut out = Vec::new();
    for name in nodes {
        let i = net.require(name)?;
        let cpt = net.cpt(i);
        for config in 0..cpt.n_configs() {
            for state in 0..cpt.cardinality() {
                if cpt.prob(config, state) >= 1.0 {
                    log::info!("skipping saturated parameter {name}[{config},{state}]");
                    continue;
                }
                out.push(CptParameterId {
                    variable: name.clone(),
                    config,
                    state,
                });
            }
        }
    }
    Ok(out)
}

fn label(net: &FittedNetwork, id: &CptParameterId) -> String {
    let i = net.index_of(&id.variable).expect("located parameter");
    let var = net.variable(i);
    let cpt = net.cpt(i);
    let mut s = format!("{}={}", var.name(), var.levels()[id.state]);
    let levels = cpt.config_levels(id.config);
    if !levels.is_empty() {
        let parts: Vec<String> = net
            .dag()
            .parents(i)
            .iter()
            .zip(&levels)
            .map(|(&p, &l)| format!("{}={}", net.variable(p).name(), net.variable(p).levels()[l]))
            .collect();
        s.push_str(" | ");
        s.push_str(&parts.join(", "));
    }
    s
}

pub fn tornado(
    net: &FittedNetwork,
    event: &TargetEvent,
    nodes: Option<&[String]>,
    delta: f64,
) -> Result<Vec<TornadoBar>> {
    tornado_with(net, event, nodes, delta, Execution::default())
}

/// One bar per non-saturated parameter of `nodes` (default
/// [`default_nodes`]), sorted by largest absolute shift, ties by parameter.
/// Parameters whose perturbed value makes the evidence impossible are skipped.
pub fn tornado_with(
    net: &FittedNetwork,
    event: &TargetEvent,
    nodes: Option<&[String]>,
    delta: f64,
    exec: Execution,
) -> Result<Vec<TornadoBar>> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidConfig(format!("tornado delta {delta} is outside (0, 1]")));
    }
    let nodes = match nodes {
        Some(n) => n.to_vec(),
        None => default_nodes(net, event)?,
    };
    let base = event.probability(net)?;
    let params = parameters(net, &nodes)?;
    let bars = try_map_indexed(params.len(), exec, |i| {
        let id = &params[i];
        let p = locate(net, id)?;
        let lo = (p.theta - delta).max(0.0);
        let hi = (p.theta + delta).min(1.0);
        let (down, up) = match (event_at(net, event, &p, lo), event_at(net, event, &p, hi)) {
            (Ok(d), Ok(u)) => (d, u),
            (Err(Error::ZeroProbabilityEvidence { .. }), _) | (_, Err(Error::ZeroProbabilityEvidence { .. })) => {
                log::info!(
                    "skipping {}: a perturbed value makes the evidence impossible",
                    label(net, id)
                );
                return Ok(None);
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        Ok::<_, Error>(Some(TornadoBar {
            label: label(net, id),
            theta: p.theta,
            delta_down: p.theta - lo,
            delta_up: hi - p.theta,
            shift_down: down - base,
            shift_up: up - base,
            parameter: id.clone(),
        }))
    })?;
    let mut bars: Vec<TornadoBar> = bars.into_iter().flatten().collect();
    bars.sort_by(|a, b| {
        b.max_shift()
            .total_cmp(&a.max_shift())
            .then_with(|| a.parameter.cmp(&b.parameter))
    });
    Ok(bars)
}

pub fn node_influence(net: &FittedNetwork, event: &TargetEvent) -> Result<BTreeMap<String, f64>> {
    node_influence_with(net, event, Execution::default())
}

/// Largest absolute slope over each node's parameters; nodes outside
/// [`default_nodes`] (including the target) and effects below
/// [`INFLUENCE_FLOOR`] are exactly 0.
pub fn node_influence_with(net: &FittedNetwork, event: &TargetEvent, exec: Execution) -> Result<BTreeMap<String, f64>> {
    let nodes = default_nodes(net, event)?;
    let params = parameters(net, &nodes)?;
    let slopes = try_map_indexed(params.len(), exec, |i| sensitivity_slope(net, event, &params[i]))?;
    let mut out: BTreeMap<String, f64> = net.variables().iter().map(|v| (v.name().to_string(), 0.0)).collect();
    for (id, s) in params.iter().zip(slopes) {
        let e = out.get_mut(&id.variable).expect("known node");
        *e = e.max(s.abs());
    }
    for v in out.values_mut() {
        if *v < INFLUENCE_FLOOR {
            *v = 0.0;
        }
    }
    Ok(out)
}

fn parse_hex(color: &str) -> Result<[u8; 3]> {
    let hex = color.strip_prefix('#').unwrap_or(color);
    let bad = || Error::InvalidConfig(format!("`{color}` is not a #rrggbb color"));
    if hex.len() != 6 {
        return Err(bad());
    }
    let mut out = [0u8; 3];
    for (i, c) in out.iter_mut().enumerate() {
        *c = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16).map_err(|_| bad())?;
    }
    Ok(out)
}

/// Fill colors for an influence map: linear from white at 0 to `full` at
/// the largest influence; exact zeros are gray.
pub fn influence_colors(influence: &BTreeMap<String, f64>, full: &str) -> Result<BTreeMap<String, String>> {
    let rgb = parse_hex(full)?;
    let max = influence.values().copied().fold(0.0, f64::max);
    Ok(influence
        .iter()
        .map(|(name, &v)| {
            let color = if v == 0.0 || max == 0.0 {
                ZERO_INFLUENCE_COLOR.to_string()
            } else {
                let f = v / max;
                let ch = |c: u8| (255.0 + f * (f64::from(c) - 255.0)).round() as u8;
                format!("#{:02x}{:02x}{:02x}", ch(rgb[0]), ch(rgb[1]), ch(rgb[2]))
            };
            (name.clone(), color)
        })
        .collect())
}

/// Slopes of every parameter of `nodes` (default [`default_nodes`]).
pub fn parameter_slopes(
    net: &FittedNetwork,
    event: &TargetEvent,
    nodes: Option<&[String]>,
    exec: Execution,
) -> Result<Vec<(CptParameterId, f64)>> {
    let nodes = match nodes {
        Some(n) => n.to_vec(),
        None => default_nodes(net, event)?,
    };
    let params = parameters(net, &nodes)?;
    let slopes = map_indexed(params.len(), exec, |i| sensitivity_slope(net, event, &params[i]));
    params.into_iter().zip(slopes).map(|(p, s)| s.map(|s| (p, s))).collect()
}
