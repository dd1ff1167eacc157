//! Variance-based and parametric sensitivity analysis of a fitted network.

mod scenario;
mod sensitivity;
mod sobol;

pub use scenario::{scenario_posteriors, ScenarioDef, ScenarioResult};
pub use sensitivity::{
    default_nodes, finite_difference_slope, influence_colors, node_influence, node_influence_with, parameter_slopes,
    sensitivity_slope, tornado, tornado_with, CptParameterId, TargetEvent, TornadoBar, DEFAULT_DELTA, FD_EPSILON,
    INFLUENCE_FLOOR, SLOPE_STEP, ZERO_INFLUENCE_COLOR,
};
pub use sobol::{sobol_first_order, sobol_matrix, sobol_matrix_with, SobolMatrix, SobolResult};
