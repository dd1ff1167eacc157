//! Network representation: variables, graph, tables and the file formats
//! exchanged between stages.

mod cpt;
mod dag;
mod dot;
mod evidence;
pub mod io;
mod network;
mod variable;

pub use cpt::{config_index, config_levels, Cpt, RENORMALIZE_TOLERANCE, ROW_TOLERANCE};
pub use dag::{parameter_count, topological_order, Dag};
pub use dot::export_dot;
pub use evidence::Evidence;
pub use network::FittedNetwork;
pub use variable::CategoricalVariable;
