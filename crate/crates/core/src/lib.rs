//! Discrete Bayesian networks for categorical survey data.
//!
//! The crate covers the whole analysis pipeline:
//!
//! - [`data`]: recoding and filtering raw survey tables into encoded
//!   [`data::DataTable`]s and computing sufficient statistics;
//! - [`learn`]: AIC/BIC-scored Tabu search under tier blacklists, bootstrap
//!   arc strengths and the averaged consensus network;
//! - [`infer`]: Dirichlet/ML parameter fitting, exact variable elimination,
//!   ancestral sampling;
//! - [`analysis`]: first-order Sobol indices, scenario posteriors and one-way
//!   CPT sensitivity (slopes, tornado bars, node influence);
//! - [`report`]: CSV/SVG/text emitters for all of the above.
//!
//! Bootstrap replicates, Sobol matrices and tornado bars fan out over rayon
//! when the `parallel` feature is on (the default); results are identical
//! either way.

pub mod analysis;
pub mod data;
mod error;
pub mod infer;
pub mod learn;
pub mod model;
pub mod par;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
pub use par::Execution;
