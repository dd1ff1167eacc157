//! Parameter fitting and exact inference.

mod elimination;
mod factor;
mod fit;
mod sample;

pub use elimination::{
    conditional_table, evidence_probability, posterior, posterior_with_order, QueryResult, ZERO_EVIDENCE_THRESHOLD,
};
pub use factor::Factor;
pub use fit::{bayes_estimate, fit_bayes, fit_mle};
pub use sample::sample;
