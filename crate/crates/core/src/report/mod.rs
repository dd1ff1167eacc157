//! CSV, plain-text and SVG renderings of analysis results.
//!
//! CSV numbers carry 12 significant digits so tables re-parse without loss;
//! text tables round to four decimals.

mod format;
mod svg;
mod tables;

pub use format::{round4, sig12, text_table};
pub use svg::{escape, scenario_svg, tornado_svg, DECREASE_COLOR, INCREASE_COLOR};
pub use tables::{
    condition_label, influence_csv, parse_query_csv, parse_strengths_csv, query_csv, query_text, scenario_csv,
    scenario_text, slopes_csv, sobol_csv, sobol_text, strengths_csv, tornado_csv, QueryRow,
};
