//! Survey preprocessing: raw CSV ingestion, recoding, rare-level collapse,
//! case filtering, theme grouping, subpopulation splits and sufficient
//! statistics.

mod counts;
pub mod io;
mod raw;
mod recode;
mod table;
mod transform;

pub use counts::{counts, counts_by_name, CountTable};
pub use raw::{load_csv, Fingerprint, RawTable};
pub use recode::{recode, RecodeSpec, UnmappedPolicy, VariableRecode};
pub use table::DataTable;
pub use transform::{
    collapse_rare, drop_incomplete, group_themes, split_population, PopulationSplit, ThemeSpec, DEFAULT_MIN_COUNT,
};
