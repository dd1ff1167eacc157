//! Regenerate `fixtures/survey.csv`.
//!
//! ```text
//! cargo run -p beliefnet-cli --example make_fixture [-- <out.csv>]
//! ```

use std::path::PathBuf;

use beliefnet_cli::fixture::{survey_csv, FIXTURE_ROWS, FIXTURE_SEED};

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/survey.csv"));
    let bytes = survey_csv(FIXTURE_ROWS, FIXTURE_SEED).expect("generator is valid");
    std::fs::write(&out, bytes).unwrap_or_else(|e| panic!("{}: {e}", out.display()));
    println!("wrote {FIXTURE_ROWS} rows to {}", out.display());
}
