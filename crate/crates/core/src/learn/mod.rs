//! Score-based structure learning and bootstrap model averaging.

mod averaged;
mod bootstrap;
mod constraints;
mod cpdag;
mod score;
mod tabu;
mod threshold;

pub use averaged::{averaged_network, AveragedNetwork, SkipReason, SkippedEdge};
pub use bootstrap::{
    bootstrap_replicate, bootstrap_strengths, bootstrap_strengths_with, ArcStrengthTable, BootstrapConfig,
    DEFAULT_REPLICATES,
};
pub use constraints::{tiers_to_blacklist, Constraints, Tier, TierSpec};
pub use cpdag::{shd, Cpdag, PairStatus};
pub use score::{local_loglik, local_score, score, ScoreCache, ScoreKind};
pub use tabu::{tabu_search, tabu_search_traced, Move, MoveKind, SearchOutcome, TabuConfig, IMPROVEMENT_TOLERANCE};
pub use threshold::{optimal_threshold, optimal_threshold_from, threshold_objective};
