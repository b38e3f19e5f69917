//! Leagues, social lift, value-system clustering and compromise dichotomy.

mod clustering;
mod dichotomy;
mod leagues;

pub use clustering::{cluster_value_systems, ClusterAssignment, MAX_ITERATIONS};
pub use dichotomy::{
    dichotomy, winners_count, DichotomyConfig, DichotomyResult, DichotomyVariant,
    GOLDEN_WINNERS_FRACTION,
};
pub use leagues::{
    form_leagues, league_sizes, rerank_leagues, social_lift, LeaguePartition, RerankedLeagues,
};
