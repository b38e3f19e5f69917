//! Deterministic analytics over achievements, rewards and published value
//! systems: administrative, democratic and compromise rankings, leagues,
//! ranking-list distances, injustice and work passion.

pub mod error;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod passion;
pub mod procedures;
pub mod ranking;
pub mod stratification;

pub use error::{Error, Result};
pub use matrix::{Matrix, ZeroDivisionPolicy};
pub use model::{
    AssessmentMatrix, CategorySet, Channel, EvidenceChannel, EvidenceMatrix, Provenance,
    RankEntry, RankingList, RewardSide, Roster, Scenario, ScenarioConfig, ScoreBasis,
    ScoreVector, SplitRule, TieRule, WeightMatrix, WeightVector,
};
