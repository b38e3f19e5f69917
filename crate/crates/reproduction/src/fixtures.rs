//! Scenarios checked into `fixtures/` at the workspace root.
//!
//! The reference group has no published reward data, so its reward channel is
//! synthetic: a fixed formula over the achievement evidence plus four rotating
//! personal reward value systems.

use std::path::{Path, PathBuf};

use evirank_core::{
    CategorySet, Channel, EvidenceMatrix, Matrix, Result, RewardSide, Roster, Scenario,
    ScenarioConfig, WeightMatrix, WeightVector,
};

use crate::reference;

pub const REWARD_CATEGORIES: [&str; 3] = ["Salary", "Advancements", "Awards"];

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn channel(
    kind: Channel,
    roster: &Roster,
    categories: &[&str],
    evidence: &[Vec<f64>],
    admin: &[f64],
    personnel: &[Vec<f64>],
) -> Result<(EvidenceMatrix, WeightVector, WeightMatrix)> {
    let cats = CategorySet::new(kind, categories.iter().copied())?;
    Ok((
        EvidenceMatrix::new(roster.clone(), cats.clone(), Matrix::from_rows(evidence)?)?,
        WeightVector::new(cats.clone(), admin.to_vec())?,
        WeightMatrix::new(roster.clone(), cats, Matrix::from_rows(personnel)?)?,
    ))
}

/// Builds a two-channel scenario from plain rows.
#[allow(clippy::too_many_arguments)]
pub fn plain_scenario(
    name: &str,
    ids: &[&str],
    achievement_categories: &[&str],
    rp: &[Vec<f64>],
    avsa: &[f64],
    avsp: &[Vec<f64>],
    reward_categories: &[&str],
    bp: &[Vec<f64>],
    rvsa: &[f64],
    rvsp: &[Vec<f64>],
) -> Result<Scenario> {
    let roster = Roster::new(ids.iter().copied())?;
    let (e, a, p) = channel(Channel::Achievements, &roster, achievement_categories, rp, avsa, avsp)?;
    let (re, ra, rpw) = channel(Channel::Rewards, &roster, reward_categories, bp, rvsa, rvsp)?;
    Scenario::new(
        name,
        e,
        a,
        p,
        Some(RewardSide {
            evidence: re,
            admin_weights: ra,
            personnel_weights: rpw,
        }),
        ScenarioConfig::default(),
    )
}

fn rows<const N: usize>(r: &[[f64; N]]) -> Vec<Vec<f64>> {
    r.iter().map(|x| x.to_vec()).collect()
}

/// Four people, two categories per channel; every value can be checked by hand.
pub fn desk4() -> Result<Scenario> {
    plain_scenario(
        "desk4",
        &["A", "B", "C", "D"],
        &["Teaching", "Research"],
        &rows(&[[2.0, 0.0], [0.0, 2.0], [1.0, 1.0], [0.0, 0.0]]),
        &[0.5, 0.5],
        &rows(&[[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.5]]),
        &["Salary", "Awards"],
        &rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 1.0]]),
        &[0.5, 0.5],
        &rows(&[[0.5, 0.5]; 4]),
    )
}

/// The same evidence with lopsided value systems, so the four pairwise
/// injustice values are not all equal.
pub fn desk4_skewed() -> Result<Scenario> {
    plain_scenario(
        "desk4_skewed",
        &["A", "B", "C", "D"],
        &["Teaching", "Research"],
        &rows(&[[2.0, 0.0], [0.0, 2.0], [1.0, 1.0], [0.0, 0.0]]),
        &[0.5, 0.5],
        &rows(&[[1.0, 0.0]; 4]),
        &["Salary", "Awards"],
        &rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 1.0]]),
        &[1.0, 0.0],
        &rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]),
    )
}

const REWARD_PROFILES: [[f64; 3]; 4] = [
    [0.6, 0.3, 0.1],
    [0.3, 0.5, 0.2],
    [0.2, 0.3, 0.5],
    [0.4, 0.4, 0.2],
];

/// The reference group with the synthetic reward channel attached.
pub fn reference30() -> Result<Scenario> {
    let base = reference::reference()?.scenario;
    let rp = base.achievements().values();
    let roster = base.roster().clone();
    let mut bp = Vec::with_capacity(roster.len());
    let mut rvsp = Vec::with_capacity(roster.len());
    for i in 0..roster.len() {
        let r = rp.row(i);
        bp.push(vec![
            20.0 + 2.0 * r[0] + r[3],
            1.0 + r[1] + r[2] + (i % 3) as f64,
            1.0 + ((i * 7) % 5) as f64,
        ]);
        rvsp.push(REWARD_PROFILES[i % REWARD_PROFILES.len()].to_vec());
    }
    let (e, a, p) = channel(Channel::Rewards, &roster, &REWARD_CATEGORIES, &bp, &[0.5, 0.3, 0.2], &rvsp)?;
    Scenario::new(
        base.name(),
        base.achievements().clone(),
        base.admin_achievement_weights().clone(),
        base.personnel_achievement_weights().clone(),
        Some(RewardSide {
            evidence: e,
            admin_weights: a,
            personnel_weights: p,
        }),
        base.config().clone(),
    )
}
