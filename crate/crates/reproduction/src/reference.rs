//! The 30-person reference group: published evidence plus value systems
//! recovered from published scores.

use evirank_core::io::{reconstruct_personnel, reconstruct_weights, Reconstruction};
use evirank_core::{
    CategorySet, Channel, EvidenceMatrix, Matrix, Result, Roster, Scenario, ScenarioConfig,
};

use crate::golden;

pub struct Reference {
    pub scenario: Scenario,
    pub admin_fit: Reconstruction,
    /// One fit per assessor, in roster order.
    pub personnel_fits: Vec<Reconstruction>,
}

pub fn achievements() -> Result<EvidenceMatrix> {
    let t = golden::table("achievements.tsv")?;
    EvidenceMatrix::new(
        Roster::new(t.row_labels.iter().cloned())?,
        CategorySet::new(Channel::Achievements, t.col_labels.iter().cloned())?,
        t.values,
    )
}

/// Raw self-assessment scores with rows and columns in roster order.
pub fn raw_self_assessment(roster: &Roster) -> Result<Matrix> {
    Matrix::from_rows(&golden::square("self_assessment_raw.tsv", roster)?)
}

pub fn reference() -> Result<Reference> {
    let rp = achievements()?;
    let roster = rp.roster().clone();
    let admin_fit = reconstruct_weights(&rp, &golden::column("admin_scores.tsv", &roster)?)?;
    let (avsp, personnel_fits) = reconstruct_personnel(&rp, &roster, &raw_self_assessment(&roster)?)?;
    let scenario = Scenario::new(
        "reference30",
        rp,
        admin_fit.weights.clone(),
        avsp,
        None,
        ScenarioConfig::default(),
    )?;
    Ok(Reference {
        scenario,
        admin_fit,
        personnel_fits,
    })
}
