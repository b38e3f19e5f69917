//! Administrative, democratic and compromise scoring over one evidence channel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AssessmentMatrix, Channel, EvidenceChannel, Provenance, RankingList, Scenario, ScoreVector,
    TieRule,
};

/// `AR = AVSa × Rpᵀ` (or `ABR = RVSa × Bpᵀ`), unnormalized.
pub fn administrative_scores(ch: &EvidenceChannel<'_>) -> Result<ScoreVector> {
    let ar = ch
        .admin_weights
        .as_row()
        .mat_mul(&ch.evidence.values().transpose())?;
    ScoreVector::raw(
        ch.roster().clone(),
        ar.row(0).to_vec(),
        Provenance::new("administrative", Some(ch.kind)),
    )
}

pub fn normalize_and_rank(
    scores: &ScoreVector,
    tie_rule: TieRule,
    tolerance: f64,
) -> (ScoreVector, RankingList) {
    let shares = scores.normalized();
    let list = RankingList::from_scores(&shares, tie_rule, tolerance);
    (shares, list)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimismReport {
    pub most_optimistic: String,
    pub most_optimistic_total: f64,
    pub least_optimistic: String,
    pub least_optimistic_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfAssessment {
    pub raw: AssessmentMatrix,
    pub normalized: AssessmentMatrix,
    /// Per-assessor total of the raw row.
    pub row_totals: Vec<f64>,
    pub optimism: OptimismReport,
}

/// `PR = AVSp × Rpᵀ` and its row normalization.
pub fn self_assessment_matrix(ch: &EvidenceChannel<'_>) -> Result<SelfAssessment> {
    let pr = ch
        .personnel_weights
        .matrix()
        .mat_mul(&ch.evidence.values().transpose())?;
    let raw = AssessmentMatrix::new(ch.roster().clone(), pr, Some(ch.kind))?;
    let normalized = raw.normalize()?;
    let row_totals = raw.values().row_sums();
    let optimism = optimism_report(&raw, &row_totals);
    Ok(SelfAssessment {
        raw,
        normalized,
        row_totals,
        optimism,
    })
}

fn optimism_report(raw: &AssessmentMatrix, totals: &[f64]) -> OptimismReport {
    let r = raw.roster();
    // first occurrence wins on equal totals
    let mut hi = 0;
    let mut lo = 0;
    for (i, &t) in totals.iter().enumerate() {
        if t > totals[hi] {
            hi = i;
        }
        if t < totals[lo] {
            lo = i;
        }
    }
    OptimismReport {
        most_optimistic: r.id(hi).to_string(),
        most_optimistic_total: totals[hi],
        least_optimistic: r.id(lo).to_string(),
        least_optimistic_total: totals[lo],
    }
}

fn require_normalized(m: &AssessmentMatrix) -> Result<()> {
    if !m.is_normalized() {
        return Err(Error::NotNormalized("assessment matrix"));
    }
    Ok(())
}

fn degenerate_warning(m: &AssessmentMatrix, out: &mut ScoreVector) {
    if !m.degenerate_rows().is_empty() {
        let ids: Vec<&str> = m.degenerate_rows().iter().map(|&i| m.roster().id(i)).collect();
        out.warnings
            .push(format!("degenerate assessor rows: {}", ids.join(", ")));
    }
}

/// Column means of `‖PR‖`, self-scores included.
pub fn democratic_assessment(normalized: &AssessmentMatrix) -> Result<ScoreVector> {
    require_normalized(normalized)?;
    let mut out = ScoreVector::raw(
        normalized.roster().clone(),
        normalized.values().column_means(),
        Provenance::new("democratic", normalized.channel),
    )?;
    degenerate_warning(normalized, &mut out);
    Ok(flag_shares(out))
}

/// `CR = ‖AR‖ × ‖PR‖`.
pub fn weighted_democracy(
    admin_shares: &ScoreVector,
    normalized: &AssessmentMatrix,
) -> Result<ScoreVector> {
    require_normalized(normalized)?;
    if !admin_shares.is_normalized() {
        return Err(Error::NotNormalized("administrative shares"));
    }
    admin_shares
        .roster()
        .ensure_same(normalized.roster(), "weighted democracy")?;
    let v = mix_rows(admin_shares.scores(), normalized)?;
    let mut out = ScoreVector::raw(
        normalized.roster().clone(),
        v,
        Provenance::new("weighted_democracy", normalized.channel),
    )?;
    degenerate_warning(normalized, &mut out);
    Ok(flag_shares(out))
}

/// `CRL = Lead × ‖PR‖`, `Lead` being the leader's own normalized row.
pub fn leader_compromise(normalized: &AssessmentMatrix, leader: &str) -> Result<ScoreVector> {
    require_normalized(normalized)?;
    let li = normalized.roster().require(leader)?;
    let lead = normalized.values().row(li).to_vec();
    let v = mix_rows(&lead, normalized)?;
    let mut out = ScoreVector::raw(
        normalized.roster().clone(),
        v,
        Provenance::new("leader_compromise", normalized.channel).with("leader", leader),
    )?;
    degenerate_warning(normalized, &mut out);
    Ok(flag_shares(out))
}

fn mix_rows(weights: &[f64], m: &AssessmentMatrix) -> Result<Vec<f64>> {
    let row = crate::matrix::Matrix::row_vector(weights);
    Ok(row.mat_mul(m.values())?.row(0).to_vec())
}

/// Marks a mixture of normalized rows as shares. Degenerate assessor rows
/// leave the total short of 1; such vectors are flagged, not rescaled.
fn flag_shares(v: ScoreVector) -> ScoreVector {
    let warnings = v.warnings.clone();
    let mut out = ScoreVector::assume_shares(v);
    if out.is_degenerate() && warnings.is_empty() {
        out.warnings.push("shares do not sum to 1".to_string());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "strategy", content = "value")]
pub enum LeaderStrategy {
    /// First of the administrative list.
    #[default]
    AdminTop,
    /// First of the given league after re-ranking under its leader.
    LeagueTop(usize),
    /// First of the democratic self-assessment list.
    DemocraticTop,
    Explicit(String),
}

pub fn select_leader(
    scenario: &Scenario,
    kind: Channel,
    strategy: &LeaderStrategy,
) -> Result<String> {
    let cfg = scenario.config();
    let ch = scenario.channel(kind)?;
    match strategy {
        LeaderStrategy::Explicit(id) => {
            scenario.roster().require(id)?;
            Ok(id.clone())
        }
        LeaderStrategy::AdminTop => {
            let (_, list) =
                normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
            Ok(list.entries()[0].staff_id.clone())
        }
        LeaderStrategy::DemocraticTop => {
            let sa = self_assessment_matrix(&ch)?;
            let da = democratic_assessment(&sa.normalized)?;
            let list = RankingList::from_scores(&da, cfg.tie_rule, cfg.tie_tolerance);
            Ok(list.entries()[0].staff_id.clone())
        }
        LeaderStrategy::LeagueTop(league) => {
            let (_, admin) =
                normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
            let partition = crate::stratification::form_leagues(&admin, cfg.league_count)?;
            if *league >= partition.leagues.len() {
                return Err(Error::OutOfRange {
                    what: "league index",
                    value: *league as i64,
                    min: 0,
                    max: partition.leagues.len() as i64 - 1,
                });
            }
            let reranked = crate::stratification::rerank_leagues(&partition, &ch, cfg.tie_tolerance)?;
            Ok(reranked.leagues[*league][0].clone())
        }
    }
}
