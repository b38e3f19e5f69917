//! Work passion: how well each person's declared values fit their
//! achievements, relative to how well they fit their rewards.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ZeroDivisionPolicy};
use crate::model::{AssessmentMatrix, Channel, Provenance, RankingList, Scenario, ScoreVector, TieRule};

#[derive(Debug, Clone, PartialEq)]
pub struct StageTrace {
    /// `Rp ⊙ AVSp`
    pub s1: Matrix,
    /// `S1 × Rpᵀ`
    pub s2: Matrix,
    /// `Bp ⊙ RVSp`
    pub s3: Matrix,
    /// `S3 × Bpᵀ`
    pub s4: Matrix,
    /// `S2 ⊘ S4`
    pub s5: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassionResult {
    pub wp: AssessmentMatrix,
    pub average: ScoreVector,
    pub ranking: RankingList,
    pub zero_policy: ZeroDivisionPolicy,
    pub stage_trace: Option<StageTrace>,
}

pub fn work_passion(
    scenario: &Scenario,
    zero_policy: ZeroDivisionPolicy,
    keep_trace: bool,
) -> Result<PassionResult> {
    let ach = scenario.channel(Channel::Achievements)?;
    let rew = scenario.channel(Channel::Rewards)?;
    let rp = ach.evidence.values();
    let bp = rew.evidence.values();

    let s1 = rp.elementwise_mul(ach.personnel_weights.matrix())?;
    let s2 = s1.mat_mul(&rp.transpose())?;
    let s3 = bp.elementwise_mul(rew.personnel_weights.matrix())?;
    let s4 = s3.mat_mul(&bp.transpose())?;
    let s5 = s2.elementwise_div(&s4, zero_policy).map_err(|e| match e {
        Error::ZeroDivision { cells } => {
            let r = scenario.roster();
            Error::PassionZeroDivision {
                pairs: cells
                    .into_iter()
                    .map(|(i, j)| (r.id(i).to_string(), r.id(j).to_string()))
                    .collect(),
            }
        }
        other => other,
    })?;

    let wp = AssessmentMatrix::new(scenario.roster().clone(), s5.clone(), None)?.normalize()?;
    let cfg = scenario.config();
    let (average, ranking) = passion_ranking(&wp, cfg.tie_rule, cfg.tie_tolerance)?;
    let stage_trace = keep_trace.then_some(StageTrace { s1, s2, s3, s4, s5 });
    Ok(PassionResult {
        wp,
        average,
        ranking,
        zero_policy,
        stage_trace,
    })
}

/// Column means of a normalized work-passion matrix over all assessors, and
/// the list ordering them.
pub fn passion_ranking(
    wp: &AssessmentMatrix,
    tie_rule: TieRule,
    tie_tolerance: f64,
) -> Result<(ScoreVector, RankingList)> {
    if !wp.is_normalized() {
        return Err(Error::NotNormalized("work-passion matrix"));
    }
    let raw = ScoreVector::raw(
        wp.roster().clone(),
        wp.values().column_means(),
        Provenance::new("work_passion", None),
    )?;
    let mut average = ScoreVector::assume_shares(raw);
    if !wp.degenerate_rows().is_empty() {
        let ids: Vec<&str> = wp.degenerate_rows().iter().map(|&i| wp.roster().id(i)).collect();
        average
            .warnings
            .push(format!("degenerate work-passion rows: {}", ids.join(", ")));
    }
    let ranking = RankingList::from_scores(&average, tie_rule, tie_tolerance);
    Ok((average, ranking))
}
