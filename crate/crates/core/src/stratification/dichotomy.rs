//! Compromise dichotomy: recursive WINNERS/LOSERS splitting where the ranking
//! algorithm alternates between levels.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::model::{
    Channel, Provenance, RankingList, Roster, Scenario, ScoreVector, SplitRule, TieRule,
};
use crate::ranking::administrative_scores;

pub const GOLDEN_WINNERS_FRACTION: f64 = 0.618;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyVariant {
    /// Administrative on odd levels, democratic on even ones.
    Weak,
    /// Democratic on odd levels, administrative on even ones.
    Strong,
    /// Democratic at every level.
    #[serde(rename = "self")]
    SelfCompromise,
}

impl DichotomyVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            DichotomyVariant::Weak => "weak",
            DichotomyVariant::Strong => "strong",
            DichotomyVariant::SelfCompromise => "self",
        }
    }

    fn algorithm(self, level: usize) -> Algorithm {
        let odd = level % 2 == 1;
        match (self, odd) {
            (DichotomyVariant::Weak, true) | (DichotomyVariant::Strong, false) => Algorithm::Administrative,
            _ => Algorithm::Democratic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Algorithm {
    Administrative,
    Democratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DichotomyConfig {
    pub variant: DichotomyVariant,
    pub split: SplitRule,
    /// Members exchanged between WINNERS and LOSERS after each split.
    pub league_driven_swap: usize,
    pub channel: Channel,
}

impl DichotomyConfig {
    pub fn new(variant: DichotomyVariant) -> Self {
        Self {
            variant,
            split: SplitRule::Half,
            league_driven_swap: 0,
            channel: Channel::Achievements,
        }
    }
}

/// Size of WINNERS for a group of `size` members.
pub fn winners_count(size: usize, split: SplitRule) -> usize {
    if size < 2 {
        return size;
    }
    match split {
        SplitRule::Half => size.div_ceil(2),
        SplitRule::GoldenRatio => {
            let w = (GOLDEN_WINNERS_FRACTION * size as f64).round() as usize;
            w.clamp(1, size - 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyResult {
    pub list: RankingList,
    /// WINNERS of the first split, in their first-level order.
    pub first_winners: Vec<String>,
    /// Number of ranking levels applied.
    pub depth: usize,
}

struct Ctx<'a> {
    roster: &'a Roster,
    admin: Vec<f64>,
    pr: Matrix,
    cfg: DichotomyConfig,
    tie_rule: TieRule,
    tie_tolerance: f64,
}

impl Ctx<'_> {
    fn rank(&self, members: &[usize], level: usize) -> Result<Vec<usize>> {
        let scores: Vec<f64> = match self.cfg.variant.algorithm(level) {
            Algorithm::Administrative => members.iter().map(|&i| self.admin[i]).collect(),
            Algorithm::Democratic => {
                // only subgroup members assess, and only each other
                let n = self.pr.principal_submatrix(members).row_normalize()?;
                n.matrix.column_means()
            }
        };
        let sub = self.roster.subset(members)?;
        let sv = ScoreVector::raw(sub, scores, Provenance::default())?;
        let list = RankingList::from_scores(&sv, self.tie_rule, self.tie_tolerance);
        Ok(list
            .ids()
            .map(|id| self.roster.index_of(id).expect("subset of roster"))
            .collect())
    }

    fn split(&self, members: &[usize], level: usize, depth: &mut usize, out: &mut Vec<usize>, first: &mut Vec<usize>) -> Result<()> {
        if members.len() <= 1 {
            out.extend_from_slice(members);
            return Ok(());
        }
        *depth = (*depth).max(level);
        let mut ranked = self.rank(members, level)?;
        let w = winners_count(ranked.len(), self.cfg.split);
        let l = ranked.len() - w;
        let s = self.cfg.league_driven_swap.min(w - 1).min(l.saturating_sub(1));
        if s > 0 {
            let (winners, losers) = ranked.split_at_mut(w);
            winners[w - s..].swap_with_slice(&mut losers[..s]);
        }
        if level == 1 {
            first.extend_from_slice(&ranked[..w]);
        }
        self.split(&ranked[..w], level + 1, depth, out, first)?;
        self.split(&ranked[w..], level + 1, depth, out, first)
    }
}

pub fn dichotomy(scenario: &Scenario, cfg: DichotomyConfig) -> Result<DichotomyResult> {
    let ch = scenario.channel(cfg.channel)?;
    let admin = administrative_scores(&ch)?.scores().to_vec();
    let pr = ch
        .personnel_weights
        .matrix()
        .mat_mul(&ch.evidence.values().transpose())?;
    let ctx = Ctx {
        roster: ch.roster(),
        admin,
        pr,
        cfg,
        tie_rule: scenario.config().tie_rule,
        tie_tolerance: scenario.config().tie_tolerance,
    };
    let all: Vec<usize> = (0..ctx.roster.len()).collect();
    let mut out = Vec::with_capacity(all.len());
    let mut first = Vec::new();
    let mut depth = 0;
    ctx.split(&all, 1, &mut depth, &mut out, &mut first)?;
    let prov = Provenance::new("dichotomy", Some(cfg.channel))
        .with("variant", cfg.variant.as_str())
        .with(
            "split",
            match cfg.split {
                SplitRule::Half => "half",
                SplitRule::GoldenRatio => "golden_ratio",
            },
        )
        .with("swap", cfg.league_driven_swap);
    let ids = |v: &[usize]| v.iter().map(|&i| ctx.roster.id(i).to_string()).collect::<Vec<_>>();
    if all.len() == 1 {
        first = all.clone();
    }
    Ok(DichotomyResult {
        list: RankingList::from_order(ids(&out), prov)?,
        first_winners: ids(&first),
        depth,
    })
}
