//! Named ranking procedures and their achievement/reward list codes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{justice_from_lists, JusticeReport};
use crate::model::{Channel, RankingList, Scenario, ScoreVector, SplitRule};
use crate::ranking::{
    administrative_scores, democratic_assessment, leader_compromise, normalize_and_rank,
    select_leader, self_assessment_matrix, weighted_democracy, LeaderStrategy,
};
use crate::stratification::{
    dichotomy, form_leagues, rerank_leagues, social_lift, DichotomyConfig, DichotomyVariant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    Administrative,
    Democratic,
    SocialLift,
    WeightedDemocracy,
    LeaderCompromise,
    WeakDichotomy,
    StrongDichotomy,
    SelfDichotomy,
}

impl Procedure {
    pub const ALL: [Procedure; 8] = [
        Procedure::Administrative,
        Procedure::Democratic,
        Procedure::SocialLift,
        Procedure::WeightedDemocracy,
        Procedure::LeaderCompromise,
        Procedure::WeakDichotomy,
        Procedure::StrongDichotomy,
        Procedure::SelfDichotomy,
    ];

    pub fn code(self, channel: Channel) -> &'static str {
        use Procedure::*;
        match (self, channel) {
            (Administrative, Channel::Achievements) => "AA",
            (Administrative, Channel::Rewards) => "ABA",
            (Democratic, Channel::Achievements) => "DA",
            (Democratic, Channel::Rewards) => "DBA",
            (SocialLift, Channel::Achievements) => "SLR",
            (SocialLift, Channel::Rewards) => "SLBR",
            (WeightedDemocracy, Channel::Achievements) => "CR",
            (WeightedDemocracy, Channel::Rewards) => "CBR",
            (LeaderCompromise, Channel::Achievements) => "CRL",
            (LeaderCompromise, Channel::Rewards) => "CRBL",
            (WeakDichotomy, Channel::Achievements) => "WCDR",
            (WeakDichotomy, Channel::Rewards) => "WCDBR",
            (StrongDichotomy, Channel::Achievements) => "SCDR",
            (StrongDichotomy, Channel::Rewards) => "SCDBR",
            (SelfDichotomy, Channel::Achievements) => "CDSR",
            (SelfDichotomy, Channel::Rewards) => "CDSBR",
        }
    }

    pub fn from_code(code: &str) -> Option<(Procedure, Channel)> {
        Procedure::ALL.iter().find_map(|&p| {
            [Channel::Achievements, Channel::Rewards]
                .into_iter()
                .find(|&c| p.code(c).eq_ignore_ascii_case(code))
                .map(|c| (p, c))
        })
    }

    fn dichotomy_variant(self) -> Option<DichotomyVariant> {
        match self {
            Procedure::WeakDichotomy => Some(DichotomyVariant::Weak),
            Procedure::StrongDichotomy => Some(DichotomyVariant::Strong),
            Procedure::SelfDichotomy => Some(DichotomyVariant::SelfCompromise),
            _ => None,
        }
    }
}

/// Parameters a procedure may need beyond the scenario config.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProcedureOptions {
    pub leader: LeaderStrategy,
    /// Overrides the scenario's split rule for dichotomies.
    pub split: Option<SplitRule>,
    pub league_driven_swap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComputedList {
    pub code: String,
    /// Normalized shares; positional for lists built by reordering.
    pub shares: ScoreVector,
    pub list: RankingList,
}

pub fn compute_list(
    scenario: &Scenario,
    procedure: Procedure,
    channel: Channel,
    opts: &ProcedureOptions,
) -> Result<ComputedList> {
    let cfg = scenario.config();
    let ch = scenario.channel(channel)?;
    let code = procedure.code(channel).to_string();
    let ranked = |shares: ScoreVector| {
        let list = RankingList::from_scores(&shares, cfg.tie_rule, cfg.tie_tolerance);
        Ok(ComputedList {
            code: code.clone(),
            shares,
            list,
        })
    };
    let reordered = |list: RankingList| -> Result<ComputedList> {
        Ok(ComputedList {
            code: code.clone(),
            shares: list.score_vector(scenario.roster())?,
            list,
        })
    };
    match procedure {
        Procedure::Administrative => {
            let (shares, list) =
                normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
            Ok(ComputedList { code, shares, list })
        }
        Procedure::Democratic => ranked(democratic_assessment(&self_assessment_matrix(&ch)?.normalized)?),
        Procedure::WeightedDemocracy => {
            let admin = administrative_scores(&ch)?.normalized();
            ranked(weighted_democracy(&admin, &self_assessment_matrix(&ch)?.normalized)?)
        }
        Procedure::LeaderCompromise => {
            let leader = select_leader(scenario, channel, &opts.leader)?;
            ranked(leader_compromise(&self_assessment_matrix(&ch)?.normalized, &leader)?)
        }
        Procedure::SocialLift => {
            let (_, admin) =
                normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
            let partition = form_leagues(&admin, cfg.league_count)?;
            let reranked = rerank_leagues(&partition, &ch, cfg.tie_tolerance)?;
            reordered(social_lift(&reranked.list, &partition, cfg.swap_count)?)
        }
        Procedure::WeakDichotomy | Procedure::StrongDichotomy | Procedure::SelfDichotomy => {
            let variant = procedure.dichotomy_variant().expect("dichotomy procedure");
            let d = dichotomy(
                scenario,
                DichotomyConfig {
                    variant,
                    split: opts.split.unwrap_or(cfg.split),
                    league_driven_swap: opts.league_driven_swap,
                    channel,
                },
            )?;
            reordered(d.list)
        }
    }
}

/// The four canonical pairs: {AA, DA} × {ABA, DBA}.
pub fn canonical_pairs() -> (Vec<Procedure>, Vec<Procedure>) {
    let p = vec![Procedure::Administrative, Procedure::Democratic];
    (p.clone(), p)
}

/// Injustice for every requested achievement list against every requested
/// reward list.
pub fn justice_report(
    scenario: &Scenario,
    achievement: &[Procedure],
    reward: &[Procedure],
    opts: &ProcedureOptions,
) -> Result<JusticeReport> {
    if !scenario.has_rewards() {
        return Err(Error::MissingRewardChannel);
    }
    let mut a = Vec::with_capacity(achievement.len());
    for &p in achievement {
        let c = compute_list(scenario, p, Channel::Achievements, opts)?;
        a.push((c.code, c.shares));
    }
    let mut r = Vec::with_capacity(reward.len());
    for &p in reward {
        let c = compute_list(scenario, p, Channel::Rewards, opts)?;
        r.push((c.code, c.shares));
    }
    justice_from_lists(&a, &r)
}
