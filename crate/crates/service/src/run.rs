//! Procedure requests shared by the HTTP API and the command line.

use evirank_core::io::{ComparisonReport, LeagueReport, Report};
use evirank_core::metrics::{max_place_diff, place_diff, place_distance, score_distance};
use evirank_core::procedures::{compute_list, justice_report, Procedure, ProcedureOptions};
use evirank_core::ranking::{administrative_scores, normalize_and_rank, LeaderStrategy};
use evirank_core::stratification::{
    cluster_value_systems, dichotomy, form_leagues, rerank_leagues, social_lift, DichotomyConfig,
    DichotomyVariant,
};
use evirank_core::{
    passion::work_passion, Channel, Error, Provenance, RankingList, Result, Roster, Scenario,
    ScoreVector, SplitRule, ZeroDivisionPolicy,
};
use serde::{Deserialize, Serialize};

fn achievements() -> Channel {
    Channel::Achievements
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairs {
    /// {AA, DA} × {ABA, DBA}
    #[default]
    Canonical,
    /// Every achievement list against every reward list.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    PlaceDistance,
    ScoreDistance,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::PlaceDistance => "place_distance",
            Metric::ScoreDistance => "score_distance",
        }
    }
}

/// One procedure run. Unset parameters fall back to the scenario config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "procedure", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunRequest {
    AdminRank {
        #[serde(default = "achievements")]
        channel: Channel,
    },
    DemocraticRank {
        #[serde(default = "achievements")]
        channel: Channel,
    },
    WeightedDemocracy {
        #[serde(default = "achievements")]
        channel: Channel,
    },
    LeaderCompromise {
        #[serde(default = "achievements")]
        channel: Channel,
        #[serde(default)]
        leader: LeaderStrategy,
    },
    Leagues {
        #[serde(default = "achievements")]
        channel: Channel,
        #[serde(default)]
        count: Option<usize>,
        /// Adds a social lift of this size when set.
        #[serde(default)]
        swap_k: Option<usize>,
    },
    SocialLift {
        #[serde(default = "achievements")]
        channel: Channel,
        #[serde(default)]
        count: Option<usize>,
        #[serde(default)]
        swap_k: Option<usize>,
    },
    Dichotomy {
        #[serde(default = "achievements")]
        channel: Channel,
        variant: DichotomyVariant,
        #[serde(default)]
        split: Option<SplitRule>,
        #[serde(default)]
        swap: usize,
    },
    Cluster {
        #[serde(default = "achievements")]
        channel: Channel,
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Justice {
        #[serde(default)]
        pairs: Pairs,
    },
    Passion {
        #[serde(default)]
        zero_policy: Option<ZeroDivisionPolicy>,
    },
    Compare {
        list_a: String,
        list_b: String,
        #[serde(default)]
        metric: Metric,
    },
}

/// A ranking kept for later comparison: ids in list order and their shares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedList {
    pub order: Vec<String>,
    pub scores: Vec<f64>,
}

impl CachedList {
    pub fn from_list(list: &RankingList) -> Self {
        Self {
            order: list.order(),
            scores: list.entries().iter().map(|e| e.score).collect(),
        }
    }

    fn ranking(&self) -> Result<RankingList> {
        RankingList::from_order(self.order.clone(), Provenance::new("cached", None))
    }

    fn shares(&self) -> Result<ScoreVector> {
        ScoreVector::shares(Roster::new(self.order.iter().cloned())?, self.scores.clone(), Provenance::new("cached", None))
    }
}

pub struct Outcome {
    pub report: Box<dyn Report>,
    /// Present when the result is a ranking list that `compare` can refer to.
    pub list: Option<CachedList>,
}

impl Outcome {
    fn ranking(report: impl Report + 'static, list: &RankingList) -> Self {
        Self {
            list: Some(CachedList::from_list(list)),
            report: Box::new(report),
        }
    }

    fn other(report: impl Report + 'static) -> Self {
        Self {
            report: Box::new(report),
            list: None,
        }
    }
}

fn list_procedure(s: &Scenario, p: Procedure, channel: Channel, opts: &ProcedureOptions) -> Result<Outcome> {
    let c = compute_list(s, p, channel, opts)?;
    let list = c.list.clone();
    Ok(Outcome::ranking(c, &list))
}

fn with_leagues(s: &Scenario, count: Option<usize>, swap_k: Option<usize>) -> Result<Scenario> {
    let mut cfg = s.config().clone();
    if let Some(c) = count {
        cfg.league_count = c;
    }
    if let Some(k) = swap_k {
        cfg.swap_count = k;
    }
    s.with_config(cfg)
}

/// Resolves a list reference: a cached result name first, then a list code
/// such as `AA` or `CR` computed on the current scenario.
fn resolve(s: &Scenario, name: &str, cached: &dyn Fn(&str) -> Option<CachedList>) -> Result<CachedList> {
    if let Some(c) = cached(name) {
        return Ok(c);
    }
    let (p, ch) = Procedure::from_code(name)
        .ok_or_else(|| Error::Invalid(format!("unknown list '{name}': not a stored result or list code")))?;
    let c = compute_list(s, p, ch, &ProcedureOptions::default())?;
    Ok(CachedList::from_list(&c.list))
}

pub fn execute(s: &Scenario, req: &RunRequest, cached: &dyn Fn(&str) -> Option<CachedList>) -> Result<Outcome> {
    let default = ProcedureOptions::default();
    match req {
        RunRequest::AdminRank { channel } => list_procedure(s, Procedure::Administrative, *channel, &default),
        RunRequest::DemocraticRank { channel } => list_procedure(s, Procedure::Democratic, *channel, &default),
        RunRequest::WeightedDemocracy { channel } => {
            list_procedure(s, Procedure::WeightedDemocracy, *channel, &default)
        }
        RunRequest::LeaderCompromise { channel, leader } => {
            let opts = ProcedureOptions {
                leader: leader.clone(),
                ..Default::default()
            };
            list_procedure(s, Procedure::LeaderCompromise, *channel, &opts)
        }
        RunRequest::SocialLift { channel, count, swap_k } => {
            list_procedure(&with_leagues(s, *count, *swap_k)?, Procedure::SocialLift, *channel, &default)
        }
        RunRequest::Leagues { channel, count, swap_k } => {
            let s = with_leagues(s, *count, None)?;
            let cfg = s.config();
            let ch = s.channel(*channel)?;
            let (_, admin) = normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
            let partition = form_leagues(&admin, cfg.league_count)?;
            let reranked = rerank_leagues(&partition, &ch, cfg.tie_tolerance)?;
            let lifted = swap_k
                .map(|k| social_lift(&reranked.list, &partition, k))
                .transpose()?;
            let shown = lifted.clone().unwrap_or_else(|| reranked.list.clone());
            Ok(Outcome::ranking(
                LeagueReport {
                    partition,
                    reranked,
                    lifted,
                },
                &shown,
            ))
        }
        RunRequest::Dichotomy {
            channel,
            variant,
            split,
            swap,
        } => {
            let d = dichotomy(
                s,
                DichotomyConfig {
                    variant: *variant,
                    split: split.unwrap_or(s.config().split),
                    league_driven_swap: *swap,
                    channel: *channel,
                },
            )?;
            let list = d.list.clone();
            Ok(Outcome::ranking(d, &list))
        }
        RunRequest::Cluster { channel, k, seed } => {
            let ch = s.channel(*channel)?;
            let k = k.unwrap_or(s.config().cluster_k);
            let seed = seed.unwrap_or(s.config().cluster_seed);
            Ok(Outcome::other(cluster_value_systems(ch.personnel_weights, k, seed)?))
        }
        RunRequest::Justice { pairs } => {
            let (a, r) = match pairs {
                Pairs::Canonical => evirank_core::procedures::canonical_pairs(),
                Pairs::All => (Procedure::ALL.to_vec(), Procedure::ALL.to_vec()),
            };
            Ok(Outcome::other(justice_report(s, &a, &r, &default)?))
        }
        RunRequest::Passion { zero_policy } => {
            let p = work_passion(s, zero_policy.unwrap_or(s.config().zero_policy), false)?;
            let list = p.ranking.clone();
            Ok(Outcome::ranking(p, &list))
        }
        RunRequest::Compare { list_a, list_b, metric } => {
            let a = resolve(s, list_a, cached)?;
            let b = resolve(s, list_b, cached)?;
            let (value, pd) = match metric {
                Metric::PlaceDistance => {
                    let (ra, rb) = (a.ranking()?, b.ranking()?);
                    let d = place_diff(&ra, &rb)?;
                    (place_distance(&ra, &rb)?, Some((d, max_place_diff(ra.len()))))
                }
                Metric::ScoreDistance => (score_distance(&a.shares()?, &b.shares()?)?, None),
            };
            Ok(Outcome::other(ComparisonReport {
                metric: metric.as_str().to_string(),
                list_a: list_a.clone(),
                list_b: list_b.clone(),
                value,
                place_diff: pd,
            }))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input is wrong: bad bundle, weights, ids or parameters.
    Validation,
    /// The input is well formed but the computation is undefined for it.
    Computation,
}

pub fn classify(e: &Error) -> ErrorClass {
    match e {
        Error::Shape { .. }
        | Error::NegativeEntry { .. }
        | Error::ZeroDivision { .. }
        | Error::PassionZeroDivision { .. }
        | Error::NotNormalized(_)
        | Error::Provenance(_)
        | Error::RankDeficient { .. } => ErrorClass::Computation,
        _ => ErrorClass::Validation,
    }
}

pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Shape { .. } => "shape_mismatch",
        Error::NegativeEntry { .. } => "negative_entry",
        Error::ZeroDivision { .. } => "zero_division",
        Error::PassionZeroDivision { .. } => "passion_zero_division",
        Error::RosterMismatch(_) => "roster_mismatch",
        Error::CategoryMismatch(_) => "category_mismatch",
        Error::InvalidWeights { .. } => "invalid_weights",
        Error::UnknownStaff(_) => "unknown_staff",
        Error::NotNormalized(_) => "not_normalized",
        Error::OutOfRange { .. } => "out_of_range",
        Error::SwapTooLarge { .. } => "swap_too_large",
        Error::MissingRewardChannel => "missing_reward_channel",
        Error::Provenance(_) => "provenance_mismatch",
        Error::Empty(_) => "empty_input",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::Invalid(_) => "invalid_parameter",
        Error::Bundle(_) => "invalid_bundle",
    }
}

/// Structured detail entries for an engine error.
pub fn error_details(e: &Error) -> Vec<serde_json::Value> {
    use serde_json::json;
    match e {
        Error::Bundle(vs) => vs
            .iter()
            .map(|v| json!({"file": v.file, "row": v.row, "column": v.column, "message": v.message}))
            .collect(),
        Error::ZeroDivision { cells } => cells.iter().map(|(r, c)| json!({"row": r, "column": c})).collect(),
        Error::PassionZeroDivision { pairs } => pairs
            .iter()
            .map(|(a, b)| json!({"assessor": a, "assessed": b}))
            .collect(),
        Error::RankDeficient { columns } => columns.iter().map(|c| json!({"column": c})).collect(),
        Error::UnknownStaff(id) => vec![json!({"staff_id": id})],
        Error::SwapTooLarge { league, size, swap_k } => {
            vec![json!({"league": league, "size": size, "swap_k": swap_k})]
        }
        Error::OutOfRange { what, value, min, max } => {
            vec![json!({"field": what, "value": value, "min": min, "max": max})]
        }
        Error::InvalidWeights { context, reason } => vec![json!({"context": context, "reason": reason})],
        _ => Vec::new(),
    }
}
