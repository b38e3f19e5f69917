//! Distances between ranking lists and the injustice measures built on them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Channel, RankingList, ScoreVector};

fn positions_by_id(list: &RankingList) -> HashMap<&str, usize> {
    list.entries()
        .iter()
        .map(|e| (e.staff_id.as_str(), e.position))
        .collect()
}

/// `Σ_k |pos_a(k) − pos_b(k)|` over every person.
pub fn place_diff(a: &RankingList, b: &RankingList) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::RosterMismatch(format!(
            "lists have {} and {} entries",
            a.len(),
            b.len()
        )));
    }
    let pb = positions_by_id(b);
    let mut total = 0u64;
    for e in a.entries() {
        let q = pb
            .get(e.staff_id.as_str())
            .ok_or_else(|| Error::RosterMismatch(format!("'{}' missing from second list", e.staff_id)))?;
        total += e.position.abs_diff(*q) as u64;
    }
    Ok(total)
}

/// Largest possible `place_diff` for `m` people, reached by reversal.
pub fn max_place_diff(m: usize) -> u64 {
    (m as u64 * m as u64) / 2
}

pub fn place_distance(a: &RankingList, b: &RankingList) -> Result<f64> {
    let diff = place_diff(a, b)?;
    let max = max_place_diff(a.len());
    if max == 0 {
        return Ok(0.0);
    }
    Ok(diff as f64 / max as f64)
}

/// `Σ_k |a(k) − b(k)|`, aligned by person id.
pub fn score_diff(a: &ScoreVector, b: &ScoreVector) -> Result<f64> {
    if !a.is_normalized() || !b.is_normalized() {
        return Err(Error::NotNormalized("score_diff inputs"));
    }
    if a.roster().len() != b.roster().len() {
        return Err(Error::RosterMismatch(format!(
            "score vectors have {} and {} members",
            a.roster().len(),
            b.roster().len()
        )));
    }
    let mut total = 0.0;
    for (i, id) in a.roster().ids().iter().enumerate() {
        let j = b
            .roster()
            .index_of(id)
            .ok_or_else(|| Error::RosterMismatch(format!("'{id}' missing from second vector")))?;
        total += (a.scores()[i] - b.scores()[j]).abs();
    }
    Ok(total)
}

pub fn score_distance(a: &ScoreVector, b: &ScoreVector) -> Result<f64> {
    Ok(0.5 * score_diff(a, b)?)
}

/// Score distance between an achievement-based and a reward-based list.
pub fn injustice(achievement: &ScoreVector, reward: &ScoreVector) -> Result<f64> {
    match (achievement.channel(), reward.channel()) {
        (Some(Channel::Achievements), Some(Channel::Rewards)) => score_distance(achievement, reward),
        (a, r) => Err(Error::Provenance(format!(
            "injustice needs achievements vs rewards, got {} vs {}",
            a.map_or("unknown", Channel::as_str),
            r.map_or("unknown", Channel::as_str)
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverallInjustice {
    pub value: f64,
    /// Every pairwise value was zero; the mean is taken as 0.
    pub all_zero: bool,
}

/// Contra-harmonic mean `Σv² / Σv`.
pub fn overall_injustice(values: &[f64]) -> Result<OverallInjustice> {
    if values.is_empty() {
        return Err(Error::Empty("injustice values"));
    }
    if let Some(&v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::Invalid(format!("injustice value {v} is negative or not finite")));
    }
    let s: f64 = values.iter().sum();
    if s == 0.0 {
        return Ok(OverallInjustice {
            value: 0.0,
            all_zero: true,
        });
    }
    let s2: f64 = values.iter().map(|v| v * v).sum();
    Ok(OverallInjustice {
        value: s2 / s,
        all_zero: false,
    })
}

/// Diagnostic attached to the four canonical pairs and to the overall value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpretation {
    /// AA vs ABA.
    PunishmentsForTheInnocent,
    /// DA vs DBA.
    StaffFeelUnderRewarded,
    /// AA vs DBA.
    EveryoneDissatisfied,
    /// DA vs ABA.
    EveryoneOverestimates,
    PoorEmotionalClimate,
}

impl Interpretation {
    pub fn for_pair(achievement: &str, reward: &str) -> Option<Self> {
        match (achievement, reward) {
            ("AA", "ABA") => Some(Self::PunishmentsForTheInnocent),
            ("DA", "DBA") => Some(Self::StaffFeelUnderRewarded),
            ("AA", "DBA") => Some(Self::EveryoneDissatisfied),
            ("DA", "ABA") => Some(Self::EveryoneOverestimates),
            _ => None,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Self::PunishmentsForTheInnocent => "punishments_for_the_innocent",
            Self::StaffFeelUnderRewarded => "staff_feel_under_rewarded",
            Self::EveryoneDissatisfied => "everyone_dissatisfied",
            Self::EveryoneOverestimates => "everyone_overestimates",
            Self::PoorEmotionalClimate => "poor_emotional_climate",
        }
    }

    /// What a high value usually indicates.
    pub fn text(self) -> &'static str {
        match self {
            Self::PunishmentsForTheInnocent => {
                "the administration does not reward the achievements it formally requires: \
                 punishments for the innocent and rewards for the uninvolved"
            }
            Self::StaffFeelUnderRewarded => {
                "the staff feel that their accomplishments do not meet the rewards they deserve"
            }
            Self::EveryoneDissatisfied => {
                "the administration is dissatisfied with the achievements and the staff with the bonuses"
            }
            Self::EveryoneOverestimates => {
                "the staff think they work very hard while the administration thinks it rewards generously"
            }
            Self::PoorEmotionalClimate => {
                "poor emotional climate due to a lack of justice in reward allocation"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairInjustice {
    pub achievement_list: String,
    pub reward_list: String,
    pub value: f64,
    pub interpretation: Option<Interpretation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JusticeReport {
    pub pairwise: Vec<PairInjustice>,
    pub overall: OverallInjustice,
}

impl JusticeReport {
    pub fn get(&self, achievement: &str, reward: &str) -> Option<f64> {
        self.pairwise
            .iter()
            .find(|p| p.achievement_list == achievement && p.reward_list == reward)
            .map(|p| p.value)
    }
}

/// Every achievement list against every reward list, plus the overall value.
pub fn justice_from_lists(
    achievement: &[(String, ScoreVector)],
    reward: &[(String, ScoreVector)],
) -> Result<JusticeReport> {
    let mut pairwise = Vec::with_capacity(achievement.len() * reward.len());
    for (an, a) in achievement {
        for (rn, r) in reward {
            pairwise.push(PairInjustice {
                achievement_list: an.clone(),
                reward_list: rn.clone(),
                value: injustice(a, r)?,
                interpretation: Interpretation::for_pair(an, rn),
            });
        }
    }
    let values: Vec<f64> = pairwise.iter().map(|p| p.value).collect();
    let overall = overall_injustice(&values)?;
    Ok(JusticeReport { pairwise, overall })
}
