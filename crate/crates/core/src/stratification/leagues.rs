use crate::error::{Error, Result};
use crate::model::{EvidenceChannel, Provenance, RankingList, ScoreVector, TieRule};

/// Contiguous slices of a ranking list, highest league first.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaguePartition {
    pub leagues: Vec<Vec<String>>,
    pub leaders: Vec<String>,
    pub source: Provenance,
}

impl LeaguePartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.leagues.iter().map(Vec::len).collect()
    }
}

/// League sizes for `m` members; higher leagues absorb the remainder.
pub fn league_sizes(m: usize, count: usize) -> Vec<usize> {
    let base = m / count;
    let extra = m % count;
    (0..count).map(|i| base + usize::from(i < extra)).collect()
}

pub fn form_leagues(ranking: &RankingList, league_count: usize) -> Result<LeaguePartition> {
    let m = ranking.len();
    if league_count == 0 || league_count > m {
        return Err(Error::OutOfRange {
            what: "league_count",
            value: league_count as i64,
            min: 1,
            max: m as i64,
        });
    }
    let order = ranking.order();
    let mut leagues = Vec::with_capacity(league_count);
    let mut start = 0;
    for size in league_sizes(m, league_count) {
        leagues.push(order[start..start + size].to_vec());
        start += size;
    }
    let leaders = leagues.iter().map(|l| l[0].clone()).collect();
    Ok(LeaguePartition {
        leagues,
        leaders,
        source: ranking.provenance.clone().with("league_count", league_count),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RerankedLeagues {
    /// Leagues concatenated highest first; scores are positional.
    pub list: RankingList,
    /// Each league's members in their new order.
    pub leagues: Vec<Vec<String>>,
    /// Within-league shares under the leader's value system, aligned with `leagues`.
    pub league_shares: Vec<Vec<f64>>,
    pub leaders: Vec<String>,
}

/// Rescores every league with its leader's value system.
///
/// Equal scores keep their order from the source list, so a league whose
/// members tie under the leader's weights is left as it was.
pub fn rerank_leagues(
    partition: &LeaguePartition,
    ch: &EvidenceChannel<'_>,
    tie_tolerance: f64,
) -> Result<RerankedLeagues> {
    let roster = ch.roster();
    let values = ch.evidence.values();
    let mut leagues = Vec::with_capacity(partition.leagues.len());
    let mut league_shares = Vec::with_capacity(partition.leagues.len());
    for (members, leader) in partition.leagues.iter().zip(&partition.leaders) {
        let w = ch.personnel_weights.row_of(leader)?;
        let mut idx = Vec::with_capacity(members.len());
        for id in members {
            idx.push(roster.require(id)?);
        }
        let scores: Vec<f64> = idx
            .iter()
            .map(|&i| values.row(i).iter().zip(w.weights()).map(|(e, w)| e * w).sum())
            .collect();
        let sub = roster.subset(&idx)?;
        let sv = ScoreVector::raw(sub, scores, Provenance::new("league", Some(ch.kind)))?.normalized();
        let list = RankingList::from_scores(&sv, TieRule::SourceOrder, tie_tolerance);
        league_shares.push(list.entries().iter().map(|e| e.score).collect());
        leagues.push(list.order());
    }
    let order: Vec<String> = leagues.iter().flatten().cloned().collect();
    if order.len() != roster.len() {
        return Err(Error::RosterMismatch(format!(
            "leagues cover {} of {} members",
            order.len(),
            roster.len()
        )));
    }
    let prov = Provenance::new("league_rerank", Some(ch.kind)).with("league_count", partition.leagues.len());
    Ok(RerankedLeagues {
        list: RankingList::from_order(order, prov)?,
        leaders: leagues.iter().map(|l| l[0].clone()).collect(),
        leagues,
        league_shares,
    })
}

/// Exchanges the bottom `swap_k` of each league with the top `swap_k` of the
/// league below it. Internal order of both blocks is kept, so applying the
/// lift twice restores the input.
pub fn social_lift(
    reranked: &RankingList,
    partition: &LeaguePartition,
    swap_k: usize,
) -> Result<RankingList> {
    let sizes = partition.sizes();
    let total: usize = sizes.iter().sum();
    if total != reranked.len() {
        return Err(Error::RosterMismatch(format!(
            "partition covers {total} members, list has {}",
            reranked.len()
        )));
    }
    for (league, &size) in sizes.iter().enumerate() {
        if 2 * swap_k > size {
            return Err(Error::SwapTooLarge {
                league,
                size,
                swap_k,
            });
        }
    }
    let mut order = reranked.order();
    let mut boundary = 0;
    for &size in &sizes[..sizes.len() - 1] {
        boundary += size;
        let (upper, lower) = order.split_at_mut(boundary);
        upper[boundary - swap_k..].swap_with_slice(&mut lower[..swap_k]);
    }
    let mut prov = reranked.provenance.clone().with("swap_k", swap_k);
    prov.procedure = "social_lift".into();
    RankingList::from_order(order, prov)
}
