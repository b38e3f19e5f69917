//! Domain types: rosters, category sets, evidence, value systems, scores and
//! ranking lists.
//!
//! Everything here is validated on construction and immutable afterwards.
//! Normalized quantities are fractions; percent only appears in reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ZeroDivisionPolicy};

pub const NORMALIZED_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Roster {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Roster {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

impl Roster {
    pub fn new<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::Empty("roster"));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if id.trim().is_empty() {
                return Err(Error::RosterMismatch(format!("empty staff id at row {i}")));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::RosterMismatch(format!("duplicate staff id '{id}'")));
            }
        }
        Ok(Self { ids, index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownStaff(id.to_string()))
    }

    /// Sub-roster on the given indices, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Result<Roster> {
        Roster::new(idx.iter().map(|&i| self.ids[i].clone()))
    }

    pub fn ensure_same(&self, other: &Roster, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::RosterMismatch(format!(
                "{what}: rosters differ ({} vs {} members)",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

/// Which side of the mirror a quantity lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Achievements,
    Rewards,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Achievements => "achievements",
            Channel::Rewards => "rewards",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySet {
    names: Vec<String>,
    kind: Channel,
}

impl CategorySet {
    pub fn new<S: Into<String>>(kind: Channel, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Empty("category set"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.trim().is_empty() {
                return Err(Error::CategoryMismatch(format!("empty category label at {i}")));
            }
            if names[..i].contains(n) {
                return Err(Error::CategoryMismatch(format!("duplicate category '{n}'")));
            }
        }
        Ok(Self { names, kind })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self) -> Channel {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ensure_same(&self, other: &CategorySet, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::CategoryMismatch(format!(
                "{what}: expected {:?} ({}), got {:?} ({})",
                self.names, self.kind, other.names, other.kind
            )));
        }
        Ok(())
    }
}

/// Non-negative per-person evidence (achievement counts or rewards).
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceMatrix {
    roster: Roster,
    categories: CategorySet,
    values: Matrix,
}

impl EvidenceMatrix {
    pub fn new(roster: Roster, categories: CategorySet, values: Matrix) -> Result<Self> {
        if values.shape() != (roster.len(), categories.len()) {
            return Err(Error::Shape {
                op: "evidence",
                left: (roster.len(), categories.len()),
                right: values.shape(),
            });
        }
        values.check_non_negative()?;
        Ok(Self {
            roster,
            categories,
            values,
        })
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn categories(&self) -> &CategorySet {
        &self.categories
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn kind(&self) -> Channel {
        self.categories.kind
    }
}

fn check_weights(context: &str, weights: &[f64], tolerance: f64) -> Result<f64> {
    for (j, &w) in weights.iter().enumerate() {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidWeights {
                context: context.to_string(),
                reason: format!("weight {j} is {w}"),
            });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::InvalidWeights {
            context: context.to_string(),
            reason: format!("weights sum to {sum}, expected 1 within {tolerance}"),
        });
    }
    // sums off by rounding alone are left as typed
    Ok(if (sum - 1.0).abs() <= 1e-15 { 1.0 } else { sum })
}

/// A value system: non-negative weights over a category set summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    categories: CategorySet,
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(categories: CategorySet, weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(categories, weights, NORMALIZED_TOLERANCE, "weights")
    }

    /// Accepts a sum within `tolerance` of 1 and rescales to sum exactly to 1.
    pub fn with_tolerance(
        categories: CategorySet,
        weights: Vec<f64>,
        tolerance: f64,
        context: &str,
    ) -> Result<Self> {
        if weights.len() != categories.len() {
            return Err(Error::InvalidWeights {
                context: context.to_string(),
                reason: format!(
                    "{} weights for {} categories",
                    weights.len(),
                    categories.len()
                ),
            });
        }
        let sum = check_weights(context, &weights, tolerance)?;
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self {
            categories,
            weights,
        })
    }

    pub fn categories(&self) -> &CategorySet {
        &self.categories
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn as_row(&self) -> Matrix {
        Matrix::row_vector(&self.weights)
    }
}

/// One value system per staff member, row order following the roster.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    roster: Roster,
    categories: CategorySet,
    rows: Matrix,
}

impl WeightMatrix {
    pub fn new(roster: Roster, categories: CategorySet, rows: Matrix) -> Result<Self> {
        Self::with_tolerance(roster, categories, rows, NORMALIZED_TOLERANCE)
    }

    pub fn with_tolerance(
        roster: Roster,
        categories: CategorySet,
        rows: Matrix,
        tolerance: f64,
    ) -> Result<Self> {
        if rows.shape() != (roster.len(), categories.len()) {
            return Err(Error::Shape {
                op: "weight matrix",
                left: (roster.len(), categories.len()),
                right: rows.shape(),
            });
        }
        let mut out = Matrix::zeros(rows.rows(), rows.cols());
        for i in 0..rows.rows() {
            let ctx = format!("staff '{}'", roster.id(i));
            let sum = check_weights(&ctx, rows.row(i), tolerance)?;
            for j in 0..rows.cols() {
                out[(i, j)] = rows[(i, j)] / sum;
            }
        }
        Ok(Self {
            roster,
            categories,
            rows: out,
        })
    }

    pub fn from_vectors(roster: Roster, rows: &[WeightVector]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("weight matrix"))?;
        let categories = first.categories.clone();
        let mut data = Vec::with_capacity(rows.len() * categories.len());
        for r in rows {
            categories.ensure_same(&r.categories, "weight matrix row")?;
            data.extend_from_slice(&r.weights);
        }
        let m = Matrix::from_vec(rows.len(), categories.len(), data)?;
        Self::new(roster, categories, m)
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn categories(&self) -> &CategorySet {
        &self.categories
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rows
    }

    pub fn row(&self, i: usize) -> WeightVector {
        WeightVector {
            categories: self.categories.clone(),
            weights: self.rows.row(i).to_vec(),
        }
    }

    pub fn row_of(&self, id: &str) -> Result<WeightVector> {
        Ok(self.row(self.roster.require(id)?))
    }

    /// Copy with one person's value system replaced.
    pub fn with_row(&self, id: &str, weights: &WeightVector) -> Result<Self> {
        self.categories.ensure_same(&weights.categories, "weight patch")?;
        let i = self.roster.require(id)?;
        let mut rows = self.rows.clone();
        for (j, &w) in weights.weights.iter().enumerate() {
            rows[(i, j)] = w;
        }
        Ok(Self {
            roster: self.roster.clone(),
            categories: self.categories.clone(),
            rows,
        })
    }
}

/// Where a score vector or list came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub procedure: String,
    pub channel: Option<Channel>,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(procedure: impl Into<String>, channel: Option<Channel>) -> Self {
        Self {
            procedure: procedure.into(),
            channel,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.procedure)?;
        if let Some(c) = self.channel {
            write!(f, "[{c}]")?;
        }
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", p.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    roster: Roster,
    scores: Vec<f64>,
    normalized: bool,
    degenerate: bool,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

impl ScoreVector {
    pub fn raw(roster: Roster, scores: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if scores.len() != roster.len() {
            return Err(Error::Shape {
                op: "score vector",
                left: (roster.len(), 1),
                right: (scores.len(), 1),
            });
        }
        if let Some((i, &v)) = scores.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::NegativeEntry {
                row: i,
                col: 0,
                value: v,
            });
        }
        Ok(Self {
            roster,
            scores,
            normalized: false,
            degenerate: false,
            provenance,
            warnings: Vec::new(),
        })
    }

    /// Wraps shares that are already normalized (sum 1, or all zero).
    pub fn shares(roster: Roster, scores: Vec<f64>, provenance: Provenance) -> Result<Self> {
        let mut v = Self::raw(roster, scores, provenance)?;
        let sum: f64 = v.scores.iter().sum();
        if sum == 0.0 {
            v.degenerate = true;
        } else if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized("score shares"));
        }
        v.normalized = true;
        Ok(v)
    }

    /// Marks `v` as shares without rescaling; a total away from 1 is flagged.
    pub(crate) fn assume_shares(mut v: ScoreVector) -> ScoreVector {
        let sum: f64 = v.scores.iter().sum();
        v.normalized = true;
        v.degenerate = (sum - 1.0).abs() > 1e-6;
        v
    }

    /// Each score divided by the total.
    pub fn normalized(&self) -> ScoreVector {
        let sum: f64 = self.scores.iter().sum();
        let mut out = self.clone();
        out.normalized = true;
        if sum > 0.0 {
            out.scores.iter_mut().for_each(|s| *s /= sum);
        } else {
            out.degenerate = true;
            out.warnings.push("all scores are zero".to_string());
        }
        out
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn score_of(&self, id: &str) -> Result<f64> {
        Ok(self.scores[self.roster.require(id)?])
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn channel(&self) -> Option<Channel> {
        self.provenance.channel
    }
}

/// How equal scores are ordered inside a ranking list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Lexicographically smaller staff id first.
    #[default]
    AscendingId,
    /// Earlier roster position first; used when a list is derived from an
    /// already ordered one.
    SourceOrder,
}

impl TieRule {
    pub fn as_str(self) -> &'static str {
        match self {
            TieRule::AscendingId => "ascending_id",
            TieRule::SourceOrder => "source_order",
        }
    }
}

/// Whether entry scores are the procedure's own shares or rank-derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreBasis {
    Native,
    /// `(m - position + 1) / (m (m + 1) / 2)`; for lists built by reordering.
    Positional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub staff_id: String,
    pub score: f64,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingList {
    entries: Vec<RankEntry>,
    tie_rule: TieRule,
    tie_tolerance: f64,
    basis: ScoreBasis,
    pub provenance: Provenance,
}

impl RankingList {
    /// Orders `scores` descending. Scores within `tolerance` of their
    /// neighbour are chained into one tie group and ordered by `tie_rule`.
    pub fn from_scores(
        scores: &ScoreVector,
        tie_rule: TieRule,
        tolerance: f64,
    ) -> RankingList {
        let roster = scores.roster();
        let s = scores.scores();
        let tie_key = |a: usize, b: usize| match tie_rule {
            TieRule::AscendingId => roster.id(a).cmp(roster.id(b)),
            TieRule::SourceOrder => a.cmp(&b),
        };
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then_with(|| tie_key(a, b)));
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && (s[order[end - 1]] - s[order[end]]).abs() <= tolerance {
                end += 1;
            }
            order[start..end].sort_by(|&a, &b| tie_key(a, b));
            start = end;
        }
        let entries = order
            .iter()
            .enumerate()
            .map(|(p, &i)| RankEntry {
                staff_id: roster.id(i).to_string(),
                score: s[i],
                position: p + 1,
            })
            .collect();
        RankingList {
            entries,
            tie_rule,
            tie_tolerance: tolerance,
            basis: ScoreBasis::Native,
            provenance: scores.provenance.clone(),
        }
    }

    /// A list given directly as an order; scores are positional shares.
    pub fn from_order(order: Vec<String>, provenance: Provenance) -> Result<RankingList> {
        // validates uniqueness
        Roster::new(order.iter().cloned())?;
        let m = order.len() as f64;
        let total = m * (m + 1.0) / 2.0;
        let entries = order
            .into_iter()
            .enumerate()
            .map(|(p, id)| RankEntry {
                staff_id: id,
                score: (m - p as f64) / total,
                position: p + 1,
            })
            .collect();
        Ok(RankingList {
            entries,
            tie_rule: TieRule::SourceOrder,
            tie_tolerance: 0.0,
            basis: ScoreBasis::Positional,
            provenance,
        })
    }

    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tie_rule(&self) -> TieRule {
        self.tie_rule
    }

    pub fn tie_tolerance(&self) -> f64 {
        self.tie_tolerance
    }

    pub fn basis(&self) -> ScoreBasis {
        self.basis
    }

    pub fn order(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.staff_id.clone()).collect()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.staff_id.as_str())
    }

    /// 1-based position of `id`.
    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.staff_id == id)
            .map(|e| e.position)
    }

    /// Positions aligned to `roster` order.
    pub fn positions(&self, roster: &Roster) -> Result<Vec<usize>> {
        if self.len() != roster.len() {
            return Err(Error::RosterMismatch(format!(
                "list has {} entries, roster has {}",
                self.len(),
                roster.len()
            )));
        }
        let mut pos = vec![0usize; roster.len()];
        for e in &self.entries {
            let i = roster
                .index_of(&e.staff_id)
                .ok_or_else(|| Error::RosterMismatch(format!("'{}' not in roster", e.staff_id)))?;
            pos[i] = e.position;
        }
        Ok(pos)
    }

    /// Entry scores as a roster-aligned normalized vector.
    pub fn score_vector(&self, roster: &Roster) -> Result<ScoreVector> {
        let mut s = vec![0.0; roster.len()];
        let pos = self.positions(roster)?;
        for (i, p) in pos.iter().enumerate() {
            s[i] = self.entries[p - 1].score;
        }
        let sum: f64 = s.iter().sum();
        let v = ScoreVector::raw(roster.clone(), s, self.provenance.clone())?;
        if sum > 0.0 && (sum - 1.0).abs() <= 1e-6 {
            ScoreVector::shares(v.roster.clone(), v.scores, v.provenance)
        } else {
            Ok(v.normalized())
        }
    }
}

/// Square "each assesses each" matrix; rows assess, columns are assessed.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentMatrix {
    roster: Roster,
    values: Matrix,
    normalized: bool,
    degenerate_rows: Vec<usize>,
    pub channel: Option<Channel>,
}

impl AssessmentMatrix {
    pub fn new(roster: Roster, values: Matrix, channel: Option<Channel>) -> Result<Self> {
        if values.shape() != (roster.len(), roster.len()) {
            return Err(Error::Shape {
                op: "assessment matrix",
                left: (roster.len(), roster.len()),
                right: values.shape(),
            });
        }
        values.check_non_negative()?;
        Ok(Self {
            roster,
            values,
            normalized: false,
            degenerate_rows: Vec::new(),
            channel,
        })
    }

    /// Accepts a matrix whose rows already sum to 1 (or are all zero).
    pub fn normalized_from(roster: Roster, values: Matrix, channel: Option<Channel>, tolerance: f64) -> Result<Self> {
        let mut a = Self::new(roster, values, channel)?;
        for (i, s) in a.values.row_sums().into_iter().enumerate() {
            if s == 0.0 {
                a.degenerate_rows.push(i);
            } else if (s - 1.0).abs() > tolerance {
                return Err(Error::NotNormalized("assessment matrix rows"));
            }
        }
        a.normalized = true;
        Ok(a)
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.values.row_normalize()?;
        Ok(Self {
            roster: self.roster.clone(),
            values: n.matrix,
            normalized: true,
            degenerate_rows: n.degenerate_rows,
            channel: self.channel,
        })
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn degenerate_rows(&self) -> &[usize] {
        &self.degenerate_rows
    }

    pub fn get(&self, assessor: &str, assessed: &str) -> Result<f64> {
        Ok(self.values[(self.roster.require(assessor)?, self.roster.require(assessed)?)])
    }
}

/// Evidence plus both value systems for one side of the mirror.
#[derive(Debug, Clone, Copy)]
pub struct EvidenceChannel<'a> {
    pub kind: Channel,
    pub evidence: &'a EvidenceMatrix,
    pub admin_weights: &'a WeightVector,
    pub personnel_weights: &'a WeightMatrix,
}

impl<'a> EvidenceChannel<'a> {
    pub fn new(
        evidence: &'a EvidenceMatrix,
        admin_weights: &'a WeightVector,
        personnel_weights: &'a WeightMatrix,
    ) -> Result<Self> {
        let cats = evidence.categories();
        cats.ensure_same(admin_weights.categories(), "admin weights")?;
        cats.ensure_same(personnel_weights.categories(), "personnel weights")?;
        evidence
            .roster()
            .ensure_same(personnel_weights.roster(), "personnel weights")?;
        Ok(Self {
            kind: cats.kind(),
            evidence,
            admin_weights,
            personnel_weights,
        })
    }

    pub fn roster(&self) -> &'a Roster {
        self.evidence.roster()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    #[default]
    Half,
    GoldenRatio,
}

/// Tunables carried with a scenario. Nothing in the engine reads a hidden
/// constant where one of these applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub tie_rule: TieRule,
    pub tie_tolerance: f64,
    pub zero_policy: ZeroDivisionPolicy,
    pub league_count: usize,
    pub swap_count: usize,
    pub split: SplitRule,
    pub cluster_k: usize,
    pub cluster_seed: u64,
    pub weight_tolerance: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            tie_rule: TieRule::AscendingId,
            tie_tolerance: 1e-9,
            zero_policy: ZeroDivisionPolicy::Strict,
            league_count: 3,
            swap_count: 3,
            split: SplitRule::Half,
            cluster_k: 3,
            cluster_seed: 42,
            weight_tolerance: 1e-6,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tie_tolerance >= 0.0 && self.tie_tolerance.is_finite()) {
            return Err(Error::Invalid(format!("tie_tolerance {} must be >= 0", self.tie_tolerance)));
        }
        if !(self.weight_tolerance >= 0.0 && self.weight_tolerance < 1.0) {
            return Err(Error::Invalid(format!(
                "weight_tolerance {} must be in [0, 1)",
                self.weight_tolerance
            )));
        }
        if let ZeroDivisionPolicy::Epsilon(e) = self.zero_policy {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::Invalid(format!("epsilon {e} must be positive")));
            }
        }
        if self.league_count == 0 {
            return Err(Error::Invalid("league_count must be >= 1".into()));
        }
        if self.cluster_k == 0 {
            return Err(Error::Invalid("cluster_k must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewardSide {
    pub evidence: EvidenceMatrix,
    pub admin_weights: WeightVector,
    pub personnel_weights: WeightMatrix,
}

/// The full evidence bundle plus configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    roster: Roster,
    achievements: EvidenceMatrix,
    admin_achievement_weights: WeightVector,
    personnel_achievement_weights: WeightMatrix,
    rewards: Option<RewardSide>,
    config: ScenarioConfig,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        achievements: EvidenceMatrix,
        admin_achievement_weights: WeightVector,
        personnel_achievement_weights: WeightMatrix,
        rewards: Option<RewardSide>,
        config: ScenarioConfig,
    ) -> Result<Self> {
        config.validate()?;
        let roster = achievements.roster().clone();
        if achievements.kind() != Channel::Achievements {
            return Err(Error::CategoryMismatch("achievement matrix has reward categories".into()));
        }
        EvidenceChannel::new(
            &achievements,
            &admin_achievement_weights,
            &personnel_achievement_weights,
        )?;
        if let Some(r) = &rewards {
            if r.evidence.kind() != Channel::Rewards {
                return Err(Error::CategoryMismatch("reward matrix has achievement categories".into()));
            }
            roster.ensure_same(r.evidence.roster(), "rewards")?;
            EvidenceChannel::new(&r.evidence, &r.admin_weights, &r.personnel_weights)?;
        }
        Ok(Self {
            name: name.into(),
            roster,
            achievements,
            admin_achievement_weights,
            personnel_achievement_weights,
            rewards,
            config,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn achievements(&self) -> &EvidenceMatrix {
        &self.achievements
    }

    pub fn admin_achievement_weights(&self) -> &WeightVector {
        &self.admin_achievement_weights
    }

    pub fn personnel_achievement_weights(&self) -> &WeightMatrix {
        &self.personnel_achievement_weights
    }

    pub fn rewards(&self) -> Option<&RewardSide> {
        self.rewards.as_ref()
    }

    pub fn has_rewards(&self) -> bool {
        self.rewards.is_some()
    }

    pub fn channel(&self, kind: Channel) -> Result<EvidenceChannel<'_>> {
        match kind {
            Channel::Achievements => Ok(EvidenceChannel {
                kind,
                evidence: &self.achievements,
                admin_weights: &self.admin_achievement_weights,
                personnel_weights: &self.personnel_achievement_weights,
            }),
            Channel::Rewards => {
                let r = self.rewards.as_ref().ok_or(Error::MissingRewardChannel)?;
                Ok(EvidenceChannel {
                    kind,
                    evidence: &r.evidence,
                    admin_weights: &r.admin_weights,
                    personnel_weights: &r.personnel_weights,
                })
            }
        }
    }

    pub fn with_config(&self, config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let mut s = self.clone();
        s.config = config;
        Ok(s)
    }

    pub fn with_admin_weights(&self, kind: Channel, weights: WeightVector) -> Result<Self> {
        let mut s = self.clone();
        match kind {
            Channel::Achievements => {
                s.achievements.categories().ensure_same(weights.categories(), "admin weights")?;
                s.admin_achievement_weights = weights;
            }
            Channel::Rewards => {
                let r = s.rewards.as_mut().ok_or(Error::MissingRewardChannel)?;
                r.evidence.categories().ensure_same(weights.categories(), "admin weights")?;
                r.admin_weights = weights;
            }
        }
        Ok(s)
    }

    pub fn with_person_weights(&self, kind: Channel, id: &str, weights: &WeightVector) -> Result<Self> {
        let mut s = self.clone();
        match kind {
            Channel::Achievements => {
                s.personnel_achievement_weights = s.personnel_achievement_weights.with_row(id, weights)?;
            }
            Channel::Rewards => {
                let r = s.rewards.as_mut().ok_or(Error::MissingRewardChannel)?;
                r.personnel_weights = r.personnel_weights.with_row(id, weights)?;
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster(ids: &[&str]) -> Roster {
        Roster::new(ids.iter().copied()).unwrap()
    }

    #[test]
    fn roster_rejects_duplicates_and_blanks() {
        assert!(Roster::new(["a", "b", "a"]).is_err());
        assert!(Roster::new(["a", " "]).is_err());
        assert!(Roster::new(Vec::<String>::new()).is_err());
        let r = roster(&["x", "y"]);
        assert_eq!(r.index_of("y"), Some(1));
        assert!(matches!(r.require("z"), Err(Error::UnknownStaff(_))));
    }

    #[test]
    fn weights_renormalize_within_tolerance() {
        let c = CategorySet::new(Channel::Achievements, ["a", "b"]).unwrap();
        let w = WeightVector::with_tolerance(c.clone(), vec![0.5, 0.5000001], 1e-6, "t").unwrap();
        assert!((w.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(WeightVector::new(c.clone(), vec![0.5, 0.4]).is_err());
        assert!(WeightVector::new(c, vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn weight_matrix_names_bad_row() {
        let c = CategorySet::new(Channel::Achievements, ["a", "b"]).unwrap();
        let m = Matrix::from_rows(&[[0.5, 0.5], [0.6, 0.3]]).unwrap();
        let err = WeightMatrix::new(roster(&["p", "q"]), c, m).unwrap_err();
        assert!(err.to_string().contains("'q'"), "{err}");
    }

    #[test]
    fn ties_break_by_ascending_id_by_default() {
        let r = roster(&["D", "C", "B", "A"]);
        let s = ScoreVector::raw(r, vec![0.0, 1.0, 1.0, 1.0], Provenance::default()).unwrap();
        let list = RankingList::from_scores(&s, TieRule::AscendingId, 1e-9);
        assert_eq!(list.order(), ["A", "B", "C", "D"]);
        let list = RankingList::from_scores(&s, TieRule::SourceOrder, 1e-9);
        assert_eq!(list.order(), ["C", "B", "A", "D"]);
    }

    #[test]
    fn near_equal_scores_chain_into_one_tie_group() {
        let r = roster(&["b", "a", "c"]);
        let s = ScoreVector::raw(r, vec![1.0 + 1e-12, 1.0, 0.5], Provenance::default()).unwrap();
        let list = RankingList::from_scores(&s, TieRule::AscendingId, 1e-9);
        assert_eq!(list.order(), ["a", "b", "c"]);
        let exact = RankingList::from_scores(&s, TieRule::AscendingId, 0.0);
        assert_eq!(exact.order(), ["b", "a", "c"]);
    }

    #[test]
    fn positional_shares_sum_to_one() {
        let l = RankingList::from_order(vec!["x".into(), "y".into(), "z".into()], Provenance::default()).unwrap();
        let total: f64 = l.entries().iter().map(|e| e.score).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert_eq!(l.entries()[0].score, 0.5);
        assert!(RankingList::from_order(vec!["x".into(), "x".into()], Provenance::default()).is_err());
    }

    #[test]
    fn degenerate_scores_normalize_to_zero() {
        let s = ScoreVector::raw(roster(&["a", "b"]), vec![0.0, 0.0], Provenance::default()).unwrap();
        let n = s.normalized();
        assert!(n.is_degenerate());
        assert_eq!(n.scores(), &[0.0, 0.0]);
    }
}
