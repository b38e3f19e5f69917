//! Deterministic JSON, CSV and Markdown renderings of engine results.
//!
//! Every real number is written as a decimal string with 12 significant
//! digits. Percentages only appear in Markdown.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::format::{decimal12, percent};
use super::reconstruct::Reconstruction;
use crate::metrics::JusticeReport;
use crate::model::{Provenance, RankingList, ScoreBasis};
use crate::passion::PassionResult;
use crate::procedures::ComputedList;
use crate::stratification::{ClusterAssignment, DichotomyResult, LeaguePartition, RerankedLeagues};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format '{other}', expected json, csv or markdown")),
        }
    }
}

pub trait Report {
    fn to_json(&self) -> Value;
    fn to_csv(&self) -> String;
    fn to_markdown(&self) -> String;
}

pub fn emit_report(report: &dyn Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json()).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Csv => report.to_csv(),
        Format::Markdown => report.to_markdown(),
    }
}

pub fn num(v: f64) -> Value {
    Value::String(decimal12(v))
}

fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

fn provenance_json(p: &Provenance) -> Value {
    let params: Map<String, Value> = p
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    json!({
        "procedure": p.procedure,
        "channel": p.channel.map(|c| c.as_str()),
        "params": params,
    })
}

fn csv_line(fields: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn entries_json(list: &RankingList) -> Value {
    Value::Array(
        list.entries()
            .iter()
            .map(|e| json!({"position": e.position, "staff_id": e.staff_id, "score": num(e.score)}))
            .collect(),
    )
}

fn basis_str(b: ScoreBasis) -> &'static str {
    match b {
        ScoreBasis::Native => "native",
        ScoreBasis::Positional => "positional",
    }
}

fn ranking_json(list: &RankingList, code: Option<&str>, warnings: &[String]) -> Value {
    json!({
        "kind": "ranking",
        "list": code,
        "provenance": provenance_json(&list.provenance),
        "tie_rule": list.tie_rule().as_str(),
        "tie_tolerance": num(list.tie_tolerance()),
        "score_basis": basis_str(list.basis()),
        "entries": entries_json(list),
        "warnings": warnings,
    })
}

fn ranking_csv(list: &RankingList) -> String {
    let mut s = csv_line(&["position", "staff_id", "score"]);
    for e in list.entries() {
        s.push_str(&csv_line(&[&e.position.to_string(), &e.staff_id, &decimal12(e.score)]));
    }
    s
}

fn ranking_md(list: &RankingList, title: &str) -> String {
    let mut s = format!("### {title}\n\n");
    let share_header = match list.basis() {
        ScoreBasis::Native => "Share (%)",
        ScoreBasis::Positional => "Positional share (%)",
    };
    let _ = writeln!(s, "| Position | Staff | Score | {share_header} |");
    s.push_str("|---:|---|---:|---:|\n");
    for e in list.entries() {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} |",
            e.position,
            e.staff_id,
            decimal12(e.score),
            percent(e.score, 2)
        );
    }
    s
}

impl Report for RankingList {
    fn to_json(&self) -> Value {
        ranking_json(self, None, &[])
    }

    fn to_csv(&self) -> String {
        ranking_csv(self)
    }

    fn to_markdown(&self) -> String {
        ranking_md(self, &self.provenance.to_string())
    }
}

impl Report for ComputedList {
    fn to_json(&self) -> Value {
        ranking_json(&self.list, Some(&self.code), &self.shares.warnings)
    }

    fn to_csv(&self) -> String {
        ranking_csv(&self.list)
    }

    fn to_markdown(&self) -> String {
        let mut s = ranking_md(&self.list, &format!("{}: {}", self.code, self.list.provenance));
        for w in &self.shares.warnings {
            let _ = writeln!(s, "\n> warning: {w}");
        }
        s
    }
}

impl Report for DichotomyResult {
    fn to_json(&self) -> Value {
        let mut v = ranking_json(&self.list, None, &[]);
        v["first_winners"] = json!(self.first_winners);
        v["depth"] = json!(self.depth);
        v
    }

    fn to_csv(&self) -> String {
        ranking_csv(&self.list)
    }

    fn to_markdown(&self) -> String {
        let mut s = ranking_md(&self.list, &self.list.provenance.to_string());
        let _ = writeln!(
            s,
            "\nFirst-split winners: {}. Levels: {}.",
            self.first_winners.join(", "),
            self.depth
        );
        s
    }
}

/// Leagues after re-ranking, optionally followed by a social lift.
#[derive(Debug, Clone, PartialEq)]
pub struct LeagueReport {
    pub partition: LeaguePartition,
    pub reranked: RerankedLeagues,
    pub lifted: Option<RankingList>,
}

impl Report for LeagueReport {
    fn to_json(&self) -> Value {
        let leagues: Vec<Value> = self
            .reranked
            .leagues
            .iter()
            .enumerate()
            .map(|(i, members)| {
                json!({
                    "index": i,
                    "original_leader": self.partition.leaders[i],
                    "original_order": self.partition.leagues[i],
                    "reranked_order": members,
                    "reranked_shares": nums(&self.reranked.league_shares[i]),
                })
            })
            .collect();
        json!({
            "kind": "leagues",
            "source": provenance_json(&self.partition.source),
            "leagues": leagues,
            "reranked": ranking_json(&self.reranked.list, None, &[]),
            "social_lift": self.lifted.as_ref().map(|l| ranking_json(l, None, &[])),
        })
    }

    fn to_csv(&self) -> String {
        let mut s = csv_line(&["league", "league_position", "staff_id", "share", "overall_position", "lifted_position"]);
        let mut overall = 0;
        for (i, members) in self.reranked.leagues.iter().enumerate() {
            for (p, id) in members.iter().enumerate() {
                overall += 1;
                let lifted = self
                    .lifted
                    .as_ref()
                    .and_then(|l| l.position_of(id))
                    .map(|p| p.to_string())
                    .unwrap_or_default();
                s.push_str(&csv_line(&[
                    &i.to_string(),
                    &(p + 1).to_string(),
                    id,
                    &decimal12(self.reranked.league_shares[i][p]),
                    &overall.to_string(),
                    &lifted,
                ]));
            }
        }
        s
    }

    fn to_markdown(&self) -> String {
        let mut s = String::from("### Leagues\n\n| League | Leader | Re-ranked order |\n|---:|---|---|\n");
        for (i, members) in self.reranked.leagues.iter().enumerate() {
            let _ = writeln!(s, "| {} | {} | {} |", i + 1, self.partition.leaders[i], members.join(", "));
        }
        if let Some(l) = &self.lifted {
            s.push('\n');
            s.push_str(&ranking_md(l, "Social lift"));
        }
        s
    }
}

impl Report for ClusterAssignment {
    fn to_json(&self) -> Value {
        let clusters: Vec<Value> = self
            .clusters
            .iter()
            .enumerate()
            .map(|(i, members)| {
                json!({
                    "members": members,
                    "centroid": nums(&self.centroids[i]),
                    "typical_representatives": self.typical_representatives[i],
                })
            })
            .collect();
        json!({
            "kind": "clusters",
            "seed": self.seed,
            "iterations": self.iterations,
            "objective_trace": nums(&self.objective_trace),
            "clusters": clusters,
        })
    }

    fn to_csv(&self) -> String {
        let mut s = csv_line(&["cluster", "staff_id", "typical"]);
        for (i, members) in self.clusters.iter().enumerate() {
            for id in members {
                let typical = self.typical_representatives[i].contains(id);
                s.push_str(&csv_line(&[&(i + 1).to_string(), id, if typical { "yes" } else { "no" }]));
            }
        }
        s
    }

    fn to_markdown(&self) -> String {
        let mut s = format!("### Value-system clusters (seed {})\n\n", self.seed);
        s.push_str("| Cluster | Members | Typical representatives |\n|---:|---|---|\n");
        for (i, members) in self.clusters.iter().enumerate() {
            let _ = writeln!(
                s,
                "| {} | {} | {} |",
                i + 1,
                members.join("; "),
                self.typical_representatives[i].join("; ")
            );
        }
        s
    }
}

/// A single distance between two lists.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub metric: String,
    pub list_a: String,
    pub list_b: String,
    pub value: f64,
    /// Raw place difference and its maximum, for place metrics.
    pub place_diff: Option<(u64, u64)>,
}

impl Report for ComparisonReport {
    fn to_json(&self) -> Value {
        json!({
            "kind": "comparison",
            "metric": self.metric,
            "list_a": self.list_a,
            "list_b": self.list_b,
            "value": num(self.value),
            "place_diff": self.place_diff.map(|p| p.0),
            "max_place_diff": self.place_diff.map(|p| p.1),
        })
    }

    fn to_csv(&self) -> String {
        let mut s = csv_line(&["metric", "list_a", "list_b", "value"]);
        s.push_str(&csv_line(&[&self.metric, &self.list_a, &self.list_b, &decimal12(self.value)]));
        s
    }

    fn to_markdown(&self) -> String {
        let mut s = format!(
            "### {}({}, {})\n\nValue: {}\n",
            self.metric.to_uppercase(),
            self.list_a,
            self.list_b,
            decimal12(self.value)
        );
        if let Some((d, m)) = self.place_diff {
            let _ = writeln!(s, "Place difference: {d} of at most {m}");
        }
        s
    }
}

impl Report for JusticeReport {
    fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairwise
            .iter()
            .map(|p| {
                json!({
                    "achievement_list": p.achievement_list,
                    "reward_list": p.reward_list,
                    "injustice": num(p.value),
                    "interpretation": p.interpretation.map(|i| i.key()),
                })
            })
            .collect();
        json!({
            "kind": "justice",
            "pairwise": pairs,
            "overall": num(self.overall.value),
            "overall_all_zero": self.overall.all_zero,
            "overall_interpretation": crate::metrics::Interpretation::PoorEmotionalClimate.key(),
        })
    }

    fn to_csv(&self) -> String {
        let mut s = csv_line(&["achievement_list", "reward_list", "injustice", "interpretation"]);
        for p in &self.pairwise {
            s.push_str(&csv_line(&[
                &p.achievement_list,
                &p.reward_list,
                &decimal12(p.value),
                p.interpretation.map_or("", |i| i.key()),
            ]));
        }
        s.push_str(&csv_line(&[
            "OVERALL",
            "",
            &decimal12(self.overall.value),
            crate::metrics::Interpretation::PoorEmotionalClimate.key(),
        ]));
        s
    }

    fn to_markdown(&self) -> String {
        let mut s = String::from("### Injustice\n\n| Achievement list | Reward list | Injustice | High value suggests |\n|---|---|---:|---|\n");
        for p in &self.pairwise {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                p.achievement_list,
                p.reward_list,
                decimal12(p.value),
                p.interpretation.map_or("", |i| i.text())
            );
        }
        let _ = writeln!(
            s,
            "| OVERALL | | {} | {} |",
            decimal12(self.overall.value),
            crate::metrics::Interpretation::PoorEmotionalClimate.text()
        );
        s
    }
}

impl Report for PassionResult {
    fn to_json(&self) -> Value {
        let roster = self.wp.roster();
        let rows: Vec<Value> = self.wp.values().row_iter().map(nums).collect();
        let mut policy = serde_json::to_value(self.zero_policy).expect("policy serializes");
        if let Some(e) = policy.get_mut("epsilon") {
            *e = num(e.as_f64().unwrap_or_default());
        }
        let degenerate: Vec<&str> = self.wp.degenerate_rows().iter().map(|&i| roster.id(i)).collect();
        json!({
            "kind": "passion",
            "zero_policy": policy,
            "staff": roster.ids(),
            "wp": rows,
            "degenerate_rows": degenerate,
            "average": nums(self.average.scores()),
            "ranking": ranking_json(&self.ranking, None, &self.average.warnings),
        })
    }

    fn to_csv(&self) -> String {
        let roster = self.wp.roster();
        let mut header = vec!["assessor".to_string()];
        header.extend(roster.ids().iter().cloned());
        let h: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut s = csv_line(&h);
        for (i, row) in self.wp.values().row_iter().enumerate() {
            let mut rec = vec![roster.id(i).to_string()];
            rec.extend(row.iter().map(|&v| decimal12(v)));
            let r: Vec<&str> = rec.iter().map(String::as_str).collect();
            s.push_str(&csv_line(&r));
        }
        let mut rec = vec!["Average".to_string()];
        rec.extend(self.average.scores().iter().map(|&v| decimal12(v)));
        let r: Vec<&str> = rec.iter().map(String::as_str).collect();
        s.push_str(&csv_line(&r));
        s
    }

    fn to_markdown(&self) -> String {
        ranking_md(&self.ranking, "Work passion ranking")
    }
}

/// A reconstruction together with the label of what was fitted.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub fits: Vec<(String, Reconstruction)>,
}

impl Report for ReconstructionReport {
    fn to_json(&self) -> Value {
        let fits: Vec<Value> = self
            .fits
            .iter()
            .map(|(label, r)| {
                json!({
                    "label": label,
                    "categories": r.weights.categories().names(),
                    "weights": nums(r.weights.weights()),
                    "raw_sum": num(r.raw_sum),
                    "max_residual": num(r.max_residual),
                })
            })
            .collect();
        json!({"kind": "reconstruction", "fits": fits})
    }

    /// A labeled weight table, loadable as a bundle weight file.
    fn to_csv(&self) -> String {
        let Some((_, first)) = self.fits.first() else {
            return String::new();
        };
        let mut header = vec!["staff".to_string()];
        header.extend(first.weights.categories().names().iter().cloned());
        let h: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut s = csv_line(&h);
        for (label, r) in &self.fits {
            let mut rec = vec![label.clone()];
            rec.extend(r.weights.weights().iter().map(|w| format!("{w}")));
            let refs: Vec<&str> = rec.iter().map(String::as_str).collect();
            s.push_str(&csv_line(&refs));
        }
        s
    }

    fn to_markdown(&self) -> String {
        let mut s = String::from("### Reconstructed value systems\n\n| Label | Weights | Sum before rescaling | Max residual |\n|---|---|---:|---:|\n");
        for (label, r) in &self.fits {
            let w: Vec<String> = r
                .weights
                .categories()
                .names()
                .iter()
                .zip(r.weights.weights())
                .map(|(c, w)| format!("{c}={}", decimal12(*w)))
                .collect();
            let _ = writeln!(
                s,
                "| {label} | {} | {} | {} |",
                w.join(", "),
                decimal12(r.raw_sum),
                decimal12(r.max_residual)
            );
        }
        s
    }
}
