//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! individual checks indented below it, and exits non-zero if any criterion
//! fails. Tolerances are the contractual ones; nothing here is loosened to
//! make a check pass.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use evirank_core::io::reconstruct_weights;
use evirank_core::metrics::{max_place_diff, place_diff, place_distance};
use evirank_core::passion::passion_ranking;
use evirank_core::procedures::{canonical_pairs, compute_list, justice_report, Procedure, ProcedureOptions};
use evirank_core::ranking::{
    administrative_scores, democratic_assessment, leader_compromise, normalize_and_rank,
    self_assessment_matrix, weighted_democracy,
};
use evirank_core::stratification::{cluster_value_systems, form_leagues};
use evirank_core::{AssessmentMatrix, Channel, Matrix, RankingList, Result, Scenario, TieRule};
use reproduction::{fixtures, golden, properties, reference};

/// Slack for binary representation of printed decimals.
const REPR: f64 = 1e-9;

#[derive(Default)]
struct Checks {
    lines: Vec<(bool, String)>,
}

impl Checks {
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.lines.push((ok, detail.into()));
    }

    /// Largest deviation of `got` from `want`, with the ids beyond `tol`.
    fn within(&mut self, what: &str, ids: &[String], got: &[f64], want: &[f64], tol: f64) {
        let mut worst = 0.0f64;
        let mut bad = Vec::new();
        for ((id, g), w) in ids.iter().zip(got).zip(want) {
            let d = (g - w).abs();
            worst = worst.max(d);
            if d > tol + REPR {
                bad.push(format!("{id} {g:.4} vs {w:.4}"));
            }
        }
        let detail = if bad.is_empty() {
            format!("{what}: max deviation {worst:.5} <= {tol}")
        } else {
            format!("{what}: max deviation {worst:.5} > {tol} ({})", bad.join("; "))
        };
        self.check(bad.is_empty(), detail);
    }

    fn same_order(&mut self, what: &str, got: &[String], want: &[String]) {
        let ok = got == want;
        let detail = if ok {
            format!("{what}: {} positions identical", want.len())
        } else {
            let first = got.iter().zip(want).position(|(a, b)| a != b).unwrap_or(0);
            format!(
                "{what}: first difference at position {} (got {}, printed {})",
                first + 1,
                got.get(first).map_or("-", String::as_str),
                want.get(first).map_or("-", String::as_str)
            )
        };
        self.check(ok, detail);
    }

    fn equal<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let ok = got == want;
        self.check(ok, format!("{what}: {got:?} (target {want:?})"));
    }
}

struct Suite {
    failed: usize,
    passed: usize,
}

impl Suite {
    fn criterion(&mut self, name: &str, body: impl FnOnce(&mut Checks) -> Result<()>) {
        let mut c = Checks::default();
        if let Err(e) = body(&mut c) {
            c.check(false, format!("error: {e}"));
        }
        let ok = !c.lines.is_empty() && c.lines.iter().all(|(ok, _)| *ok);
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        for (ok, line) in &c.lines {
            println!("       {} {line}", if *ok { "ok  " } else { "MISS" });
        }
    }
}

fn pct(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x * 100.0).collect()
}

fn top(list: &RankingList, n: usize) -> Vec<String> {
    list.order().into_iter().take(n).collect()
}

fn reconstruction(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let rp = reference::achievements()?;
    let observed = golden::column("admin_scores.tsv", rp.roster())?;
    let fit = reconstruct_weights(&rp, &observed)?;
    let elapsed = start.elapsed();
    c.check(
        (0.99..=1.01).contains(&fit.raw_sum),
        format!("weight sum before rescaling {:.5} in [0.99, 1.01]", fit.raw_sum),
    );
    c.within(
        "published administrative scores",
        rp.roster().ids(),
        &fit.residuals.iter().zip(&observed).map(|(r, o)| o + r).collect::<Vec<_>>(),
        &observed,
        0.01,
    );
    let w_hi = fit.weights.weights()[0];
    let anchor = observed[rp.roster().require("Age")?] / 11.0;
    c.check(
        (w_hi - anchor).abs() <= 0.01 && (w_hi - 0.38).abs() <= 0.01,
        format!("HI weight {w_hi:.4}, single-category anchor {anchor:.4}"),
    );
    c.check(
        elapsed < Duration::from_secs(1),
        format!("load and fit in {:.1} ms (< 1 s)", elapsed.as_secs_f64() * 1e3),
    );
    let w: Vec<String> = fit.weights.weights().iter().map(|x| format!("{x:.4}")).collect();
    c.check(true, format!("recovered weights ({})", w.join(", ")));
    Ok(())
}

fn administrative(c: &mut Checks, s: &Scenario) -> Result<()> {
    let ch = s.channel(Channel::Achievements)?;
    let cfg = s.config();
    let (aa, list) = normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
    let ids = s.roster().ids();
    c.within(
        "shares (percentage points)",
        ids,
        &pct(aa.scores()),
        &pct(&golden::shares("admin_shares_pct.tsv", s.roster())?),
        0.01,
    );
    c.same_order("administrative order", &list.order(), &golden::list("administrative_by_share")?.order());
    Ok(())
}

fn self_assessment(c: &mut Checks, s: &Scenario) -> Result<()> {
    let ch = s.channel(Channel::Achievements)?;
    let cfg = s.config();
    let ids = s.roster().ids();
    let sa = self_assessment_matrix(&ch)?;
    c.within(
        "raw row totals",
        ids,
        &sa.row_totals,
        &golden::column("self_assessment_totals.tsv", s.roster())?,
        0.5,
    );

    let printed = golden::square("self_assessment_normalized_pct.tsv", s.roster())?;
    let mut worst = (0.0f64, 0, 0);
    for (i, row) in printed.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            let d = (sa.normalized.values()[(i, j)] * 100.0 - p).abs();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    c.check(
        worst.0 <= 0.02 + REPR,
        format!(
            "normalized matrix: max cell deviation {:.5} pp at ({}, {}) <= 0.02",
            worst.0, ids[worst.1], ids[worst.2]
        ),
    );

    let da = democratic_assessment(&sa.normalized)?;
    c.within("democratic shares", ids, &pct(da.scores()), &pct(&golden::shares("democratic_pct.tsv", s.roster())?), 0.02);
    let da_list = RankingList::from_scores(&da, cfg.tie_rule, cfg.tie_tolerance);
    c.same_order("democratic order", &da_list.order(), &golden::list("democratic_by_share")?.order());

    let aa = administrative_scores(&ch)?.normalized();
    let cr = weighted_democracy(&aa, &sa.normalized)?;
    c.within("weighted democracy shares", ids, &pct(cr.scores()), &pct(&golden::shares("compromise_pct.tsv", s.roster())?), 0.02);
    let cr_list = RankingList::from_scores(&cr, cfg.tie_rule, cfg.tie_tolerance);
    c.same_order("weighted democracy order", &cr_list.order(), &golden::list("compromise")?.order());

    for (leader, file, top2) in [
        ("Bod", "leader_bod_pct.tsv", ["Avr", "Bod"]),
        ("Avr", "leader_avr_pct.tsv", ["Bod", "Avr"]),
        ("Chu", "leader_chu_pct.tsv", ["Bod", "Avr"]),
    ] {
        let crl = leader_compromise(&sa.normalized, leader)?;
        c.within(&format!("leader {leader} shares"), ids, &pct(crl.scores()), &pct(&golden::shares(file, s.roster())?), 0.02);
        let list = RankingList::from_scores(&crl, cfg.tie_rule, cfg.tie_tolerance);
        c.equal(&format!("leader {leader} top two"), top(&list, 2), top2.map(String::from).to_vec());
    }
    Ok(())
}

fn leagues_and_lift(c: &mut Checks, s: &Scenario) -> Result<()> {
    let cfg = s.config();
    let ch = s.channel(Channel::Achievements)?;
    let (_, admin) = normalize_and_rank(&administrative_scores(&ch)?, cfg.tie_rule, cfg.tie_tolerance);
    let partition = form_leagues(&admin, 3)?;
    c.equal("league leaders", partition.leaders.clone(), vec!["Bod".into(), "Chu".into(), "Mas".into()]);
    c.equal("league sizes", partition.sizes(), vec![10, 10, 10]);
    let slr = compute_list(s, Procedure::SocialLift, Channel::Achievements, &ProcedureOptions::default())?;
    c.same_order("social lift order, 3 swapped per boundary", &slr.list.order(), &golden::list("social_lift")?.order());
    Ok(())
}

fn metrics(c: &mut Checks, s: &Scenario) -> Result<()> {
    let admin = golden::list("administrative")?;
    let demo = golden::list("democratic")?;
    let lift = golden::list("social_lift")?;
    for (what, a, b, diff, dist) in [
        ("administrative vs democratic", &admin, &demo, 16, 0.0356),
        ("administrative vs social lift", &admin, &lift, 52, 0.1156),
        ("democratic vs social lift", &demo, &lift, 50, 0.111),
    ] {
        c.equal(&format!("place difference, {what}"), place_diff(a, b)?, diff);
        let d = place_distance(a, b)?;
        c.check((d - dist).abs() <= 1e-3, format!("place distance, {what}: {d:.4} (target {dist} within 1e-3)"));
    }
    c.equal("max place difference for 30", max_place_diff(30), 450);
    let cr = compute_list(s, Procedure::WeightedDemocracy, Channel::Achievements, &ProcedureOptions::default())?;
    let computed_admin = compute_list(s, Procedure::Administrative, Channel::Achievements, &ProcedureOptions::default())?;
    c.equal(
        "place difference, recomputed administrative vs weighted democracy",
        place_diff(&computed_admin.list, &cr.list)?,
        32,
    );
    Ok(())
}

fn passion_average(c: &mut Checks) -> Result<()> {
    let roster = reference::achievements()?.roster().clone();
    let printed = golden::square("passion_matrix_pct.tsv", &roster)?;
    let fractions: Vec<Vec<f64>> = printed.iter().map(|r| r.iter().map(|x| x / 100.0).collect()).collect();
    let worst_row = fractions
        .iter()
        .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    // printed rows are rounded to 0.01 pp, so they sum to 1 only roughly
    let wp = AssessmentMatrix::normalized_from(roster.clone(), Matrix::from_rows(&fractions)?, None, 0.01)?;
    c.check(true, format!("printed rows sum to 100 within {:.3} pp", worst_row * 100.0));
    let (avg, list) = passion_ranking(&wp, TieRule::AscendingId, 1e-9)?;
    c.within("column averages", roster.ids(), &pct(avg.scores()), &pct(&golden::shares("passion_average_pct.tsv", &roster)?), 0.02);
    c.same_order("top 10 of the passion list", &top(&list, 10), &top(&golden::list("passion")?, 10));
    Ok(())
}

fn property_suites(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let suites: [(&str, u32, fn(u32) -> std::result::Result<(), String>); 7] = [
        ("row normalization idempotent and scale invariant", 256, properties::row_normalization),
        ("ranking lists are bijections onto positions", 256, properties::ranking_bijection),
        ("dichotomy winners lead the list", 200, properties::dichotomy_prefix),
        ("score distance is a metric on shares", 500, properties::score_distance_axioms),
        ("overall injustice between mean and max", 500, properties::overall_between_mean_and_max),
        ("work passion invariant to evidence scaling", 256, properties::passion_scale_invariance),
        ("nested-loop oracle agreement, m <= 5", 1000, properties::brute_force_equivalence),
    ];
    for (name, cases, f) in suites {
        let t = Instant::now();
        match f(cases) {
            Ok(()) => c.check(true, format!("{name}: {cases} cases in {:.2} s", t.elapsed().as_secs_f64())),
            Err(e) => c.check(false, format!("{name}: {e}")),
        }
    }
    let total = start.elapsed();
    c.check(total < Duration::from_secs(60), format!("total {:.2} s (< 60 s)", total.as_secs_f64()));
    Ok(())
}

fn justice(c: &mut Checks) -> Result<()> {
    let third = 1.0 / 3.0;
    let cases = [
        (fixtures::desk4()?, [third, third, third, third], third),
        (fixtures::desk4_skewed()?, [third, third, third, 0.5], 7.0 / 18.0),
    ];
    let (a, r) = canonical_pairs();
    for (s, pairs, overall) in cases {
        let report = justice_report(&s, &a, &r, &ProcedureOptions::default())?;
        for ((ach, rew), want) in [("AA", "ABA"), ("AA", "DBA"), ("DA", "ABA"), ("DA", "DBA")].into_iter().zip(pairs) {
            let got = report.get(ach, rew).unwrap_or(f64::NAN);
            c.check((got - want).abs() <= 1e-9, format!("{} {ach}/{rew}: {got:.12} (hand {want:.12})", s.name()));
        }
        let got = report.overall.value;
        c.check((got - overall).abs() <= 1e-9, format!("{} overall: {got:.12} (hand {overall:.12})", s.name()));
    }
    Ok(())
}

/// Cluster membership is reported against the printed grouping but never gates.
fn clusters_report(s: &Scenario) -> Result<()> {
    let cfg = s.config();
    let got = cluster_value_systems(s.personnel_achievement_weights(), cfg.cluster_k, cfg.cluster_seed)?;
    let text = std::fs::read_to_string(golden::data_dir().join("value_system_clusters.tsv"))
        .map_err(|e| evirank_core::Error::Invalid(e.to_string()))?;
    let printed: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split('\t').skip(1).map(str::to_string).collect())
        .collect();
    println!("INFO value-system clusters (k = {}, seed = {}, {} iterations)", cfg.cluster_k, got.seed, got.iterations);
    let mut agree = 0;
    for (i, cl) in got.clusters.iter().enumerate() {
        let best = printed
            .iter()
            .map(|p| cl.iter().filter(|id| p.contains(id)).count())
            .max()
            .unwrap_or(0);
        agree += best;
        println!("       cluster {}: {} (best overlap with printed grouping {best}/{})", i + 1, cl.join(" "), cl.len());
    }
    println!("       {agree} of {} members share a cluster with their printed group", s.roster().len());
    Ok(())
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0, passed: 0 };
    let reference = match reference::reference() {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL reference scenario could not be built: {e}");
            return ExitCode::FAILURE;
        }
    };
    let s = &reference.scenario;
    suite.criterion("weight reconstruction from published scores", reconstruction);
    suite.criterion("administrative pipeline", |c| administrative(c, s));
    suite.criterion("self-assessment pipeline", |c| self_assessment(c, s));
    suite.criterion("leagues and social lift", |c| leagues_and_lift(c, s));
    suite.criterion("ranking-list metrics", |c| metrics(c, s));
    suite.criterion("work-passion averaging", passion_average);
    suite.criterion("property suites", property_suites);
    suite.criterion("justice on hand-checkable fixtures", justice);
    if let Err(e) = clusters_report(s) {
        println!("INFO value-system clusters unavailable: {e}");
    }
    println!("acceptance: {} passed, {} failed", suite.passed, suite.failed);
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
