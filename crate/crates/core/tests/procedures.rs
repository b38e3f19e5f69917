mod common;

use common::{close, desk4, desk4_achievements_only, rows, scenario, Side};
use evirank_core::metrics::{
    max_place_diff, overall_injustice, place_diff, place_distance, score_diff, score_distance,
    Interpretation,
};
use evirank_core::passion::work_passion;
use evirank_core::procedures::{canonical_pairs, compute_list, justice_report, Procedure, ProcedureOptions};
use evirank_core::ranking::{
    administrative_scores, democratic_assessment, leader_compromise, normalize_and_rank,
    select_leader, self_assessment_matrix, weighted_democracy, LeaderStrategy,
};
use evirank_core::stratification::{
    dichotomy, form_leagues, rerank_leagues, social_lift, DichotomyConfig, DichotomyVariant,
};
use evirank_core::{
    Channel, Error, Provenance, RankingList, Roster, ScoreVector, TieRule, ZeroDivisionPolicy,
};

const T: f64 = 1.0 / 3.0;

fn order(list: &RankingList) -> Vec<String> {
    list.order()
}

fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn administrative_scores_and_shares() {
    let s = desk4();
    let ch = s.channel(Channel::Achievements).unwrap();
    let ar = administrative_scores(&ch).unwrap();
    assert_eq!(ar.scores(), &[1.0, 1.0, 1.0, 0.0]);
    assert_eq!(ar.channel(), Some(Channel::Achievements));
    let (shares, list) = normalize_and_rank(&ar, TieRule::AscendingId, 1e-9);
    assert!(close(shares.scores(), &[T, T, T, 0.0], 1e-15));
    assert_eq!(order(&list), ids(&["A", "B", "C", "D"]));
}

#[test]
fn self_assessment_rows() {
    let s = desk4();
    let sa = self_assessment_matrix(&s.channel(Channel::Achievements).unwrap()).unwrap();
    let n = sa.normalized.values();
    assert!(close(n.row(0), &[2.0 * T, 0.0, T, 0.0], 1e-15));
    assert!(close(n.row(1), &[0.0, 2.0 * T, T, 0.0], 1e-15));
    assert!(close(n.row(2), &[T, T, T, 0.0], 1e-15));
    assert!(close(n.row(3), &[T, T, T, 0.0], 1e-15));
    assert_eq!(sa.row_totals, vec![3.0, 3.0, 3.0, 3.0]);
}

#[test]
fn democratic_weighted_and_leader() {
    let s = desk4();
    let ch = s.channel(Channel::Achievements).unwrap();
    let sa = self_assessment_matrix(&ch).unwrap();
    let da = democratic_assessment(&sa.normalized).unwrap();
    assert!(close(da.scores(), &[T, T, T, 0.0], 1e-15));
    let aa = administrative_scores(&ch).unwrap().normalized();
    let cr = weighted_democracy(&aa, &sa.normalized).unwrap();
    assert!(close(cr.scores(), &[T, T, T, 0.0], 1e-15));
    let crl = leader_compromise(&sa.normalized, "A").unwrap();
    assert!(close(crl.scores(), &[5.0 / 9.0, 1.0 / 9.0, 3.0 / 9.0, 0.0], 1e-15));
    assert!(crl.provenance.to_string().contains("leader"));
}

#[test]
fn weighted_democracy_with_one_expert_is_that_row() {
    let s = desk4();
    let ch = s.channel(Channel::Achievements).unwrap();
    let sa = self_assessment_matrix(&ch).unwrap();
    let basis = ScoreVector::shares(s.roster().clone(), vec![0.0, 1.0, 0.0, 0.0], Provenance::default()).unwrap();
    let cr = weighted_democracy(&basis, &sa.normalized).unwrap();
    assert!(close(cr.scores(), sa.normalized.values().row(1), 1e-15));
}

#[test]
fn weighted_democracy_rejects_raw_scores() {
    let s = desk4();
    let ch = s.channel(Channel::Achievements).unwrap();
    let sa = self_assessment_matrix(&ch).unwrap();
    let raw = administrative_scores(&ch).unwrap();
    assert!(matches!(weighted_democracy(&raw, &sa.normalized), Err(Error::NotNormalized(_))));
}

#[test]
fn leader_selection() {
    let s = desk4();
    assert_eq!(select_leader(&s, Channel::Achievements, &LeaderStrategy::AdminTop).unwrap(), "A");
    assert_eq!(
        select_leader(&s, Channel::Achievements, &LeaderStrategy::Explicit("C".into())).unwrap(),
        "C"
    );
    assert!(matches!(
        select_leader(&s, Channel::Achievements, &LeaderStrategy::Explicit("Z".into())),
        Err(Error::UnknownStaff(_))
    ));
    assert!(matches!(
        select_leader(&s, Channel::Achievements, &LeaderStrategy::LeagueTop(9)),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn league_sizes_follow_remainder_rule() {
    let roster: Vec<String> = (0..7).map(|i| format!("p{i}")).collect();
    let list = RankingList::from_order(roster.clone(), Provenance::default()).unwrap();
    let p = form_leagues(&list, 3).unwrap();
    assert_eq!(p.sizes(), vec![3, 2, 2]);
    assert_eq!(p.leaders, ids(&["p0", "p3", "p5"]));
    let one = form_leagues(&list, 1).unwrap();
    assert_eq!(one.leaders, ids(&["p0"]));
    assert!(form_leagues(&list, 0).is_err());
    assert!(form_leagues(&list, 8).is_err());
}

#[test]
fn desk4_two_leagues_by_hand() {
    // admin order A,B,C,D: leagues {A,B} led by A (1,0), {C,D} led by C (.5,.5)
    let s = desk4();
    let ch = s.channel(Channel::Achievements).unwrap();
    let (_, admin) = normalize_and_rank(&administrative_scores(&ch).unwrap(), TieRule::AscendingId, 1e-9);
    let p = form_leagues(&admin, 2).unwrap();
    let rr = rerank_leagues(&p, &ch, 1e-9).unwrap();
    // A scores 2 and B scores 0 under (1,0); C scores 1 and D 0 under (.5,.5)
    assert_eq!(rr.leagues, vec![ids(&["A", "B"]), ids(&["C", "D"])]);
    assert!(close(&rr.league_shares[0], &[1.0, 0.0], 1e-15));
    assert!(close(&rr.league_shares[1], &[1.0, 0.0], 1e-15));
    let lifted = social_lift(&rr.list, &p, 1).unwrap();
    assert_eq!(order(&lifted), ids(&["A", "C", "B", "D"]));
    assert_eq!(order(&social_lift(&rr.list, &p, 0).unwrap()), order(&rr.list));
    assert!(matches!(social_lift(&rr.list, &p, 2), Err(Error::SwapTooLarge { .. })));
}

#[test]
fn rerank_under_leader_reverses_league() {
    // leader B values only Research, where C beats A
    let s = scenario(
        &["A", "B", "C"],
        Side {
            categories: vec!["Teaching", "Research"],
            evidence: rows(&[[5.0, 0.0], [4.0, 4.0], [1.0, 3.0]]),
            admin: vec![0.5, 0.5],
            personnel: rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]),
        },
        None,
    );
    let ch = s.channel(Channel::Achievements).unwrap();
    let (_, admin) = normalize_and_rank(&administrative_scores(&ch).unwrap(), TieRule::AscendingId, 1e-9);
    assert_eq!(order(&admin), ids(&["B", "A", "C"]));
    let rr = rerank_leagues(&form_leagues(&admin, 1).unwrap(), &ch, 1e-9).unwrap();
    assert_eq!(order(&rr.list), ids(&["B", "C", "A"]));
}

#[test]
fn weak_dichotomy_by_hand() {
    // level 1 administrative: AR (1,1,1,0), ties by id -> W {A,B}, L {C,D}
    // level 2 democratic within {A,B}: A rates (1,0), B rates (0,1) -> tie, A first
    // level 2 democratic within {C,D}: both rate C=1, D=0 -> C, D
    let s = desk4();
    let d = dichotomy(&s, DichotomyConfig::new(DichotomyVariant::Weak)).unwrap();
    assert_eq!(order(&d.list), ids(&["A", "B", "C", "D"]));
    assert_eq!(d.first_winners, ids(&["A", "B"]));
    assert_eq!(d.depth, 2);
    let strong = dichotomy(&s, DichotomyConfig::new(DichotomyVariant::Strong)).unwrap();
    assert_eq!(strong.list.len(), 4);
}

#[test]
fn single_member_dichotomy() {
    let s = scenario(
        &["Solo"],
        Side {
            categories: vec!["x"],
            evidence: rows(&[[3.0]]),
            admin: vec![1.0],
            personnel: rows(&[[1.0]]),
        },
        None,
    );
    let d = dichotomy(&s, DichotomyConfig::new(DichotomyVariant::SelfCompromise)).unwrap();
    assert_eq!(order(&d.list), ids(&["Solo"]));
    assert_eq!(d.list.entries()[0].position, 1);
}

#[test]
fn list_distances() {
    let l = |v: &[&str]| RankingList::from_order(ids(v), Provenance::default()).unwrap();
    let a = l(&["a", "b", "c", "d", "e"]);
    let r = l(&["e", "d", "c", "b", "a"]);
    assert_eq!(place_diff(&a, &a).unwrap(), 0);
    assert_eq!(place_diff(&a, &r).unwrap(), max_place_diff(5));
    assert_eq!(max_place_diff(5), 12);
    assert_eq!(max_place_diff(1), 0);
    assert_eq!(place_distance(&l(&["a"]), &l(&["a"])).unwrap(), 0.0);
    assert!(place_diff(&a, &l(&["a", "b"])).is_err());
}

#[test]
fn score_distances() {
    let roster = Roster::new(["A", "B", "C", "D"]).unwrap();
    let sv = |v: Vec<f64>| ScoreVector::shares(roster.clone(), v, Provenance::default()).unwrap();
    let a = sv(vec![T, T, T, 0.0]);
    let b = sv(vec![0.0, T, T, T]);
    assert!((score_diff(&a, &b).unwrap() - 2.0 * T).abs() < 1e-15);
    assert!((score_distance(&a, &b).unwrap() - T).abs() < 1e-15);
    let disjoint = score_distance(&sv(vec![1.0, 0.0, 0.0, 0.0]), &sv(vec![0.0, 0.0, 0.0, 1.0])).unwrap();
    assert_eq!(disjoint, 1.0);
}

#[test]
fn overall_injustice_cases() {
    let v = overall_injustice(&[0.2, 0.2, 0.2, 0.6]).unwrap();
    assert!((v.value - 0.4).abs() < 1e-15);
    let z = overall_injustice(&[0.0, 0.0]).unwrap();
    assert_eq!((z.value, z.all_zero), (0.0, true));
    assert!(overall_injustice(&[]).is_err());
    assert!(overall_injustice(&[-0.1]).is_err());
}

#[test]
fn desk4_justice_by_hand() {
    // AA = DA = (1/3,1/3,1/3,0); ABA = DBA = (1/6,1/6,1/3,1/3); each distance 1/3
    let s = desk4();
    let (a, r) = canonical_pairs();
    let report = justice_report(&s, &a, &r, &ProcedureOptions::default()).unwrap();
    assert_eq!(report.pairwise.len(), 4);
    for p in &report.pairwise {
        assert!((p.value - T).abs() < 1e-12, "{} {}", p.achievement_list, p.reward_list);
    }
    assert!((report.overall.value - T).abs() < 1e-12);
    let aa_aba = report.pairwise.iter().find(|p| p.achievement_list == "AA" && p.reward_list == "ABA").unwrap();
    assert_eq!(aa_aba.interpretation, Interpretation::for_pair("AA", "ABA"));
    assert!(aa_aba.interpretation.is_some());
}

#[test]
fn full_cross_product_has_64_pairs() {
    let s = desk4();
    let all = Procedure::ALL.to_vec();
    let opts = ProcedureOptions {
        leader: LeaderStrategy::Explicit("A".into()),
        ..ProcedureOptions::default()
    };
    let s = s.with_config(evirank_core::ScenarioConfig {
        league_count: 2,
        swap_count: 1,
        ..s.config().clone()
    })
    .unwrap();
    let report = justice_report(&s, &all, &all, &opts).unwrap();
    assert_eq!(report.pairwise.len(), 64);
    assert!(report.pairwise.iter().all(|p| (0.0..=1.0).contains(&p.value)));
}

#[test]
fn proportional_rewards_are_just() {
    let ach = Side {
        categories: vec!["x", "y"],
        evidence: rows(&[[2.0, 1.0], [1.0, 3.0], [0.5, 0.5]]),
        admin: vec![0.5, 0.5],
        personnel: rows(&[[0.5, 0.5]; 3]),
    };
    let rew = Side {
        categories: vec!["p", "q"],
        evidence: rows(&[[4.0, 2.0], [2.0, 6.0], [1.0, 1.0]]),
        admin: vec![0.5, 0.5],
        personnel: rows(&[[0.5, 0.5]; 3]),
    };
    let s = scenario(&["a", "b", "c"], ach, Some(rew));
    let (a, r) = canonical_pairs();
    let report = justice_report(&s, &a, &r, &ProcedureOptions::default()).unwrap();
    assert!(report.pairwise.iter().all(|p| p.value.abs() < 1e-12));
    assert!(report.overall.value.abs() < 1e-12);
}

#[test]
fn justice_needs_rewards() {
    let s = desk4_achievements_only();
    let (a, r) = canonical_pairs();
    assert!(matches!(
        justice_report(&s, &a, &r, &ProcedureOptions::default()),
        Err(Error::MissingRewardChannel)
    ));
}

#[test]
fn injustice_rejects_same_channel() {
    let s = desk4();
    let a = compute_list(&s, Procedure::Administrative, Channel::Achievements, &ProcedureOptions::default()).unwrap();
    let d = compute_list(&s, Procedure::Democratic, Channel::Achievements, &ProcedureOptions::default()).unwrap();
    assert!(matches!(
        evirank_core::metrics::injustice(&a.shares, &d.shares),
        Err(Error::Provenance(_))
    ));
}

#[test]
fn desk4_work_passion_by_hand() {
    // row A: S2 = (4,0,2,0), S4 = (.5,0,.5,.5) -> 0/0 at B under zero_for_zero
    let s = desk4();
    let p = work_passion(&s, ZeroDivisionPolicy::ZeroForZero, true).unwrap();
    assert!(close(p.wp.values().row(0), &[2.0 * T, 0.0, T, 0.0], 1e-15));
    // D achieved nothing, so its row is degenerate and the average is flagged
    assert_eq!(p.wp.degenerate_rows(), &[3]);
    let total: f64 = p.average.scores().iter().sum();
    assert!((total - 0.75).abs() < 1e-12);
    assert!(p.average.is_degenerate() && !p.average.warnings.is_empty());
    assert!(p.stage_trace.is_some());
    match work_passion(&s, ZeroDivisionPolicy::Strict, false) {
        Err(Error::PassionZeroDivision { pairs }) => assert!(pairs.contains(&("A".into(), "B".into()))),
        other => panic!("expected a division error, got {other:?}"),
    }
}

#[test]
fn single_member_work_passion() {
    let one = |e: f64| Side {
        categories: vec!["x"],
        evidence: rows(&[[e]]),
        admin: vec![1.0],
        personnel: rows(&[[1.0]]),
    };
    let s = scenario(&["Solo"], one(2.0), Some(one(5.0)));
    let p = work_passion(&s, ZeroDivisionPolicy::Strict, false).unwrap();
    assert_eq!(p.wp.values().as_slice(), &[1.0]);
    assert_eq!(p.average.scores(), &[1.0]);
}

#[test]
fn every_procedure_yields_a_full_list() {
    let s = desk4()
        .with_config(evirank_core::ScenarioConfig {
            league_count: 2,
            swap_count: 1,
            ..Default::default()
        })
        .unwrap();
    for p in Procedure::ALL {
        for c in [Channel::Achievements, Channel::Rewards] {
            let out = compute_list(&s, p, c, &ProcedureOptions::default()).unwrap();
            assert_eq!(out.list.len(), 4, "{}", out.code);
            assert_eq!(out.code, p.code(c));
            let sum: f64 = out.shares.scores().iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "{}", out.code);
        }
    }
}
