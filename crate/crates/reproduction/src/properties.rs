//! Property checks with explicit case counts and a fixed generator seed, so
//! the acceptance suite can run and time each one.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use evirank_core::metrics::{overall_injustice, place_diff, score_distance};
use evirank_core::passion::work_passion;
use evirank_core::ranking::{
    administrative_scores, democratic_assessment, leader_compromise, normalize_and_rank,
    self_assessment_matrix, weighted_democracy,
};
use evirank_core::stratification::{
    dichotomy, form_leagues, rerank_leagues, social_lift, DichotomyConfig, DichotomyVariant,
};
use evirank_core::{
    Channel, Matrix, Provenance, RankingList, Roster, Scenario, ScenarioConfig, ScoreVector,
    SplitRule, TieRule, ZeroDivisionPolicy,
};

use crate::fixtures::plain_scenario;
use crate::oracle::{self, Rows};

const CLOSE: f64 = 1e-12;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn fail(msg: impl Into<String>) -> TestCaseError {
    TestCaseError::fail(msg.into())
}

fn core<T>(r: evirank_core::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(e.to_string()))
}

/// Random two-channel scenario in plain form.
#[derive(Debug, Clone)]
pub struct Case {
    pub ids: Vec<String>,
    pub rp: Rows,
    pub avsa: Vec<f64>,
    pub avsp: Rows,
    pub bp: Rows,
    pub rvsa: Vec<f64>,
    pub rvsp: Rows,
    pub by_id: bool,
}

impl Case {
    pub fn scenario(&self) -> evirank_core::Result<Scenario> {
        let ids: Vec<&str> = self.ids.iter().map(String::as_str).collect();
        let s = plain_scenario(
            "case",
            &ids,
            &cat_names(self.avsa.len()),
            &self.rp,
            &self.avsa,
            &self.avsp,
            &cat_names(self.rvsa.len()),
            &self.bp,
            &self.rvsa,
            &self.rvsp,
        )?;
        s.with_config(ScenarioConfig {
            tie_rule: if self.by_id { TieRule::AscendingId } else { TieRule::SourceOrder },
            ..ScenarioConfig::default()
        })
    }

    fn keys(&self) -> Vec<String> {
        oracle::keys(&self.ids, self.by_id)
    }
}

fn cat_names(n: usize) -> Vec<&'static str> {
    ["c0", "c1", "c2", "c3"][..n].to_vec()
}

/// Weights drawn from a coarse grid so ties occur often.
fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u8..4, n).prop_map(|mut w| {
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let t: f64 = w.iter().map(|&x| f64::from(x)).sum();
        w.into_iter().map(|x| f64::from(x) / t).collect()
    })
}

fn int_rows(m: usize, n: usize, lo: u8, hi: u8) -> impl Strategy<Value = Rows> {
    prop::collection::vec(prop::collection::vec((lo..hi).prop_map(f64::from), n), m)
}

pub fn case(m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Case> {
    (m, 1usize..=4, 1usize..=3).prop_flat_map(|(m, n, k)| {
        let mut ids: Vec<String> = ["e", "b", "d", "a", "c", "g", "f", "h"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        while ids.len() < m {
            ids.push(format!("z{:02}", ids.len()));
        }
        ids.truncate(m);
        (
            Just(ids).prop_shuffle(),
            int_rows(m, n, 0, 5),
            weights(n),
            prop::collection::vec(weights(n), m),
            int_rows(m, k, 1, 5),
            weights(k),
            prop::collection::vec(weights(k), m),
            any::<bool>(),
        )
            .prop_map(|(ids, rp, avsa, avsp, bp, rvsa, rvsp, by_id)| Case {
                ids,
                rp,
                avsa,
                avsp,
                bp,
                rvsa,
                rvsp,
                by_id,
            })
    })
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..100.0f64], r * c)
            .prop_map(move |v| Matrix::from_vec(r, c, v).expect("sized"))
    })
}

/// Normalizing twice changes nothing; scaling the input changes nothing.
pub fn row_normalization(cases: u32) -> Result<(), String> {
    run(cases, (matrix(8, 8), 1e-3..1e3f64), |(m, c)| {
        let once = core(m.row_normalize())?;
        let twice = core(once.matrix.row_normalize())?;
        prop_assert!(once.matrix.max_abs_diff(&twice.matrix).unwrap() <= CLOSE);
        let scaled = core(m.scale(c).row_normalize())?;
        prop_assert!(once.matrix.max_abs_diff(&scaled.matrix).unwrap() <= 1e-12);
        prop_assert_eq!(once.degenerate_rows, scaled.degenerate_rows);
        Ok(())
    })
}

/// Positions are 1..m, ids are the roster, scores never increase and tie
/// groups follow the tie rule.
pub fn ranking_bijection(cases: u32) -> Result<(), String> {
    let scores = (1usize..=20).prop_flat_map(|m| {
        (
            prop::collection::vec(prop_oneof![(0u8..4).prop_map(f64::from), 0.0..4.0f64], m),
            Just((0..m).map(|i| format!("s{i:02}")).collect::<Vec<_>>()).prop_shuffle(),
            any::<bool>(),
        )
    });
    run(cases, scores, |(s, ids, by_id)| {
        let roster = core(Roster::new(ids.clone()))?;
        let sv = core(ScoreVector::raw(roster.clone(), s.clone(), Provenance::default()))?;
        let rule = if by_id { TieRule::AscendingId } else { TieRule::SourceOrder };
        let list = RankingList::from_scores(&sv, rule, 1e-9);
        let pos = core(list.positions(&roster))?;
        let mut seen = pos.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (1..=s.len()).collect::<Vec<_>>());
        for (p, e) in list.entries().iter().enumerate() {
            prop_assert_eq!(e.position, p + 1);
            prop_assert_eq!(pos[roster.require(&e.staff_id).unwrap()], p + 1);
        }
        for w in list.entries().windows(2) {
            prop_assert!(w[0].score >= w[1].score - 1e-9);
            if (w[0].score - w[1].score).abs() <= 1e-9 {
                let (a, b) = (
                    roster.index_of(&w[0].staff_id).unwrap(),
                    roster.index_of(&w[1].staff_id).unwrap(),
                );
                let ordered = if by_id { ids[a] < ids[b] } else { a < b };
                prop_assert!(ordered, "tie group out of order");
            }
        }
        let back = core(RankingList::from_order(list.order(), Provenance::default()))?;
        prop_assert_eq!(back.order(), list.order());
        let total: f64 = back.entries().iter().map(|e| e.score).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        Ok(())
    })
}

/// The first split's WINNERS occupy the leading block of the final list.
pub fn dichotomy_prefix(cases: u32) -> Result<(), String> {
    let strategy = (case(2..=32), 0usize..3, any::<bool>(), 0usize..4);
    run(cases, strategy, |(c, v, golden, swap)| {
        let s = core(c.scenario())?;
        let variant = [DichotomyVariant::Weak, DichotomyVariant::Strong, DichotomyVariant::SelfCompromise][v];
        let cfg = DichotomyConfig {
            variant,
            split: if golden { SplitRule::GoldenRatio } else { SplitRule::Half },
            league_driven_swap: swap,
            channel: Channel::Achievements,
        };
        let d = core(dichotomy(&s, cfg))?;
        let order = d.list.order();
        let mut lead = order[..d.first_winners.len()].to_vec();
        let mut first = d.first_winners.clone();
        lead.sort();
        first.sort();
        prop_assert_eq!(lead, first);
        let mut all = order.clone();
        all.sort();
        let mut ids = c.ids.clone();
        ids.sort();
        prop_assert_eq!(all, ids);
        Ok(())
    })
}

fn normalized_vector(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..1.0f64], m).prop_map(|mut v| {
        if v.iter().all(|&x| x == 0.0) {
            v[0] = 1.0;
        }
        let t: f64 = v.iter().sum();
        v.into_iter().map(|x| x / t).collect()
    })
}

/// Identity, symmetry, triangle inequality and the [0, 1] range.
pub fn score_distance_axioms(cases: u32) -> Result<(), String> {
    let strategy = (1usize..=12).prop_flat_map(|m| (normalized_vector(m), normalized_vector(m), normalized_vector(m)));
    run(cases, strategy, |(a, b, c)| {
        let roster = core(Roster::new((0..a.len()).map(|i| format!("p{i}"))))?;
        let sv = |v: &Vec<f64>| core(ScoreVector::shares(roster.clone(), v.clone(), Provenance::default()));
        let (a, b, c) = (sv(&a)?, sv(&b)?, sv(&c)?);
        let d = |x: &ScoreVector, y: &ScoreVector| score_distance(x, y).unwrap();
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!((0.0..=1.0 + CLOSE).contains(&d(&a, &b)));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + CLOSE);
        if d(&a, &b) == 0.0 {
            prop_assert!(close(a.scores(), b.scores(), 0.0));
        }
        Ok(())
    })
}

/// The contra-harmonic mean lies between the arithmetic mean and the maximum.
pub fn overall_between_mean_and_max(cases: u32) -> Result<(), String> {
    let strategy = prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..1.0f64], 1..=12);
    run(cases, strategy, |v| {
        let o = core(overall_injustice(&v))?;
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let max = v.iter().cloned().fold(0.0, f64::max);
        prop_assert!(o.value >= mean - CLOSE && o.value <= max + CLOSE, "{} not in [{mean}, {max}]", o.value);
        prop_assert_eq!(o.all_zero, v.iter().all(|&x| x == 0.0));
        Ok(())
    })
}

fn scaled(rows: &Rows, c: f64) -> Rows {
    rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Uniformly scaling either evidence matrix leaves work passion unchanged.
pub fn passion_scale_invariance(cases: u32) -> Result<(), String> {
    let strategy = (case(1..=8), 1e-2..1e2f64, 1e-2..1e2f64);
    run(cases, strategy, |(c, ka, kb)| {
        let base = c.scenario().and_then(|s| work_passion(&s, ZeroDivisionPolicy::ZeroForZero, false));
        let mut t = c.clone();
        t.rp = scaled(&c.rp, ka);
        t.bp = scaled(&c.bp, kb);
        let other = t.scenario().and_then(|s| work_passion(&s, ZeroDivisionPolicy::ZeroForZero, false));
        let (base, other) = (core(base)?, core(other)?);
        prop_assert!(base.wp.values().max_abs_diff(other.wp.values()).unwrap() <= 1e-9);
        prop_assert!(close(base.average.scores(), other.average.scores(), 1e-9));
        Ok(())
    })
}

fn ids_of(list: &RankingList, roster: &Roster) -> Vec<usize> {
    list.ids().map(|id| roster.index_of(id).expect("roster member")).collect()
}

/// Every ranking operation against the nested-loop oracle.
pub fn brute_force_equivalence(cases: u32) -> Result<(), String> {
    run(cases, case(1..=5), |c| {
        let s = core(c.scenario())?;
        let roster = s.roster().clone();
        let tie = s.config().tie_rule;
        let tol = s.config().tie_tolerance;
        let keys = c.keys();
        let m = c.ids.len();
        let ch = core(s.channel(Channel::Achievements))?;

        let ar = core(administrative_scores(&ch))?;
        let want_ar = oracle::weighted_sums(&c.rp, &c.avsa);
        prop_assert!(close(ar.scores(), &want_ar, CLOSE), "AR");
        let (aa, admin_list) = normalize_and_rank(&ar, tie, tol);
        let want_aa = oracle::shares(&want_ar);
        prop_assert!(close(aa.scores(), &want_aa, CLOSE), "AA");
        let want_admin = oracle::order(&want_aa, &keys, tol);
        prop_assert_eq!(ids_of(&admin_list, &roster), want_admin.clone(), "administrative order");

        let sa = core(self_assessment_matrix(&ch))?;
        let pr = oracle::assessment(&c.rp, &c.avsp);
        let npr = oracle::normalize_rows(&pr);
        for i in 0..m {
            prop_assert!(close(sa.raw.values().row(i), &pr[i], CLOSE), "PR");
            prop_assert!(close(sa.normalized.values().row(i), &npr[i], CLOSE), "normalized PR");
        }
        let da = core(democratic_assessment(&sa.normalized))?;
        let want_da = oracle::column_means(&npr);
        prop_assert!(close(da.scores(), &want_da, CLOSE), "DA");
        let da_list = RankingList::from_scores(&da, tie, tol);
        let want_da_order = oracle::order(&want_da, &keys, tol);
        prop_assert_eq!(ids_of(&da_list, &roster), want_da_order.clone(), "democratic order");

        let cr = core(weighted_democracy(&aa, &sa.normalized))?;
        let want_cr = oracle::mix(&want_aa, &npr);
        prop_assert!(close(cr.scores(), &want_cr, CLOSE), "CR");
        prop_assert_eq!(
            ids_of(&RankingList::from_scores(&cr, tie, tol), &roster),
            oracle::order(&want_cr, &keys, tol),
            "weighted democracy order"
        );
        for (l, id) in c.ids.iter().enumerate() {
            let crl = core(leader_compromise(&sa.normalized, id))?;
            let want = oracle::mix(&npr[l], &npr);
            prop_assert!(close(crl.scores(), &want, CLOSE), "CRL {}", id);
            prop_assert_eq!(
                ids_of(&RankingList::from_scores(&crl, tie, tol), &roster),
                oracle::order(&want, &keys, tol),
                "leader order {}",
                id
            );
        }

        prop_assert_eq!(core(place_diff(&admin_list, &da_list))?, oracle::place_diff(&want_admin, &want_da_order));
        let dist = core(score_distance(&aa, &da))?;
        prop_assert!((dist - oracle::score_distance(&want_aa, &want_da)).abs() <= CLOSE);

        for count in 1..=m {
            let part = core(form_leagues(&admin_list, count))?;
            let sizes = oracle::league_sizes(m, count);
            prop_assert_eq!(part.sizes(), sizes.clone());
            let rr = core(rerank_leagues(&part, &ch, tol))?;
            let want_rr = oracle::rerank(&want_admin, &sizes, &c.rp, &c.avsp, tol);
            prop_assert_eq!(ids_of(&rr.list, &roster), want_rr.clone(), "rerank with {} leagues", count);
            prop_assert!(close(
                &rr.list.entries().iter().map(|e| e.score).collect::<Vec<_>>(),
                &oracle::positional(m),
                CLOSE
            ));
            let smallest = *sizes.iter().min().unwrap();
            for k in 0..=smallest / 2 {
                let lifted = core(social_lift(&rr.list, &part, k))?;
                prop_assert_eq!(ids_of(&lifted, &roster), oracle::lift(&want_rr, &sizes, k), "lift k={}", k);
            }
        }

        let pr_raw = oracle::assessment(&c.rp, &c.avsp);
        let key = c.by_id.then_some(c.ids.as_slice());
        for (variant, odd_admin, even_admin) in [
            (DichotomyVariant::Weak, true, false),
            (DichotomyVariant::Strong, false, true),
            (DichotomyVariant::SelfCompromise, false, false),
        ] {
            for golden in [false, true] {
                for swap in 0..3 {
                    let d = core(dichotomy(
                        &s,
                        DichotomyConfig {
                            variant,
                            split: if golden { SplitRule::GoldenRatio } else { SplitRule::Half },
                            league_driven_swap: swap,
                            channel: Channel::Achievements,
                        },
                    ))?;
                    let spec = oracle::DichotomySpec {
                        odd_admin,
                        even_admin,
                        golden,
                        swap,
                    };
                    let (want, first) = oracle::dichotomy(&want_ar, &pr_raw, key, tol, &spec);
                    prop_assert_eq!(ids_of(&d.list, &roster), want, "{:?} golden={} swap={}", variant, golden, swap);
                    let got_first: Vec<usize> = d.first_winners.iter().map(|id| roster.index_of(id).unwrap()).collect();
                    prop_assert_eq!(got_first, first);
                }
            }
        }

        let wp = core(work_passion(&s, ZeroDivisionPolicy::Strict, false))?;
        let want_wp = oracle::work_passion(&c.rp, &c.avsp, &c.bp, &c.rvsp);
        for i in 0..m {
            prop_assert!(close(wp.wp.values().row(i), &want_wp[i], 1e-12), "WP row {}", i);
        }
        let want_avg = oracle::column_means(&want_wp);
        prop_assert!(close(wp.average.scores(), &want_avg, 1e-12), "WP average");
        prop_assert_eq!(ids_of(&wp.ranking, &roster), oracle::order(&want_avg, &keys, tol), "passion order");
        Ok(())
    })
}
