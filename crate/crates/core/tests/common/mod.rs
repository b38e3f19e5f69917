#![allow(dead_code)]

use evirank_core::{
    CategorySet, Channel, EvidenceMatrix, Matrix, RewardSide, Roster, Scenario, ScenarioConfig,
    WeightMatrix, WeightVector,
};

pub fn rows<const N: usize>(r: &[[f64; N]]) -> Matrix {
    Matrix::from_rows(r).unwrap()
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

pub struct Side {
    pub categories: Vec<&'static str>,
    pub evidence: Matrix,
    pub admin: Vec<f64>,
    pub personnel: Matrix,
}

pub fn scenario(ids: &[&str], ach: Side, rew: Option<Side>) -> Scenario {
    let roster = Roster::new(ids.iter().copied()).unwrap();
    let build = |kind, s: Side| {
        let cats = CategorySet::new(kind, s.categories).unwrap();
        (
            EvidenceMatrix::new(roster.clone(), cats.clone(), s.evidence).unwrap(),
            WeightVector::new(cats.clone(), s.admin).unwrap(),
            WeightMatrix::new(roster.clone(), cats, s.personnel).unwrap(),
        )
    };
    let (e, a, p) = build(Channel::Achievements, ach);
    let r = rew.map(|s| {
        let (evidence, admin_weights, personnel_weights) = build(Channel::Rewards, s);
        RewardSide {
            evidence,
            admin_weights,
            personnel_weights,
        }
    });
    Scenario::new("test", e, a, p, r, ScenarioConfig::default()).unwrap()
}

/// Four people, two categories per channel, small enough to check by hand.
pub fn desk4() -> Scenario {
    scenario(
        &["A", "B", "C", "D"],
        Side {
            categories: vec!["Teaching", "Research"],
            evidence: rows(&[[2.0, 0.0], [0.0, 2.0], [1.0, 1.0], [0.0, 0.0]]),
            admin: vec![0.5, 0.5],
            personnel: rows(&[[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.5]]),
        },
        Some(Side {
            categories: vec!["Salary", "Awards"],
            evidence: rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 1.0]]),
            admin: vec![0.5, 0.5],
            personnel: rows(&[[0.5, 0.5]; 4]),
        }),
    )
}

pub fn desk4_achievements_only() -> Scenario {
    let s = desk4();
    Scenario::new(
        "test",
        s.achievements().clone(),
        s.admin_achievement_weights().clone(),
        s.personnel_achievement_weights().clone(),
        None,
        ScenarioConfig::default(),
    )
    .unwrap()
}
