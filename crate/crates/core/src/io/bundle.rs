//! Scenario bundles: a JSON manifest next to labeled matrix files, or the
//! same content inline as one JSON document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::table::{read_table, write_table, LabeledTable};
use crate::error::{Error, Result, Violation};
use crate::matrix::Matrix;
use crate::model::{
    CategorySet, Channel, EvidenceMatrix, RewardSide, Roster, Scenario, ScenarioConfig,
    WeightMatrix, WeightVector,
};

pub const MANIFEST_FILE: &str = "manifest.json";
const ADMIN_ROW: &str = "admin";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFiles {
    pub achievements: String,
    pub admin_achievement_weights: String,
    pub personnel_achievement_weights: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admin_reward_weights: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub personnel_reward_weights: Option<String>,
}

impl Default for BundleFiles {
    fn default() -> Self {
        Self {
            achievements: "achievements.csv".into(),
            admin_achievement_weights: "admin_achievement_weights.csv".into(),
            personnel_achievement_weights: "personnel_achievement_weights.csv".into(),
            rewards: Some("rewards.csv".into()),
            admin_reward_weights: Some("admin_reward_weights.csv".into()),
            personnel_reward_weights: Some("personnel_reward_weights.csv".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    #[serde(default)]
    pub config: ScenarioConfig,
    pub files: BundleFiles,
}

fn manifest_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    }
}

/// Collects violations and only builds a value when there are none.
#[derive(Default)]
struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn absorb<T>(&mut self, file: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(Error::Bundle(v)) => {
                self.violations.extend(v);
                None
            }
            Err(e) => {
                self.violations.push(Violation::file(file, e.to_string()));
                None
            }
        }
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    fn finish<T>(self, value: Option<T>) -> Result<T> {
        match value {
            Some(v) if self.violations.is_empty() => Ok(v),
            _ => Err(Error::Bundle(self.violations)),
        }
    }
}

/// Rows of `t` reordered to follow `roster`; every id must appear once.
fn align_rows(c: &mut Checker, file: &str, t: &LabeledTable, roster: &Roster) -> Option<Matrix> {
    let mut out = Matrix::zeros(roster.len(), t.values.cols());
    let mut seen = vec![false; roster.len()];
    let mut ok = true;
    for (r, label) in t.row_labels.iter().enumerate() {
        match roster.index_of(label) {
            Some(i) if !seen[i] => {
                seen[i] = true;
                for j in 0..t.values.cols() {
                    out[(i, j)] = t.values[(r, j)];
                }
            }
            Some(_) => {
                c.push(Violation::at(file, r + 1, None, format!("duplicate staff id '{label}'")));
                ok = false;
            }
            None => {
                c.push(Violation::at(file, r + 1, None, format!("staff id '{label}' not in roster")));
                ok = false;
            }
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            c.push(Violation::file(file, format!("missing staff id '{}'", roster.id(i))));
            ok = false;
        }
    }
    ok.then_some(out)
}

fn check_categories(c: &mut Checker, file: &str, t: &LabeledTable, cats: &CategorySet) -> bool {
    if t.col_labels == cats.names() {
        return true;
    }
    for (j, label) in t.col_labels.iter().enumerate() {
        if cats.names().get(j) != Some(label) {
            c.push(Violation::at(
                file,
                0,
                Some(label),
                format!("expected categories {:?}", cats.names()),
            ));
            return false;
        }
    }
    c.push(Violation::file(file, format!("expected categories {:?}", cats.names())));
    false
}

fn check_weight_rows(c: &mut Checker, file: &str, labels: &[String], m: &Matrix, tol: f64) -> bool {
    let mut ok = true;
    for (i, row) in m.row_iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            if w < 0.0 {
                c.push(Violation::at(file, i + 1, None, format!("negative weight {w} in column {j}")));
                ok = false;
            }
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > tol {
            c.push(Violation::at(
                file,
                i + 1,
                None,
                format!("weights for '{}' sum to {s}, expected 1 within {tol}", labels[i]),
            ));
            ok = false;
        }
    }
    ok
}

fn check_evidence(c: &mut Checker, file: &str, t: &LabeledTable) -> bool {
    let mut ok = true;
    for (i, row) in t.values.row_iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < 0.0 {
                c.push(Violation::at(file, i + 1, Some(&t.col_labels[j]), format!("negative evidence {v}")));
                ok = false;
            }
        }
    }
    ok
}

struct Side {
    evidence: EvidenceMatrix,
    admin: WeightVector,
    personnel: WeightMatrix,
}

fn build_side(
    c: &mut Checker,
    kind: Channel,
    roster: Option<&Roster>,
    files: [(&str, Option<LabeledTable>); 3],
    tol: f64,
) -> Option<(Roster, Side)> {
    let [(ef, e), (af, a), (pf, p)] = files;
    // each table is checked on its own so one bad file does not hide another
    let roster = match roster {
        Some(r) => Some(r.clone()),
        None => e.as_ref().and_then(|e| c.absorb(ef, Roster::new(e.row_labels.iter().cloned()))),
    };
    let cats = e
        .as_ref()
        .and_then(|e| c.absorb(ef, CategorySet::new(kind, e.col_labels.iter().cloned())));
    let mut ok = true;
    let ev = match (&e, &roster) {
        (Some(e), Some(r)) => {
            ok &= check_evidence(c, ef, e);
            align_rows(c, ef, e, r)
        }
        _ => None,
    };
    if let Some(a) = &a {
        if let Some(cats) = &cats {
            ok &= check_categories(c, af, a, cats);
        }
        if a.values.rows() != 1 {
            c.push(Violation::file(af, format!("expected one '{ADMIN_ROW}' row, found {}", a.values.rows())));
            ok = false;
        }
        ok &= check_weight_rows(c, af, &a.row_labels, &a.values, tol);
    }
    let pm = match &p {
        Some(p) => {
            if let Some(cats) = &cats {
                ok &= check_categories(c, pf, p, cats);
            }
            ok &= check_weight_rows(c, pf, &p.row_labels, &p.values, tol);
            roster.as_ref().and_then(|r| align_rows(c, pf, p, r))
        }
        None => None,
    };
    if !ok {
        return None;
    }
    let (roster, cats, a) = (roster?, cats?, a?);
    let evidence = c.absorb(ef, EvidenceMatrix::new(roster.clone(), cats.clone(), ev?))?;
    let admin = c.absorb(
        af,
        WeightVector::with_tolerance(cats.clone(), a.values.row(0).to_vec(), tol, "admin weights"),
    )?;
    let personnel = c.absorb(pf, WeightMatrix::with_tolerance(roster.clone(), cats, pm?, tol))?;
    Some((
        roster,
        Side {
            evidence,
            admin,
            personnel,
        },
    ))
}

/// Loads and fully validates a bundle from a manifest file or its directory.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let mpath = manifest_path(path);
    let mname = mpath.display().to_string();
    let text = std::fs::read_to_string(&mpath)
        .map_err(|e| Error::Bundle(vec![Violation::file(&mname, format!("cannot read: {e}"))]))?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| Error::Bundle(vec![Violation::at(&mname, e.line(), None, e.to_string())]))?;
    let base = mpath.parent().unwrap_or(Path::new("."));
    let mut c = Checker::default();
    c.absorb(&mname, manifest.config.validate());
    let tol = manifest.config.weight_tolerance;
    let mut read = |rel: &str| {
        let p = base.join(rel);
        c.absorb(&p.display().to_string(), read_table(&p))
    };
    let f = &manifest.files;
    let ach_tables = [
        read(&f.achievements),
        read(&f.admin_achievement_weights),
        read(&f.personnel_achievement_weights),
    ];
    let rew_names = [&f.rewards, &f.admin_reward_weights, &f.personnel_reward_weights];
    let present = rew_names.iter().filter(|n| n.is_some()).count();
    let rew_tables: Option<[Option<LabeledTable>; 3]> = match present {
        0 => None,
        3 => Some(rew_names.map(|n| read(n.as_deref().expect("checked present")))),
        _ => {
            c.push(Violation::file(
                &mname,
                "rewards, admin_reward_weights and personnel_reward_weights must be given together",
            ));
            None
        }
    };
    let name_of = |rel: &str| base.join(rel).display().to_string();
    let [e, a, p] = ach_tables;
    let (ef, af, pf) = (
        name_of(&f.achievements),
        name_of(&f.admin_achievement_weights),
        name_of(&f.personnel_achievement_weights),
    );
    let ach = build_side(&mut c, Channel::Achievements, None, [(&ef, e), (&af, a), (&pf, p)], tol);
    let mut rewards = None;
    if let (Some([e, a, p]), Some((roster, _))) = (rew_tables, ach.as_ref()) {
        let names = rew_names.map(|n| name_of(n.as_deref().expect("checked present")));
        rewards = build_side(
            &mut c,
            Channel::Rewards,
            Some(roster),
            [(&names[0], e), (&names[1], a), (&names[2], p)],
            tol,
        );
        if rewards.is_none() && c.violations.is_empty() {
            c.push(Violation::file(&names[0], "reward files are incomplete"));
        }
    }
    let scenario = ach.and_then(|(_, s)| {
        let r = rewards.map(|(_, r)| RewardSide {
            evidence: r.evidence,
            admin_weights: r.admin,
            personnel_weights: r.personnel,
        });
        let built = Scenario::new(manifest.name.clone(), s.evidence, s.admin, s.personnel, r, manifest.config.clone());
        c.absorb(&mname, built)
    });
    c.finish(scenario)
}

fn weight_table(corner: &str, rows: Vec<String>, cats: &CategorySet, m: Matrix) -> LabeledTable {
    LabeledTable {
        corner: corner.into(),
        row_labels: rows,
        col_labels: cats.names().to_vec(),
        values: m,
    }
}

/// Writes `manifest.json` and the matrix files into `dir`.
pub fn save_scenario(scenario: &Scenario, dir: &Path) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Invalid(format!("cannot write bundle to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut files = BundleFiles::default();
    if !scenario.has_rewards() {
        files.rewards = None;
        files.admin_reward_weights = None;
        files.personnel_reward_weights = None;
    }
    let ids = scenario.roster().ids().to_vec();
    let mut out: Vec<(String, LabeledTable)> = Vec::new();
    let mut side = |ch: crate::model::EvidenceChannel<'_>, names: [&str; 3]| {
        let cats = ch.evidence.categories();
        out.push((names[0].into(), weight_table("staff", ids.clone(), cats, ch.evidence.values().clone())));
        out.push((
            names[1].into(),
            weight_table("role", vec![ADMIN_ROW.into()], cats, ch.admin_weights.as_row()),
        ));
        out.push((
            names[2].into(),
            weight_table("staff", ids.clone(), cats, ch.personnel_weights.matrix().clone()),
        ));
    };
    side(
        scenario.channel(Channel::Achievements)?,
        [&files.achievements, &files.admin_achievement_weights, &files.personnel_achievement_weights],
    );
    if let (Some(r), Some(a), Some(p)) = (&files.rewards, &files.admin_reward_weights, &files.personnel_reward_weights) {
        side(scenario.channel(Channel::Rewards)?, [r, a, p]);
    }
    for (name, table) in &out {
        std::fs::write(dir.join(name), write_table(table)).map_err(io_err)?;
    }
    let manifest = Manifest {
        name: scenario.name().to_string(),
        config: scenario.config().clone(),
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(dir.join(MANIFEST_FILE), text).map_err(io_err)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineChannel {
    pub categories: Vec<String>,
    pub evidence: Vec<Vec<f64>>,
    pub admin_weights: Vec<f64>,
    pub personnel_weights: Vec<Vec<f64>>,
}

/// The whole bundle as one JSON document; rows follow `staff`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineBundle {
    pub name: String,
    #[serde(default)]
    pub config: ScenarioConfig,
    pub staff: Vec<String>,
    pub achievements: InlineChannel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<InlineChannel>,
}

fn inline_table(file: &str, labels: &[String], cats: &[String], rows: &[Vec<f64>], c: &mut Checker) -> Option<LabeledTable> {
    let mut data = Vec::with_capacity(rows.len() * cats.len());
    let mut ok = true;
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cats.len() {
            c.push(Violation::at(file, i + 1, None, format!("expected {} values, found {}", cats.len(), r.len())));
            ok = false;
        } else {
            data.extend_from_slice(r);
        }
    }
    if rows.len() != labels.len() {
        c.push(Violation::file(file, format!("expected {} rows, found {}", labels.len(), rows.len())));
        ok = false;
    }
    if !ok {
        return None;
    }
    Some(LabeledTable {
        corner: "staff".into(),
        row_labels: labels.to_vec(),
        col_labels: cats.to_vec(),
        values: Matrix::from_vec(rows.len(), cats.len(), data).ok()?,
    })
}

impl InlineBundle {
    pub fn into_scenario(self) -> Result<Scenario> {
        let mut c = Checker::default();
        c.absorb("config", self.config.validate());
        let tol = self.config.weight_tolerance;
        let roster = c.absorb("staff", Roster::new(self.staff.iter().cloned()));
        let admin_label = vec![ADMIN_ROW.to_string()];
        let side = |kind: Channel, prefix: &str, ch: &InlineChannel, c: &mut Checker| {
            let names = [
                format!("{prefix}.evidence"),
                format!("{prefix}.admin_weights"),
                format!("{prefix}.personnel_weights"),
            ];
            let e = inline_table(&names[0], &self.staff, &ch.categories, &ch.evidence, c);
            let a = inline_table(&names[1], &admin_label, &ch.categories, std::slice::from_ref(&ch.admin_weights), c);
            let p = inline_table(&names[2], &self.staff, &ch.categories, &ch.personnel_weights, c);
            let r = roster.as_ref()?;
            build_side(c, kind, Some(r), [(&names[0], e), (&names[1], a), (&names[2], p)], tol)
        };
        let ach = side(Channel::Achievements, "achievements", &self.achievements, &mut c);
        let rew = match &self.rewards {
            Some(r) => side(Channel::Rewards, "rewards", r, &mut c).map(Some),
            None => Some(None),
        };
        let scenario = match (ach, rew) {
            (Some((_, s)), Some(r)) => {
                let r = r.map(|(_, r)| RewardSide {
                    evidence: r.evidence,
                    admin_weights: r.admin,
                    personnel_weights: r.personnel,
                });
                c.absorb("bundle", Scenario::new(self.name, s.evidence, s.admin, s.personnel, r, self.config))
            }
            _ => None,
        };
        c.finish(scenario)
    }

    pub fn from_scenario(s: &Scenario) -> InlineBundle {
        let chan = |ch: crate::model::EvidenceChannel<'_>| InlineChannel {
            categories: ch.evidence.categories().names().to_vec(),
            evidence: ch.evidence.values().row_iter().map(<[f64]>::to_vec).collect(),
            admin_weights: ch.admin_weights.weights().to_vec(),
            personnel_weights: ch.personnel_weights.matrix().row_iter().map(<[f64]>::to_vec).collect(),
        };
        InlineBundle {
            name: s.name().to_string(),
            config: s.config().clone(),
            staff: s.roster().ids().to_vec(),
            achievements: chan(s.channel(Channel::Achievements).expect("always present")),
            rewards: s.channel(Channel::Rewards).ok().map(chan),
        }
    }
}
