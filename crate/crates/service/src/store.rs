//! Scenario storage with per-scenario locks and on-disk snapshots.
//!
//! Layout of a data directory: `<id>/bundle/` holds the scenario as a bundle,
//! `<id>/state.json` holds the revision and cached results.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use evirank_core::io::{load_scenario, save_scenario};
use evirank_core::Scenario;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ApiError;
use crate::run::CachedList;

const STATE_FILE: &str = "state.json";
const BUNDLE_DIR: &str = "bundle";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredResult {
    pub name: String,
    pub revision: u64,
    pub request: Value,
    pub document: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<CachedList>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct State {
    revision: u64,
    next_result: u64,
    results: Vec<StoredResult>,
}

#[derive(Debug, Clone)]
pub struct StoredScenario {
    pub id: String,
    pub scenario: Scenario,
    pub revision: u64,
    pub results: Vec<StoredResult>,
    next_result: u64,
}

impl StoredScenario {
    pub fn result(&self, name: &str) -> Option<&StoredResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// `r1`, `r2`, ... skipping names already taken.
    pub fn next_result_name(&mut self) -> String {
        loop {
            self.next_result += 1;
            let name = format!("r{}", self.next_result);
            if self.result(&name).is_none() {
                return name;
            }
        }
    }
}

pub type Entry = Arc<RwLock<StoredScenario>>;

#[derive(Default)]
struct Index {
    scenarios: BTreeMap<String, Entry>,
    next_id: u64,
}

/// In-memory index, optionally mirrored to a data directory.
pub struct Store {
    data_dir: Option<PathBuf>,
    index: RwLock<Index>,
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(tmp, path)
}

fn id_number(id: &str) -> Option<u64> {
    id.strip_prefix('s')?.parse().ok()
}

impl Store {
    pub fn in_memory() -> Self {
        Self {
            data_dir: None,
            index: RwLock::new(Index::default()),
        }
    }

    /// Opens a data directory, rebuilding the index from its snapshots.
    pub fn open(dir: &Path) -> Result<Self, ApiError> {
        std::fs::create_dir_all(dir).map_err(ApiError::storage)?;
        let mut index = Index::default();
        let mut dirs: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(ApiError::storage)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join(STATE_FILE).is_file())
            .collect();
        dirs.sort();
        for path in dirs {
            let id = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
            let text = std::fs::read_to_string(path.join(STATE_FILE)).map_err(ApiError::storage)?;
            let state: State = serde_json::from_str(&text).map_err(ApiError::storage)?;
            let scenario = load_scenario(&path.join(BUNDLE_DIR))?;
            index.next_id = index.next_id.max(id_number(&id).unwrap_or(0));
            let stored = StoredScenario {
                id: id.clone(),
                scenario,
                revision: state.revision,
                results: state.results,
                next_result: state.next_result,
            };
            index.scenarios.insert(id, Arc::new(RwLock::new(stored)));
        }
        Ok(Self {
            data_dir: Some(dir.to_path_buf()),
            index: RwLock::new(index),
        })
    }

    pub fn create(&self, scenario: Scenario) -> Result<Entry, ApiError> {
        let mut index = self.index.write().expect("index lock");
        index.next_id += 1;
        let id = format!("s{}", index.next_id);
        let stored = StoredScenario {
            id: id.clone(),
            scenario,
            revision: 1,
            results: Vec::new(),
            next_result: 0,
        };
        self.snapshot(&stored, true)?;
        let entry = Arc::new(RwLock::new(stored));
        index.scenarios.insert(id, entry.clone());
        Ok(entry)
    }

    pub fn get(&self, id: &str) -> Result<Entry, ApiError> {
        self.index
            .read()
            .expect("index lock")
            .scenarios
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }

    pub fn ids(&self) -> Vec<String> {
        self.index.read().expect("index lock").scenarios.keys().cloned().collect()
    }

    /// Writes the state file, and the bundle too when `bundle` is set.
    pub fn snapshot(&self, s: &StoredScenario, bundle: bool) -> Result<(), ApiError> {
        let Some(root) = &self.data_dir else {
            return Ok(());
        };
        let dir = root.join(&s.id);
        std::fs::create_dir_all(&dir).map_err(ApiError::storage)?;
        if bundle {
            save_scenario(&s.scenario, &dir.join(BUNDLE_DIR))?;
        }
        let state = State {
            revision: s.revision,
            next_result: s.next_result,
            results: s.results.clone(),
        };
        let mut text = serde_json::to_string_pretty(&state).map_err(ApiError::storage)?;
        text.push('\n');
        write_atomic(&dir.join(STATE_FILE), &text).map_err(ApiError::storage)
    }
}
