//! Loaders for the tables under `data/`. Percent tables are returned as
//! fractions aligned with a roster.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use evirank_core::io::{read_table, LabeledTable};
use evirank_core::{Error, Provenance, RankingList, Result, Roster};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn table(name: &str) -> Result<LabeledTable> {
    read_table(&data_dir().join(name))
}

/// First value column of a one-column table, in `roster` order.
pub fn column(name: &str, roster: &Roster) -> Result<Vec<f64>> {
    let t = table(name)?;
    let mut out = vec![f64::NAN; roster.len()];
    for (i, label) in t.row_labels.iter().enumerate() {
        out[roster.require(label)?] = t.values[(i, 0)];
    }
    if out.iter().any(|v| v.is_nan()) {
        return Err(Error::RosterMismatch(format!("{name} does not cover the roster")));
    }
    Ok(out)
}

/// A percent column as fractions.
pub fn shares(name: &str, roster: &Roster) -> Result<Vec<f64>> {
    Ok(column(name, roster)?.into_iter().map(|v| v / 100.0).collect())
}

/// A square table reordered so rows and columns follow `roster`.
pub fn square(name: &str, roster: &Roster) -> Result<Vec<Vec<f64>>> {
    let t = table(name)?;
    let m = roster.len();
    if t.row_labels.len() != m || t.col_labels.len() != m {
        return Err(Error::RosterMismatch(format!("{name} is not {m}x{m}")));
    }
    let cols = t
        .col_labels
        .iter()
        .map(|c| roster.require(c))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![vec![0.0; m]; m];
    for (r, label) in t.row_labels.iter().enumerate() {
        let i = roster.require(label)?;
        for (c, &j) in cols.iter().enumerate() {
            out[i][j] = t.values[(r, c)];
        }
    }
    Ok(out)
}

/// Every printed ranking list, keyed by name.
pub fn lists() -> Result<BTreeMap<String, Vec<String>>> {
    let path = data_dir().join("ranking_lists.tsv");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut f = l.split('\t').map(str::trim);
            let name = f.next().unwrap_or_default().to_string();
            (name, f.map(str::to_string).collect())
        })
        .collect())
}

pub fn list(name: &str) -> Result<RankingList> {
    let order = lists()?
        .remove(name)
        .ok_or_else(|| Error::Invalid(format!("no printed list named {name}")))?;
    RankingList::from_order(order, Provenance::new(format!("printed:{name}"), None))
}
