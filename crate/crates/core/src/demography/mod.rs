//! Per-user demographic group labels from per-message dialect posteriors,
//! with manual removal/addition overrides.
//!
//! Posterior files are delimited text with header
//! `user_id,message_id,p_white,p_black,p_hispanic,p_asian`. Override files
//! hold one user id per line under `removals` and `additions` section
//! headers (`removals`, `removals:` or `[removals]`). Group files are
//! `node_id,group`.

use crate::error::{Error, Result};
use crate::graph::csv_error;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

pub const CATEGORIES: [&str; 4] = ["white", "black", "hispanic", "asian"];
const COLUMNS: [&str; 4] = ["p_white", "p_black", "p_hispanic", "p_asian"];

/// Tolerance on the per-row probability sum.
pub const SUM_TOL: f64 = 1e-6;

/// Index into the posterior vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Category(pub usize);

impl FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let idx = match s.as_str() {
            "aa" | "african-american" | "african_american" => Some(1),
            _ => CATEGORIES
                .iter()
                .position(|c| *c == s || format!("p_{c}") == s)
                .or_else(|| s.parse().ok().filter(|&i: &usize| i < 4)),
        };
        idx.map(Category)
            .ok_or_else(|| Error::Usage(format!("unknown category '{s}' (expected one of {CATEGORIES:?})")))
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(CATEGORIES[self.0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorRow {
    pub user_id: u64,
    pub message_id: String,
    pub probs: [f64; 4],
}

pub fn read_posteriors(path: impl AsRef<Path>) -> Result<Vec<PosteriorRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_posteriors(file, path)
}

/// Parse and validate a posterior file (tab-delimited if the header has a tab).
pub fn parse_posteriors<R: Read>(mut reader: R, origin: &Path) -> Result<Vec<PosteriorRow>> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|e| Error::io(origin, e))?;
    let delimiter = if text.lines().next().unwrap_or("").contains('\t') { b'\t' } else { b',' };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| csv_error(origin, e))?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("{}: posterior file lacks a '{name}' column", origin.display())))
    };
    let user_col = col("user_id")?;
    let msg_col = col("message_id")?;
    let prob_cols = COLUMNS.map(col);
    let mut idx = [0usize; 4];
    for (i, c) in prob_cols.into_iter().enumerate() {
        idx[i] = c?;
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(origin, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let bad = |msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let field = |i: usize| rec.get(i).unwrap_or("");
        let user_id = field(user_col)
            .parse()
            .map_err(|_| bad(format!("invalid user_id '{}'", field(user_col))))?;
        let mut probs = [0.0; 4];
        for (p, &c) in probs.iter_mut().zip(&idx) {
            *p = field(c)
                .parse()
                .ok()
                .filter(|x: &f64| (0.0..=1.0).contains(x))
                .ok_or_else(|| bad(format!("probability '{}' not in [0, 1]", field(c))))?;
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(bad(format!("probabilities sum to {sum}, not 1")));
        }
        rows.push(PosteriorRow {
            user_id,
            message_id: field(msg_col).to_string(),
            probs,
        });
    }
    Ok(rows)
}

/// Unweighted per-user mean of the message posteriors. Every id in
/// `required` must have at least one row.
pub fn average_posteriors(rows: &[PosteriorRow], required: &[u64]) -> Result<BTreeMap<u64, [f64; 4]>> {
    let mut acc: BTreeMap<u64, ([f64; 4], usize)> = BTreeMap::new();
    for r in rows {
        let e = acc.entry(r.user_id).or_insert(([0.0; 4], 0));
        for (s, p) in e.0.iter_mut().zip(r.probs) {
            *s += p;
        }
        e.1 += 1;
    }
    let missing: Vec<String> = required
        .iter()
        .filter(|u| !acc.contains_key(u))
        .map(u64::to_string)
        .collect();
    if !missing.is_empty() {
        return Err(Error::data(format!("users with no posterior rows: {}", missing.join(", "))));
    }
    Ok(acc
        .into_iter()
        .map(|(u, (s, n))| (u, s.map(|x| x / n as f64)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Overrides {
    pub removals: BTreeSet<u64>,
    pub additions: BTreeSet<u64>,
}

pub fn read_overrides(path: impl AsRef<Path>) -> Result<Overrides> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_overrides(&text, path)
}

pub fn parse_overrides(text: &str, origin: &Path) -> Result<Overrides> {
    #[derive(Clone, Copy)]
    enum Section {
        None,
        Removals,
        Additions,
    }
    let mut out = Overrides::default();
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line: (i + 1) as u64,
            msg,
        };
        let head = line.trim_start_matches('[').trim_end_matches(']').trim_end_matches(':');
        match head.to_ascii_lowercase().as_str() {
            "removals" => section = Section::Removals,
            "additions" => section = Section::Additions,
            _ => {
                let id: u64 = line.parse().map_err(|_| bad(format!("expected a user id, got '{line}'")))?;
                match section {
                    Section::Removals => out.removals.insert(id),
                    Section::Additions => out.additions.insert(id),
                    Section::None => return Err(bad("user id before any removals/additions section".into())),
                };
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Model,
    OverrideRemoved,
    OverrideAdded,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Model => "model",
            Provenance::OverrideRemoved => "override-removed",
            Provenance::OverrideAdded => "override-added",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment {
    pub protected: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupAssignment {
    pub users: BTreeMap<u64, Assignment>,
}

impl GroupAssignment {
    pub fn protected(&self) -> impl Iterator<Item = u64> + '_ {
        self.users.iter().filter(|(_, a)| a.protected).map(|(&u, _)| u)
    }

    pub fn protected_count(&self) -> usize {
        self.protected().count()
    }
}

/// Protected iff `mean[category] > threshold`; then removals, then additions.
pub fn label_group(
    means: &BTreeMap<u64, [f64; 4]>,
    category: Category,
    threshold: f64,
    overrides: &Overrides,
) -> Result<GroupAssignment> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Usage(format!("threshold {threshold} outside (0, 1)")));
    }
    let unknown: Vec<String> = overrides
        .removals
        .iter()
        .chain(&overrides.additions)
        .filter(|u| !means.contains_key(u))
        .map(u64::to_string)
        .collect();
    if !unknown.is_empty() {
        return Err(Error::data(format!("overrides name unknown users: {}", unknown.join(", "))));
    }
    let mut users: BTreeMap<u64, Assignment> = means
        .iter()
        .map(|(&u, m)| {
            let a = Assignment {
                protected: m[category.0] > threshold,
                provenance: Provenance::Model,
            };
            (u, a)
        })
        .collect();
    for u in &overrides.removals {
        users.insert(
            *u,
            Assignment {
                protected: false,
                provenance: Provenance::OverrideRemoved,
            },
        );
    }
    for u in &overrides.additions {
        users.insert(
            *u,
            Assignment {
                protected: true,
                provenance: Provenance::OverrideAdded,
            },
        );
    }
    Ok(GroupAssignment { users })
}

/// Write `node_id,group[,provenance]` rows for every user.
pub fn write_groups<W: Write>(writer: W, assignment: &GroupAssignment, protected: &str, other: &str) -> Result<()> {
    let origin = Path::new("<groups>");
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node_id", "group", "provenance"])
        .map_err(|e| csv_error(origin, e))?;
    for (u, a) in &assignment.users {
        let g = if a.protected { protected } else { other };
        w.write_record([u.to_string(), g.to_string(), a.provenance.to_string()])
            .map_err(|e| csv_error(origin, e))?;
    }
    w.flush().map_err(|e| Error::io(origin, e))
}

/// Read a group file (`node_id,group`, extra columns ignored).
pub fn read_groups(path: impl AsRef<Path>) -> Result<BTreeMap<u64, String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let delimiter = if text.lines().next().unwrap_or("").contains('\t') { b'\t' } else { b',' };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("{}: group file lacks a '{name}' column", path.display())))
    };
    let (id_col, group_col) = (col("node_id")?, col("group")?);
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let id_text = rec.get(id_col).unwrap_or("");
        let id: u64 = id_text.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: format!("invalid node_id '{id_text}'"),
        })?;
        let group = rec.get(group_col).unwrap_or("").to_string();
        if out.insert(id, group).is_some() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("node {id} listed twice"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
