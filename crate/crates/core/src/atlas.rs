//! Atlas tables: diagrams arranged by declared `L₋` class (rows) and `L₊`
//! class (columns), checked for consistency and for the counting argument.
//!
//! ```json
//! {"sym_order": 2, "rows": ["a"], "cols": ["x", "y"],
//!  "cells": {"1,1": ["trefoil.grid"], "1,2": ["key:05000102..."]}}
//! ```
//!
//! Cell indices are 1-based `row,col`. An entry is a path to a `.grid` file,
//! resolved against the table's directory, or `key:` followed by a hex key.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::CanonicalKey;
use crate::exchange::{exchange_class, Fingerprint, DEFAULT_NODE_CAP};
use crate::grid::Diagram;
use crate::moves::ContactSign;
use crate::search::{equiv_legendrian, lambda_classes, SearchCaps, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasTable {
    pub sym_order: u64,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("atlas JSON: {0}")]
    Json(String),
    #[error("atlas table: {0}")]
    Invalid(String),
    #[error("entry {entry:?}: {message}")]
    Entry { entry: String, message: String },
}

impl AtlasTable {
    pub fn from_json(text: &str) -> Result<AtlasTable, AtlasError> {
        let t: AtlasTable = serde_json::from_str(text).map_err(|e| AtlasError::Json(e.to_string()))?;
        t.check()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    fn check(&self) -> Result<(), AtlasError> {
        if self.sym_order == 0 {
            return Err(AtlasError::Invalid("sym_order must be at least 1".into()));
        }
        for cell in self.cells.keys() {
            let (r, c) = parse_cell(cell).ok_or_else(|| AtlasError::Invalid(format!("bad cell index {cell:?}")))?;
            if r >= self.rows.len() || c >= self.cols.len() {
                return Err(AtlasError::Invalid(format!("cell {cell:?} is outside the table")));
            }
        }
        Ok(())
    }

    /// Zero-based `(row, col)` with entries, in row-major order.
    pub fn cell_entries(&self) -> Vec<((usize, usize), &[String])> {
        let mut v: Vec<_> = self
            .cells
            .iter()
            .filter_map(|(k, e)| parse_cell(k).map(|rc| (rc, e.as_slice())))
            .collect();
        v.sort_by_key(|(rc, _)| *rc);
        v
    }

    /// Loads every entry with `resolve`.
    pub fn load(&self, resolve: impl Fn(&str) -> Result<Diagram, String>) -> Result<LoadedAtlas, AtlasError> {
        let mut cells = BTreeMap::new();
        for (rc, entries) in self.cell_entries() {
            let mut ds = Vec::new();
            for e in entries {
                let d = resolve(e).map_err(|message| AtlasError::Entry { entry: e.clone(), message })?;
                ds.push(Entry { name: e.clone(), diagram: d });
            }
            cells.insert(rc, ds);
        }
        Ok(LoadedAtlas { sym_order: self.sym_order, rows: self.rows.len(), cols: self.cols.len(), cells })
    }

    /// [`AtlasTable::load`] with entries resolved against `base`.
    pub fn load_from(&self, base: &Path) -> Result<LoadedAtlas, AtlasError> {
        self.load(|e| resolve_entry(base, e))
    }
}

fn parse_cell(s: &str) -> Option<(usize, usize)> {
    let (r, c) = s.split_once(',')?;
    let (r, c): (usize, usize) = (r.trim().parse().ok()?, c.trim().parse().ok()?);
    (r >= 1 && c >= 1).then(|| (r - 1, c - 1))
}

pub fn resolve_entry(base: &Path, entry: &str) -> Result<Diagram, String> {
    if let Some(hex) = entry.strip_prefix("key:") {
        return CanonicalKey::from_hex(hex).and_then(|k| k.decode()).map_err(|e| e.to_string());
    }
    let text = std::fs::read_to_string(base.join(entry)).map_err(|e| e.to_string())?;
    crate::text::parse(&text).map_err(|e| e.to_string())
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub diagram: Diagram,
}

#[derive(Clone, Debug)]
pub struct LoadedAtlas {
    pub sym_order: u64,
    pub rows: usize,
    pub cols: usize,
    pub cells: BTreeMap<(usize, usize), Vec<Entry>>,
}

impl LoadedAtlas {
    fn column(&self, c: usize) -> Vec<&Entry> {
        self.cells.iter().filter(|((_, cc), _)| *cc == c).flat_map(|(_, e)| e).collect()
    }

    fn row(&self, r: usize) -> Vec<&Entry> {
        self.cells.iter().filter(|((rr, _), _)| *rr == r).flat_map(|(_, e)| e).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    fn combine(it: impl IntoIterator<Item = Status>) -> Status {
        let mut out = Status::Pass;
        for s in it {
            match s {
                Status::Fail => return Status::Fail,
                Status::Unknown => out = Status::Unknown,
                Status::Pass => {}
            }
        }
        out
    }
}

/// One same-line equivalence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCheck {
    /// `column` (checked for `L₊`) or `row` (checked for `L₋`).
    pub line: String,
    pub index: usize,
    pub first: String,
    pub second: String,
    pub status: Status,
    pub verdict: String,
    pub witness: Option<Witness>,
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub row: usize,
    pub col: usize,
    pub grid_size: Option<usize>,
    /// Certified classes found by the scan that the cell does not list.
    pub uncovered: Vec<String>,
    pub certified: usize,
    pub unknown: usize,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counting {
    pub sym_order: u64,
    /// Cells holding more than `sym_order` distinct classes: `(row, col, count)`.
    pub overflowing_cells: Vec<(usize, usize, usize)>,
    /// Column pairs whose merge would overflow a cell.
    pub distinguished_columns: Vec<(usize, usize)>,
    pub distinguished_rows: Vec<(usize, usize)>,
    pub contradiction: bool,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub same_line: Vec<LineCheck>,
    pub same_line_status: Status,
    /// Entry pairs sharing an exchange class.
    pub shared_classes: Vec<(String, String)>,
    pub distinct_classes_status: Status,
    pub coverage: Vec<Coverage>,
    pub coverage_status: Status,
    pub counting: Counting,
    pub verdict: Status,
}

fn line_check(line: &str, index: usize, a: &Entry, b: &Entry, sign: ContactSign, caps: &SearchCaps) -> LineCheck {
    // A single stabilization usually suffices, so try one cell larger first.
    let tight = SearchCaps { max_grid_size: a.diagram.n().max(b.diagram.n()) + 1, ..*caps };
    let mut v = equiv_legendrian(&a.diagram, &b.diagram, sign, &tight);
    if !matches!(v, Verdict::Equivalent(_) | Verdict::Distinct(_)) && caps.max_grid_size > tight.max_grid_size {
        v = equiv_legendrian(&a.diagram, &b.diagram, sign, caps);
    }
    let (status, witness, certificate) = match &v {
        Verdict::Equivalent(c) => (Status::Pass, None, Some(c.to_string())),
        Verdict::Distinct(w) => (Status::Fail, Some(w.clone()), None),
        _ => (Status::Unknown, None, None),
    };
    LineCheck {
        line: line.into(),
        index: index + 1,
        first: a.name.clone(),
        second: b.name.clone(),
        status,
        verdict: v.name().into(),
        witness,
        certificate,
    }
}

fn counting(atlas: &LoadedAtlas, cls: &BTreeMap<(usize, usize), BTreeSet<Fingerprint>>) -> Counting {
    let k = atlas.sym_order as usize;
    let size = |r: usize, c: usize| cls.get(&(r, c)).map_or(0, |s| s.len());
    let merged = |a: (usize, usize), b: (usize, usize)| {
        let empty = BTreeSet::new();
        cls.get(&a).unwrap_or(&empty).union(cls.get(&b).unwrap_or(&empty)).count()
    };
    let mut overflowing_cells = Vec::new();
    for r in 0..atlas.rows {
        for c in 0..atlas.cols {
            if size(r, c) > k {
                overflowing_cells.push((r + 1, c + 1, size(r, c)));
            }
        }
    }
    let mut distinguished_columns = Vec::new();
    for c1 in 0..atlas.cols {
        for c2 in c1 + 1..atlas.cols {
            if (0..atlas.rows).any(|r| merged((r, c1), (r, c2)) > k) {
                distinguished_columns.push((c1 + 1, c2 + 1));
            }
        }
    }
    let mut distinguished_rows = Vec::new();
    for r1 in 0..atlas.rows {
        for r2 in r1 + 1..atlas.rows {
            if (0..atlas.cols).any(|c| merged((r1, c), (r2, c)) > k) {
                distinguished_rows.push((r1 + 1, r2 + 1));
            }
        }
    }
    let contradiction = !overflowing_cells.is_empty();
    Counting {
        sym_order: atlas.sym_order,
        overflowing_cells,
        distinguished_columns,
        distinguished_rows,
        contradiction,
        status: if contradiction { Status::Fail } else { Status::Pass },
    }
}

/// Runs all table checks. The verdict is `Pass` only when every check
/// certifies; a coverage scan can fail only by finding a certified class
/// the table omits.
pub fn atlas_verify(atlas: &LoadedAtlas, caps: &SearchCaps) -> AtlasReport {
    let mut same_line = Vec::new();
    for c in 0..atlas.cols {
        let col = atlas.column(c);
        for e in col.iter().skip(1) {
            same_line.push(line_check("column", c, col[0], e, ContactSign::Plus, caps));
        }
    }
    for r in 0..atlas.rows {
        let row = atlas.row(r);
        for e in row.iter().skip(1) {
            same_line.push(line_check("row", r, row[0], e, ContactSign::Minus, caps));
        }
    }
    let same_line_status = Status::combine(same_line.iter().map(|l| l.status));

    let mut cls: BTreeMap<(usize, usize), BTreeSet<Fingerprint>> = BTreeMap::new();
    let mut owner: BTreeMap<Fingerprint, String> = BTreeMap::new();
    let mut shared_classes = Vec::new();
    let mut unknown_class = false;
    for (rc, entries) in &atlas.cells {
        for e in entries {
            match exchange_class(&e.diagram, DEFAULT_NODE_CAP) {
                Ok(x) => {
                    let f = x.fingerprint();
                    if let Some(prev) = owner.get(&f) {
                        shared_classes.push((prev.clone(), e.name.clone()));
                    } else {
                        owner.insert(f, e.name.clone());
                    }
                    cls.entry(*rc).or_default().insert(f);
                }
                Err(_) => unknown_class = true,
            }
        }
    }
    let distinct_classes_status = if !shared_classes.is_empty() {
        Status::Fail
    } else if unknown_class {
        Status::Unknown
    } else {
        Status::Pass
    };

    let mut coverage = Vec::new();
    for r in 0..atlas.rows {
        for c in 0..atlas.cols {
            let (row, col) = (atlas.row(r), atlas.column(c));
            let (Some(d2), Some(d1)) = (row.first(), col.first()) else { continue };
            let n3 = crate::search::middle_size(&d1.diagram, &d2.diagram);
            let scan = SearchCaps { max_grid_size: caps.max_grid_size.min(n3.max(2) as usize + 1), ..*caps };
            let lam = lambda_classes(&d1.diagram, &d2.diagram, &scan);
            let listed = cls.get(&(r, c)).cloned().unwrap_or_default();
            let uncovered = lam
                .certified
                .iter()
                .filter(|l| !listed.contains(&l.fingerprint))
                .map(|l| l.fingerprint.to_string())
                .collect();
            coverage.push(Coverage {
                row: r + 1,
                col: c + 1,
                grid_size: lam.grid_size,
                uncovered,
                certified: lam.certified.len(),
                unknown: lam.unknown.len(),
                exhaustive: lam.exhaustive_within_bound,
            });
        }
    }
    let coverage_status = if coverage.iter().any(|c| !c.uncovered.is_empty()) { Status::Fail } else { Status::Pass };

    let counting = counting(atlas, &cls);
    let verdict = Status::combine([same_line_status, distinct_classes_status, coverage_status, counting.status]);
    AtlasReport {
        same_line,
        same_line_status,
        shared_classes,
        distinct_classes_status,
        coverage,
        coverage_status,
        counting,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_indices_are_checked() {
        let ok = r#"{"sym_order":1,"rows":["a"],"cols":["b"],"cells":{"1,1":["key:02000101000000"]}}"#;
        assert!(AtlasTable::from_json(ok).is_ok());
        let outside = ok.replace("\"1,1\"", "\"2,1\"");
        assert!(AtlasTable::from_json(&outside).is_err());
        let zero = ok.replace("\"1,1\"", "\"0,1\"");
        assert!(AtlasTable::from_json(&zero).is_err());
        assert!(AtlasTable::from_json(&ok.replace("\"sym_order\":1", "\"sym_order\":0")).is_err());
    }
}
