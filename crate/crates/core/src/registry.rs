//! Known van der Waerden numbers with provenance.
//!
//! Stored as CSV with header `r,k,w,source,note`. Files written by
//! [`Registry::to_csv`] load back byte-identically.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::search::SearchOutcome;

pub const HEADER: &str = "r,k,w,source,note";

/// The six seed values shipped with the crate.
pub const BUNDLED_CSV: &str = include_str!("../data/registry.csv");

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("invalid record W({r}, {k}) = {w}: {message}")]
    Invariant { r: u64, k: u64, w: u64, message: String },
    #[error("duplicate record for W({r}, {k})")]
    Duplicate { r: u64, k: u64 },
    #[error("outcome is for W({got_r}, {got_k}), record is W({r}, {k})")]
    KeyMismatch { r: u64, k: u64, got_r: u64, got_k: u64 },
    #[error("search outcome has no value (budget exhausted)")]
    NoValue,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "paper-table1")]
    PaperTable1,
    #[serde(rename = "literature")]
    Literature,
    #[serde(rename = "computed-by-search")]
    ComputedBySearch,
}

impl Source {
    pub fn token(self) -> &'static str {
        match self {
            Source::PaperTable1 => "paper-table1",
            Source::Literature => "literature",
            Source::ComputedBySearch => "computed-by-search",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Source::PaperTable1, Source::Literature, Source::ComputedBySearch]
            .into_iter()
            .find(|src| src.token() == s)
            .ok_or_else(|| format!("unknown source {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VdwRecord {
    pub r: u64,
    pub k: u64,
    pub w: u64,
    pub source: Source,
    pub note: String,
}

impl VdwRecord {
    fn check(&self) -> Result<(), RegistryError> {
        let fail = |message: String| {
            Err(RegistryError::Invariant {
                r: self.r,
                k: self.k,
                w: self.w,
                message,
            })
        };
        if self.r < 2 {
            return fail("r must be at least 2".into());
        }
        if self.k < 1 {
            return fail("k must be at least 1".into());
        }
        if self.w < 1 {
            return fail("w must be at least 1".into());
        }
        if self.k >= 3 && self.w <= self.r.max(self.k) {
            return fail("w must exceed max(r, k) when k >= 3".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch { registry: u64, computed: u64 },
}

/// Registry records in file order; `(r, k)` is unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    records: Vec<VdwRecord>,
}

impl Registry {
    pub fn bundled() -> Self {
        BUNDLED_CSV.parse().expect("bundled registry is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RegistryError> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), RegistryError> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // Serializing the first record writes the header; an empty registry
        // still gets one.
        if self.records.is_empty() {
            w.write_record(HEADER.split(',')).expect("write to memory");
        }
        for rec in &self.records {
            w.serialize(rec).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }

    pub fn records(&self) -> &[VdwRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lookup(&self, r: u64, k: u64) -> Option<&VdwRecord> {
        self.records.iter().find(|rec| rec.r == r && rec.k == k)
    }

    /// Adds a record; an existing `(r, k)` is never overwritten.
    pub fn append(&mut self, record: VdwRecord) -> Result<(), RegistryError> {
        record.check()?;
        if self.lookup(record.r, record.k).is_some() {
            return Err(RegistryError::Duplicate {
                r: record.r,
                k: record.k,
            });
        }
        self.records.push(record);
        Ok(())
    }
}

impl FromStr for Registry {
    type Err = RegistryError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut registry = Registry::default();
        if text.trim().is_empty() {
            return Ok(registry);
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut rows = reader.records();
        match rows.next() {
            Some(Ok(h)) if h.iter().eq(HEADER.split(',')) => {}
            Some(Ok(_)) => {
                return Err(RegistryError::Parse {
                    line: 1,
                    message: format!("header must be {HEADER:?}"),
                })
            }
            Some(Err(e)) => return Err(csv_error(e)),
            None => return Ok(registry),
        }
        let header = csv::StringRecord::from(HEADER.split(',').collect::<Vec<_>>());
        for row in rows {
            let row = row.map_err(csv_error)?;
            let line = row.position().map_or(0, |p| p.line());
            let record: VdwRecord = row.deserialize(Some(&header)).map_err(|e| RegistryError::Parse {
                line,
                message: e.to_string(),
            })?;
            registry.append(record)?;
        }
        Ok(registry)
    }
}

fn csv_error(e: csv::Error) -> RegistryError {
    RegistryError::Parse {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}

/// Compares a registry value with a search result for the same `(r, k)`.
pub fn reconcile(record: &VdwRecord, outcome: &SearchOutcome) -> Result<Verdict, RegistryError> {
    if (record.r, record.k) != (outcome.r, outcome.k) {
        return Err(RegistryError::KeyMismatch {
            r: record.r,
            k: record.k,
            got_r: outcome.r,
            got_k: outcome.k,
        });
    }
    let computed = outcome.w_value.ok_or(RegistryError::NoValue)?;
    Ok(if computed == record.w {
        Verdict::Match
    } else {
        Verdict::Mismatch {
            registry: record.w,
            computed,
        }
    })
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::*;

    fn outcome(r: u64, k: u64, w: Option<u64>) -> SearchOutcome {
        SearchOutcome {
            r,
            k,
            w_value: w,
            witness: None,
            nodes_explored: 0,
            budget_exhausted: w.is_none(),
            elapsed: Duration::ZERO,
        }
    }

    #[test]
    fn bundled_values() {
        let reg = Registry::bundled();
        assert_eq!(reg.len(), 6);
        assert_eq!(reg.lookup(2, 4).unwrap().w, 35);
        assert_eq!(reg.lookup(2, 6).unwrap().w, 1132);
        assert!(reg.lookup(7, 7).is_none());
        assert!(reg.records().iter().all(|r| r.source == Source::PaperTable1));
    }

    #[test]
    fn bundled_file_roundtrips() {
        assert_eq!(Registry::bundled().to_csv(), BUNDLED_CSV);
    }

    #[test]
    fn empty_inputs() {
        assert!("".parse::<Registry>().unwrap().is_empty());
        assert!(format!("{HEADER}\n").parse::<Registry>().unwrap().is_empty());
        assert_eq!(Registry::default().to_csv(), format!("{HEADER}\n"));
    }

    #[test]
    fn notes_with_commas_survive() {
        let mut reg = Registry::default();
        reg.append(VdwRecord {
            r: 2,
            k: 3,
            w: 9,
            source: Source::Literature,
            note: "a, b \"quoted\"".into(),
        })
        .unwrap();
        let text = reg.to_csv();
        assert_eq!(text.parse::<Registry>().unwrap(), reg);
    }

    #[test]
    fn rejects_bad_files() {
        let dup = format!("{HEADER}\n2,3,9,literature,\n2,3,9,paper-table1,\n");
        assert!(matches!(dup.parse::<Registry>(), Err(RegistryError::Duplicate { r: 2, k: 3 })));
        let small = format!("{HEADER}\n2,3,3,literature,\n");
        assert!(matches!(small.parse::<Registry>(), Err(RegistryError::Invariant { .. })));
        let bad = format!("{HEADER}\n2,3,9,literature,\n2,x,9,literature,\n");
        assert!(matches!(bad.parse::<Registry>(), Err(RegistryError::Parse { line: 3, .. })));
        let src = format!("{HEADER}\n2,3,9,rumour,\n");
        assert!(matches!(src.parse::<Registry>(), Err(RegistryError::Parse { line: 2, .. })));
        assert!("r,k,w\n".parse::<Registry>().is_err());
    }

    #[test]
    fn append_never_overwrites() {
        let mut reg = Registry::bundled();
        let err = reg.append(VdwRecord {
            r: 2,
            k: 3,
            w: 10,
            source: Source::ComputedBySearch,
            note: String::new(),
        });
        assert!(err.is_err());
        assert_eq!(reg.lookup(2, 3).unwrap().w, 9);
    }

    #[test]
    fn reconcile_verdicts() {
        let reg = Registry::bundled();
        let r23 = reg.lookup(2, 3).unwrap();
        assert_eq!(reconcile(r23, &outcome(2, 3, Some(9))).unwrap(), Verdict::Match);
        assert_eq!(
            reconcile(reg.lookup(3, 3).unwrap(), &outcome(3, 3, Some(27))).unwrap(),
            Verdict::Match
        );
        assert_eq!(
            reconcile(r23, &outcome(2, 3, Some(8))).unwrap(),
            Verdict::Mismatch { registry: 9, computed: 8 }
        );
        assert!(matches!(
            reconcile(r23, &outcome(3, 3, Some(27))),
            Err(RegistryError::KeyMismatch { .. })
        ));
        assert!(matches!(reconcile(r23, &outcome(2, 3, None)), Err(RegistryError::NoValue)));
    }
}
