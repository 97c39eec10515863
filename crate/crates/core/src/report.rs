//! Corpus census: classify every `.smt2` file under a directory.
//!
//! The report is a JSON document:
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "tool": "nradiv",
//!   "version": "<crate version>",
//!   "generated_at": "<RFC 3339 timestamp>",
//!   "files": [
//!     { "path": "<relative, '/'-separated>",
//!       "status": "ok" | "parse_error" | "io_error",
//!       "error": "<message>",               // only when status != ok
//!       "verdict": "polynomial_only" | "constant_division_only" | "non_constant_division",
//!       "occurrences": <int>,
//!       "classes": { "constant_nonzero": <int>, "constant_zero": <int>, "non_constant": <int> } }
//!   ],
//!   "totals": {
//!     "files": <int>, "parsed": <int>, "failed": <int>,
//!     "verdicts": { "polynomial_only": <int>, "constant_division_only": <int>, "non_constant_division": <int> },
//!     "occurrences": <int>,
//!     "classes": { ... as above ... }
//!   }
//! }
//! ```
//!
//! Files are sorted by path; `verdict`, `occurrences` and `classes` are
//! omitted for files that failed. Apart from `generated_at`, two scans of
//! the same tree produce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

use crate::analysis::{classify_script, ClassCounts, FragmentVerdict, VerdictLabel};
use crate::smtlib::{parse_script, ParseError, Script};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "nradiv";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
}

/// Reads, parses and classifies one file.
pub fn classify_file(path: &Path) -> Result<(Script, FragmentVerdict), FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let script = parse_script(&text).map_err(|source| FileError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let verdict = classify_script(&script);
    Ok((script, verdict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileStatus {
    Ok,
    ParseError,
    IoError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub status: FileStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<VerdictLabel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub occurrences: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classes: Option<ClassCounts>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub polynomial_only: usize,
    pub constant_division_only: usize,
    pub non_constant_division: usize,
}

impl VerdictCounts {
    pub fn get(&self, label: VerdictLabel) -> usize {
        match label {
            VerdictLabel::PolynomialOnly => self.polynomial_only,
            VerdictLabel::ConstantDivisionOnly => self.constant_division_only,
            VerdictLabel::NonConstantDivision => self.non_constant_division,
        }
    }

    fn bump(&mut self, label: VerdictLabel) {
        match label {
            VerdictLabel::PolynomialOnly => self.polynomial_only += 1,
            VerdictLabel::ConstantDivisionOnly => self.constant_division_only += 1,
            VerdictLabel::NonConstantDivision => self.non_constant_division += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub files: usize,
    pub parsed: usize,
    pub failed: usize,
    pub verdicts: VerdictCounts,
    pub occurrences: usize,
    pub classes: ClassCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub generated_at: String,
    pub files: Vec<FileRecord>,
    pub totals: Totals,
}

impl CorpusReport {
    pub fn from_records(mut files: Vec<FileRecord>) -> Self {
        files.sort_by(|a, b| a.path.cmp(&b.path));
        let mut totals = Totals {
            files: files.len(),
            ..Totals::default()
        };
        for f in &files {
            match f.status {
                FileStatus::Ok => totals.parsed += 1,
                _ => totals.failed += 1,
            }
            if let Some(v) = f.verdict {
                totals.verdicts.bump(v);
            }
            totals.occurrences += f.occurrences.unwrap_or(0);
            if let Some(c) = &f.classes {
                totals.classes.add(c);
            }
        }
        CorpusReport {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            files,
            totals,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn record(rel: String, path: &Path) -> FileRecord {
    match classify_file(path) {
        Ok((_, verdict)) => FileRecord {
            path: rel,
            status: FileStatus::Ok,
            error: None,
            verdict: Some(verdict.label),
            occurrences: Some(verdict.occurrences.len()),
            classes: Some(ClassCounts::of(&verdict.occurrences)),
        },
        Err(e) => FileRecord {
            path: rel,
            status: match e {
                FileError::Io { .. } => FileStatus::IoError,
                FileError::Parse { .. } => FileStatus::ParseError,
            },
            error: Some(match e {
                FileError::Io { source, .. } => source.to_string(),
                FileError::Parse { source, .. } => source.to_string(),
            }),
            verdict: None,
            occurrences: None,
            classes: None,
        },
    }
}

fn relative(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Scans `root` recursively for `*.smt2` files. Unreadable entries become
/// `io_error` records; only an unreadable `root` is an error.
pub fn scan_directory(root: &Path) -> std::io::Result<CorpusReport> {
    fs::read_dir(root)?;
    let mut work: Vec<(String, PathBuf)> = Vec::new();
    let mut failed: Vec<FileRecord> = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        match entry {
            Ok(e) => {
                if e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "smt2") {
                    work.push((relative(root, e.path()), e.path().to_path_buf()));
                }
            }
            Err(e) => failed.push(FileRecord {
                path: e.path().map(|p| relative(root, p)).unwrap_or_default(),
                status: FileStatus::IoError,
                error: Some(e.to_string()),
                verdict: None,
                occurrences: None,
                classes: None,
            }),
        }
    }
    let mut records: Vec<FileRecord> = work
        .par_iter()
        .map(|(rel, path)| record(rel.clone(), path))
        .collect();
    records.extend(failed);
    Ok(CorpusReport::from_records(records))
}
