//! Append-only JSON-lines ledger of verification results.
//!
//! One record per line. Exact values are strings: `num/den` for rationals,
//! canonical sorted term lists for polynomials. Nothing is ever stored as a
//! floating-point number.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Overrides the directory of the default ledger file.
pub const LEDGER_DIR_ENV: &str = "STIRLING_IDENTITIES_LEDGER_DIR";
pub const DEFAULT_LEDGER_FILE: &str = "ledger.jsonl";

pub fn default_ledger_path() -> PathBuf {
    match std::env::var_os(LEDGER_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(DEFAULT_LEDGER_FILE),
        None => PathBuf::from(DEFAULT_LEDGER_FILE),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub timestamp_ms: u64,
    pub engine_version: String,
    /// The command line that produced the record.
    pub command: String,
    /// `part1`, `part2` or `bridge`.
    pub kind: String,
    pub params: BTreeMap<String, serde_json::Value>,
    /// `asserted` or `exploratory`.
    pub classification: String,
    /// `zero`, `nonzero`, `inconsistent` or `not_attempted`.
    pub verdict: String,
    pub value: String,
    pub visited: Option<u64>,
    pub elapsed_us: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LedgerRecord {
    pub fn is_asserted(&self) -> bool {
        self.classification == "asserted"
    }

    /// An asserted record whose verdict contradicts the identity under test.
    pub fn is_failure(&self) -> bool {
        self.is_asserted() && matches!(self.verdict.as_str(), "nonzero" | "inconsistent")
    }

    pub fn is_finding(&self) -> bool {
        matches!(self.verdict.as_str(), "nonzero" | "inconsistent")
    }

    /// The fields that must not depend on timing or thread count.
    pub fn outcome_key(&self) -> (String, String, String, String, String) {
        (
            self.kind.clone(),
            serde_json::to_string(&self.params).expect("params serialize"),
            self.classification.clone(),
            self.verdict.clone(),
            self.value.clone(),
        )
    }
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

/// Owns the ledger file on a dedicated thread; producers send records over
/// a channel. Each record is written with a single `write_all`.
pub struct LedgerWriter {
    tx: Option<mpsc::Sender<LedgerRecord>>,
    handle: Option<thread::JoinHandle<Result<usize>>>,
}

impl LedgerWriter {
    pub fn open(path: &Path) -> Result<Self> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let (tx, rx) = mpsc::channel::<LedgerRecord>();
        let handle = thread::spawn(move || -> Result<usize> {
            let mut written = 0;
            for record in rx {
                let mut line = serde_json::to_string(&record)?;
                line.push('\n');
                file.write_all(line.as_bytes())?;
                file.flush()?;
                written += 1;
            }
            Ok(written)
        });
        Ok(LedgerWriter { tx: Some(tx), handle: Some(handle) })
    }

    pub fn sender(&self) -> mpsc::Sender<LedgerRecord> {
        self.tx.clone().expect("writer open")
    }

    pub fn send(&self, record: LedgerRecord) -> Result<()> {
        self.tx
            .as_ref()
            .expect("writer open")
            .send(record)
            .map_err(|_| Error::Io(std::io::Error::other("ledger writer stopped")))
    }

    /// Closes the channel and waits for every queued record to hit disk.
    pub fn finish(mut self) -> Result<usize> {
        self.tx.take();
        match self.handle.take().expect("joined once").join() {
            Ok(r) => r,
            Err(_) => Err(Error::Io(std::io::Error::other("ledger writer panicked"))),
        }
    }
}

impl Drop for LedgerWriter {
    fn drop(&mut self) {
        self.tx.take();
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

/// Reads every parseable record; unparseable lines become warnings.
pub fn read_ledger(path: &Path) -> Result<(Vec<LedgerRecord>, Vec<String>)> {
    let file = fs::File::open(path)?;
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<LedgerRecord>(&line) {
            Ok(r) => records.push(r),
            Err(e) => warnings.push(format!("line {}: skipped corrupt record ({e})", i + 1)),
        }
    }
    Ok((records, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample(verdict: &str) -> LedgerRecord {
        LedgerRecord {
            timestamp_ms: 1,
            engine_version: ENGINE_VERSION.into(),
            command: "part1 --g 3".into(),
            kind: "part1".into(),
            params: [("g".to_string(), serde_json::json!(3))].into(),
            classification: "asserted".into(),
            verdict: verdict.into(),
            value: "0/1".into(),
            visited: Some(5),
            elapsed_us: 10,
            seed: 0,
            note: None,
        }
    }

    #[test]
    fn append_only_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/ledger.jsonl");
        for _ in 0..2 {
            let w = LedgerWriter::open(&path).unwrap();
            w.send(sample("zero")).unwrap();
            assert_eq!(w.finish().unwrap(), 1);
        }
        let (records, warnings) = read_ledger(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert!(warnings.is_empty());
        assert_eq!(records[0], sample("zero"));
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.jsonl");
        let good = serde_json::to_string(&sample("zero")).unwrap();
        fs::write(&path, format!("{good}\n{{not json\n\n{good}\n")).unwrap();
        let (records, warnings) = read_ledger(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn failure_classification() {
        assert!(!sample("zero").is_failure());
        assert!(sample("nonzero").is_failure());
        let mut r = sample("nonzero");
        r.classification = "exploratory".into();
        assert!(!r.is_failure());
        assert!(r.is_finding());
    }
}
