//! Scan checkpoints: the merged prefix of a scan, written atomically.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::output::write_atomic;
use crate::records::{RecordRow, RecordTable, ScanRange};

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format: u32,
    pub from: u64,
    pub to: u64,
    /// Every `n < next` has been merged into `rows`.
    pub next: u64,
    pub rows: Vec<RecordRow>,
    pub checksum: String,
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("not a checkpoint: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported checkpoint format {0}")]
    Version(u32),
    #[error("checksum mismatch")]
    Checksum,
    #[error("inconsistent checkpoint: {0}")]
    Inconsistent(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn checksum(from: u64, to: u64, next: u64, rows: &[RecordRow]) -> String {
    let mut h = Sha256::new();
    h.update(format!("pierce-checkpoint/{FORMAT_VERSION}:{from}:{to}:{next}"));
    for r in rows {
        h.update(format!(";{}:{}:{}", r.n, r.pmax, r.argmax));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Checkpoint {
    pub fn new(from: u64, to: u64, next: u64, rows: Vec<RecordRow>) -> Self {
        let checksum = checksum(from, to, next, &rows);
        Checkpoint {
            format: FORMAT_VERSION,
            from,
            to,
            next,
            rows,
            checksum,
        }
    }

    pub fn table(&self) -> RecordTable {
        RecordTable {
            range: Some(ScanRange {
                from: self.from,
                to: self.to,
            }),
            rows: self.rows.clone(),
        }
    }

    fn validate(&self) -> Result<(), CheckpointError> {
        if self.format != FORMAT_VERSION {
            return Err(CheckpointError::Version(self.format));
        }
        if self.checksum != checksum(self.from, self.to, self.next, &self.rows) {
            return Err(CheckpointError::Checksum);
        }
        let bad = |m: &str| Err(CheckpointError::Inconsistent(m.into()));
        if self.from == 0
            || self.from > self.to
            || self.next < self.from
            || self.next > self.to.saturating_add(1)
        {
            return bad("need 1 <= from <= next <= to + 1");
        }
        if (self.next > self.from) != !self.rows.is_empty() {
            return bad("rows must be present exactly when progress was made");
        }
        if self.rows.last().is_some_and(|r| r.n >= self.next) {
            return bad("row beyond the merged prefix");
        }
        self.table()
            .check_shape()
            .map_err(|e| CheckpointError::Inconsistent(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

pub fn parse_checkpoint(text: &str) -> Result<Checkpoint, CheckpointError> {
    let cp: Checkpoint = serde_json::from_str(text)?;
    cp.validate()?;
    Ok(cp)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, CheckpointError> {
    parse_checkpoint(&std::fs::read_to_string(path)?)
}
