//! Parallel record scan over a range of `n`.
//!
//! Workers claim contiguous blocks of `n` from a shared counter and report
//! block-local records; the merger folds blocks in order, so the result does
//! not depend on the number of workers or on scheduling.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;

use pierce_core::pmax::PmaxEngine;

use crate::checkpoint::{load_checkpoint, Checkpoint};
use crate::error::{CliError, CliResult};
use crate::records::{RecordRow, RecordTable, ScanRange};

pub const DEFAULT_BLOCK: u64 = 256;
pub const DEFAULT_CHECKPOINT_INTERVAL: u64 = 50_000;

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub from: u64,
    pub to: u64,
    pub workers: usize,
    pub block: u64,
    pub checkpoint: Option<PathBuf>,
    /// Merged `n` between checkpoint writes.
    pub checkpoint_interval: u64,
    /// Stop once every `n <= halt_after` is merged, leaving a checkpoint.
    pub halt_after: Option<u64>,
}

impl ScanConfig {
    pub fn new(from: u64, to: u64) -> Self {
        ScanConfig {
            from,
            to,
            workers: 1,
            block: DEFAULT_BLOCK,
            checkpoint: None,
            checkpoint_interval: DEFAULT_CHECKPOINT_INTERVAL,
            halt_after: None,
        }
    }

    fn validate(&self) -> CliResult<()> {
        let usage = |m: &str| Err(CliError::Usage(m.into()));
        if self.from == 0 || self.from > self.to {
            return usage("scan range must satisfy 1 <= from <= to");
        }
        if self.to > pierce_core::MAX_N {
            return usage("scan range exceeds 2^63 - 1");
        }
        if self.workers == 0 || self.block == 0 || self.checkpoint_interval == 0 {
            return usage("workers, block size and checkpoint interval must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub table: RecordTable,
    /// First `n` not merged; `to + 1` when the scan finished.
    pub next: u64,
    pub resumed_from: Option<u64>,
}

impl ScanOutcome {
    pub fn complete(&self) -> bool {
        self.next > self.table.range.as_ref().map_or(0, |r| r.to)
    }
}

type BlockResult = Result<Vec<RecordRow>, String>;

fn scan_block(engine: &mut PmaxEngine, lo: u64, hi: u64) -> BlockResult {
    let mut rows = Vec::new();
    let mut best = 0;
    for n in lo..=hi {
        let r = engine.compute(n).map_err(|e| e.to_string())?;
        if r.pmax > best {
            best = r.pmax;
            rows.push(RecordRow {
                n,
                pmax: r.pmax,
                argmax: r.argmax,
            });
        }
    }
    Ok(rows)
}

fn resume_state(cfg: &ScanConfig) -> CliResult<Option<Checkpoint>> {
    let Some(path) = &cfg.checkpoint else {
        return Ok(None);
    };
    if !path.exists() {
        return Ok(None);
    }
    let hint = format!("delete {} to restart the scan from the beginning", path.display());
    let cp = load_checkpoint(path)
        .map_err(|e| CliError::Failure(format!("checkpoint {} is unusable ({e}); {hint}", path.display())))?;
    if (cp.from, cp.to) != (cfg.from, cfg.to) {
        return Err(CliError::Failure(format!(
            "checkpoint {} covers [{}, {}], not [{}, {}]; {hint}",
            path.display(),
            cp.from,
            cp.to,
            cfg.from,
            cfg.to
        )));
    }
    Ok(Some(cp))
}

pub fn run_scan(cfg: &ScanConfig) -> CliResult<ScanOutcome> {
    cfg.validate()?;
    let resumed = resume_state(cfg)?;
    let resumed_from = resumed.as_ref().map(|cp| cp.next);
    let (mut table, start) = match resumed {
        Some(cp) => (cp.table(), cp.next),
        None => (
            RecordTable {
                range: Some(ScanRange {
                    from: cfg.from,
                    to: cfg.to,
                }),
                rows: Vec::new(),
            },
            cfg.from,
        ),
    };
    let save = |table: &RecordTable, next: u64| -> CliResult<()> {
        match &cfg.checkpoint {
            Some(path) => Checkpoint::new(cfg.from, cfg.to, next, table.rows.clone())
                .save(path)
                .map_err(|e| CliError::Failure(format!("writing checkpoint {}: {e}", path.display()))),
            None => Ok(()),
        }
    };
    if start > cfg.to {
        return Ok(ScanOutcome {
            table,
            next: start,
            resumed_from,
        });
    }

    let blocks = (cfg.to - start) / cfg.block + 1;
    let bounds = |i: u64| {
        let lo = start + i * cfg.block;
        (lo, (lo + cfg.block - 1).min(cfg.to))
    };
    let claim = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let workers = (cfg.workers as u64).min(blocks) as usize;
    let (tx, rx) = mpsc::channel::<(u64, BlockResult)>();

    let mut next = start;
    let mut last_saved = start;
    let mut failure = None;
    thread::scope(|s| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (claim, stop) = (&claim, &stop);
            s.spawn(move || {
                let mut engine = PmaxEngine::new();
                while !stop.load(Ordering::Relaxed) {
                    let i = claim.fetch_add(1, Ordering::Relaxed);
                    if i >= blocks {
                        break;
                    }
                    let (lo, hi) = bounds(i);
                    if tx.send((i, scan_block(&mut engine, lo, hi))).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut frontier = 0u64;
        'merge: for (i, result) in rx.iter() {
            pending.insert(i, result);
            while let Some(result) = pending.remove(&frontier) {
                let rows = match result {
                    Ok(rows) => rows,
                    Err(e) => {
                        failure = Some(CliError::Failure(e));
                        break 'merge;
                    }
                };
                for row in rows {
                    table.push_if_record(row);
                }
                next = bounds(frontier).1 + 1;
                frontier += 1;
                if cfg.halt_after.is_some_and(|h| next > h) && next <= cfg.to {
                    break 'merge;
                }
                if next - last_saved >= cfg.checkpoint_interval && next <= cfg.to {
                    if let Err(e) = save(&table, next) {
                        failure = Some(e);
                        break 'merge;
                    }
                    last_saved = next;
                }
            }
        }
        stop.store(true, Ordering::Relaxed);
        drop(rx);
    });
    if let Some(e) = failure {
        return Err(e);
    }
    save(&table, next)?;
    Ok(ScanOutcome {
        table,
        next,
        resumed_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges() {
        let t = run_scan(&ScanConfig::new(35, 35)).unwrap().table;
        assert_eq!(
            t.rows,
            vec![RecordRow {
                n: 35,
                pmax: 7,
                argmax: 22
            }]
        );

        let t = run_scan(&ScanConfig::new(1, 11)).unwrap().table;
        let got: Vec<_> = t.rows.iter().map(|r| (r.n, r.pmax, r.argmax)).collect();
        assert_eq!(got, vec![(1, 1, 1), (3, 2, 2), (5, 3, 3), (11, 5, 7)]);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let mut cfg = ScanConfig::new(1, 3000);
        cfg.block = 7;
        let one = run_scan(&cfg).unwrap();
        cfg.workers = 5;
        assert_eq!(run_scan(&cfg).unwrap(), one);
    }

    #[test]
    fn bad_configs() {
        assert!(matches!(
            run_scan(&ScanConfig::new(0, 3)),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            run_scan(&ScanConfig::new(5, 3)),
            Err(CliError::Usage(_))
        ));
    }
}
