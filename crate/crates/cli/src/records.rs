//! Record tables: the `n` at which `P(n)` sets a new maximum.

use std::fmt::Write as _;
use std::path::Path;

use pierce_core::pmax::pmax_dp;
use pierce_core::{steps_count, Error as CoreError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::output::{fmt_g6, Format};

pub const CSV_HEADER: &str = "n,pmax,argmax,pmax_over_log_n,pmax_over_cuberoot_n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    pub n: u64,
    pub pmax: u32,
    pub argmax: u64,
}

impl RecordRow {
    pub fn over_log_n(&self) -> f64 {
        self.pmax as f64 / (self.n as f64).ln()
    }

    pub fn over_cuberoot_n(&self) -> f64 {
        self.pmax as f64 / (self.n as f64).cbrt()
    }
}

/// Scan metadata that does not depend on how the scan was run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRange {
    pub from: u64,
    pub to: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordTable {
    pub range: Option<ScanRange>,
    pub rows: Vec<RecordRow>,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("header must be `{CSV_HEADER}`")]
    Header,
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
    #[error("row {row} (n = {n}) does not recompute: {msg}")]
    Revalidation { row: usize, n: u64, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot tell the table format of {0}; use a .csv or .json extension")]
    UnknownFormat(String),
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    n: u64,
    pmax: u32,
    argmax: u64,
    pmax_over_log_n: Option<f64>,
    pmax_over_cuberoot_n: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTable {
    tool: String,
    version: String,
    range: Option<ScanRange>,
    rows: Vec<JsonRow>,
}

impl RecordTable {
    /// Keeps the rows that beat every earlier `pmax`.
    pub fn push_if_record(&mut self, row: RecordRow) -> bool {
        if self.rows.last().is_some_and(|last| row.pmax <= last.pmax) {
            return false;
        }
        self.rows.push(row);
        true
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(32 * (self.rows.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.n,
                r.pmax,
                r.argmax,
                fmt_g6(r.over_log_n()),
                fmt_g6(r.over_cuberoot_n())
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        let table = JsonTable {
            tool: "pierce".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            range: self.range.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| JsonRow {
                    n: r.n,
                    pmax: r.pmax,
                    argmax: r.argmax,
                    pmax_over_log_n: Some(r.over_log_n()).filter(|x| x.is_finite()),
                    pmax_over_cuberoot_n: r.over_cuberoot_n(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&table).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(r) = &self.range {
            let _ = writeln!(s, "records for n in [{}, {}]", r.from, r.to);
        }
        let _ = writeln!(
            s,
            "{:>12} {:>6} {:>12} {:>12} {:>12}",
            "n", "pmax", "argmax", "pmax/ln n", "pmax/n^1/3"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>12} {:>6} {:>12} {:>12} {:>12}",
                r.n,
                r.pmax,
                r.argmax,
                fmt_g6(r.over_log_n()),
                fmt_g6(r.over_cuberoot_n())
            );
        }
        s
    }

    /// Row structure only: positive `n`, `1 <= argmax <= n`, `n` and `pmax`
    /// strictly increasing.
    pub fn check_shape(&self) -> Result<(), RecordError> {
        let mut prev: Option<RecordRow> = None;
        for (i, r) in self.rows.iter().enumerate() {
            let err = |msg: &str| RecordError::Row {
                row: i + 1,
                msg: msg.into(),
            };
            if r.n == 0 || r.argmax == 0 || r.argmax > r.n || r.pmax == 0 {
                return Err(err("need n >= 1, pmax >= 1 and 1 <= argmax <= n"));
            }
            if let Some(p) = prev {
                if r.n <= p.n || r.pmax <= p.pmax {
                    return Err(err("rows must strictly increase in n and pmax"));
                }
            }
            if let Some(range) = &self.range {
                if r.n < range.from || r.n > range.to {
                    return Err(err("n outside the scan range"));
                }
            }
            prev = Some(*r);
        }
        if let Some(range) = &self.range {
            if range.from == 0 || range.from > range.to {
                return Err(RecordError::Row {
                    row: 0,
                    msg: "scan range must satisfy 1 <= from <= to".into(),
                });
            }
            if self.rows.first().is_some_and(|r| r.n != range.from) {
                return Err(RecordError::Row {
                    row: 1,
                    msg: "first row must be the start of the range".into(),
                });
            }
        }
        Ok(())
    }

    /// Recomputes every row: `P(argmax, n)` by direct iteration and
    /// `(pmax, argmax)` by the dynamic program.
    pub fn revalidate(&self) -> Result<(), RecordError> {
        self.check_shape()?;
        for (i, r) in self.rows.iter().enumerate() {
            let fail = |msg: String| RecordError::Revalidation {
                row: i + 1,
                n: r.n,
                msg,
            };
            let core = |e: CoreError| fail(e.to_string());
            let steps = steps_count(r.argmax, r.n).map_err(core)?;
            if steps != u64::from(r.pmax) {
                return Err(fail(format!(
                    "P({}, {}) = {steps}, table says {}",
                    r.argmax, r.n, r.pmax
                )));
            }
            let dp = pmax_dp(r.n).map_err(core)?;
            if (dp.pmax, dp.argmax) != (r.pmax, r.argmax) {
                return Err(fail(format!(
                    "P(n) = {} at a = {}, table says {} at {}",
                    dp.pmax, dp.argmax, r.pmax, r.argmax
                )));
            }
        }
        Ok(())
    }
}

/// Parses a CSV record table; ratio columns are recomputed, not trusted.
pub fn parse_record_csv(text: &str) -> Result<RecordTable, RecordError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(RecordError::Header);
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let field = |j: usize| -> Result<u64, RecordError> {
            rec.get(j)
                .and_then(|v| v.parse::<u64>().ok())
                .ok_or_else(|| RecordError::Row {
                    row: i + 1,
                    msg: format!("column {} is not an integer", j + 1),
                })
        };
        let pmax = u32::try_from(field(1)?).map_err(|_| RecordError::Row {
            row: i + 1,
            msg: "pmax too large".into(),
        })?;
        rows.push(RecordRow {
            n: field(0)?,
            pmax,
            argmax: field(2)?,
        });
    }
    let table = RecordTable { range: None, rows };
    table.check_shape()?;
    Ok(table)
}

pub fn parse_record_json(text: &str) -> Result<RecordTable, RecordError> {
    let parsed: JsonTable = serde_json::from_str(text)?;
    let table = RecordTable {
        range: parsed.range,
        rows: parsed
            .rows
            .into_iter()
            .map(|r| RecordRow {
                n: r.n,
                pmax: r.pmax,
                argmax: r.argmax,
            })
            .collect(),
    };
    table.check_shape()?;
    Ok(table)
}

/// Loads by extension and revalidates every row.
pub fn load_record_table(path: &Path) -> Result<RecordTable, RecordError> {
    let text = std::fs::read_to_string(path)?;
    let table = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => parse_record_csv(&text)?,
        Some(e) if e.eq_ignore_ascii_case("json") => parse_record_json(&text)?,
        _ => return Err(RecordError::UnknownFormat(path.display().to_string())),
    };
    table.revalidate()?;
    Ok(table)
}
