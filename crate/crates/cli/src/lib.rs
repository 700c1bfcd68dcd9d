//! `pierce` command-line harness: rendering, record scans, checkpoints and
//! verification suites on top of `pierce-core`.

pub mod checkpoint;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod records;
pub mod scan;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use pierce_core::ratio::parse_ratio;
use serde_json::json;

use crate::commands::Rendered;
use crate::config::{parse_config, Config};
use crate::error::{CliError, CliResult};
use crate::output::{emit, open_output, write_atomic, Format};
use crate::scan::{run_scan, ScanConfig, DEFAULT_BLOCK, DEFAULT_CHECKPOINT_INTERVAL};
use crate::verify::{run_verify, Suite, VerifyConfig};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "pierce",
    version,
    about = "Orbits of x -> n mod x, Pierce expansions and P(n) scans"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
    /// Seed for randomized corpora.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Flat key = value file with defaults for the flags above; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit, quotients, Pierce digits and exact reconstruction of a/n.
    Expand {
        #[arg(value_parser = positive)]
        a: u64,
        #[arg(value_parser = positive)]
        n: u64,
    },
    /// P(n) = max over 1 <= a <= n of P(a, n), with the smallest maximizer.
    Pmax {
        #[arg(value_parser = positive)]
        n: u64,
        /// Also print the SHA-256 of the full step table.
        #[arg(long)]
        digest: bool,
    },
    /// Record-setting n in FROM..TO (or 1..TO).
    Scan {
        #[arg(value_parser = parse_range)]
        range: (u64, u64),
        /// Checkpoint file; an existing one is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Merged n between checkpoint writes.
        #[arg(long, value_parser = positive)]
        checkpoint_interval: Option<u64>,
        /// n per work block.
        #[arg(long, value_parser = positive, default_value_t = DEFAULT_BLOCK, hide = true)]
        block: u64,
        /// Stop after merging every n up to this value (testing hook).
        #[arg(long, hide = true)]
        halt_after: Option<u64>,
    },
    /// Dyadic occupancy profile of one orbit with the Archimedean bound.
    Profile {
        #[arg(value_parser = positive)]
        a: u64,
        #[arg(value_parser = positive)]
        n: u64,
    },
    /// gamma(delta, lambda) exactly, or the exact optimum with --optimize.
    Gamma {
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        delta: Option<BigRational>,
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        lambda: Option<BigRational>,
        #[arg(long, conflicts_with_all = ["delta", "lambda"])]
        optimize: bool,
    },
    /// Long-orbit witnesses.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Run invariant suites on a seeded corpus.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        /// Check every pair with n up to this value.
        #[arg(long, value_parser = positive, default_value_t = 2000)]
        n_max: u64,
        /// Random pairs added to the exhaustive corpus.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Upper end for n in random pairs.
        #[arg(long, value_parser = positive, default_value_t = 10_000_000)]
        sample_n_max: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessKind {
    /// Orbit from floor((1 - 1/e) n), certified step by step.
    Archimedean {
        #[arg(long, value_parser = positive)]
        n: u64,
        #[arg(long, default_value_t = pierce_core::witness::DEFAULT_C)]
        c: f64,
    },
    /// n = lcm(1..m) - 1 started at m.
    Arithmetic {
        #[arg(long, value_parser = positive)]
        m: u64,
    },
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) if v > pierce_core::MAX_N => Err("must be at most 2^63 - 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

/// `FROM..TO`, `FROM..=TO` or a bare `TO` meaning `1..TO`; both ends inclusive.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (from, to) = match s.split_once("..") {
        Some((a, b)) => (
            positive(a.trim())?,
            positive(b.trim().trim_start_matches('=').trim())?,
        ),
        None => (1, positive(s.trim())?),
    };
    if from > to {
        return Err(format!("empty range {from}..{to}"));
    }
    Ok((from, to))
}

/// Flags merged over the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub seed: u64,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_interval: u64,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Settings {
    fn merge(cli: &Cli, cfg: Config) -> Self {
        Settings {
            format: cli.format.or(cfg.format).unwrap_or_default(),
            out: cli.out.clone().or(cfg.out),
            workers: cli
                .workers
                .map(|w| w as usize)
                .or(cfg.workers)
                .unwrap_or_else(default_workers),
            seed: cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
            checkpoint: cfg.checkpoint,
            checkpoint_interval: cfg.checkpoint_interval.unwrap_or(DEFAULT_CHECKPOINT_INTERVAL),
        }
    }
}

fn load_config(path: Option<&Path>) -> CliResult<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

fn finish(r: Rendered, out: Option<&Path>) -> CliResult<i32> {
    emit(out, &r.text)?;
    if let Some(n) = r.note {
        eprintln!("{n}");
    }
    Ok(r.code)
}

fn scan(s: &Settings, cfg: ScanConfig) -> CliResult<i32> {
    // fail on an unwritable output before any work
    let sink = s.out.as_deref().map(open_output).transpose()?;
    let outcome = run_scan(&cfg)?;
    if !outcome.complete() {
        if let Some(f) = sink {
            f.abandon();
        }
        let at = cfg
            .checkpoint
            .as_ref()
            .map_or("nowhere".into(), |p| p.display().to_string());
        eprintln!("scan halted before n = {}; progress saved to {at}", outcome.next);
        return Ok(0);
    }
    let text = outcome.table.render(s.format);
    match (sink, &s.out) {
        (Some(f), Some(path)) => {
            f.commit(text.as_bytes())
                .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display())))?;
            let meta = json!({
                "tool": "pierce",
                "version": env!("CARGO_PKG_VERSION"),
                "from": cfg.from,
                "to": cfg.to,
                "format": s.format.to_string(),
                "workers": cfg.workers,
                "resumed_from": outcome.resumed_from,
                "records": outcome.table.rows.len(),
                "timestamp_unix": SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            });
            let mut name = path.file_name().unwrap_or_default().to_os_string();
            name.push(".meta.json");
            let meta_text = serde_json::to_string_pretty(&meta).expect("json values serialize") + "\n";
            write_atomic(&path.with_file_name(name), meta_text.as_bytes())
                .map_err(|e| CliError::Failure(format!("writing scan metadata: {e}")))?;
        }
        _ => emit(None, &text)?,
    }
    Ok(0)
}

pub fn execute(cli: Cli) -> CliResult<i32> {
    let cfg = load_config(cli.config.as_deref())?;
    let mut s = Settings::merge(&cli, cfg);
    let out = s.out.clone();
    let out = out.as_deref();
    match cli.command {
        Command::Expand { a, n } => finish(commands::expand(a, n, s.format)?, out),
        Command::Pmax { n, digest } => finish(commands::pmax(n, digest, s.format)?, out),
        Command::Profile { a, n } => finish(commands::profile(a, n, s.format)?, out),
        Command::Gamma {
            delta,
            lambda,
            optimize,
        } => {
            let r = match (delta, lambda, optimize) {
                (None, None, true) => commands::gamma_optimize(s.format)?,
                (Some(d), Some(l), false) => commands::gamma_at(&d, &l, s.format)?,
                _ => {
                    return Err(CliError::Usage(
                        "gamma needs DELTA and LAMBDA, or --optimize".into(),
                    ))
                }
            };
            finish(r, out)
        }
        Command::Witness { kind } => {
            let r = match kind {
                WitnessKind::Archimedean { n, c } => commands::witness_archimedean(n, c, s.format)?,
                WitnessKind::Arithmetic { m } => commands::witness_arithmetic(m, s.format)?,
            };
            finish(r, out)
        }
        Command::Verify {
            suite,
            n_max,
            samples,
            sample_n_max,
        } => {
            let cfg = VerifyConfig {
                suite,
                n_max,
                seed: s.seed,
                samples,
                sample_n_max,
            };
            let report = run_verify(&cfg);
            emit(out, &report.render(s.format))?;
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::Scan {
            range: (from, to),
            checkpoint,
            checkpoint_interval,
            block,
            halt_after,
        } => {
            if checkpoint.is_some() {
                s.checkpoint = checkpoint;
            }
            if let Some(i) = checkpoint_interval {
                s.checkpoint_interval = i;
            }
            let cfg = ScanConfig {
                from,
                to,
                workers: s.workers,
                block,
                checkpoint: s.checkpoint.clone(),
                checkpoint_interval: s.checkpoint_interval,
                halt_after,
            };
            scan(&s, cfg)
        }
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
        Ok(cli) => match execute(cli) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("pierce: {e}");
                if e.exit_code() == 2 {
                    eprintln!("run `pierce --help` for usage");
                }
                e.exit_code()
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..100"), Ok((1, 100)));
        assert_eq!(parse_range("35..=35"), Ok((35, 35)));
        assert_eq!(parse_range("1000"), Ok((1, 1000)));
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("..").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["pierce", "verify", "nonsense"]), 2);
        assert_eq!(run(["pierce", "expand", "0", "5"]), 2);
        assert_eq!(run(["pierce", "expand", "6", "5"]), 2);
        assert_eq!(run(["pierce", "gamma", "1/2"]), 2);
        assert_eq!(run(["pierce", "gamma", "1/0", "1"]), 2);
    }
}
