//! Output formats and atomic file writes.

use std::fmt;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Format::from_str_ignore_case(s)
    }
}

impl Format {
    fn from_str_ignore_case(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// `%g` with six significant digits; non-finite values print as `inf`.
pub fn fmt_g6(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A file written under a temporary name and renamed into place on commit.
pub struct AtomicFile {
    tmp: PathBuf,
    dest: PathBuf,
    file: File,
}

impl AtomicFile {
    pub fn create(dest: &Path) -> io::Result<Self> {
        let mut name = dest.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(".tmp");
        let tmp = dest.with_file_name(name);
        let file = File::create(&tmp)?;
        Ok(AtomicFile {
            tmp,
            dest: dest.to_path_buf(),
            file,
        })
    }

    pub fn commit(mut self, bytes: &[u8]) -> io::Result<()> {
        self.file.write_all(bytes)?;
        self.file.sync_all()?;
        fs::rename(&self.tmp, &self.dest)
    }

    pub fn abandon(self) {
        let _ = fs::remove_file(&self.tmp);
    }
}

pub fn write_atomic(dest: &Path, bytes: &[u8]) -> io::Result<()> {
    AtomicFile::create(dest)?.commit(bytes)
}

pub fn open_output(path: &Path) -> CliResult<AtomicFile> {
    AtomicFile::create(path).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Sends rendered output to `out`, or stdout when there is none.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => open_output(p)?
            .commit(text.as_bytes())
            .map_err(|e| CliError::Failure(format!("writing {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Failure(format!("writing stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_matches_printf() {
        assert_eq!(fmt_g6(f64::INFINITY), "inf");
        assert_eq!(fmt_g6(1.0), "1");
        assert_eq!(fmt_g6(2.0 / 3.0), "0.666667");
        assert_eq!(fmt_g6(std::f64::consts::LOG2_E), "1.4427");
        assert_eq!(fmt_g6(123456.7), "123457");
        assert_eq!(fmt_g6(1234567.0), "1.23457e+06");
        assert_eq!(fmt_g6(0.0001234567), "0.000123457");
        assert_eq!(fmt_g6(0.00001), "1e-05");
        assert_eq!(fmt_g6(999999.6), "1e+06");
        assert_eq!(fmt_g6(2.5), "2.5");
    }

    #[test]
    fn format_names() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
        assert_eq!(Format::Json.to_string(), "json");
    }
}
