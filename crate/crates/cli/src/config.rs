//! Flat `key = value` configuration files mirroring the global flags.

use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::output::Format;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_interval: Option<u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` set twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {value}")]
    BadValue { line: usize, key: String, value: String },
}

fn positive<T: FromStr + PartialOrd + Default>(v: &str) -> Option<T> {
    v.parse::<T>().ok().filter(|x| *x > T::default())
}

/// Blank lines and `#` comments are skipped; keys may use `-` or `_`.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        let bad = || ConfigError::BadValue {
            line,
            key: key.clone(),
            value: value.to_string(),
        };
        let taken = match key.as_str() {
            "format" => cfg.format.replace(value.parse().map_err(|_| bad())?).is_some(),
            "out" => cfg.out.replace(PathBuf::from(value)).is_some(),
            "workers" => cfg.workers.replace(positive(value).ok_or_else(bad)?).is_some(),
            "seed" => cfg.seed.replace(value.parse().map_err(|_| bad())?).is_some(),
            "checkpoint" => cfg.checkpoint.replace(PathBuf::from(value)).is_some(),
            "checkpoint_interval" => cfg
                .checkpoint_interval
                .replace(positive(value).ok_or_else(bad)?)
                .is_some(),
            _ => return Err(ConfigError::UnknownKey { line, key }),
        };
        if taken {
            return Err(ConfigError::Duplicate { line, key });
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = parse_config("# scan defaults\nformat = csv\nworkers=8\nseed = 7 # trailing\ncheckpoint-interval = 500\n\nout = t.csv\n").unwrap();
        assert_eq!(cfg.format, Some(Format::Csv));
        assert_eq!(cfg.workers, Some(8));
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.checkpoint_interval, Some(500));
        assert_eq!(cfg.out, Some(PathBuf::from("t.csv")));
        assert_eq!(cfg.checkpoint, None);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            parse_config("workers").unwrap_err(),
            ConfigError::Syntax { line: 1 }
        );
        assert!(matches!(
            parse_config("workers = 0"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            parse_config("format = xml"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            parse_config("colour = red"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            parse_config("seed=1\nseed=2"),
            Err(ConfigError::Duplicate { line: 2, .. })
        ));
    }
}
