use std::path::PathBuf;

use itm_numkernel::{DEFAULT_PRECISION, MIN_PRECISION};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("{key}: {value:?} is not a positive integer")]
    NotPositive { key: String, value: String },
    #[error("precision must be at least {MIN_PRECISION} bits")]
    PrecisionTooLow,
    #[error("grid must look like WxH with W, H ≥ 1, got {0:?}")]
    BadGrid(String),
}

/// Run settings. Every numeric field is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Config {
    pub precision: usize,
    /// Float classification starts from an error radius 2^{-guard};
    /// unset means precision − 2.
    pub guard: Option<usize>,
    pub depth: usize,
    pub horizon: usize,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision: DEFAULT_PRECISION, guard: None, depth: 40, horizon: 40, threads: None, out: None }
    }
}

fn positive(key: &str, value: &str) -> Result<usize, ConfigError> {
    match value.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(ConfigError::NotPositive { key: key.to_string(), value: value.to_string() }),
    }
}

impl Config {
    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "precision" => cfg.precision = positive(key, value)?,
                "guard" => cfg.guard = Some(positive(key, value)?),
                "depth" => cfg.depth = positive(key, value)?,
                "horizon" => cfg.horizon = positive(key, value)?,
                "threads" => cfg.threads = Some(positive(key, value)?),
                "out" if !value.is_empty() => cfg.out = Some(PathBuf::from(value)),
                "out" => return Err(ConfigError::Syntax { line: i + 1 }),
                _ => return Err(ConfigError::UnknownKey { line: i + 1, key: key.to_string() }),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn guard_bits(&self) -> usize {
        self.guard.unwrap_or(self.precision - 2)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.precision < MIN_PRECISION {
            return Err(ConfigError::PrecisionTooLow);
        }
        for (key, v) in [("guard", self.guard_bits()), ("depth", self.depth), ("horizon", self.horizon)] {
            if v == 0 {
                return Err(ConfigError::NotPositive { key: key.into(), value: "0".into() });
            }
        }
        if self.threads == Some(0) {
            return Err(ConfigError::NotPositive { key: "threads".into(), value: "0".into() });
        }
        Ok(())
    }
}

/// `WxH`, both positive.
pub fn parse_grid(s: &str) -> Result<(usize, usize), ConfigError> {
    let bad = || ConfigError::BadGrid(s.to_string());
    let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}
