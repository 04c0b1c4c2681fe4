//! Run configuration: defaults, then a `key=value` file, then flags.

use std::path::{Path, PathBuf};

use ordrefl_core::formula::Level;
use ordrefl_core::oracle::OracleBudget;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("config line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: bad value {value:?} for {key}")]
    BadValue { line: usize, key: String, value: String },
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub budget: OracleBudget,
    pub max_letter: Level,
    pub max_len: usize,
    pub output: OutputMode,
    pub cache: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            budget: OracleBudget::default(),
            max_letter: 2,
            max_len: 4,
            output: OutputMode::Text,
            cache: None,
        }
    }
}

/// Flag values; `None` leaves the lower-precedence value in place.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub proof_depth: Option<usize>,
    pub max_formula_size: Option<usize>,
    pub max_worlds: Option<usize>,
    pub max_letter: Option<Level>,
    pub max_len: Option<usize>,
    pub json: bool,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            cfg.apply_file(&text)?;
        }
        cfg.apply_flags(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let entry = raw.split('#').next().unwrap_or("").trim();
            if entry.is_empty() {
                continue;
            }
            let Some((key, value)) = entry.split_once('=') else {
                return Err(ConfigError::Syntax { line, text: raw.to_string() });
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            };
            let number = || value.parse::<usize>().map_err(|_| bad());
            match key {
                "proof_depth" => self.budget.proof_depth = number()?,
                "max_formula_size" => self.budget.max_formula_size = Some(number()?),
                "max_worlds" => self.budget.max_worlds = number()?,
                "max_letter" => self.max_letter = value.parse().map_err(|_| bad())?,
                "max_len" => self.max_len = number()?,
                "output" => {
                    self.output = match value {
                        "text" => OutputMode::Text,
                        "json" => OutputMode::Json,
                        _ => return Err(bad()),
                    }
                }
                "cache" => self.cache = Some(PathBuf::from(value)),
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, flags: &Overrides) {
        if let Some(v) = flags.proof_depth {
            self.budget.proof_depth = v;
        }
        if let Some(v) = flags.max_formula_size {
            self.budget.max_formula_size = Some(v);
        }
        if let Some(v) = flags.max_worlds {
            self.budget.max_worlds = v;
        }
        if let Some(v) = flags.max_letter {
            self.max_letter = v;
        }
        if let Some(v) = flags.max_len {
            self.max_len = v;
        }
        if flags.json {
            self.output = OutputMode::Json;
        }
        if let Some(p) = &flags.cache {
            self.cache = Some(p.clone());
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.budget.proof_depth == 0 {
            return Err(ConfigError::NotPositive("proof_depth"));
        }
        if self.budget.max_formula_size == Some(0) {
            return Err(ConfigError::NotPositive("max_formula_size"));
        }
        if self.budget.max_worlds == 0 {
            return Err(ConfigError::NotPositive("max_worlds"));
        }
        if self.max_len == 0 {
            return Err(ConfigError::NotPositive("max_len"));
        }
        Ok(())
    }

    pub fn json(&self) -> bool {
        self.output == OutputMode::Json
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let mut cfg = RunConfig::default();
        cfg.apply_file("# budgets\nmax_worlds = 5\nproof_depth=12\noutput=json\n").unwrap();
        cfg.apply_flags(&Overrides {
            max_worlds: Some(6),
            ..Overrides::default()
        });
        assert_eq!(cfg.budget.max_worlds, 6);
        assert_eq!(cfg.budget.proof_depth, 12);
        assert_eq!(cfg.max_len, 4);
        assert!(cfg.json());
    }

    #[test]
    fn rejects_bad_files() {
        let mut cfg = RunConfig::default();
        assert!(matches!(cfg.apply_file("max_worlds"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(cfg.apply_file("\ncolour=red"), Err(ConfigError::UnknownKey { line: 2, .. })));
        assert!(matches!(cfg.apply_file("max_len=-1"), Err(ConfigError::BadValue { .. })));
        cfg.apply_file("max_worlds=0").unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::NotPositive("max_worlds"))));
    }
}
