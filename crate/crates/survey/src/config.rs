//! Flat `key = value` configuration with command-line overrides.
//!
//! Layers, later wins: preset, config file, `--set` overrides. Each command
//! declares the keys it understands with their defaults; anything else
//! from the file or overrides is an error, while unused preset keys are
//! simply ignored (presets are shared between commands).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: expected `key = value`, got `{text}`")]
    Syntax { path: String, line: usize, text: String },
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("unknown key `{key}` for command {command}")]
    UnknownKey { key: String, command: String },
    #[error("bad value for `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Invalid(String),
}

const EXECUTION_KEYS: [&str; 2] = ["out", "workers"];

/// One key a command accepts.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub default: &'static str,
}

pub const fn key(name: &'static str, default: &'static str) -> KeySpec {
    KeySpec { name, default }
}

#[derive(Debug, Clone, Default)]
pub struct ConfigLayers {
    pub preset: BTreeMap<String, String>,
    pub user: BTreeMap<String, String>,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_text(text: &str, origin: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            path: origin.to_string(),
            line: i + 1,
            text: raw.to_string(),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(ConfigError::Syntax { path: origin.to_string(), line: i + 1, text: raw.to_string() });
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn parse_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
    parse_text(&text, &path.display().to_string())
}

/// `key=value` from the command line.
pub fn parse_override(s: &str) -> Result<(String, String), ConfigError> {
    parse_text(s, "--set")?
        .into_iter()
        .next()
        .ok_or_else(|| ConfigError::Invalid(format!("empty override `{s}`")))
}

/// Resolved configuration of one command: every declared key has a value.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub command: String,
    pub values: BTreeMap<String, String>,
}

impl ConfigLayers {
    pub fn resolve(&self, command: &str, keys: &[KeySpec]) -> Result<Resolved, ConfigError> {
        for k in self.user.keys() {
            if !keys.iter().any(|s| s.name == k) {
                return Err(ConfigError::UnknownKey { key: k.clone(), command: command.to_string() });
            }
        }
        let mut values = BTreeMap::new();
        for s in keys {
            let v = self
                .user
                .get(s.name)
                .or_else(|| self.preset.get(s.name))
                .cloned()
                .unwrap_or_else(|| s.default.to_string());
            values.insert(s.name.to_string(), v);
        }
        Ok(Resolved { command: command.to_string(), values })
    }
}

impl Resolved {
    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .parse()
            .map_err(|e: T::Err| ConfigError::Value { key: key.to_string(), message: e.to_string() })
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let v: f64 = self.get(key)?;
        if !v.is_finite() {
            return Err(ConfigError::Value { key: key.to_string(), message: "must be finite".into() });
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.f64(key)?;
        if v <= 0.0 {
            return Err(ConfigError::Value { key: key.to_string(), message: format!("must be > 0, got {v}") });
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        self.get(key)
    }

    pub fn bool(&self, key: &str) -> Result<bool, ConfigError> {
        self.get(key)
    }

    /// Grid axis `name_min`, `name_max`, `name_n`: n >= 2 and min < max,
    /// or the single value n = 1 with min = max.
    pub fn axis(&self, name: &str) -> Result<Vec<f64>, ConfigError> {
        let lo = self.f64(&format!("{name}_min"))?;
        let hi = self.f64(&format!("{name}_max"))?;
        let n = self.usize(&format!("{name}_n"))?;
        if n == 1 && lo == hi {
            return Ok(vec![lo]);
        }
        if n < 2 {
            return Err(ConfigError::Invalid(format!("{name}_n must be at least 2, got {n}")));
        }
        if lo >= hi {
            return Err(ConfigError::Invalid(format!("{name} range [{lo}, {hi}] is empty")));
        }
        Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
    }

    /// Config echo for provenance headers. Execution-only keys (output
    /// directory, worker count) are left out so that results do not depend
    /// on where or how fast they were computed.
    pub fn echo(&self) -> Vec<String> {
        self.values
            .iter()
            .filter(|(k, _)| !EXECUTION_KEYS.contains(&k.as_str()))
            .map(|(k, v)| format!("{k} = {v}"))
            .collect()
    }
}
