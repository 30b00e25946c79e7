//! Flat key-value config files and the flag/file/default precedence rule.
//!
//! A config file holds one `key = value` pair per line; keys match the long
//! flag names (e.g. `dt`, `kernels`, `oscillator-K`). Lines starting with
//! `#` are comments. Command-line flags override file values, which
//! override built-in defaults.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Input(format!("cannot open config file {}: {e}", path.display()))
        })?;
        let mut values = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Input(format!(
                    "{}:{}: expected 'key = value', found '{line}'",
                    path.display(),
                    idx + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parse the file value under `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(text) => text.parse().map(Some).map_err(|_| {
                CliError::Input(format!("config key '{key}': cannot parse '{text}'"))
            }),
        }
    }
}

/// flag value, else file value, else default.
pub fn resolve<T: FromStr + Clone>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
    default: T,
) -> CliResult<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(file.get::<T>(key)?.unwrap_or(default)),
    }
}

/// flag value, else file value, else None.
pub fn resolve_opt<T: FromStr + Clone>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get::<T>(key),
    }
}

/// Parse a comma-separated triple like `0.3,0.2,0.15`.
pub fn parse_triple(text: &str, what: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "{what} needs exactly 3 comma-separated values, found {}",
            parts.len()
        )));
    }
    let mut out = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .parse()
            .map_err(|_| CliError::Usage(format!("{what}: cannot parse '{p}'")))?;
    }
    Ok(out)
}

/// Parse a `w,x,y,z` quaternion.
pub fn parse_quat(text: &str) -> CliResult<rhythmiq::UnitQuaternion64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "quaternion needs 4 comma-separated values, found {}",
            parts.len()
        )));
    }
    let mut v = [0.0f64; 4];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .parse()
            .map_err(|_| CliError::Usage(format!("quaternion: cannot parse '{p}'")))?;
    }
    rhythmiq::UnitQuaternion64::new(v[0], v[1], v[2], v[3])
        .map_err(|e| CliError::Usage(e.to_string()))
}
