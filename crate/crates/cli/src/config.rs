//! Plain-text `key = value` configuration files mirroring the long flags.
//! Flags always override file values.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Io(format!(
                    "config {}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Typed lookup; a malformed value in the file is a format error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Io(format!("config value for `{key}` is not valid: `{raw}`"))
            }),
        }
    }
}

/// Flag value if given, else config value, else None.
pub fn merge<T: FromStr>(
    flag: Option<T>,
    config: &FileConfig,
    key: &str,
) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => config.get(key),
    }
}

/// Like [`merge`] but the parameter is mandatory.
pub fn require<T: FromStr>(flag: Option<T>, config: &FileConfig, key: &str) -> Result<T, CliError> {
    merge(flag, config, key)?
        .ok_or_else(|| CliError::Domain(format!("missing required parameter --{key}")))
}
