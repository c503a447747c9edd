//! `key = value` configuration files. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, CliResult};

const KNOWN_KEYS: [&str; 4] = ["tol", "method", "density", "threads"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::usage(format!(
                    "config line {}: unknown key '{key}' (known: {})",
                    lineno + 1,
                    KNOWN_KEYS.join(", ")
                )));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| {
                    CliError::usage(format!("config: invalid value '{v}' for '{key}'"))
                })
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse("# overrides\ntol = 1e-12\n\nmethod=series # inline\n").unwrap();
        assert_eq!(c.get::<f64>("tol").unwrap(), Some(1e-12));
        assert_eq!(
            c.get::<String>("method").unwrap().as_deref(),
            Some("series")
        );
        assert_eq!(c.get::<usize>("density").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("tol").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("tol = tiny")
            .unwrap()
            .get::<f64>("tol")
            .is_err());
    }
}
