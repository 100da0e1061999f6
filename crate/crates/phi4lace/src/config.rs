//! Flat key-value run configuration with `[section]` headers.
//!
//! No nesting: a config is lines of `key = value` grouped under sections,
//! with `#` comments. Every output file records the SHA-256 hash of the
//! exact text it was produced from.

use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {0}: cannot parse `{1}`")]
    Malformed(usize, String),
    #[error("missing key [{0}] {1}")]
    Missing(String, String),
    #[error("[{0}] {1}: cannot parse `{2}` as {3}")]
    BadValue(String, String, String, &'static str),
}

#[derive(Debug, Clone)]
pub struct Config {
    values: BTreeMap<(String, String), String>,
    hash: String,
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let mut out = String::with_capacity(2 * digest.len());
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed(idx + 1, raw.to_string()));
            };
            values.insert(
                (section.clone(), key.trim().to_string()),
                value.trim().to_string(),
            );
        }
        Ok(Config {
            values,
            hash: sha256_hex(text),
        })
    }

    /// SHA-256 of the config text (full hex digest).
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(|s| s.as_str())
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&str, ConfigError> {
        self.get(section, key)
            .ok_or_else(|| ConfigError::Missing(section.into(), key.into()))
    }

    pub fn get_f64(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(section, key)
            .map(|s| {
                s.parse().map_err(|_| {
                    ConfigError::BadValue(section.into(), key.into(), s.into(), "f64")
                })
            })
            .transpose()
    }

    pub fn require_f64(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        self.get_f64(section, key)?
            .ok_or_else(|| ConfigError::Missing(section.into(), key.into()))
    }

    pub fn get_usize(&self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(section, key)
            .map(|s| {
                s.parse().map_err(|_| {
                    ConfigError::BadValue(section.into(), key.into(), s.into(), "usize")
                })
            })
            .transpose()
    }

    pub fn require_usize(&self, section: &str, key: &str) -> Result<usize, ConfigError> {
        self.get_usize(section, key)?
            .ok_or_else(|| ConfigError::Missing(section.into(), key.into()))
    }

    pub fn get_u64(&self, section: &str, key: &str) -> Result<Option<u64>, ConfigError> {
        self.get(section, key)
            .map(|s| {
                s.parse()
                    .map_err(|_| ConfigError::BadValue(section.into(), key.into(), s.into(), "u64"))
            })
            .transpose()
    }

    /// Comma-separated list of floats.
    pub fn require_f64_list(&self, section: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
        let raw = self.require(section, key)?;
        raw.split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| {
                    ConfigError::BadValue(section.into(), key.into(), s.into(), "f64 list")
                })
            })
            .collect()
    }

    pub fn require_usize_list(&self, section: &str, key: &str) -> Result<Vec<usize>, ConfigError> {
        let raw = self.require(section, key)?;
        raw.split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| {
                    ConfigError::BadValue(section.into(), key.into(), s.into(), "usize list")
                })
            })
            .collect()
    }

    /// Displacement list: semicolon-separated vectors of space-separated
    /// integers, e.g. `0 0 0 0 0; 1 0 0 0 0`.
    pub fn get_displacements(
        &self,
        section: &str,
        key: &str,
    ) -> Result<Option<Vec<Vec<i32>>>, ConfigError> {
        let Some(raw) = self.get(section, key) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for chunk in raw.split(';') {
            let v: Result<Vec<i32>, _> = chunk
                .split_whitespace()
                .map(|s| {
                    s.parse().map_err(|_| {
                        ConfigError::BadValue(section.into(), key.into(), s.into(), "i32")
                    })
                })
                .collect();
            out.push(v?);
        }
        Ok(Some(out))
    }
}
