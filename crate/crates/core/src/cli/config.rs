//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

pub const KEYS: &[&str] = &[
    "coeffs",
    "factored",
    "window",
    "size",
    "threads",
    "out",
    "max_iter",
    "conv_tol",
    "conv_streak",
    "escape_radius",
    "pole_guard",
    "seed",
    "root",
    "kappas",
    "sweep_out",
    "t0",
    "ratio",
    "levels",
    "order",
    "eps",
    "n",
    "rng_seed",
    "quadrant",
    "witnesses",
    "witness_out",
    "claim",
    "trials",
];

/// Values from a config file. Blank lines and lines starting with `#` are
/// ignored; values may be wrapped in double quotes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    source: String,
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = format!("{source}:{}", lineno + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{at}: expected `key = value`")))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{at}: unknown key `{key}` (known: {})",
                    KEYS.join(", ")
                )));
            }
            let value = value.trim();
            let value = value
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .unwrap_or(value);
            if values.insert(key.clone(), value.to_string()).is_some() {
                return Err(CliError::Usage(format!("{at}: duplicate key `{key}`")));
            }
        }
        Ok(Self {
            source: source.to_string(),
            values,
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse().map_err(|_| {
                    CliError::Usage(format!("{}: `{key} = {v}` is not a valid value", self.source))
                })
            })
            .transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str, len: usize) -> Result<Option<Vec<T>>, CliError> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        let items: Result<Vec<T>, _> = v.split_whitespace().map(str::parse).collect();
        match items {
            Ok(items) if items.len() == len => Ok(Some(items)),
            _ => Err(CliError::Usage(format!(
                "{}: `{key}` needs {len} numbers, got `{v}`",
                self.source
            ))),
        }
    }

    /// `flag` if given, otherwise the config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick_list<T: FromStr>(
        &self,
        flag: Option<Vec<T>>,
        key: &str,
        len: usize,
    ) -> Result<Option<Vec<T>>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get_list(key, len),
        }
    }

    /// Boolean switch: set by the flag, or by `true`/`false` in the config.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}
