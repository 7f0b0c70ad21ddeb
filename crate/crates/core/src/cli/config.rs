//! `key = value` config files with `#` comments.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

/// Keys accepted in config files; they mirror the long flag names.
pub const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "alphas",
    "b",
    "d-max",
    "d-step",
    "detunings",
    "eps-dielectric",
    "eps-metal-im",
    "eps-metal-re",
    "eta",
    "l-max",
    "lambda-nm",
    "nu",
    "nu-center",
    "offset",
    "omega0-over-gamma0",
    "points",
    "r0",
    "radii",
    "reflectivity",
    "rho",
    "samples",
    "t-max",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Args(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Args(format!("config line {}: expected key = value", n + 1)))?;
            let key = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Args(format!("config line {}: unknown key '{key}'", n + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Args(format!("config key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    pub fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.values.get(key).map(|v| parse_list(v)).transpose()
    }
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Args(format!("cannot parse '{x}' as a number")))
        })
        .collect()
}

/// Flag value if given, else config value, else the default.
pub fn resolve<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str, default: T) -> Result<T, CliError> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.get(key)?.unwrap_or(default)),
    }
}

pub fn resolve_list(flag: Option<&str>, cfg: &ConfigFile, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
    match flag {
        Some(v) => parse_list(v),
        None => Ok(cfg.get_list(key)?.unwrap_or_else(|| default.to_vec())),
    }
}
