//! Flat `key = value` configuration files. Keys mirror the CLI flags
//! (`law`, `param`, `m`, `samples`, `eta-samples`, `t`, `model`, `seed`,
//! `out`, `basis`, `quad`, `modes`, plus `experiment`, `method`, `order` and
//! `mc-samples`); `#` starts a comment.
//!
//! ```text
//! experiment = fde
//! law = algebraic
//! param = 2.5
//! m = 8, 16, 32, 64
//! t = pi
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::basis::BasisKind;
use crate::error::{invalid, Error, Result};
use crate::integral::{IntegrationMethod, DEFAULT_MC_SAMPLES};
use crate::spectrum::{Decay, SpectrumLaw, DEFAULT_MAX_MODE};

use super::{ExperimentConfig, ExperimentKind, DEFAULT_GH_ORDER, DEFAULT_SEED};

pub const KNOWN_KEYS: [&str; 16] = [
    "experiment",
    "law",
    "param",
    "m",
    "samples",
    "eta-samples",
    "t",
    "model",
    "seed",
    "out",
    "basis",
    "quad",
    "modes",
    "method",
    "order",
    "mc-samples",
];

/// Normalized key → raw value. Later insertions override earlier ones, so
/// flags are applied on top of a file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

fn normalize_key(key: &str) -> String {
    key.trim()
        .trim_start_matches("--")
        .to_ascii_lowercase()
        .replace('_', "-")
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let key = normalize_key(key);
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(invalid(format!("unknown setting `{key}`")));
        }
        self.0.insert(key, value.into().trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(&normalize_key(key)).map(String::as_str)
    }

    /// Copies every entry of `other` over this one.
    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse_settings(&text)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| invalid(format!("bad value `{v}` for `{key}`")))
            })
            .transpose()
    }

    /// Builds an experiment configuration; missing keys take the defaults of
    /// [`ExperimentConfig::new`].
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let experiment = match self.get("experiment") {
            Some(v) => v.parse()?,
            None => ExperimentKind::Functional,
        };
        let law = self.get("law").unwrap_or("algebraic");
        let param = self.parsed::<f64>("param")?.unwrap_or(2.0);
        let decay = Decay::from_name(law, param)?;
        let mut config = ExperimentConfig::new(experiment, decay);

        let modes = self.parsed::<usize>("modes")?.unwrap_or(DEFAULT_MAX_MODE);
        let seed = self.parsed::<u64>("seed")?.unwrap_or(DEFAULT_SEED);
        config.law = SpectrumLaw::new(decay, modes, seed)?;
        if let Some(m) = self.get("m") {
            config.m_values = parse_list(m)?;
        }
        if let Some(n) = self.parsed("samples")? {
            config.n_theta_samples = n;
        }
        if let Some(n) = self.parsed("eta-samples")? {
            config.n_eta_samples = n;
        }
        if let Some(t) = self.get("t") {
            config.t = parse_time(t)?;
        }
        if let Some(model) = self.get("model") {
            config.model = model.to_string();
        }
        if let Some(b) = self.get("basis") {
            config.basis = b.parse::<BasisKind>()?;
        }
        config.quad_points = self.parsed("quad")?;
        config.integration = match self.get("method").unwrap_or("gauss-hermite") {
            "gauss-hermite" | "gh" => IntegrationMethod::GaussHermite {
                order: self.parsed("order")?.unwrap_or(DEFAULT_GH_ORDER),
            },
            "monte-carlo" | "mc" => IntegrationMethod::MonteCarlo {
                samples: self.parsed("mc-samples")?.unwrap_or(DEFAULT_MC_SAMPLES),
                seed,
            },
            other => return Err(invalid(format!("unknown integration method `{other}`"))),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses `key = value` lines.
pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut settings = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!(
                "line {}: expected `key = value`, found `{line}`",
                i + 1
            ))
        })?;
        settings
            .set(k, v)
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
    }
    Ok(settings)
}

/// Comma-separated list of nonnegative integers.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| invalid(format!("bad list entry `{p}`")))
        })
        .collect()
}

/// A real number, or a multiple of `pi` such as `pi`, `2pi`, `0.5*pi`.
pub fn parse_time(s: &str) -> Result<f64> {
    let s = s.trim().to_ascii_lowercase();
    if let Some(head) = s.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let factor = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>()
                .map_err(|_| invalid(format!("bad time `{s}`")))?
        };
        return Ok(factor * PI);
    }
    s.parse().map_err(|_| invalid(format!("bad time `{s}`")))
}
