use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensembles::EvolutionMode;
use crate::error::{Error, Result};
use crate::nonhermitian::SymmetryKind;

use super::{MeasurementMode, OutputFormat, Scenario, SweepConfig};

/// Keys accepted in a config file; they mirror the long CLI flags.
pub const CONFIG_KEYS: [&str; 13] = [
    "kind", "scenario", "nh", "p", "theta", "t-start", "t-end", "t-step", "mode", "priors",
    "target", "out", "format",
];

/// A partial [`SweepConfig`]: every field left `None` keeps its default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigOverrides {
    pub kind: Option<SymmetryKind>,
    pub scenario: Option<Scenario>,
    pub nh_values: Option<Vec<f64>>,
    pub p: Option<f64>,
    pub theta: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub t_step: Option<f64>,
    pub measurement_mode: Option<MeasurementMode>,
    pub prior_handling: Option<EvolutionMode>,
    pub mcd_target: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl ConfigOverrides {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// keys may use `-` or `_`.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", i + 1)))?;
            out.apply(key, value)
                .map_err(|e| Error::Config(format!("line {}: {}", i + 1, config_message(e))))?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_kv_text(&text)
    }

    /// Sets one field from its textual key and value.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-").to_ascii_lowercase();
        let value = value.trim();
        match key.as_str() {
            "kind" => self.kind = Some(value.parse()?),
            "scenario" => self.scenario = Some(value.parse()?),
            "nh" => self.nh_values = Some(parse_list(value)?),
            "p" => self.p = Some(parse_real("p", value)?),
            "theta" => self.theta = Some(parse_real("theta", value)?),
            "t-start" => self.t_start = Some(parse_real("t-start", value)?),
            "t-end" => self.t_end = Some(parse_real("t-end", value)?),
            "t-step" => self.t_step = Some(parse_real("t-step", value)?),
            "mode" => self.measurement_mode = Some(value.parse()?),
            "priors" => self.prior_handling = Some(value.parse()?),
            "target" => {
                self.mcd_target = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Config(format!("target must be 1, 2 or 3, got `{value}`")))?,
                )
            }
            "out" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            other => {
                return Err(Error::Config(format!(
                    "unknown key `{other}` (expected one of {})",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Fields set in `over` win over those set in `self`.
    pub fn merge(self, over: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            kind: over.kind.or(self.kind),
            scenario: over.scenario.or(self.scenario),
            nh_values: over.nh_values.or(self.nh_values),
            p: over.p.or(self.p),
            theta: over.theta.or(self.theta),
            t_start: over.t_start.or(self.t_start),
            t_end: over.t_end.or(self.t_end),
            t_step: over.t_step.or(self.t_step),
            measurement_mode: over.measurement_mode.or(self.measurement_mode),
            prior_handling: over.prior_handling.or(self.prior_handling),
            mcd_target: over.mcd_target.or(self.mcd_target),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
        }
    }

    /// Fills unset fields from the defaults and validates the result.
    pub fn into_config(self) -> Result<SweepConfig> {
        let d = SweepConfig::default();
        let cfg = SweepConfig {
            kind: self.kind.unwrap_or(d.kind),
            nh_values: self.nh_values.unwrap_or(d.nh_values),
            scenario: self.scenario.unwrap_or(d.scenario),
            p: self.p.unwrap_or(d.p),
            theta: self.theta.unwrap_or(d.theta),
            t_start: self.t_start.unwrap_or(d.t_start),
            t_end: self.t_end.unwrap_or(d.t_end),
            t_step: self.t_step.unwrap_or(d.t_step),
            measurement_mode: self.measurement_mode.unwrap_or(d.measurement_mode),
            prior_handling: self.prior_handling.unwrap_or(d.prior_handling),
            mcd_target: self.mcd_target.unwrap_or(d.mcd_target),
            output: self.output.or(d.output),
            format: self.format.unwrap_or(d.format),
            solver: d.solver,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn config_message(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("{key} must be a finite number, got `{value}`")))
}

/// Comma- or whitespace-separated reals.
fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_real("nh", s))
        .collect()
}
