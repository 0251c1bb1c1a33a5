//! Time and parameter sweeps over evolved mirror-symmetric ensembles.

mod analysis;
mod config;
mod figure;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrimination::{
    contextuality, mcd_classical_bound, mcd_confidence, mcd_confidence_for_element,
    med_classical_bound, med_optimal, med_success_fixed, Povm, SolverOpts,
};
use crate::ensembles::{Ensemble, EvolutionMode};
use crate::error::{Error, Result};
use crate::nonhermitian::{HamiltonianSpec, Regime, SymmetryKind};
use crate::qmat::ComplexMat2;

pub use analysis::{analyze_series, group_by_nh, SeriesAnalysis, MIN_SAMPLES, PLATEAU_TOL};
pub use config::{ConfigOverrides, CONFIG_KEYS};
pub use figure::{reproduce_figure, FigureId, FigureOptions, DEFAULT_FIGURE_NH, FIGURE_P, FIGURE_THETAS};
pub use output::{format_sig9, read_records, records_to_csv, records_to_json, write_records, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Med,
    Mcd,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Med => "med",
            Scenario::Mcd => "mcd",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "med" => Ok(Scenario::Med),
            "mcd" => Ok(Scenario::Mcd),
            other => Err(Error::Config(format!(
                "unknown scenario `{other}` (expected med or mcd)"
            ))),
        }
    }
}

/// Whether the measurement is re-optimized for every evolved ensemble or
/// frozen at the optimum for the initial one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MeasurementMode {
    #[default]
    #[serde(rename = "adaptive")]
    AdaptivePerSample,
    #[serde(rename = "fixed")]
    FixedAtInitial,
}

impl MeasurementMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasurementMode::AdaptivePerSample => "adaptive",
            MeasurementMode::FixedAtInitial => "fixed",
        }
    }
}

impl fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasurementMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adaptive" => Ok(MeasurementMode::AdaptivePerSample),
            "fixed" => Ok(MeasurementMode::FixedAtInitial),
            other => Err(Error::Config(format!(
                "unknown measurement mode `{other}` (expected adaptive or fixed)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown output format `{other}` (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: SymmetryKind,
    pub nh_values: Vec<f64>,
    pub scenario: Scenario,
    pub p: f64,
    pub theta: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub t_step: f64,
    pub measurement_mode: MeasurementMode,
    pub prior_handling: EvolutionMode,
    /// 1-based index of the state the MCD outcome heralds.
    pub mcd_target: usize,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub solver: SolverOpts,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kind: SymmetryKind::Pt,
            nh_values: DEFAULT_FIGURE_NH.to_vec(),
            scenario: Scenario::Med,
            p: FIGURE_P,
            theta: FIGURE_THETAS[0],
            t_start: 0.0,
            t_end: 10.0,
            t_step: 0.01,
            measurement_mode: MeasurementMode::AdaptivePerSample,
            prior_handling: EvolutionMode::FixedPriors,
            mcd_target: 1,
            output: None,
            format: OutputFormat::Csv,
            solver: SolverOpts::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.t_step > 0.0) || !self.t_step.is_finite() {
            return bad(format!("t-step must be positive, got {}", self.t_step));
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() || !(self.t_end > self.t_start) {
            return bad(format!(
                "need t-end > t-start, got [{}, {}]",
                self.t_start, self.t_end
            ));
        }
        if self.nh_values.is_empty() {
            return bad("at least one nh value is required".into());
        }
        if let Some(nh) = self.nh_values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return bad(format!("nh values must be finite and ≥ 0, got {nh}"));
        }
        if !(self.p > 0.0 && self.p < 0.5) {
            return bad(format!("p must lie in (0, 1/2), got {}", self.p));
        }
        if !(self.theta > 0.0 && self.theta < std::f64::consts::FRAC_PI_2) {
            return bad(format!("theta must lie in (0, π/2), got {}", self.theta));
        }
        if !(1..=3).contains(&self.mcd_target) {
            return bad(format!("target must be 1, 2 or 3, got {}", self.mcd_target));
        }
        Ok(())
    }

    /// `t_start + i·t_step` for every `i` that stays within `t_end`.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = ((self.t_end - self.t_start) / self.t_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.t_start + i as f64 * self.t_step).collect()
    }

    /// The non-contextual bound for the initial `(p, θ)`.
    pub fn classical_bound(&self) -> f64 {
        match self.scenario {
            Scenario::Med => med_classical_bound(self.p, self.theta),
            Scenario::Mcd => mcd_classical_bound(self.p, self.theta),
        }
    }
}

/// One sampled point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub t: f64,
    pub nh: f64,
    pub metric: f64,
    pub regime: Regime,
    pub classical_bound: f64,
    pub witnessed: bool,
    pub scenario: Scenario,
    pub kind: SymmetryKind,
    pub mode: MeasurementMode,
}

enum FrozenMeasurement {
    Med(Povm),
    Mcd(ComplexMat2),
}

/// Evaluates the configured figure of merit on every `(nh, t)` cell.
///
/// Each cell evolves the initial ensemble from `t = 0` with the closed-form
/// propagator, so cells are independent; they are evaluated in parallel and
/// gathered in `(nh, t)` order.
pub fn run_time_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let initial = Ensemble::mirror(config.p, config.theta)?;
    let target = config.mcd_target - 1;
    let classical = config.classical_bound();
    let frozen = match config.measurement_mode {
        MeasurementMode::AdaptivePerSample => None,
        MeasurementMode::FixedAtInitial => Some(match config.scenario {
            Scenario::Med => FrozenMeasurement::Med(med_optimal(&initial, &config.solver)?.povm),
            Scenario::Mcd => FrozenMeasurement::Mcd(mcd_confidence(&initial, target)?.optimal_element),
        }),
    };
    let specs = config
        .nh_values
        .iter()
        .map(|&nh| HamiltonianSpec::new(config.kind, nh))
        .collect::<Result<Vec<_>>>()?;
    let grid = config.time_grid();
    let cells: Vec<(HamiltonianSpec, f64)> = specs
        .iter()
        .flat_map(|s| grid.iter().map(move |&t| (*s, t)))
        .collect();

    cells
        .par_iter()
        .map(|&(spec, t)| {
            let metric = evaluate(config, &initial, target, frozen.as_ref(), &spec, t).map_err(|e| {
                Error::AtSample {
                    nh: spec.nh(),
                    t,
                    source: Box::new(e),
                }
            })?;
            Ok(SweepRecord {
                t,
                nh: spec.nh(),
                metric,
                regime: spec.regime(),
                classical_bound: classical,
                witnessed: contextuality(metric, classical).witnessed,
                scenario: config.scenario,
                kind: config.kind,
                mode: config.measurement_mode,
            })
        })
        .collect()
}

fn evaluate(
    config: &SweepConfig,
    initial: &Ensemble,
    target: usize,
    frozen: Option<&FrozenMeasurement>,
    spec: &HamiltonianSpec,
    t: f64,
) -> Result<f64> {
    let evolved = initial.evolve(&spec.propagator(t), config.prior_handling)?;
    match (config.scenario, frozen) {
        (Scenario::Med, None) => Ok(med_optimal(&evolved, &config.solver)?.success),
        (Scenario::Mcd, None) => Ok(mcd_confidence(&evolved, target)?.confidence),
        (_, Some(FrozenMeasurement::Med(povm))) => med_success_fixed(&evolved, povm),
        (_, Some(FrozenMeasurement::Mcd(element))) => {
            mcd_confidence_for_element(&evolved, target, element)
        }
    }
}
