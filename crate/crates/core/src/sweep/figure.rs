use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::discrimination::SolverOpts;
use crate::ensembles::EvolutionMode;
use crate::error::{Error, Result};
use crate::nonhermitian::SymmetryKind;

use super::{run_time_sweep, write_records, MeasurementMode, OutputFormat, Scenario, SweepConfig};

pub const FIGURE_P: f64 = 1.0 / 3.0;

/// Panel angles (a), (b), (c).
pub const FIGURE_THETAS: [f64; 3] = [PI / 12.0, PI / 7.0, PI / 3.0];

/// Non-Hermiticity values drawn in every panel, straddling the exceptional point.
pub const DEFAULT_FIGURE_NH: [f64; 5] = [0.2, 0.5, 0.8, 1.5, 2.0];

const PANELS: [char; 3] = ['a', 'b', 'c'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// PT, minimum error.
    One,
    /// APT, minimum error.
    Two,
    /// PT, maximum confidence.
    Three,
    /// APT, maximum confidence.
    Four,
}

impl FigureId {
    pub fn number(self) -> u8 {
        match self {
            FigureId::One => 1,
            FigureId::Two => 2,
            FigureId::Three => 3,
            FigureId::Four => 4,
        }
    }

    pub fn kind(self) -> SymmetryKind {
        match self {
            FigureId::One | FigureId::Three => SymmetryKind::Pt,
            FigureId::Two | FigureId::Four => SymmetryKind::Apt,
        }
    }

    pub fn scenario(self) -> Scenario {
        match self {
            FigureId::One | FigureId::Two => Scenario::Med,
            FigureId::Three | FigureId::Four => Scenario::Mcd,
        }
    }

    /// `fig{n}a.csv`, `fig{n}b.csv`, `fig{n}c.csv`.
    pub fn file_names(self) -> [String; 3] {
        PANELS.map(|c| format!("fig{}{c}.csv", self.number()))
    }
}

impl TryFrom<u8> for FigureId {
    type Error = Error;
    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(FigureId::One),
            2 => Ok(FigureId::Two),
            3 => Ok(FigureId::Three),
            4 => Ok(FigureId::Four),
            _ => Err(Error::Config(format!("figure id must be 1-4, got {n}"))),
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<u8>()
            .map_err(|_| Error::Config(format!("figure id must be 1-4, got `{s}`")))
            .and_then(FigureId::try_from)
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Grid and measurement settings shared by the three panels of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub t_start: f64,
    pub t_end: f64,
    pub t_step: f64,
    pub measurement_mode: MeasurementMode,
    pub prior_handling: EvolutionMode,
    pub mcd_target: usize,
    pub solver: SolverOpts,
}

impl Default for FigureOptions {
    fn default() -> Self {
        let d = SweepConfig::default();
        Self {
            t_start: d.t_start,
            t_end: d.t_end,
            t_step: d.t_step,
            measurement_mode: d.measurement_mode,
            prior_handling: d.prior_handling,
            mcd_target: d.mcd_target,
            solver: d.solver,
        }
    }
}

impl FigureOptions {
    /// The sweep behind panel `panel` (0, 1, 2).
    pub fn panel_config(&self, id: FigureId, nh_set: &[f64], panel: usize) -> SweepConfig {
        SweepConfig {
            kind: id.kind(),
            nh_values: nh_set.to_vec(),
            scenario: id.scenario(),
            p: FIGURE_P,
            theta: FIGURE_THETAS[panel],
            t_start: self.t_start,
            t_end: self.t_end,
            t_step: self.t_step,
            measurement_mode: self.measurement_mode,
            prior_handling: self.prior_handling,
            mcd_target: self.mcd_target,
            output: None,
            format: OutputFormat::Csv,
            solver: self.solver,
        }
    }
}

/// Writes the three panel CSVs of figure `id` into `out_dir` and returns
/// their paths.
pub fn reproduce_figure(
    id: FigureId,
    nh_set: &[f64],
    out_dir: &Path,
    opts: &FigureOptions,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::with_capacity(3);
    for (panel, name) in id.file_names().iter().enumerate() {
        let cfg = opts.panel_config(id, nh_set, panel);
        let records = run_time_sweep(&cfg)?;
        let path = out_dir.join(name);
        write_records(&records, Some(&path), OutputFormat::Csv)?;
        written.push(path);
    }
    Ok(written)
}
