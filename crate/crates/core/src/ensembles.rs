//! Pure-state qubit ensembles and their (generally non-unitary) evolution.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMat2, Vec2, C64};

const NORM_TOL: f64 = 1e-12;
const PRIOR_SUM_TOL: f64 = 1e-12;
const MIN_NORM: f64 = 1e-14;
pub const MAX_STATES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    pub c0: C64,
    pub c1: C64,
}

impl PureState {
    pub fn new(c0: C64, c1: C64) -> Result<Self> {
        let n = c0.norm_sqr() + c1.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("state is not normalized (|ψ|² = {n})")));
        }
        Ok(Self { c0, c1 })
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalized(c0: C64, c1: C64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !(norm >= MIN_NORM) || !norm.is_finite() {
            return Err(Error::ZeroNorm { norm });
        }
        Ok(Self {
            c0: c0 / norm,
            c1: c1 / norm,
        })
    }

    pub fn zero() -> Self {
        Self::real(1.0, 0.0)
    }

    pub fn one() -> Self {
        Self::real(0.0, 1.0)
    }

    /// `cosθ|0⟩ + sinθ|1⟩`.
    pub fn from_angle(theta: f64) -> Self {
        Self::real(theta.cos(), theta.sin())
    }

    fn real(c0: f64, c1: f64) -> Self {
        Self {
            c0: c0.into(),
            c1: c1.into(),
        }
    }

    pub fn amplitudes(&self) -> Vec2 {
        [self.c0, self.c1]
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> ComplexMat2 {
        let v = self.amplitudes();
        ComplexMat2::outer(&v, &v)
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let x = self.c0.conj() * self.c1;
        [
            2.0 * x.re,
            2.0 * x.im,
            self.c0.norm_sqr() - self.c1.norm_sqr(),
        ]
    }

    /// Trace distance between the two pure states, `√(1 − |⟨ψ|φ⟩|²)`.
    pub fn trace_distance(&self, other: &PureState) -> f64 {
        (1.0 - self.inner(other).norm_sqr()).max(0.0).sqrt()
    }

    pub fn apply(&self, u: &ComplexMat2) -> (Vec2, f64) {
        let v = u.mul_vec(&self.amplitudes());
        let n2 = v[0].norm_sqr() + v[1].norm_sqr();
        (v, n2)
    }
}

/// Parameters of the mirror-symmetric trio `(cosθ, ±sinθ)`, `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorParams {
    pub p: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    items: Vec<(f64, PureState)>,
    mirror: Option<MirrorParams>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, PureState)>) -> Result<Self> {
        if items.is_empty() || items.len() > MAX_STATES {
            return Err(Error::Domain(format!(
                "ensembles hold 1 to {MAX_STATES} states, got {}",
                items.len()
            )));
        }
        if let Some((p, _)) = items.iter().find(|(p, _)| !(*p > 0.0)) {
            return Err(Error::Domain(format!("priors must be positive, got {p}")));
        }
        let sum: f64 = items.iter().map(|(p, _)| p).sum();
        if (sum - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::Domain(format!("priors must sum to 1, got {sum}")));
        }
        Ok(Self {
            items,
            mirror: None,
        })
    }

    /// `|ψ₁,₂⟩ = cosθ|0⟩ ± sinθ|1⟩`, `|ψ₃⟩ = |0⟩` with priors `(p, p, 1−2p)`.
    pub fn mirror(p: f64, theta: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::Domain(format!("p must lie in (0, 1/2), got {p}")));
        }
        if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain(format!("θ must lie in (0, π/2), got {theta}")));
        }
        let (s, c) = theta.sin_cos();
        let items = vec![
            (p, PureState::real(c, s)),
            (p, PureState::real(c, -s)),
            (1.0 - 2.0 * p, PureState::zero()),
        ];
        Ok(Self {
            items,
            mirror: Some(MirrorParams { p, theta }),
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(f64, PureState)] {
        &self.items
    }

    pub fn priors(&self) -> impl Iterator<Item = f64> + '_ {
        self.items.iter().map(|(p, _)| *p)
    }

    pub fn states(&self) -> impl Iterator<Item = &PureState> + '_ {
        self.items.iter().map(|(_, s)| s)
    }

    pub fn mirror_params(&self) -> Option<MirrorParams> {
        self.mirror
    }

    pub fn max_prior(&self) -> f64 {
        self.priors().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `pᵢρᵢ` for every member.
    pub fn weighted_densities(&self) -> Vec<ComplexMat2> {
        self.items.iter().map(|(p, s)| s.density() * *p).collect()
    }

    /// `ρ = Σ pᵢρᵢ`.
    pub fn average_density(&self) -> ComplexMat2 {
        self.weighted_densities().into_iter().sum()
    }

    /// Applies `ψ ↦ Uψ/‖Uψ‖` to every member.
    pub fn evolve(&self, u: &ComplexMat2, mode: EvolutionMode) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::Domain("propagator has non-finite entries".into()));
        }
        let mut items = Vec::with_capacity(self.items.len());
        let mut weights = Vec::with_capacity(self.items.len());
        for (p, s) in &self.items {
            let (v, n2) = s.apply(u);
            items.push((*p, PureState::normalized(v[0], v[1])?));
            weights.push(p * n2);
        }
        if mode == EvolutionMode::SurvivalReweighted {
            let total: f64 = weights.iter().sum();
            for ((p, _), w) in items.iter_mut().zip(&weights) {
                *p = w / total;
            }
        }
        Ok(Self {
            items,
            mirror: None,
        })
    }
}

/// `|ψ⟩⟨ψ|` of a pure state.
pub fn density(state: &PureState) -> ComplexMat2 {
    state.density()
}

/// How priors behave when the states are renormalized after non-unitary
/// evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum EvolutionMode {
    /// Priors stay as prepared; each state is normalized on its own.
    #[default]
    FixedPriors,
    /// Priors are multiplied by each state's survival probability `‖Uψᵢ‖²`
    /// and renormalized.
    SurvivalReweighted,
}

impl EvolutionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvolutionMode::FixedPriors => "fixed",
            EvolutionMode::SurvivalReweighted => "reweighted",
        }
    }
}

impl fmt::Display for EvolutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EvolutionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fixed" => Ok(EvolutionMode::FixedPriors),
            "reweighted" => Ok(EvolutionMode::SurvivalReweighted),
            other => Err(Error::Config(format!(
                "unknown prior handling `{other}` (expected fixed or reweighted)"
            ))),
        }
    }
}
