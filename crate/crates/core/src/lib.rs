//! Qubit dynamics under PT- and anti-PT-symmetric Hamiltonians, and the
//! state-discrimination figures of merit used to witness contextuality along
//! the evolution.
//!
//! ```
//! use nhqsd::{Ensemble, EvolutionMode, HamiltonianSpec, med_optimal, SolverOpts};
//!
//! let ens = Ensemble::mirror(1.0 / 3.0, std::f64::consts::PI / 12.0)?;
//! let u = HamiltonianSpec::pt(0.5)?.propagator(1.0);
//! let evolved = ens.evolve(&u, EvolutionMode::FixedPriors)?;
//! let med = med_optimal(&evolved, &SolverOpts::default())?;
//! assert!(med.success >= 1.0 / 3.0);
//! # Ok::<(), nhqsd::Error>(())
//! ```

pub mod discrimination;
pub mod ensembles;
pub mod error;
mod extended;
pub mod nonhermitian;
pub mod qmat;
pub mod sweep;

pub use discrimination::{
    contextuality, hykl_residual, mcd_confidence, med_optimal, ContextualityReport, McdResult,
    MedResult, Povm, SolverOpts,
};
pub use ensembles::{Ensemble, EvolutionMode, PureState};
pub use error::{Error, Result};
pub use nonhermitian::{HamiltonianSpec, Regime, SymmetryKind};
pub use qmat::{ComplexMat2, C64};
pub use sweep::{run_time_sweep, SweepConfig, SweepRecord};
