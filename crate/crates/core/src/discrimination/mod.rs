//! Figures of merit for discriminating qubit ensembles.
//!
//! Two scenarios are covered: minimum-error discrimination (MED, the best
//! average success probability) and maximum-confidence discrimination (MCD,
//! the best posterior probability that an outcome correctly heralds a chosen
//! state). For each there is a certified numerical solver, the known
//! closed form for the mirror-symmetric trio, and the non-contextual
//! (classical) bound that the quantum value must beat to witness
//! contextuality.

mod bounds;
mod dual;
mod mcd;
mod med;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::ComplexMat2;

pub use bounds::{
    mcd_classical_bound, mcd_closed_form_as_printed, med_classical_bound,
    med_closed_form_as_printed, med_closed_form_threshold,
};
pub use dual::med_dual_bloch;
pub use mcd::{mcd_confidence, mcd_confidence_for_element};
pub use med::{hykl_residual, med_optimal, med_success_fixed, square_root_measurement};

/// Tolerance on positivity and completeness of POVM elements.
pub const POVM_TOL: f64 = 1e-10;

/// Default margin by which the quantum value must exceed the classical bound.
pub const WITNESS_TOL: f64 = 1e-9;

/// Kernel threshold used when inverting the average density operator.
pub const PINV_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    elements: Vec<ComplexMat2>,
}

impl Povm {
    /// Validates positivity and `Σ Eᵢ = 𝕀` to [`POVM_TOL`].
    pub fn new(elements: Vec<ComplexMat2>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Domain("a POVM needs at least one element".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            let defect = e.hermiticity_defect();
            if defect > POVM_TOL {
                return Err(Error::Domain(format!("POVM element {i} is not Hermitian ({defect:e})")));
            }
            let [_, low] = e.herm_eigenvalues();
            if low < -POVM_TOL {
                return Err(Error::Domain(format!("POVM element {i} has eigenvalue {low:e}")));
            }
        }
        let povm = Self { elements };
        let defect = povm.completeness_defect();
        if defect > POVM_TOL {
            return Err(Error::Domain(format!("POVM elements sum to 𝕀 only within {defect:e}")));
        }
        Ok(povm)
    }

    pub(crate) fn from_elements_unchecked(elements: Vec<ComplexMat2>) -> Self {
        Self { elements }
    }

    /// Every element equal to `𝕀/n`.
    pub fn uniform(n: usize) -> Self {
        Self {
            elements: vec![ComplexMat2::identity() * (1.0 / n as f64); n],
        }
    }

    pub fn elements(&self) -> &[ComplexMat2] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `‖Σ Eᵢ − 𝕀‖_F`.
    pub fn completeness_defect(&self) -> f64 {
        let total: ComplexMat2 = self.elements.iter().copied().sum();
        (total - ComplexMat2::identity()).frobenius_norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedResult {
    pub success: f64,
    pub povm: Povm,
    pub certificate_residual: f64,
    /// Fixed-point iterations spent before certification.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McdResult {
    pub confidence: f64,
    pub optimal_element: ComplexMat2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextualityReport {
    pub quantum_value: f64,
    pub classical_bound: f64,
    pub gap: f64,
    pub witnessed: bool,
}

pub fn contextuality(quantum: f64, classical: f64) -> ContextualityReport {
    contextuality_with_tol(quantum, classical, WITNESS_TOL)
}

pub fn contextuality_with_tol(quantum: f64, classical: f64, tol: f64) -> ContextualityReport {
    let gap = quantum - classical;
    ContextualityReport {
        quantum_value: quantum,
        classical_bound: classical,
        gap,
        witnessed: gap > tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOpts {
    /// Certification threshold on [`hykl_residual`].
    pub tol: f64,
    pub max_iter: usize,
    /// Fixed-point iterations allowed before trying the exact dual solution.
    pub polish_after: usize,
}

impl Default for SolverOpts {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            polish_after: 200,
        }
    }
}
