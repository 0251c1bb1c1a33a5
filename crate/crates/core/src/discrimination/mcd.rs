use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::qmat::ComplexMat2;

use super::{McdResult, PINV_EPS};

/// Maximum confidence for identifying `ensemble[target]` (0-based).
///
/// `C = p_t · λ_max(ρ^{-1/2} ρ_t ρ^{-1/2})` with `ρ = Σ pⱼρⱼ`, inverted on its
/// support when singular. The optimal element is the projector onto
/// `ρ^{-1/2}|v⟩` for the maximizing eigenvector `|v⟩`.
pub fn mcd_confidence(ensemble: &Ensemble, target: usize) -> Result<McdResult> {
    let (prior, state) = *ensemble.items().get(target).ok_or(Error::TargetOutOfRange {
        target,
        len: ensemble.len(),
    })?;
    let r = ensemble.average_density().inv_sqrt_psd(PINV_EPS)?;
    let sandwich = (r * state.density() * r).hermitian_part();
    let eig = sandwich.herm_eig()?;
    let confidence = (prior * eig.eigenvalues[0]).clamp(0.0, 1.0);

    let w = r.mul_vec(&eig.eigenvectors[0]);
    let n2 = w[0].norm_sqr() + w[1].norm_sqr();
    let optimal_element = if n2 > 0.0 {
        ComplexMat2::outer(&w, &w) * (1.0 / n2)
    } else {
        ComplexMat2::outer(&state.amplitudes(), &state.amplitudes())
    };
    Ok(McdResult {
        confidence,
        optimal_element,
    })
}

/// `p_t Tr(ρ_t E) / Tr(ρ E)` for a fixed element `E`.
///
/// When `E` registers nothing (`Tr(ρE) = 0`) the outcome never fires and the
/// prior is returned.
pub fn mcd_confidence_for_element(
    ensemble: &Ensemble,
    target: usize,
    element: &ComplexMat2,
) -> Result<f64> {
    let (prior, state) = *ensemble.items().get(target).ok_or(Error::TargetOutOfRange {
        target,
        len: ensemble.len(),
    })?;
    let hit = prior * (state.density() * *element).trace().re;
    let fired = (ensemble.average_density() * *element).trace().re;
    if fired <= 1e-300 {
        return Ok(prior);
    }
    Ok((hit / fired).clamp(0.0, 1.0))
}
