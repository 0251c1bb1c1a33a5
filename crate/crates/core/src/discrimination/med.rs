use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::qmat::ComplexMat2;

use super::dual::med_dual_bloch;
use super::{MedResult, Povm, SolverOpts, PINV_EPS};

/// `Σ pᵢ Tr(ρᵢ Eᵢ)`.
pub fn med_success_fixed(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    check_sizes(ensemble, povm)?;
    Ok(success(&ensemble.weighted_densities(), povm.elements()))
}

/// Holevo–Yuen–Kennedy–Lax optimality residual.
///
/// With `Γ = Σ pⱼρⱼEⱼ`, a POVM is globally optimal iff `Γ` is Hermitian and
/// `Γ ≥ pᵢρᵢ` for every `i`. The residual is `max λ_max(pᵢρᵢ − Γ_h)` (using
/// the symmetrized `Γ_h`) plus `‖Γ − Γ†‖_F`. It is ≤ 0 up to rounding at the
/// optimum, and the success probability of any POVM is within twice the
/// residual of the optimum.
pub fn hykl_residual(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    check_sizes(ensemble, povm)?;
    Ok(residual(&ensemble.weighted_densities(), povm.elements()))
}

/// Square-root ("pretty good") measurement `Eᵢ = ρ^{-1/2} pᵢρᵢ ρ^{-1/2}`,
/// completed on the kernel of `ρ` when the ensemble does not span the space.
pub fn square_root_measurement(ensemble: &Ensemble) -> Result<Povm> {
    let weighted = ensemble.weighted_densities();
    let rho: ComplexMat2 = weighted.iter().copied().sum();
    let r = rho.inv_sqrt_psd(PINV_EPS)?;
    let elements = weighted.iter().map(|w| (r * *w * r).hermitian_part()).collect();
    Ok(Povm::from_elements_unchecked(complete(elements, &weighted)))
}

/// Optimal minimum-error measurement.
///
/// Starts from the square-root measurement and runs the fixed-point map
/// `Eᵢ ← Σ^{-1/2} pᵢρᵢ Eᵢ pᵢρᵢ Σ^{-1/2}`, `Σ = Σⱼ pⱼ²ρⱼEⱼρⱼ`, stopping as soon
/// as [`hykl_residual`] drops below `opts.tol`. The map converges slowly
/// when the optimum leaves some elements empty or the states nearly
/// coincide, so after `opts.polish_after` iterations the exact qubit dual
/// solution is tried as well.
pub fn med_optimal(ensemble: &Ensemble, opts: &SolverOpts) -> Result<MedResult> {
    let weighted = ensemble.weighted_densities();
    let mut elements = square_root_measurement(ensemble)?.elements().to_vec();
    let mut best = (f64::INFINITY, elements.clone());
    let mut polished = false;

    for iteration in 0..=opts.max_iter {
        let r = residual(&weighted, &elements);
        if r < best.0 {
            best = (r, elements.clone());
        }
        if r <= opts.tol {
            return Ok(finish(&weighted, elements, r, iteration));
        }
        if !polished && iteration >= opts.polish_after {
            polished = true;
            if let Some(povm) = med_dual_bloch(ensemble) {
                let exact = povm.elements().to_vec();
                let r_exact = residual(&weighted, &exact);
                if r_exact <= opts.tol {
                    return Ok(finish(&weighted, exact, r_exact, iteration));
                }
            }
        }
        if iteration == opts.max_iter {
            break;
        }
        elements = fixed_point_step(&weighted, &elements)?;
    }

    let (residual, elements) = best;
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        residual,
        best: Box::new(Povm::from_elements_unchecked(elements)),
    })
}

fn finish(weighted: &[ComplexMat2], elements: Vec<ComplexMat2>, r: f64, iterations: usize) -> MedResult {
    MedResult {
        success: success(weighted, &elements).clamp(0.0, 1.0),
        povm: Povm::from_elements_unchecked(elements),
        certificate_residual: r,
        iterations,
    }
}

fn fixed_point_step(weighted: &[ComplexMat2], elements: &[ComplexMat2]) -> Result<Vec<ComplexMat2>> {
    let sandwiches: Vec<ComplexMat2> = weighted
        .iter()
        .zip(elements)
        .map(|(w, e)| (*w * *e * *w).hermitian_part())
        .collect();
    let total: ComplexMat2 = sandwiches.iter().copied().sum();
    let g = total.inv_sqrt_psd(PINV_EPS * PINV_EPS)?;
    let next = sandwiches
        .iter()
        .map(|s| (g * *s * g).hermitian_part())
        .collect();
    Ok(complete(next, weighted))
}

/// Adds whatever is missing from `Σ Eᵢ = 𝕀` (a projector onto a kernel) to
/// the element of the most likely state.
fn complete(mut elements: Vec<ComplexMat2>, weighted: &[ComplexMat2]) -> Vec<ComplexMat2> {
    let total: ComplexMat2 = elements.iter().copied().sum();
    let missing = (ComplexMat2::identity() - total).hermitian_part();
    if missing.frobenius_norm() > 1e-13 {
        let heaviest = weighted
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.trace().re.total_cmp(&b.1.trace().re))
            .map(|(i, _)| i)
            .unwrap_or(0);
        elements[heaviest] += missing;
    }
    elements
}

fn success(weighted: &[ComplexMat2], elements: &[ComplexMat2]) -> f64 {
    weighted
        .iter()
        .zip(elements)
        .map(|(w, e)| (*w * *e).trace().re)
        .sum()
}

fn residual(weighted: &[ComplexMat2], elements: &[ComplexMat2]) -> f64 {
    let gamma: ComplexMat2 = weighted.iter().zip(elements).map(|(w, e)| *w * *e).sum();
    let defect = gamma.hermiticity_defect();
    let gamma_h = gamma.hermitian_part();
    let worst = weighted
        .iter()
        .map(|w| (*w - gamma_h).herm_eigenvalues()[0])
        .fold(f64::NEG_INFINITY, f64::max);
    worst + defect
}

fn check_sizes(ensemble: &Ensemble, povm: &Povm) -> Result<()> {
    if ensemble.len() != povm.len() {
        return Err(Error::Domain(format!(
            "ensemble has {} states but the POVM has {} elements",
            ensemble.len(),
            povm.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::PureState;
    use std::f64::consts::PI;

    fn helstrom(q: f64, overlap_sq: f64) -> f64 {
        0.5 * (1.0 + (1.0 - 4.0 * q * (1.0 - q) * overlap_sq).sqrt())
    }

    #[test]
    fn orthogonal_pair() {
        let e = Ensemble::new(vec![(0.5, PureState::zero()), (0.5, PureState::one())]).unwrap();
        let r = med_optimal(&e, &SolverOpts::default()).unwrap();
        assert!((r.success - 1.0).abs() < 1e-12);
        let proj = Povm::new(vec![ComplexMat2::diag(1.0, 0.0), ComplexMat2::diag(0.0, 1.0)]).unwrap();
        assert!((med_success_fixed(&e, &proj).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn helstrom_pair() {
        let th = PI / 12.0;
        let e = Ensemble::new(vec![
            (0.5, PureState::from_angle(th)),
            (0.5, PureState::from_angle(-th)),
        ])
        .unwrap();
        let r = med_optimal(&e, &SolverOpts::default()).unwrap();
        let expected = helstrom(0.5, (2.0 * th).cos().powi(2));
        assert!((expected - 0.75).abs() < 1e-15);
        assert!((r.success - 0.75).abs() < 1e-9, "{}", r.success);
        assert!(r.certificate_residual <= 1e-10);
    }

    #[test]
    fn swapped_helstrom_projectors_are_far_from_optimal() {
        let th = PI / 12.0;
        let e = Ensemble::new(vec![
            (0.5, PureState::from_angle(th)),
            (0.5, PureState::from_angle(-th)),
        ])
        .unwrap();
        let opt = med_optimal(&e, &SolverOpts::default()).unwrap();
        let mut swapped = opt.povm.elements().to_vec();
        swapped.swap(0, 1);
        let swapped = Povm::new(swapped).unwrap();
        assert!(hykl_residual(&e, &swapped).unwrap() > 0.1);
        assert!(hykl_residual(&e, &opt.povm).unwrap() <= 1e-10);
    }

    #[test]
    fn single_state_residual_is_zero() {
        let e = Ensemble::new(vec![(1.0, PureState::from_angle(0.3))]).unwrap();
        let povm = Povm::new(vec![ComplexMat2::identity()]).unwrap();
        assert!(hykl_residual(&e, &povm).unwrap().abs() < 1e-15);
        assert_eq!(med_success_fixed(&e, &povm).unwrap(), 1.0);
    }

    #[test]
    fn trine_square_root_measurement_is_optimal() {
        let e = Ensemble::mirror(1.0 / 3.0, PI / 3.0).unwrap();
        let srm = square_root_measurement(&e).unwrap();
        assert!((med_success_fixed(&e, &srm).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        let r = med_optimal(&e, &SolverOpts::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.certificate_residual < 1e-10);
        assert!((r.success - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_guess() {
        let e = Ensemble::mirror(1.0 / 3.0, 0.4).unwrap();
        let v = med_success_fixed(&e, &Povm::uniform(3)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        let e = Ensemble::mirror(1.0 / 3.0, 0.4).unwrap();
        assert!(med_success_fixed(&e, &Povm::uniform(2)).is_err());
        assert!(hykl_residual(&e, &Povm::uniform(4)).is_err());
    }

    #[test]
    fn coincident_states_fall_back_to_guessing() {
        let s = PureState::from_angle(0.2);
        let e = Ensemble::new(vec![(0.2, s), (0.5, s), (0.3, s)]).unwrap();
        let r = med_optimal(&e, &SolverOpts::default()).unwrap();
        // the certificate bounds the gap to the optimum by twice the residual
        assert!((r.success - 0.5).abs() <= 2.0 * r.certificate_residual + 1e-15, "{r:?}");
    }

    #[test]
    fn not_converged_carries_best_iterate() {
        let e = Ensemble::mirror(1.0 / 3.0, PI / 12.0).unwrap();
        let opts = SolverOpts { tol: 1e-10, max_iter: 3, polish_after: usize::MAX };
        match med_optimal(&e, &opts) {
            Err(Error::NotConverged { iterations, residual, best }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 1e-10);
                assert_eq!(best.len(), 3);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn fixed_point_alone_reaches_the_mirror_optimum() {
        let e = Ensemble::mirror(1.0 / 3.0, PI / 12.0).unwrap();
        let opts = SolverOpts { polish_after: usize::MAX, ..SolverOpts::default() };
        let r = med_optimal(&e, &opts).unwrap();
        assert!(r.iterations > 0);
        assert!((r.success - 0.5).abs() < 1e-9);
    }
}
