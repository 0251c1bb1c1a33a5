//! Oracles and generators shared by the integration tests. None of them call
//! into the solvers under test.
#![allow(dead_code)]

use std::f64::consts::PI;

use nhqsd::{ComplexMat2, Ensemble, PureState, C64};

/// Bloch vector written out from amplitudes.
pub fn bloch(s: &PureState) -> [f64; 3] {
    let [c0, c1] = s.amplitudes();
    let x = c0.conj() * c1;
    [2.0 * x.re, 2.0 * x.im, c0.norm_sqr() - c1.norm_sqr()]
}

fn confidence_at(priors: &[f64], rs: &[[f64; 3]], target: usize, polar: f64, az: f64) -> f64 {
    let n = [polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos()];
    let hit = |r: &[f64; 3]| 1.0 + r[0] * n[0] + r[1] * n[1] + r[2] * n[2];
    let total: f64 = priors.iter().zip(rs).map(|(p, r)| p * hit(r)).sum();
    if total > 1e-12 {
        priors[target] * hit(&rs[target]) / total
    } else {
        0.0
    }
}

/// Best MCD confidence for `target` over rank-one elements `(𝕀 + n·σ)/2`
/// sampled on a polar grid with `n_polar + 1` by `2 n_polar + 1` points.
pub fn grid_mcd(ens: &Ensemble, target: usize, n_polar: usize) -> f64 {
    grid_mcd_argmax(ens, target, n_polar).0
}

fn grid_mcd_argmax(ens: &Ensemble, target: usize, n_polar: usize) -> (f64, f64, f64) {
    let priors: Vec<f64> = ens.priors().collect();
    let rs: Vec<[f64; 3]> = ens.states().map(bloch).collect();
    let mut best = (0.0f64, 0.0, 0.0);
    for i in 0..=n_polar {
        let polar = PI * i as f64 / n_polar as f64;
        for j in 0..=2 * n_polar {
            let az = PI * j as f64 / n_polar as f64;
            let c = confidence_at(&priors, &rs, target, polar, az);
            if c > best.0 {
                best = (c, polar, az);
            }
        }
    }
    best
}

/// Grid search followed by compass refinement around the best grid point.
pub fn refined_mcd(ens: &Ensemble, target: usize) -> f64 {
    let priors: Vec<f64> = ens.priors().collect();
    let rs: Vec<[f64; 3]> = ens.states().map(bloch).collect();
    let (mut best, mut polar, mut az) = grid_mcd_argmax(ens, target, 180);
    let mut step = PI / 180.0;
    while step > 1e-12 {
        let mut moved = false;
        for (dp, da) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let c = confidence_at(&priors, &rs, target, polar + dp, az + da);
            if c > best {
                (best, polar, az, moved) = (c, polar + dp, az + da, true);
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    best
}

/// Two-state optimum `(1 + sqrt(1 − 4 p₁p₂ |⟨ψ₁|ψ₂⟩|²)) / 2`.
pub fn helstrom(p1: f64, s1: &PureState, p2: f64, s2: &PureState) -> f64 {
    let [a0, a1] = s1.amplitudes();
    let [b0, b1] = s2.amplitudes();
    let overlap = (a0.conj() * b0 + a1.conj() * b1).norm_sqr();
    0.5 * (1.0 + (1.0 - 4.0 * p1 * p2 * overlap).max(0.0).sqrt())
}

/// Success `Σ pᵢ ⟨ψᵢ|Eᵢ|ψᵢ⟩` written out directly.
pub fn success(ens: &Ensemble, elements: &[ComplexMat2]) -> f64 {
    ens.items()
        .iter()
        .zip(elements)
        .map(|((p, s), e)| {
            let v = s.amplitudes();
            let ev = e.mul_vec(&v);
            p * (v[0].conj() * ev[0] + v[1].conj() * ev[1]).re
        })
        .sum()
}

/// State from four reals in [-1, 1]; `None` when too close to zero.
pub fn state_from(v: [f64; 4]) -> Option<PureState> {
    let n2: f64 = v.iter().map(|x| x * x).sum();
    if n2 < 1e-2 {
        return None;
    }
    PureState::normalized(C64::new(v[0], v[1]), C64::new(v[2], v[3])).ok()
}

/// Ensemble from raw weights and state coordinates.
pub fn ensemble_from(weights: &[f64], coords: &[[f64; 4]]) -> Option<Ensemble> {
    let total: f64 = weights.iter().sum();
    let items: Option<Vec<_>> = weights
        .iter()
        .zip(coords)
        .map(|(w, c)| state_from(*c).map(|s| (w / total, s)))
        .collect();
    Ensemble::new(items?).ok()
}

/// SU(2) element from four reals.
pub fn unitary_from(v: [f64; 4]) -> Option<ComplexMat2> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 1e-1 {
        return None;
    }
    let a = C64::new(v[0], v[1]) / n;
    let b = C64::new(v[2], v[3]) / n;
    Some(ComplexMat2::new(a, -b.conj(), b, a.conj()))
}

/// Rotates every state of `ens` by `u`.
pub fn rotate(ens: &Ensemble, u: &ComplexMat2) -> Ensemble {
    let items = ens
        .items()
        .iter()
        .map(|(p, s)| {
            let [c0, c1] = u.mul_vec(&s.amplitudes());
            (*p, PureState::normalized(c0, c1).unwrap())
        })
        .collect();
    Ensemble::new(items).unwrap()
}

/// Feasible POVM `S^{-1/2} Aᵢ S^{-1/2}` from positive parts `Aᵢ = GᵢGᵢ†`.
pub fn povm_from(gs: &[[f64; 8]]) -> Vec<ComplexMat2> {
    let parts: Vec<ComplexMat2> = gs
        .iter()
        .map(|g| {
            let m = ComplexMat2::new(
                C64::new(g[0], g[1]),
                C64::new(g[2], g[3]),
                C64::new(g[4], g[5]),
                C64::new(g[6], g[7]),
            );
            m * m.adjoint()
        })
        .collect();
    let total: ComplexMat2 = parts.iter().copied().sum();
    let r = total.inv_sqrt_psd(1e-12).unwrap();
    parts.iter().map(|a| (r * *a * r).hermitian_part()).collect()
}
