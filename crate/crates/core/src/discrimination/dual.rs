//! Exact minimum-error discrimination for pure qubit states.
//!
//! The MED dual is `min Tr Y` subject to `Y ≥ pᵢρᵢ`. Writing
//! `Y = R·𝕀 + y·σ` and `pᵢρᵢ = sᵢ(𝕀 + rᵢ·σ)` with `sᵢ = pᵢ/2`, each
//! constraint says the Bloch ball of radius `sᵢ` around `cᵢ = sᵢrᵢ` lies
//! inside the ball of radius `R` around `y`. The dual is therefore the
//! smallest ball enclosing a handful of balls in ℝ³, which is fixed by at
//! most four of them and can be found by enumerating supports. The optimal
//! POVM is rebuilt from the contact directions.

use crate::ensembles::{Ensemble, PureState};
use crate::qmat::{ComplexMat2, C64};

use super::{hykl_residual, Povm};

type V3 = [f64; 3];

/// Slack allowed when testing that a candidate ball encloses the others.
const CONTAIN_TOL: f64 = 1e-9;

/// Residual at which a reconstructed measurement is taken as exact.
const EXACT_RESIDUAL: f64 = 1e-13;

#[derive(Debug, Clone)]
struct Candidate {
    center: V3,
    radius: f64,
    support: Vec<usize>,
}

/// Optimal MED POVM from the exact dual, or `None` when no support set
/// yields a valid measurement (not expected for pure-state inputs).
pub fn med_dual_bloch(ensemble: &Ensemble) -> Option<Povm> {
    // Centres are taken relative to the first state's ball. Evolved states
    // can agree to many digits, and differencing rounded Bloch vectors would
    // leave the contact normals with only a few significant digits.
    let (p0, reference) = ensemble.items()[0];
    let r0 = reference.bloch_vector();
    let balls: Vec<(V3, f64)> = ensemble
        .items()
        .iter()
        .map(|(p, s)| {
            let half = 0.5 * p;
            let dr = bloch_difference(s, &reference);
            let shift = half - 0.5 * p0;
            (add(scale(dr, half), scale(r0, shift)), half)
        })
        .collect();

    let mut candidates = Vec::new();
    let n = balls.len();
    for size in 1..=n.min(4) {
        for_each_subset(n, size, &mut |subset| {
            for (center, radius) in tangent_balls(&balls, subset) {
                if encloses(&balls, center, radius) {
                    candidates.push(Candidate {
                        center,
                        radius,
                        support: subset.to_vec(),
                    });
                }
            }
        });
    }
    candidates.sort_by(|a, b| a.radius.total_cmp(&b.radius));

    // Near-degenerate supports make the containment test marginal, so a few
    // candidates are reconstructed and the best-certified one wins.
    let mut best: Option<(f64, Povm)> = None;
    for cand in &candidates {
        let Some(povm) = reconstruct(&balls, cand) else {
            continue;
        };
        let Ok(r) = hykl_residual(ensemble, &povm) else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, povm));
        }
        if r <= EXACT_RESIDUAL {
            break;
        }
    }
    best.map(|(_, povm)| povm)
}

/// `r(x) − r(y)` for Bloch vectors, via `⟨x|A|x⟩ − ⟨y|A|y⟩ = ⟨δ|A|x⟩ + ⟨y|A|δ⟩`
/// with `δ = x − y` after aligning the global phase of `x` to `y`.
fn bloch_difference(x: &PureState, y: &PureState) -> V3 {
    let overlap = y.inner(x);
    let phase = if overlap.norm() > 0.0 {
        overlap.conj() / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let xa = x.amplitudes().map(|a| a * phase);
    let ya = y.amplitudes();
    let d = [xa[0] - ya[0], xa[1] - ya[1]];
    // ⟨u|σ|v⟩ for the three Pauli matrices
    let pauli = |u: [C64; 2], v: [C64; 2]| {
        let (u0, u1) = (u[0].conj(), u[1].conj());
        [
            u0 * v[1] + u1 * v[0],
            C64::new(0.0, -1.0) * u0 * v[1] + C64::new(0.0, 1.0) * u1 * v[0],
            u0 * v[0] - u1 * v[1],
        ]
    };
    let a = pauli(d, xa);
    let b = pauli(ya, d);
    [(a[0] + b[0]).re, (a[1] + b[1]).re, (a[2] + b[2]).re]
}

fn tangent_balls(balls: &[(V3, f64)], subset: &[usize]) -> Vec<(V3, f64)> {
    let (c0, s0) = balls[subset[0]];
    if subset.len() == 1 {
        return vec![(c0, s0)];
    }
    let k = subset.len() - 1;
    let dirs: Vec<V3> = subset[1..].iter().map(|&j| sub(balls[j].0, c0)).collect();
    // 2(dⱼ·dₗ) λ = bⱼ + R·gⱼ
    let mut gram = [[0.0; 3]; 3];
    let mut rhs_b = [0.0; 3];
    let mut rhs_g = [0.0; 3];
    for j in 0..k {
        let sj = balls[subset[j + 1]].1;
        for l in 0..k {
            gram[j][l] = 2.0 * dot(dirs[j], dirs[l]);
        }
        // factored so |d|² survives next to nearly equal radii
        rhs_b[j] = dot(dirs[j], dirs[j]) + (s0 - sj) * (s0 + sj);
        rhs_g[j] = 2.0 * (sj - s0);
    }
    let Some(lambda_b) = solve(&gram, &rhs_b, k) else {
        return Vec::new();
    };
    let Some(lambda_g) = solve(&gram, &rhs_g, k) else {
        return Vec::new();
    };
    let combine = |lambda: &[f64; 3]| {
        let mut z = [0.0; 3];
        for (d, &l) in dirs.iter().zip(lambda) {
            z = add(z, scale(*d, l));
        }
        z
    };
    let zb = combine(&lambda_b);
    let zg = combine(&lambda_g);

    // |zb + R zg|² = (R − s0)², solved for the excess ρ = R − s0 ≥ 0 so that
    // nearly coincident balls (tiny |zb|) lose no digits to cancellation
    let u = add(zb, scale(zg, s0));
    let qa = dot(zg, zg) - 1.0;
    let qb = 2.0 * dot(u, zg);
    let qc = dot(u, u);
    let roots: Vec<f64> = if qa.abs() < 1e-14 {
        if qb.abs() < 1e-300 {
            Vec::new()
        } else {
            vec![-qc / qb]
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < -1e-14 * (qb * qb).max((4.0 * qa * qc).abs()) {
            Vec::new()
        } else {
            let sq = disc.max(0.0).sqrt();
            let q = -0.5 * (qb + if qb < 0.0 { -sq } else { sq });
            let mut r = Vec::with_capacity(2);
            if q != 0.0 {
                r.push(q / qa);
                r.push(qc / q);
            } else {
                r.push(0.0);
            }
            r
        }
    };
    let s_max = subset.iter().map(|&i| balls[i].1).fold(0.0, f64::max);
    roots
        .into_iter()
        .filter(|rho| rho.is_finite() && *rho >= -1e-13)
        .map(|rho| (add(u, scale(zg, rho)), s0 + rho))
        .filter(|(_, r)| *r >= s_max - 1e-13)
        .map(|(offset, r)| (add(c0, offset), r))
        .collect()
}

fn encloses(balls: &[(V3, f64)], center: V3, radius: f64) -> bool {
    balls
        .iter()
        .all(|(c, s)| norm(sub(center, *c)) + s <= radius + CONTAIN_TOL)
}

fn reconstruct(balls: &[(V3, f64)], cand: &Candidate) -> Option<Povm> {
    let n = balls.len();
    let mut elements = vec![ComplexMat2::zero(); n];
    // a support ball that coincides with the enclosing ball takes everything
    if let Some(&i) = cand
        .support
        .iter()
        .find(|&&i| norm(sub(cand.center, balls[i].0)) <= 1e-12)
    {
        elements[i] = ComplexMat2::identity();
        return Some(Povm::from_elements_unchecked(elements));
    }
    let normals: Vec<V3> = cand
        .support
        .iter()
        .map(|&i| {
            let d = sub(balls[i].0, cand.center);
            scale(d, 1.0 / norm(d))
        })
        .collect();
    // Σ wᵢ = 2, Σ wᵢ nᵢ = 0 in the least-squares sense
    let k = normals.len();
    let column = |i: usize| [1.0, normals[i][0], normals[i][1], normals[i][2]];
    let target = [2.0, 0.0, 0.0, 0.0];
    let mut ata = [[0.0; 4]; 4];
    let mut atb = [0.0; 4];
    for i in 0..k {
        let ci = column(i);
        for j in 0..k {
            let cj = column(j);
            ata[i][j] = (0..4).map(|r| ci[r] * cj[r]).sum();
        }
        atb[i] = (0..4).map(|r| ci[r] * target[r]).sum();
    }
    let w = solve4(&ata, &atb, k)?;
    let mut fit = [0.0; 4];
    for (i, wi) in w.iter().take(k).enumerate() {
        if *wi < -1e-10 {
            return None;
        }
        let ci = column(i);
        for r in 0..4 {
            fit[r] += wi * ci[r];
        }
    }
    let misfit: f64 = (0..4).map(|r| (fit[r] - target[r]).powi(2)).sum::<f64>().sqrt();
    if misfit > 1e-9 {
        return None;
    }
    for (slot, (&i, nrm)) in cand.support.iter().zip(&normals).enumerate() {
        elements[i] = ComplexMat2::from_bloch(w[slot].max(0.0), *nrm);
    }
    Some(Povm::from_elements_unchecked(elements))
}

fn for_each_subset(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, f);
            cur.pop();
        }
    }
    rec(0, n, size, &mut Vec::with_capacity(size), f);
}

/// Gaussian elimination with partial pivoting on the leading `k×k` block.
/// Rejects near-singular systems (affinely dependent supports).
fn solve(a: &[[f64; 3]; 3], b: &[f64; 3], k: usize) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 4];
    let mut v = [0.0; 4];
    for i in 0..k {
        m[i][..k].copy_from_slice(&a[i][..k]);
        v[i] = b[i];
    }
    let x = solve4(&m, &v, k)?;
    Some([x[0], x[1], x[2]])
}

fn solve4(a: &[[f64; 4]; 4], b: &[f64; 4], k: usize) -> Option<[f64; 4]> {
    let mut m = *a;
    let mut v = *b;
    let scale_ref = (0..k).map(|i| m[i][i].abs()).fold(0.0, f64::max);
    if scale_ref == 0.0 {
        return None;
    }
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= 1e-12 * scale_ref {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..k {
            let f = m[row][col] / m[col][col];
            for c in col..k {
                m[row][c] -= f * m[col][c];
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..k).rev() {
        let acc: f64 = (row + 1..k).map(|c| m[row][c] * x[c]).sum();
        x[row] = (v[row] - acc) / m[row][row];
    }
    Some(x)
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::{hykl_residual, med_success_fixed};
    use crate::ensembles::PureState;
    use std::f64::consts::PI;

    #[test]
    fn trine() {
        let e = Ensemble::mirror(1.0 / 3.0, PI / 3.0).unwrap();
        let povm = med_dual_bloch(&e).unwrap();
        assert!(povm.completeness_defect() < 1e-12);
        assert!((med_success_fixed(&e, &povm).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(hykl_residual(&e, &povm).unwrap() < 1e-12);
    }

    #[test]
    fn mirror_with_unused_element() {
        let e = Ensemble::mirror(1.0 / 3.0, PI / 12.0).unwrap();
        let povm = med_dual_bloch(&e).unwrap();
        assert!((med_success_fixed(&e, &povm).unwrap() - 0.5).abs() < 1e-12);
        assert!(hykl_residual(&e, &povm).unwrap() < 1e-12);
    }

    #[test]
    fn dominant_prior_wins_for_identical_states() {
        let s = PureState::from_angle(1.1);
        let e = Ensemble::new(vec![(0.6, s), (0.4, s)]).unwrap();
        let povm = med_dual_bloch(&e).unwrap();
        assert_eq!(povm.elements()[0], ComplexMat2::identity());
        assert!((med_success_fixed(&e, &povm).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn tetrahedral_states_need_four_contacts() {
        let dirs = [
            [0.0, 0.0, 1.0],
            [8f64.sqrt() / 3.0, 0.0, -1.0 / 3.0],
            [-2f64.sqrt() / 3.0, (2.0 / 3.0f64).sqrt(), -1.0 / 3.0],
            [-2f64.sqrt() / 3.0, -(2.0 / 3.0f64).sqrt(), -1.0 / 3.0],
        ];
        let items = dirs
            .iter()
            .map(|r| {
                let theta = r[2].clamp(-1.0, 1.0).acos();
                let phi = r[1].atan2(r[0]);
                let s = PureState::new(
                    (theta / 2.0).cos().into(),
                    crate::qmat::C64::from_polar((theta / 2.0).sin(), phi),
                )
                .unwrap();
                (0.25, s)
            })
            .collect();
        let e = Ensemble::new(items).unwrap();
        let povm = med_dual_bloch(&e).unwrap();
        // Eᵢ = ρᵢ/2 is optimal for the tetrahedron
        assert!((med_success_fixed(&e, &povm).unwrap() - 0.5).abs() < 1e-12);
        assert!(hykl_residual(&e, &povm).unwrap() < 1e-12);
    }
}
