//! Closed forms for the mirror-symmetric trio `(cosθ, ±sinθ)`, `(1, 0)` with
//! priors `(p, p, 1−2p)`.
//!
//! The two quantum expressions are evaluated verbatim, without correction.
//! Both leave the range of a probability on part of the domain (MED drops
//! below the guessing floor on its second branch; MCD exceeds 1 at the
//! trine), so the sweeps use the certified solvers and these are kept for
//! side-by-side comparison only.

/// `p` at which the closed-form MED expression switches branch,
/// `1 / (2 + cosθ(cosθ + sinθ))`.
pub fn med_closed_form_threshold(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    1.0 / (2.0 + c * (c + s))
}

/// Closed-form MED success probability, verbatim.
pub fn med_closed_form_as_printed(p: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let denom = 2.0 + c * (c + s);
    if p >= 1.0 / denom {
        p * (1.0 + (2.0 * theta).sin())
    } else {
        (1.0 - 2.0 * p) * (p * s * s + 1.0 - 2.0 * p - p * c * c) / denom
    }
}

/// Non-contextual upper bound on MED success.
pub fn med_classical_bound(p: f64, theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    let c2_2 = (2.0 * theta).cos().powi(2);
    if p >= 1.0 / 3.0 {
        1.0 - (1.0 - 2.0 * p) * c2 - p * c2_2
    } else {
        1.0 - p * c2 - p * c2_2
    }
}

/// Closed-form MCD confidence for `ψ₁`, verbatim.
pub fn mcd_closed_form_as_printed(p: f64, theta: f64) -> f64 {
    (1.0 + 2.0 * p * theta.cos()) / (2.0 - 4.0 * p * theta.sin().powi(2))
}

/// Non-contextual upper bound on the confidence for `ψ₁`.
pub fn mcd_classical_bound(p: f64, theta: f64) -> f64 {
    1.0 / (1.0 + (2.0 * theta).cos().powi(2) + (1.0 / p - 2.0) * theta.cos().powi(2))
}
