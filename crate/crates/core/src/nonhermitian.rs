//! PT- and anti-PT-symmetric single-qubit Hamiltonians and their propagators.
//!
//! Units: ħ = 1 and unit off-diagonal coupling. The diagonal energy offset is
//! zero, so every Hamiltonian here is traceless and squares to a multiple of
//! the identity, `H² = μ𝕀`. That single scalar drives the spectrum, the
//! symmetry regime and the closed-form propagator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::extended::{Dc, DdMat2};
use crate::qmat::{ComplexMat2, C64};

/// Window around `|μ| = 0` (as `ep_tolerance²`) where the propagator switches
/// to its exceptional-point (linear) form.
pub const EP_TOLERANCE: f64 = 1e-9;

/// Default window around `nh = 1` classified as the exceptional point.
pub const REGIME_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    /// `H = σ₁ + i·a·σ₃`
    Pt,
    /// `H = b·σ₃ + i·σ₁`
    Apt,
}

impl SymmetryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryKind::Pt => "pt",
            SymmetryKind::Apt => "apt",
        }
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pt" => Ok(SymmetryKind::Pt),
            "apt" => Ok(SymmetryKind::Apt),
            other => Err(Error::Config(format!(
                "unknown symmetry kind `{other}` (expected pt or apt)"
            ))),
        }
    }
}

/// A symmetry kind together with its non-Hermiticity parameter
/// (`a` for PT, `b` for APT).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    kind: SymmetryKind,
    nh: f64,
}

impl HamiltonianSpec {
    pub fn new(kind: SymmetryKind, nh: f64) -> Result<Self> {
        if !nh.is_finite() || nh < 0.0 {
            return Err(Error::Domain(format!(
                "non-Hermiticity must be finite and non-negative, got {nh}"
            )));
        }
        Ok(Self { kind, nh })
    }

    pub fn pt(a: f64) -> Result<Self> {
        Self::new(SymmetryKind::Pt, a)
    }

    pub fn apt(b: f64) -> Result<Self> {
        Self::new(SymmetryKind::Apt, b)
    }

    /// Builds the spec from the general `[[r e^{iφ}, s], [s, r e^{-iφ}]]`
    /// parameterization (PT) or its `i·s` off-diagonal counterpart (APT),
    /// via `nh = r·sinφ / s`. The discarded `r·cosφ` part only shifts
    /// energies and does not enter the dynamics studied here.
    pub fn from_general(kind: SymmetryKind, r: f64, phi: f64, s: f64) -> Result<Self> {
        if s == 0.0 {
            return Err(Error::Domain("coupling s must be non-zero".into()));
        }
        Self::new(kind, (r * phi.sin() / s).abs())
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn nh(&self) -> f64 {
        self.nh
    }

    pub fn matrix(&self) -> ComplexMat2 {
        let x = self.nh;
        let i = C64::new(0.0, 1.0);
        match self.kind {
            SymmetryKind::Pt => ComplexMat2::new(i * x, 1.0.into(), 1.0.into(), -i * x),
            SymmetryKind::Apt => ComplexMat2::new(x.into(), i, i, (-x).into()),
        }
    }

    /// The scalar `μ` with `H² = μ𝕀`.
    pub fn omega2(&self) -> f64 {
        match self.kind {
            SymmetryKind::Pt => 1.0 - self.nh * self.nh,
            SymmetryKind::Apt => self.nh * self.nh - 1.0,
        }
    }

    /// `(E₊, E₋)`, ordered by real part and then imaginary part. Degenerate
    /// (both zero) inside the default exceptional-point window.
    pub fn eigenvalues(&self) -> (C64, C64) {
        self.eigenvalues_with_tol(REGIME_TOLERANCE)
    }

    pub fn eigenvalues_with_tol(&self, tol: f64) -> (C64, C64) {
        if self.classify(tol).label == Regime::ExceptionalPoint {
            return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        }
        let mu = self.omega2();
        let root = if mu >= 0.0 {
            C64::new(mu.sqrt(), 0.0)
        } else {
            C64::new(0.0, (-mu).sqrt())
        };
        (root, -root)
    }

    /// Energy splitting `E₊ − E₋` (`2ω`).
    pub fn splitting(&self) -> C64 {
        let (plus, minus) = self.eigenvalues();
        plus - minus
    }

    pub fn classify(&self, tol: f64) -> RegimeClass {
        let label = if (self.nh - 1.0).abs() <= tol {
            Regime::ExceptionalPoint
        } else {
            let below = self.nh < 1.0;
            match (self.kind, below) {
                (SymmetryKind::Pt, true) | (SymmetryKind::Apt, false) => Regime::Unbroken,
                _ => Regime::Broken,
            }
        };
        RegimeClass {
            label,
            ep_tolerance: tol,
        }
    }

    pub fn regime(&self) -> Regime {
        self.classify(REGIME_TOLERANCE).label
    }

    pub fn propagator_form(&self) -> PropagatorForm {
        let omega2 = self.omega2();
        let branch = if omega2.abs() <= EP_TOLERANCE * EP_TOLERANCE {
            Branch::Linear
        } else if omega2 > 0.0 {
            Branch::Trig
        } else {
            Branch::Hyperbolic
        };
        let alpha = (self.kind == SymmetryKind::Pt && branch == Branch::Trig)
            .then(|| self.nh.acos());
        PropagatorForm {
            omega2,
            branch,
            alpha,
        }
    }

    /// `U(t) = exp(−iHt) = c(t)·𝕀 − i·k(t)·H`, exact for every branch since
    /// `H² = μ𝕀`.
    ///
    /// Once the hyperbolic growth `κ|t|` exceeds 1 the coefficients and the
    /// cancellation in `c − k·nh` are carried in double-double precision, so
    /// the entries stay accurate to rounding however large they get.
    pub fn propagator(&self, t: f64) -> ComplexMat2 {
        let form = self.propagator_form();
        if form.branch == Branch::Hyperbolic && (-form.omega2).sqrt() * t.abs() > 1.0 {
            return self.propagator_hyperbolic(t);
        }
        let (c, k) = form.coefficients(t);
        ComplexMat2::identity() * c - self.matrix() * C64::new(0.0, k)
    }

    fn propagator_hyperbolic(&self, t: f64) -> ComplexMat2 {
        let one = TwoFloat::from(1.0);
        let nh2 = TwoFloat::from(self.nh) * TwoFloat::from(self.nh);
        let kappa = match self.kind {
            SymmetryKind::Pt => nh2 - one,
            SymmetryKind::Apt => one - nh2,
        }
        .sqrt();
        // twofloat's exp loses accuracy for negative arguments; sinh is odd
        let e = (kappa * TwoFloat::from(t.abs())).exp();
        let inv = e.recip();
        let half = TwoFloat::from(0.5);
        let c = (e + inv) * half;
        let k = (e - inv) * half / kappa;
        let k = if t < 0.0 { -k } else { k };
        // −i·k·h = k·Im h − i·k·Re h
        let entry = |h: C64, diagonal: bool| {
            let re = k * TwoFloat::from(h.im);
            let re = if diagonal { re + c } else { re };
            Dc::new(re, -(k * TwoFloat::from(h.re))).round()
        };
        let h = self.matrix();
        ComplexMat2::new(
            entry(h.a11, true),
            entry(h.a12, false),
            entry(h.a21, false),
            entry(h.a22, true),
        )
    }

    /// Independent evaluation of `exp(−iHt)` by a scaled Taylor series
    /// followed by repeated squaring, in double-double precision.
    pub fn propagator_oracle(&self, t: f64, terms: usize) -> Result<ComplexMat2> {
        let h = self.matrix();
        let norm = h.frobenius_norm();
        if !t.is_finite() || t.abs() * norm > 30.0 {
            return Err(Error::Domain(format!(
                "series oracle needs |t|·‖H‖ ≤ 30, got {}",
                t.abs() * norm
            )));
        }
        if terms < 40 {
            return Err(Error::Domain(format!("series oracle needs ≥ 40 terms, got {terms}")));
        }
        let x_norm = t.abs() * norm;
        let mut squarings = 0u32;
        let mut scaled = x_norm;
        while scaled > 0.5 {
            scaled *= 0.5;
            squarings += 1;
        }
        // −iHt/2ˢ, exact apart from the product with t
        let x = DdMat2::from_mat(&(h * C64::new(0.0, -1.0)))
            .scale(TwoFloat::from(t) * TwoFloat::from(0.5f64.powi(squarings as i32)));

        let mut sum = DdMat2::identity();
        let mut term = DdMat2::identity();
        for n in 1..terms {
            term = (term * x).scale(TwoFloat::from(n as f64).recip());
            sum = sum + term;
        }
        // remainder after `terms` terms, bounded by a geometric series
        let mut tail = 1.0;
        for n in 1..=terms {
            tail *= scaled / n as f64;
        }
        let tail_bound = tail / (1.0 - scaled / (terms as f64 + 1.0));
        if !(tail_bound <= 1e-12) {
            return Err(Error::SeriesNotConverged { tail_bound });
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        Ok(sum.round())
    }
}

impl fmt::Display for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(nh={})", self.kind, self.nh)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "unbroken")]
    Unbroken,
    #[serde(rename = "exceptional")]
    ExceptionalPoint,
    #[serde(rename = "broken")]
    Broken,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Unbroken => "unbroken",
            Regime::ExceptionalPoint => "exceptional",
            Regime::Broken => "broken",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "unbroken" => Ok(Regime::Unbroken),
            "exceptional" => Ok(Regime::ExceptionalPoint),
            "broken" => Ok(Regime::Broken),
            other => Err(Error::Parse(format!("unknown regime label `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeClass {
    pub label: Regime,
    pub ep_tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Trig,
    Linear,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorForm {
    pub omega2: f64,
    pub branch: Branch,
    /// `arccos a`, only on the PT trigonometric branch.
    pub alpha: Option<f64>,
}

impl PropagatorForm {
    /// `(c(t), k(t))` with `U(t) = c·𝕀 − i·k·H`.
    pub fn coefficients(&self, t: f64) -> (f64, f64) {
        match self.branch {
            Branch::Trig => {
                let w = self.omega2.sqrt();
                ((w * t).cos(), (w * t).sin() / w)
            }
            Branch::Linear => (1.0, t),
            Branch::Hyperbolic => {
                let w = (-self.omega2).sqrt();
                ((w * t).cosh(), (w * t).sinh() / w)
            }
        }
    }

    /// Period `π/√μ` of every quadratic form in `U(t)`; `None` off the trig branch.
    pub fn period(&self) -> Option<f64> {
        (self.branch == Branch::Trig).then(|| std::f64::consts::PI / self.omega2.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matrices() {
        assert_eq!(HamiltonianSpec::pt(0.0).unwrap().matrix(), ComplexMat2::sigma_x());
        assert_eq!(
            HamiltonianSpec::pt(0.5).unwrap().matrix(),
            ComplexMat2::new(c(0.0, 0.5), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -0.5))
        );
        assert_eq!(
            HamiltonianSpec::apt(2.0).unwrap().matrix(),
            ComplexMat2::new(c(2.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(-2.0, 0.0))
        );
    }

    #[test]
    fn rejects_bad_nh() {
        assert!(HamiltonianSpec::pt(-0.1).is_err());
        assert!(HamiltonianSpec::apt(f64::NAN).is_err());
        assert!(HamiltonianSpec::apt(f64::INFINITY).is_err());
    }

    #[test]
    fn general_parameterization_reduces_to_nh() {
        let spec = HamiltonianSpec::from_general(SymmetryKind::Pt, 0.25, FRAC_PI_2, 0.5).unwrap();
        assert_eq!(spec.nh(), 0.5);
    }

    #[test]
    fn matrices_are_traceless_and_square_to_mu() {
        for kind in [SymmetryKind::Pt, SymmetryKind::Apt] {
            for nh in [0.0, 0.3, 1.0, 1.7, 3.0] {
                let spec = HamiltonianSpec::new(kind, nh).unwrap();
                let h = spec.matrix();
                assert_eq!(h.trace(), c(0.0, 0.0));
                let mu = ComplexMat2::identity() * spec.omega2();
                assert!((h * h).approx_eq(&mu, 1e-15));
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let (p, m) = HamiltonianSpec::pt(0.0).unwrap().eigenvalues();
        assert_eq!((p, m), (c(1.0, 0.0), c(-1.0, 0.0)));
        let (p, m) = HamiltonianSpec::pt(0.5).unwrap().eigenvalues();
        assert!((p - c(0.8660254037844386, 0.0)).norm() < 1e-15);
        assert!((m + p).norm() == 0.0);
        let (p, m) = HamiltonianSpec::pt(2.0).unwrap().eigenvalues();
        assert!((p - c(0.0, 1.7320508075688772)).norm() < 1e-15);
        assert!((m - c(0.0, -1.7320508075688772)).norm() < 1e-15);
        let (p, m) = HamiltonianSpec::apt(0.5).unwrap().eigenvalues();
        assert!(p.re == 0.0 && p.im > 0.0 && m == -p);
    }

    #[test]
    fn eigenvalues_are_roots_of_characteristic_polynomial() {
        for kind in [SymmetryKind::Pt, SymmetryKind::Apt] {
            for nh in [0.2, 0.9, 1.4, 2.5] {
                let spec = HamiltonianSpec::new(kind, nh).unwrap();
                let h = spec.matrix();
                let (p, m) = spec.eigenvalues();
                for e in [p, m] {
                    let poly = e * e - h.trace() * e + h.det();
                    assert!(poly.norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn classification() {
        let tol = 1e-6;
        assert_eq!(HamiltonianSpec::pt(0.5).unwrap().classify(tol).label, Regime::Unbroken);
        assert_eq!(HamiltonianSpec::pt(2.0).unwrap().classify(tol).label, Regime::Broken);
        assert_eq!(HamiltonianSpec::apt(0.5).unwrap().classify(tol).label, Regime::Broken);
        assert_eq!(HamiltonianSpec::apt(2.0).unwrap().classify(tol).label, Regime::Unbroken);
        for kind in [SymmetryKind::Pt, SymmetryKind::Apt] {
            let spec = HamiltonianSpec::new(kind, 1.0 + 1e-7).unwrap();
            assert_eq!(spec.classify(tol).label, Regime::ExceptionalPoint);
            assert_eq!(spec.classify(1e-8).label, if kind == SymmetryKind::Pt {
                Regime::Broken
            } else {
                Regime::Unbroken
            });
        }
    }

    #[test]
    fn propagator_forms() {
        let form = HamiltonianSpec::pt(0.5).unwrap().propagator_form();
        assert_eq!(form.branch, Branch::Trig);
        assert!((form.alpha.unwrap() - PI / 3.0).abs() < 1e-15);
        let form = HamiltonianSpec::apt(2.0).unwrap().propagator_form();
        assert_eq!((form.branch, form.alpha), (Branch::Trig, None));
        assert_eq!(HamiltonianSpec::pt(1.0).unwrap().propagator_form().branch, Branch::Linear);
        assert_eq!(HamiltonianSpec::apt(1.0).unwrap().propagator_form().branch, Branch::Linear);
        assert_eq!(HamiltonianSpec::pt(1.5).unwrap().propagator_form().branch, Branch::Hyperbolic);
        assert_eq!(HamiltonianSpec::apt(0.5).unwrap().propagator_form().branch, Branch::Hyperbolic);
    }

    #[test]
    fn hermitian_quarter_turn() {
        let u = HamiltonianSpec::pt(0.0).unwrap().propagator(FRAC_PI_2);
        let expected = ComplexMat2::sigma_x() * c(0.0, -1.0);
        assert!(u.approx_eq(&expected, 1e-15), "{u:?}");
    }

    #[test]
    fn apt_unbroken_entries() {
        let spec = HamiltonianSpec::apt(2.0).unwrap();
        let w = 3f64.sqrt();
        for t in [-1.3, 0.0, 0.4, 2.9, 7.0] {
            let a = (w * t).cos();
            let b = 2.0 / w * (w * t).sin();
            let cc = (w * t).sin() / w;
            let expected = ComplexMat2::new(c(a, -b), c(cc, 0.0), c(cc, 0.0), c(a, b));
            assert!(spec.propagator(t).approx_eq(&expected, 1e-14));
        }
    }

    #[test]
    fn apt_broken_and_ep_entries() {
        let b = 0.6f64;
        let spec = HamiltonianSpec::apt(b).unwrap();
        let w = (1.0 - b * b).sqrt();
        let t = 1.7;
        let a = (w * t).cosh();
        let bb = b / w * (w * t).sinh();
        let cc = (w * t).sinh() / w;
        let expected = ComplexMat2::new(c(a, -bb), c(cc, 0.0), c(cc, 0.0), c(a, bb));
        assert!(spec.propagator(t).approx_eq(&expected, 1e-13));

        let ep = HamiltonianSpec::apt(1.0).unwrap().propagator(t);
        let expected = ComplexMat2::new(c(1.0, -t), c(t, 0.0), c(t, 0.0), c(1.0, t));
        assert!(ep.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn pt_exceptional_point_truncates() {
        let u = HamiltonianSpec::pt(1.0).unwrap().propagator(1.0);
        let expected = ComplexMat2::new(c(2.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0));
        assert!(u.approx_eq(&expected, 1e-15), "{u:?}");
    }

    #[test]
    fn pt_trig_branch_in_alpha_form() {
        // diagonal entries sin(α ± ωt)/sin α with α = arccos a; off-diagonal
        // −i·sin(ωt)/sin α
        let spec = HamiltonianSpec::pt(0.6).unwrap();
        let alpha = spec.propagator_form().alpha.unwrap();
        let w = 0.8;
        let t = 2.3;
        let s = alpha.sin();
        let u = spec.propagator(t);
        assert!((u.a11 - c((alpha + w * t).sin() / s, 0.0)).norm() < 1e-14);
        assert!((u.a22 - c((alpha - w * t).sin() / s, 0.0)).norm() < 1e-14);
        assert!((u.a12 - c(0.0, -(w * t).sin() / w)).norm() < 1e-14);
        assert!((u.a21 - u.a12).norm() == 0.0);
    }

    #[test]
    fn oracle_examples() {
        let pt = HamiltonianSpec::pt(0.5).unwrap();
        let apt = HamiltonianSpec::apt(0.3).unwrap();
        assert!(pt.propagator_oracle(3.0, 40).unwrap().approx_eq(&pt.propagator(3.0), 1e-10));
        assert!(apt.propagator_oracle(2.0, 40).unwrap().approx_eq(&apt.propagator(2.0), 1e-10));
        for spec in [pt, apt] {
            assert_eq!(spec.propagator_oracle(0.0, 40).unwrap(), ComplexMat2::identity());
        }
    }

    #[test]
    fn oracle_preconditions() {
        let spec = HamiltonianSpec::pt(3.0).unwrap();
        assert!(matches!(spec.propagator_oracle(10.0, 40), Err(Error::Domain(_))));
        assert!(matches!(spec.propagator_oracle(1.0, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn splitting_matches_two_omega() {
        for a in [0.0, 0.1, 0.5, 0.9, 0.999] {
            let s = HamiltonianSpec::pt(a).unwrap().splitting();
            assert!((s.re - 2.0 * (1.0 - a * a).sqrt()).abs() <= 1e-12 && s.im == 0.0);
        }
    }

    fn spec_strategy() -> impl Strategy<Value = HamiltonianSpec> {
        (any::<bool>(), 0.0..3.0f64).prop_map(|(pt, nh)| {
            HamiltonianSpec::new(if pt { SymmetryKind::Pt } else { SymmetryKind::Apt }, nh).unwrap()
        })
    }

    proptest! {
        #[test]
        fn semigroup(spec in spec_strategy(), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
            let lhs = spec.propagator(t1 + t2);
            let rhs = spec.propagator(t1) * spec.propagator(t2);
            // relative to the factors: the broken branch grows like e^{κ|t|}
            let scale = (spec.propagator(t1).frobenius_norm() * spec.propagator(t2).frobenius_norm()).max(1.0);
            prop_assert!((lhs - rhs).frobenius_norm() <= 1e-10 * scale);
        }

        #[test]
        fn unit_determinant(spec in spec_strategy(), t in -10.0..10.0f64) {
            let u = spec.propagator(t);
            let scale = u.frobenius_norm().powi(2).max(1.0);
            prop_assert!((u.det() - C64::new(1.0, 0.0)).norm() <= 1e-10 * scale);
        }

        #[test]
        fn hermitian_limit_is_unitary(t in -50.0..50.0f64) {
            let u = HamiltonianSpec::pt(0.0).unwrap().propagator(t);
            prop_assert!((u.adjoint() * u).approx_eq(&ComplexMat2::identity(), 1e-12));
        }

        #[test]
        fn continuous_across_exceptional_point(pt in any::<bool>(), t in 0.0..5.0f64, above in any::<bool>()) {
            let kind = if pt { SymmetryKind::Pt } else { SymmetryKind::Apt };
            let near = HamiltonianSpec::new(kind, if above { 1.0 + 1e-6 } else { 1.0 - 1e-6 }).unwrap();
            let at = HamiltonianSpec::new(kind, 1.0).unwrap();
            prop_assert!(near.propagator(t).approx_eq(&at.propagator(t), 1e-4));
        }

        #[test]
        fn anti_periodic_on_trig_branch(spec in spec_strategy(), t in -5.0..5.0f64) {
            let form = spec.propagator_form();
            prop_assume!(form.branch == Branch::Trig && form.omega2 > 1e-2);
            let period = form.period().unwrap();
            let shifted = spec.propagator(t + period);
            prop_assert!(shifted.approx_eq(&(-spec.propagator(t)), 1e-10 * (1.0 / form.omega2).max(1.0)));
        }
    }
}
