//! Closed-form 2×2 complex linear algebra.
//!
//! Everything in the crate (Hamiltonians, propagators, density operators,
//! POVM elements) is a [`ComplexMat2`]. Hermitian eigendecompositions are
//! computed from the characteristic polynomial directly, which keeps the
//! results exact to a few ulps and bit-for-bit reproducible.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A column 2-vector of complex amplitudes.
pub type Vec2 = [C64; 2];

/// Largest anti-Hermitian defect accepted by [`ComplexMat2::herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below `-PSD_TOL` reject a matrix as not positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// Components smaller than this (relative to the vector norm) are treated as
/// zero when fixing eigenvector phases.
const PHASE_ZERO: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMat2 {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

impl fmt::Debug for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

impl ComplexMat2 {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Self::from_real(d1, 0.0, 0.0, d2)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn sigma_y() -> Self {
        Self::new(ZERO, -I, I, ZERO)
    }

    pub fn sigma_z() -> Self {
        Self::diag(1.0, -1.0)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &Vec2, v: &Vec2) -> Self {
        Self::new(
            u[0] * v[0].conj(),
            u[0] * v[1].conj(),
            u[1] * v[0].conj(),
            u[1] * v[1].conj(),
        )
    }

    /// `(I + r·σ)/2` scaled by `weight`; the Bloch-vector form of a qubit operator.
    pub fn from_bloch(weight: f64, r: [f64; 3]) -> Self {
        let h = 0.5 * weight;
        Self::new(
            C64::new(h * (1.0 + r[2]), 0.0),
            C64::new(h * r[0], -h * r[1]),
            C64::new(h * r[0], h * r[1]),
            C64::new(h * (1.0 - r[2]), 0.0),
        )
    }

    /// Inverse of [`Self::from_bloch`] for a Hermitian matrix: `(Tr M, r)`.
    pub fn to_bloch(&self) -> (f64, [f64; 3]) {
        let tr = (self.a11 + self.a22).re;
        if tr == 0.0 {
            return (0.0, [0.0; 3]);
        }
        let off = 0.5 * (self.a21 + self.a12.conj());
        let r = [
            2.0 * off.re / tr,
            2.0 * off.im / tr,
            (self.a11.re - self.a22.re) / tr,
        ];
        (tr, r)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a12.conj(),
            self.a21.conj(),
            self.a22.conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(C64::new(0.5, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).frobenius_norm() <= tol
    }

    /// Eigenvalues of the Hermitian part, descending.
    pub fn herm_eigenvalues(&self) -> [f64; 2] {
        let (a, d, b) = self.hermitian_entries();
        herm_eigenvalues(a, d, b)
    }

    /// Closed-form eigendecomposition of a Hermitian matrix.
    ///
    /// Eigenvalues are returned in descending order; each eigenvector has its
    /// first non-negligible component real and positive.
    pub fn herm_eig(&self) -> Result<HermEig2> {
        let defect = self.hermiticity_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::NonHermitianInput { defect });
        }
        let (a, d, b) = self.hermitian_entries();
        let eigenvalues = herm_eigenvalues(a, d, b);
        let half_gap = 0.5 * (a - d);
        let v1 = if b == ZERO {
            if half_gap >= 0.0 {
                [ONE, ZERO]
            } else {
                [ZERO, ONE]
            }
        } else {
            // Both (b, λ₁ − a) and (λ₁ − d, b*) span the top eigenspace; the
            // second is the larger one whenever a ≥ d.
            let r = (half_gap * half_gap + b.norm_sqr()).sqrt();
            let v = if half_gap >= 0.0 {
                [C64::new(half_gap + r, 0.0), b.conj()]
            } else {
                [b, C64::new(r - half_gap, 0.0)]
            };
            normalize(v)
        };
        let v2 = [-v1[1].conj(), v1[0].conj()];
        Ok(HermEig2 {
            eigenvalues,
            eigenvectors: [fix_phase(v1), fix_phase(v2)],
        })
    }

    /// `M^{-1/2}` for Hermitian positive semidefinite `M`, pseudo-inverting
    /// eigenvalues at or below `eps` to zero.
    pub fn inv_sqrt_psd(&self, eps: f64) -> Result<Self> {
        self.psd_function(|l| if l > eps { 1.0 / l.sqrt() } else { 0.0 })
    }

    /// Principal square root of a Hermitian positive semidefinite matrix.
    pub fn sqrt_psd(&self) -> Result<Self> {
        self.psd_function(|l| l.max(0.0).sqrt())
    }

    /// Orthogonal projector onto the eigenvectors with eigenvalue above `eps`.
    pub fn support_projector(&self, eps: f64) -> Result<Self> {
        self.psd_function(|l| if l > eps { 1.0 } else { 0.0 })
    }

    fn psd_function(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let eig = self.herm_eig()?;
        let min_eigenvalue = eig.eigenvalues[1];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NegativeEigenvalue { min_eigenvalue });
        }
        Ok(eig.reconstruct_with(f))
    }

    fn hermitian_entries(&self) -> (f64, f64, C64) {
        (
            self.a11.re,
            self.a22.re,
            0.5 * (self.a12 + self.a21.conj()),
        )
    }
}

fn herm_eigenvalues(a: f64, d: f64, b: C64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = half_gap.hypot(b.norm());
    // Recover the smaller-magnitude root from the determinant to avoid
    // cancellation when the matrix is close to rank one.
    let det = a * d - b.norm_sqr();
    if mean >= 0.0 {
        let top = mean + r;
        let bottom = if top != 0.0 { det / top } else { mean - r };
        [top, bottom.min(top)]
    } else {
        let bottom = mean - r;
        let top = if bottom != 0.0 { det / bottom } else { mean + r };
        [top.max(bottom), bottom]
    }
}

fn normalize(v: Vec2) -> Vec2 {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn fix_phase(v: Vec2) -> Vec2 {
    let pivot = if v[0].norm() > PHASE_ZERO { v[0] } else { v[1] };
    let phase = pivot.conj() / pivot.norm();
    [v[0] * phase, v[1] * phase]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermEig2 {
    /// Descending.
    pub eigenvalues: [f64; 2],
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: [Vec2; 2],
}

impl HermEig2 {
    pub fn reconstruct(&self) -> ComplexMat2 {
        self.reconstruct_with(|l| l)
    }

    /// `Σ f(λₖ) |vₖ⟩⟨vₖ|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMat2 {
        let mut out = ComplexMat2::zero();
        for (&l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = f(l);
            if w != 0.0 {
                out += ComplexMat2::outer(v, v).scale(w.into());
            }
        }
        out
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl AddAssign for ComplexMat2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<C64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s.into())
    }
}

impl std::iter::Sum for ComplexMat2 {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::zero(), |acc, m| acc + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn products_of_identity_and_paulis() {
        let id = ComplexMat2::identity();
        assert_eq!(id * id, id);
        assert_eq!(ComplexMat2::sigma_x() * ComplexMat2::sigma_x(), id);
        assert!((ComplexMat2::sigma_y() * ComplexMat2::sigma_y()).approx_eq(&id, 0.0));
    }

    #[test]
    fn pt_family_squares_to_scalar() {
        let a = 0.5;
        let h = ComplexMat2::sigma_x() + ComplexMat2::sigma_z() * c(0.0, a);
        let sq = h * h;
        assert!(sq.approx_eq(&(ComplexMat2::identity() * 0.75), 1e-15), "{sq:?}");
    }

    #[test]
    fn eig_of_sigma_z() {
        let eig = ComplexMat2::sigma_z().herm_eig().unwrap();
        assert_eq!(eig.eigenvalues, [1.0, -1.0]);
        assert_eq!(eig.eigenvectors[0], [ONE, ZERO]);
        assert_eq!(eig.eigenvectors[1], [ZERO, ONE]);
    }

    #[test]
    fn eig_of_sigma_x() {
        let eig = ComplexMat2::sigma_x().herm_eig().unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = eig.eigenvectors[0];
        assert!((v[0] - c(s, 0.0)).norm() < 1e-15 && (v[1] - c(s, 0.0)).norm() < 1e-15);
        // phase convention: first component real positive
        let w = eig.eigenvectors[1];
        assert!(w[0].im == 0.0 && w[0].re > 0.0);
    }

    #[test]
    fn eig_of_diagonal() {
        let eig = ComplexMat2::diag(2.0 / 3.0, 1.0 / 3.0).herm_eig().unwrap();
        assert!((eig.eigenvalues[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0 / 3.0).abs() < 1e-15);
        let swapped = ComplexMat2::diag(0.25, 0.75).herm_eig().unwrap();
        assert_eq!(swapped.eigenvectors[0], [ZERO, ONE]);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMat2::from_real(0.0, 1.0, 0.0, 0.0);
        assert!(matches!(m.herm_eig(), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn inv_sqrt_examples() {
        let id = ComplexMat2::identity();
        assert!(id.inv_sqrt_psd(1e-12).unwrap().approx_eq(&id, 1e-15));
        let m = ComplexMat2::diag(4.0, 1.0).inv_sqrt_psd(1e-12).unwrap();
        assert!(m.approx_eq(&ComplexMat2::diag(0.5, 1.0), 1e-15));
        let m = ComplexMat2::diag(2.0 / 3.0, 1.0 / 3.0).inv_sqrt_psd(1e-12).unwrap();
        assert!(m.approx_eq(&ComplexMat2::diag(1.5f64.sqrt(), 3f64.sqrt()), 1e-14));
    }

    #[test]
    fn inv_sqrt_pseudo_inverts_kernel() {
        let m = ComplexMat2::diag(0.0, 0.25).inv_sqrt_psd(1e-12).unwrap();
        assert!(m.approx_eq(&ComplexMat2::diag(0.0, 2.0), 1e-15));
    }

    #[test]
    fn inv_sqrt_rejects_negative() {
        let err = ComplexMat2::diag(1.0, -1e-6).inv_sqrt_psd(1e-12).unwrap_err();
        assert!(matches!(err, Error::NegativeEigenvalue { .. }));
        // tiny negative rounding noise is tolerated
        assert!(ComplexMat2::diag(1.0, -1e-14).inv_sqrt_psd(1e-12).is_ok());
    }

    #[test]
    fn near_rank_one_small_eigenvalue_is_accurate() {
        let eps = 1e-9;
        let v = [c(1.0, 0.0), c(eps, 0.0)];
        let w = [c(1.0, 0.0), c(-eps, 0.0)];
        let m = (ComplexMat2::outer(&v, &v) + ComplexMat2::outer(&w, &w)) * 0.5;
        let [_, small] = m.herm_eigenvalues();
        // exact small eigenvalue is eps² / (1 + eps²) up to O(eps⁴)
        assert!((small - eps * eps).abs() < 1e-24, "{small:e}");
    }

    #[test]
    fn bloch_round_trip() {
        let m = ComplexMat2::from_bloch(0.6, [0.3, -0.4, 0.5]);
        let (w, r) = m.to_bloch();
        assert!((w - 0.6).abs() < 1e-15);
        for (x, y) in r.iter().zip([0.3, -0.4, 0.5]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    fn unit_disk() -> impl Strategy<Value = C64> {
        (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, phi)| C64::from_polar(r, phi))
    }

    fn any_mat() -> impl Strategy<Value = ComplexMat2> {
        (unit_disk(), unit_disk(), unit_disk(), unit_disk())
            .prop_map(|(a, b, c, d)| ComplexMat2::new(a, b, c, d))
    }

    fn hermitian(bound: f64) -> impl Strategy<Value = ComplexMat2> {
        (-bound..bound, -bound..bound, -bound..bound, -bound..bound)
            .prop_map(|(a, d, x, y)| ComplexMat2::new(c(a, 0.0), c(x, -y), c(x, y), c(d, 0.0)))
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in any_mat(), b in any_mat()) {
            prop_assert!(((a * b).det() - a.det() * b.det()).norm() <= 1e-12);
        }

        #[test]
        fn trace_is_cyclic(a in any_mat(), b in any_mat()) {
            prop_assert!(((a * b).trace() - (b * a).trace()).norm() <= 1e-12);
        }

        #[test]
        fn adjoint_is_involution(a in any_mat()) {
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn eig_reconstructs(m in hermitian(3.5)) {
            let eig = m.herm_eig().unwrap();
            prop_assert!(eig.eigenvalues[0] >= eig.eigenvalues[1]);
            prop_assert!(eig.reconstruct().approx_eq(&m, 1e-12));
            let [u, v] = eig.eigenvectors;
            let overlap = u[0].conj() * v[0] + u[1].conj() * v[1];
            prop_assert!(overlap.norm() <= 1e-12);
            for w in [u, v] {
                prop_assert!(((w[0].norm_sqr() + w[1].norm_sqr()) - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn inv_sqrt_sandwich_is_support_projector(
            l1 in 0.0..2.0f64,
            rank_one in any::<bool>(),
            theta in 0.0..std::f64::consts::PI,
            phi in 0.0..std::f64::consts::TAU,
            l2 in 1e-3..2.0f64,
        ) {
            let u = [c(theta.cos(), 0.0), C64::from_polar(theta.sin(), phi)];
            let w = [-u[1].conj(), u[0].conj()];
            let low = if rank_one { 0.0 } else { l1.max(1e-3) };
            let m = ComplexMat2::outer(&u, &u) * l2 + ComplexMat2::outer(&w, &w) * low;
            let r = m.inv_sqrt_psd(1e-12).unwrap();
            let proj = m.support_projector(1e-12).unwrap();
            prop_assert!((r * m * r).approx_eq(&proj, 1e-10));
        }
    }
}
