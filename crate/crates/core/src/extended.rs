//! Double-double complex 2×2 arithmetic.
//!
//! Broken-regime propagators grow like `e^{κ|t|}`. Carrying about 32 digits
//! keeps their entries accurate to the last bit after rounding back to `f64`.

use std::ops::{Add, Mul, Sub};

use twofloat::TwoFloat;

use crate::qmat::{ComplexMat2, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dc {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl Dc {
    pub const ZERO: Dc = Dc {
        re: TwoFloat::from_f64(0.0),
        im: TwoFloat::from_f64(0.0),
    };

    pub fn new(re: TwoFloat, im: TwoFloat) -> Self {
        Self { re, im }
    }

    pub fn from_c64(z: C64) -> Self {
        Self::new(z.re.into(), z.im.into())
    }

    pub fn scale(self, s: TwoFloat) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    pub fn round(self) -> C64 {
        C64::new(self.re.hi(), self.im.hi())
    }
}

impl Add for Dc {
    type Output = Dc;
    fn add(self, o: Dc) -> Dc {
        Dc::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Dc {
    type Output = Dc;
    fn sub(self, o: Dc) -> Dc {
        Dc::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Dc {
    type Output = Dc;
    fn mul(self, o: Dc) -> Dc {
        Dc::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

/// Row-major `[a11, a12, a21, a22]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DdMat2(pub [Dc; 4]);

impl DdMat2 {
    pub fn identity() -> Self {
        let one = Dc::new(1.0.into(), 0.0.into());
        DdMat2([one, Dc::ZERO, Dc::ZERO, one])
    }

    pub fn from_mat(m: &ComplexMat2) -> Self {
        DdMat2([m.a11, m.a12, m.a21, m.a22].map(Dc::from_c64))
    }

    pub fn scale(self, s: TwoFloat) -> Self {
        DdMat2(self.0.map(|z| z.scale(s)))
    }

    pub fn round(self) -> ComplexMat2 {
        let [a, b, c, d] = self.0.map(Dc::round);
        ComplexMat2::new(a, b, c, d)
    }
}

impl Add for DdMat2 {
    type Output = DdMat2;
    fn add(self, o: DdMat2) -> DdMat2 {
        let (a, b) = (self.0, o.0);
        DdMat2([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }
}

impl Mul for DdMat2 {
    type Output = DdMat2;
    fn mul(self, o: DdMat2) -> DdMat2 {
        let (a, b) = (self.0, o.0);
        DdMat2([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }
}
