//! Complex arithmetic over double-doubles. Used by the extended-precision
//! residue/contour machinery and by reference oracles in tests.

use crate::dd::{self, Dd};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Copy, Clone, Debug, Default)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

pub const ZERO: Cdd = Cdd { re: dd::ZERO, im: dd::ZERO };
pub const ONE: Cdd = Cdd { re: dd::ONE, im: dd::ZERO };

impl Cdd {
    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Cdd { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    pub fn from_real(re: Dd) -> Self {
        Cdd { re, im: dd::ZERO }
    }

    pub fn conj(self) -> Self {
        Cdd { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, k: Dd) -> Self {
        Cdd { re: self.re * k, im: self.im * k }
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cdd { re: m * c, im: m * s }
    }

    /// x^z for positive real x.
    pub fn pow_real_base(x: Dd, z: Cdd) -> Self {
        (z.scale(x.ln())).exp()
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return ONE;
        }
        let mut base = if n < 0 { ONE / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn to_c64(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, b: Cdd) -> Cdd {
        Cdd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, b: Cdd) -> Cdd {
        let d = b.norm_sqr();
        let n = self * b.conj();
        Cdd { re: n.re / d, im: n.im / d }
    }
}
