//! Truncated Laurent series around w = 0 with double-double coefficients.
//! Arithmetic tracks the provable truncation order: a product is only as
//! long as its shortest contributing tail, and an operation whose result
//! would carry no representable coefficient is an error.

use crate::dd::{self, Dd};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TruncatedLaurent {
    low: i32,
    /// coeffs[i] multiplies w^{low + i}; truncation order (exclusive) is
    /// low + coeffs.len().
    coeffs: Vec<Dd>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Mul,
}

impl TruncatedLaurent {
    pub fn new(low: i32, coeffs: Vec<Dd>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InsufficientOrder("empty coefficient list".into()));
        }
        Ok(TruncatedLaurent { low, coeffs })
    }

    /// Analytic series from Taylor coefficients (low = 0).
    pub fn from_taylor(coeffs: Vec<Dd>) -> Result<Self> {
        Self::new(0, coeffs)
    }

    pub fn constant(c: Dd, order: i32) -> Result<Self> {
        if order <= 0 {
            return Err(Error::InsufficientOrder("constant needs order > 0".into()));
        }
        let mut coeffs = vec![dd::ZERO; order as usize];
        coeffs[0] = c;
        Ok(TruncatedLaurent { low: 0, coeffs })
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    /// Exclusive truncation exponent.
    pub fn order(&self) -> i32 {
        self.low + self.coeffs.len() as i32
    }

    /// Coefficient of w^k; zero outside the carried window.
    pub fn coeff(&self, k: i32) -> Dd {
        if k < self.low || k >= self.order() {
            dd::ZERO
        } else {
            self.coeffs[(k - self.low) as usize]
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn scale(&self, k: Dd) -> Self {
        TruncatedLaurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    pub fn add(&self, b: &Self) -> Result<Self> {
        let low = self.low.min(b.low);
        let order = self.order().min(b.order());
        if order <= low {
            return Err(Error::InsufficientOrder(format!(
                "sum truncates to nothing: order {order} <= low {low}"
            )));
        }
        let coeffs = (low..order).map(|k| self.coeff(k) + b.coeff(k)).collect();
        Ok(TruncatedLaurent { low, coeffs })
    }

    pub fn mul(&self, b: &Self) -> Result<Self> {
        let low = self.low + b.low;
        // each factor's unknown tail limits the product's provable order
        let order = (self.order() + b.low).min(b.order() + self.low);
        if order <= low {
            return Err(Error::InsufficientOrder(format!(
                "product truncates to nothing: order {order} <= low {low}"
            )));
        }
        let mut coeffs = vec![dd::ZERO; (order - low) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &c) in b.coeffs.iter().enumerate() {
                let k = self.low + i as i32 + b.low + j as i32;
                if k >= low && k < order {
                    let idx = (k - low) as usize;
                    coeffs[idx] = coeffs[idx] + a * c;
                }
            }
        }
        Ok(TruncatedLaurent { low, coeffs })
    }

    /// Drop coefficients at or above `order`.
    pub fn truncate(&self, order: i32) -> Result<Self> {
        if order <= self.low {
            return Err(Error::InsufficientOrder(format!(
                "cannot truncate to order {order} with low {}",
                self.low
            )));
        }
        let keep = (order.min(self.order()) - self.low) as usize;
        TruncatedLaurent::new(self.low, self.coeffs[..keep].to_vec())
    }

    /// Reciprocal of an analytic series with nonzero constant term,
    /// carried to the same order.
    pub fn invert(&self) -> Result<Self> {
        if self.low != 0 || self.coeffs[0].to_f64() == 0.0 {
            return Err(Error::Domain(
                "inverse requires an analytic series with nonzero constant term".into(),
            ));
        }
        let n = self.coeffs.len();
        let mut inv = vec![dd::ZERO; n];
        inv[0] = self.coeffs[0].recip();
        for k in 1..n {
            let mut acc = dd::ZERO;
            for i in 1..=k {
                acc = acc + self.coeffs[i] * inv[k - i];
            }
            inv[k] = -(acc * inv[0]);
        }
        TruncatedLaurent::new(0, inv)
    }

    /// Integer power via square-and-multiply; negative powers invert first.
    pub fn powi(&self, n: i32) -> Result<Self> {
        let order = self.order();
        if n == 0 {
            return TruncatedLaurent::constant(dd::ONE, order);
        }
        let mut base = if n < 0 { self.invert()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc: Option<TruncatedLaurent> = None;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.unwrap())
    }
}

/// Spec-shaped entry point over the two ring operations.
pub fn laurent_arithmetic(
    a: &TruncatedLaurent,
    b: &TruncatedLaurent,
    op: LaurentOp,
) -> Result<TruncatedLaurent> {
    match op {
        LaurentOp::Add => a.add(b),
        LaurentOp::Mul => a.mul(b),
    }
}

/// Taylor series of exp(l * w) through w^{order-1}.
pub fn exp_linear(l: Dd, order: i32) -> Result<TruncatedLaurent> {
    if order <= 0 {
        return Err(Error::InsufficientOrder("exp series needs order > 0".into()));
    }
    let mut coeffs = Vec::with_capacity(order as usize);
    let mut term = dd::ONE;
    coeffs.push(term);
    for j in 1..order {
        term = term * l;
        term = term.div_f64(j as f64);
        coeffs.push(term);
    }
    TruncatedLaurent::new(0, coeffs)
}

/// The series 1/(1 + w) through w^{order-1}.
pub fn geometric_alternating(order: i32) -> Result<TruncatedLaurent> {
    if order <= 0 {
        return Err(Error::InsufficientOrder("series needs order > 0".into()));
    }
    let coeffs = (0..order)
        .map(|j| if j % 2 == 0 { dd::ONE } else { -dd::ONE })
        .collect();
    TruncatedLaurent::new(0, coeffs)
}
