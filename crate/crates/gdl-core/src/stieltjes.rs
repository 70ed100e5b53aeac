//! Stieltjes constants and real-axis zeta derivatives by Euler-Maclaurin
//! summation in double-double precision.
//!
//! For f(x) = (ln x)^k / x the constants are
//!
//! ```text
//!   gamma_k = sum_{j<=N} f(j) - (ln N)^{k+1}/(k+1) - f(N)/2
//!             - sum_{i=1}^{m} B_{2i}/(2i)! f^{(2i-1)}(N)
//! ```
//!
//! with the derivative polynomials tracked exactly as polynomials in
//! ln x over x^m. With N = 2000 and m = 12 the truncation error is below
//! 1e-37 for k <= 16 (checked against independent references), so the
//! returned values are limited only by double-double rounding (~1e-29).

use crate::dd::{self, Dd};
use crate::error::{Error, Result};

/// Bernoulli numbers B_2..B_24 as exact rationals.
pub(crate) const BERNOULLI: [(i64, i64); 12] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
];

pub(crate) fn bernoulli_dd(i: usize) -> Dd {
    let (n, d) = BERNOULLI[i - 1];
    Dd::from_i64(n) / Dd::from_i64(d)
}

/// Public cap from the operation contract; internal callers may go higher
/// through `stieltjes_table`.
pub const STIELTJES_K_CAP: usize = 4;

/// gamma_0..gamma_k_max with absolute error <= 1e-25 (k_max <= 4).
pub fn stieltjes_constants(k_max: usize) -> Result<Vec<Dd>> {
    if k_max > STIELTJES_K_CAP {
        return Err(Error::Domain(format!(
            "k_max = {k_max} exceeds the supported cap {STIELTJES_K_CAP}"
        )));
    }
    Ok(stieltjes_table(k_max))
}

/// Internal table, valid for k_max <= ~20.
pub(crate) fn stieltjes_table(k_max: usize) -> Vec<Dd> {
    const N: usize = 2000;
    const M_TERMS: usize = 12;
    // ln j for j = 1..N once
    let logs: Vec<Dd> = (0..=N)
        .map(|j| if j == 0 { dd::ZERO } else { Dd::from_u64(j as u64).ln() })
        .collect();
    let ln_n = logs[N];
    let n_dd = Dd::from_u64(N as u64);
    (0..=k_max)
        .map(|k| {
            // sum_{j=1}^{N} (ln j)^k / j, ascending j (terms shrink)
            let mut sum = dd::ZERO;
            for j in 1..=N {
                sum = sum + logs[j].powi(k as i32) / Dd::from_u64(j as u64);
            }
            sum = sum - ln_n.powi(k as i32 + 1).div_f64((k + 1) as f64);
            sum = sum - ln_n.powi(k as i32) / n_dd.mul_f64(2.0);
            // derivative polynomial of (ln x)^k / x, advanced to odd orders
            let mut poly = LogPoly::monomial(k);
            for i in 1..=M_TERMS {
                while poly.order < 2 * i - 1 {
                    poly.differentiate();
                }
                let val = poly.eval(ln_n, n_dd);
                sum = sum - bernoulli_dd(i) / factorial_dd(2 * i) * val;
            }
            sum
        })
        .collect()
}

/// sum_i c_i (ln x)^i / x^m, plus its derivative order bookkeeping.
struct LogPoly {
    coeffs: Vec<Dd>,
    m: i64,
    order: usize,
}

impl LogPoly {
    fn monomial(k: usize) -> Self {
        let mut coeffs = vec![dd::ZERO; k + 1];
        coeffs[k] = dd::ONE;
        LogPoly { coeffs, m: 1, order: 0 }
    }

    /// d/dx [ sum c_i L^i / x^m ] = sum (i c_i L^{i-1} - m c_i L^i) / x^{m+1}
    fn differentiate(&mut self) {
        let mut next = vec![dd::ZERO; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i >= 1 {
                next[i - 1] = next[i - 1] + c.mul_f64(i as f64);
            }
            next[i] = next[i] - c.mul_f64(self.m as f64);
        }
        self.coeffs = next;
        self.m += 1;
        self.order += 1;
    }

    fn eval(&self, ln_x: Dd, x: Dd) -> Dd {
        let mut acc = dd::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * ln_x + c;
        }
        acc / x.powi(self.m as i32)
    }
}

pub(crate) fn factorial_dd(n: usize) -> Dd {
    let mut acc = dd::ONE;
    for i in 2..=n {
        acc = acc.mul_f64(i as f64);
    }
    acc
}

/// Public cap on the derivative order of `zeta_real_derivs`.
pub const ZETA_DERIV_CAP: usize = 3;

/// [zeta(sigma), zeta'(sigma), ..., zeta^{(k_max)}(sigma)] for real
/// sigma >= 1.5, absolute error <= 1e-25.
pub fn zeta_real_derivs(sigma: f64, k_max: usize) -> Result<Vec<Dd>> {
    if !(sigma >= 1.5) {
        return Err(Error::Domain(format!("sigma = {sigma} must be >= 1.5")));
    }
    if k_max > ZETA_DERIV_CAP {
        return Err(Error::Domain(format!(
            "k_max = {k_max} exceeds the supported cap {ZETA_DERIV_CAP}"
        )));
    }
    Ok(zeta_real_derivs_table(Dd::from_f64(sigma), k_max))
}

/// Euler-Maclaurin with term-by-term s-derivatives; internal, any k_max.
pub(crate) fn zeta_real_derivs_table(sigma: Dd, k_max: usize) -> Vec<Dd> {
    const N: usize = 240;
    const M_TERMS: usize = 12;
    let n_dd = Dd::from_u64(N as u64);
    let ln_n = n_dd.ln();
    let mut out = vec![dd::ZERO; k_max + 1];

    // sum_{j<N} j^{-s}: r-th derivative is (-ln j)^r j^{-sigma}
    for j in 1..N {
        let lj = Dd::from_u64(j as u64).ln();
        let base = (-(sigma * lj)).exp();
        let mut pow = dd::ONE;
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = *slot + base * pow;
            let _ = r;
            pow = pow * (-lj);
        }
    }

    // N^{1-s}/(s-1): d^r = sum_c C(r,c) (-lnN)^c N^{1-s} (-1)^{r-c}(r-c)!/(s-1)^{r-c+1}
    let n_pow = ((dd::ONE - sigma) * ln_n).exp();
    let s1 = sigma - dd::ONE;
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = dd::ZERO;
        for c in 0..=r {
            let mut term = (-ln_n).powi(c as i32) * n_pow;
            term = term * factorial_dd(r - c).mul_f64(binom_f64(r, c));
            if (r - c) % 2 == 1 {
                term = -term;
            }
            acc = acc + term / s1.powi((r - c) as i32 + 1);
        }
        *slot = *slot + acc;
    }

    // N^{-s}/2
    let n_neg = (-(sigma * ln_n)).exp();
    for (r, slot) in out.iter_mut().enumerate() {
        *slot = *slot + (-ln_n).powi(r as i32) * n_neg.mul_f64(0.5);
    }

    // B_{2i}/(2i)! * (s)_{2i-1} * N^{1-s-2i}
    for i in 1..=M_TERMS {
        // pochhammer polynomial s(s+1)...(s+2i-2) as coefficients in s
        let mut poly = vec![dd::ZERO, dd::ONE]; // s
        for l in 1..(2 * i - 1) {
            // multiply by (s + l)
            let mut next = vec![dd::ZERO; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] = next[d + 1] + c;
                next[d] = next[d] + c.mul_f64(l as f64);
            }
            poly = next;
        }
        let scale = bernoulli_dd(i) / factorial_dd(2 * i);
        let n_tail = ((dd::ONE - sigma).add_f64(-(2 * i as i32) as f64) * ln_n).exp();
        // d^r of P(s) N^{1-s-2i} = sum_c C(r,c) P^{(c)}(sigma) (-lnN)^{r-c} N^{1-sigma-2i}
        let mut derivs = Vec::with_capacity(k_max + 1);
        let mut cur = poly.clone();
        for _ in 0..=k_max {
            derivs.push(eval_poly(&cur, sigma));
            cur = diff_poly(&cur);
        }
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = dd::ZERO;
            for c in 0..=r {
                acc = acc
                    + derivs[c]
                        .mul_f64(binom_f64(r, c))
                        * (-ln_n).powi((r - c) as i32);
            }
            *slot = *slot + scale * acc * n_tail;
        }
    }
    out
}

fn eval_poly(coeffs: &[Dd], x: Dd) -> Dd {
    let mut acc = dd::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn diff_poly(coeffs: &[Dd]) -> Vec<Dd> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c.mul_f64(i as f64))
        .collect()
}

fn binom_f64(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
