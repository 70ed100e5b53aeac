//! The triple-pole residue main term: x * p(log x) with p quadratic.
//!
//! Around w = s - 1 the generating function factors into
//! `zeta(1+w)^2 * zeta(1+2w) * zeta(2+2w)^M * H(1+w)`; the first two carry
//! the Stieltjes expansions, the third is analytic (real zeta derivatives
//! at 2), and H contributes the finitely many explicit local factors. The
//! residue of F(s) x^s / s at s = 1 is the w^{-1} coefficient of
//! F(1+w) e^{wL} / (1+w) with L = log x.

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::laurent::{exp_linear, geometric_alternating, TruncatedLaurent};
use crate::local::FunctionSpec;
use crate::stieltjes::{factorial_dd, stieltjes_table, zeta_real_derivs_table};
use num::ToPrimitive;

/// Largest supported truncation exponent of `expand_F_near_1` (enough for
/// the residue plus a few guard coefficients).
pub const MAX_EXPANSION_ORDER: i32 = 4;

/// Laurent series of zeta(1 + scale*w) through w^{order-1}:
/// 1/(scale w) + sum_k (-1)^k gamma_k scale^k w^k / k!.
pub fn zeta_near_one(scale: i32, order: i32) -> Result<TruncatedLaurent> {
    if order < 0 {
        return Err(Error::InsufficientOrder(format!("order {order} < 0")));
    }
    let gammas = stieltjes_table(order as usize);
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    coeffs.push(Dd::from_f64(1.0 / scale as f64));
    let s = Dd::from_f64(scale as f64);
    for (k, &g) in gammas.iter().enumerate().take(order as usize) {
        let c = g * s.powi(k as i32) / factorial_dd(k);
        coeffs.push(if k % 2 == 0 { c } else { -c });
    }
    TruncatedLaurent::new(-1, coeffs)
}

/// Taylor series of zeta(2 + 2w)^m through w^{order-1}.
fn zeta_at_two_pow(m: i32, order: i32) -> Result<TruncatedLaurent> {
    let k_max = (order - 1).max(0) as usize;
    let derivs = zeta_real_derivs_table(Dd::from_f64(2.0), k_max);
    let mut coeffs = Vec::with_capacity(k_max + 1);
    let mut two_pow = dd::ONE;
    for (r, &z) in derivs.iter().enumerate() {
        coeffs.push(z * two_pow / factorial_dd(r));
        two_pow = two_pow.mul_f64(2.0);
    }
    TruncatedLaurent::new(0, coeffs)?.powi(m)
}

/// Taylor series of H(1 + w) from its finite local presentation:
/// per prime, h_p(p^{-1} e^{-w ln p}) expanded in w, then multiplied out.
fn h_near_one(spec: &FunctionSpec, order: i32) -> Result<TruncatedLaurent> {
    let mut acc = TruncatedLaurent::constant(dd::ONE, order.max(1))?;
    for (&p, series) in spec.h_local() {
        let ln_p = Dd::from_u64(p).ln();
        let p_dd = Dd::from_u64(p);
        let mut coeffs = vec![dd::ZERO; order.max(1) as usize];
        for (j, cj) in series.iter().enumerate() {
            let num = cj.numer().to_f64().ok_or(Error::Overflow("h coefficient"))?;
            let den = cj.denom().to_f64().ok_or(Error::Overflow("h coefficient"))?;
            if num == 0.0 {
                continue;
            }
            let c = Dd::from_f64(num) / Dd::from_f64(den);
            let base = c / p_dd.powi(j as i32);
            // e^{-j w ln p} Taylor factors
            let mut term = base;
            coeffs[0] = coeffs[0] + term;
            for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
                term = term * (-ln_p).mul_f64(j as f64);
                term = term.div_f64(k as f64);
                *slot = *slot + term;
            }
        }
        let factor = TruncatedLaurent::new(0, coeffs)?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Laurent expansion of F(1+w) with lowExp = -3, carried through
/// w^{order-1}. Leading coefficient is zeta(2)^M H(1) / 2.
pub fn expand_f_near_1(spec: &FunctionSpec, order: i32) -> Result<TruncatedLaurent> {
    if order <= -3 {
        return Err(Error::InsufficientOrder(format!(
            "order {order} leaves no coefficient above the triple pole"
        )));
    }
    if order > MAX_EXPANSION_ORDER {
        return Err(Error::Domain(format!(
            "order {order} exceeds supported cap {MAX_EXPANSION_ORDER}"
        )));
    }
    let q = order + 3; // working truncation for each factor
    let z1 = zeta_near_one(1, q)?;
    let z2 = zeta_near_one(2, q)?;
    let zm = zeta_at_two_pow(spec.m(), q)?;
    let h = h_near_one(spec, q)?;
    let f = z1.mul(&z1)?.mul(&z2)?.mul(&zm)?.mul(&h)?;
    f.truncate(order)
}

/// The quadratic p(L) = c2 L^2 + c1 L + c0 with the spec it belongs to.
#[derive(Clone, Debug)]
pub struct MainTermPoly {
    pub c2: Dd,
    pub c1: Dd,
    pub c0: Dd,
    pub spec_hash: u64,
    pub m: i32,
}

/// Read the residue polynomial off the expansion: with
/// e^{wL}/(1+w) = 1 + (L-1) w + (L^2/2 - L + 1) w^2 + ...,
/// the w^{-1} coefficient of the product gives
/// c2 = a_{-3}/2, c1 = a_{-2} - a_{-3}, c0 = a_{-3} - a_{-2} + a_{-1}.
pub fn main_term_polynomial(spec: &FunctionSpec) -> Result<MainTermPoly> {
    let f = expand_f_near_1(spec, 0)?;
    let a3 = f.coeff(-3);
    let a2 = f.coeff(-2);
    let a1 = f.coeff(-1);
    Ok(MainTermPoly {
        c2: a3.mul_f64(0.5),
        c1: a2 - a3,
        c0: a3 - a2 + a1,
        spec_hash: spec.hash(),
        m: spec.m(),
    })
}

impl MainTermPoly {
    pub fn eval_at_log(&self, l: Dd) -> Dd {
        (self.c2 * l + self.c1) * l + self.c0
    }
}

/// x * p(log x) in double-double.
pub fn main_term_eval(poly: &MainTermPoly, x: f64) -> Result<Dd> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("main term needs x >= 1, got {x}")));
    }
    let xd = Dd::from_f64(x);
    Ok(xd * poly.eval_at_log(xd.ln()))
}

/// Integer-argument variant used by the scans (exact x conversion).
pub fn main_term_eval_u64(poly: &MainTermPoly, x: u64) -> Dd {
    let xd = Dd::from_u64(x);
    xd * poly.eval_at_log(xd.ln())
}

/// Generic-engine route to the residue at one numeric L: the w^{-1}
/// coefficient of F(1+w) * e^{wL} * 1/(1+w), all through series
/// arithmetic. Used to cross-check `main_term_polynomial`.
pub fn residue_coefficient_at(spec: &FunctionSpec, l: Dd) -> Result<Dd> {
    let f = expand_f_near_1(spec, 0)?;
    let order = 3; // e-series needs terms w^0..w^2 against the triple pole
    let e = exp_linear(l, order)?;
    let inv = geometric_alternating(order)?;
    let prod = f.mul(&e)?.mul(&inv)?;
    Ok(prod.coeff(-1))
}
