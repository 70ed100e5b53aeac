//! Riemann zeta in the strip -1 <= Re s <= 3, |Im s| <= 1e4, by
//! Euler-Maclaurin with N ~ 2|Im s| terms and Bernoulli corrections
//! through B12; log-Gamma by the Stirling series with argument shift; the
//! functional-equation factor chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s)
//! computed in log form so nothing overflows at large heights.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub const STRIP_RE_MIN: f64 = -1.0;
pub const STRIP_RE_MAX: f64 = 3.0;
pub const STRIP_T_MAX: f64 = 1.0e4;

const B2K_OVER_FACT: [f64; 6] = [
    // B_{2i}/(2i)! for i = 1..6
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// Euler-Maclaurin zeta with an explicit truncation point; exposed so the
/// convergence of the tail can be checked by doubling N.
pub fn zeta_complex_with_terms(s: Complex64, n: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        sum += to_power(j as f64, -s);
    }
    let nf = n as f64;
    let n_minus_s = to_power(nf, -s);
    sum += n_minus_s * nf / (s - 1.0);
    sum += n_minus_s * 0.5;
    // B_{2i}/(2i)! * s(s+1)...(s+2i-2) * N^{-s-2i+1}
    let mut poch = s;
    let mut n_pow = n_minus_s / nf; // N^{-s-1}
    let nf2 = nf * nf;
    for (i, &b) in B2K_OVER_FACT.iter().enumerate() {
        if i > 0 {
            let k = 2.0 * i as f64; // 2i-2 for the 1-based term index
            poch *= (s + (k - 1.0)) * (s + k);
            n_pow /= nf2;
        }
        sum += poch * n_pow * b;
    }
    sum
}

#[inline]
fn to_power(base: f64, z: Complex64) -> Complex64 {
    // base^z for base > 0
    let l = base.ln();
    Complex64::from_polar((z.re * l).exp(), z.im * l)
}

fn in_strip(s: Complex64) -> bool {
    (STRIP_RE_MIN..=STRIP_RE_MAX).contains(&s.re) && s.im.abs() <= STRIP_T_MAX
}

/// zeta(s) in the strip with absolute error <= 1e-10.
pub fn zeta_complex(s: Complex64) -> Result<Complex64> {
    if !in_strip(s) {
        return Err(Error::Domain(format!(
            "s = {s} outside the strip [{STRIP_RE_MIN}, {STRIP_RE_MAX}] x [-{STRIP_T_MAX}, {STRIP_T_MAX}]"
        )));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Domain("zeta has a pole at s = 1".into()));
    }
    let n = default_terms(s);
    Ok(zeta_complex_with_terms(s, n))
}

pub fn default_terms(s: Complex64) -> usize {
    (2.0 * s.im.abs()).ceil().max(20.0) as usize
}

const B_STIRLING: [f64; 8] = [
    // B_{2i} / ((2i)(2i-1)) for i = 1..8
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    7.0 / 1092.0,
    -3617.0 / 122400.0,
];

const LN_2PI_HALF: f64 = 0.9189385332046727; // ln(2 pi)/2

/// Principal log-Gamma by Stirling with an argument shift into |z| >= 12.
/// Absolute error <= 1e-10 for |z| >= 0.5 away from the poles.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Domain(format!("log-gamma pole at z = {z}")));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm_sqr() < 144.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut stirling = (w - 0.5) * w.ln() - w + LN_2PI_HALF;
    let winv2 = 1.0 / (w * w);
    let mut wpow = 1.0 / w;
    for &b in &B_STIRLING {
        stirling += wpow * b;
        wpow *= winv2;
    }
    Ok(stirling - shift)
}

/// log sin(z), overflow-safe for any |Im z| (branch only defined up to
/// 2 pi i, which every caller removes with exp).
fn log_sin(z: Complex64) -> Complex64 {
    const LN_2: f64 = std::f64::consts::LN_2;
    const PI_2: f64 = std::f64::consts::FRAC_PI_2;
    if z.im > 20.0 {
        let i_z = Complex64::new(-z.im, z.re);
        (-(i_z) + (-Complex64::new(-2.0 * z.im, 2.0 * z.re).exp() + 1.0).ln())
            + Complex64::new(-LN_2, PI_2)
    } else if z.im < -20.0 {
        let i_z = Complex64::new(-z.im, z.re);
        (i_z + (-Complex64::new(2.0 * z.im, -2.0 * z.re).exp() + 1.0).ln())
            + Complex64::new(-LN_2, -PI_2)
    } else {
        z.sin().ln()
    }
}

/// log chi(s) where zeta(s) = chi(s) zeta(1-s).
pub fn log_chi(s: Complex64) -> Result<Complex64> {
    let pi = std::f64::consts::PI;
    let lg = log_gamma_complex(Complex64::new(1.0, 0.0) - s)?;
    Ok(s * std::f64::consts::LN_2 + (s - 1.0) * pi.ln() + log_sin(s * (pi / 2.0)) + lg)
}

/// chi(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s).
pub fn chi_factor(s: Complex64) -> Result<Complex64> {
    Ok(log_chi(s)?.exp())
}
