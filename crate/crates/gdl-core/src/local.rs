//! Local Euler factors for the function class generated by
//! `zeta^2(s) zeta(2s-1) zeta(2s)^M H(s)`.
//!
//! With X = p^{-s}, the local factor at p is
//!
//! ```text
//!   (1 - X)^{-2} (1 - pX^2)^{-1} (1 - X^2)^{-M} h_p(X)
//! ```
//!
//! where `h_p` is the (finitely presented) local series of H. All series
//! work here is exact rational; conversion to integer coefficient lists
//! checks integrality and 64-bit range.

use crate::error::{Error, Result};
use crate::gcdsum;
use crate::primes;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact values f(p^0..p^a_max) at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub p: u64,
    pub coeffs: Vec<i64>,
}

/// One member of the function class: the integer M plus finitely many
/// explicit local series of H (identity at all other primes).
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    m: i32,
    h_local: BTreeMap<u64, Vec<Rational>>,
    label: String,
}

/// Desk-scale cap on |M|.
pub const M_MAX: i32 = 8;

impl FunctionSpec {
    pub fn new(
        m: i32,
        h_local: BTreeMap<u64, Vec<Rational>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if m.abs() > M_MAX {
            return Err(Error::Domain(format!("|M| = {} exceeds cap {M_MAX}", m.abs())));
        }
        for (&p, series) in &h_local {
            if !primes::is_prime(p) {
                return Err(Error::Domain(format!("H local key {p} is not prime")));
            }
            match series.first() {
                Some(c0) if c0.is_one() => {}
                _ => {
                    return Err(Error::Domain(format!(
                        "H local series at p = {p} must have constant term 1"
                    )))
                }
            }
        }
        Ok(FunctionSpec { m, h_local, label: label.into() })
    }

    /// f1(n) = sum over divisors m of sigma(gcd(m, n/m)); M = 0, H = 1.
    pub fn f1() -> Self {
        FunctionSpec { m: 0, h_local: BTreeMap::new(), label: "f1".into() }
    }

    /// f*(n) = sum over divisors m of gcd(m, n/m); M = -1, H = 1.
    pub fn fstar() -> Self {
        FunctionSpec { m: -1, h_local: BTreeMap::new(), label: "fstar".into() }
    }

    /// Modified Pillai function: M = -2 with the correction factor H*
    /// inferred numerically from exact prime-power values, for primes up
    /// to `p_bound` and series order `a_max`. No closed form of H* is
    /// available; everywhere beyond `p_bound` the identity factor is used.
    pub fn pstar(p_bound: u64, a_max: usize) -> Self {
        let mut h_local = BTreeMap::new();
        for p in primes::primes_up_to(p_bound) {
            let observed: Vec<Rational> =
                (0..=a_max).map(|a| gcdsum::pillai_prime_power(p, a as u32)).collect();
            let h = infer_local_correction(p, &observed, -2, a_max)
                .expect("pillai local inference is exact");
            h_local.insert(p, h);
        }
        FunctionSpec { m: -2, h_local, label: "pstar".into() }
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn with_m(mut self, m: i32) -> Result<Self> {
        if m.abs() > M_MAX {
            return Err(Error::Domain(format!("|M| = {} exceeds cap {M_MAX}", m.abs())));
        }
        self.m = m;
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn h_local(&self) -> &BTreeMap<u64, Vec<Rational>> {
        &self.h_local
    }

    pub fn h_is_identity(&self) -> bool {
        self.h_local.values().all(|s| s.iter().skip(1).all(Zero::is_zero))
    }

    /// FNV-1a over the canonical mathematical content (label excluded).
    pub fn hash(&self) -> u64 {
        let mut repr = format!("M={};", self.m);
        for (p, series) in &self.h_local {
            repr.push_str(&format!("{p}:"));
            for c in series {
                repr.push_str(&format!("{c},"));
            }
            repr.push(';');
        }
        fnv1a(repr.as_bytes())
    }

    /// Exact rational local series of the full factor at p, length a_max+1.
    /// A truncated H presentation only certifies exponents within its
    /// degree; asking beyond that is an error, not a silent zero-fill.
    pub fn local_series(&self, p: u64, a_max: usize) -> Result<Vec<Rational>> {
        let base = baseline_series(self.m, p, a_max);
        match self.h_local.get(&p) {
            Some(h) => {
                if a_max >= h.len() {
                    return Err(Error::Domain(format!(
                        "H local series at p = {p} (degree {}) is insufficient for exponent {a_max}",
                        h.len() - 1
                    )));
                }
                Ok(series_mul(&base, h, a_max + 1))
            }
            None => Ok(base),
        }
    }

    /// Integer local factor; errors if any value is non-integral or
    /// overflows i64.
    pub fn local_factor(&self, p: u64, a_max: u32) -> Result<LocalFactor> {
        let series = self.local_series(p, a_max as usize)?;
        let mut coeffs = Vec::with_capacity(series.len());
        for (a, v) in series.iter().enumerate() {
            coeffs.push(rational_to_i64(v, p.pow(a as u32))?);
        }
        Ok(LocalFactor { p, coeffs })
    }

    /// f(p) for a prime p: the X^1 coefficient, 2 + h_p[1].
    pub fn prime_value(&self, p: u64) -> Result<i64> {
        let h1 = match self.h_local.get(&p) {
            Some(s) => s.get(1).cloned().ok_or_else(|| {
                Error::Domain(format!("H local series at p = {p} lacks the X^1 term"))
            })?,
            None => Rational::zero(),
        };
        rational_to_i64(&(rat_int(2) + h1), p)
    }
}

fn rational_to_i64(v: &Rational, n: u64) -> Result<i64> {
    if !v.is_integer() {
        return Err(Error::NonIntegral(n));
    }
    v.to_integer().to_i64().ok_or(Error::Overflow("local coefficient"))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Coefficients of (1-X)^{-2} (1-pX^2)^{-1} (1-X^2)^{-M} through X^a_max.
pub fn baseline_series(m: i32, p: u64, a_max: usize) -> Vec<Rational> {
    let n = a_max + 1;
    // (1-X)^{-2}: a+1.  (1-pX^2)^{-1}: p^{a/2} at even a.
    let mut out = vec![Rational::zero(); n];
    for (a, slot) in out.iter_mut().enumerate() {
        let mut acc = Rational::zero();
        // convolve the first two factors directly
        let mut k = 0usize;
        while 2 * k <= a {
            let pk = BigInt::from(p).pow(k as u32);
            acc += Rational::from_integer(pk * BigInt::from((a - 2 * k + 1) as i64));
            k += 1;
        }
        *slot = acc;
    }
    let zeta2s = zeta2s_local(m, a_max);
    series_mul(&out, &zeta2s, n)
}

/// Coefficients of (1-X^2)^{-M} through X^a_max.
pub fn zeta2s_local(m: i32, a_max: usize) -> Vec<Rational> {
    let n = a_max + 1;
    let mut out = vec![Rational::zero(); n];
    for v in 0..=(a_max / 2) {
        let c = if m >= 0 {
            binomial(m as i64 - 1 + v as i64, v as i64)
        } else {
            let mm = (-m) as i64;
            if (v as i64) <= mm {
                let b = binomial(mm, v as i64);
                if v % 2 == 0 { b } else { -b }
            } else {
                BigInt::zero()
            }
        };
        out[2 * v] = Rational::from_integer(c);
    }
    out
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Truncated product of two rational power series.
pub fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Reciprocal of a power series with constant term 1.
pub fn series_inv(a: &[Rational], len: usize) -> Vec<Rational> {
    debug_assert!(a[0].is_one());
    let mut inv = vec![Rational::zero(); len];
    inv[0] = Rational::one();
    for k in 1..len {
        let mut acc = Rational::zero();
        for i in 1..=k.min(a.len() - 1) {
            if !a[i].is_zero() {
                acc += &a[i] * &inv[k - i];
            }
        }
        inv[k] = -acc;
    }
    inv
}

/// Expand the local factor with explicit truncated h series at p:
/// `(1-X)^{-2} (1-pX^2)^{-1} (1-X^2)^{-M} h(X)` through X^a_max,
/// as exact integers. `h = None` means the identity series.
pub fn local_coefficients(
    m: i32,
    h: Option<&[Rational]>,
    p: u64,
    a_max: u32,
) -> Result<Vec<i64>> {
    if !primes::is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if let Some(h) = h {
        if h.first().map_or(true, |c| !c.is_one()) {
            return Err(Error::Domain("h series must have constant term 1".into()));
        }
        if a_max as usize >= h.len() {
            return Err(Error::Domain(format!(
                "h series (degree {}) is insufficient for exponent {a_max}",
                h.len() - 1
            )));
        }
    }
    let base = baseline_series(m, p, a_max as usize);
    let series = match h {
        Some(h) => series_mul(&base, h, a_max as usize + 1),
        None => base,
    };
    series
        .iter()
        .enumerate()
        .map(|(a, v)| rational_to_i64(v, p.pow(a as u32)))
        .collect()
}

/// Divide observed local values by the baseline factor, recovering the
/// truncated correction series h_p with h_p[0] = 1.
pub fn infer_local_correction(
    p: u64,
    observed: &[Rational],
    baseline_m: i32,
    a_max: usize,
) -> Result<Vec<Rational>> {
    if observed.first().map_or(true, |c| !c.is_one()) {
        return Err(Error::Domain("observed local series must start with 1".into()));
    }
    let len = (a_max + 1).min(observed.len());
    let base = baseline_series(baseline_m, p, len - 1);
    let inv = series_inv(&base, len);
    Ok(series_mul(&observed[..len], &inv, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcdsum;

    #[test]
    fn local_m0_at_two() {
        // hand expansion of (1-X)^{-2} (1-2X^2)^{-1}
        let c = local_coefficients(0, None, 2, 3).unwrap();
        assert_eq!(c, vec![1, 2, 5, 8]);
    }

    #[test]
    fn local_mminus1_matches_gcd_sum() {
        let c = local_coefficients(-1, None, 2, 2).unwrap();
        assert_eq!(c, vec![1, 2, 4]);
        assert_eq!(c[2], gcdsum::gcd_sum_fstar(4));
    }

    #[test]
    fn local_trivial_order_zero() {
        for m in [-3, 0, 5] {
            for p in [2u64, 13, 97] {
                assert_eq!(local_coefficients(m, None, p, 0).unwrap(), vec![1]);
            }
        }
    }

    #[test]
    fn local_rejects_composite() {
        assert!(local_coefficients(0, None, 6, 2).is_err());
    }

    #[test]
    fn infer_identity_on_baseline() {
        let base = baseline_series(-1, 5, 4);
        let h = infer_local_correction(5, &base, -1, 4).unwrap();
        assert!(h[0].is_one());
        assert!(h[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn infer_pstar_correction_first_coefficient() {
        for p in [2u64, 3] {
            let observed: Vec<Rational> =
                (0..=2).map(|a| gcdsum::pillai_prime_power(p, a)).collect();
            let h = infer_local_correction(p, &observed, -2, 2).unwrap();
            assert_eq!(h[1], rat(-1, p as i64), "p={p}");
        }
    }

    #[test]
    fn pstar_spec_reproduces_pillai_at_prime_powers() {
        let spec = FunctionSpec::pstar(30, 4);
        for p in [2u64, 3, 5, 29] {
            let series = spec.local_series(p, 4).unwrap();
            for a in 0..=4u32 {
                assert_eq!(series[a as usize], gcdsum::pillai_prime_power(p, a));
            }
        }
        // beyond the configured bound the identity factor applies
        assert!(spec.h_local().get(&31).is_none());
        // beyond the presented degree the data is insufficient
        assert!(spec.local_series(2, 5).is_err());
    }

    #[test]
    fn spec_hash_ignores_label_tracks_content() {
        let a = FunctionSpec::f1();
        let b = FunctionSpec::new(0, BTreeMap::new(), "renamed").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), FunctionSpec::fstar().hash());
    }

    #[test]
    fn m_cap_enforced() {
        assert!(FunctionSpec::new(9, BTreeMap::new(), "big").is_err());
        assert!(FunctionSpec::f1().with_m(-9).is_err());
    }
}
