//! Summatory functions S_f(x) = sum_{n<=x} f(n), two independent ways:
//! streaming segmented sieve (exact prefix sums) and a sublinear
//! decomposition through the divisor summatory function.
//!
//! The fast route writes F = zeta^2(s) zeta(2s-1) * G(s) with
//! G = zeta(2s)^M H(s), so that S_f(x) = sum_j g(j) S_{f1}(x/j), where g
//! is sparse (supported on squares when H = 1), and
//! S_{f1}(x) = sum_{k<=sqrt(x)} k D(x/k^2) from f1(n) = sum_{abk^2=n} k.

use crate::error::{Error, Result};
use crate::local::{zeta2s_local, FunctionSpec, Rational};
use crate::primes::{factorize, isqrt};
use crate::table::stream_segments;
use num::{ToPrimitive, Zero};
use std::collections::HashMap;

/// Default streaming cap for checkpointed prefix sums.
pub const DEFAULT_X_MAX: u64 = 1_000_000_000;

/// D(x) = sum_{n<=x} d(n) by the hyperbola method:
/// 2 sum_{k<=sqrt(x)} floor(x/k) - floor(sqrt(x))^2.
pub fn divisor_summatory(x: u64) -> i128 {
    let r = isqrt(x);
    let mut acc: i128 = 0;
    for k in 1..=r {
        acc += (x / k) as i128;
    }
    2 * acc - (r as i128) * (r as i128)
}

/// S_{f1}(x) = sum_{k<=sqrt(x)} k * D(floor(x/k^2)), exact.
pub fn summatory_f1_fast(x: u64) -> Result<i128> {
    if x == 0 {
        return Err(Error::Domain("x must be >= 1".into()));
    }
    let mut acc: i128 = 0;
    let mut k = 1u64;
    while k * k <= x {
        acc = acc
            .checked_add(k as i128 * divisor_summatory(x / (k * k)))
            .ok_or(Error::Overflow("summatory"))?;
        k += 1;
    }
    Ok(acc)
}

/// Sparse coefficients g(j) of zeta(2s)^M H(s) for j <= x, exact integers.
/// Errors if the finite H presentation cannot cover the range or if g is
/// not integer-valued.
fn g_coefficients(spec: &FunctionSpec, x: u64) -> Result<Vec<(u64, i64)>> {
    // local coefficients of (1-Y)^{-M} in Y = X^2, indexed by the exponent v
    let v_max = (64 - x.leading_zeros()) as usize; // generous: 2^v <= x
    let zm_local: Vec<Rational> = zeta2s_local(spec.m(), 2 * v_max)
        .into_iter()
        .step_by(2)
        .collect();
    let zm_of = |k: u64| -> Rational {
        factorize(k)
            .iter()
            .map(|&(_, a)| zm_local[a as usize].clone())
            .product()
    };

    // square-supported part
    let mut square_part: Vec<(u64, Rational)> = Vec::new();
    let mut k = 1u64;
    while k * k <= x {
        let c = zm_of(k);
        if !c.is_zero() {
            square_part.push((k * k, c));
        }
        k += 1;
    }

    // H part: products of the explicitly presented primes
    let mut h_part: Vec<(u64, Rational)> = vec![(1, Rational::from_integer(1.into()))];
    for (&p, series) in spec.h_local() {
        // the truncated presentation must cover every exponent in range
        if let Some(overflowing) = p.checked_pow(series.len() as u32) {
            if overflowing <= x {
                return Err(Error::Domain(format!(
                    "H local series at p = {p} (degree {}) is insufficient for x = {x}",
                    series.len() - 1
                )));
            }
        }
        let mut next = Vec::new();
        for (m, hm) in &h_part {
            let mut pj = 1u64;
            for cj in series.iter() {
                if m * pj > x {
                    break;
                }
                if !cj.is_zero() {
                    next.push((m * pj, hm * cj));
                }
                match pj.checked_mul(p) {
                    Some(v) if v <= x => pj = v,
                    _ => break,
                }
            }
        }
        next.sort_by_key(|&(m, _)| m);
        h_part = next;
    }

    // convolve the two sparse supports and certify integrality
    let mut acc: HashMap<u64, Rational> = HashMap::new();
    for (sq, c) in &square_part {
        for (m, hm) in &h_part {
            match sq.checked_mul(*m) {
                Some(j) if j <= x => {
                    *acc.entry(j).or_insert_with(Rational::zero) += c * hm;
                }
                _ => {}
            }
        }
    }
    let mut out = Vec::with_capacity(acc.len());
    for (j, v) in acc {
        if v.is_zero() {
            continue;
        }
        if !v.is_integer() {
            return Err(Error::NonIntegral(j));
        }
        let vi = v.to_integer().to_i64().ok_or(Error::Overflow("g coefficient"))?;
        out.push((j, vi));
    }
    out.sort_unstable();
    Ok(out)
}

/// Sublinear S_f(x) through the reduction to S_{f1}; exact, equal to the
/// sieve result.
pub fn summatory_fast(spec: &FunctionSpec, x: u64) -> Result<i128> {
    if x == 0 {
        return Err(Error::Domain("x must be >= 1".into()));
    }
    let g = g_coefficients(spec, x)?;
    let mut cache: HashMap<u64, i128> = HashMap::new();
    let mut acc: i128 = 0;
    for (j, gj) in g {
        let y = x / j;
        let s = match cache.get(&y) {
            Some(&s) => s,
            None => {
                let s = summatory_f1_fast(y)?;
                cache.insert(y, s);
                s
            }
        };
        acc = acc
            .checked_add(gj as i128 * s)
            .ok_or(Error::Overflow("summatory"))?;
    }
    Ok(acc)
}

/// Exact prefix sums at each checkpoint (ascending), streaming the sieve
/// once with 128-bit accumulation.
pub fn summatory_sieve(spec: &FunctionSpec, checkpoints: &[u64]) -> Result<Vec<i128>> {
    summatory_sieve_capped(spec, checkpoints, DEFAULT_X_MAX)
}

pub fn summatory_sieve_capped(
    spec: &FunctionSpec,
    checkpoints: &[u64],
    x_max: u64,
) -> Result<Vec<i128>> {
    if checkpoints.is_empty() {
        return Ok(Vec::new());
    }
    if checkpoints.windows(2).any(|w| w[0] > w[1]) || checkpoints[0] == 0 {
        return Err(Error::Domain("checkpoints must be ascending and >= 1".into()));
    }
    let last = *checkpoints.last().unwrap();
    if last > x_max {
        return Err(Error::Capacity(format!(
            "checkpoint {last} exceeds configured x_max {x_max}"
        )));
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0usize;
    let mut running: i128 = 0;
    stream_segments(spec, 1, last, |start, block| {
        for (i, &v) in block.iter().enumerate() {
            running += v as i128;
            let n = start + i as u64;
            while next < checkpoints.len() && checkpoints[next] == n {
                out.push(running);
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(out)
}
