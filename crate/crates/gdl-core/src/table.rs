//! Exact coefficient tables f(1..N) and the Dirichlet ring operations on
//! them. Values are 64-bit signed with 128-bit intermediates; overflow is
//! a hard error, never a wrap.

use crate::error::{Error, Result};
use crate::local::FunctionSpec;
use crate::primes::{isqrt, primes_up_to};
use std::collections::HashMap;

/// Largest table materialized in memory (larger ranges must stream).
pub const TABLE_CAP: u64 = 1 << 27;

/// Immutable table of exact values f(1..N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    spec_hash: u64,
    values: Vec<i64>,
}

impl CoefficientTable {
    pub fn from_values(spec_hash: u64, values: Vec<i64>) -> Result<Self> {
        match values.first() {
            Some(&1) => Ok(CoefficientTable { spec_hash, values }),
            Some(v) => Err(Error::Domain(format!("values[1] must be 1, got {v}"))),
            None => Err(Error::Domain("empty table".into())),
        }
    }

    /// Table with arbitrary unit leading value (for ring experiments).
    pub fn from_raw(spec_hash: u64, values: Vec<i64>) -> Self {
        CoefficientTable { spec_hash, values }
    }

    pub fn n(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn spec_hash(&self) -> u64 {
        self.spec_hash
    }

    /// 1-indexed accessor.
    pub fn get(&self, n: u64) -> i64 {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// Precomputed local data shared by every segment of one sieve run.
pub(crate) struct SieveContext {
    /// primes up to sqrt(hi), with full local coefficient lists
    primes: Vec<u64>,
    local: Vec<Vec<i64>>,
    /// f(p) for the finitely many H-primes (f(p) = 2 elsewhere)
    h_prime_values: HashMap<u64, i64>,
}

impl SieveContext {
    pub(crate) fn new(spec: &FunctionSpec, hi: u64) -> Result<Self> {
        let root = isqrt(hi.max(1));
        let primes = primes_up_to(root);
        let mut local = Vec::with_capacity(primes.len());
        for &p in &primes {
            let mut a_max = 0u32;
            let mut pk = p;
            while pk <= hi / p {
                pk *= p;
                a_max += 1;
            }
            local.push(spec.local_factor(p, a_max + 1)?.coeffs);
        }
        let mut h_prime_values = HashMap::new();
        for &p in spec.h_local().keys() {
            h_prime_values.insert(p, spec.prime_value(p)?);
        }
        Ok(SieveContext { primes, local, h_prime_values })
    }

    /// Exact f(n) for n in [lo, lo + out.len()), multiplicative assembly
    /// by trial division over the precomputed primes.
    pub(crate) fn segment_values(&self, lo: u64, out: &mut [i64]) -> Result<()> {
        let len = out.len() as u64;
        let hi = lo + len; // exclusive
        let mut rem: Vec<u64> = (lo..hi).collect();
        out.fill(1);
        for (pi, &p) in self.primes.iter().enumerate() {
            if p.saturating_mul(p) >= hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            if m == 0 {
                m = p;
            }
            while m < hi {
                let idx = (m - lo) as usize;
                let mut a = 0usize;
                while rem[idx] % p == 0 {
                    rem[idx] /= p;
                    a += 1;
                }
                let c = self.local[pi][a];
                out[idx] = out[idx]
                    .checked_mul(c)
                    .ok_or(Error::Overflow("sieve coefficient"))?;
                m += p;
            }
        }
        for (idx, &r) in rem.iter().enumerate() {
            if r > 1 {
                let c = self.h_prime_values.get(&r).copied().unwrap_or(2);
                out[idx] = out[idx]
                    .checked_mul(c)
                    .ok_or(Error::Overflow("sieve coefficient"))?;
            }
        }
        Ok(())
    }
}

pub(crate) const SEGMENT_LEN: usize = 1 << 20;

/// Stream exact coefficient segments over [lo, hi] in increasing order.
/// The closure receives the first n of the block and the values.
pub fn stream_segments<F>(spec: &FunctionSpec, lo: u64, hi: u64, mut f: F) -> Result<()>
where
    F: FnMut(u64, &[i64]) -> Result<()>,
{
    if lo == 0 || hi < lo {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    let ctx = SieveContext::new(spec, hi)?;
    let mut buf = vec![0i64; SEGMENT_LEN.min((hi - lo + 1) as usize)];
    let mut start = lo;
    while start <= hi {
        let len = SEGMENT_LEN.min((hi - start + 1) as usize);
        ctx.segment_values(start, &mut buf[..len])?;
        f(start, &buf[..len])?;
        start += len as u64;
    }
    Ok(())
}

/// Exact table of f(1..n) by smallest-prime-factor sieve over segments.
pub fn coefficients_sieve(spec: &FunctionSpec, n: u64) -> Result<CoefficientTable> {
    if n == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    if n > TABLE_CAP {
        return Err(Error::Capacity(format!(
            "table of {n} values exceeds cap {TABLE_CAP}; use the streaming interface"
        )));
    }
    let mut values = Vec::with_capacity(n as usize);
    stream_segments(spec, 1, n, |_, block| {
        values.extend_from_slice(block);
        Ok(())
    })?;
    CoefficientTable::from_values(spec.hash(), values)
}

/// Table of the majorant f-hat generated with exponent |M| (H = 1):
/// |f(n)| <= f-hat(n) for the matching spec.
pub fn fhat_table(m: i32, n: u64) -> Result<CoefficientTable> {
    let spec = FunctionSpec::f1().with_m(m.abs())?;
    coefficients_sieve(&spec, n)
}

/// Identity of the convolution ring: (1, 0, 0, ...).
pub fn epsilon_table(n: u64) -> CoefficientTable {
    let mut values = vec![0i64; n as usize];
    values[0] = 1;
    CoefficientTable::from_raw(0, values)
}

/// (a * b)(n) = sum over d | n of a(d) b(n/d), exact for n <= len.
pub fn dirichlet_convolve(
    a: &CoefficientTable,
    b: &CoefficientTable,
    n: u64,
) -> Result<CoefficientTable> {
    if a.n() < n || b.n() < n {
        return Err(Error::Domain(format!("operand tables shorter than N = {n}")));
    }
    let len = n as usize;
    let mut acc = vec![0i128; len];
    for d in 1..=len {
        let ad = a.values[d - 1] as i128;
        if ad == 0 {
            continue;
        }
        let mut m = d;
        while m <= len {
            acc[m - 1] += ad * b.values[m / d - 1] as i128;
            m += d;
        }
    }
    let values = acc
        .into_iter()
        .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("convolution")))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientTable::from_raw(0, values))
}

/// Convolution inverse on 1..n. Requires a(1) = +-1; the inverse is then
/// integral and (a * a^{-1}) = epsilon exactly.
pub fn dirichlet_inverse(a: &CoefficientTable, n: u64) -> Result<CoefficientTable> {
    if a.n() < n {
        return Err(Error::Domain(format!("table shorter than N = {n}")));
    }
    let unit = match a.values.first().copied() {
        None | Some(0) => return Err(Error::NonInvertible),
        Some(v @ (1 | -1)) => v,
        Some(v) => {
            return Err(Error::Domain(format!(
                "leading value {v} is not a unit; inverse would be rational"
            )))
        }
    };
    let len = n as usize;
    let mut inv = vec![0i64; len];
    inv[0] = unit;
    for m in 2..=len {
        let mut acc: i128 = 0;
        // sum over proper divisors d of m, d < m: a(m/d) inv(d)
        let mut d = 1usize;
        while d * d <= m {
            if m % d == 0 {
                if d < m {
                    acc += a.values[m / d - 1] as i128 * inv[d - 1] as i128;
                }
                let e = m / d;
                if e != d && e < m {
                    acc += a.values[d - 1] as i128 * inv[e - 1] as i128;
                }
            }
            d += 1;
        }
        let v = -(unit as i128) * acc;
        inv[m - 1] = i64::try_from(v).map_err(|_| Error::Overflow("inverse"))?;
    }
    Ok(CoefficientTable::from_raw(0, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcdsum;

    #[test]
    fn sieve_f1_first_ten() {
        let t = coefficients_sieve(&FunctionSpec::f1(), 10).unwrap();
        assert_eq!(t.values(), &[1, 2, 2, 5, 2, 4, 2, 8, 6, 4]);
        for n in 1..=10 {
            assert_eq!(t.get(n), gcdsum::gcd_sum_f1(n), "n={n}");
        }
    }

    #[test]
    fn sieve_fstar_first_nine() {
        let t = coefficients_sieve(&FunctionSpec::fstar(), 9).unwrap();
        assert_eq!(t.values(), &[1, 2, 2, 4, 2, 4, 2, 6, 5]);
    }

    #[test]
    fn sieve_n_one() {
        for spec in [FunctionSpec::f1(), FunctionSpec::fstar()] {
            assert_eq!(coefficients_sieve(&spec, 1).unwrap().values(), &[1]);
        }
    }

    #[test]
    fn sieve_rejects_rational_spec() {
        // series long enough that integrality (not coverage) is the issue
        let spec = FunctionSpec::pstar(10, 5);
        assert!(matches!(
            coefficients_sieve(&spec, 16),
            Err(Error::NonIntegral(_))
        ));
        // too short a presentation fails on coverage instead
        let short = FunctionSpec::pstar(10, 3);
        assert!(matches!(coefficients_sieve(&short, 16), Err(Error::Domain(_))));
    }

    #[test]
    fn fhat_values() {
        let t = fhat_table(1, 8).unwrap();
        assert_eq!(t.get(4), 6);
        assert_eq!(t.get(1), 1);
        let t0 = fhat_table(0, 8).unwrap();
        assert_eq!(t0.get(8), 8); // fhat = f1 when M = 0
        assert_eq!(t0.get(8), gcdsum::gcd_sum_f1(8));
        // fhat for M and -M coincide
        let tm = fhat_table(-1, 8).unwrap();
        assert_eq!(t.values(), tm.values());
    }

    #[test]
    fn convolution_identity_and_divisor_count() {
        let n = 64;
        let eps = epsilon_table(n);
        let f1 = coefficients_sieve(&FunctionSpec::f1(), n).unwrap();
        let conv = dirichlet_convolve(&eps, &f1, n).unwrap();
        assert_eq!(conv.values(), f1.values());
        let u = CoefficientTable::from_raw(0, vec![1i64; n as usize]);
        let d = dirichlet_convolve(&u, &u, n).unwrap();
        assert_eq!(d.get(6), 4);
        // u * u * e with e(m^2) = m reproduces f1
        let mut e = vec![0i64; n as usize];
        let mut k = 1u64;
        while k * k <= n {
            e[(k * k - 1) as usize] = k as i64;
            k += 1;
        }
        let e = CoefficientTable::from_raw(0, e);
        let f1_built = dirichlet_convolve(&d, &e, n).unwrap();
        assert_eq!(f1_built.get(12), 10);
        assert_eq!(f1_built.values(), f1.values());
    }

    #[test]
    fn inverse_of_epsilon_and_moebius() {
        let n = 60;
        let eps = epsilon_table(n);
        let inv = dirichlet_inverse(&eps, n).unwrap();
        assert_eq!(inv.values(), eps.values());
        let u = CoefficientTable::from_raw(0, vec![1i64; n as usize]);
        let mu = dirichlet_inverse(&u, n).unwrap();
        assert_eq!(mu.get(4), 0);
        assert_eq!(mu.get(6), 1);
        assert_eq!(mu.get(30), -1);
    }

    #[test]
    fn inverse_roundtrip_f1() {
        let n = 100;
        let f1 = coefficients_sieve(&FunctionSpec::f1(), n).unwrap();
        let inv = dirichlet_inverse(&f1, n).unwrap();
        let prod = dirichlet_convolve(&f1, &inv, n).unwrap();
        assert_eq!(prod.values(), epsilon_table(n).values());
    }

    #[test]
    fn inverse_error_paths() {
        let zero_lead = CoefficientTable::from_raw(0, vec![0, 1, 1]);
        assert!(matches!(dirichlet_inverse(&zero_lead, 3), Err(Error::NonInvertible)));
        let two_lead = CoefficientTable::from_raw(0, vec![2, 1, 1]);
        assert!(dirichlet_inverse(&two_lead, 3).is_err());
        let neg = CoefficientTable::from_raw(0, vec![-1, 3, -5, 7]);
        let inv = dirichlet_inverse(&neg, 4).unwrap();
        let prod = dirichlet_convolve(&neg, &inv, 4).unwrap();
        assert_eq!(prod.values(), epsilon_table(4).values());
    }

    #[test]
    fn capacity_cap() {
        assert!(matches!(
            coefficients_sieve(&FunctionSpec::f1(), TABLE_CAP + 1),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn segment_boundaries_match_whole_run() {
        // values computed across segment split points agree with a direct run
        let spec = FunctionSpec::fstar();
        let whole = coefficients_sieve(&spec, 3000).unwrap();
        let mut streamed = Vec::new();
        stream_segments(&spec, 1, 3000, |_, block| {
            streamed.extend_from_slice(block);
            Ok(())
        })
        .unwrap();
        assert_eq!(whole.values(), &streamed[..]);
        // mid-range window
        let mut window = Vec::new();
        stream_segments(&spec, 1500, 1600, |_, block| {
            window.extend_from_slice(block);
            Ok(())
        })
        .unwrap();
        assert_eq!(&window[..], &whole.values()[1499..1600]);
    }
}
