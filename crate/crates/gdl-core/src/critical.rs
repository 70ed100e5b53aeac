//! Critical-line diagnostics: the generating function on Re s = 1/2, the
//! exponentially smoothed Dirichlet series against it, the fourth moment
//! of |zeta|, and the exceptional-set scan for |zeta(1 + 2it)|.

use crate::error::{Error, Result};
use crate::local::FunctionSpec;
use crate::pool::Pool;
use crate::table::stream_segments;
use crate::zeta::zeta_complex;
use num_complex::Complex64;

pub const T_MIN: f64 = 10.0;
pub const T_MAX: f64 = 5.0e3;

/// F(1/2 + it) = zeta(1/2+it)^2 * zeta(2it) * zeta(1+2it)^M for H = 1.
pub fn f_on_critical(m: i32, t: f64) -> Result<Complex64> {
    if !(T_MIN..=T_MAX).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [{T_MIN}, {T_MAX}]")));
    }
    let z_half = zeta_complex(Complex64::new(0.5, t))?;
    let z_2it = zeta_complex(Complex64::new(0.0, 2.0 * t))?;
    let z_1p2it = zeta_complex(Complex64::new(1.0, 2.0 * t))?;
    Ok(z_half * z_half * z_2it * z_1p2it.powi(m))
}

#[derive(Clone, Debug)]
pub struct SmoothedSeries {
    pub value: Complex64,
    /// e^{-N/y} * sum_{n<=N} |f(n)| n^{-sigma}: the reported majorant for
    /// the discarded tail
    pub tail_bound: f64,
    pub terms: u64,
}

/// sum_{n<=N} f(n) n^{-s} e^{-n/y} with compensated summation, streaming
/// the coefficient sieve.
pub fn smoothed_series(
    spec: &FunctionSpec,
    s: Complex64,
    y: f64,
    n: u64,
) -> Result<SmoothedSeries> {
    if n == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    if !(y > 0.0) {
        return Err(Error::Domain("y must be positive".into()));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut majorant = 0.0f64;
    stream_segments(spec, 1, n, |start, block| {
        for (i, &fv) in block.iter().enumerate() {
            let nn = (start + i as u64) as f64;
            if fv == 0 {
                continue;
            }
            let ln_n = nn.ln();
            let damp = (-nn / y).exp();
            let modulus = fv as f64 * (-s.re * ln_n).exp();
            let term = Complex64::from_polar(modulus * damp, -s.im * ln_n);
            // Neumaier, componentwise
            let t_re = sum.re + term.re;
            comp.re += if sum.re.abs() >= term.re.abs() {
                (sum.re - t_re) + term.re
            } else {
                (term.re - t_re) + sum.re
            };
            let t_im = sum.im + term.im;
            comp.im += if sum.im.abs() >= term.im.abs() {
                (sum.im - t_im) + term.im
            } else {
                (term.im - t_im) + sum.im
            };
            sum = Complex64::new(t_re, t_im);
            majorant += modulus.abs();
        }
        Ok(())
    })?;
    Ok(SmoothedSeries {
        value: sum + comp,
        tail_bound: (-(n as f64) / y).exp() * majorant,
        terms: n,
    })
}

/// Composite-Simpson fourth moment of |zeta(1/2+it)| over [t1, t2],
/// optionally with the dt/t weight. Panels are chunked deterministically,
/// so the result is independent of the worker count.
pub fn fourth_moment(
    t1: f64,
    t2: f64,
    step: f64,
    weighted: bool,
    pool: &Pool,
) -> Result<f64> {
    if !(T_MIN..=T_MAX).contains(&t1) || !(T_MIN..=T_MAX).contains(&t2) || t1 > t2 {
        return Err(Error::Domain(format!(
            "need {T_MIN} <= T1 <= T2 <= {T_MAX}, got [{t1}, {t2}]"
        )));
    }
    if t1 == t2 {
        return Ok(0.0);
    }
    if !(step > 0.0) {
        return Err(Error::Domain("step must be positive".into()));
    }
    let mut panels = ((t2 - t1) / step).ceil() as u64;
    if panels % 2 == 1 {
        panels += 1;
    }
    let h = (t2 - t1) / panels as f64;
    let integrand = |t: f64| -> Result<f64> {
        let z = zeta_complex(Complex64::new(0.5, t))?;
        let v = z.norm_sqr();
        Ok(if weighted { v * v / t } else { v * v })
    };
    // Simpson weights by global index parity; fixed-size chunks keep the
    // fold order worker-independent.
    const CHUNK: u64 = 4096;
    let chunks: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut i = 1u64;
        while i < panels {
            v.push((i, (i + CHUNK - 1).min(panels - 1)));
            i += CHUNK;
        }
        v
    };
    let partials: Vec<f64> = pool.map(chunks, |(lo, hi)| {
        let mut acc = 0.0f64;
        for i in lo..=hi {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * integrand(t1 + i as f64 * h)?;
        }
        Ok(acc)
    })?;
    let mut inner = 0.0f64;
    for p in partials {
        inner += p;
    }
    let total = integrand(t1)? + integrand(t2)? + inner;
    Ok(total * h / 3.0)
}

/// Sorted disjoint open intervals of real t-values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
    total_length: f64,
}

impl IntervalSet {
    /// Merge possibly-overlapping intervals into a canonical sorted
    /// disjoint set.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|&(lo, hi)| hi > lo);
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        let total_length = intervals.iter().map(|&(lo, hi)| hi - lo).sum();
        IntervalSet { intervals, total_length }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    /// Widen every interval by `margin` on both sides and re-merge; the
    /// dilation step that turns a bad set at one height into the excluded
    /// neighborhood at full scale.
    pub fn dilate(&self, margin: f64) -> IntervalSet {
        IntervalSet::from_intervals(
            self.intervals.iter().map(|&(lo, hi)| (lo - margin, hi + margin)).collect(),
        )
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < t && t < hi)
    }
}

#[derive(Clone, Debug)]
pub struct ExceptionalReport {
    pub set: IntervalSet,
    /// threshold kappa * loglog(T)
    pub threshold: f64,
    pub sup_abs: f64,
    pub inf_abs: f64,
    pub grid: f64,
    pub points: u64,
}

/// Scan t in [T, 2T] on a grid for |zeta(1+2it)| outside
/// [1/(kappa loglog T), kappa loglog T]; flagged runs merge into open
/// intervals padded by half a grid step.
pub fn exceptional_scan(
    t_hat: f64,
    kappa: f64,
    grid: f64,
    pool: &Pool,
) -> Result<ExceptionalReport> {
    if !(t_hat >= 100.0) || 2.0 * t_hat > T_MAX {
        return Err(Error::Domain(format!(
            "T must satisfy 100 <= T <= {}",
            T_MAX / 2.0
        )));
    }
    if !(grid > 0.0) || !(kappa > 0.0) {
        return Err(Error::Domain("grid and kappa must be positive".into()));
    }
    let threshold = kappa * t_hat.ln().ln();
    let points = ((t_hat / grid).floor() as u64) + 1;
    const CHUNK: u64 = 2048;
    let chunks: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut i = 0u64;
        while i < points {
            v.push((i, (i + CHUNK - 1).min(points - 1)));
            i += CHUNK;
        }
        v
    };
    let values: Vec<Vec<f64>> = pool.map(chunks, |(lo, hi)| {
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        for i in lo..=hi {
            let t = t_hat + i as f64 * grid;
            let z = zeta_complex(Complex64::new(1.0, 2.0 * t))?;
            out.push(z.norm());
        }
        Ok(out)
    })?;
    let mut sup_abs = f64::MIN;
    let mut inf_abs = f64::MAX;
    let mut raw: Vec<(f64, f64)> = Vec::new();
    let mut run_start: Option<f64> = None;
    let mut last_t = t_hat;
    for (i, v) in values.into_iter().flatten().enumerate() {
        let t = t_hat + i as f64 * grid;
        sup_abs = sup_abs.max(v);
        inf_abs = inf_abs.min(v);
        let bad = v > threshold || v < 1.0 / threshold;
        match (bad, run_start) {
            (true, None) => run_start = Some(t),
            (false, Some(start)) => {
                raw.push((start - grid / 2.0, last_t + grid / 2.0));
                run_start = None;
            }
            _ => {}
        }
        if bad {
            last_t = t;
        }
    }
    if let Some(start) = run_start {
        raw.push((start - grid / 2.0, last_t + grid / 2.0));
    }
    Ok(ExceptionalReport {
        set: IntervalSet::from_intervals(raw),
        threshold,
        sup_abs,
        inf_abs,
        grid,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::chi_factor;

    #[test]
    fn f_vanishes_at_zeta_zero() {
        let f = f_on_critical(0, 14.134725141734695).unwrap();
        assert!(f.norm() < 1e-6, "|F| = {}", f.norm());
    }

    #[test]
    fn f_ratio_between_m_values() {
        let t = 100.0;
        let f1 = f_on_critical(1, t).unwrap();
        let f0 = f_on_critical(0, t).unwrap();
        let z = zeta_complex(Complex64::new(1.0, 2.0 * t)).unwrap();
        assert!((f1 / f0 - z).norm() < 1e-9);
    }

    #[test]
    fn f_magnitude_functional_identity() {
        // |F(1/2+it)| = |zeta(1/2+it)|^2 |zeta(1+2it)|^{M+1} |chi(-2it)|
        for &(m, t) in &[(0, 100.0), (-1, 50.0), (1, 50.0)] {
            let f = f_on_critical(m, t).unwrap().norm();
            let z_half = zeta_complex(Complex64::new(0.5, t)).unwrap().norm();
            let z1 = zeta_complex(Complex64::new(1.0, 2.0 * t)).unwrap().norm();
            let chi = chi_factor(Complex64::new(0.0, -2.0 * t)).unwrap().norm();
            let rhs = z_half * z_half * z1.powi(m + 1) * chi;
            assert!((f / rhs - 1.0).abs() < 1e-6, "M={m} t={t}: {}", f / rhs);
        }
    }

    #[test]
    fn f_domain() {
        assert!(f_on_critical(0, 5.0).is_err());
        assert!(f_on_critical(0, 6000.0).is_err());
    }

    #[test]
    fn smoothed_single_term() {
        let s = smoothed_series(
            &FunctionSpec::f1(),
            Complex64::new(0.5, 50.0),
            100.0,
            1,
        )
        .unwrap();
        let expected = (-1.0f64 / 100.0).exp();
        assert!((s.value - Complex64::new(expected, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fourth_moment_degenerate_and_small() {
        let pool = Pool::default();
        assert_eq!(fourth_moment(50.0, 50.0, 0.02, false, &pool).unwrap(), 0.0);
        let a = fourth_moment(10.0, 60.0, 0.02, false, &pool).unwrap();
        let b = fourth_moment(10.0, 60.0, 0.01, false, &pool).unwrap();
        assert!(a > 0.0);
        assert!(((a - b) / b).abs() < 1e-3, "rel {}", ((a - b) / b).abs());
        // weighted variant integrates |zeta|^4 / t, hence smaller
        let w = fourth_moment(10.0, 60.0, 0.02, true, &pool).unwrap();
        assert!(w < a && w > 0.0);
    }

    #[test]
    fn fourth_moment_worker_independence() {
        let a = fourth_moment(10.0, 80.0, 0.02, false, &Pool::new(1).unwrap()).unwrap();
        let b = fourth_moment(10.0, 80.0, 0.02, false, &Pool::new(8).unwrap()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn interval_set_merging_and_dilation() {
        let s = IntervalSet::from_intervals(vec![(3.0, 4.0), (1.0, 2.0), (1.5, 1.8), (5.0, 5.0)]);
        assert_eq!(s.count(), 2);
        assert!((s.total_length() - 2.0).abs() < 1e-12);
        assert!(s.contains(1.7) && !s.contains(2.5));
        let d = s.dilate(0.6);
        // (0.4, 2.6) and (2.4, 4.6) merge
        assert_eq!(d.count(), 1);
        assert!((d.total_length() - 4.2).abs() < 1e-12);
    }

    #[test]
    fn exceptional_extreme_kappa_is_empty() {
        let pool = Pool::default();
        let r = exceptional_scan(200.0, 100.0, 0.5, &pool).unwrap();
        assert!(r.set.is_empty());
        assert!(r.sup_abs >= r.inf_abs && r.inf_abs > 0.0);
        assert!(r.sup_abs * (1.0 / r.inf_abs) > 1.0);
    }

    #[test]
    fn exceptional_domain() {
        let pool = Pool::default();
        assert!(exceptional_scan(50.0, 1.0, 0.1, &pool).is_err());
        assert!(exceptional_scan(3000.0, 1.0, 0.1, &pool).is_err());
    }
}
