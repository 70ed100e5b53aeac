//! Double-double arithmetic: an unevaluated sum of two `f64`s carrying
//! roughly 31 significant decimal digits.
//!
//! The error-free transformations follow the classic Dekker/Knuth
//! algorithms and do not rely on hardware FMA, so results are identical
//! on every target. Transcendental kernels (`exp`, `ln`, `sin_cos`) are
//! accurate to a few ulps of the 106-bit format, which is far below the
//! 1e-20..1e-25 tolerances used by the callers in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Copy, Clone, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
pub const TWO_PI: Dd = Dd { hi: 6.283185307179586, lo: 2.4492935982947064e-16 };
pub const FRAC_PI_2: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };
pub const LN_2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
pub const E: Dd = Dd { hi: 2.718281828459045, lo: 1.4456468917292502e-16 };

/// `a + b` with exact rounding error, assuming nothing about magnitudes.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// `a + b` with exact rounding error, valid when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Dekker split of a 53-bit mantissa into two 26-bit halves.
#[inline]
fn split(a: f64) -> (f64, f64) {
    const C: f64 = 134_217_729.0; // 2^27 + 1
    let t = C * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// `a * b` with exact rounding error (Dekker two-product, FMA-free).
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion; every `i64` is a sum of two doubles.
    #[inline]
    pub fn from_i64(x: i64) -> Self {
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        Dd::norm(hi, lo)
    }

    pub fn from_u64(x: u64) -> Self {
        let hi = x as f64;
        let rest = x.wrapping_sub(hi as u64) as i64;
        Dd::norm(hi, rest as f64)
    }

    /// Exact conversion for |x| < 2^106.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let lo = (x - hi as i128) as f64;
        Dd::norm(hi, lo)
    }

    #[inline]
    fn norm(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) { -self } else { self }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        Dd::norm(s, e + self.lo)
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Dd::norm(p, e + self.lo * b)
    }

    pub fn div_f64(self, b: f64) -> Self {
        self / Dd::from_f64(b)
    }

    pub fn recip(self) -> Self {
        ONE / self
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
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

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return ZERO;
        }
        // One Newton step on the f64 estimate doubles its precision.
        let x = self.hi.sqrt();
        let x2 = Dd::from_f64(x) * Dd::from_f64(x);
        let r = (self - x2).to_f64() / (2.0 * x);
        Dd::from_f64(x).add_f64(r)
    }

    /// exp(x) by 2^k * e^r reduction, scaled Taylor core and repeated squaring.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * Dd::from_f64(k);
        // r/512, Taylor for expm1, then nine doublings of t = e^u - 1.
        let u = r.mul_f64(1.0 / 512.0);
        let mut term = u;
        let mut sum = u;
        for i in 2..=12 {
            term = term * u;
            term = term.div_f64(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        let mut t = sum;
        for _ in 0..9 {
            t = t.mul_f64(2.0) + t * t;
        }
        let e = t.add_f64(1.0);
        // Scale by 2^k exactly.
        let scale = f64_exp2(k as i32);
        Dd::new(e.hi * scale, e.lo * scale)
    }

    /// Natural log by one Newton step `y + x e^{-y} - 1` on the f64 estimate.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0, "ln of non-positive dd");
        let y = self.hi.ln();
        let e = Dd::from_f64(-y).exp();
        let correction = (self * e).add_f64(-1.0);
        Dd::from_f64(y) + correction
    }

    /// x^a for positive x via exp(a ln x).
    pub fn pow(self, a: Dd) -> Self {
        (self.ln() * a).exp()
    }

    /// Simultaneous sin and cos; argument reduced modulo 2*pi, then folded
    /// into |r| <= pi/4 by quadrant. Adequate for |x| up to ~1e6 before
    /// reduction error grows past ~1e-27 absolute.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let n = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2 * Dd::from_f64(n);
        let quadrant = (n as i64).rem_euclid(4);
        let (s, c) = sin_cos_taylor(r);
        match quadrant {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// Parse a decimal literal ("-0.0072815845483676724860586...") exactly
    /// enough for double-double: mantissa accumulated in i128 (up to 38
    /// digits), then one correctly-split scaling by a power of ten.
    pub fn parse(s: &str) -> Option<Dd> {
        let s = s.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mant_str, exp10) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().ok()?),
            None => (s, 0),
        };
        let mut mant: i128 = 0;
        let mut frac_digits: i32 = 0;
        let mut seen_point = false;
        let mut digits = 0;
        for ch in mant_str.chars() {
            match ch {
                '0'..='9' => {
                    if digits < 37 {
                        mant = mant * 10 + (ch as u8 - b'0') as i128;
                        if seen_point {
                            frac_digits += 1;
                        }
                        if mant != 0 {
                            digits += 1;
                        }
                    } else if !seen_point {
                        frac_digits -= 1;
                    }
                }
                '.' if !seen_point => seen_point = true,
                _ => return None,
            }
        }
        let mut v = Dd::from_i128(mant);
        let scale = exp10 - frac_digits;
        v = v * pow10_dd(scale);
        Some(if neg { -v } else { v })
    }
}

/// 2^k as f64 (k in normal range).
fn f64_exp2(k: i32) -> f64 {
    f64::from_bits(((1023 + k) as u64) << 52)
}

/// 10^k as a double-double, exact for |k| <= 22 and near-exact beyond.
fn pow10_dd(k: i32) -> Dd {
    let mut acc = ONE;
    let mut rem = k;
    while rem > 0 {
        let step = rem.min(22);
        acc = acc * Dd::from_f64(10f64.powi(step));
        rem -= step;
    }
    while rem < 0 {
        let step = (-rem).min(22);
        acc = acc / Dd::from_f64(10f64.powi(step));
        rem += step;
    }
    acc
}

/// Taylor sin/cos on |r| <= pi/4 + slack.
fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    let r2 = r * r;
    let mut s = r;
    let mut term = r;
    let mut i = 1u32;
    loop {
        term = term * r2;
        term = term.div_f64(-(((2 * i) * (2 * i + 1)) as f64));
        s = s + term;
        i += 1;
        if term.hi.abs() < 1e-36 || i > 20 {
            break;
        }
    }
    let mut c = ONE;
    let mut term = ONE;
    let mut i = 1u32;
    loop {
        term = term * r2;
        term = term.div_f64(-(((2 * i - 1) * (2 * i)) as f64));
        c = c + term;
        i += 1;
        if term.hi.abs() < 1e-36 || i > 20 {
            break;
        }
    }
    (s, c)
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e2) = quick_two_sum(s, e + t);
        Dd::norm(s, e2 + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        Dd::norm(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        // Long division with two correction terms.
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::norm(s, e + q3)
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for Dd {
    /// Decimal rendering with ~31 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return write!(f, "0");
        }
        let neg = self.hi < 0.0;
        let mut v = self.abs();
        let mut exp = 0i32;
        while v.hi >= 10.0 {
            v = v / Dd::from_f64(10.0);
            exp += 1;
        }
        while v.hi < 1.0 {
            v = v * Dd::from_f64(10.0);
            exp -= 1;
        }
        let mut digits = String::new();
        for i in 0..31 {
            let d = v.hi.floor();
            digits.push((b'0' + (d as u8).min(9)) as char);
            v = (v - Dd::from_f64(d)) * Dd::from_f64(10.0);
            if i == 0 {
                digits.push('.');
            }
        }
        write!(f, "{}{}e{}", if neg { "-" } else { "" }, digits, exp)
    }
}
