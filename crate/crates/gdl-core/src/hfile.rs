//! Text format for the H-spec local series: one line per prime,
//!
//! ```text
//!   p: c0 c1 c2 ...
//! ```
//!
//! with coefficients as exact rationals (`num/den` or a bare integer).
//! Blank lines and `#` comments are allowed. Every series must begin
//! with 1, primes must be distinct, and desk-scale caps keep hostile
//! inputs cheap to reject.

use crate::error::{Error, Result};
use crate::local::Rational;
use crate::primes::is_prime;
use num::One;
use std::collections::BTreeMap;
use std::str::FromStr;

/// Caps chosen so parsing and primality checking stay trivial.
pub const MAX_PRIME: u64 = 1_000_000;
pub const MAX_SERIES_LEN: usize = 64;
pub const MAX_LINES: usize = 100_000;

pub fn parse_h_file(text: &str) -> Result<BTreeMap<u64, Vec<Rational>>> {
    let mut out = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        if idx >= MAX_LINES {
            return Err(Error::Parse("too many lines".into()));
        }
        let line_no = idx + 1;
        let line = match raw_line.split('#').next() {
            Some(l) => l.trim(),
            None => "",
        };
        if line.is_empty() {
            continue;
        }
        let (p_str, rest) = line.split_once(':').ok_or_else(|| {
            Error::Parse(format!("line {line_no}: expected `p: c0 c1 ...`"))
        })?;
        let p: u64 = p_str.trim().parse().map_err(|_| {
            Error::Parse(format!("line {line_no}: bad prime `{}`", p_str.trim()))
        })?;
        if p > MAX_PRIME {
            return Err(Error::Parse(format!(
                "line {line_no}: prime {p} exceeds cap {MAX_PRIME}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::Parse(format!("line {line_no}: {p} is not prime")));
        }
        if out.contains_key(&p) {
            return Err(Error::Parse(format!("line {line_no}: duplicate prime {p}")));
        }
        let mut series = Vec::new();
        for tok in rest.split_whitespace() {
            if series.len() >= MAX_SERIES_LEN {
                return Err(Error::Parse(format!(
                    "line {line_no}: series longer than {MAX_SERIES_LEN}"
                )));
            }
            if tok.len() > 256 {
                return Err(Error::Parse(format!(
                    "line {line_no}: coefficient token too long"
                )));
            }
            let c = Rational::from_str(tok).map_err(|_| {
                Error::Parse(format!("line {line_no}: bad rational `{tok}`"))
            })?;
            series.push(c);
        }
        match series.first() {
            Some(c0) if c0.is_one() => {}
            _ => {
                return Err(Error::Parse(format!(
                    "line {line_no}: series must start with constant term 1"
                )))
            }
        }
        out.insert(p, series);
    }
    Ok(out)
}

/// Canonical rendering: ascending primes, reduced rationals.
pub fn serialize_h_file(map: &BTreeMap<u64, Vec<Rational>>) -> String {
    let mut s = String::new();
    for (p, series) in map {
        s.push_str(&format!("{p}:"));
        for c in series {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s.push('\n');
    }
    s
}
