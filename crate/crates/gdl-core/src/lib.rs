//! Exact and extended-precision machinery for a two-parameter class of
//! multiplicative arithmetic functions built from gcd-sums: coefficient
//! sieves driven by local Euler factors, dual summatory algorithms, the
//! triple-pole residue main term, remainder-term scans, and critical-line
//! zeta diagnostics.

pub mod cache;
pub mod cdd;
pub mod critical;
pub mod dd;
pub mod error;
pub mod gcdsum;
pub mod hfile;
pub mod laurent;
pub mod local;
pub mod mainterm;
pub mod pool;
pub mod primes;
pub mod remainder;
pub mod stieltjes;
pub mod summatory;
pub mod table;
pub mod zeta;

pub use error::{Error, Result};
pub use local::{FunctionSpec, LocalFactor, Rational};
pub use table::CoefficientTable;
