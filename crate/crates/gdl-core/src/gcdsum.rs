//! Direct gcd-sum definitions: the oracle side of the coefficient machinery.

use crate::local::Rational;
use crate::primes::{factorize, gcd};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

/// Sum of divisors.
pub fn sigma(n: u64) -> u64 {
    factorize(n)
        .iter()
        .map(|&(p, a)| (0..=a).map(|k| p.pow(k)).sum::<u64>())
        .product::<u64>()
        .max(1)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// f*(n) = sum over divisors m of n of gcd(m, n/m).
pub fn gcd_sum_fstar(n: u64) -> i64 {
    divisors(n).iter().map(|&m| gcd(m, n / m) as i64).sum()
}

/// f1(n) = sum over divisors m of n of sigma(gcd(m, n/m)).
pub fn gcd_sum_f1(n: u64) -> i64 {
    divisors(n).iter().map(|&m| sigma(gcd(m, n / m)) as i64).sum()
}

/// Modified Pillai value at a prime power, exact:
///   P*(p^a) = p^{-a} [ sum_{v<a} (p^{a-v} - p^{a-v-1}) p^{min(2v,a)} + p^a ]
/// where v runs over p-adic valuations of k in [1, p^a].
pub fn pillai_prime_power(p: u64, a: u32) -> Rational {
    if a == 0 {
        return Rational::one();
    }
    let pb = BigInt::from(p);
    let mut num = pb.pow(a); // the k = p^a term
    for v in 0..a {
        let count = pb.pow(a - v) - pb.pow(a - v - 1);
        num += count * pb.pow((2 * v).min(a));
    }
    BigRational::new(num, pb.pow(a))
}

/// P*(n) = (1/n) sum_{k=1}^{n} gcd(k^2, n), assembled multiplicatively.
pub fn pillai_modified(n: u64) -> Rational {
    factorize(n)
        .iter()
        .map(|&(p, a)| pillai_prime_power(p, a))
        .product()
}
