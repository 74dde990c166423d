//! Exact arithmetic: dense and sparse linear algebra over F_p, truncated
//! p-adic integers, Smith normal form and truncated power series.

pub mod fp;
pub mod padic;
pub mod series;
pub mod snf;
pub mod sparse;

pub use fp::{FpMatrix, Rref};
pub use padic::{PrecisionError, TruncatedPadic, Valuation};
pub use series::{series_reciprocal, IntSeries, SeriesError};
pub use snf::smith_normal_form;
pub use sparse::{SparseEchelon, SparseVec};

/// Deterministic trial division; inputs here are small primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo the prime p.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Reduce a signed integer into [0, m).
#[inline]
pub fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}
