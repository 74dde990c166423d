use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("precision error: {0}")]
pub struct PrecisionError(pub String);

/// What is known about the p-adic valuation of a truncated value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Infinite,
    Exact(u32),
    AtLeast(u32),
}

/// An element of Z_p known modulo p^k, optionally together with an exact
/// integer lift (labels typed as integers in input files are exact).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPadic {
    p: u64,
    k: u32,
    value: BigInt,
    exact: Option<BigInt>,
}

fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// v_p of a nonzero integer.
pub fn vp_int(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    while (&y % &p).is_zero() {
        y /= &p;
        v += 1;
    }
    v
}

impl TruncatedPadic {
    /// An exact integer, remembered with its lift.
    pub fn from_int(p: u64, k: u32, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        TruncatedPadic {
            p,
            k,
            value: n.mod_floor(&modulus(p, k)),
            exact: Some(n),
        }
    }

    /// A residue mod p^k with no exact lift.
    pub fn from_residue(p: u64, k: u32, n: impl Into<BigInt>) -> Self {
        TruncatedPadic {
            p,
            k,
            value: n.into().mod_floor(&modulus(p, k)),
            exact: None,
        }
    }

    pub fn exact_zero(p: u64, k: u32) -> Self {
        Self::from_int(p, k, 0)
    }

    /// Zero at this precision, valuation unknown.
    pub fn unknown_zero(p: u64, k: u32) -> Self {
        Self::from_residue(p, k, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.k
    }
    pub fn residue(&self) -> &BigInt {
        &self.value
    }
    pub fn exact_value(&self) -> Option<&BigInt> {
        self.exact.as_ref()
    }
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
    pub fn is_exact_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(|e| e.is_zero())
    }

    /// Residue as a signed representative in (-p^k/2, p^k/2].
    pub fn balanced_residue(&self) -> BigInt {
        let m = modulus(self.p, self.k);
        let half: BigInt = &m / 2;
        if self.value > half {
            &self.value - &m
        } else {
            self.value.clone()
        }
    }

    /// The exact lift when known, otherwise the balanced residue.
    pub fn representative(&self) -> BigInt {
        self.exact.clone().unwrap_or_else(|| self.balanced_residue())
    }

    pub fn valuation(&self) -> Valuation {
        if let Some(e) = &self.exact {
            return if e.is_zero() {
                Valuation::Infinite
            } else {
                Valuation::Exact(vp_int(e, self.p))
            };
        }
        if self.value.is_zero() {
            Valuation::AtLeast(self.k)
        } else {
            Valuation::Exact(vp_int(&self.value, self.p))
        }
    }

    /// Exact valuation or an error; `None` stands for an exact zero.
    pub fn known_valuation(&self) -> Result<Option<u32>, PrecisionError> {
        match self.valuation() {
            Valuation::Infinite => Ok(None),
            Valuation::Exact(v) => Ok(Some(v)),
            Valuation::AtLeast(k) => Err(PrecisionError(format!(
                "value {} vanishes mod {}^{k}; valuation unknown",
                self, self.p
            ))),
        }
    }

    /// Decide vanishing; fails when the residue is 0 but no exact lift exists.
    pub fn is_zero(&self) -> Result<bool, PrecisionError> {
        match self.valuation() {
            Valuation::Infinite => Ok(true),
            Valuation::Exact(_) => Ok(false),
            Valuation::AtLeast(_) => Err(PrecisionError(format!(
                "cannot decide whether {} is zero at precision {}",
                self, self.k
            ))),
        }
    }

    /// Vanishing of the residue, ignoring exactness.
    pub fn residue_is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Same element at a lower precision.
    pub fn truncate(&self, k: u32) -> Self {
        assert!(k <= self.k);
        TruncatedPadic {
            p: self.p,
            k,
            value: self.value.mod_floor(&modulus(self.p, k)),
            exact: self.exact.clone(),
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.p, other.p, "prime mismatch");
        let k = self.k.min(other.k);
        let m = modulus(self.p, k);
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(f(a, b)),
            _ => None,
        };
        TruncatedPadic {
            p: self.p,
            k,
            value: f(&self.value, &other.value).mod_floor(&m),
            exact,
        }
    }

    /// Parse a label token: an integer, or `0~` for zero of unknown valuation.
    pub fn parse_token(p: u64, k: u32, tok: &str) -> Option<Self> {
        if tok == "0~" {
            return Some(Self::unknown_zero(p, k));
        }
        let n: BigInt = tok.parse().ok()?;
        Some(Self::from_int(p, k, n))
    }

    /// Token form used by the p-graph format.
    pub fn to_token(&self) -> String {
        match &self.exact {
            Some(e) => e.to_string(),
            None if self.value.is_zero() => "0~".to_string(),
            None => self.balanced_residue().to_string(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.representative().to_i64()
    }

    pub fn abs_exact(&self) -> Option<BigInt> {
        self.exact.as_ref().map(|e| e.abs())
    }

    pub fn one(p: u64, k: u32) -> Self {
        Self::from_int(p, k, BigInt::one())
    }
}

impl Add for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn add(self, o: &TruncatedPadic) -> TruncatedPadic {
        self.combine(o, |a, b| a + b)
    }
}

impl Sub for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn sub(self, o: &TruncatedPadic) -> TruncatedPadic {
        self.combine(o, |a, b| a - b)
    }
}

impl Mul for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn mul(self, o: &TruncatedPadic) -> TruncatedPadic {
        self.combine(o, |a, b| a * b)
    }
}

impl Neg for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn neg(self) -> TruncatedPadic {
        TruncatedPadic {
            p: self.p,
            k: self.k,
            value: (-&self.value).mod_floor(&modulus(self.p, self.k)),
            exact: self.exact.as_ref().map(|e| -e),
        }
    }
}

impl fmt::Display for TruncatedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

impl fmt::Debug for TruncatedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.to_token(), self.p, self.k)
    }
}
