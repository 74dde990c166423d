use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term must be 1, got {0}")]
    ConstantTerm(BigRational),
    #[error("requested degree {requested} exceeds truncation {available}")]
    BeyondTruncation { requested: usize, available: usize },
}

/// Formal power series with rational coefficients, reliable through degree N.
/// A polynomial built with [`IntSeries::polynomial`] is exact in every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigRational>,
    exact: bool,
}

impl IntSeries {
    /// Truncated series with reliable coefficients c_0..c_N, N = len-1.
    pub fn truncated(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        IntSeries {
            coeffs,
            exact: false,
        }
    }

    /// Exact polynomial; coefficients past the end are zero.
    pub fn polynomial(coeffs: Vec<BigRational>) -> Self {
        IntSeries {
            coeffs,
            exact: true,
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Highest reliable degree (None for exact polynomials).
    pub fn truncation(&self) -> Option<usize> {
        if self.exact {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<BigRational, SeriesError> {
        match self.coeffs.get(n) {
            Some(c) => Ok(c.clone()),
            None if self.exact => Ok(BigRational::zero()),
            None => Err(SeriesError::BeyondTruncation {
                requested: n,
                available: self.coeffs.len() - 1,
            }),
        }
    }

    /// Integer coefficients, when all are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Product truncated at degree n.
    pub fn mul_to(&self, other: &IntSeries, n: usize) -> Result<IntSeries, SeriesError> {
        let a: Vec<BigRational> = (0..=n).map(|i| self.coeff(i)).collect::<Result<_, _>>()?;
        let b: Vec<BigRational> = (0..=n).map(|i| other.coeff(i)).collect::<Result<_, _>>()?;
        let c = (0..=n)
            .map(|i| (0..=i).fold(BigRational::zero(), |acc, j| acc + &a[j] * &b[i - j]))
            .collect();
        Ok(IntSeries::truncated(c))
    }
}

/// q with p*q = 1 through degree n, via q_m = -sum_{j=1..m} p_j q_{m-j}.
pub fn series_reciprocal(p: &IntSeries, n: usize) -> Result<IntSeries, SeriesError> {
    let c0 = p.coeff(0)?;
    if !c0.is_one() {
        return Err(SeriesError::ConstantTerm(c0));
    }
    let pc: Vec<BigRational> = (0..=n).map(|i| p.coeff(i)).collect::<Result<_, _>>()?;
    let mut q: Vec<BigRational> = Vec::with_capacity(n + 1);
    q.push(BigRational::one());
    for m in 1..=n {
        let s = (1..=m).fold(BigRational::zero(), |acc, j| acc + &pc[j] * &q[m - j]);
        q.push(-s);
    }
    Ok(IntSeries::truncated(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &IntSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .into_iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        let q = series_reciprocal(&IntSeries::from_ints(&[1, -3, 2]), 4).unwrap();
        assert_eq!(ints(&q), vec![1, 3, 7, 15, 31]);
        let q = series_reciprocal(&IntSeries::from_ints(&[1, -4, 4]), 4).unwrap();
        assert_eq!(ints(&q), vec![1, 4, 12, 32, 80]);
        let q = series_reciprocal(&IntSeries::from_ints(&[1]), 3).unwrap();
        assert_eq!(ints(&q), vec![1, 0, 0, 0]);
        assert!(series_reciprocal(&IntSeries::from_ints(&[2, 1]), 3).is_err());
    }

    #[test]
    fn truncation_is_respected() {
        let s = IntSeries::truncated(vec![BigRational::one(); 3]);
        assert!(series_reciprocal(&s, 5).is_err());
        assert!(series_reciprocal(&s, 2).is_ok());
    }

    proptest! {
        #[test]
        fn reciprocal_times_self_is_one(tail in prop::collection::vec(-5i64..5, 0..5), n in 0usize..8) {
            let mut c = vec![1i64];
            c.extend(tail);
            let p = IntSeries::from_ints(&c);
            let q = series_reciprocal(&p, n).unwrap();
            let prod = p.mul_to(&q, n).unwrap();
            let mut one = vec![0i64; n + 1];
            one[0] = 1;
            prop_assert_eq!(ints(&prod), one);
        }
    }
}
