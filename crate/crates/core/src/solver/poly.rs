use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real polynomial in the symbol `S`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// `sum |c_k| |z|^k`, the natural magnitude scale of `eval(z)`.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
    }
}

/// `P(S) / Q(S)` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalOperator {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
}

impl RationalOperator {
    /// Requires a nonzero denominator and a proper fraction.
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        let Some(dq) = denominator.degree() else {
            return Err(Error::InvalidParameter("denominator polynomial is zero".into()));
        };
        if let Some(dp) = numerator.degree() {
            if dp >= dq {
                return Err(Error::InvalidParameter(format!(
                    "rational operator must be proper: numerator degree {dp} >= denominator degree {dq}"
                )));
            }
        }
        Ok(RationalOperator { numerator, denominator })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_degree() {
        let p = Polynomial::new(vec![2.0, -3.0, 1.0, 0.0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(Complex64::new(1.0, 0.0)), Complex64::new(0.0, 0.0));
        assert_eq!(p.eval_derivative(Complex64::new(2.0, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(Polynomial::new(vec![0.0]).degree(), None);
    }

    #[test]
    fn proper_fraction_required() {
        let q = Polynomial::new(vec![1.0, 1.0]);
        assert!(RationalOperator::new(Polynomial::new(vec![1.0, 2.0]), q.clone()).is_err());
        assert!(RationalOperator::new(Polynomial::new(vec![1.0]), Polynomial::zero()).is_err());
        assert!(RationalOperator::new(Polynomial::zero(), q).is_ok());
    }
}
