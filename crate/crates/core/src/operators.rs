//! General fractional integrals and first-level derivatives acting on
//! series, with their n-fold versions and the projectors that collect the
//! initial-value terms.

use crate::error::{Error, Result};
use crate::kernels::KernelTriple;
use crate::series::GeneralizedPowerSeries as Series;

/// A kernel triple together with an optional global truncation cap.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    pub triple: KernelTriple,
    pub truncation_cap: f64,
}

/// Initial values picked up by a projector together with the projected
/// function.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub values: Vec<f64>,
    pub function: Series,
}

impl OperatorContext {
    pub fn new(triple: KernelTriple) -> Self {
        OperatorContext {
            triple,
            truncation_cap: f64::INFINITY,
        }
    }

    pub fn with_cap(triple: KernelTriple, truncation_cap: f64) -> Self {
        OperatorContext { triple, truncation_cap }
    }

    fn cap(&self, s: Series) -> Series {
        s.with_cap(self.truncation_cap)
    }

    fn require_function(f: &Series) -> Result<()> {
        if f.has_delta() {
            return Err(Error::InvalidParameter(
                "operand must be a function, not a distribution".into(),
            ));
        }
        Ok(())
    }

    /// `I_(kappa) f = kappa * f`.
    pub fn gfi(&self, f: &Series) -> Result<Series> {
        Self::require_function(f)?;
        Ok(self.cap(self.triple.kappa.convolve(f)))
    }

    /// `I_(kappa)^<n> f = kappa^<n> * f`; `n = 0` is the identity.
    pub fn gfi_nfold(&self, f: &Series, n: usize) -> Result<Series> {
        Self::require_function(f)?;
        Ok(self.cap(self.triple.kappa.power(n).convolve(f)))
    }

    /// `I_(k1) d/dt I_(k2) f`.
    pub fn gfd(&self, f: &Series) -> Result<Series> {
        Self::require_function(f)?;
        let inner = self.triple.k2.convolve(f);
        let derived = inner.differentiate()?;
        Ok(self.cap(self.triple.k1.convolve(&derived)))
    }

    /// n-fold sequential first-level derivative; `n = 0` is the identity.
    pub fn gfd_nfold(&self, f: &Series, n: usize) -> Result<Series> {
        let mut out = f.clone();
        for _ in 0..n {
            out = self.gfd(&out)?;
        }
        Ok(out)
    }

    /// `(I_(k2) f)(0)`: the `h_1` coefficient of `k2 * f`, zero if every
    /// exponent exceeds 1.
    pub fn initial_value(&self, f: &Series) -> Result<f64> {
        Self::require_function(f)?;
        let inner = self.triple.k2.convolve(f);
        inner.value_at_zero().ok_or(Error::DivergentAtZero {
            exponent: inner.lead_exponent(),
        })
    }

    /// `f - I_(kappa) D f = (I_(k2) f)(0) (kappa * k1)`.
    pub fn projector(&self, f: &Series) -> Result<Projection> {
        let value = self.initial_value(f)?;
        let function = self.triple.kappa.convolve(&self.triple.k1).scale(value);
        Ok(Projection {
            values: vec![value],
            function: self.cap(function),
        })
    }

    /// `f - I^<n> D^<n> f = sum_j (I_(k2) D^<j> f)(0) (kappa^<j+1> * k1)`.
    pub fn projector_nfold(&self, f: &Series, n: usize) -> Result<Projection> {
        let mut values = Vec::with_capacity(n);
        let mut function = Series::zero();
        let mut derived = f.clone();
        let base = self.triple.kappa.convolve(&self.triple.k1);
        let mut kernel_power = base.clone();
        for j in 0..n {
            if j > 0 {
                derived = self.gfd(&derived)?;
                kernel_power = kernel_power.convolve(&self.triple.kappa);
            }
            let value = self.initial_value(&derived)?;
            function = function.add(&kernel_power.scale(value));
            values.push(value);
        }
        Ok(Projection {
            values,
            function: self.cap(function),
        })
    }
}
