//! Convolution series `l_{kappa,lambda} = sum_{n>=1} lambda^(n-1) kappa^<n>`,
//! the function that realizes `(S_kappa - lambda)^(-1)`.

use crate::error::{Error, Result};
use crate::kernels::SoninPair;
use crate::series::{Coeff, Gps};

/// Materialized resolvent series.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventSeries<C: Coeff = f64> {
    pub kernel: Gps<C>,
    pub lambda: C,
    pub order: usize,
    pub series: Gps<C>,
}

/// Sum the first `order` convolution powers. The result is capped at
/// `(order + 1) * lead(kappa)`, the first exponent the omitted powers reach,
/// and inherits any cap of `kappa` itself.
pub fn resolvent<C: Coeff>(kappa: &Gps<C>, lambda: C, order: usize) -> Result<ResolventSeries<C>> {
    if kappa.has_delta() {
        return Err(Error::InvalidParameter(
            "resolvent kernel must not have a Dirac part".into(),
        ));
    }
    if order == 0 {
        return Err(Error::InvalidParameter("resolvent order must be at least 1".into()));
    }
    let lead = kappa.lead_exponent();
    if !lead.is_finite() || lambda == C::zero() {
        // only the n = 1 term survives
        return Ok(ResolventSeries {
            kernel: kappa.clone(),
            lambda,
            order,
            series: kappa.clone(),
        });
    }
    let cap = (order as f64 + 1.0) * lead;
    let base = kappa.with_cap(cap);
    let mut power = base.clone();
    let mut sum = base.clone();
    let mut weight = C::one();
    for _ in 2..=order {
        weight *= lambda;
        power = power.convolve(&base);
        if power.lead_exponent() >= sum.cap() {
            break;
        }
        sum = sum.add(&power.scale(weight));
    }
    // the omitted powers start at (order + 1) * lead: mark the tail as dropped
    let series = mark_tail(sum.with_cap(cap));
    Ok(ResolventSeries {
        kernel: kappa.clone(),
        lambda,
        order,
        series,
    })
}

fn mark_tail<C: Coeff>(s: Gps<C>) -> Gps<C> {
    if s.cap().is_finite() && !s.is_truncated() {
        Gps::from_raw(s.delta(), s.terms().to_vec(), s.cap(), true)
    } else {
        s
    }
}

impl<C: Coeff> ResolventSeries<C> {
    /// `l^<m>`, realizing `(S_kappa - lambda)^(-m)`.
    pub fn power(&self, m: usize) -> Result<Gps<C>> {
        if m == 0 {
            return Err(Error::InvalidParameter("resolvent power must be at least 1".into()));
        }
        Ok(self.series.power(m))
    }

    /// Size of the last retained exponent band at `t`, a proxy for the
    /// truncation error there.
    pub fn tail_estimate(&self, t: f64) -> f64 {
        self.series.band_magnitude(t, self.kernel.lead_exponent())
    }

    /// `l - kappa - lambda (kappa * l)`, which vanishes on every determined
    /// exponent.
    pub fn identity_defect(&self) -> Gps<C> {
        let rhs = self.kernel.add(&self.kernel.convolve(&self.series).scale(self.lambda));
        self.series.sub(&rhs)
    }
}

/// `L_{kappa,lambda} = l_{kappa,lambda} * k`, equal to `1 + lambda * (...)`.
pub fn capital_l(pair: &SoninPair, lambda: f64, order: usize) -> Result<Gps<f64>> {
    Ok(resolvent(&pair.kappa, lambda, order)?.series.convolve(&pair.k))
}
