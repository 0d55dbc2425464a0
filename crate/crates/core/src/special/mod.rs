//! Special functions used by kernels and closed forms: Gamma, the
//! two-parameter Mittag-Leffler function, the three-parameter (Prabhakar)
//! function and the `E^m_{alpha, alpha m}` family of convolution powers.
//!
//! All series are summed by plain Taylor expansion. That is adequate for
//! moderate arguments only; `|z| > 50` is refused.

pub mod gamma;

pub use gamma::{gamma, ln_gamma, pochhammer, power_fn, rgamma};

use crate::error::{Error, Result};
use crate::series::Coeff;

const TOL_ABS: f64 = 1e-15;
const TOL_REL: f64 = 1e-15;
const SMALL_RUN: usize = 16;
const TERM_CAP: usize = 10_000;
const MAX_ARGUMENT: f64 = 50.0;

/// Parameters of `sum_n (gamma)_n z^n / (n! Gamma(alpha n + beta))`.
///
/// `alpha` multiplies the summation index and `beta` is the offset, so
/// `gamma = 1` gives the Mittag-Leffler function `E_{alpha,beta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidParameter("beta and gamma must be finite".into()));
        }
        Ok(MlParams { alpha, beta, gamma })
    }

    pub fn two_parameter(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0)
    }
}

/// `E_{alpha,beta}(z)`.
pub fn mittag_leffler<C: Coeff>(alpha: f64, beta: f64, z: C) -> Result<C> {
    prabhakar(MlParams::two_parameter(alpha, beta)?, z)
}

/// `E^m_{alpha, alpha m}(z)`, the function behind convolution powers of the
/// power-law resolvent.
pub fn ml_power_type<C: Coeff>(m: u32, alpha: f64, z: C) -> Result<C> {
    if m == 0 {
        return Err(Error::InvalidParameter("power index m must be at least 1".into()));
    }
    prabhakar(MlParams::new(alpha, alpha * m as f64, m as f64)?, z)
}

/// Three-parameter Mittag-Leffler function
/// `sum_n (gamma)_n z^n / (n! Gamma(alpha n + beta))`.
pub fn prabhakar<C: Coeff>(p: MlParams, z: C) -> Result<C> {
    if !(p.alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {}",
            p.alpha
        )));
    }
    let zmag = z.magnitude();
    if !zmag.is_finite() || zmag > MAX_ARGUMENT {
        return Err(Error::NonConvergence(format!(
            "|z| = {zmag} is outside the Taylor-summation range |z| <= {MAX_ARGUMENT}"
        )));
    }

    // weight (gamma)_n z^n / n!, kept directly while it is representable and
    // in log form (magnitude, unit phase, sign) afterwards
    let mut weight = C::one();
    let mut log_mode: Option<(f64, C)> = None;
    let mut sum = C::zero();
    let mut max_term = 0.0f64;
    let mut small_run = 0;

    for n in 0..TERM_CAP {
        let arg = p.alpha * n as f64 + p.beta;
        let term = match log_mode {
            None => weight.scale(rgamma(arg)),
            Some((log_mag, phase)) => {
                if arg <= 0.0 {
                    phase.scale((log_mag).exp() * rgamma(arg))
                } else {
                    phase.scale((log_mag - ln_gamma(arg)).exp())
                }
            }
        };
        sum += term;
        let tmag = term.magnitude();
        if !tmag.is_finite() || !sum.is_finite() {
            return Err(Error::NonConvergence(format!(
                "series terms overflow at n = {n}; the argument is too large for Taylor summation"
            )));
        }
        max_term = max_term.max(tmag);
        if tmag <= TOL_ABS + TOL_REL * sum.magnitude() {
            small_run += 1;
            if small_run >= SMALL_RUN {
                check_cancellation(max_term, sum.magnitude())?;
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }

        // advance the weight to n + 1
        let factor = (p.gamma + n as f64) / (n as f64 + 1.0);
        match log_mode.as_mut() {
            None => {
                weight = (weight * z).scale(factor);
                if weight.magnitude() > 1e250 || arg > 160.0 {
                    let mag = weight.magnitude();
                    if mag > 0.0 {
                        log_mode = Some((mag.ln(), weight.scale(1.0 / mag)));
                    }
                }
            }
            Some((log_mag, phase)) => {
                if factor == 0.0 || zmag == 0.0 {
                    // terminating series
                    *phase = C::zero();
                } else {
                    *log_mag += zmag.ln() + factor.abs().ln();
                    *phase = (*phase * z).scale(factor.signum() / zmag);
                }
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "no convergence after {TERM_CAP} terms (last sum magnitude {:.3e})",
        sum.magnitude()
    )))
}

fn check_cancellation(max_term: f64, sum: f64) -> Result<()> {
    if max_term > 1.0 && max_term * f64::EPSILON > 1e-6 * sum {
        return Err(Error::NonConvergence(format!(
            "catastrophic cancellation: largest term {max_term:.3e} against sum {sum:.3e}"
        )));
    }
    Ok(())
}
