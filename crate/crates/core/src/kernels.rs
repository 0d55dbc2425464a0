//! Sonin kernel pairs and first-level kernel triples.
//!
//! Kernels of the series class `kappa(t) = t^(alpha-1) * sum_n a_n (lambda t^beta)^n`
//! map onto series with exponents `alpha + beta n` and coefficients
//! `A_n lambda^n` where `A_n = a_n Gamma(alpha + beta n)`. In these scaled
//! coefficients the Sonin condition `kappa * k = 1` says that `B` is the
//! power-series reciprocal of `A`, which is how the associated kernel is
//! solved for.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{GeneralizedPowerSeries as Series, EXPONENT_TOL};
use crate::special::{gamma, ln_gamma, pochhammer, rgamma};

/// Default number of series terms for kernel construction and validation.
pub const DEFAULT_KERNEL_ORDER: usize = 32;

/// Residual tolerance for `kappa * k = 1` and `kappa * k1 * k2 = 1`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Series-class kernel `t^(alpha-1) * kappa_1(lambda t^beta)` with
/// `kappa_1(x) = sum_n a_n x^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesKernelSpec {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub a_coeffs: Vec<f64>,
    /// `a_coeffs` lists the whole analytic part (a polynomial) rather than
    /// a truncation of an infinite series.
    pub complete: bool,
}

impl SeriesKernelSpec {
    pub fn new(alpha: f64, beta: f64, lambda: f64, a_coeffs: Vec<f64>, complete: bool) -> Result<Self> {
        let spec = SeriesKernelSpec {
            alpha,
            beta,
            lambda,
            a_coeffs,
            complete,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if !self.lambda.is_finite() || self.a_coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("lambda and a_coeffs must be finite".into()));
        }
        match self.a_coeffs.first() {
            Some(a0) if *a0 != 0.0 => Ok(()),
            _ => Err(Error::DegenerateLeadingCoefficient),
        }
    }

    fn scaled(&self, n: usize, shift: f64) -> f64 {
        gamma_at(self.beta * n as f64 + shift)
    }

    /// The kernel itself as a series, with at most `n_terms` terms.
    pub fn kernel_series(&self, n_terms: usize) -> Series {
        let count = self.a_coeffs.len().min(n_terms);
        let cap = if self.complete && self.a_coeffs.len() <= n_terms {
            f64::INFINITY
        } else {
            self.alpha + self.beta * count as f64
        };
        let terms = (0..count).map(|n| {
            let mu = self.alpha + self.beta * n as f64;
            (
                self.a_coeffs[n] * self.lambda.powi(n as i32) * self.scaled(n, self.alpha),
                mu,
            )
        });
        Series::from_terms(0.0, terms, cap).expect("validated kernel spec")
    }
}

fn gamma_at(x: f64) -> f64 {
    if x < 170.0 {
        gamma(x)
    } else {
        ln_gamma(x).exp()
    }
}

/// Coefficients `b_0..b_{n_terms-1}` of the associated kernel
/// `k(t) = t^(-alpha) sum_n b_n (lambda t^beta)^n`, by forward substitution
/// in the triangular system
/// `Gamma(alpha) Gamma(1-alpha) a_0 b_0 = 1`,
/// `sum_{n<=N} Gamma(beta n + alpha) Gamma(beta (N-n) + 1 - alpha) a_n b_{N-n} = 0`.
pub fn associated_coefficients(spec: &SeriesKernelSpec, n_terms: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let a_scaled: Vec<f64> = (0..n_terms)
        .map(|n| spec.a_coeffs.get(n).map_or(0.0, |a| a * spec.scaled(n, spec.alpha)))
        .collect();
    let mut b_scaled = vec![0.0; n_terms];
    for order in 0..n_terms {
        let rhs = if order == 0 { 1.0 } else { 0.0 };
        let acc: f64 = (1..=order).map(|n| a_scaled[n] * b_scaled[order - n]).sum();
        b_scaled[order] = (rhs - acc) / a_scaled[0];
    }
    Ok(b_scaled
        .iter()
        .enumerate()
        .map(|(n, b)| b / spec.scaled(n, 1.0 - spec.alpha))
        .collect())
}

/// The Sonin kernel associated to `spec`, truncated to `n_terms` terms, as
/// a series with exponents `1 - alpha + beta n`.
pub fn solve_associated_kernel(spec: &SeriesKernelSpec, n_terms: usize) -> Result<Series> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be at least 1".into()));
    }
    let b = associated_coefficients(spec, n_terms)?;
    let shift = 1.0 - spec.alpha;
    let terms = b.iter().enumerate().map(|(n, bn)| {
        (
            bn * spec.lambda.powi(n as i32) * spec.scaled(n, shift),
            shift + spec.beta * n as f64,
        )
    });
    Series::from_terms(0.0, terms, shift + spec.beta * n_terms as f64)
}

/// Catalog families of Sonin pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelFamily {
    /// `(h_alpha, h_{1-alpha})`.
    PowerLaw { alpha: f64 },
    /// `t^(alpha-1) E^gamma_{beta,alpha}(-lambda t^beta)` and its associate.
    Prabhakar {
        alpha: f64,
        beta: f64,
        gamma: f64,
        lambda: f64,
    },
    /// `(sqrt t)^(alpha-1) J_{alpha-1}(2 sqrt t)` and `(sqrt t)^(-alpha) I_{-alpha}(2 sqrt t)`.
    Bessel { alpha: f64 },
    /// A user-supplied analytic part; the associate comes from the triangular system.
    Series {
        alpha: f64,
        #[serde(default = "one")]
        beta: f64,
        #[serde(default = "one")]
        lambda: f64,
        a_coeffs: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

impl KernelFamily {
    pub fn label(&self) -> String {
        match self {
            KernelFamily::PowerLaw { alpha } => format!("power-law(alpha={alpha})"),
            KernelFamily::Prabhakar {
                alpha,
                beta,
                gamma,
                lambda,
            } => {
                format!("prabhakar(alpha={alpha}, beta={beta}, gamma={gamma}, lambda={lambda})")
            }
            KernelFamily::Bessel { alpha } => format!("bessel(alpha={alpha})"),
            KernelFamily::Series {
                alpha,
                beta,
                lambda,
                a_coeffs,
            } => format!(
                "series(alpha={alpha}, beta={beta}, lambda={lambda}, {} coeffs)",
                a_coeffs.len()
            ),
        }
    }

    /// Kernel spec of `kappa` with `n_terms` analytic coefficients.
    pub fn kappa_spec(&self, n_terms: usize) -> Result<SeriesKernelSpec> {
        match *self {
            KernelFamily::PowerLaw { alpha } => {
                check_alpha(alpha)?;
                SeriesKernelSpec::new(alpha, 1.0, 1.0, vec![rgamma(alpha)], true)
            }
            KernelFamily::Prabhakar {
                alpha,
                beta,
                gamma,
                lambda,
            } => {
                check_alpha(alpha)?;
                if !(beta > 0.0) {
                    return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
                }
                let a = (0..n_terms)
                    .map(|n| sign(n) * pochhammer(gamma, n) * rgamma(n as f64 + 1.0) * rgamma(beta * n as f64 + alpha))
                    .collect();
                SeriesKernelSpec::new(alpha, beta, lambda, a, false)
            }
            KernelFamily::Bessel { alpha } => {
                check_alpha(alpha)?;
                let a = (0..n_terms)
                    .map(|m| sign(m) * rgamma(m as f64 + 1.0) * rgamma(m as f64 + alpha))
                    .collect();
                SeriesKernelSpec::new(alpha, 1.0, 1.0, a, false)
            }
            KernelFamily::Series {
                alpha,
                beta,
                lambda,
                ref a_coeffs,
            } => SeriesKernelSpec::new(alpha, beta, lambda, a_coeffs.clone(), true),
        }
    }

    /// Closed-form coefficients of the associated kernel where the family
    /// has one (everything except user series).
    pub fn closed_form_associate(&self, n_terms: usize) -> Option<Vec<f64>> {
        match *self {
            KernelFamily::PowerLaw { alpha } => {
                let mut b = vec![0.0; n_terms];
                if n_terms > 0 {
                    b[0] = rgamma(1.0 - alpha);
                }
                Some(b)
            }
            KernelFamily::Prabhakar { alpha, beta, gamma, .. } => Some(
                (0..n_terms)
                    .map(|n| {
                        sign(n) * pochhammer(-gamma, n) * rgamma(n as f64 + 1.0) * rgamma(beta * n as f64 + 1.0 - alpha)
                    })
                    .collect(),
            ),
            KernelFamily::Bessel { alpha } => Some(
                (0..n_terms)
                    .map(|m| rgamma(m as f64 + 1.0) * rgamma(m as f64 + 1.0 - alpha))
                    .collect(),
            ),
            KernelFamily::Series { .. } => None,
        }
    }
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// A Sonin pair `(kappa, k)` with `kappa * k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoninPair {
    pub kappa: Series,
    pub k: Series,
    pub spec: SeriesKernelSpec,
    pub family: KernelFamily,
    pub order: usize,
}

impl SoninPair {
    /// `max(|c_1 - 1|, |other coefficients|)` of `kappa * k`.
    pub fn residual(&self) -> f64 {
        unit_residual(&self.kappa.convolve(&self.k))
    }

    /// Leading exponent of `kappa`.
    pub fn alpha(&self) -> f64 {
        self.spec.alpha
    }
}

/// Distance of a series from the constant function 1 (`h_1`).
pub fn unit_residual(s: &Series) -> f64 {
    s.sub(&Series::h(1.0)).max_abs_coeff()
}

/// Build and validate a catalog pair at the given series order.
pub fn make_pair(family: &KernelFamily, order: usize) -> Result<SoninPair> {
    if order == 0 {
        return Err(Error::InvalidParameter("series order must be at least 1".into()));
    }
    let spec = family.kappa_spec(order)?;
    let (kappa, k) = match *family {
        KernelFamily::PowerLaw { alpha } => (Series::h(alpha), Series::h(1.0 - alpha)),
        KernelFamily::Bessel { alpha } => {
            // the associate straight from the I_{-alpha} series; the
            // triangular system is only used to cross-check it
            let b = family.closed_form_associate(order).expect("closed form");
            let assoc = SeriesKernelSpec::new(1.0 - alpha, 1.0, 1.0, b, false)?;
            (spec.kernel_series(order), assoc.kernel_series(order))
        }
        KernelFamily::Prabhakar { .. } | KernelFamily::Series { .. } => {
            (spec.kernel_series(order), solve_associated_kernel(&spec, order)?)
        }
    };
    let pair = SoninPair {
        kappa,
        k,
        spec,
        family: family.clone(),
        order,
    };
    let residual = pair.residual();
    if !(residual < RESIDUAL_TOL) {
        return Err(Error::PairResidualTooLarge {
            residual,
            tolerance: RESIDUAL_TOL,
        });
    }
    Ok(pair)
}

/// Ways of building a triple `(kappa, k1, k2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TripleKind {
    /// `(h_alpha, h_gamma, h_{1-alpha-gamma})`, the Hilfer-type triple.
    HilferPower { alpha: f64, gamma: f64 },
    /// `(kappa, I, k)`: the Riemann-Liouville type derivative.
    RlType { pair: KernelFamily },
    /// `(kappa, k, I)`: the regularized (Caputo type) derivative.
    CaputoType { pair: KernelFamily },
    /// `(kappa, h_gamma, k2)` with `k2` the associate of `kappa * h_gamma`.
    Split { pair: KernelFamily, gamma: f64 },
}

/// A validated triple with `kappa * k1 * k2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTriple {
    pub kappa: Series,
    pub k1: Series,
    pub k2: Series,
    pub kind: TripleKind,
    pub label: String,
}

impl KernelTriple {
    pub fn residual(&self) -> f64 {
        unit_residual(&self.kappa.convolve(&self.k1).convolve(&self.k2))
    }

    /// `kappa` is the Sonin associate of `k1 * k2`.
    pub fn associate_residual(&self) -> f64 {
        unit_residual(&self.kappa.convolve(&self.k1.convolve(&self.k2)))
    }

    /// Leading exponent of `kappa`; each derivative lowers exponents by this.
    pub fn alpha(&self) -> f64 {
        self.kappa.lead_exponent()
    }

    pub fn is_rl_type(&self) -> bool {
        self.k1 == Series::identity()
    }

    pub fn is_caputo_type(&self) -> bool {
        self.k2 == Series::identity()
    }

    /// Build from explicit kernels, validating the residual.
    pub fn from_kernels(kappa: Series, k1: Series, k2: Series, kind: TripleKind, label: String) -> Result<Self> {
        if kappa.has_delta() {
            return Err(Error::InvalidParameter(
                "kappa must be a function, not a distribution".into(),
            ));
        }
        let triple = KernelTriple {
            kappa,
            k1,
            k2,
            kind,
            label,
        };
        let residual = triple.residual();
        if !(residual < RESIDUAL_TOL) {
            return Err(Error::TripleResidualTooLarge {
                residual,
                tolerance: RESIDUAL_TOL,
            });
        }
        Ok(triple)
    }
}

/// Build and validate a triple at the given series order.
pub fn make_triple(kind: &TripleKind, order: usize) -> Result<KernelTriple> {
    match kind {
        TripleKind::HilferPower { alpha, gamma } => {
            check_alpha(*alpha)?;
            check_split_gamma(*alpha, *gamma)?;
            KernelTriple::from_kernels(
                Series::h(*alpha),
                Series::h(*gamma),
                Series::h(1.0 - alpha - gamma),
                kind.clone(),
                format!("hilfer(alpha={alpha}, gamma={gamma})"),
            )
        }
        TripleKind::RlType { pair } => {
            let p = make_pair(pair, order)?;
            KernelTriple::from_kernels(
                p.kappa,
                Series::identity(),
                p.k,
                kind.clone(),
                format!("rl-type {}", pair.label()),
            )
        }
        TripleKind::CaputoType { pair } => {
            let p = make_pair(pair, order)?;
            KernelTriple::from_kernels(
                p.kappa,
                p.k,
                Series::identity(),
                kind.clone(),
                format!("caputo-type {}", pair.label()),
            )
        }
        TripleKind::Split { pair, gamma } => {
            let p = make_pair(pair, order)?;
            check_split_gamma(p.alpha(), *gamma)?;
            // kappa * h_gamma is again of series class, with alpha shifted by gamma
            let shifted = SeriesKernelSpec {
                alpha: p.spec.alpha + gamma,
                a_coeffs: p
                    .spec
                    .a_coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, a)| {
                        let base = p.spec.beta * n as f64;
                        a * (ln_gamma(base + p.spec.alpha) - ln_gamma(base + p.spec.alpha + gamma)).exp()
                    })
                    .collect(),
                ..p.spec.clone()
            };
            let k2 = match pair {
                KernelFamily::PowerLaw { .. } => Series::h(1.0 - p.alpha() - gamma),
                _ => solve_associated_kernel(&shifted, order)?,
            };
            KernelTriple::from_kernels(
                p.kappa,
                Series::h(*gamma),
                k2,
                kind.clone(),
                format!("split(gamma={gamma}) {}", pair.label()),
            )
        }
    }
}

fn check_split_gamma(alpha: f64, gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 - alpha - EXPONENT_TOL {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1 - alpha) = (0, {}), got {gamma}",
            1.0 - alpha
        )))
    }
}
