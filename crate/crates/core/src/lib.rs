//! Operational calculus for first-level general fractional derivatives.
//!
//! Functions are represented as generalized power series: finite sums of
//! `c * h_mu(t)` with `h_mu(t) = t^(mu-1) / Gamma(mu)`, plus an optional
//! Dirac (convolution identity) part. Laplace convolution acts on these
//! exactly by adding exponents, so Sonin kernels, fractional integrals and
//! derivatives, convolution series and closed-form solutions of linear
//! fractional differential equations all reduce to exact series algebra.
//! A grid-based Volterra solver provides an independent numerical check.

// negated comparisons are used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants are quoted with all published digits
#![allow(clippy::excessive_precision)]
// convolution sums index two arrays at mirrored positions
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod kernels;
pub mod operators;
pub mod resolvent;
pub mod series;
pub mod solver;
pub mod special;
pub mod volterra;

pub use error::{Error, Result};
pub use kernels::{KernelFamily, KernelTriple, SeriesKernelSpec, SoninPair, TripleKind};
pub use operators::OperatorContext;
pub use resolvent::ResolventSeries;
pub use series::{Coeff, GeneralizedPowerSeries, Gps, Term};
pub use solver::{IvProblem, PartialFractionDecomposition, Pole, Polynomial, RationalOperator, SolutionExpression};
pub use special::MlParams;
pub use volterra::{SampledFunction, UniformGrid};
