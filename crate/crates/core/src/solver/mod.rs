//! Closed-form solution of linear fractional differential equations with
//! first-level derivatives:
//!
//! `sum_n b_n D^<n> y = f`, `(I_(k2) D^<j> y)(0) = c_j`.
//!
//! In the operational calculus the equation becomes
//! `P_m(S) y = f + Q_{m-1}(S) k1`, so `y = f * G + k1 * U` with
//! `G = 1/P_m(S)` and `U = Q_{m-1}(S)/P_m(S)`. Each partial fraction
//! `(S - lambda)^(-j)` is the convolution series `l^<j>_{kappa,lambda}`.

pub mod document;
pub mod pfd;
pub mod poly;

pub use document::{ProblemDocument, SolutionDocument};
pub use pfd::{partial_fractions, PartialFractionDecomposition, Pole};
pub use poly::{Polynomial, RationalOperator};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::KernelTriple;
use crate::resolvent::resolvent;
use crate::series::{ComplexSeries, GeneralizedPowerSeries as Series};

/// Imaginary parts left after assembling conjugate poles must stay below this.
pub const IMAG_TOL: f64 = 1e-9;

/// Default relative size of the last retained band above which evaluation
/// is refused.
pub const TAIL_TOL: f64 = 1e-6;

/// Initial-value problem `sum_n b_n D^<n> y = f` with initial values `c_j`.
#[derive(Debug, Clone)]
pub struct IvProblem {
    pub triple: KernelTriple,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub forcing: Series,
}

impl IvProblem {
    pub fn new(triple: KernelTriple, b: Vec<f64>, c: Vec<f64>, forcing: Series) -> Result<Self> {
        if b.len() < 2 {
            return Err(Error::InvalidParameter(
                "equation needs at least b_0 and b_1 (degree m >= 1)".into(),
            ));
        }
        if b.iter().chain(&c).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficients and initial values must be finite".into(),
            ));
        }
        let m = b.len() - 1;
        if b[m] == 0.0 {
            return Err(Error::InvalidParameter(
                "leading coefficient b_m must be nonzero".into(),
            ));
        }
        if c.len() != m {
            return Err(Error::InvalidParameter(format!(
                "expected {m} initial values for an equation of degree {m}, got {}",
                c.len()
            )));
        }
        if forcing.has_delta() {
            return Err(Error::InvalidParameter(
                "forcing must be a function, not a distribution".into(),
            ));
        }
        Ok(IvProblem { triple, b, c, forcing })
    }

    /// Relaxation problem `D y - lambda y = f`, `(I_(k2) y)(0) = y0`.
    pub fn relaxation(triple: KernelTriple, lambda: f64, y0: f64, forcing: Series) -> Result<Self> {
        Self::new(triple, vec![-lambda, 1.0], vec![y0], forcing)
    }

    pub fn degree(&self) -> usize {
        self.b.len() - 1
    }
}

/// `y = f * G + k1 * U`, with the materialized solution cached.
#[derive(Debug, Clone)]
pub struct SolutionExpression {
    pub g: Series,
    pub u: Series,
    pub forcing: Series,
    pub k1: Series,
    /// Width of the last retained exponent band (the lead exponent of kappa).
    pub band: f64,
    pub g_decomposition: Option<PartialFractionDecomposition>,
    pub u_decomposition: Option<PartialFractionDecomposition>,
    pub tail_tolerance: f64,
    solution: Series,
}

impl SolutionExpression {
    pub fn new(g: Series, u: Series, forcing: Series, k1: Series, band: f64) -> Self {
        let solution = forcing.convolve(&g).add(&k1.convolve(&u));
        SolutionExpression {
            g,
            u,
            forcing,
            k1,
            band,
            g_decomposition: None,
            u_decomposition: None,
            tail_tolerance: TAIL_TOL,
            solution,
        }
    }

    /// The solution as a series.
    pub fn series(&self) -> &Series {
        &self.solution
    }

    /// Relative size of the last retained band at `t`.
    pub fn tail_ratio(&self, t: f64) -> f64 {
        let scale = self.solution.abs_sum(t);
        if scale == 0.0 {
            0.0
        } else {
            self.solution.band_magnitude(t, self.band) / scale
        }
    }

    /// `y(t)`, refused when the truncated tail is not negligible at `t`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let value = self.solution.evaluate(t)?;
        let relative = self.tail_ratio(t);
        if relative > self.tail_tolerance {
            return Err(Error::TruncationExceeded { t, relative });
        }
        Ok(value)
    }
}

/// `D y = f`, `(I_(k2) y)(0) = y0`: `y = kappa * f + y0 (kappa * k1)`.
pub fn solve_basic(triple: &KernelTriple, y0: f64, forcing: &Series) -> Result<SolutionExpression> {
    if forcing.has_delta() {
        return Err(Error::InvalidParameter(
            "forcing must be a function, not a distribution".into(),
        ));
    }
    Ok(SolutionExpression::new(
        triple.kappa.clone(),
        triple.kappa.scale(y0),
        forcing.clone(),
        triple.k1.clone(),
        triple.alpha(),
    ))
}

/// `D y - lambda y = f`: `y = l * f + y0 (l * k1)`.
pub fn solve_relaxation(
    triple: &KernelTriple,
    lambda: f64,
    y0: f64,
    forcing: &Series,
    order: usize,
) -> Result<SolutionExpression> {
    if forcing.has_delta() {
        return Err(Error::InvalidParameter(
            "forcing must be a function, not a distribution".into(),
        ));
    }
    let l = resolvent(&triple.kappa, lambda, order)?.series;
    Ok(SolutionExpression::new(
        l.clone(),
        l.scale(y0),
        forcing.clone(),
        triple.k1.clone(),
        triple.alpha(),
    ))
}

/// `P_m(S) = sum b_n S^n` and `Q_{m-1}(S) = sum_{n>=1} b_n sum_{j<n} c_j S^(n-j-1)`.
pub fn build_rational(problem: &IvProblem) -> (Polynomial, Polynomial) {
    let m = problem.degree();
    let mut q = vec![0.0; m];
    for n in 1..=m {
        for j in 0..n {
            q[n - j - 1] += problem.b[n] * problem.c[j];
        }
    }
    (Polynomial::new(problem.b.clone()), Polynomial::new(q))
}

/// `sum_i sum_j a_ij l^<j>_{kappa,lambda_i}` assembled to a real series.
pub fn materialize(pfd: &PartialFractionDecomposition, kappa: &Series, order: usize) -> Result<Series> {
    let kc = kappa.to_complex();
    let mut acc = ComplexSeries::zero();
    for (pole, res) in pfd.poles.iter().zip(&pfd.residues) {
        let l = resolvent(&kc, pole.value, order)?.series;
        let mut power = l.clone();
        for (j, a) in res.iter().enumerate() {
            if j > 0 {
                power = power.convolve(&l);
            }
            if *a != Complex64::new(0.0, 0.0) {
                acc = acc.add(&power.scale(*a));
            }
        }
    }
    acc.real_part(IMAG_TOL)
}

/// Closed-form solution of the multi-term problem.
pub fn solve_multiterm(problem: &IvProblem, order: usize) -> Result<SolutionExpression> {
    let (p, q) = build_rational(problem);
    let kappa = &problem.triple.kappa;
    let g_pfd = partial_fractions(&RationalOperator::new(Polynomial::new(vec![1.0]), p.clone())?)?;
    let g = materialize(&g_pfd, kappa, order)?;
    let (u, u_pfd) = if q.is_zero() {
        (Series::zero(), None)
    } else {
        let pfd = partial_fractions(&RationalOperator::new(q, p)?)?;
        (materialize(&pfd, kappa, order)?, Some(pfd))
    };
    let mut sol = SolutionExpression::new(
        g,
        u,
        problem.forcing.clone(),
        problem.triple.k1.clone(),
        problem.triple.alpha(),
    );
    sol.g_decomposition = Some(g_pfd);
    sol.u_decomposition = u_pfd;
    Ok(sol)
}

/// Closed form of any problem: first-order equations go through the
/// resolvent directly, higher orders through partial fractions.
pub fn solve_problem(problem: &IvProblem, order: usize) -> Result<SolutionExpression> {
    if problem.degree() == 1 {
        let (b0, b1) = (problem.b[0], problem.b[1]);
        return solve_relaxation(
            &problem.triple,
            -b0 / b1,
            problem.c[0],
            &problem.forcing.scale(1.0 / b1),
            order,
        );
    }
    solve_multiterm(problem, order)
}
