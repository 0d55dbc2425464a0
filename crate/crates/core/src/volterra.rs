//! Grid-based oracle: initial-value problems rewritten as second-kind
//! Volterra equations and time-stepped with product integration.
//!
//! Applying `I_(kappa)^<m>` to `sum_n b_n D^<n> y = f` and using the n-fold
//! second fundamental theorem gives
//!
//! `y + K * y = r`, `K = (1/b_m) sum_{n<m} b_n kappa^<m-n>`,
//! `r = (1/b_m) [kappa^<m> * f + sum_{n>=1} b_n sum_{j<n} c_j kappa^<m-n+j+1> * k1]`.
//!
//! The kernel and right-hand side are series, so their singular moments are
//! integrated exactly against piecewise-linear data. The leading Neumann
//! terms `r, -K*r, ...` are split off exactly until the remaining data
//! behaves like `t^p` with `p >= 1` near 0; only that remainder is stepped on
//! the grid. This handles right-hand sides unbounded at 0 (Riemann-Liouville
//! type problems) and keeps the product rule second-order accurate.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::series::{GeneralizedPowerSeries as Series, EXPONENT_TOL};
use crate::solver::{IvProblem, SolutionExpression};
use crate::special::{gamma, ln_gamma, power_fn};

/// Minimum number of steps for a grid.
pub const MIN_STEPS: usize = 8;

const MAX_SPLIT_TERMS: usize = 1000;

/// Leading exponent the stepped data must reach.
const SPLIT_THRESHOLD: f64 = 2.0;

/// Uniform grid `t_i = i * t_end / n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub t_end: f64,
    pub n_steps: usize,
}

impl UniformGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
        }
        if n_steps < MIN_STEPS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_STEPS} steps, got {n_steps}"
            )));
        }
        Ok(UniformGrid { t_end, n_steps })
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.t_end * i as f64 / self.n_steps as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|i| self.node(i))
    }
}

/// Values at the grid nodes. A function unbounded at 0 has `NaN` at `t_0`
/// and records its leading exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
    pub singular_exponent: Option<f64>,
}

impl SampledFunction {
    pub fn is_singular_at_zero(&self) -> bool {
        self.singular_exponent.is_some()
    }

    /// `t,y` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,y\n");
        for (t, y) in self.grid.nodes().zip(&self.values) {
            let _ = writeln!(out, "{t:.16e},{y:.16e}");
        }
        out
    }

    /// Max relative error against `reference` over nodes `t >= t_min`.
    pub fn max_rel_error(&self, reference: impl Fn(f64) -> f64, t_min: f64) -> f64 {
        self.grid
            .nodes()
            .zip(&self.values)
            .filter(|(t, _)| *t >= t_min && *t > 0.0)
            .map(|(t, y)| {
                let r = reference(t);
                ((y - r) / r).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Max absolute error against `reference` over nodes `t >= t_min`.
    pub fn max_abs_error(&self, reference: impl Fn(f64) -> f64, t_min: f64) -> f64 {
        self.grid
            .nodes()
            .zip(&self.values)
            .filter(|(t, _)| *t >= t_min && *t > 0.0)
            .map(|(t, y)| (y - reference(t)).abs())
            .fold(0.0, f64::max)
    }
}

/// Sample a series at the grid nodes.
pub fn sample(f: &Series, grid: UniformGrid) -> Result<SampledFunction> {
    if f.has_delta() {
        return Err(Error::EvalOfDistribution(f.delta()));
    }
    let mut values = Vec::with_capacity(grid.n_steps + 1);
    let (v0, singular_exponent) = match f.value_at_zero() {
        Some(v) => (v, None),
        None => (f64::NAN, Some(f.lead_exponent())),
    };
    values.push(v0);
    for i in 1..=grid.n_steps {
        values.push(f.evaluate(grid.node(i))?);
    }
    Ok(SampledFunction {
        grid,
        values,
        singular_exponent,
    })
}

/// Sample a closed-form solution, refusing nodes where its truncation tail
/// is not negligible.
pub fn sample_solution(solution: &SolutionExpression, grid: UniformGrid) -> Result<SampledFunction> {
    let series = solution.series();
    let (v0, singular_exponent) = match series.value_at_zero() {
        Some(v) => (v, None),
        None => (f64::NAN, Some(series.lead_exponent())),
    };
    let mut values = Vec::with_capacity(grid.n_steps + 1);
    values.push(v0);
    for i in 1..=grid.n_steps {
        values.push(solution.evaluate(grid.node(i))?);
    }
    Ok(SampledFunction {
        grid,
        values,
        singular_exponent,
    })
}

/// `h^mu k^(mu+1) / Gamma(mu + 2)`, overflow-safe.
fn scaled_power(h: f64, mu: f64, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    if mu < 150.0 {
        h.powf(mu) * k.powf(mu + 1.0) / gamma(mu + 2.0)
    } else {
        (mu * h.ln() + (mu + 1.0) * k.ln() - ln_gamma(mu + 2.0)).exp()
    }
}

/// Product-integration weights of a kernel on a grid: `(K*g)(t_n)` is
/// `w0[n] g_0 + sum_{0<j<n} w[n-j] g_j + w[0] g_n` for piecewise-linear `g`.
#[derive(Debug, Clone)]
struct ProductWeights {
    w: Vec<f64>,
    w0: Vec<f64>,
    delta: f64,
}

impl ProductWeights {
    fn new(kernel: &Series, grid: UniformGrid) -> Self {
        let n = grid.n_steps;
        let h = grid.step();
        let mut w = vec![0.0; n + 1];
        let mut w0 = vec![0.0; n + 1];
        for term in kernel.terms() {
            let (c, mu) = (term.coeff, term.exponent);
            let e: Vec<f64> = (0..=n + 1).map(|k| scaled_power(h, mu, k as f64)).collect();
            let unit = scaled_power(h, mu, 1.0);
            w[0] += c * unit;
            for k in 1..n {
                w[k] += c * ((e[k + 1] - e[k]) - (e[k] - e[k - 1]));
            }
            for m in 1..=n {
                // (m-1)^(mu+1) - (m - mu - 1) m^mu
                let tail = if mu < 150.0 {
                    h.powf(mu) * (m as f64).powf(mu) * (m as f64 - mu - 1.0) / gamma(mu + 2.0)
                } else {
                    let mag = (mu * h.ln() + mu * (m as f64).ln() - ln_gamma(mu + 2.0)).exp();
                    mag * (m as f64 - mu - 1.0)
                };
                w0[m] += c * (e[m - 1] - tail);
            }
        }
        ProductWeights {
            w,
            w0,
            delta: kernel.delta(),
        }
    }

    fn apply(&self, g: &[f64], n: usize) -> f64 {
        if n == 0 {
            return self.delta * g[0];
        }
        let mut acc = self.w0[n] * g[0] + (self.w[0] + self.delta) * g[n];
        for j in 1..n {
            acc += self.w[n - j] * g[j];
        }
        acc
    }
}

/// `(kernel * g)(t_i)` by product integration against the piecewise-linear
/// interpolant of `g`. For `g` unbounded at 0 with leading exponent `nu`, the
/// first interval uses the shape `g_1 (t/h)^(nu-1)` instead.
pub fn conv_quadrature(kernel: &Series, g: &SampledFunction) -> Result<SampledFunction> {
    let grid = g.grid;
    let weights = ProductWeights::new(kernel, grid);
    let n = grid.n_steps;
    let mut data = g.values.clone();
    if g.is_singular_at_zero() {
        data[0] = 0.0;
    }
    let mut values: Vec<f64> = (0..=n).map(|i| weights.apply(&data, i)).collect();
    if let Some(nu) = g.singular_exponent {
        values[0] = f64::NAN;
        let g1 = g.values[1];
        for (i, v) in values.iter_mut().enumerate().skip(1) {
            let (linear, singular) = first_interval_moments(kernel, grid, i, nu)?;
            *v += g1 * (singular - linear);
        }
    }
    let singular_exponent = g
        .singular_exponent
        .map(|nu| nu + kernel.lead_exponent())
        .filter(|mu| *mu < 1.0 - EXPONENT_TOL);
    if singular_exponent.is_none() && g.is_singular_at_zero() {
        values[0] = 0.0;
    }
    Ok(SampledFunction {
        grid,
        values,
        singular_exponent,
    })
}

/// `(int_0^h K(t_i - s) s/h ds, int_0^h K(t_i - s) (s/h)^(nu-1) ds)`.
fn first_interval_moments(kernel: &Series, grid: UniformGrid, i: usize, nu: f64) -> Result<(f64, f64)> {
    let h = grid.step();
    if i == 1 {
        let mut linear = 0.0;
        let mut singular = 0.0;
        for t in kernel.terms() {
            linear += t.coeff * scaled_power(h, t.exponent, 1.0);
            singular += t.coeff * gamma(nu) * h.powf(t.exponent) * crate::special::rgamma(t.exponent + nu);
        }
        return Ok((linear, singular));
    }
    let (tn, tp) = (grid.node(i), grid.node(i - 1));
    let mut linear = 0.0;
    for t in kernel.terms() {
        let mu = t.exponent;
        let first = tn * (power_fn(mu + 1.0, tn) - power_fn(mu + 1.0, tp));
        let second = mu * (power_fn(mu + 2.0, tn) - power_fn(mu + 2.0, tp));
        linear += t.coeff * (first - second) / h;
    }
    let (kn, kp) = (kernel.evaluate(tn)?, kernel.evaluate(tp)?);
    let singular = kn * h * (1.0 / nu - 1.0 / (nu + 1.0)) + kp * h / (nu + 1.0);
    Ok((linear, singular))
}

/// Solve `z + K * z = d` on the grid for bounded data `d`.
pub fn solve_second_kind(kernel: &Series, data: &SampledFunction) -> Result<SampledFunction> {
    if data.is_singular_at_zero() {
        return Err(Error::InvalidParameter(
            "second-kind data must be bounded at t = 0".into(),
        ));
    }
    let grid = data.grid;
    let weights = ProductWeights::new(kernel, grid);
    let n = grid.n_steps;
    let mut z = vec![0.0; n + 1];
    let d0 = 1.0 + weights.delta;
    if d0.abs() < 1e-12 {
        return Err(Error::SingularStep { node: 0 });
    }
    z[0] = data.values[0] / d0;
    let diag = 1.0 + weights.delta + weights.w[0];
    if diag.abs() < 1e-12 {
        return Err(Error::SingularStep { node: 1 });
    }
    for i in 1..=n {
        let mut known = weights.w0[i] * z[0];
        for j in 1..i {
            known += weights.w[i - j] * z[j];
        }
        z[i] = (data.values[i] - known) / diag;
    }
    Ok(SampledFunction {
        grid,
        values: z,
        singular_exponent: None,
    })
}

/// Kernel and right-hand side of the second-kind equation for a problem.
pub fn volterra_form(problem: &IvProblem) -> (Series, Series) {
    let m = problem.degree();
    let bm = problem.b[m];
    let kappa = &problem.triple.kappa;
    let powers: Vec<Series> = (0..=2 * m).map(|n| kappa.power(n)).collect();
    let mut kernel = Series::zero();
    for n in 0..m {
        kernel = kernel.add(&powers[m - n].scale(problem.b[n] / bm));
    }
    let base = kappa.power(0).convolve(&problem.triple.k1);
    let mut rhs = powers[m].convolve(&problem.forcing);
    for n in 1..=m {
        for j in 0..n {
            let term = powers[m - n + j + 1].convolve(&base).scale(problem.b[n] * problem.c[j]);
            rhs = rhs.add(&term);
        }
    }
    (kernel, rhs.scale(1.0 / bm))
}

/// Grid solution of the problem.
pub fn solve_volterra_ivp(problem: &IvProblem, grid: UniformGrid) -> Result<SampledFunction> {
    let (kernel, rhs) = volterra_form(problem);
    let mut known = Series::zero();
    let mut data = rhs;
    let mut splits = 0;
    while data.lead_exponent() < SPLIT_THRESHOLD - EXPONENT_TOL {
        if splits == MAX_SPLIT_TERMS {
            return Err(Error::InvalidParameter(format!(
                "could not split the singular part off the data (lead exponent {})",
                data.lead_exponent()
            )));
        }
        known = known.add(&data);
        data = kernel.convolve(&data).scale(-1.0);
        splits += 1;
    }
    let sampled = sample(&data, grid)?;
    let mut z = solve_second_kind(&kernel, &sampled)?;
    let known_samples = sample(&known, grid)?;
    for (zi, ki) in z.values.iter_mut().zip(&known_samples.values).skip(1) {
        *zi += ki;
    }
    if known_samples.is_singular_at_zero() {
        z.values[0] = f64::NAN;
        z.singular_exponent = known_samples.singular_exponent;
    } else {
        z.values[0] += known_samples.values[0];
    }
    Ok(z)
}

/// One row of an error-versus-step study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_steps: usize,
    pub h: f64,
    pub max_abs_error: f64,
    /// `log2(previous error / this error)`; `None` on the first row.
    pub order: Option<f64>,
}

/// Solve on successively refined grids and measure the max absolute error
/// against `reference` on nodes `t >= t_min_frac * t_end`.
pub fn convergence_study(
    problem: &IvProblem,
    reference: impl Fn(f64) -> f64,
    t_end: f64,
    steps: &[usize],
    t_min_frac: f64,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(steps.len());
    for &n in steps {
        let grid = UniformGrid::new(t_end, n)?;
        let y = solve_volterra_ivp(problem, grid)?;
        let err = y.max_abs_error(&reference, t_min_frac * t_end);
        let order = rows
            .last()
            .map(|prev| (prev.max_abs_error / err).ln() / (prev.h / grid.step()).ln());
        rows.push(ConvergenceRow {
            n_steps: n,
            h: grid.step(),
            max_abs_error: err,
            order,
        });
    }
    Ok(rows)
}

/// CSV with header `n_steps,h,max_abs_error,order`.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n_steps,h,max_abs_error,order\n");
    for r in rows {
        let order = r.order.map_or(String::new(), |o| format!("{o:.6}"));
        let _ = writeln!(out, "{},{:.16e},{:.16e},{}", r.n_steps, r.h, r.max_abs_error, order);
    }
    out
}
