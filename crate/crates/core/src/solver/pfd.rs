//! Partial fractions of proper real rationals:
//! `P/Q = sum_i sum_{j<=m_i} a_ij / (z - lambda_i)^j`.
//!
//! Poles come from the eigenvalues of the companion matrix of `Q`, polished
//! by Newton steps and clustered into multiplicity groups. Residues come
//! from a least-squares fit to sampled values of `P/Q`, which treats simple
//! and repeated poles the same way. Near-multiple roots (closer than the
//! clustering radius but not equal) degrade the residues; the recombination
//! residual reports it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::poly::{Polynomial, RationalOperator};
use crate::error::{Error, Result};

/// Roots closer than this (relative to `max(1, |root|)`) form one pole.
pub const TOL_ROOT: f64 = 1e-7;

/// Recombination residual above which the decomposition is rejected.
pub const ILL_CONDITIONED: f64 = 1e-6;

/// Roots this close are merged when their mean is also a root of `Q'`,
/// which catches double roots split by eigenvalue round-off.
const WIDE_CLUSTER: f64 = 1e-4;

const RECOMBINATION_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub multiplicity: usize,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// A decomposition with its quality diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionDecomposition {
    pub poles: Vec<Pole>,
    /// `residues[i][j - 1]` multiplies `(z - lambda_i)^(-j)`.
    pub residues: Vec<Vec<Complex64>>,
    /// Max normalized `|sum a_ij/(z-lambda_i)^j * Q(z) - P(z)|` over the check points.
    pub residual: f64,
    /// Condition number of the column-scaled residue system.
    pub condition: f64,
    /// Poles of `Q` whose residues all vanished (common roots with `P`).
    pub cancelled: usize,
}

impl PartialFractionDecomposition {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(p, res)| {
                let inv = 1.0 / (z - p.value);
                let mut pw = inv;
                let mut acc = Complex64::new(0.0, 0.0);
                for a in res {
                    acc += a * pw;
                    pw *= inv;
                }
                acc
            })
            .sum()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }
}

/// Roots of a real polynomial via the companion matrix, Newton-polished.
pub fn polynomial_roots(q: &Polynomial) -> Vec<Complex64> {
    let Some(d) = q.degree() else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let lead = q.leading();
    let c = q.coeffs();
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -c[i] / lead;
    }
    let eig = companion.complex_eigenvalues();
    eig.iter().map(|z| polish(q, *z)).collect()
}

fn polish(q: &Polynomial, mut z: Complex64) -> Complex64 {
    let mut best = q.eval(z).norm();
    for _ in 0..8 {
        let d = q.eval_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - q.eval(z) / d;
        let val = q.eval(next).norm();
        if !(val < best) {
            break;
        }
        best = val;
        z = next;
    }
    z
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

/// Group roots into poles with multiplicities.
pub fn cluster_roots(q: &Polynomial, roots: &[Complex64]) -> Vec<Pole> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &r in roots {
        match groups.iter_mut().find(|g| g.iter().any(|x| close(*x, r, TOL_ROOT))) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    // second pass: merge groups split by round-off when the merged centre is
    // also a critical point, i.e. a genuine repeated root
    let dq = q.derivative();
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let (ci, cj) = (mean(&groups[i]), mean(&groups[j]));
                if !close(ci, cj, WIDE_CLUSTER) {
                    continue;
                }
                let mut all = groups[i].clone();
                all.extend_from_slice(&groups[j]);
                let centre = mean(&all);
                let scale = dq.abs_eval(centre).max(f64::MIN_POSITIVE);
                if dq.eval(centre).norm() <= 1e-6 * scale {
                    groups[i] = all;
                    groups.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mut value = mean(&g);
            if g.len() > 1 {
                // a root of multiplicity m is a simple root of Q^(m-1)
                let mut d = q.clone();
                for _ in 1..g.len() {
                    d = d.derivative();
                }
                value = polish(&d, value);
            }
            if value.im.abs() <= TOL_ROOT * value.norm().max(1.0) {
                value.im = 0.0;
            }
            Pole {
                value,
                multiplicity: g.len(),
            }
        })
        .collect()
}

fn mean(g: &[Complex64]) -> Complex64 {
    g.iter().sum::<Complex64>() / g.len() as f64
}

/// Decompose a proper rational into partial fractions.
pub fn partial_fractions(r: &RationalOperator) -> Result<PartialFractionDecomposition> {
    if r.numerator.is_zero() {
        return Ok(PartialFractionDecomposition {
            poles: Vec::new(),
            residues: Vec::new(),
            residual: 0.0,
            condition: 1.0,
            cancelled: 0,
        });
    }
    let roots = polynomial_roots(&r.denominator);
    let poles = cluster_roots(&r.denominator, &roots);
    let unknowns: usize = poles.iter().map(|p| p.multiplicity).sum();
    let radius = 1.0 + 2.0 * poles.iter().map(|p| p.value.norm()).fold(0.0, f64::max);

    let samples = 2 * unknowns + 8;
    let mut a = DMatrix::<Complex64>::zeros(samples, unknowns);
    let mut b = DVector::<Complex64>::zeros(samples);
    for k in 0..samples {
        let theta = std::f64::consts::TAU * (k as f64 + 0.37) / samples as f64;
        let z = Complex64::from_polar(radius, theta);
        let mut col = 0;
        for p in &poles {
            let inv = 1.0 / (z - p.value);
            let mut pw = inv;
            for _ in 0..p.multiplicity {
                a[(k, col)] = pw;
                pw *= inv;
                col += 1;
            }
        }
        b[k] = r.eval(z);
    }
    // column scaling keeps the fit independent of pole magnitudes
    let norms: Vec<f64> = (0..unknowns)
        .map(|j| a.column(j).norm().max(f64::MIN_POSITIVE))
        .collect();
    for (j, n) in norms.iter().enumerate() {
        a.column_mut(j).unscale_mut(*n);
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let x = svd.solve(&b, f64::EPSILON * smax).map_err(|_| Error::IllConditioned {
        residual: f64::INFINITY,
        condition,
    })?;

    let mut residues = Vec::with_capacity(poles.len());
    let mut col = 0;
    for p in &poles {
        let res: Vec<Complex64> = (0..p.multiplicity)
            .map(|_| {
                let v = x[col] / norms[col];
                col += 1;
                v
            })
            .collect();
        residues.push(res);
    }

    // drop poles shared with the numerator: all their residues vanish
    let scale = residues
        .iter()
        .flatten()
        .map(|a| a.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut kept_poles = Vec::new();
    let mut kept_residues = Vec::new();
    let mut cancelled = 0;
    for (p, res) in poles.into_iter().zip(residues) {
        if res.iter().all(|a| a.norm() <= 1e-12 * scale) {
            cancelled += p.multiplicity;
        } else {
            kept_poles.push(p);
            kept_residues.push(res);
        }
    }

    let mut pfd = PartialFractionDecomposition {
        poles: kept_poles,
        residues: kept_residues,
        residual: 0.0,
        condition,
        cancelled,
    };
    pfd.residual = recombination_residual(&pfd, r, radius);
    if !(pfd.residual <= ILL_CONDITIONED) {
        return Err(Error::IllConditioned {
            residual: pfd.residual,
            condition,
        });
    }
    Ok(pfd)
}

/// Normalized `|pfd(z) Q(z) - P(z)|` at check points off the fitting circle.
pub fn recombination_residual(pfd: &PartialFractionDecomposition, r: &RationalOperator, radius: f64) -> f64 {
    (0..RECOMBINATION_POINTS)
        .map(|k| {
            // golden-angle spiral between 0.3 and 1.3 times the fitting radius
            let theta = 2.399_963_229_728_653 * k as f64 + 0.1;
            let rho = radius * (0.3 + k as f64 / RECOMBINATION_POINTS as f64);
            let z = Complex64::from_polar(rho, theta);
            let lhs = pfd.eval(z) * r.denominator.eval(z) - r.numerator.eval(z);
            let scale = r.denominator.abs_eval(z).max(r.numerator.abs_eval(z));
            lhs.norm() / scale
        })
        .fold(0.0, f64::max)
}
