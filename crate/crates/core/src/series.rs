//! Generalized power series: the function representation everything else
//! is built on.
//!
//! A series is `delta * I + sum_j c_j h_{mu_j}(t)` where `I` is the
//! convolution identity (the Dirac delta, formally `h_0`) and
//! `h_mu(t) = t^(mu-1) / Gamma(mu)`. Laplace convolution is exact on this
//! representation: `h_mu * h_nu = h_{mu+nu}`.
//!
//! Every series carries a truncation cap. Exponents at or above the cap are
//! unknown: they were never computed, or were discarded to bound the term
//! count. Retained coefficients are always exact. Convolution propagates the
//! cap as `min(cap_a + lead_b, cap_b + lead_a)`, which is the largest
//! exponent up to which the product of two truncated series is still
//! determined.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma::power_fn;

/// Exponents closer than this are the same exponent.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Default number of terms / convolution powers kept by series builders.
pub const DEFAULT_ORDER: usize = 64;

/// Scalar coefficient type of a series: `f64` or `Complex64`.
pub trait Coeff:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_real(x: f64) -> Self;
    fn magnitude(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;
    fn re(self) -> f64;
    fn im(self) -> f64;
}

impl Coeff for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
}

impl Coeff for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
}

/// One term `coeff * h_exponent(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<C = f64> {
    pub coeff: C,
    pub exponent: f64,
}

impl<C: Coeff> Term<C> {
    pub fn new(coeff: C, exponent: f64) -> Self {
        Term { coeff, exponent }
    }
}

/// A generalized power series with coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gps<C = f64> {
    delta: C,
    terms: Vec<Term<C>>,
    cap: f64,
    dropped: bool,
}

/// Real-coefficient series, the type used at every public boundary.
pub type GeneralizedPowerSeries = Gps<f64>;

/// Complex-coefficient series, used for partial-fraction assembly.
pub type ComplexSeries = Gps<Complex64>;

fn same_exponent(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_TOL
}

impl<C: Coeff> Default for Gps<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Gps<C> {
    /// The zero function (exact).
    pub fn zero() -> Self {
        Gps {
            delta: C::zero(),
            terms: Vec::new(),
            cap: f64::INFINITY,
            dropped: false,
        }
    }

    /// The convolution identity `I` (Dirac delta).
    pub fn identity() -> Self {
        Gps {
            delta: C::one(),
            ..Self::zero()
        }
    }

    /// `h_mu`. Panics if `mu <= 0`; use [`Gps::from_terms`] for checked input.
    pub fn h(mu: f64) -> Self {
        Self::monomial(C::one(), mu)
    }

    /// `coeff * h_mu`. Panics if `mu <= 0` or not finite.
    pub fn monomial(coeff: C, mu: f64) -> Self {
        assert!(mu > 0.0 && mu.is_finite(), "exponent must be positive, got {mu}");
        Self::from_raw(C::zero(), vec![Term::new(coeff, mu)], f64::INFINITY, false)
    }

    /// Checked constructor. Terms are sorted and merged; exponents at or
    /// above `cap` are dropped.
    pub fn from_terms<I>(delta: C, terms: I, cap: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (C, f64)>,
    {
        if !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta coefficient {delta:?} is not finite"
            )));
        }
        if cap.is_nan() || cap <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "truncation cap must be positive, got {cap}"
            )));
        }
        let mut out = Vec::new();
        for (c, mu) in terms {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "exponent must be a finite positive number, got {mu}"
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {c:?} of h_{mu} is not finite"
                )));
            }
            out.push(Term::new(c, mu));
        }
        Ok(Self::from_raw(delta, out, cap, false))
    }

    /// Sort, merge and cap raw terms.
    pub(crate) fn from_raw(delta: C, mut raw: Vec<Term<C>>, cap: f64, dropped: bool) -> Self {
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut terms: Vec<Term<C>> = Vec::with_capacity(raw.len());
        let mut dropped = dropped;
        let mut group_start = f64::NEG_INFINITY;
        for t in raw {
            if t.exponent >= cap - EXPONENT_TOL {
                dropped |= t.coeff != C::zero();
                continue;
            }
            match terms.last_mut() {
                Some(last) if same_exponent(t.exponent, group_start) => last.coeff += t.coeff,
                _ => {
                    group_start = t.exponent;
                    terms.push(t);
                }
            }
        }
        terms.retain(|t| t.coeff != C::zero());
        Gps {
            delta,
            terms,
            cap,
            dropped,
        }
    }

    pub fn delta(&self) -> C {
        self.delta
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    /// Exponents at or above the cap are not represented.
    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// True when nonzero contributions were discarded at the cap.
    pub fn is_truncated(&self) -> bool {
        self.dropped
    }

    pub fn is_exact(&self) -> bool {
        self.cap.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        self.delta == C::zero() && self.terms.is_empty()
    }

    pub fn has_delta(&self) -> bool {
        self.delta != C::zero()
    }

    /// Smallest exponent present, with the Dirac part counting as 0.
    /// Infinity for the zero series.
    pub fn lead_exponent(&self) -> f64 {
        if self.has_delta() {
            0.0
        } else {
            self.terms.first().map_or(f64::INFINITY, |t| t.exponent)
        }
    }

    /// Smallest exponent among the function terms, ignoring the Dirac part.
    pub fn lead_term_exponent(&self) -> f64 {
        self.terms.first().map_or(f64::INFINITY, |t| t.exponent)
    }

    /// Coefficient of `h_mu`, matched within the exponent tolerance.
    pub fn coeff_of(&self, mu: f64) -> C {
        self.terms
            .iter()
            .find(|t| same_exponent(t.exponent, mu))
            .map_or(C::zero(), |t| t.coeff)
    }

    /// Largest coefficient magnitude, Dirac part included.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.magnitude())
            .fold(self.delta.magnitude(), f64::max)
    }

    /// Lower the cap, dropping terms at or above it.
    pub fn with_cap(&self, cap: f64) -> Self {
        if cap >= self.cap {
            return self.clone();
        }
        Self::from_raw(self.delta, self.terms.clone(), cap, self.dropped)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        Self::from_raw(
            self.delta + other.delta,
            raw,
            self.cap.min(other.cap),
            self.dropped || other.dropped,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-C::one())
    }

    /// Multiply every coefficient by `lambda`. Scaling by zero yields the
    /// exact zero series, since the unknown tail is annihilated as well.
    pub fn scale(&self, lambda: C) -> Self {
        if lambda == C::zero() {
            return Self::zero();
        }
        Gps {
            delta: self.delta * lambda,
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.coeff * lambda, t.exponent))
                .collect(),
            cap: self.cap,
            dropped: self.dropped,
        }
    }

    /// Laplace convolution.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let cap = (self.cap + other.lead_exponent()).min(other.cap + self.lead_exponent());
        let mut dropped = self.dropped || other.dropped;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len() + self.terms.len() + other.terms.len());
        if self.has_delta() {
            raw.extend(other.terms.iter().map(|t| Term::new(self.delta * t.coeff, t.exponent)));
        }
        if other.has_delta() {
            raw.extend(self.terms.iter().map(|t| Term::new(other.delta * t.coeff, t.exponent)));
        }
        for a in &self.terms {
            for b in &other.terms {
                let mu = a.exponent + b.exponent;
                if mu >= cap - EXPONENT_TOL {
                    // terms are sorted, the rest of this row is above the cap too
                    dropped = true;
                    break;
                }
                raw.push(Term::new(a.coeff * b.coeff, mu));
            }
        }
        Self::from_raw(self.delta * other.delta, raw, cap, dropped)
    }

    /// n-fold convolution power; the zeroth power is the identity.
    pub fn power(&self, n: usize) -> Self {
        let mut result = Self::identity();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.convolve(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.convolve(&base);
            }
        }
        result
    }

    /// Value at `t > 0`. Contributions are summed smallest-first.
    pub fn evaluate(&self, t: f64) -> Result<C> {
        if self.has_delta() {
            return Err(Error::EvalOfDistribution(self.delta.re()));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "evaluation point must be positive, got {t}"
            )));
        }
        let mut parts: Vec<C> = self
            .terms
            .iter()
            .map(|term| term.coeff.scale(power_fn(term.exponent, t)))
            .collect();
        parts.sort_by(|a, b| a.magnitude().partial_cmp(&b.magnitude()).unwrap_or(Ordering::Equal));
        Ok(parts.into_iter().fold(C::zero(), |acc, p| acc + p))
    }

    /// Sum of `|c_j h_{mu_j}(t)|` over retained terms with exponent in
    /// `[cap - band, cap)`: the size of the last retained band, used as the
    /// truncation error estimate. Zero for exact series.
    pub fn band_magnitude(&self, t: f64, band: f64) -> f64 {
        if self.is_exact() {
            return 0.0;
        }
        let from = self.cap - band - EXPONENT_TOL;
        self.terms
            .iter()
            .filter(|term| term.exponent >= from)
            .map(|term| term.coeff.magnitude() * power_fn(term.exponent, t))
            .sum()
    }

    /// Sum of absolute contributions at `t`, the natural scale for relative
    /// comparisons.
    pub fn abs_sum(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.coeff.magnitude() * power_fn(term.exponent, t))
            .sum()
    }

    /// Limit at `t -> 0+`: zero when every exponent exceeds 1, the `h_1`
    /// coefficient when the lead exponent is 1, `None` when it diverges
    /// (exponent below 1 or a Dirac part).
    pub fn value_at_zero(&self) -> Option<C> {
        if self.has_delta() {
            return None;
        }
        match self.terms.first() {
            None => Some(C::zero()),
            Some(t) if same_exponent(t.exponent, 1.0) => Some(t.coeff),
            Some(t) if t.exponent > 1.0 => Some(C::zero()),
            Some(_) => None,
        }
    }

    /// Termwise `d/dt`: `h_mu -> h_{mu-1}`, constants vanish. Terms with
    /// exponent below 1 (other than exact constants) and Dirac parts leave
    /// C_-1 and are rejected.
    pub fn differentiate(&self) -> Result<Self> {
        if self.has_delta() {
            return Err(Error::NotDifferentiable("series has a Dirac part".into()));
        }
        let mut raw = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if same_exponent(t.exponent, 1.0) {
                continue;
            }
            if t.exponent < 1.0 {
                return Err(Error::NotDifferentiable(format!(
                    "term with exponent {} would leave C_-1",
                    t.exponent
                )));
            }
            raw.push(Term::new(t.coeff, t.exponent - 1.0));
        }
        let cap = if self.cap.is_finite() {
            (self.cap - 1.0).max(0.0)
        } else {
            self.cap
        };
        if cap == 0.0 {
            return Err(Error::NotDifferentiable(
                "truncation cap at or below 1 leaves nothing known".into(),
            ));
        }
        Ok(Self::from_raw(C::zero(), raw, cap, self.dropped))
    }

    /// Largest coefficient magnitude of `self - other` on the exponents both
    /// series determine.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs_coeff()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(C) -> D) -> Gps<D> {
        Gps::from_raw(
            f(self.delta),
            self.terms.iter().map(|t| Term::new(f(t.coeff), t.exponent)).collect(),
            self.cap,
            self.dropped,
        )
    }
}

impl Gps<f64> {
    pub fn to_complex(&self) -> ComplexSeries {
        self.map_coeffs(Complex64::from_real)
    }
}

impl Gps<Complex64> {
    /// Real part, after checking that the imaginary parts vanish to
    /// `tol * max(1, max |coeff|)`.
    pub fn real_part(&self, tol: f64) -> Result<GeneralizedPowerSeries> {
        let scale = self.max_abs_coeff().max(1.0);
        let worst = self
            .terms
            .iter()
            .map(|t| t.coeff.im.abs())
            .fold(self.delta.im.abs(), f64::max);
        if worst > tol * scale {
            return Err(Error::ComplexResidue(worst / scale));
        }
        Ok(self.map_coeffs(|c| c.re))
    }
}

impl<C: Coeff> Add for &Gps<C> {
    type Output = Gps<C>;
    fn add(self, rhs: Self) -> Gps<C> {
        Gps::add(self, rhs)
    }
}

impl<C: Coeff> Sub for &Gps<C> {
    type Output = Gps<C>;
    fn sub(self, rhs: Self) -> Gps<C> {
        Gps::sub(self, rhs)
    }
}

impl<C: Coeff> Neg for &Gps<C> {
    type Output = Gps<C>;
    fn neg(self) -> Gps<C> {
        Gps::neg(self)
    }
}

/// Wire format: `{"delta": d, "terms": [[coeff, exponent], ...]}`, with the
/// optional `truncation_cap` / `truncated` metadata omitted for exact series.
#[derive(Serialize, Deserialize)]
struct SeriesJson {
    delta: f64,
    terms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    truncated: bool,
}

impl Serialize for GeneralizedPowerSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            delta: self.delta,
            terms: self.terms.iter().map(|t| [t.coeff, t.exponent]).collect(),
            truncation_cap: self.cap.is_finite().then_some(self.cap),
            truncated: self.dropped,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GeneralizedPowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        let cap = raw.truncation_cap.unwrap_or(f64::INFINITY);
        let mut series = Gps::from_terms(raw.delta, raw.terms.iter().map(|[c, mu]| (*c, *mu)), cap)
            .map_err(serde::de::Error::custom)?;
        series.dropped = raw.truncated;
        Ok(series)
    }
}
