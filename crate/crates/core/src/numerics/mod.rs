//! Deterministic quadrature and summation engines.
//!
//! Every approximate computation in the crate goes through one of these
//! engines and comes back as an [`EvalResult`]: a value, an a-posteriori
//! error estimate and a work counter. Engines are pure functions of their
//! arguments, so repeated calls with the same inputs are bit-identical.

mod oscillatory;
mod quadrature;
mod series;

pub use oscillatory::{integrate_semi_infinite, integrate_semi_infinite_oscillatory};
pub use quadrature::{
    gauss_legendre, integrate_adaptive, integrate_adaptive_singular, EndpointSingularity,
};
pub use series::{
    abel_sum, abel_sum_iter, accelerate_alternating, polynomial_extrapolate_to_zero, power_sum,
    richardson_series, CompensatedSum,
};

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values the engines can integrate and sum: `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Into<Complex64>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Tolerances and budgets for the quadrature engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the number of bisections performed by one adaptive call.
    pub max_subdivisions: usize,
    /// Cap on the number of half-period segments of an oscillatory integral.
    pub max_halfperiods: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            max_halfperiods: 400,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        rel_tol: f64,
        abs_tol: f64,
        max_subdivisions: usize,
        max_halfperiods: usize,
    ) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            max_halfperiods,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidSpec(format!("rel_tol = {} must be > 0", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidSpec(format!("abs_tol = {} must be ≥ 0", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidSpec("max_subdivisions must be ≥ 1".into()));
        }
        if self.max_halfperiods < 2 {
            return Err(Error::InvalidSpec("max_halfperiods must be ≥ 2".into()));
        }
        Ok(())
    }

    /// Same budgets, relative tolerance replaced.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Tolerance, term budget and Abel radii schedule for the summation engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub tol: f64,
    pub max_terms: usize,
    /// Strictly increasing radii in (0, 1) at which Σ aⱼ rʲ is formed.
    pub abel_radii: Vec<f64>,
    /// Degree of the polynomial in (1 − r) used to extrapolate to r → 1⁻.
    pub extrapolation_depth: usize,
}

impl Default for SeriesSpec {
    /// Radii rₖ = 1 − 2⁻ᵏ for k = 6..=12, polynomial degree 6.
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 2_000_000,
            abel_radii: (6..=12).map(|k| 1.0 - 0.5f64.powi(k)).collect(),
            extrapolation_depth: 6,
        }
    }
}

impl SeriesSpec {
    pub fn new(
        tol: f64,
        max_terms: usize,
        abel_radii: Vec<f64>,
        extrapolation_depth: usize,
    ) -> Result<Self> {
        let spec = Self {
            tol,
            max_terms,
            abel_radii,
            extrapolation_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A short schedule {0.9, 0.95, 0.975, 0.9875, 0.99375} with degree 4, for
    /// series whose individual terms are expensive.
    pub fn coarse() -> Self {
        Self {
            tol: 1e-10,
            max_terms: 100_000,
            abel_radii: (0..5).map(|k| 1.0 - 0.1 * 0.5f64.powi(k)).collect(),
            extrapolation_depth: 4,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidSpec(format!("tol = {} must be > 0", self.tol)));
        }
        if self.max_terms < 2 {
            return Err(Error::InvalidSpec("max_terms must be ≥ 2".into()));
        }
        if self.abel_radii.is_empty() {
            return Err(Error::EmptyRadiiSchedule);
        }
        if self.abel_radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidSpec("abel radii must lie in (0, 1)".into()));
        }
        if self.abel_radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec("abel radii must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// A value with an error estimate and the work spent producing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub error_estimate: f64,
    pub terms_or_nodes_used: usize,
    pub converged: bool,
}

impl<T: Scalar> EvalResult<T> {
    pub fn map<U, F: FnOnce(T) -> U>(self, f: F) -> EvalResult<U> {
        EvalResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            terms_or_nodes_used: self.terms_or_nodes_used,
            converged: self.converged,
        }
    }

    /// Multiply value and error estimate by a constant.
    pub fn scaled<S: Scalar>(self, factor: S) -> EvalResult<T>
    where
        T: Mul<S, Output = T>,
    {
        EvalResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.modulus(),
            terms_or_nodes_used: self.terms_or_nodes_used,
            converged: self.converged,
        }
    }
}

/// Accept `value ± error` if it meets `tolerance`, otherwise report non-convergence.
pub(crate) fn finish<T: Scalar>(
    context: &str,
    value: T,
    error_estimate: f64,
    work: usize,
    tolerance: f64,
) -> Result<EvalResult<T>> {
    if !value.is_finite_value() || !error_estimate.is_finite() {
        return Err(Error::non_convergence(context, value, error_estimate, work));
    }
    if error_estimate <= tolerance {
        Ok(EvalResult {
            value,
            error_estimate,
            terms_or_nodes_used: work,
            converged: true,
        })
    } else {
        Err(Error::non_convergence(context, value, error_estimate, work))
    }
}
