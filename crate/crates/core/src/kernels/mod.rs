//! Points of ℂⁿ and the Heisenberg group, and the spectral kernels of the
//! magnetic Laplacian and the Heisenberg sub-Laplacian.

mod magnetic;
mod sub;

pub use magnetic::{
    projection_kernel_magnetic, projection_kernel_magnetic_flat, resolvent_kernel_magnetic,
    resolvent_series_magnetic,
};
pub use sub::{
    resolvent_kernel_sub, resolvent_sub_via_spectral, spectral_density_kernel_sub,
    spectral_density_kernel_sub_reduced, resolvent_kernel_sub_reduced,
    resolvent_sub_via_spectral_reduced,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of ℂⁿ, n ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    coords: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidSpec("a point of ℂⁿ needs n ≥ 1".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSpec("point coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    /// The origin of ℂⁿ.
    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self {
            coords: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// A point of ℂ¹.
    pub fn scalar(z: Complex64) -> Self {
        Self { coords: vec![z] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(*a, *b)).collect(),
        })
    }
}

fn check_dims(z: &ComplexPoint, w: &ComplexPoint) -> Result<()> {
    if z.dim() == w.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: z.dim(),
            right: w.dim(),
        })
    }
}

/// ⟨z, w⟩ = Σⱼ zⱼ·w̄ⱼ.
pub fn hermitian_inner(z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
    check_dims(z, w)?;
    Ok(z.coords.iter().zip(&w.coords).map(|(a, b)| a * b.conj()).sum())
}

/// |z − w|².
pub fn squared_distance(z: &ComplexPoint, w: &ComplexPoint) -> Result<f64> {
    check_dims(z, w)?;
    Ok(z.coords.iter().zip(&w.coords).map(|(a, b)| (a - b).norm_sqr()).sum())
}

/// A point (z, τ) of ℍₙ = ℂⁿ × ℝ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergPoint {
    pub z: ComplexPoint,
    pub tau: f64,
}

impl HeisenbergPoint {
    pub fn new(z: ComplexPoint, tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::InvalidSpec("central coordinate must be finite".into()));
        }
        Ok(Self { z, tau })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            z: ComplexPoint::origin(n),
            tau: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    /// (z, τ)⁻¹ = (−z, −τ).
    pub fn inverse(&self) -> Self {
        Self {
            z: ComplexPoint {
                coords: self.z.coords.iter().map(|c| -c).collect(),
            },
            tau: -self.tau,
        }
    }

    /// Parabolic dilation (z, τ) ↦ (rz, r²τ).
    pub fn dilate(&self, r: f64) -> Self {
        Self {
            z: ComplexPoint {
                coords: self.z.coords.iter().map(|c| c * r).collect(),
            },
            tau: r * r * self.tau,
        }
    }
}

/// (z, τ)·(w, s) = (z + w, τ + s + 2 Im⟨z, w⟩).
pub fn group_multiply(p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<HeisenbergPoint> {
    let z = p.z.zip_with(&q.z, |a, b| a + b)?;
    let twist = 2.0 * hermitian_inner(&p.z, &q.z)?.im;
    Ok(HeisenbergPoint {
        z,
        tau: p.tau + q.tau + twist,
    })
}

/// The pair (ρ, θ) on which every sub-Laplacian kernel depends.
///
/// For p = (z, τ) and q = (w, s): ρ = |z − w|² and θ = τ − s + 2 Im⟨z, w⟩.
/// θ is the central coordinate of q⁻¹·p, so both are invariant under
/// p, q ↦ g·p, g·q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoordinates {
    pub rho: f64,
    pub theta: f64,
}

impl ReducedCoordinates {
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "reduced coordinates need finite ρ ≥ 0 and θ, got ({rho}, {theta})"
            )));
        }
        Ok(Self { rho, theta })
    }

    pub fn from_points(p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<Self> {
        let rho = squared_distance(&p.z, &q.z)?;
        let theta = p.tau - q.tau + 2.0 * hermitian_inner(&p.z, &q.z)?.im;
        Ok(Self { rho, theta })
    }

    /// μ = 2ρ, the variable of the Green-kernel integral.
    pub fn mu(&self) -> f64 {
        2.0 * self.rho
    }
}

/// Spectral parameter of a kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelParameter {
    /// Spectral value λ ≥ 0 (projection and density kernels).
    Spectral(f64),
    /// Resolvent parameter ζ with Re ζ < 0.
    Resolvent(Complex64),
}

/// One kernel evaluation: parameter, two points and their common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRequest {
    pub parameter: KernelParameter,
    pub left: HeisenbergPoint,
    pub right: HeisenbergPoint,
    pub n: usize,
}

impl KernelRequest {
    pub fn new(parameter: KernelParameter, left: HeisenbergPoint, right: HeisenbergPoint) -> Result<Self> {
        if left.dim() != right.dim() {
            return Err(Error::DimensionMismatch {
                left: left.dim(),
                right: right.dim(),
            });
        }
        match parameter {
            KernelParameter::Spectral(l) if !(l >= 0.0) || !l.is_finite() => {
                return Err(Error::InvalidSpec(format!("spectral parameter λ = {l} must be ≥ 0")));
            }
            KernelParameter::Resolvent(z) if !(z.re < 0.0) || !z.im.is_finite() => {
                return Err(Error::DomainError(format!("resolvent parameter ζ = {z} needs Re ζ < 0")));
            }
            _ => {}
        }
        let n = left.dim();
        Ok(Self {
            parameter,
            left,
            right,
            n,
        })
    }

    pub fn reduced(&self) -> ReducedCoordinates {
        ReducedCoordinates::from_points(&self.left, &self.right).expect("dimensions checked at construction")
    }
}
