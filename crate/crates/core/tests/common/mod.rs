#![allow(dead_code)]

use heisenberg_ids::kernels::{ComplexPoint, HeisenbergPoint};
use num_complex::Complex64;

pub fn point(coords: &[(f64, f64)]) -> ComplexPoint {
    ComplexPoint::new(coords.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

pub fn hpoint(coords: &[(f64, f64)], tau: f64) -> HeisenbergPoint {
    HeisenbergPoint::new(point(coords), tau).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

pub fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
