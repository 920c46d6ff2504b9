//! Residual records produced by the identity suites.

use num_complex::Complex64;
use serde::Serialize;

/// One identity checked at one sample point.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub identity: String,
    pub sample_index: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Sample skipped because an evaluation sat on the zero/pole lattice.
    pub skipped: bool,
}

impl ResidualReport {
    pub fn new(
        identity: &str,
        sample_index: usize,
        z: Complex64,
        lhs: Complex64,
        rhs: Complex64,
        tol: f64,
    ) -> Self {
        let abs = (lhs - rhs).norm();
        let rel = abs / lhs.norm().max(rhs.norm()).max(1e-300);
        ResidualReport {
            identity: identity.to_string(),
            sample_index,
            z_re: z.re,
            z_im: z.im,
            abs_residual: abs,
            rel_residual: rel,
            tol,
            pass: rel < tol,
            skipped: false,
        }
    }

    pub fn skipped(identity: &str, sample_index: usize, z: Complex64) -> Self {
        ResidualReport {
            identity: identity.to_string(),
            sample_index,
            z_re: z.re,
            z_im: z.im,
            abs_residual: 0.0,
            rel_residual: 0.0,
            tol: 0.0,
            pass: true,
            skipped: true,
        }
    }
}

/// Relative residual between two complex values.
pub fn rel_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300)
}
