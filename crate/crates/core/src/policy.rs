//! Truncation policies and the nome wrapper used by the product evaluators.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::err::{EgError, EgResult};

/// How the tail of a truncated product or series is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBoundMode {
    /// Rigorous geometric bound; requires the relevant nomes inside the
    /// unit disk.
    Geometric,
    /// No bound reported (truncation on term size only).
    None,
}

/// Controls truncation of infinite products and series.
///
/// The reported tail bound is always an upper bound on the neglected
/// tail; exceeding `max_terms` is a hard error rather than a silent
/// partial value.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    pub tol: f64,
    pub max_terms: usize,
    pub tail_bound_mode: TailBoundMode,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tol: 1e-12,
            max_terms: 1_000_000,
            tail_bound_mode: TailBoundMode::Geometric,
        }
    }
}

impl TruncationPolicy {
    pub fn with_tol(tol: f64) -> Self {
        TruncationPolicy {
            tol,
            ..Default::default()
        }
    }
}

/// Policy for the dilogarithmic psi function.
#[derive(Debug, Clone, Copy)]
pub struct PsiPolicy {
    pub series_tol: f64,
    pub quadrature_nodes: usize,
    /// Direct series is used for Im t below minus this strip width;
    /// otherwise the integral continuation is taken.
    pub continuation_strip: f64,
}

impl Default for PsiPolicy {
    fn default() -> Self {
        PsiPolicy {
            series_tol: 1e-13,
            quadrature_nodes: 64,
            continuation_strip: 0.5,
        }
    }
}

/// A nome `q = e^{2πiτ}` together with the period it came from.
///
/// `|q| < 1` labels the direct product region, `|q| > 1` the reflected
/// one; `|q| = 1` is rejected by the product evaluators.
#[derive(Debug, Clone, Copy)]
pub struct Nome {
    pub value: Complex64,
    pub source_period: Option<Complex64>,
}

impl Nome {
    pub fn from_value(q: Complex64) -> Self {
        Nome {
            value: q,
            source_period: None,
        }
    }

    pub fn from_period(period: Complex64) -> Self {
        Nome {
            value: (Complex64::i() * TAU * period).exp(),
            source_period: Some(period),
        }
    }

    pub fn is_direct(&self) -> bool {
        self.value.norm() < 1.0
    }

    /// The nome 1/q, labelling the reflected region.
    pub fn reflected(&self) -> Nome {
        Nome {
            value: self.value.inv(),
            source_period: self.source_period.map(|p| -p),
        }
    }

    /// Rejects nomes on the unit circle, where neither the direct nor the
    /// reflected product converges.
    pub fn check_usable(&self, what: &str) -> EgResult<()> {
        let n = self.value.norm();
        if (n - 1.0).abs() < 1e-14 {
            return Err(EgError::domain(format!("|{what}| = 1: nome on the unit circle")));
        }
        if !n.is_finite() || n == 0.0 && self.source_period.is_none() && self.value == Complex64::new(0.0, 0.0) {
            // q = 0 is fine (empty product tail); non-finite is not.
            if !n.is_finite() {
                return Err(EgError::domain(format!("{what} is not finite")));
            }
        }
        Ok(())
    }
}

/// e^{2πi w}.
pub fn expi(w: Complex64) -> Complex64 {
    (Complex64::i() * TAU * w).exp()
}
