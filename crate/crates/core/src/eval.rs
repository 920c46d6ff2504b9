//! Evaluation results carrying truncation diagnostics.

use num_complex::Complex64;

/// Flags attached to an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalFlags {
    /// Some product factor came within 1e-12 of zero: the input sits on
    /// (or next to) the zero/pole lattice. The value is still returned so
    /// identity suites can skip the sample gracefully.
    pub near_lattice: bool,
    /// A real-period series was summed with an envelope whose Diophantine
    /// exponent could not be confirmed.
    pub unverified_envelope: bool,
}

impl EvalFlags {
    pub fn merge(self, other: EvalFlags) -> EvalFlags {
        EvalFlags {
            near_lattice: self.near_lattice || other.near_lattice,
            unverified_envelope: self.unverified_envelope || other.unverified_envelope,
        }
    }
}

/// A computed value plus the number of terms used and a relative bound on
/// the truncation error (roundoff not included).
#[derive(Debug, Clone, Copy)]
pub struct Eval {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
    pub flags: EvalFlags,
}

impl Eval {
    pub fn exact(value: Complex64) -> Eval {
        Eval {
            value,
            terms: 0,
            tail_bound: 0.0,
            flags: EvalFlags::default(),
        }
    }

    pub fn mul(self, rhs: Eval) -> Eval {
        Eval {
            value: self.value * rhs.value,
            terms: self.terms + rhs.terms,
            tail_bound: self.tail_bound + rhs.tail_bound,
            flags: self.flags.merge(rhs.flags),
        }
    }

    pub fn div(self, rhs: Eval) -> Eval {
        Eval {
            value: self.value / rhs.value,
            terms: self.terms + rhs.terms,
            tail_bound: self.tail_bound + rhs.tail_bound,
            flags: self.flags.merge(rhs.flags),
        }
    }

    pub fn recip(self) -> Eval {
        Eval {
            value: self.value.inv(),
            ..self
        }
    }

    /// Integer power by repeated multiplication (no logarithm, hence no
    /// branch ambiguity).
    pub fn powi(self, n: i64) -> Eval {
        let mut v = Complex64::new(1.0, 0.0);
        let base = if n >= 0 { self.value } else { self.value.inv() };
        for _ in 0..n.unsigned_abs() {
            v *= base;
        }
        Eval {
            value: v,
            terms: self.terms,
            tail_bound: self.tail_bound * n.unsigned_abs() as f64,
            flags: self.flags,
        }
    }

    pub fn scale(self, c: Complex64) -> Eval {
        Eval {
            value: self.value * c,
            ..self
        }
    }
}
