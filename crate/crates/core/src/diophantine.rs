//! Continued-fraction analysis of a real period.
//!
//! The summation formula for the elliptic gamma function survives one
//! period τ going real provided min_k |jτ - k| stays polynomially far
//! from zero. This module estimates the approximation exponent of a real
//! input from its continued-fraction convergents, which is where the
//! minima of |jτ - k| over j ≤ j_max are attained.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiophantineVerdict {
    /// Gaps decay like a small power of 1/j: τ behaves like a typical
    /// (full-measure) irrational over the scanned range.
    InXLikely,
    /// Some jτ is an integer: the input is rational (exact detection on
    /// the binary value of the input).
    Rational,
    /// A very large partial quotient was seen; membership cannot be
    /// asserted from the scanned range.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiophantineReport {
    pub tau: f64,
    /// max over convergent denominators q of -log(gap)/log(q); at least 1.
    pub alpha_estimate: f64,
    /// (denominator j, min_k |jτ - k|) at each convergent with j ≤ j_max.
    pub min_gap_seq: Vec<(u64, f64)>,
    pub verdict: DiophantineVerdict,
}

/// Threshold on the estimated exponent above which we refuse to call the
/// input typical.
const ALPHA_INCONCLUSIVE: f64 = 2.5;

/// Scans continued-fraction convergents of τ with denominator ≤ j_max.
///
/// The input is taken at its exact binary value, so rational detection is
/// exact for dyadic and short decimal inputs.
pub fn diophantine_check(tau: f64, j_max: u64) -> DiophantineReport {
    assert!(j_max >= 10, "j_max must be at least 10");
    let exact = BigRational::from_float(tau).expect("finite real period");

    // continued fraction of the exact value, convergents p/q by the
    // standard recurrence
    let mut num = exact.numer().clone();
    let mut den = exact.denom().clone();
    // convergent recurrence h_n = a_n h_{n-1} + h_{n-2}
    let mut p_prev = BigInt::from(0);
    let mut p = BigInt::from(1);
    let mut q_prev = BigInt::from(1);
    let mut q = BigInt::from(0);
    let mut gaps: Vec<(u64, f64)> = Vec::new();
    let mut alpha: f64 = 1.0;
    let mut rational = false;
    let mut inconclusive = false;
    let jmax_big = BigInt::from(j_max);

    loop {
        if den.is_zero() {
            // terminated continued fraction: exact rational input
            rational = true;
            break;
        }
        let a = num.clone() / den.clone();
        let r = num - &a * &den;
        num = den;
        den = r;
        let p_new = &a * &p + &p_prev;
        let q_new = &a * &q + &q_prev;
        p_prev = p;
        q_prev = q;
        p = p_new;
        q = q_new;
        if q > jmax_big {
            // the partial quotient that would have produced this
            // denominator is huge relative to the previous one: flag it
            if let (Some(aq), Some(qp)) = (a.to_f64(), q_prev.to_f64()) {
                if qp > 1.0 && aq.ln() / qp.ln() > ALPHA_INCONCLUSIVE - 1.0 {
                    inconclusive = true;
                }
            }
            break;
        }
        if q.is_zero() || q == BigInt::from(0) {
            continue;
        }
        let qj = match q.to_u64() {
            Some(v) if v >= 1 => v,
            _ => break,
        };
        // gap = |q τ - p| exactly, then rounded
        let gap_exact = (&exact * BigRational::from(q.clone())
            - BigRational::from(p.clone()))
        .abs();
        let gap = gap_exact.to_f64().unwrap_or(0.0);
        if gap == 0.0 {
            rational = true;
            gaps.push((qj, 0.0));
            break;
        }
        gaps.push((qj, gap));
    }

    // The exponent is read off the deep convergents only: gap_k is about
    // 1/q_{k+1}, so small denominators over-estimate wildly.
    let start = gaps.len() / 2;
    for &(qj, gap) in gaps.iter().skip(start.max(1)) {
        if qj >= 2 && gap > 0.0 {
            alpha = alpha.max(-(gap.ln()) / (qj as f64).ln());
        }
    }

    let verdict = if rational {
        DiophantineVerdict::Rational
    } else if inconclusive || alpha > ALPHA_INCONCLUSIVE {
        DiophantineVerdict::Inconclusive
    } else {
        DiophantineVerdict::InXLikely
    };

    DiophantineReport {
        tau,
        alpha_estimate: alpha,
        min_gap_seq: gaps,
        verdict,
    }
}
