//! The elliptic gamma function Γ(z,τ,σ): double-product and summation
//! evaluation, region classification, the extended parameter range
//! τ,σ ∈ C−R, wall crossing at Diophantine real periods, zero/pole
//! geometry, and the Q and P polynomials of the modular three-term
//! relations.
//!
//! The double product
//!     Γ(z,τ,σ) = (qr/x;q,r) / (x;q,r),   q = e^{2πiτ}, r = e^{2πiσ},
//! converges for Im τ, Im σ > 0. Negative-imaginary periods are reduced
//! to that case through Γ(z,-τ,σ) = 1/Γ(z+τ,τ,σ) and its σ twin, applied
//! recursively before evaluation so the kernel always runs with
//! |q|, |r| < 1.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::diophantine::{diophantine_check, DiophantineReport, DiophantineVerdict};
use crate::err::{EgError, EgResult};
use crate::eval::Eval;
use crate::policy::{expi, Nome, TruncationPolicy};
use crate::qseries::{qpoch2, theta0};

/// Half-plane classification of one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodClass {
    Upper,
    Lower,
    Real,
}

fn classify(p: Complex64) -> PeriodClass {
    if p.im > 0.0 {
        PeriodClass::Upper
    } else if p.im < 0.0 {
        PeriodClass::Lower
    } else {
        PeriodClass::Real
    }
}

/// The pair (τ, σ) with its half-plane classification.
#[derive(Debug, Clone, Copy)]
pub struct PeriodPair {
    pub tau: Complex64,
    pub sigma: Complex64,
    pub tau_class: PeriodClass,
    pub sigma_class: PeriodClass,
}

impl PeriodPair {
    pub fn new(tau: Complex64, sigma: Complex64) -> Self {
        PeriodPair {
            tau,
            sigma,
            tau_class: classify(tau),
            sigma_class: classify(sigma),
        }
    }

    pub fn swapped(&self) -> PeriodPair {
        PeriodPair::new(self.sigma, self.tau)
    }
}

/// Where a point can be evaluated.
#[derive(Debug, Clone, Copy)]
pub struct RegionVerdict {
    /// Both periods off the real axis: the (reflected) double product applies.
    pub product_ok: bool,
    /// The summation formula converges absolutely.
    pub series_ok: bool,
    /// |Im τ| + |Im σ| - |Im(2z-τ-σ)|; the series needs this positive.
    pub strip_margin: f64,
}

/// Classifies (z, τ, σ) for the two evaluation routes.
///
/// With one real period the series route additionally needs the period to
/// avoid rationals, which is checked through its continued fraction.
pub fn region_classify(z: Complex64, periods: &PeriodPair) -> RegionVerdict {
    let t = periods.tau;
    let s = periods.sigma;
    let strip_margin = t.im.abs() + s.im.abs() - (2.0 * z.im - t.im - s.im).abs();
    let product_ok =
        periods.tau_class != PeriodClass::Real && periods.sigma_class != PeriodClass::Real;
    let series_ok = match (periods.tau_class, periods.sigma_class) {
        (PeriodClass::Real, PeriodClass::Real) => false,
        (PeriodClass::Real, _) => {
            strip_margin > 0.0
                && diophantine_check(t.re, 1000).verdict != DiophantineVerdict::Rational
        }
        (_, PeriodClass::Real) => {
            strip_margin > 0.0
                && diophantine_check(s.re, 1000).verdict != DiophantineVerdict::Rational
        }
        _ => strip_margin > 0.0,
    };
    RegionVerdict {
        product_ok,
        series_ok,
        strip_margin,
    }
}

/// Γ(z,τ,σ) by the double product, with the reflection rules applied
/// first so the kernel sees |q|, |r| < 1.
///
/// A real period is a domain error here; `gamma_series` covers that case.
/// Inputs on the zero/pole lattice come back flagged, not as errors.
pub fn gamma_ell(z: Complex64, periods: &PeriodPair, policy: &TruncationPolicy) -> EgResult<Eval> {
    match (periods.tau_class, periods.sigma_class) {
        (PeriodClass::Real, _) => {
            return Err(EgError::domain(
                "gamma_ell: tau is real (use gamma_series on the Diophantine set)",
            ))
        }
        (_, PeriodClass::Real) => {
            return Err(EgError::domain(
                "gamma_ell: sigma is real (use gamma_series on the Diophantine set)",
            ))
        }
        (PeriodClass::Lower, _) => {
            let p = PeriodPair::new(-periods.tau, periods.sigma);
            return Ok(gamma_ell(z - periods.tau, &p, policy)?.recip());
        }
        (_, PeriodClass::Lower) => {
            let p = PeriodPair::new(periods.tau, -periods.sigma);
            return Ok(gamma_ell(z - periods.sigma, &p, policy)?.recip());
        }
        (PeriodClass::Upper, PeriodClass::Upper) => {}
    }
    let q = Nome::from_period(periods.tau);
    let r = Nome::from_period(periods.sigma);
    let x = expi(z);
    let num = qpoch2(q.value * r.value / x, &q, &r, policy)?;
    let den = qpoch2(x, &q, &r, policy)?;
    Ok(num.div(den))
}

/// Γ by the summation formula,
/// exp(-(i/2) Σ_{j≥1} sin(πj(2z-τ-σ)) / (j sin(πjτ) sin(πjσ))),
/// valid for τ,σ ∈ C−R in the strip of `region_classify`, and for one
/// real Diophantine period.
///
/// With a real period the term envelope is j^{α-1} e^{-πj·margin} with α
/// taken from the continued-fraction report plus a 0.5 safety margin; an
/// inconclusive report still evaluates but tags the result.
pub fn gamma_series(
    z: Complex64,
    periods: &PeriodPair,
    policy: &TruncationPolicy,
) -> EgResult<Eval> {
    let verdict = region_classify(z, periods);
    if !verdict.series_ok {
        return Err(EgError::domain(format!(
            "gamma_series: outside the convergence region (strip margin {})",
            verdict.strip_margin
        )));
    }
    let t = periods.tau;
    let s = periods.sigma;
    let margin = verdict.strip_margin;

    // envelope exponent and flag from the Diophantine report when one
    // period is real
    let mut alpha = 1.0f64;
    let mut unverified = false;
    let mut report: Option<DiophantineReport> = None;
    if periods.tau_class == PeriodClass::Real {
        report = Some(diophantine_check(t.re, 1000));
    } else if periods.sigma_class == PeriodClass::Real {
        report = Some(diophantine_check(s.re, 1000));
    }
    if let Some(rep) = &report {
        alpha = rep.alpha_estimate + 0.5;
        unverified = rep.verdict == DiophantineVerdict::Inconclusive;
    }

    let rho = (-PI * margin).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64; // running sup of |term_j| / envelope_j
    let mut violations = 0usize;
    let min_terms = if report.is_some() { 64 } else { 8 };
    let mut j = 1usize;
    loop {
        let jf = j as f64;
        let term = (PI * jf * (2.0 * z - t - s)).sin()
            / (jf * (PI * jf * t).sin() * (PI * jf * s).sin());
        let env = jf.powf(alpha - 1.0) * rho.powf(jf);
        let tn = term.norm();
        if env > 0.0 && tn.is_finite() {
            let c = tn / env;
            if j <= min_terms {
                scale = scale.max(c);
            } else if c > 10.0 * scale.max(1e-300) {
                violations += 1;
                if violations >= 50 {
                    return Err(EgError::Convergence {
                        terms: j,
                        context: "gamma_series envelope violated".into(),
                    });
                }
                scale = scale.max(c);
            } else {
                violations = 0;
            }
        }
        sum += term;

        if j >= min_terms {
            // tail ≤ scale Σ_{k>j} k^{α-1} ρ^k, bounded by a geometric
            // series once the envelope ratio drops below √ρ < 1
            let ratio = rho * ((jf + 2.0) / (jf + 1.0)).powf(alpha - 1.0);
            if ratio < 0.95 {
                let tail =
                    scale.max(1e-300) * (jf + 1.0).powf(alpha - 1.0) * rho.powf(jf + 1.0)
                        / (1.0 - ratio);
                if tail < policy.tol / 2.0 {
                    let v = (-Complex64::i() * 0.5 * sum).exp();
                    return Ok(Eval {
                        value: v,
                        terms: j,
                        tail_bound: 0.5 * tail * (1.0 + tail),
                        flags: crate::eval::EvalFlags {
                            near_lattice: false,
                            unverified_envelope: unverified,
                        },
                    });
                }
            }
        }
        if j >= policy.max_terms {
            return Err(EgError::Convergence {
                terms: j,
                context: "gamma_series".into(),
            });
        }
        j += 1;
    }
}

/// The degree-three polynomial of the modular three-term relations:
/// Q(z;τ,σ) = z³/3τσ - (τ+σ-1)z²/2τσ + (τ²+σ²+3τσ-3τ-3σ+1)z/6τσ
///          + (τ+σ-1)(τ⁻¹+σ⁻¹-1)/12.
pub fn q_polynomial(z: Complex64, tau: Complex64, sigma: Complex64) -> EgResult<Complex64> {
    if tau.norm() == 0.0 || sigma.norm() == 0.0 {
        return Err(EgError::domain("q_polynomial: zero period"));
    }
    let ts = tau * sigma;
    let one = Complex64::new(1.0, 0.0);
    Ok(z * z * z / (3.0 * ts) - (tau + sigma - one) * z * z / (2.0 * ts)
        + (tau * tau + sigma * sigma + 3.0 * ts - 3.0 * tau - 3.0 * sigma + one) * z / (6.0 * ts)
        + (tau + sigma - one) * (tau.inv() + sigma.inv() - one) / 12.0)
}

/// P(z,τ,σ) = -z²/τσ + z(τ⁻¹+σ⁻¹) - σ/6τ - τ/6σ - 1/2 = P(z,σ,τ).
pub fn p_polynomial(z: Complex64, tau: Complex64, sigma: Complex64) -> EgResult<Complex64> {
    if tau.norm() == 0.0 || sigma.norm() == 0.0 {
        return Err(EgError::domain("p_polynomial: zero period"));
    }
    Ok(-z * z / (tau * sigma) + z * (tau.inv() + sigma.inv())
        - sigma / (6.0 * tau)
        - tau / (6.0 * sigma)
        - 0.5)
}

/// A closed axis-aligned rectangle in the z-plane.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re < self.re_max && z.im >= self.im_min && z.im < self.im_max
    }
}

/// Enumerates the simple zeros z = (j+1)τ + (k+1)σ + l and simple poles
/// z = -jτ - kσ + l inside `window`, with j,k ≤ max_index.
pub fn zeros_poles(
    periods: &PeriodPair,
    window: &Rect,
    max_index: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    for j in 0..=max_index {
        for k in 0..=max_index {
            for (base, out) in [
                (
                    (j as f64 + 1.0) * periods.tau + (k as f64 + 1.0) * periods.sigma,
                    &mut zeros,
                ),
                (
                    -(j as f64) * periods.tau - (k as f64) * periods.sigma,
                    &mut poles,
                ),
            ] {
                let l_min = (window.re_min - base.re).ceil() as i64;
                let l_max = (window.re_max - base.re).floor() as i64;
                for l in l_min..=l_max {
                    let z = base + l as f64;
                    if window.contains(z) {
                        out.push(z);
                    }
                }
            }
        }
    }
    (zeros, poles)
}

/// Winding number of Γ(·,τ,σ) around the boundary of `window`, divided by
/// 2π: equals #zeros - #poles inside by the argument principle. Purely
/// diagnostic; used to cross-check `zeros_poles`.
pub fn argument_principle_count(
    periods: &PeriodPair,
    window: &Rect,
    policy: &TruncationPolicy,
) -> EgResult<i64> {
    let corners = [
        Complex64::new(window.re_min, window.im_min),
        Complex64::new(window.re_max, window.im_min),
        Complex64::new(window.re_max, window.im_max),
        Complex64::new(window.re_min, window.im_max),
    ];
    let mut total = 0.0f64;
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        // start fine enough that no sub-segment can hide a 2π wrap, then
        // bisect until each argument step is below π/2
        let n0 = 64;
        let mut stack: Vec<(Complex64, Complex64)> = (0..n0)
            .map(|k| {
                let t0 = k as f64 / n0 as f64;
                let t1 = (k + 1) as f64 / n0 as f64;
                (a + (b - a) * t0, a + (b - a) * t1)
            })
            .collect();
        while let Some((u, v)) = stack.pop() {
            let fu = gamma_ell(u, periods, policy)?.value;
            let fv = gamma_ell(v, periods, policy)?.value;
            let d = (fv / fu).arg();
            if d.abs() > PI / 2.0 && (v - u).norm() > 1e-9 {
                let m = (u + v) / 2.0;
                stack.push((u, m));
                stack.push((m, v));
            } else {
                total += d;
            }
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Identities exposed as computable residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityName {
    ShiftSigma,
    ShiftTau,
    Periodicity,
    Symmetry,
    Normalization,
    ReflectSigma,
    ReflectTau,
    ReflectFull,
    ModTauPlus1,
    ModSigmaPlus1,
    ModTauPlusSigma,
    ModSl3Third,
    ModSl3Fourth,
    Characterization,
    ExtendTau,
    ExtendSigma,
}

impl IdentityName {
    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityName::ShiftSigma => "shift_sigma",
            IdentityName::ShiftTau => "shift_tau",
            IdentityName::Periodicity => "periodicity",
            IdentityName::Symmetry => "symmetry",
            IdentityName::Normalization => "normalization",
            IdentityName::ReflectSigma => "reflect_sigma",
            IdentityName::ReflectTau => "reflect_tau",
            IdentityName::ReflectFull => "reflect_full",
            IdentityName::ModTauPlus1 => "mod_tau_plus_1",
            IdentityName::ModSigmaPlus1 => "mod_sigma_plus_1",
            IdentityName::ModTauPlusSigma => "mod_tau_plus_sigma",
            IdentityName::ModSl3Third => "mod_sl3_third",
            IdentityName::ModSl3Fourth => "mod_sl3_fourth",
            IdentityName::Characterization => "characterization",
            IdentityName::ExtendTau => "extend_tau",
            IdentityName::ExtendSigma => "extend_sigma",
        }
    }

    pub const ALL: [IdentityName; 16] = [
        IdentityName::ShiftSigma,
        IdentityName::ShiftTau,
        IdentityName::Periodicity,
        IdentityName::Symmetry,
        IdentityName::Normalization,
        IdentityName::ReflectSigma,
        IdentityName::ReflectTau,
        IdentityName::ReflectFull,
        IdentityName::ModTauPlus1,
        IdentityName::ModSigmaPlus1,
        IdentityName::ModTauPlusSigma,
        IdentityName::ModSl3Third,
        IdentityName::ModSl3Fourth,
        IdentityName::Characterization,
        IdentityName::ExtendTau,
        IdentityName::ExtendSigma,
    ];
}

/// Both sides of one identity at one sample point, plus lattice flags
/// merged from every factor involved.
#[derive(Debug, Clone, Copy)]
pub struct IdentityEval {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub near_lattice: bool,
}

/// Evaluates the named identity at (z, τ, σ). All Γ and θ₀ factors go
/// through the reflected product, so negative-imaginary derived periods
/// are fine; real derived periods surface as domain errors naming the
/// offending factor.
pub fn identity_residual(
    name: IdentityName,
    z: Complex64,
    periods: &PeriodPair,
    policy: &TruncationPolicy,
) -> EgResult<IdentityEval> {
    let t = periods.tau;
    let s = periods.sigma;
    let g = |zz: Complex64, tt: Complex64, ss: Complex64| -> EgResult<Eval> {
        gamma_ell(zz, &PeriodPair::new(tt, ss), policy)
    };
    let th = |zz: Complex64, tt: Complex64| -> EgResult<Eval> { theta0(zz, tt, policy) };
    let one = Complex64::new(1.0, 0.0);

    let (lhs, rhs) = match name {
        IdentityName::ShiftSigma => {
            let l = g(z + s, t, s)?;
            let r = th(z, t)?.mul(g(z, t, s)?);
            (l, r)
        }
        IdentityName::ShiftTau => {
            let l = g(z + t, t, s)?;
            let r = th(z, s)?.mul(g(z, t, s)?);
            (l, r)
        }
        IdentityName::Periodicity => (g(z + one, t, s)?, g(z, t, s)?),
        IdentityName::Symmetry => (g(z, t, s)?, g(z, s, t)?),
        IdentityName::Normalization => (g((t + s) / 2.0, t, s)?, Eval::exact(one)),
        IdentityName::ReflectSigma => {
            let l = g(z, t, s)?.mul(g(s - z, t, s)?);
            let r = th(z, s)?.recip();
            (l, r)
        }
        IdentityName::ReflectTau => {
            let l = g(z, t, s)?.mul(g(t - z, t, s)?);
            let r = th(z, t)?.recip();
            (l, r)
        }
        IdentityName::ReflectFull => (g(z, t, s)?.mul(g(t + s - z, t, s)?), Eval::exact(one)),
        IdentityName::ModTauPlus1 => (g(z, t + one, s)?, g(z, t, s)?),
        IdentityName::ModSigmaPlus1 => (g(z, t, s + one)?, g(z, t, s)?),
        IdentityName::ModTauPlusSigma => {
            let l = g(z, t + s, s)?;
            let r = g(z, t, s)?.div(g(z + t, t, s + t)?);
            (l, r)
        }
        IdentityName::ModSl3Third => {
            let l = g(z / s, t / s, -s.inv())?;
            let phase = (Complex64::i() * PI * q_polynomial(z, t, s)?).exp();
            let r = g((z - s) / t, -t.inv(), -s / t)?.mul(g(z, t, s)?).scale(phase);
            (l, r)
        }
        IdentityName::ModSl3Fourth => {
            let l = g(z / t, -t.inv(), s / t)?;
            let phase = (Complex64::i() * PI * q_polynomial(z, t, s)?).exp();
            let r = g((z - t) / s, -t / s, -s.inv())?.mul(g(z, t, s)?).scale(phase);
            (l, r)
        }
        IdentityName::Characterization => {
            // worst clause of: shift in σ, 1-periodicity, normalization
            let a = identity_residual(IdentityName::ShiftSigma, z, periods, policy)?;
            let b = identity_residual(IdentityName::Periodicity, z, periods, policy)?;
            let c = identity_residual(IdentityName::Normalization, z, periods, policy)?;
            let rr = |e: &IdentityEval| crate::report::rel_residual(e.lhs, e.rhs);
            let worst = [a, b, c]
                .into_iter()
                .max_by(|x, y| rr(x).total_cmp(&rr(y)))
                .unwrap();
            return Ok(worst);
        }
        IdentityName::ExtendTau => (g(z, -t, s)?.mul(g(z + t, t, s)?), Eval::exact(one)),
        IdentityName::ExtendSigma => (g(z, t, -s)?.mul(g(z + s, t, s)?), Eval::exact(one)),
    };
    Ok(IdentityEval {
        lhs: lhs.value,
        rhs: rhs.value,
        near_lattice: lhs.flags.near_lattice || rhs.flags.near_lattice,
    })
}

/// Values of the summation formula at τ = tau_real + iε for each ε in the
/// sequence, both signs, plus ε = 0, sorted by ε.
///
/// Requires tau_real off the rationals (continued-fraction check) and z
/// inside the strip |Im(2z-σ)| < |Im σ|.
pub fn wall_crossing_scan(
    z: Complex64,
    tau_real: f64,
    sigma: Complex64,
    eps_sequence: &[f64],
    policy: &TruncationPolicy,
) -> EgResult<Vec<(f64, Complex64)>> {
    let rep = diophantine_check(tau_real, 1000);
    if rep.verdict == DiophantineVerdict::Rational {
        return Err(EgError::domain(
            "wall_crossing_scan: rational real period",
        ));
    }
    if (2.0 * z.im - sigma.im).abs() >= sigma.im.abs() {
        return Err(EgError::domain(
            "wall_crossing_scan: |Im(2z-sigma)| must stay below |Im sigma|",
        ));
    }
    let mut eps_all: Vec<f64> = Vec::with_capacity(2 * eps_sequence.len() + 1);
    for &e in eps_sequence {
        eps_all.push(e.abs());
        eps_all.push(-e.abs());
    }
    eps_all.push(0.0);
    eps_all.sort_by(f64::total_cmp);
    eps_all.dedup();
    let mut out = Vec::with_capacity(eps_all.len());
    for &e in &eps_all {
        let periods = PeriodPair::new(Complex64::new(tau_real, e), sigma);
        let v = gamma_series(z, &periods, policy)?;
        out.push((e, v.value));
    }
    Ok(out)
}
