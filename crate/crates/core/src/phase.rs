//! The phase function Ω_a(z,τ,σ) = Γ(z+a,τ,σ)/Γ(z-a,τ,σ), its summation
//! form, the R_a polynomial of its modular three-term relation, and the
//! semiclassical limit σ → 0, a → 0 with β = 2a/σ fixed, in which Ω
//! degenerates to θ₀(z,τ)^β.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::err::{EgError, EgResult};
use crate::eval::{Eval, EvalFlags};
use crate::gamma::{gamma_ell, region_classify, PeriodPair};
use crate::policy::TruncationPolicy;
use crate::qseries::theta0;

/// Arguments of one phase-function evaluation.
#[derive(Debug, Clone, Copy)]
pub struct PhasePoint {
    pub a: Complex64,
    pub z: Complex64,
    pub periods: PeriodPair,
}

/// Semiclassical limit parameters: σ = 2ε/β with integer β.
#[derive(Debug, Clone, Copy)]
pub struct SemiclassicalParams {
    pub beta: i64,
    pub eps: f64,
    pub tau: Complex64,
}

/// Ω_a(z,τ,σ) as a ratio of gamma evaluations.
pub fn omega(p: &PhasePoint, policy: &TruncationPolicy) -> EgResult<Eval> {
    let num = gamma_ell(p.z + p.a, &p.periods, policy)?;
    let den = gamma_ell(p.z - p.a, &p.periods, policy)?;
    Ok(num.div(den))
}

/// Summation form:
/// exp(-i Σ_{l≥1} cos(πl(2z-τ-σ)) sin(2πla) / (l sin(πlτ) sin(πlσ))).
///
/// Requires both z ± a inside the convergence strip. Handles a real σ
/// proportional to a (the semiclassical ray σ = 2a/β, β integer) by
/// evaluating sin(2πla)/sin(πlσ) = sin(βw)/sin(w) through a Chebyshev
/// recurrence wherever the denominator gets small.
pub fn omega_series(p: &PhasePoint, policy: &TruncationPolicy) -> EgResult<Eval> {
    let t = p.periods.tau;
    let s = p.periods.sigma;
    for (label, zz) in [("z+a", p.z + p.a), ("z-a", p.z - p.a)] {
        if !region_classify(zz, &p.periods).series_ok {
            return Err(EgError::domain(format!(
                "omega_series: {label} outside the summation region"
            )));
        }
    }
    // integer β with σ exactly on the ray 2a/β
    let beta_ray: Option<i64> = if s.im == 0.0 && p.a.im == 0.0 && s.re != 0.0 {
        let beta = 2.0 * p.a.re / s.re;
        (beta.fract() == 0.0).then_some(beta as i64)
    } else {
        None
    };
    let margin = t.im.abs() + s.im.abs()
        - ((p.z + p.a).im * 2.0 - t.im - s.im)
            .abs()
            .max(((p.z - p.a).im * 2.0 - t.im - s.im).abs());
    let rho = (-PI * margin.max(1e-12)).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut l = 1usize;
    loop {
        let lf = l as f64;
        let ratio = match beta_ray {
            Some(beta) => {
                let w = PI * lf * s.re;
                Complex64::new(sin_multiple_ratio(beta, w), 0.0)
            }
            None => (2.0 * PI * lf * p.a).sin() / (PI * lf * s).sin(),
        };
        let term = (PI * lf * (2.0 * p.z - t - s)).cos() * ratio / (lf * (PI * lf * t).sin());
        sum += term;
        let env = rho.powf(lf);
        if env > 0.0 && term.norm().is_finite() {
            scale = scale.max(term.norm() / env);
        }
        if l >= 8 {
            let tail = scale.max(1e-300) * rho.powf(lf + 1.0) / (1.0 - rho);
            if tail < policy.tol / 2.0 {
                let v = (-Complex64::i() * sum).exp();
                return Ok(Eval {
                    value: v,
                    terms: l,
                    tail_bound: tail * (1.0 + tail),
                    flags: EvalFlags::default(),
                });
            }
        }
        if l >= policy.max_terms {
            return Err(EgError::Convergence {
                terms: l,
                context: "omega_series".into(),
            });
        }
        l += 1;
    }
}

/// sin(βw)/sin(w) for integer β, stable at the zeros of sin(w): the
/// Chebyshev recurrence U_{β-1}(cos w).
fn sin_multiple_ratio(beta: i64, w: f64) -> f64 {
    if beta == 0 {
        return 0.0;
    }
    let sw = w.sin();
    if sw.abs() > 1e-8 {
        return (beta as f64 * w).sin() / sw;
    }
    let c = w.cos();
    let n = beta.unsigned_abs();
    let mut um1 = 0.0f64; // U_{-1}
    let mut u = 1.0f64; // U_0
    for _ in 1..n {
        let next = 2.0 * c * u - um1;
        um1 = u;
        u = next;
    }
    if beta > 0 {
        u
    } else {
        -u
    }
}

/// R_a(z,τ,σ) = (πia/3τσ)(6z² - 6(τ+σ-1)z + 2a² + τ² + σ² + 3τσ - 3τ - 3σ + 1);
/// equals iπ(Q(z+a;τ,σ) - Q(z-a;τ,σ)).
pub fn r_polynomial(
    a: Complex64,
    z: Complex64,
    tau: Complex64,
    sigma: Complex64,
) -> EgResult<Complex64> {
    if tau.norm() == 0.0 || sigma.norm() == 0.0 {
        return Err(EgError::domain("r_polynomial: zero period"));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(Complex64::i() * PI * a / (3.0 * tau * sigma)
        * (6.0 * z * z - 6.0 * (tau + sigma - one) * z
            + 2.0 * a * a
            + tau * tau
            + sigma * sigma
            + 3.0 * tau * sigma
            - 3.0 * tau
            - 3.0 * sigma
            + one))
}

/// r(z,τ) = Σ_{j≥1} cos(2πjz)/sin²(πjτ), the first-order coefficient of
/// Ω_ε(z+τ,τ,τ+2ε/β) in ε.
pub fn r_series(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> EgResult<Eval> {
    if tau.im <= 0.0 {
        return Err(EgError::domain("r_series requires Im tau > 0"));
    }
    let margin = 2.0 * tau.im - 2.0 * z.im.abs();
    if margin <= 0.0 {
        return Err(EgError::domain("r_series requires |Im z| < Im tau"));
    }
    let rho = (-PI * margin).exp();
    let c = 1.0 - (-2.0 * PI * tau.im).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut j = 1usize;
    loop {
        let jf = j as f64;
        // |term| ≤ 4 e^{-πj(2 Im τ - 2|Im z|)} / c²
        let tail = 4.0 * rho.powf(jf) / (c * c * (1.0 - rho));
        if tail < policy.tol {
            return Ok(Eval {
                value: sum,
                terms: j - 1,
                tail_bound: tail,
                flags: EvalFlags::default(),
            });
        }
        if j >= policy.max_terms {
            return Err(EgError::Convergence {
                terms: j,
                context: "r_series".into(),
            });
        }
        let sn = (PI * jf * tau).sin();
        sum += (2.0 * PI * jf * z).cos() / (sn * sn);
        j += 1;
    }
}

/// Ω_ε(z,τ,2ε/β) next to θ₀(z,τ)^β: returns both values and their
/// difference, which is O(ε) in the strip 0 < Im z < Im τ.
pub fn semiclassical_check(
    params: &SemiclassicalParams,
    z: Complex64,
    policy: &TruncationPolicy,
) -> EgResult<(Complex64, Complex64, f64)> {
    if params.tau.im <= 0.0 {
        return Err(EgError::domain("semiclassical_check requires Im tau > 0"));
    }
    if !(z.im > 0.0 && z.im < params.tau.im) {
        return Err(EgError::domain(
            "semiclassical_check requires 0 < Im z < Im tau",
        ));
    }
    if params.beta == 0 {
        let one = Complex64::new(1.0, 0.0);
        return Ok((one, one, 0.0));
    }
    let sigma = Complex64::new(2.0 * params.eps / params.beta as f64, 0.0);
    let point = PhasePoint {
        a: Complex64::new(params.eps, 0.0),
        z,
        periods: PeriodPair::new(params.tau, sigma),
    };
    let om = omega_series(&point, policy)?.value;
    let th = theta0(z, params.tau, policy)?.powi(params.beta).value;
    Ok((om, th, (om - th).norm()))
}
