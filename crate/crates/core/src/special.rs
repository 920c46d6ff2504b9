//! Degenerations and special values: the dilogarithm, the dilogarithmic
//! psi function, equal-period and rationally-dependent-period product
//! formulas, and the Jackson q-gamma ladder down to the Euler gamma
//! function.
//!
//! Everything in the equal-period family reduces to
//!     ψ(t) = exp(t ln(1-e^{-2πit}) - Li₂(e^{-2πit})/2πi),
//! which has a zero of order n at t = n and a pole of order n at t = -n
//! and tends to 1 like |Im t| e^{-2π|Im t|} down the imaginary axis. For
//! Im t above the direct-series strip, ψ is continued with a vertical
//! contour integral of s/(e^{2πis}-1); the contour may pass integers on
//! either side because the residues only contribute full turns of the
//! exponential.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;

use crate::err::{EgError, EgResult};
use crate::eval::{Eval, EvalFlags};
use crate::gamma::{gamma_ell, q_polynomial, PeriodPair};
use crate::policy::{expi, Nome, PsiPolicy, TruncationPolicy};
use crate::qseries::{qpoch, theta0};

/// Li₂(x) = Σ_{j≥1} x^j/j² on the closed unit disk.
///
/// Interior points use the plain series with a geometric tail bound. On
/// the circle (x ≠ 1) the series only converges like 1/j, so the tail is
/// Abel-summed: six rounds of summation by parts turn it into a finite
/// boundary sum plus a remainder that shrinks like M^{-7}/(1-x)^6. The
/// forward differences of 1/j² are computed in exact rational arithmetic
/// because they cancel 17 digits at the scales involved.
pub fn dilog(x: Complex64, policy: &TruncationPolicy) -> EgResult<Eval> {
    let r = x.norm();
    if r > 1.0 + 1e-14 {
        return Err(EgError::domain("dilog requires |x| <= 1"));
    }
    if (x - 1.0).norm() < 1e-14 {
        // the convergent value of the series at x = 1
        return Ok(Eval::exact(Complex64::new(PI * PI / 6.0, 0.0)));
    }
    if r < 1.0 - 1e-9 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut xj = x;
        let mut j = 1usize;
        loop {
            // bound on Σ_{k≥j} x^k/k², covering the not-yet-added term
            let tail = r.powi(j as i32) / ((j * j) as f64 * (1.0 - r));
            if tail < policy.tol / 2.0 {
                return Ok(Eval {
                    value: s,
                    terms: j - 1,
                    tail_bound: tail,
                    flags: EvalFlags::default(),
                });
            }
            if j >= policy.max_terms {
                return Err(EgError::Convergence {
                    terms: j,
                    context: "dilog series".into(),
                });
            }
            s += xj / (j * j) as f64;
            xj *= x;
            j += 1;
        }
    }
    // on the unit circle, away from 1
    const M: usize = 2000;
    const P: usize = 6;
    let mut s = Complex64::new(0.0, 0.0);
    let mut xj = x;
    for j in 1..M {
        s += xj / (j * j) as f64;
        xj *= x;
    }
    // Δ^p a_j for a_j = 1/j², exact
    let diff = |p: usize, j: usize| -> f64 {
        let mut acc = BigRational::zero();
        let mut binom = BigRational::one();
        for m in 0..=p {
            let jm = BigRational::new((((j + m) * (j + m)) as i64).into(), 1.into());
            let term = &binom / jm;
            if (p - m) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            // next binomial coefficient C(p, m+1)
            binom = binom * BigRational::new(((p - m) as i64).into(), ((m + 1) as i64).into());
        }
        acc.to_f64().unwrap()
    };
    // T_p = Σ_{j≥M} Δ^p a_j x^j, built downward from a directly-summed
    // highest level
    let one = Complex64::new(1.0, 0.0);
    let mut t_level = Complex64::new(0.0, 0.0);
    let mut xjj = x.powu(M as u32);
    for j in M..M + 40 {
        t_level += xjj * diff(P, j);
        xjj *= x;
    }
    let xm = x.powu(M as u32);
    for p in (0..P).rev() {
        t_level = (xm * diff(p, M) + x * t_level) / (one - x);
    }
    let guard = (one - x).norm();
    let tail_bound = 800.0 / ((M as f64).powi((P + 1) as i32) * guard.powi(P as i32))
        + 1e-15 / guard;
    Ok(Eval {
        value: s + t_level,
        terms: M,
        tail_bound,
        flags: EvalFlags::default(),
    })
}

/// e^w - 1 without cancellation for small |w|.
fn cexpm1(w: Complex64) -> Complex64 {
    if w.norm() > 0.5 {
        return w.exp() - 1.0;
    }
    let mut term = w;
    let mut s = Complex64::new(0.0, 0.0);
    for k in 2..30 {
        s += term;
        term = term * w / k as f64;
        if term.norm() < 1e-18 * (s.norm() + 1e-30) {
            break;
        }
    }
    s + term
}

/// s/(e^{2πis}-1), with the exponential reduced by the nearest integer
/// (it is 1-periodic) so the pole structure is resolved accurately.
fn psi_integrand(s: Complex64) -> Complex64 {
    let n = s.re.round();
    let w = Complex64::i() * 2.0 * PI * (s - n);
    if w.norm() < 1e-8 && n.abs() < 0.5 {
        // removable singularity at s = 0
        return Complex64::new(1.0, 0.0) / (Complex64::i() * 2.0 * PI) - s / 2.0;
    }
    s / cexpm1(w)
}

/// Romberg integration over one straight segment. Returns the value and
/// the last diagonal difference as an error estimate.
fn romberg_segment(a: Complex64, b: Complex64, tol: f64) -> (Complex64, f64) {
    let f = psi_integrand;
    let h = b - a;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut t = (f(a) + f(b)) * 0.5;
    rows.push(vec![t * h]);
    let mut n = 1usize;
    let mut last_err = f64::INFINITY;
    for k in 1..=12 {
        n *= 2;
        let mut add = Complex64::new(0.0, 0.0);
        for i in (1..n).step_by(2) {
            add += f(a + h * (i as f64 / n as f64));
        }
        t = t + add;
        let trap = t * h / n as f64;
        let mut row = vec![trap];
        let prev = &rows[k - 1];
        let mut pow4 = 1.0;
        for j in 1..=k {
            pow4 *= 4.0;
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (pow4 - 1.0);
            row.push(v);
        }
        let err = (row[k] - prev[k - 1]).norm();
        rows.push(row);
        // two consecutive small diagonal steps, so a deceptive plateau
        // from a nearby pole is not mistaken for convergence
        if k >= 6 && err < tol && last_err < 10.0 * tol {
            return (rows[k][k], err);
        }
        last_err = err;
    }
    let k = rows.len() - 1;
    (rows[k][k], last_err)
}

/// Adaptive integration: Romberg with bisection wherever the segment sits
/// too close to a pole of the integrand for Romberg to converge cleanly.
fn integrate_segment(a: Complex64, b: Complex64, tol: f64, depth: usize) -> Complex64 {
    let (v, err) = romberg_segment(a, b, tol);
    if err < tol || depth == 0 || (b - a).norm() < 1e-6 {
        return v;
    }
    let m = (a + b) / 2.0;
    integrate_segment(a, m, tol / 2.0, depth - 1) + integrate_segment(m, b, tol / 2.0, depth - 1)
}

fn psi_exponent_direct(t: Complex64, policy: &PsiPolicy) -> EgResult<Complex64> {
    let x = (-Complex64::i() * 2.0 * PI * t).exp();
    // ln(1-x) on the branch -Σ x^j/j, which is the principal branch for
    // |x| < 1
    let ln1mx = (Complex64::new(1.0, 0.0) - x).ln();
    let li2 = dilog(x, &TruncationPolicy::with_tol(policy.series_tol))?.value;
    Ok(t * ln1mx + Complex64::i() / (2.0 * PI) * li2)
}

/// ψ(t), analytic everywhere except a pole of order n at t = -n.
///
/// Below the strip Im t < -continuation_strip the defining series is
/// used; above, the exponent is carried up the vertical contour from the
/// strip to t. A contour that would cross the real axis within 0.2 of a
/// nonzero integer is first shifted sideways by 0.3.
pub fn psi_fn(t: Complex64, policy: &PsiPolicy) -> EgResult<Eval> {
    // poles at negative integers
    if t.im.abs() < 1e-8 && t.re < -0.5 {
        let n = t.re.round();
        if (t.re - n).abs() < 1e-8 {
            return Err(EgError::Pole {
                order: (-n) as u32,
                location: format!("t = {n}"),
            });
        }
    }
    if t.im <= -policy.continuation_strip {
        let e = psi_exponent_direct(t, policy)?;
        return Ok(Eval {
            value: e.exp(),
            terms: 0,
            tail_bound: policy.series_tol,
            flags: EvalFlags::default(),
        });
    }
    // contour: optional sideways jog, then straight down into the strip
    let base_im = -policy.continuation_strip.max(1.0);
    let mut waypoints = vec![t];
    let crosses_axis = t.im > 0.0;
    let nearest = t.re.round();
    let mut re_line = t.re;
    if crosses_axis && nearest.abs() > 0.5 && (t.re - nearest).abs() < 0.2 {
        re_line = nearest + if t.re >= nearest { 0.3 } else { -0.3 };
        waypoints.push(Complex64::new(re_line, t.im));
    }
    waypoints.push(Complex64::new(re_line, base_im));
    let mut integral = Complex64::new(0.0, 0.0);
    for w in waypoints.windows(2) {
        integral += integrate_segment(w[0], w[1], policy.series_tol / 10.0, 8);
    }
    let bottom = *waypoints.last().unwrap();
    let e = psi_exponent_direct(bottom, policy)? - Complex64::i() * 2.0 * PI * integral;
    Ok(Eval {
        value: e.exp(),
        terms: policy.quadrature_nodes,
        tail_bound: policy.series_tol * 10.0,
        flags: EvalFlags::default(),
    })
}

/// Right-hand side of the equal-period product formula:
/// Γ(z,τ,τ) = e^{-iπQ(z;τ,τ)} / θ₀(z/τ,-1/τ) · ∏_{k≥0} ψ((k+1+z)/τ)/ψ((k-z)/τ),
/// truncated at k_max with the ψ → 1 envelope bounding the tail.
pub fn gamma_equal_periods(
    z: Complex64,
    tau: Complex64,
    k_max: usize,
    policy: &TruncationPolicy,
) -> EgResult<Eval> {
    if tau.im <= 0.0 {
        return Err(EgError::domain("gamma_equal_periods requires Im tau > 0"));
    }
    // z on the lattice Z + τZ is excluded
    let m = (z.im / tau.im).round();
    let rest = z - m * tau;
    if (rest.re - rest.re.round()).abs() < 1e-10 && rest.im.abs() < 1e-10 {
        return Err(EgError::domain("gamma_equal_periods: z on the period lattice"));
    }
    let psi_pol = PsiPolicy {
        series_tol: policy.tol / 10.0,
        ..PsiPolicy::default()
    };
    let q = q_polynomial(z, tau, tau)?;
    let pref = (-Complex64::i() * PI * q).exp();
    let th = theta0(z / tau, -tau.inv(), policy)?;
    let mut prod = Eval::exact(pref).div(th);
    for k in 0..=k_max {
        let kf = k as f64;
        let num = psi_fn((kf + 1.0 + z) / tau, &psi_pol)?;
        let den = psi_fn((kf - z) / tau, &psi_pol)?;
        prod = prod.mul(num.div(den));
    }
    // |ψ(t)-1| ≤ 3|t| e^{-2π|Im t|} once |Im t| ≥ 1; both arguments climb
    // by Im(1/τ̄)-steps, so the neglected factors form a geometric tail
    let step = (1.0 / tau).im.abs();
    let y0 = ((k_max as f64 + 2.0 + z.re) * step).max(1.0);
    let tnorm = ((k_max as f64 + 2.0).powi(2) + z.norm().powi(2)).sqrt() / tau.norm();
    let rho = (-2.0 * PI * step).exp();
    let per = 3.0 * tnorm * (-2.0 * PI * y0).exp();
    let tail = 2.0 * per / (1.0 - rho);
    if tail > policy.tol {
        return Err(EgError::Convergence {
            terms: k_max,
            context: format!("gamma_equal_periods tail bound {tail:.3e} above tol"),
        });
    }
    prod.tail_bound += tail;
    Ok(prod)
}

/// Γ(z,τ,τ)·e^{iπQ(z;τ,τ)} along the ray τ = s·τ₀; the ratio tends to 1
/// exponentially in 1/Im τ when z = u + vτ₀ with -1 < u < 0.
pub fn corollary_asymptotic(
    z: Complex64,
    tau0: Complex64,
    s_sequence: &[f64],
    policy: &TruncationPolicy,
) -> EgResult<Vec<(f64, Complex64)>> {
    if tau0.im <= 0.0 {
        return Err(EgError::domain("corollary_asymptotic requires Im tau0 > 0"));
    }
    let v = z.im / tau0.im;
    let u = z.re - v * tau0.re;
    if !(-1.0 < u && u < 0.0) {
        return Err(EgError::domain(
            "corollary_asymptotic requires z = u + v tau0 with -1 < u < 0",
        ));
    }
    let mut out = Vec::with_capacity(s_sequence.len());
    for &s in s_sequence {
        let tau = s * tau0;
        let g = gamma_ell(z, &PeriodPair::new(tau, tau), policy)?;
        let q = q_polynomial(z, tau, tau)?;
        out.push((s, g.value * (Complex64::i() * PI * q).exp()));
    }
    Ok(out)
}

/// Representation counts and exponent tables for one coprime pair (a,b).
#[derive(Debug, Clone)]
pub struct FactorizationData {
    pub a: i64,
    pub b: i64,
    /// N_{a,b}(j) for j in [0, ab): the number of ways j = ar + bs.
    pub n_ab_table: Vec<i64>,
    /// α_k for k in [0, ab).
    pub alpha_table: Vec<i64>,
}

impl FactorizationData {
    pub fn new(a: i64, b: i64) -> EgResult<FactorizationData> {
        let alpha_table = alpha_exponents(a, b)?;
        let n_ab_table = (0..a * b).map(|j| n_ab(j, a, b)).collect();
        Ok(FactorizationData {
            a,
            b,
            n_ab_table,
            alpha_table,
        })
    }
}

/// Number of ways j = ar + bs with r, s ≥ 0, by enumeration over r.
pub fn n_ab(j: i64, a: i64, b: i64) -> i64 {
    assert!(j >= 0 && a >= 1 && b >= 1);
    let mut count = 0;
    let mut r = 0;
    while a * r <= j {
        if (j - a * r) % b == 0 {
            count += 1;
        }
        r += 1;
    }
    count
}

/// Exponent table α_k, k ∈ [0, ab): α_k = k+1-ab when k = ar+bs is
/// representable, α_k = k+1 otherwise. Requires gcd(a,b) = 1; the
/// construction asserts the representability dichotomy between k and
/// ab-k on the way.
pub fn alpha_exponents(a: i64, b: i64) -> EgResult<Vec<i64>> {
    if a < 1 || b < 1 {
        return Err(EgError::domain("alpha_exponents requires positive a, b"));
    }
    if num_integer::gcd(a, b) != 1 {
        return Err(EgError::domain("alpha_exponents requires gcd(a,b) = 1"));
    }
    let ab = a * b;
    let mut out = Vec::with_capacity(ab as usize);
    for k in 0..ab {
        let rep = n_ab(k, a, b) > 0;
        // exactly one of: k representable, or ab-k = a(i+1)+b(j+1)
        let shifted = ab - k - a - b;
        let rep_conjugate = shifted >= 0 && n_ab(shifted, a, b) > 0;
        debug_assert!(rep ^ rep_conjugate, "dichotomy failed at k = {k}");
        out.push(if rep { k + 1 - ab } else { k + 1 });
    }
    Ok(out)
}

/// ∏_{r<b} ∏_{s<a} Γ(z+(ar+bs)τ, abτ, abτ); equals Γ(z, aτ, bτ).
pub fn gamma_ab_factorization(
    z: Complex64,
    tau: Complex64,
    a: i64,
    b: i64,
    policy: &TruncationPolicy,
) -> EgResult<Eval> {
    if tau.im <= 0.0 || a < 1 || b < 1 {
        return Err(EgError::domain("gamma_ab_factorization: need Im tau > 0, a,b >= 1"));
    }
    let abt = (a * b) as f64 * tau;
    let pp = PeriodPair::new(abt, abt);
    let mut prod = Eval::exact(Complex64::new(1.0, 0.0));
    for r in 0..b {
        for s in 0..a {
            let shift = (a * r + b * s) as f64 * tau;
            prod = prod.mul(gamma_ell(z + shift, &pp, policy)?);
        }
    }
    Ok(prod)
}

/// Γ(z,τ,τ)·∏_{k<ab} θ₀(z+kτ, abτ)^{α_k}; equals Γ(z, aτ, bτ)^{ab} for
/// coprime a, b.
pub fn gamma_ab_theta_form(
    z: Complex64,
    tau: Complex64,
    a: i64,
    b: i64,
    policy: &TruncationPolicy,
) -> EgResult<Eval> {
    if tau.im <= 0.0 {
        return Err(EgError::domain("gamma_ab_theta_form requires Im tau > 0"));
    }
    let alphas = alpha_exponents(a, b)?;
    let ab = a * b;
    let mut prod = gamma_ell(z, &PeriodPair::new(tau, tau), policy)?;
    for (k, &alpha) in alphas.iter().enumerate() {
        if alpha == 0 {
            continue;
        }
        let th = theta0(z + k as f64 * tau, ab as f64 * tau, policy)?;
        prod = prod.mul(th.powi(alpha));
    }
    Ok(prod)
}

/// Jackson's q-gamma function Γ_trig(s,σ) = (1-r)^{1-s} (r;r)/(r^s;r)
/// with r = e^{2πiσ}; the power takes the principal logarithm.
pub fn gamma_trig(s: Complex64, sigma: Complex64, policy: &TruncationPolicy) -> EgResult<Eval> {
    if sigma.im <= 0.0 {
        return Err(EgError::domain("gamma_trig requires Im sigma > 0"));
    }
    let r = Nome::from_period(sigma);
    let rs = expi(sigma * s);
    let num = qpoch(r.value, &r, policy)?;
    let den = qpoch(rs, &r, policy)?;
    if den.value.norm() == 0.0 || den.flags.near_lattice {
        let mut e = num.div(den);
        e.flags.near_lattice = true;
        return Ok(e);
    }
    let pow = ((Complex64::new(1.0, 0.0) - s) * (Complex64::new(1.0, 0.0) - r.value).ln()).exp();
    Ok(num.div(den).scale(pow))
}

/// The normalized interpolation between Γ and Γ_trig:
/// Γ̄(s,τ,σ) = (r;r)/(q;q) · θ₀(σ,τ)^{1-s} · Γ(σs,τ,σ), with u(1) = 1.
pub fn gamma_bar(
    s: Complex64,
    tau: Complex64,
    sigma: Complex64,
    policy: &TruncationPolicy,
) -> EgResult<Eval> {
    if tau.im <= 0.0 || sigma.im <= 0.0 {
        return Err(EgError::domain("gamma_bar requires Im tau, Im sigma > 0"));
    }
    let q = Nome::from_period(tau);
    let r = Nome::from_period(sigma);
    let th = theta0(sigma, tau, policy)?;
    if th.value.norm() < 1e-300 {
        return Err(EgError::domain("gamma_bar: theta0(sigma,tau) vanishes"));
    }
    let pow = ((Complex64::new(1.0, 0.0) - s) * th.value.ln()).exp();
    let g = gamma_ell(sigma * s, &PeriodPair::new(tau, sigma), policy)?;
    let scale = qpoch(r.value, &r, policy)?.div(qpoch(q.value, &q, policy)?);
    Ok(scale.mul(g).scale(pow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::rel_residual;

    const POL: TruncationPolicy = TruncationPolicy {
        tol: 1e-12,
        max_terms: 1_000_000,
        tail_bound_mode: crate::policy::TailBoundMode::Geometric,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dilog_zero_and_half() {
        assert_eq!(dilog(c(0.0, 0.0), &POL).unwrap().value, c(0.0, 0.0));
        // 200-term partial sum; also π²/12 - ln²2/2 in closed form
        let mut s = 0.0f64;
        for j in 1..=200 {
            s += 0.5f64.powi(j) / (j * j) as f64;
        }
        let closed = PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert!((s - closed).abs() < 1e-15);
        let tight = TruncationPolicy::with_tol(1e-14);
        let v = dilog(c(0.5, 0.0), &tight).unwrap();
        assert!((v.value - c(closed, 0.0)).norm() < 1e-13);
        assert!((v.value - c(closed, 0.0)).norm() <= v.tail_bound + 1e-15);
    }

    #[test]
    fn dilog_at_one() {
        // Σ 1/j²: 10⁶-term sum with the Euler–Maclaurin tail
        // Σ_{j>N} 1/j² = 1/N - 1/2N² + 1/6N³ + O(N⁻⁵)
        let n = 1_000_000usize;
        let mut s = 0.0f64;
        for j in (1..=n).rev() {
            s += 1.0 / (j * j) as f64;
        }
        let nf = n as f64;
        let oracle = s + 1.0 / nf - 1.0 / (2.0 * nf * nf) + 1.0 / (6.0 * nf * nf * nf);
        let v = dilog(c(1.0, 0.0), &POL).unwrap().value;
        assert!((v.re - oracle).abs() < 1e-12);
        assert!((v.re - PI * PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn dilog_on_circle() {
        // Li₂(i) = -π²/48 + i·G, G Catalan's constant
        let g = 0.915_965_594_177_219_0;
        let v = dilog(c(0.0, 1.0), &POL).unwrap();
        assert!((v.value - c(-PI * PI / 48.0, g)).norm() < 1e-12);
        // independent slow partial sum as a sanity bracket
        let mut s = c(0.0, 0.0);
        let mut xj = c(0.0, 1.0);
        for j in 1..200_000usize {
            s += xj / (j * j) as f64;
            xj *= c(0.0, 1.0);
        }
        assert!((v.value - s).norm() < 1e-4);

        // generic circle point, frozen from a high-precision evaluation
        let x = c(2.5f64.cos(), 2.5f64.sin());
        let w = dilog(x, &POL).unwrap();
        assert!((w.value - c(-0.7195567501390151, 0.4335982032355328)).norm() < 1e-11);
    }

    #[test]
    fn dilog_domain() {
        assert!(dilog(c(1.2, 0.0), &POL).is_err());
    }

    #[test]
    fn psi_at_zero() {
        let v = psi_fn(c(0.0, 0.0), &PsiPolicy::default()).unwrap().value;
        let expect = (Complex64::i() * PI / 12.0).exp();
        assert!((v - expect).norm() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn psi_functional_equation() {
        // ψ(t+1) = (1-e^{-2πit}) ψ(t), direct-region point
        let t = c(0.3, -2.0);
        let pol = PsiPolicy::default();
        let lhs = psi_fn(t + 1.0, &pol).unwrap().value;
        let rhs = (c(1.0, 0.0) - (-Complex64::i() * 2.0 * PI * t).exp())
            * psi_fn(t, &pol).unwrap().value;
        assert!(rel_residual(lhs, rhs) < 1e-12);
    }

    #[test]
    fn psi_functional_equation_continued_region() {
        // same equation across the continuation strip
        let t = c(-0.4, 0.6);
        let pol = PsiPolicy::default();
        let lhs = psi_fn(t + 1.0, &pol).unwrap().value;
        let rhs = (c(1.0, 0.0) - (-Complex64::i() * 2.0 * PI * t).exp())
            * psi_fn(t, &pol).unwrap().value;
        assert!(rel_residual(lhs, rhs) < 1e-11);
    }

    #[test]
    fn psi_continuation_reference() {
        // contour value frozen from a high-precision quadrature
        let v = psi_fn(c(-0.25, 0.375), &PsiPolicy::default()).unwrap().value;
        assert!((v - c(0.3864709964912000, 0.3581947727407613)).norm() < 1e-11);
    }

    #[test]
    fn psi_near_one_far_down() {
        // |ψ(-10i) - 1| sits under the |Im t| e^{-2π Im t} envelope
        let v = psi_fn(c(0.0, -10.0), &PsiPolicy::default()).unwrap().value;
        assert!((v - c(1.0, 0.0)).norm() < 1e-20);
    }

    #[test]
    fn psi_estimate_constant_stable() {
        // C(y) = |ψ(-iy) - 1| / (y e^{-2πy}) stays O(1) on y ∈ [2, 4]
        let pol = PsiPolicy::default();
        let mut cs = Vec::new();
        for &y in &[2.0f64, 2.5, 3.0, 3.5, 4.0] {
            let v = psi_fn(c(0.0, -y), &pol).unwrap().value;
            cs.push((v - c(1.0, 0.0)).norm() / (y * (-2.0 * PI * y).exp()));
        }
        for w in cs.windows(2) {
            assert!(w[1] < 2.0 * w[0] && w[0] < 2.0 * w[1], "unstable: {cs:?}");
        }
    }

    #[test]
    fn psi_pole_flagged() {
        let e = psi_fn(c(-2.0, 0.0), &PsiPolicy::default());
        match e {
            Err(EgError::Pole { order, .. }) => assert_eq!(order, 2),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn psi_zero_pole_winding() {
        // winding of ψ on a circle of radius 0.3 around n counts the
        // order: +n at t = n (zero), -n at t = -n (pole)
        let pol = PsiPolicy::default();
        for n in [1i32, 2] {
            for (center, expect) in [(n as f64, n), (-(n as f64), -n)] {
                let steps =   200;
                let mut total = 0.0;
                let mut prev = psi_fn(c(center + 0.3, 0.0), &pol).unwrap().value;
                for k in 1..=steps {
                    let th = 2.0 * PI * k as f64 / steps as f64;
                    let t = c(center + 0.3 * th.cos(), 0.3 * th.sin());
                    let cur = psi_fn(t, &pol).unwrap().value;
                    total += (cur / prev).arg();
                    prev = cur;
                }
                let winding = (total / (2.0 * PI)).round() as i32;
                assert_eq!(winding, expect, "center {center}");
            }
        }
    }

    #[test]
    fn equal_periods_matches_double_product() {
        let tau = c(0.0, 0.8);
        for &z in &[c(0.3, 0.2), tau - 0.5] {
            let lhs = gamma_ell(z, &PeriodPair::new(tau, tau), &POL).unwrap().value;
            let rhs = gamma_equal_periods(z, tau, 40, &POL).unwrap().value;
            assert!(rel_residual(lhs, rhs) < 1e-9, "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn equal_periods_tail_factor_within_envelope() {
        // the k = 40 factor alone is already inside the ψ estimate
        let tau = c(0.0, 0.8);
        let z = c(0.3, 0.0);
        let pol = PsiPolicy::default();
        let k = 40.0;
        let num = psi_fn((k + 1.0 + z) / tau, &pol).unwrap().value;
        let den = psi_fn((k - z) / tau, &pol).unwrap().value;
        let t = (k + 1.0 + z) / tau;
        let env = 3.0 * t.norm() * (-2.0 * PI * t.im.abs()).exp();
        assert!((num / den - c(1.0, 0.0)).norm() < env.max(1e-30) + 1e-15);
    }

    #[test]
    fn equal_periods_rejects_lattice_z() {
        let tau = c(0.0, 0.8);
        // τ and 1 + τ both lie on Z + τZ
        assert!(gamma_equal_periods(tau, tau, 10, &POL).is_err());
        assert!(gamma_equal_periods(c(1.0, 0.0) + tau, tau, 10, &POL).is_err());
        assert!(gamma_equal_periods(tau - 0.5, tau, 10, &POL).is_ok());
    }

    #[test]
    fn corollary_ratio_decays_fast() {
        let tau0 = c(0.0, 1.0);
        let z = c(-0.5, 0.1); // u = -0.5, v = 0.1
        let out = corollary_asymptotic(z, tau0, &[0.5, 0.25, 0.125], &POL).unwrap();
        let errs: Vec<f64> = out.iter().map(|(_, r)| (r - c(1.0, 0.0)).norm()).collect();
        // faster than geometric: successive ratios of errors shrink
        assert!(errs[1] / errs[0] < 0.5);
        assert!(errs[2] / errs[1] < errs[1] / errs[0]);

        // fitted decay constant from the two largest scales brackets the
        // third error to within an algebraic prefactor drift
        let c_fit = (errs[0] / errs[1]).ln() / (1.0 / 0.25 - 1.0 / 0.5);
        let pred = errs[1] * (-c_fit * (1.0 / 0.125 - 1.0 / 0.25)).exp();
        assert!(pred / errs[2] < 30.0 && errs[2] / pred < 30.0);
    }

    #[test]
    fn corollary_requires_u_in_range() {
        let e = corollary_asymptotic(c(0.2, 0.1), c(0.0, 1.0), &[0.5], &POL);
        assert!(e.is_err());
    }

    #[test]
    fn n_ab_counts() {
        for j in 0..20 {
            assert_eq!(n_ab(j, 1, 1), j + 1);
        }
        assert_eq!(n_ab(1, 2, 3), 0);
        assert_eq!(n_ab(6, 2, 3), 2); // (3,0) and (0,2)
    }

    #[test]
    fn alpha_tables() {
        assert_eq!(alpha_exponents(2, 3).unwrap(), vec![-5, 2, -3, -2, -1, 0]);
        assert_eq!(alpha_exponents(1, 1).unwrap(), vec![0]);
        // (2,5) by enumeration: representable k in [0,10): 0,2,4,5,6,7,8,9
        let t = alpha_exponents(2, 5).unwrap();
        assert_eq!(t, vec![-9, 2, -7, 4, -5, -4, -3, -2, -1, 0]);
        assert!(alpha_exponents(2, 4).is_err());
    }

    #[test]
    fn factorization_data_tables() {
        let d = FactorizationData::new(2, 3).unwrap();
        assert_eq!(d.alpha_table, vec![-5, 2, -3, -2, -1, 0]);
        assert_eq!(d.n_ab_table, vec![1, 0, 1, 1, 1, 1]);
        assert!(d.n_ab_table.iter().all(|&n| n >= 0));
        assert!(FactorizationData::new(2, 4).is_err());
    }

    #[test]
    fn beta_gamma_ladder() {
        // β_{k,s} = s + β_{k,0}, γ_{k,s} = s + γ_{k,0}, β+γ = 1 at s = 0
        for (a, b) in [(1i64, 2i64), (2, 3), (3, 4), (2, 5), (5, 7)] {
            let ab = a * b;
            if ab > 35 {
                continue;
            }
            for k in 0..ab {
                let beta = |s: i64| {
                    let m = ab * (s + 1) - k - a - b;
                    if m >= 0 {
                        n_ab(m, a, b)
                    } else {
                        0
                    }
                };
                let gamma = |s: i64| n_ab(ab * s + k, a, b);
                assert_eq!(beta(0) + gamma(0), 1, "a={a} b={b} k={k}");
                for s in 1..4 {
                    assert_eq!(beta(s), s + beta(0));
                    assert_eq!(gamma(s), s + gamma(0));
                }
                // α_k = k + 1 - ab γ_{k,0}
                let alphas = alpha_exponents(a, b).unwrap();
                assert_eq!(alphas[k as usize], k + 1 - ab * gamma(0));
            }
        }
    }

    #[test]
    fn factorization_identities() {
        let pol = TruncationPolicy::with_tol(1e-13);
        let z = c(0.2, 0.1);
        // a=1, b=3
        let tau = c(0.0, 0.5);
        let lhs = gamma_ell(z, &PeriodPair::new(tau, 3.0 * tau), &pol).unwrap().value;
        let rhs = gamma_ab_factorization(z, tau, 1, 3, &pol).unwrap().value;
        assert!(rel_residual(lhs, rhs) < 1e-9);

        // a=2, b=3 equals the product over j ∈ {0,2,3,4,5,7}
        let tau = c(0.0, 0.4);
        let lhs = gamma_ell(z, &PeriodPair::new(2.0 * tau, 3.0 * tau), &pol).unwrap().value;
        let rhs = gamma_ab_factorization(z, tau, 2, 3, &pol).unwrap().value;
        assert!(rel_residual(lhs, rhs) < 1e-9);
        let pp6 = PeriodPair::new(6.0 * tau, 6.0 * tau);
        let mut explicit = Eval::exact(c(1.0, 0.0));
        for j in [0.0, 2.0, 3.0, 4.0, 5.0, 7.0] {
            explicit = explicit.mul(gamma_ell(z + j * tau, &pp6, &pol).unwrap());
        }
        assert!(rel_residual(rhs, explicit.value) < 1e-10);

        // a = b = 1 is the identity
        let same = gamma_ab_factorization(z, tau, 1, 1, &pol).unwrap().value;
        let direct = gamma_ell(z, &PeriodPair::new(tau, tau), &pol).unwrap().value;
        assert!(rel_residual(same, direct) < 1e-12);
    }

    #[test]
    fn equal_a_b_rescaled_exponents() {
        // Γ(z,τ,τ) = ∏_{j≤2(a-1)} Γ(z+jτ, aτ, aτ)^{a-|j-a+1|} for a = 2
        let pol = TruncationPolicy::with_tol(1e-13);
        let z = c(0.17, 0.13);
        let tau = c(0.0, 0.45);
        let lhs = gamma_ell(z, &PeriodPair::new(tau, tau), &pol).unwrap().value;
        let pp = PeriodPair::new(2.0 * tau, 2.0 * tau);
        let mut rhs = Eval::exact(c(1.0, 0.0));
        for j in 0..=2i64 {
            let e = 2 - (j - 1).abs();
            rhs = rhs.mul(gamma_ell(z + j as f64 * tau, &pp, &pol).unwrap().powi(e));
        }
        assert!(rel_residual(lhs, rhs.value) < 1e-10);
    }

    #[test]
    fn theta_form_identities() {
        let pol = TruncationPolicy::with_tol(1e-13);
        let z = c(0.2, 0.1);
        let tau = c(0.0, 0.4);
        // (2,3): Γ(z,2τ,3τ)⁶ against the θ₀ exponent form
        let g = gamma_ell(z, &PeriodPair::new(2.0 * tau, 3.0 * tau), &pol)
            .unwrap()
            .powi(6)
            .value;
        let f = gamma_ab_theta_form(z, tau, 2, 3, &pol).unwrap().value;
        assert!(rel_residual(g, f) < 1e-8, "{g} vs {f}");

        // (1,1): no θ₀ factor at all
        let g1 = gamma_ell(z, &PeriodPair::new(tau, tau), &pol).unwrap().value;
        let f1 = gamma_ab_theta_form(z, tau, 1, 1, &pol).unwrap().value;
        assert!(rel_residual(g1, f1) < 1e-12);

        // (3,4) at a second point
        let z2 = c(0.31, 0.07);
        let tau2 = c(0.0, 0.35);
        let g2 = gamma_ell(z2, &PeriodPair::new(3.0 * tau2, 4.0 * tau2), &pol)
            .unwrap()
            .powi(12)
            .value;
        let f2 = gamma_ab_theta_form(z2, tau2, 3, 4, &pol).unwrap().value;
        assert!(rel_residual(g2, f2) < 1e-8);
    }

    #[test]
    fn trig_gamma_basics() {
        let sigma = c(0.0, 0.6);
        let v1 = gamma_trig(c(1.0, 0.0), sigma, &POL).unwrap().value;
        assert!(rel_residual(v1, c(1.0, 0.0)) < 1e-12);

        // functional equation at s = 0.4
        let s = c(0.4, 0.0);
        let lhs = gamma_trig(s + 1.0, sigma, &POL).unwrap().value;
        let ratio = (c(1.0, 0.0) - expi(sigma * s)) / (c(1.0, 0.0) - expi(sigma));
        let rhs = ratio * gamma_trig(s, sigma, &POL).unwrap().value;
        assert!(rel_residual(lhs, rhs) < 1e-12);
    }

    #[test]
    fn trig_gamma_euler_limit() {
        // Γ_trig(s,σ) → (s-1)! as σ → 0, monotonically closer
        for (s, fact) in [(2.0, 1.0), (3.0, 2.0), (4.0, 6.0)] {
            let mut last = f64::INFINITY;
            for &im in &[0.05, 0.02, 0.01, 0.004] {
                let v = gamma_trig(c(s, 0.0), c(0.0, im), &POL).unwrap().value;
                let err = (v - c(fact, 0.0)).norm();
                // s = 2 is exact by the functional equation, so only
                // roundoff remains there
                assert!(err < last || err < 1e-10, "s={s} im={im}: {err} !< {last}");
                last = err;
            }
            assert!(last < 0.1 * fact);
        }
        // s = 2 is exact at any σ by the functional equation
        let v = gamma_trig(c(2.0, 0.0), c(0.0, 0.05), &POL).unwrap().value;
        assert!(rel_residual(v, c(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn trig_gamma_pole_flagged() {
        // r^s at a negative integer s collides with the zero set of the
        // denominator product
        let v = gamma_trig(c(-1.0, 0.0), c(0.0, 0.6), &POL).unwrap();
        assert!(v.flags.near_lattice);
    }

    #[test]
    fn gamma_bar_normalization_and_ladder() {
        let tau = c(0.0, 0.8);
        let sigma = c(0.0, 0.4);
        let v1 = gamma_bar(c(1.0, 0.0), tau, sigma, &POL).unwrap().value;
        assert!(rel_residual(v1, c(1.0, 0.0)) < 1e-12);

        let s = c(0.3, 0.0);
        let lhs = gamma_bar(s + 1.0, tau, sigma, &POL).unwrap().value;
        let ratio = theta0(sigma * s, tau, &POL).unwrap().value
            / theta0(sigma, tau, &POL).unwrap().value;
        let rhs = ratio * gamma_bar(s, tau, sigma, &POL).unwrap().value;
        assert!(rel_residual(lhs, rhs) < 1e-11);
    }

    #[test]
    fn gamma_bar_trig_limit() {
        // Γ̄(s, 10i, σ) ≈ Γ_trig(s, σ) to 1e-6 (|q| = e^{-20π})
        let s = c(0.4, 0.0);
        let sigma = c(0.0, 0.5);
        let a = gamma_bar(s, c(0.0, 10.0), sigma, &POL).unwrap().value;
        let b = gamma_trig(s, sigma, &POL).unwrap().value;
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn theta_ratio_trig_ladder() {
        // θ₀(σs,τ)/θ₀(σ,τ) → (1-e^{2πiσs})/(1-e^{2πiσ}), error < |q|^{1/2}
        let s = c(0.4, 0.0);
        let sigma = c(0.0, 0.5);
        for &im in &[8.0, 10.0] {
            let tau = c(0.0, im);
            let lhs = theta0(sigma * s, tau, &POL).unwrap().value
                / theta0(sigma, tau, &POL).unwrap().value;
            let rhs = (c(1.0, 0.0) - expi(sigma * s)) / (c(1.0, 0.0) - expi(sigma));
            assert!((lhs - rhs).norm() < (-PI * im).exp());
        }
    }
}
