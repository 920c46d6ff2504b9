//! Python bindings for the elliptic gamma toolkit.
//!
//! Complex values cross the boundary as Python complex numbers; suite and
//! verification reports come back as lists of dicts. Domain and
//! convergence failures raise ValueError.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ellgamma::gamma as egf;
use ellgamma::gamma::PeriodPair;
use ellgamma::phase as egphase;
use ellgamma::phase::{PhasePoint, SemiclassicalParams};
use ellgamma::qseries;
use ellgamma::special;
use ellgamma::suites::{self, SuiteConfig};
use ellgamma::{EgError, Nome, PsiPolicy, TruncationPolicy};

fn err(e: EgError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pol(tol: f64) -> TruncationPolicy {
    TruncationPolicy::with_tol(tol)
}

/// Γ(z,τ,σ) by the reflected double product.
#[pyfunction]
#[pyo3(signature = (z, tau, sigma, tol=1e-12))]
fn gamma(z: Complex64, tau: Complex64, sigma: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(egf::gamma_ell(z, &PeriodPair::new(tau, sigma), &pol(tol))
        .map_err(err)?
        .value)
}

/// Γ(z,τ,σ) by the summation formula (works for one real Diophantine
/// period inside the strip).
#[pyfunction]
#[pyo3(signature = (z, tau, sigma, tol=1e-12))]
fn gamma_series(z: Complex64, tau: Complex64, sigma: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(egf::gamma_series(z, &PeriodPair::new(tau, sigma), &pol(tol))
        .map_err(err)?
        .value)
}

#[pyfunction]
#[pyo3(signature = (z, tau, tol=1e-12))]
fn theta(z: Complex64, tau: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(qseries::theta(z, tau, &pol(tol)).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (z, tau, tol=1e-12))]
fn theta0(z: Complex64, tau: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(qseries::theta0(z, tau, &pol(tol)).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (tau, tol=1e-12))]
fn eta(tau: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(qseries::dedekind_eta(tau, &pol(tol)).map_err(err)?.value)
}

/// (x;q) = ∏(1-xq^j), |q| ≠ 1.
#[pyfunction]
#[pyo3(signature = (x, q, tol=1e-12))]
fn qpoch(x: Complex64, q: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(qseries::qpoch(x, &Nome::from_value(q), &pol(tol))
        .map_err(err)?
        .value)
}

/// (x;q,r) double product.
#[pyfunction]
#[pyo3(signature = (x, q, r, tol=1e-12))]
fn qpoch2(x: Complex64, q: Complex64, r: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(
        qseries::qpoch2(x, &Nome::from_value(q), &Nome::from_value(r), &pol(tol))
            .map_err(err)?
            .value,
    )
}

/// Li₂ on the closed unit disk.
#[pyfunction]
#[pyo3(signature = (x, tol=1e-12))]
fn dilog(x: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(special::dilog(x, &pol(tol)).map_err(err)?.value)
}

/// The dilogarithmic psi function.
#[pyfunction]
#[pyo3(signature = (t, tol=1e-13))]
fn psi(t: Complex64, tol: f64) -> PyResult<Complex64> {
    let policy = PsiPolicy {
        series_tol: tol,
        ..PsiPolicy::default()
    };
    Ok(special::psi_fn(t, &policy).map_err(err)?.value)
}

/// Phase function Ω_a(z,τ,σ) = Γ(z+a)/Γ(z-a).
#[pyfunction]
#[pyo3(signature = (a, z, tau, sigma, tol=1e-12))]
fn omega(a: Complex64, z: Complex64, tau: Complex64, sigma: Complex64, tol: f64) -> PyResult<Complex64> {
    let p = PhasePoint {
        a,
        z,
        periods: PeriodPair::new(tau, sigma),
    };
    Ok(egphase::omega(&p, &pol(tol)).map_err(err)?.value)
}

/// The cubic modular exponent polynomial.
#[pyfunction]
fn q_poly(z: Complex64, tau: Complex64, sigma: Complex64) -> PyResult<Complex64> {
    egf::q_polynomial(z, tau, sigma).map_err(err)
}

#[pyfunction]
fn p_poly(z: Complex64, tau: Complex64, sigma: Complex64) -> PyResult<Complex64> {
    egf::p_polynomial(z, tau, sigma).map_err(err)
}

/// Summation form of θ₀ inside the strip 0 < Im z < Im τ.
#[pyfunction]
#[pyo3(signature = (z, tau, tol=1e-12))]
fn theta0_series(z: Complex64, tau: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(qseries::theta0_series(z, tau, &pol(tol)).map_err(err)?.value)
}

/// Summation form of the phase function.
#[pyfunction]
#[pyo3(signature = (a, z, tau, sigma, tol=1e-12))]
fn omega_series(a: Complex64, z: Complex64, tau: Complex64, sigma: Complex64, tol: f64) -> PyResult<Complex64> {
    let p = PhasePoint {
        a,
        z,
        periods: PeriodPair::new(tau, sigma),
    };
    Ok(egphase::omega_series(&p, &pol(tol)).map_err(err)?.value)
}

/// R_a polynomial (the exponent of the phase three-term relation).
#[pyfunction]
fn r_poly(a: Complex64, z: Complex64, tau: Complex64, sigma: Complex64) -> PyResult<Complex64> {
    egphase::r_polynomial(a, z, tau, sigma).map_err(err)
}

/// r(z,τ) = Σ cos(2πjz)/sin²(πjτ).
#[pyfunction]
#[pyo3(signature = (z, tau, tol=1e-12))]
fn r_series(z: Complex64, tau: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(egphase::r_series(z, tau, &pol(tol)).map_err(err)?.value)
}

/// Jackson-type trigonometric gamma.
#[pyfunction]
#[pyo3(signature = (s, sigma, tol=1e-12))]
fn gamma_trig(s: Complex64, sigma: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(special::gamma_trig(s, sigma, &pol(tol)).map_err(err)?.value)
}

/// Equal-period product formula (dilogarithmic factorization).
#[pyfunction]
#[pyo3(signature = (z, tau, k_max=60, tol=1e-12))]
fn gamma_equal_periods(z: Complex64, tau: Complex64, k_max: usize, tol: f64) -> PyResult<Complex64> {
    Ok(special::gamma_equal_periods(z, tau, k_max, &pol(tol))
        .map_err(err)?
        .value)
}

/// Semiclassical check: returns (omega_value, theta_power, deviation).
#[pyfunction]
#[pyo3(signature = (beta, eps, z, tau, tol=1e-12))]
fn semiclassical(
    beta: i64,
    eps: f64,
    z: Complex64,
    tau: Complex64,
    tol: f64,
) -> PyResult<(Complex64, Complex64, f64)> {
    egphase::semiclassical_check(&SemiclassicalParams { beta, eps, tau }, z, &pol(tol)).map_err(err)
}

/// Normalized interpolation between the elliptic and trigonometric
/// gamma functions.
#[pyfunction]
#[pyo3(signature = (s, tau, sigma, tol=1e-12))]
fn gamma_bar(s: Complex64, tau: Complex64, sigma: Complex64, tol: f64) -> PyResult<Complex64> {
    Ok(special::gamma_bar(s, tau, sigma, &pol(tol)).map_err(err)?.value)
}

/// Γ(z,aτ,bτ) as a product of equal-period factors.
#[pyfunction]
#[pyo3(signature = (z, tau, a, b, tol=1e-12))]
fn gamma_rational_multiple(z: Complex64, tau: Complex64, a: i64, b: i64, tol: f64) -> PyResult<Complex64> {
    Ok(special::gamma_ab_factorization(z, tau, a, b, &pol(tol))
        .map_err(err)?
        .value)
}

/// Γ(z,τ,τ)·∏ θ₀(z+kτ, abτ)^{α_k}: equals Γ(z,aτ,bτ)^{ab} for coprime a, b.
#[pyfunction]
#[pyo3(signature = (z, tau, a, b, tol=1e-12))]
fn gamma_theta_form(z: Complex64, tau: Complex64, a: i64, b: i64, tol: f64) -> PyResult<Complex64> {
    Ok(special::gamma_ab_theta_form(z, tau, a, b, &pol(tol))
        .map_err(err)?
        .value)
}

/// Number of representations j = ar + bs with r, s ≥ 0.
#[pyfunction]
fn n_ab(j: i64, a: i64, b: i64) -> i64 {
    special::n_ab(j, a, b)
}

/// Exponent table α_k for coprime (a, b).
#[pyfunction]
fn alpha_exponents(a: i64, b: i64) -> PyResult<Vec<i64>> {
    special::alpha_exponents(a, b).map_err(err)
}

/// Γ(z,τ,τ)·e^{iπQ} along a shrinking ray: list of (s, ratio).
#[pyfunction]
#[pyo3(signature = (z, tau0, scales, tol=1e-12))]
fn asymptotic_ray(
    z: Complex64,
    tau0: Complex64,
    scales: Vec<f64>,
    tol: f64,
) -> PyResult<Vec<(f64, Complex64)>> {
    special::corollary_asymptotic(z, tau0, &scales, &pol(tol)).map_err(err)
}

/// Partition function and free energy: returns (Z, f).
#[pyfunction]
#[pyo3(signature = (u, tau, sigma, c=1.0, tol=1e-12))]
fn baxter(
    u: Complex64,
    tau: Complex64,
    sigma: Complex64,
    c: f64,
    tol: f64,
) -> PyResult<(Complex64, Complex64)> {
    suites::baxter_free_energy(c, u, tau, sigma, &pol(tol)).map_err(err)
}

/// Summation-formula values across a real period: list of (eps, value).
#[pyfunction]
#[pyo3(signature = (z, tau_real, sigma, eps, tol=1e-12))]
fn wall_crossing(
    z: Complex64,
    tau_real: f64,
    sigma: Complex64,
    eps: Vec<f64>,
    tol: f64,
) -> PyResult<Vec<(f64, Complex64)>> {
    egf::wall_crossing_scan(z, tau_real, sigma, &eps, &pol(tol)).map_err(err)
}

/// Continued-fraction report for a real period.
#[pyfunction]
#[pyo3(signature = (tau, j_max=1000))]
fn diophantine(py: Python<'_>, tau: f64, j_max: u64) -> PyResult<Py<PyDict>> {
    let rep = ellgamma::diophantine::diophantine_check(tau, j_max);
    let d = PyDict::new(py);
    d.set_item("tau", rep.tau)?;
    d.set_item("alpha_estimate", rep.alpha_estimate)?;
    d.set_item("verdict", format!("{:?}", rep.verdict))?;
    d.set_item("min_gap_seq", rep.min_gap_seq)?;
    Ok(d.into())
}

#[pyfunction]
fn suite_names() -> Vec<String> {
    suites::SUITE_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Runs one identity suite; returns a list of residual records.
#[pyfunction]
#[pyo3(signature = (name, samples=20, seed=2026, tol=1e-9))]
fn run_suite(
    py: Python<'_>,
    name: &str,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Py<PyList>> {
    let cfg = SuiteConfig { tol, seed, samples };
    let reports = suites::run_suite(name, &cfg).map_err(err)?;
    let list = PyList::empty(py);
    for r in reports {
        let d = PyDict::new(py);
        d.set_item("identity", &r.identity)?;
        d.set_item("sample_index", r.sample_index)?;
        d.set_item("z", Complex64::new(r.z_re, r.z_im))?;
        d.set_item("abs_residual", r.abs_residual)?;
        d.set_item("rel_residual", r.rel_residual)?;
        d.set_item("pass", r.pass)?;
        d.set_item("skipped", r.skipped)?;
        list.append(d)?;
    }
    Ok(list.into())
}

/// Exact cocycle verification; every record must come back "exact".
#[pyfunction]
#[pyo3(signature = (bridge_samples=5, seed=7, tol=1e-9))]
fn cocycle_verify(
    py: Python<'_>,
    bridge_samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Py<PyList>> {
    let records = ellgamma::cocycle::verify_all(bridge_samples, seed, tol);
    let list = PyList::empty(py);
    for r in records {
        let d = PyDict::new(py);
        d.set_item("name", &r.name)?;
        d.set_item("status", &r.status)?;
        d.set_item("detail", &r.detail)?;
        list.append(d)?;
    }
    Ok(list.into())
}

/// Zeros and poles of Γ(·,τ,σ) inside a rectangle.
#[pyfunction]
#[pyo3(signature = (tau, sigma, re_min, re_max, im_min, im_max, max_index=8))]
fn zeros_poles(
    tau: Complex64,
    sigma: Complex64,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    max_index: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    egf::zeros_poles(
        &PeriodPair::new(tau, sigma),
        &egf::Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        },
        max_index,
    )
}

#[pymodule]
fn ellgamma_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_series, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta0, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(qpoch, m)?)?;
    m.add_function(wrap_pyfunction!(qpoch2, m)?)?;
    m.add_function(wrap_pyfunction!(dilog, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(q_poly, m)?)?;
    m.add_function(wrap_pyfunction!(p_poly, m)?)?;
    m.add_function(wrap_pyfunction!(theta0_series, m)?)?;
    m.add_function(wrap_pyfunction!(omega_series, m)?)?;
    m.add_function(wrap_pyfunction!(r_poly, m)?)?;
    m.add_function(wrap_pyfunction!(r_series, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_bar, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_rational_multiple, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_theta_form, m)?)?;
    m.add_function(wrap_pyfunction!(n_ab, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_ray, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_trig, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_equal_periods, m)?)?;
    m.add_function(wrap_pyfunction!(semiclassical, m)?)?;
    m.add_function(wrap_pyfunction!(baxter, m)?)?;
    m.add_function(wrap_pyfunction!(wall_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(diophantine, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle_verify, m)?)?;
    m.add_function(wrap_pyfunction!(zeros_poles, m)?)?;
    Ok(())
}
