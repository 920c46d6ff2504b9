#!/usr/bin/env python3
"""Smoke test for the Python bindings.

Build the extension first:

    cargo build -p ellgamma-py --release

then run this script from the repository root:

    python3 python/smoke_test.py
"""

import cmath
import math
import pathlib
import shutil
import sys
import tempfile


def load_module():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "libellgamma_py.so",
        root / "target" / "debug" / "libellgamma_py.so",
        root / "target" / "release" / "libellgamma_py.dylib",
        root / "target" / "debug" / "libellgamma_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not built; run: cargo build -p ellgamma-py --release")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="ellgamma_py_"))
    shutil.copy(built, stage / "ellgamma_py.so")
    sys.path.insert(0, str(stage))
    import ellgamma_py

    return ellgamma_py


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    eg = load_module()
    checks = 0

    # normalization point of the double product
    tau, sigma = 0.5j, 0.3j
    assert close(eg.gamma((tau + sigma) / 2, tau, sigma), 1.0)
    checks += 1

    # shift equation: gamma(z+sigma) = theta0(z,tau) gamma(z)
    z = 0.21 + 0.13j
    lhs = eg.gamma(z + sigma, tau, sigma)
    rhs = eg.theta0(z, tau) * eg.gamma(z, tau, sigma)
    assert close(lhs, rhs)
    checks += 1

    # series and product agree
    assert close(eg.gamma_series(z, tau, sigma), eg.gamma(z, tau, sigma))
    checks += 1

    # triple product at a point
    zt, tt = 0.3, 0.8j
    x = cmath.exp(2j * cmath.pi * zt)
    q = cmath.exp(2j * cmath.pi * tt)
    triple = (
        1j
        * cmath.exp(1j * cmath.pi * (tt / 4 - zt))
        * eg.qpoch(x, q)
        * eg.qpoch(q / x, q)
        * eg.qpoch(q, q)
    )
    assert close(eg.theta(zt, tt), triple)
    checks += 1

    # classical special values
    assert close(eg.dilog(1.0), math.pi**2 / 6)
    assert close(eg.psi(0.0), cmath.exp(1j * math.pi / 12))
    assert close(eg.eta(1j), 0.7682254223260566)
    checks += 1

    # phase function inverse pair
    om = eg.omega(0.1, z, 0.6j, 0.4j) * eg.omega(-0.1, z, 0.6j, 0.4j)
    assert close(om, 1.0)
    checks += 1

    # partition function evenness
    z1, _ = eg.baxter(0.1, 0.8j, 0.25j)
    z2, _ = eg.baxter(-0.1, 0.8j, 0.25j)
    assert close(z1, z2)
    checks += 1

    # a real Diophantine period
    rep = eg.diophantine(math.sqrt(2.0))
    assert rep["verdict"] == "InXLikely"
    vals = eg.wall_crossing(0.3 + 0.1j, math.sqrt(2.0), 0.5j, [1e-3])
    assert len(vals) == 3  # -eps, 0, +eps
    checks += 1

    # one numeric suite and the exact verifier
    reports = eg.run_suite("gamma-basic", samples=3)
    assert reports and all(r["pass"] for r in reports)
    records = eg.cocycle_verify()
    assert records and all(r["status"] == "exact" for r in records)
    checks += 1

    # rational-multiple factorization and its theta-exponent form
    tau_s = 0.4j
    zf = 0.2 + 0.1j
    lhs = eg.gamma(zf, 2 * tau_s, 3 * tau_s)
    assert close(eg.gamma_rational_multiple(zf, tau_s, 2, 3), lhs, 1e-9)
    assert close(eg.gamma_theta_form(zf, tau_s, 2, 3), lhs**6, 1e-8)
    assert eg.alpha_exponents(2, 3) == [-5, 2, -3, -2, -1, 0]
    assert eg.n_ab(6, 2, 3) == 2
    checks += 1

    # asymptotics along a shrinking ray
    rows = eg.asymptotic_ray(-0.5 + 0.1j, 1j, [0.5, 0.25])
    assert abs(rows[1][1] - 1) < abs(rows[0][1] - 1)
    checks += 1

    # pole/zero census
    zeros, poles = eg.zeros_poles(0.5j, 0.3j, -0.25, 0.75, -0.05, 0.85, 6)
    assert any(abs(p) < 1e-12 for p in poles)
    assert any(abs(w - 0.8j) < 1e-12 for w in zeros)
    checks += 1

    print(f"smoke test: all {checks} check groups passed")


if __name__ == "__main__":
    main()
