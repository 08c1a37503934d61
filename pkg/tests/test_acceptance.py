"""End-to-end acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
terminal summary.
"""

import math
import time
import warnings

import numpy as np

from supershift.evolution import GridRect, fit_rate, supershift_gap
from supershift.fresnel import QuadratureConfig, standard_suite, verify_suite
from supershift.operators import (
    DispersionSpec,
    apply_operator,
    apply_to_exponential,
    exponential_series,
    symbol_from_dispersion,
)
from supershift.propagators import (
    CentrifugalSpec,
    HarmonicSpec,
    centrifugal_evolve,
    harmonic_evolve_closed,
    harmonic_evolve_kernel,
    harmonic_evolve_windowed,
    singularity_probe,
    supershift_gap_centrifugal,
    supershift_gap_harmonic,
)
from supershift.reference_oracles import GridSpec, fd_derivative, split_step_evolve
from supershift.sequences import SuperoscParams, closeness_bound, coefficients, evaluate_product


def test_1_closeness_bound(acceptance_report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    violations = 0
    worst = 0.0
    for _ in range(1000):
        z = 5 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        a = rng.uniform(-5, 5)
        p = SuperoscParams(a, int(rng.integers(1, 501)))
        err = abs(evaluate_product(z, p) - np.exp(1j * a * z))
        bound = closeness_bound(z, p)
        worst = max(worst, err / bound if bound > 0 else 0.0)
        violations += not err <= bound
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 10
    assert acceptance_report(1, ok, f"violations={violations} max err/bound={worst:.3f} time={elapsed:.2f}s")


def test_2_convergence_rate(acceptance_report):
    t0 = time.perf_counter()
    rep = supershift_gap(DispersionSpec.monomial(2), 2.0, GridRect(0, 1, -2, 2), Ns=tuple(range(10, 641, 10)))
    elapsed = time.perf_counter() - t0
    slope, res = fit_rate(rep.Ns, rep.gaps)
    ok = abs(slope + 1) <= 0.15 and elapsed < 60
    assert acceptance_report(2, ok, f"fitted rate={slope:.4f} (fit rms {res:.1e}) time={elapsed:.1f}s")


def _eigen_rel_error(spec, t, lam, degree=80, L=256):
    f = exponential_series(lam, L)
    g = apply_operator(symbol_from_dispersion(spec, t), f)
    if g.degree < degree:
        return math.inf
    target = apply_to_exponential(spec, t, lam) * f.taylor_coeffs[: degree + 1]
    got = g.taylor_coeffs[: degree + 1]
    ok = np.abs(target) > 1e-280  # subnormal below this
    if np.any(np.abs(got[~ok]) >= 1e-270):
        return math.inf
    return float(np.max(np.abs(got[ok] / target[ok] - 1)))


def test_3_eigen_relation(acceptance_report):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        deg = int(rng.integers(1, 7))
        gammas = rng.uniform(-1, 1, deg + 1) / 2.0 ** np.arange(deg + 1)
        spec = DispersionSpec("polynomial", tuple(gammas))
        worst = max(worst, _eigen_rel_error(spec, rng.uniform(-1, 1), rng.uniform(-2, 2)))
    ok = worst <= 1e-8
    assert acceptance_report(3, ok, f"max relative coefficient error={worst:.2e} over 50 cases")


def test_4_fresnel_oracle(acceptance_report):
    recs = verify_suite(standard_suite(seed=4, n=20))
    dev = max(abs(r.contour - r.oracle) / max(abs(r.oracle), 1e-4) for r in recs)
    agree = all(abs(r.contour - r.oracle) <= max(1e-6 * abs(r.oracle), 1e-10) for r in recs)
    angle = max(r.angle_deviation for r in recs)
    ok = len(recs) == 20 and agree and angle <= 1e-8
    assert acceptance_report(4, ok, f"n={len(recs)} max rel deviation={dev:.1e} max angle deviation={angle:.1e}")


def _closed_residual(lam, t, x, h):
    ft = lambda s: harmonic_evolve_closed(lam, s, x)  # noqa: E731
    fx = lambda s: harmonic_evolve_closed(lam, t, s)  # noqa: E731
    return abs(1j * fd_derivative(ft, t, 1, h) - 0.5 * (-fd_derivative(fx, x, 2, h) + x * x * fx(x)))


def test_5_harmonic_two_routes(acceptance_report):
    rng = np.random.default_rng(5)
    pts = []
    while len(pts) < 50:
        t = rng.uniform(-2 * math.pi, 2 * math.pi)
        if HarmonicSpec.distance_to_singular(t) < 0.2 or HarmonicSpec.distance_to_kernel_singular(t) < 0.2:
            continue
        pts.append((rng.uniform(-2, 2), t, rng.uniform(-2, 2)))
    route = max(abs(harmonic_evolve_kernel(l, t, x) - harmonic_evolve_closed(l, t, x)) for l, t, x in pts)
    res = [_closed_residual(l, t, x, 1e-3) for l, t, x in pts]
    n_bad = sum(r > 1e-4 for r in res)
    # residual ratio under h -> h/2 at the worst point; 4 means O(h^2) truncation
    l, t, x = pts[int(np.argmax(res))]
    ratio = max(res) / _closed_residual(l, t, x, 5e-4)
    ok = route <= 1e-6 and n_bad == 0
    assert acceptance_report(
        5,
        ok,
        f"max route difference={route:.1e}; PDE residual max={max(res):.2e}, {n_bad}/50 above 1e-4, "
        f"h-halving ratio at worst point={ratio:.2f}",
    )


def test_6_harmonic_supershift(acceptance_report):
    grid = GridRect(0.2, 1.3, -2, 2, 23, 41)
    ratios = []
    for nu in (0, 1):
        rep = supershift_gap_harmonic(2.0, grid, Ns=(20, 320), nu=nu)
        ratios.append(rep.gaps[0] / rep.gaps[1])
    ok = min(ratios) >= 8
    assert acceptance_report(6, ok, f"gap(20)/gap(320): nu=0 {ratios[0]:.1f}, nu=1 {ratios[1]:.1f}")


def test_7_centrifugal_supershift(acceptance_report):
    spec = CentrifugalSpec(1.0)
    q = QuadratureConfig(tol=1e-6)
    rep = supershift_gap_centrifugal(spec, 2.0, GridRect(0.5, 1.5, 0.5, 2.0, 6, 7), Ns=(10, 20, 40, 80, 160), q=q)
    decreasing = all(g2 < g1 for g1, g2 in zip(rep.gaps, rep.gaps[1:]))
    p = SuperoscParams(2.0, 1)
    fs = coefficients(p)
    terms = sum(c * centrifugal_evolve(spec, k, 1.0, 1.0) for c, k in zip(fs.coefficients, fs.frequencies))
    whole = centrifugal_evolve(spec, 0.0, 1.0, 1.0, datum=lambda y: evaluate_product(y, p))
    lin = abs(terms - whole)
    ok = decreasing and lin <= 1e-8
    gaps = ", ".join(f"{g:.3g}" for g in rep.gaps)
    assert acceptance_report(7, ok, f"gaps N=10..160: {gaps}; linearity={lin:.1e}")


def test_8_singularity_probe(acceptance_report):
    t = math.pi / 2 - np.geomspace(1e-1, 1e-6, 12)
    rep = singularity_probe(1.0, 0.7, t)
    ok = abs(rep.exponent + 0.5) <= 0.02 and rep.blow_up
    assert acceptance_report(8, ok, f"exponent={rep.exponent:.6f} blow_up={rep.blow_up}")


def test_9_split_step(acceptance_report):
    sigma = 2.0
    g = GridSpec(-40.0, 40.0, 4096, 1e-3, sigma)
    fs = coefficients(SuperoscParams(2.0, 10))

    def sup_datum(x):
        return sum(c * np.exp(1j * k * x) for c, k in zip(fs.coefficients, fs.frequencies))

    def sup_closed(t, x):
        return sum(c * harmonic_evolve_windowed(k, sigma, t, x) for c, k in zip(fs.coefficients, fs.frequencies))

    cases = [
        (lambda x: np.exp(1j * x), lambda t, x: harmonic_evolve_windowed(1.0, sigma, t, x)),
        (lambda x: np.exp(-2.5j * x), lambda t, x: harmonic_evolve_windowed(-2.5, sigma, t, x)),
        (sup_datum, sup_closed),
    ]
    err = drift = total = 0.0
    for datum, closed in cases:
        for t in (0.25, 0.5, 1.0):
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                r = split_step_evolve("harmonic", datum, t, g)
            m = np.abs(r.x) <= sigma / 2
            err = max(err, float(np.max(np.abs(r.psi[m] - closed(t, r.x[m])))))
            drift = max(drift, r.max_step_mass_drift)
            total = max(total, abs(r.mass_final - r.mass_initial) / r.mass_initial)
    ok = err <= 1e-3 and drift <= 1e-10 and total <= 1e-10
    assert acceptance_report(9, ok, f"max interior error={err:.1e} step mass drift={drift:.1e} total={total:.1e}")
