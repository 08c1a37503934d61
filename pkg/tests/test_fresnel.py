import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supershift.errors import ExtrapolationError, GrowthViolationError, ValidationError
from supershift.fresnel import (
    FresnelIntegrand,
    QuadratureConfig,
    angle_independence_check,
    epsilon_oracle,
    neville_at_zero,
    regularize_halfline,
    regularize_realline,
    standard_suite,
    verify_suite,
)
from supershift.special_functions import e_nu

ONE = lambda z: np.ones_like(np.asarray(z, dtype=np.complex128))  # noqa: E731
ZERO = lambda z: np.zeros_like(np.asarray(z, dtype=np.complex128))  # noqa: E731
FRESNEL = math.sqrt(math.pi) / 2 * cmath.exp(-0.25j * math.pi)


def close(a, b, rel=1e-6, floor=1e-10):
    return abs(a - b) <= max(rel * abs(b), floor)


# -- construction ---------------------------------------------------------------

def test_integrand_invariants():
    with pytest.raises(ValidationError, match="chi must exceed -1"):
        FresnelIntegrand(-1.5, 1.0, ONE)
    with pytest.raises(ValidationError):
        FresnelIntegrand(0.0, 0.0, ONE)
    with pytest.raises(ValidationError):
        FresnelIntegrand(0.0, 1.0, ONE, growth_budget=0.5)
    with pytest.raises(ValidationError):
        FresnelIntegrand(0.0, 1.0, ONE, growth_order=2.5)


def test_non_analytic_factor_rejected():
    with pytest.raises(ValidationError):
        FresnelIntegrand(0.0, 1.0, lambda z: np.abs(np.asarray(z)) + 0j)


def test_quadrature_config_invariants():
    with pytest.raises(ValidationError):
        QuadratureConfig(ray_angle_offset=math.pi / 4)
    with pytest.raises(ValidationError):
        QuadratureConfig(nodes=8)
    with pytest.raises(ValidationError):
        QuadratureConfig(scheme="simpson")


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
def test_growth_violation_detected():
    # |exp(0.9 i z^2)| = exp(0.9 r^2) on the rotated ray, above |phase|/4
    f = FresnelIntegrand(0.0, 1.0, lambda z: np.exp(0.9j * np.asarray(z) ** 2))
    with pytest.raises(GrowthViolationError):
        regularize_halfline(f)


def test_scalar_only_factor_accepted():
    f = FresnelIntegrand(0.0, 1.0, lambda z: 1.0 + 0j * complex(z))
    assert close(regularize_halfline(f), FRESNEL, 1e-12)


# -- half-line examples ---------------------------------------------------------

@pytest.mark.parametrize("scheme", ["adaptive-tanh-sinh", "generalized-gauss"])
def test_halfline_classical_values(scheme):
    q = QuadratureConfig(scheme=scheme)
    assert close(regularize_halfline(FresnelIntegrand(0.0, 1.0, ONE), q), FRESNEL, 1e-12)
    assert close(regularize_halfline(FresnelIntegrand(1.0, 1.0, ONE), q), -0.5j, 1e-12)
    assert close(regularize_halfline(FresnelIntegrand(0.0, -1.0, ONE), q), FRESNEL.conjugate(), 1e-12)


@given(st.floats(-0.9, 3.0), st.floats(0.2, 5.0), st.sampled_from([-1.0, 1.0]))
@settings(max_examples=30)
def test_halfline_power_weight_closed_form(chi, mag, sign):
    # int_0^inf x^chi exp(-i phi x^2) dx = Gamma((chi+1)/2) / 2 (i phi)^{-(chi+1)/2}
    phi = sign * mag
    expected = math.gamma((chi + 1) / 2) / 2 * (1j * phi) ** (-(chi + 1) / 2)
    assert close(regularize_halfline(FresnelIntegrand(chi, phi, ONE)), expected, 1e-10)


def test_halfline_zero_factor():
    assert regularize_halfline(FresnelIntegrand(0.3, 1.0, ZERO)) == 0


def test_linearity_in_g():
    g1 = lambda z: np.exp(0.7j * np.asarray(z))  # noqa: E731
    g2 = lambda z: 1 + np.asarray(z) ** 3  # noqa: E731
    a, b = 0.3 - 1.2j, 2.0 + 0.5j
    f = lambda g: FresnelIntegrand(0.4, -1.3, g)  # noqa: E731
    lhs = regularize_halfline(f(lambda z: a * g1(z) + b * g2(z)))
    rhs = a * regularize_halfline(f(g1)) + b * regularize_halfline(f(g2))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@pytest.mark.parametrize("s", [0.5, 1.7, 3.0])
def test_scaling_law(s):
    chi, phi, lam = 0.6, 1.4, 1.1
    g = lambda z: np.exp(1j * lam * np.asarray(z)) * (1 + np.asarray(z))  # noqa: E731
    base = regularize_halfline(FresnelIntegrand(chi, phi, g))
    scaled = regularize_halfline(FresnelIntegrand(chi, phi / s ** 2, lambda z: g(np.asarray(z) / s)))
    # x -> s x maps (chi, phi, G) to (chi, phi / s^2, G(./s)) up to s^(chi+1)
    assert abs(scaled - s ** (chi + 1) * base) <= 1e-8 * abs(scaled)


@pytest.mark.parametrize("nodes", [16, 32, 64, 128])
def test_schemes_agree_across_node_counts(nodes):
    f = FresnelIntegrand(0.5, 1.0, lambda z: np.exp(5j * np.asarray(z)))
    ref = regularize_halfline(f)
    val = regularize_halfline(f, QuadratureConfig(nodes=nodes, scheme="generalized-gauss"))
    assert abs(val - ref) < 1e-12 * abs(ref)


# -- real line -----------------------------------------------------------------

@pytest.mark.parametrize("t, lam", [(0.5, 1.0), (2.0, -3.0), (0.1, 6.0)])
def test_realline_free_propagator(t, lam):
    f = FresnelIntegrand(0.0, -1 / (2 * t), lambda z: np.exp(1j * lam * np.asarray(z)))
    expected = math.sqrt(2 * math.pi * t) * cmath.exp(0.25j * math.pi) * cmath.exp(-0.5j * lam * lam * t)
    assert close(regularize_realline(f), expected, 1e-10)


def test_realline_even_and_odd():
    even = FresnelIntegrand(0.0, 1.3, lambda z: np.cos(0.8 * np.asarray(z)))
    assert close(regularize_realline(even), 2 * regularize_halfline(even), 1e-10)
    odd = FresnelIntegrand(0.0, 1.3, lambda z: np.sin(0.8 * np.asarray(z)))
    assert abs(regularize_realline(odd)) < 1e-12
    odd_chi = FresnelIntegrand(0.5, 1.3, lambda z: np.asarray(z) ** 3)
    assert abs(regularize_realline(odd_chi)) < 1e-12


def test_realline_centre_does_not_matter():
    f = FresnelIntegrand(0.0, 0.8, lambda z: np.exp(2j * np.asarray(z)))
    vals = [regularize_realline(f, QuadratureConfig(center=c)) for c in (0.0, -1.25, 0.5)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-10


# -- epsilon oracle ---------------------------------------------------------------

def test_oracle_fresnel_value():
    f = FresnelIntegrand(0.0, 1.0, ONE)
    val, err = epsilon_oracle(f, (1e-1, 1e-2, 1e-3, 1e-4), return_error=True)
    assert abs(val - FRESNEL) < 1e-6
    assert err >= 0


def test_oracle_zero():
    assert epsilon_oracle(FresnelIntegrand(0.0, 1.0, ZERO)) == 0


def test_oracle_gaussian():
    f = FresnelIntegrand(0.0, -1.0, lambda z: np.exp(-np.asarray(z) ** 2))
    expected = 0.5 * cmath.sqrt(math.pi / (1 - 1j))
    assert abs(epsilon_oracle(f) - expected) < 1e-8
    assert abs(regularize_halfline(f) - expected) < 1e-12


def test_oracle_list_validation():
    f = FresnelIntegrand(0.0, 1.0, ONE)
    with pytest.raises(ValidationError):
        epsilon_oracle(f, (1e-1, 1e-2))
    with pytest.raises(ValidationError):
        epsilon_oracle(f, (1e-2, 1e-1, 1e-3))


def test_oracle_nonconvergent_extrapolation():
    # damping far outside the analytic regime: the extrapolants wander
    f = FresnelIntegrand(0.0, 1.0, lambda z: np.cos(3 * np.asarray(z)))
    with pytest.raises(ExtrapolationError):
        epsilon_oracle(f, (4.0, 2.0, 1.0))


def test_neville_reproduces_polynomials():
    e = [0.4, 0.2, 0.1, 0.05]
    vals = [3 - 2 * x + 0.5 * x ** 3 for x in e]
    assert abs(neville_at_zero(e, vals)[-1] - 3) < 1e-13


# -- angle independence -----------------------------------------------------------

def test_angle_independence_constant():
    rep = angle_independence_check(FresnelIntegrand(0.0, 1.0, ONE), (-0.6, 0.0, 0.6))
    assert rep.max_deviation <= 1e-8


def test_angle_independence_zero():
    assert angle_independence_check(FresnelIntegrand(0.0, 1.0, ZERO)).max_deviation == 0


def test_angle_independence_bessel_kernel():
    # centrifugal propagator integrand at x = 1, t = 0.7, nu = sqrt(5)/2
    nu, x, t = math.sqrt(5) / 2, 1.0, 0.7
    g = lambda z: e_nu(nu, x * np.asarray(z) / t) * np.exp(1j * 0.8 * np.asarray(z))  # noqa: E731
    f = FresnelIntegrand(nu + 0.5, -1 / (2 * t), g)
    assert angle_independence_check(f).max_deviation <= 1e-6


def test_angle_bounds():
    with pytest.raises(ValidationError):
        angle_independence_check(FresnelIntegrand(0.0, 1.0, ONE), (0.0, 0.76))


# -- suite --------------------------------------------------------------------

def test_suite_small():
    recs = verify_suite(standard_suite(seed=3, n=4))
    for r in recs:
        assert close(r.contour, r.oracle)
        assert r.angle_deviation <= 1e-8
