"""Green-function evolution of plane-wave data for the centrifugal potential
``u / (2 x^2)`` on the half-line and for the harmonic oscillator ``x^2/2``,
with supershift gap measurements and a singular-time probe.

Harmonic closed form (branch of ``(cos t)^(-1/2)`` continued from t = 0):

    phi_lam(t, x) = (cos t)^(-1/2) exp(-i x^2 tan t / 2) exp(-i lam^2 tan t / 2) exp(i lam x / cos t).

Centrifugal kernel integral, ``nu = sqrt(1 + 4u) / 2``:

    psi(t, x) = e^{-i pi (nu+1)/2} 2^-nu e^{i x^2/(2t)} x^(nu+1/2) t^-(nu+1)
                * int_0^inf y^(nu+1/2) e^{i y^2/(2t)} E_nu(x y / t) f(y) dy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import MarginError, SingularTimeError, ValidationError
from .evolution import GapReport, GridRect, fit_rate, psi_points
from .fresnel import FresnelIntegrand, QuadratureConfig, regularize_halfline, regularize_realline
from .operators import DispersionSpec
from .sequences import SuperoscParams, evaluate_product
from .special_functions import e_nu

__all__ = [
    "CentrifugalSpec",
    "HarmonicSpec",
    "ProbeReport",
    "centrifugal_evolve",
    "harmonic_evolve_closed",
    "harmonic_evolve_kernel",
    "harmonic_evolve_windowed",
    "harmonic_superposition",
    "supershift_gap_harmonic",
    "supershift_gap_centrifugal",
    "singularity_probe",
]

_SINGULAR_TOL = 1e-9
# E_nu on complex rays: series up to |z| = 20, complex Bessel routine beyond
_CENTRIFUGAL_QUAD = QuadratureConfig(tol=1e-10)


@dataclass(frozen=True)
class CentrifugalSpec:
    """Centrifugal potential ``u / (2 x^2)``; ``nu = sqrt(1 + 4u) / 2``."""

    u: float
    nu: float = field(init=False)

    def __post_init__(self):
        if not self.u > 0:
            raise ValidationError("u must be positive")
        object.__setattr__(self, "nu", 0.5 * math.sqrt(1.0 + 4.0 * self.u))


@dataclass(frozen=True)
class HarmonicSpec:
    """Harmonic oscillator ``V = x^2 / 2``; singular times ``pi (2k+1) / 2``."""

    margin: float = 0.1

    def __post_init__(self):
        if not self.margin >= 0:
            raise ValidationError("margin must be nonnegative")

    @staticmethod
    def distance_to_singular(t) -> np.ndarray:
        """Distance from ``t`` to the nearest odd multiple of ``pi/2``."""
        t = np.asarray(t, dtype=float)
        return np.abs(np.mod(t, math.pi) - 0.5 * math.pi)

    @staticmethod
    def distance_to_kernel_singular(t) -> np.ndarray:
        """Distance from ``t`` to the nearest multiple of ``pi``."""
        t = np.asarray(t, dtype=float)
        r = np.mod(t, math.pi)
        return np.minimum(r, math.pi - r)

    def is_singular(self, t) -> np.ndarray:
        return self.distance_to_singular(t) < self.margin


# ---------------------------------------------------------------------------
# harmonic oscillator
# ---------------------------------------------------------------------------

def _cos_branch(t):
    """``(cos t)^(-1/2)`` continued along t from 0: phase -pi/2 per zero crossed."""
    t = np.asarray(t, dtype=float)
    c = np.cos(t)
    m = np.sign(t) * np.floor((np.abs(t) + 0.5 * math.pi) / math.pi)
    return np.abs(c) ** -0.5 * np.exp(-0.5j * math.pi * m)


def _check_cos(t) -> None:
    if np.any(np.abs(np.cos(np.asarray(t, dtype=float))) < _SINGULAR_TOL):
        raise SingularTimeError("harmonic evolution is singular where cos t = 0 (t in pi(2k+1)/2)")


def harmonic_evolve_closed(lam: float, t, x):
    """Closed-form evolution of ``exp(i lam x)`` under the harmonic oscillator."""
    _check_cos(t)
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    T = np.tan(t)
    out = _cos_branch(t) * np.exp(-0.5j * (x * x + lam * lam) * T + 1j * lam * x / np.cos(t))
    return out[()] if out.ndim == 0 else out


def harmonic_evolve_kernel(lam: float, t: float, x: float, q: Optional[QuadratureConfig] = None) -> complex:
    """Mehler-kernel integral over the real line, regularized by contour rotation.

    ``sqrt(1/(2 i pi sin t)) e^{i x^2 cot t / 2} int e^{i y^2 cot t/2} e^{-i x y/sin t} e^{i lam y} dy``.
    The square root is continued along t from 0: ``e^{-i pi/4} e^{-i pi n/2} |2 pi sin t|^(-1/2)``
    with ``n = floor(t / pi)``.
    """
    s, c = math.sin(t), math.cos(t)
    if abs(s) < _SINGULAR_TOL or abs(c) < _SINGULAR_TOL:
        raise SingularTimeError("kernel route needs sin t != 0 and cos t != 0")
    cot = c / s
    b = lam - x / s
    f = FresnelIntegrand(0.0, -0.5 * cot, lambda y: np.exp(1j * b * np.asarray(y)), description="Mehler kernel")
    val = regularize_realline(f, q or QuadratureConfig())
    n = math.floor(t / math.pi)
    pref = np.exp(-0.25j * math.pi - 0.5j * math.pi * n) / math.sqrt(abs(2.0 * math.pi * s))
    return complex(pref * np.exp(0.5j * x * x * cot) * val)


def harmonic_evolve_windowed(lam: float, sigma: float, t, x):
    """Exact evolution of ``exp(i lam x) exp(-x^2 / (2 sigma^2))``.

    ``(cos t + i sin t / sigma^2)^(-1/2) exp(i x^2 cot t / 2 + B^2 / (4A))`` with
    ``A = 1/(2 sigma^2) - i cot t / 2`` and ``B = i lam - i x / sin t``; the
    square root is continued from t = 0.
    """
    if not sigma > 0:
        raise ValidationError("sigma must be positive")
    t = float(t)
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        return np.exp(1j * lam * x - x * x / (2.0 * sigma ** 2))
    s, c = math.sin(t), math.cos(t)
    if abs(s) < 1e-12:
        # sin t = 0: the packet returns to +-x with a phase
        k = round(t / math.pi)
        w = complex(c)
        arg_w = math.pi * k
        pref = abs(w) ** -0.5 * np.exp(-0.5j * arg_w)
        xs = x * c
        return pref * np.exp(1j * lam * xs - xs * xs / (2.0 * sigma ** 2))
    w = complex(c, s / sigma ** 2)
    principal = math.atan2(w.imag, w.real)
    arg_w = principal + 2.0 * math.pi * round((t - principal) / (2.0 * math.pi))
    pref = abs(w) ** -0.5 * np.exp(-0.5j * arg_w)
    cot = c / s
    A = 1.0 / (2.0 * sigma ** 2) - 0.5j * cot
    B = 1j * lam - 1j * x / s
    return pref * np.exp(0.5j * x * x * cot + B * B / (4.0 * A))


def _check_grid_margin(grid: GridRect, margin: float) -> None:
    t = grid.t
    if np.min(HarmonicSpec.distance_to_singular(t)) < margin:
        raise MarginError(f"grid times come within {margin:g} of pi(2k+1)/2")
    if np.min(HarmonicSpec.distance_to_kernel_singular(t)) < margin:
        raise MarginError(f"grid times come within {margin:g} of pi k")


def _x_jet_prefactor(t: np.ndarray, x: np.ndarray, order: int) -> np.ndarray:
    """``d^k/dx^k A / A`` for ``A = exp(-i x^2 tan t / 2)``, k = 0..order."""
    T = np.tan(t)
    # A^(k) = p_k(x) A with p_{k+1} = p_k' - i x T p_k; p_k as coefficient arrays in x
    polys = [np.zeros((order + 1,) + t.shape, dtype=np.complex128)]
    polys[0][0] = 1.0
    out = np.empty((order + 1,) + t.shape, dtype=np.complex128)
    for k in range(order + 1):
        p = polys[k]
        out[k] = sum(p[d] * x ** d for d in range(order + 1))
        if k == order:
            break
        nxt = np.zeros_like(p)
        for d in range(1, order + 1):
            nxt[d - 1] += d * p[d]
        for d in range(order):
            nxt[d + 1] += -1j * T * p[d]
        polys.append(nxt)
    return out


def _apply_h(jet: np.ndarray, x: np.ndarray) -> np.ndarray:
    """x-jet of ``(i/2)(g'' - x^2 g)`` from the x-jet of g (two orders shorter)."""
    n_out = jet.shape[0] - 2
    out = np.empty((n_out,) + jet.shape[1:], dtype=np.complex128)
    for n in range(n_out):
        x2g = x * x * jet[n]
        if n >= 1:
            x2g = x2g + 2 * n * x * jet[n - 1]
        if n >= 2:
            x2g = x2g + n * (n - 1) * jet[n - 2]
        out[n] = 0.5j * (jet[n + 2] - x2g)
    return out


def _combine_jets(t, x, inner_jet: np.ndarray, mu: int, nu: int) -> np.ndarray:
    """``d_t^mu d_x^nu`` of ``(cos t)^(-1/2) A(t,x) inner(t,x)`` given x-jets of inner."""
    K = inner_jet.shape[0] - 1
    pref = _x_jet_prefactor(t, x, K)
    jet = np.zeros_like(inner_jet)
    binom = [[math.comb(n, m) for m in range(n + 1)] for n in range(K + 1)]
    for n in range(K + 1):
        for m in range(n + 1):
            jet[n] += binom[n][m] * pref[n - m] * inner_jet[m]
    jet *= _cos_branch(t) * np.exp(-0.5j * x * x * np.tan(t))
    for _ in range(mu):
        jet = _apply_h(jet, x)
    return jet[nu]


_HARMONIC_INNER = DispersionSpec.monomial(2, -0.5)


def harmonic_superposition(params: SuperoscParams, t, x, mu: int = 0, nu: int = 0):
    """``d_t^mu d_x^nu sum_j C_j(N, a) phi_{k_j}(t, x)``.

    The sum equals ``(cos t)^(-1/2) e^{-i x^2 tan t/2} psi(tan t, x / cos t)``
    where psi is the free evolution under ``P(k) = -k^2/2``, evaluated by the
    conditioned routes of :func:`supershift.evolution.psi_points`.
    x-derivatives follow by Leibniz; t-derivatives by the oscillator equation.
    """
    if mu < 0 or nu < 0 or mu + nu > 4 or mu > 2:
        raise ValidationError("need mu <= 2 and mu + nu <= 4")
    _check_cos(t)
    tb, xb = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    K = nu + 2 * mu
    c = np.cos(tb)
    tau, xi = np.tan(tb), xb / c
    inner = np.empty((K + 1,) + tb.shape, dtype=np.complex128)
    for m in range(K + 1):
        inner[m] = psi_points(_HARMONIC_INNER, params, tau, xi, 0, m) / c ** m
    out = _combine_jets(tb, xb, inner, mu, nu)
    return out[()] if out.ndim == 0 else out


def _harmonic_limit(a: float, t, x, mu: int, nu: int):
    tb, xb = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    K = nu + 2 * mu
    c = np.cos(tb)
    base = np.exp(-0.5j * a * a * np.tan(tb) + 1j * a * xb / c)
    inner = np.stack([(1j * a / c) ** m * base for m in range(K + 1)])
    return _combine_jets(tb, xb, inner, mu, nu)


def supershift_gap_harmonic(
    a: float,
    grid: GridRect = GridRect(0.2, 1.3, -2.0, 2.0, 23, 41),
    Ns: Sequence[int] = (10, 20, 40, 80, 160, 320),
    mu: int = 0,
    nu: int = 0,
    margin: float = 0.1,
) -> GapReport:
    """Sup-norm gap between the superposed evolutions and ``phi_a`` per N."""
    _check_grid_margin(grid, margin)
    if list(Ns) != sorted(set(Ns)):
        raise ValidationError("Ns must be strictly increasing")
    T, X = np.meshgrid(grid.t, grid.x, indexing="ij")
    lim = _harmonic_limit(a, T, X, mu, nu)
    gaps = []
    for N in Ns:
        vals = harmonic_superposition(SuperoscParams(a, N), T, X, mu, nu)
        gaps.append(float(np.max(np.abs(vals - lim))))
    rate, resid = fit_rate(Ns, gaps, last=min(5, len(Ns)))
    flags = {"in_band": abs(a) <= 1.0, "margin": margin}
    return GapReport(grid.as_dict(), list(Ns), gaps, rate, resid, (mu, nu), flags)


# ---------------------------------------------------------------------------
# centrifugal potential
# ---------------------------------------------------------------------------

def centrifugal_evolve(
    spec: CentrifugalSpec,
    lam: float,
    t: float,
    x: float,
    q: Optional[QuadratureConfig] = None,
    datum: Optional[Callable] = None,
) -> complex:
    """Kernel evolution of ``exp(i lam x)`` (or of an entire ``datum``) at (t, x).

    ``datum`` replaces the plane wave; it must accept complex arrays.
    """
    if not t > 0:
        raise ValidationError("t must be positive")
    if not x > 0:
        raise ValidationError("x must be positive")
    nu = spec.nu
    r = x / t
    if datum is None:
        G = lambda y: e_nu(nu, r * np.asarray(y)) * np.exp(1j * lam * np.asarray(y))  # noqa: E731
    else:
        G = lambda y: e_nu(nu, r * np.asarray(y)) * datum(np.asarray(y))  # noqa: E731
    f = FresnelIntegrand(nu + 0.5, -0.5 / t, G, description="centrifugal kernel")
    val = regularize_halfline(f, q or _CENTRIFUGAL_QUAD)
    pref = np.exp(-0.5j * math.pi * (nu + 1.0)) / 2.0 ** nu
    pref *= np.exp(0.5j * x * x / t) * x ** (nu + 0.5) / t ** (nu + 1.0)
    return complex(pref * val)


def supershift_gap_centrifugal(
    spec: CentrifugalSpec,
    a: float,
    grid: GridRect = GridRect(0.5, 1.5, 0.5, 2.0, 6, 7),
    Ns: Sequence[int] = (10, 20, 40, 80, 160),
    q: Optional[QuadratureConfig] = None,
) -> GapReport:
    """Gap between the evolution of ``F_N(., a)`` and of ``exp(i a x)`` per N.

    By linearity the N-term superposition is a single quadrature with
    ``F_N`` in product form inside the integrand.
    """
    if not (grid.t_min > 0 and grid.x_min > 0):
        raise ValidationError("centrifugal grid must lie in (0, inf) x (0, inf)")
    if list(Ns) != sorted(set(Ns)):
        raise ValidationError("Ns must be strictly increasing")
    pts = [(t, x) for t in grid.t for x in grid.x]
    lim = np.array([centrifugal_evolve(spec, a, t, x, q) for t, x in pts])
    gaps = []
    for N in Ns:
        p = SuperoscParams(a, N)
        datum = lambda y, p=p: evaluate_product(y, p)  # noqa: E731
        vals = np.array([centrifugal_evolve(spec, a, t, x, q, datum=datum) for t, x in pts])
        gaps.append(float(np.max(np.abs(vals - lim))))
    rate, resid = fit_rate(Ns, gaps, last=min(5, len(Ns)))
    flags = {"strictly_decreasing": bool(all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))), "in_band": abs(a) <= 1.0}
    return GapReport(grid.as_dict(), list(Ns), gaps, rate, resid, (0, 0), flags)


# ---------------------------------------------------------------------------
# singular-time probe
# ---------------------------------------------------------------------------

@dataclass
class ProbeReport:
    t: list
    modulus: list
    exponent: float
    fit_residual: float
    blow_up: bool


def singularity_probe(lam: float, x: float, t_list: Sequence[float]) -> ProbeReport:
    """Fit ``log|phi_lam(t, x)|`` against ``log|cos t|``.

    ``blow_up`` is set when the list reaches ``|cos t| < 1e-2`` and the
    fitted exponent is below -0.25.
    """
    t = np.asarray(t_list, dtype=float)
    if len(t) < 3:
        raise ValidationError("t_list needs at least 3 times")
    mod = np.abs(harmonic_evolve_closed(lam, t, x))
    lc = np.log(np.abs(np.cos(t)))
    coef, res, *_ = np.polyfit(lc, np.log(mod), 1, full=True)
    rms = float(math.sqrt(res[0] / len(t))) if len(res) else 0.0
    blow = bool(np.min(np.abs(np.cos(t))) < 1e-2 and coef[0] < -0.25)
    return ProbeReport(list(map(float, t)), list(map(float, mod)), float(coef[0]), rms, blow)
