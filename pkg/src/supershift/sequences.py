"""The archetypal superoscillating sequence and its growth estimates.

    F_N(z, a) = (cos(z/N) + i a sin(z/N))**N = sum_j C_j(N, a) exp(i k_j z),
    C_j(N, a) = binom(N, j) ((1+a)/2)**(N-j) ((1-a)/2)**j,   k_j = 1 - 2j/N.

For ``|a| > 1`` the coefficients alternate in sign and their absolute sum
is ``|a|**N``, so the Fourier-sum form loses about ``N log10|a|`` digits
to cancellation.  The product form is stable and is the reference.
:func:`evaluate_sum` detects the ill-conditioned regime and, when the
generating parameters are known, re-evaluates the sum in multiprecision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings
from typing import Callable, Optional

import mpmath
import numpy as np

from . import _kernels
from .errors import CoefficientOverflowError, DomainError, ValidationError

__all__ = [
    "SuperoscParams",
    "FourierSum",
    "GrowthCertificate",
    "ConditioningWarning",
    "coefficients",
    "coefficients_mp",
    "evaluate_product",
    "evaluate_sum",
    "closeness_bound",
    "lemma25_bound",
    "growth_certificate",
    "ap_norm_estimate",
    "derivative_jet",
    "l1_mass",
]

_EPS = np.finfo(float).eps
_LOG_MAX = math.log(np.finfo(float).max)
# absolute accuracy target of the double-precision sum before falling back
SUM_TOLERANCE = 1e-12


class ConditioningWarning(RuntimeWarning):
    """A sum was evaluated in a regime where rounding may dominate."""


@dataclass(frozen=True)
class SuperoscParams:
    """Target frequency ``a`` and generation index ``N`` of F_N(., a)."""

    a: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValidationError("N must be a positive integer")
        if not math.isfinite(self.a):
            raise ValidationError("a must be finite")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "a", float(self.a))

    @property
    def alpha(self) -> float:
        return max(1.0, abs(self.a))


@dataclass(frozen=True)
class FourierSum:
    """Finite exponential sum ``sum_j C_j exp(i k_j z)``.

    ``params`` records the generating (a, N) when the sum came from
    :func:`coefficients`; it enables exact re-evaluation.
    """

    coefficients: np.ndarray
    frequencies: np.ndarray
    N: int
    params: Optional[SuperoscParams] = field(default=None, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        k = np.asarray(self.frequencies, dtype=np.float64)
        if c.ndim != 1 or c.shape != k.shape:
            raise ValidationError("coefficients and frequencies must be 1-d of equal length")
        if len(c) != self.N + 1:
            raise ValidationError(f"a FourierSum of index N={self.N} needs N+1 terms, got {len(c)}")
        c.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "frequencies", k)

    @property
    def is_band_limited(self) -> bool:
        return bool(np.all(np.abs(self.frequencies) <= 1.0 + 1e-15))


@dataclass(frozen=True)
class GrowthCertificate:
    """Certifies ``|f_j| <= C b**j / Gamma(j/p + 1)`` for a coefficient list."""

    p: float
    C: float
    b: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValidationError("certificate order p must be >= 1")
        if not (self.C >= 0 and self.b >= 0):
            raise ValidationError("certificate constants must be nonnegative")

    def log_bound(self, j):
        """log of ``C b**j / Gamma(j/p+1)`` (``-inf`` when C = 0)."""
        j = np.asarray(j, dtype=np.float64)
        if self.C == 0:
            return np.full(j.shape, -np.inf)
        from scipy.special import gammaln

        with np.errstate(divide="ignore"):
            logb = np.log(self.b) if self.b > 0 else -np.inf
            lb = math.log(self.C) + np.where(j == 0, 0.0, j * logb) - gammaln(j / self.p + 1.0)
        return lb

    def validates(self, coeffs, rtol=1e-12) -> bool:
        c = np.abs(np.asarray(coeffs, dtype=np.complex128))
        j = np.arange(len(c))
        # subnormal entries carry no relative precision; floor at 1e-300
        c = np.maximum(c - 1e-300, 0.0)
        with np.errstate(divide="ignore"):
            lc = np.log(c)
        return bool(np.all(lc <= self.log_bound(j) + math.log1p(rtol)))


def _log_abs_coefficients(a: float, N: int):
    """log|C_j| and sign(C_j) with exact integer binomials."""
    alpha = 0.5 * (1.0 + a)
    beta = 0.5 * (1.0 - a)
    j = np.arange(N + 1)
    logbin = np.array([math.log(math.comb(N, int(i))) for i in j])
    with np.errstate(divide="ignore"):
        la = math.log(abs(alpha)) if alpha != 0 else -math.inf
        lb = math.log(abs(beta)) if beta != 0 else -math.inf
    # 0**0 = 1
    with np.errstate(invalid="ignore"):
        ta = np.where(N - j == 0, 0.0, (N - j) * la)
        tb = np.where(j == 0, 0.0, j * lb)
    logc = logbin + ta + tb
    sign = np.where((N - j) % 2 == 1, np.sign(alpha), 1.0) * np.where(j % 2 == 1, np.sign(beta), 1.0)
    return logc, sign


def coefficients(params: SuperoscParams) -> FourierSum:
    """Coefficients C_j(N, a) and frequencies k_j = 1 - 2j/N.

    Raises :class:`CoefficientOverflowError` when some ``|C_j|`` is not
    representable in double precision.
    """
    a, N = params.a, params.N
    j = np.arange(N + 1)
    k = 1.0 - 2.0 * j / N
    if N <= 60:
        alpha = 0.5 * (1.0 + a)
        beta = 0.5 * (1.0 - a)
        c = np.array([math.comb(N, int(i)) * alpha ** (N - i) * beta ** i for i in j], dtype=np.float64)
        if not np.all(np.isfinite(c)):
            raise CoefficientOverflowError(f"C_j(N={N}, a={a}) overflows double precision")
    else:
        logc, _ = _log_abs_coefficients(a, N)
        if np.max(logc) > _LOG_MAX:
            raise CoefficientOverflowError(
                f"max |C_j(N={N}, a={a})| = exp({np.max(logc):.1f}) overflows; reduce N or |a|"
            )
        # exp(logc) would lose |logc| ulps; round exact values instead
        c = np.array([float(v) for v in coefficients_mp(params, 30)], dtype=np.float64)
    return FourierSum(c.astype(np.complex128), k, N, params)


def coefficients_mp(params: SuperoscParams, dps: int):
    """Coefficients as mpmath numbers at ``dps`` digits (exact for dyadic a)."""
    with mpmath.workdps(dps):
        a = mpmath.mpf(params.a)
        alpha = (1 + a) / 2
        beta = (1 - a) / 2
        N = params.N
        return [mpmath.mpf(math.comb(N, j)) * alpha ** (N - j) * beta ** j for j in range(N + 1)]


def l1_mass(params: SuperoscParams) -> float:
    """sum_j |C_j(N,a)| = ((|1+a| + |1-a|)/2)**N = alpha**N (may be inf)."""
    try:
        return params.alpha ** params.N
    except OverflowError:
        return math.inf


def evaluate_product(z, params: SuperoscParams):
    """Product form ``(cos(z/N) + i a sin(z/N))**N`` (scalar or array)."""
    zz = np.asarray(z, dtype=np.complex128)
    s = zz / params.N
    u = np.cos(s) + 1j * params.a * np.sin(s)
    out = u ** params.N
    return out[()] if out.ndim == 0 else out


def _sum_mp(z: complex, params: SuperoscParams, scale: float) -> complex:
    dps = int(math.log10(max(scale, 10.0))) + 30
    with mpmath.workdps(dps):
        c = coefficients_mp(params, dps)
        zz = mpmath.mpc(z)
        N = params.N
        # exp(i k_j z) = exp(i z) * w**j with w = exp(-2 i z / N)
        w = mpmath.exp(-2j * zz / N)
        acc = mpmath.mpc(0)
        for cj in reversed(c):
            acc = acc * w + cj
        return complex(acc * mpmath.exp(1j * zz))


def evaluate_sum(z, fs: FourierSum, exact_fallback: bool = True):
    """``sum_j C_j exp(i k_j z)`` with compensated summation.

    When the rounding bound ``4 eps sum_j |C_j exp(i k_j z)|`` exceeds
    ``SUM_TOLERANCE (1 + |value|)`` and ``fs.params`` is known, the point is
    recomputed in multiprecision from exact coefficients.  Without
    ``params`` a :class:`ConditioningWarning` is emitted instead.
    """
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    flat = zz.ravel()
    ik = 1j * fs.frequencies
    zeros = np.zeros(flat.shape, dtype=np.float64)
    vals = _kernels.expsum2(fs.coefficients, ik, np.zeros_like(fs.frequencies), flat, zeros)
    mags = np.abs(fs.coefficients)[None, :] * np.exp(-np.outer(flat.imag, fs.frequencies))
    scale = mags.sum(axis=1)
    err = 4.0 * _EPS * scale * max(1, len(fs.coefficients)) ** 0.5
    bad = err > SUM_TOLERANCE * (1.0 + np.abs(vals))
    if np.any(bad):
        if exact_fallback and fs.params is not None:
            for i in np.flatnonzero(bad):
                vals[i] = _sum_mp(complex(flat[i]), fs.params, float(scale[i]))
        else:
            warnings.warn(
                f"Fourier sum rounding bound {err.max():.2e} exceeds tolerance", ConditioningWarning, stacklevel=2
            )
    vals = vals.reshape(zz.shape)
    return vals[0] if np.ndim(z) == 0 else vals


def closeness_bound(z, params: SuperoscParams):
    """(2/3) (|a^2-1|/N) |z|^2 exp((alpha+1)|z|), alpha = max(1,|a|)."""
    r = np.abs(np.asarray(z, dtype=np.complex128))
    val = (2.0 / 3.0) * abs(params.a ** 2 - 1.0) / params.N * r * r * np.exp((params.alpha + 1.0) * r)
    return float(val) if np.ndim(val) == 0 else val


lemma25_bound = closeness_bound  # name kept for API compatibility


def growth_certificate(coeffs, p: float, b: float) -> GrowthCertificate:
    """Minimal C with ``|f_j| <= C b**j / Gamma(j/p+1)`` over the given list."""
    if not p >= 1:
        raise ValidationError("p must be >= 1")
    if not b > 0:
        raise ValidationError("b must be positive")
    from scipy.special import gammaln

    c = np.abs(np.asarray(coeffs, dtype=np.complex128))
    nz = c > 0
    if not np.any(nz):
        return GrowthCertificate(p, 0.0, b)
    j = np.arange(len(c))[nz]
    logC = np.max(np.log(c[nz]) + gammaln(j / p + 1.0) - j * math.log(b))
    if logC > _LOG_MAX:
        raise CoefficientOverflowError("certificate constant overflows")
    # nudge up by a few ulps so the certificate validates its own list
    return GrowthCertificate(p, math.exp(logC) * (1.0 + 8 * _EPS), b)


def ap_norm_estimate(
    f: Callable, p: float, B: float, radius: float, grid_n: int = 64, radial_step: Optional[float] = None
) -> float:
    """Sampled ``sup |f(z)| exp(-B |z|**p)`` over the disc ``|z| <= radius``.

    The polar grid uses ``grid_n`` angles and radii on the fixed lattice
    ``k * radial_step`` (default ``4/grid_n``), so enlarging ``radius``
    only adds samples and the estimate is nondecreasing in ``radius``.
    """
    if grid_n < 8:
        raise ValidationError("grid_n must be >= 8")
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    h = radial_step if radial_step is not None else 4.0 / grid_n
    r = h * np.arange(int(math.floor(radius / h + 1e-12)) + 1)
    th = 2.0 * np.pi * np.arange(grid_n) / grid_n
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    try:
        vals = np.asarray(f(z), dtype=np.complex128)
        if vals.shape != z.shape:
            raise ValueError
    except Exception:
        vals = np.array([complex(f(zi)) for zi in z])
    weight = np.abs(vals) * np.exp(-B * np.abs(z) ** p)
    return float(np.max(weight))


def derivative_jet(x, params: SuperoscParams, order: int) -> np.ndarray:
    """Derivatives ``F_N^{(m)}(x)``, ``m = 0..order``; shape ``(len(x), order+1)``.

    Orders up to ``1.5 N`` come from Miller's power recurrence on
    ``u(x) = cos(x/N) + i a sin(x/N)``, which needs no cancellation between
    huge coefficients.  The recurrence loses accuracy beyond that order,
    where the moments ``sum_j C_j (i k_j)**m exp(i k_j x)`` are dominated by
    the end terms and are summed directly instead.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=np.complex128)).ravel()
    N = params.N
    m_rec = min(order, int(1.5 * N))
    m = np.arange(m_rec + 1)
    s = xs[:, None] / N + m[None, :] * (np.pi / 2.0)
    with np.errstate(under="ignore"):
        scale = float(N) ** (-m.astype(np.float64))
    U = (np.cos(s) + 1j * params.a * np.sin(s)) * scale[None, :]
    if np.any(np.abs(U[:, 0]) < 1e-300):
        raise DomainError("product-form base vanishes at an evaluation point")
    D = _kernels.power_jet(U, float(N), _binomial_table(m_rec))
    if m_rec == order:
        return D
    fs = coefficients(params)
    k = fs.frequencies
    e = fs.coefficients[None, :] * np.exp(1j * np.outer(xs, k))
    hi = np.arange(m_rec + 1, order + 1)
    with np.errstate(under="ignore"):
        mom = (1j * k[None, :]) ** hi[:, None]
    return np.concatenate([D, e @ mom.T], axis=1)


_BINOM_CACHE: dict = {}


def _binomial_table(order: int) -> np.ndarray:
    tab = _BINOM_CACHE.get(order)
    if tab is None:
        from scipy.special import comb

        n = np.arange(order + 1)
        tab = comb(n[:, None], n[None, :], exact=False)
        _BINOM_CACHE[order] = tab
    return tab
