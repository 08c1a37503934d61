"""Complex special functions: Gamma, Mittag-Leffler, the Bessel-type
kernel ``E_nu`` and the cardinal sine.

``E_nu`` is the entire part of the Bessel function,

    J_nu(z) = (z/2)**nu * E_nu(z),
    E_nu(z) = sum_k (-1)**k (z/2)**(2k) / (k! Gamma(nu + k + 1)),

evaluated by its alternating series for moderate arguments and by
Hankel's asymptotic expansion on the far positive real axis.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import jv

from . import _kernels
from .errors import DomainError, NonConvergenceError, PoleError, ValidationError

__all__ = [
    "SeriesEvalConfig",
    "gamma",
    "log_gamma",
    "mittag_leffler",
    "e_nu",
    "e_nu_series",
    "e_nu_asymptotic",
    "watson_coefficients",
    "hankel_coefficients",
    "sinc",
]


@dataclass(frozen=True)
class SeriesEvalConfig:
    """Truncation policy shared by the series evaluators.

    ``tail_tolerance`` is an absolute bound on the neglected tail.
    Arguments with modulus above ``asymptotic_switch_radius`` go to the
    asymptotic expansion where one is available.
    """

    max_terms: int = 1000
    tail_tolerance: float = 1e-16
    asymptotic_switch_radius: float = 20.0

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValidationError("max_terms must be a positive integer")
        if not self.tail_tolerance > 0:
            raise ValidationError("tail_tolerance must be positive")
        if not self.asymptotic_switch_radius > 0:
            raise ValidationError("asymptotic_switch_radius must be positive")


DEFAULT_CONFIG = SeriesEvalConfig()

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_poles(z):
    re_int = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(re_int):
        bad = z[re_int].real[0]
        raise PoleError(f"Gamma has a pole at z = {bad:g}")


def _log_gamma_right(z):
    # valid for Re z >= 0.5
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEFFS[0], dtype=np.complex128)
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc = acc + _LANCZOS_COEFFS[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _as_complex_array(z):
    arr = np.asarray(z, dtype=np.complex128)
    return arr, arr.ndim == 0


def gamma(z):
    """Gamma function for complex arguments (scalar or array).

    Raises :class:`PoleError` at nonpositive integers.
    """
    arr, scalar = _as_complex_array(z)
    arr = np.atleast_1d(arr)
    _check_poles(arr)
    out = np.empty(arr.shape, dtype=np.complex128)
    right = arr.real >= 0.5
    if np.any(right):
        out[right] = np.exp(_log_gamma_right(arr[right]))
    left = ~right
    if np.any(left):
        zl = arr[left]
        out[left] = np.pi / (np.sin(np.pi * zl) * np.exp(_log_gamma_right(1.0 - zl)))
    return out[0] if scalar else out


def log_gamma(x):
    """Natural log of Gamma for real ``x >= 0.5`` (scalar or array)."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0.5):
        raise DomainError("log_gamma is only provided for real arguments >= 0.5")
    res = _log_gamma_right(np.atleast_1d(arr).astype(np.complex128)).real
    return float(res[0]) if arr.ndim == 0 else res.reshape(arr.shape)


def mittag_leffler(p, zeta, cfg=DEFAULT_CONFIG):
    """E_{1/p,1}(zeta) = sum_k zeta**k / Gamma(k/p + 1) for ``p >= 1``.

    The sum stops once the geometric majorant of the tail is below
    ``cfg.tail_tolerance``. Returns ``inf`` if the terms overflow.
    """
    if p < 1:
        raise ValidationError("Mittag-Leffler order parameter p must be >= 1")
    zeta = complex(zeta)
    if zeta == 0:
        return 1.0 + 0.0j
    r = abs(zeta)
    log_r = math.log(r)
    arg = np.angle(zeta)
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    lg_next = 0.0  # log Gamma(0/p + 1)
    for k in range(cfg.max_terms):
        lg_k = lg_next
        lg_next = math.lgamma((k + 1) / p + 1.0)
        log_mag = k * log_r - lg_k
        if log_mag > 709.0:
            return complex(math.inf, 0.0)
        term = math.exp(log_mag) * complex(math.cos(k * arg), math.sin(k * arg))
        y = term - comp
        tot = s + y
        comp = (tot - s) - y
        s = tot
        # ratio |t_{k+1}/t_k| is nonincreasing in k
        ratio = math.exp(log_r + lg_k - lg_next)
        if ratio < 1.0:
            tail = math.exp(log_mag) * ratio / (1.0 - ratio)
            if tail <= cfg.tail_tolerance:
                return s
    raise NonConvergenceError(
        f"Mittag-Leffler series for |zeta|={r:g} not converged in {cfg.max_terms} terms"
    )


def hankel_coefficients(nu, k_max):
    """Hankel asymptotic coefficients a_0..a_kmax of the Bessel function.

    Product form ``a_k = prod_{m=1}^k (4 nu^2 - (2m-1)^2) / (8^k k!)``; it
    agrees with the Gamma-quotient form of :func:`watson_coefficients`
    wherever the latter is finite, and stays finite at half-integer ``nu``.
    """
    a = np.empty(k_max + 1)
    a[0] = 1.0
    mu = 4.0 * nu * nu
    # the coefficients grow factorially; overflow to inf is harmless for
    # the remainder test, which stops well before that order
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, k_max + 1):
            a[k] = a[k - 1] * (mu - (2 * k - 1) ** 2) / (8.0 * k)
    return a


def watson_coefficients(nu, k_max, k_min=0):
    """Coefficients a_k(nu), ``k_min <= k <= k_max``, in Gamma-quotient form.

        a_k = (-1)^k cos(pi nu)/pi * Gamma(k+1/2+nu) Gamma(k+1/2-nu) / (2^k k!)

    Raises :class:`PoleError` if a Gamma argument is a nonpositive integer
    (this happens for half-integer ``nu`` and small ``k``).
    """
    out = []
    half_integer = float(nu - 0.5).is_integer()
    c = 0.0 if half_integer else math.cos(math.pi * nu) / math.pi
    for k in range(k_min, k_max + 1):
        g = gamma(np.array([k + 0.5 + nu, k + 0.5 - nu]))
        val = (-1) ** k * c * (g[0] * g[1]).real / (2.0 ** k * math.factorial(k))
        out.append(val)
    return np.array(out)


def e_nu_series(nu, z, cfg=DEFAULT_CONFIG):
    """Alternating power series for E_nu at any complex ``z`` (array in/out)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    first = float(1.0 / gamma(nu + 1.0).real)
    vals, used, last = _kernels.e_nu_series(float(nu), z, first, int(cfg.max_terms), float(cfg.tail_tolerance))
    if np.any(last > cfg.tail_tolerance):
        worst = np.max(np.abs(z[last > cfg.tail_tolerance]))
        raise NonConvergenceError(
            f"E_nu series at |z|={worst:g} did not reach tail {cfg.tail_tolerance:g} in {cfg.max_terms} terms"
        )
    return vals


def e_nu_asymptotic(nu, y, tol=DEFAULT_CONFIG.tail_tolerance, max_order=400):
    """Hankel expansion of E_nu on the positive real axis.

    The order M is the smallest with ``2M > nu - 1/2`` whose Watson
    remainder bound ``|a_2M|/y^2M + |a_2M+1|/y^(2M+1)`` (times the
    prefactor) is below ``tol``.
    """
    y = np.atleast_1d(np.asarray(y, dtype=np.float64)).ravel()
    if np.any(y <= 0):
        raise DomainError("asymptotic expansion of E_nu needs positive real arguments")
    a = hankel_coefficients(nu, 2 * max_order + 1)
    m_min = max(0, int(math.floor((nu - 0.5) / 2.0)) + 1)
    pref = (2.0 / y) ** (nu + 0.5) / math.sqrt(math.pi)
    order = np.full(y.shape, -1, dtype=np.int64)
    prev = np.full(y.shape, np.inf)
    active = np.ones(y.shape, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for m in range(m_min, max_order + 1):
            yi = y[active]
            bound = pref[active] * (abs(a[2 * m]) / yi ** (2 * m) + abs(a[2 * m + 1]) / yi ** (2 * m + 1))
            bound = np.where(np.isfinite(bound), bound, np.inf)
            idx = np.flatnonzero(active)
            done = bound <= tol
            order[idx[done]] = m
            stuck = ~done & (bound > prev[idx])
            if np.any(stuck):
                best = prev[idx[stuck]].min()
                raise NonConvergenceError(
                    f"asymptotic E_nu at y={y[idx[stuck]].min():g} cannot reach tail {tol:g} (best {best:.3g})"
                )
            prev[idx] = bound
            active[idx[done]] = False
            if not np.any(active):
                break
    if np.any(active):
        raise NonConvergenceError(f"asymptotic E_nu needs more than {max_order} terms")
    out = np.empty(y.shape, dtype=np.float64)
    for m in np.unique(order):
        sel = order == m
        yi = y[sel]
        k = np.arange(m)
        inv = 1.0 / yi[:, None]
        p_sum = np.sum((-1.0) ** k * a[2 * k] * inv ** (2 * k), axis=1)
        q_sum = np.sum((-1.0) ** k * a[2 * k + 1] * inv ** (2 * k + 1), axis=1)
        omega = yi - nu * math.pi / 2.0 - math.pi / 4.0
        out[sel] = pref[sel] * (np.cos(omega) * p_sum - np.sin(omega) * q_sum)
    return out


def e_nu(nu, z, cfg=DEFAULT_CONFIG):
    """Evaluate E_nu(z) for ``nu > 0``; scalar or array ``z``.

    Uses the series for ``|z| <= cfg.asymptotic_switch_radius``.  Beyond it,
    positive reals use the asymptotic expansion and other arguments use
    ``J_nu(z) / (z/2)**nu`` from the complex Bessel routine.
    """
    if not nu > 0:
        raise ValidationError("E_nu needs nu > 0")
    arr = np.asarray(z, dtype=np.complex128)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    zero = flat == 0
    out[zero] = 1.0 / gamma(nu + 1.0)
    near = (np.abs(flat) <= cfg.asymptotic_switch_radius) & ~zero
    if np.any(near):
        out[near] = e_nu_series(nu, flat[near], cfg)
    far = ~(near | zero)
    if np.any(far):
        zf = flat[far]
        pos = (zf.imag == 0) & (zf.real > 0)
        if np.any(pos):
            out[np.flatnonzero(far)[pos]] = e_nu_asymptotic(nu, zf[pos].real, cfg.tail_tolerance)
        if np.any(~pos):
            # off the positive axis: J_nu / (z/2)^nu, principal branches agree
            zc = zf[~pos]
            out[np.flatnonzero(far)[~pos]] = jv(nu, zc) / (0.5 * zc) ** nu
    if scalar:
        return out[0]
    return out.reshape(arr.shape)


def sinc(z):
    """sin(z)/z with the removable singularity handled by its series."""
    arr = np.asarray(z, dtype=np.complex128)
    small = np.abs(arr) < 1e-4
    safe = np.where(small, 1.0, arr)
    z2 = arr * arr
    out = np.where(small, 1.0 - z2 / 6.0 + z2 * z2 / 120.0, np.sin(safe) / safe)
    return out[()] if out.ndim == 0 else out
