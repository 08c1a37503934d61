"""Evolution of superoscillating data under ``i d/dt psi = P(-i d/dx) psi``.

    psi_{P,N}(t, x) = sum_j C_j(N,a) exp(i P(k_j) t) exp(i k_j x)

converges to ``exp(i t P(a)) exp(i a x)``.  Two exact evaluation routes
are available.  The Fourier sum has condition number about ``|a|**N``.
The operator route applies the symbol ``exp(i t P(-i W))`` to the
derivative jet of the product form of F_N, with condition number about
``exp(|t| sum_k |gamma_k| max(1,|a|)**k)``.  Each point uses the better
route; points where neither meets the tolerance are summed in
multiprecision.  Derivatives are applied exactly in both routes:
``d/dt -> i P(k)`` and ``d/dx -> i k`` termwise, which on the operator side
is multiplication of the symbol by ``i P(-i W)`` and ``W``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import _kernels
from .errors import DomainError, ValidationError
from .operators import DispersionSpec, MAX_TRUNCATION
from .reference_oracles import _STENCILS, fd_derivative
from .sequences import (
    ConditioningWarning,
    SuperoscParams,
    coefficients,
    coefficients_mp,
    derivative_jet,
)

__all__ = [
    "GridRect",
    "EvolvedField",
    "GapReport",
    "psi",
    "psi_points",
    "evolve_grid",
    "limit_field",
    "pde_residual",
    "check_time_derivative_exchange",
    "supershift_gap",
    "fit_rate",
    "superoscillation_flag",
    "check_a_range",
]

_EPS = np.finfo(float).eps
# absolute accuracy target for a field value, relative to (1 + |value|)
FIELD_TOLERANCE = 1e-11


@dataclass(frozen=True)
class GridRect:
    """Tensor grid on ``[t_min, t_max] x [x_min, x_max]``."""

    t_min: float = 0.0
    t_max: float = 1.0
    x_min: float = -2.0
    x_max: float = 2.0
    nt: int = 41
    nx: int = 81

    def __post_init__(self):
        if not (self.t_max >= self.t_min and self.x_max >= self.x_min):
            raise ValidationError("grid bounds must be ordered")
        if self.nt < 1 or self.nx < 1:
            raise ValidationError("grid needs at least one point per axis")

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def as_dict(self) -> dict:
        return {"t": [self.t_min, self.t_max, self.nt], "x": [self.x_min, self.x_max, self.nx]}


@dataclass
class EvolvedField:
    """Samples of psi_{P,N} on a tensor grid (``values[i, j]`` at ``t[i], x[j]``)."""

    spec: DispersionSpec
    params: SuperoscParams
    t: np.ndarray
    x: np.ndarray
    values: np.ndarray


@dataclass
class GapReport:
    """Sup-norm supershift gaps against N with a log-log rate fit."""

    grid: dict
    Ns: list
    gaps: list
    fitted_rate: float
    fit_residual: float
    derivative_orders: tuple
    flags: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "grid": self.grid,
            "Ns": [int(n) for n in self.Ns],
            "gaps": [float(g) for g in self.gaps],
            "fitted_rate": float(self.fitted_rate),
            "fit_residual": float(self.fit_residual),
            "derivative_orders": list(self.derivative_orders),
            "flags": dict(self.flags),
        }


def check_a_range(spec: DispersionSpec, a: float) -> None:
    """Power-series evolution needs ``1 <= |a| < rho - 1``."""
    if spec.kind == "power_series":
        rho = spec.radius
        if not (1.0 <= abs(a) < rho - 1.0):
            raise DomainError(f"power-series evolution needs 1 <= |a| < rho - 1 (rho={rho:g}, a={a:g})")


def superoscillation_flag(spec: DispersionSpec, a: float, n_sample: int = 2001) -> bool:
    """Sufficient criterion ``sup_{[-1,1]} |P| <= 1 < |P(a)|`` (sampled sup)."""
    s = np.linspace(-1.0, 1.0, n_sample)
    return bool(np.max(np.abs(spec(s))) <= 1.0 and abs(spec(a)) > 1.0)


def fit_rate(Ns: Sequence[int], gaps: Sequence[float], last: int = 5):
    """Least-squares slope of log(gap) against log(N) over the last points.

    Returns ``(slope, rms_residual)``; zero gaps are excluded.
    """
    n = np.asarray(Ns, dtype=float)[-last:]
    g = np.asarray(gaps, dtype=float)[-last:]
    ok = g > 0
    if np.count_nonzero(ok) < 2:
        return float("nan"), float("nan")
    X, Y = np.log(n[ok]), np.log(g[ok])
    coef, res, *_ = np.linalg.lstsq(np.vstack([X, np.ones_like(X)]).T, Y, rcond=None)
    resid = Y - (coef[0] * X + coef[1])
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


def _multiplier_poly(spec: DispersionSpec, mu: int, length: int) -> np.ndarray:
    """Coefficients of ``(i P(-i W))**mu`` truncated to ``length``."""
    g = spec.exponent_series(1.0, length)
    out = np.zeros(length, dtype=np.complex128)
    out[0] = 1.0
    for _ in range(mu):
        out = np.convolve(out, g)[:length]
    return out


def _truncation_order(spec: DispersionSpec, params: SuperoscParams, t: float, mu: int, nu: int) -> Optional[int]:
    """Smallest M such that the operator series tail is negligible.

    Uses ``|D_m| <= sum_j |C_j| = alpha**N`` and the majorant
    ``|W|**nu (sum |g_k| |W|**k)**mu exp(|t| sum |g_k| |W|**k)`` evaluated at
    ``|W| = 1``; returns None if the limit MAX_TRUNCATION is not enough.
    """
    Jm = MAX_TRUNCATION
    g = np.abs(spec.exponent_series(1.0, Jm + 1))
    maj = _kernels.series_exp((abs(t) * g).astype(np.complex128)).real
    pm = np.abs(_multiplier_poly(spec, mu, Jm + 1))
    maj = np.convolve(maj, pm)[: Jm + 1]
    with np.errstate(divide="ignore"):
        lw = np.log(maj)
    log_l1 = params.N * math.log(params.alpha)
    # tail from the top; the majorant decays superexponentially past its peak
    m = np.max(lw)
    tail = np.cumsum(np.exp(lw - m)[::-1])[::-1]
    with np.errstate(divide="ignore"):
        ltail = np.log(tail) + m + log_l1
    ok = np.flatnonzero(ltail[1:] < math.log(1e-17))
    if not len(ok) or ok[0] + nu > Jm:
        return None
    return int(ok[0])


def _sum_route(spec, params, fs, t, x, mu, nu):
    k = fs.frequencies
    Pk = spec(k)
    mult = fs.coefficients * (1j * Pk) ** mu * (1j * k) ** nu
    vals = _kernels.expsum2(mult.astype(np.complex128), 1j * Pk, 1j * k, t.astype(np.complex128), x.astype(np.complex128))
    mag = np.abs(mult)[None, :] * np.exp(-np.outer(t, Pk.imag))
    err = 4.0 * _EPS * math.sqrt(len(k)) * mag.sum(axis=1) * (1.0 + np.abs(t) * np.max(np.abs(Pk)))
    return vals, err


def _operator_route(spec, params, t, x, mu, nu):
    """Returns (values, error estimates); inf error where unavailable."""
    n = len(t)
    vals = np.zeros(n, dtype=np.complex128)
    err = np.full(n, np.inf)
    ut, inv = np.unique(t, return_inverse=True)
    orders = [_truncation_order(spec, params, float(tt), mu, nu) for tt in ut]
    valid = [M for M in orders if M is not None]
    if not valid:
        return vals, err
    Mmax = max(valid) + nu
    ux, xinv = np.unique(x, return_inverse=True)
    D = derivative_jet(ux, params, Mmax)
    aD = np.abs(D)
    from .operators import symbol_from_dispersion

    for i, tt in enumerate(ut):
        M = orders[i]
        if M is None:
            continue
        sym = symbol_from_dispersion(spec, float(tt), max(M, spec.degree if spec.kind == "polynomial" else 0))
        s = np.convolve(sym.coeffs, _multiplier_poly(spec, mu, M + 1))[: M + 1]
        sel = np.flatnonzero(inv == i)
        cols = xinv[sel]
        Dv = D[cols, nu:nu + M + 1]
        vals[sel] = Dv @ s
        err[sel] = 64.0 * _EPS * (aD[cols, nu:nu + M + 1] @ np.abs(s)) * math.sqrt(M + 1)
    return vals, err


def _mp_dps(params: SuperoscParams) -> int:
    return int(params.N * math.log10(params.alpha)) + 40


def _mp_value(spec: DispersionSpec, params: SuperoscParams, t, x, mu: int, nu: int, c=None):
    """Field value as an mpmath number at the working precision in force."""
    if c is None:
        c = coefficients_mp(params, mpmath.mp.dps)
    gam = [mpmath.mpc(g) for g in spec.gammas]
    acc = mpmath.mpc(0)
    N = params.N
    for j, cj in enumerate(c):
        k = 1 - mpmath.mpf(2 * j) / N
        P = mpmath.polyval(gam[::-1], k) if gam else mpmath.mpc(0)
        acc += cj * (1j * P) ** mu * (1j * k) ** nu * mpmath.exp(1j * P * t + 1j * k * x)
    return acc


def _mp_point(spec: DispersionSpec, params: SuperoscParams, t: float, x: float, mu: int, nu: int) -> complex:
    with mpmath.workdps(_mp_dps(params)):
        return complex(_mp_value(spec, params, mpmath.mpf(t), mpmath.mpf(x), mu, nu))


def psi_points(spec: DispersionSpec, params: SuperoscParams, t, x, mu: int = 0, nu: int = 0, tol: float = FIELD_TOLERANCE):
    """``d^mu/dt^mu d^nu/dx^nu psi_{P,N}`` at paired points (broadcast ``t``, ``x``).

    Each point takes whichever exact route has the smaller rounding
    estimate; multiprecision is used where both exceed
    ``tol * (1 + |value|)``.
    """
    check_a_range(spec, params.a)
    if mu < 0 or nu < 0:
        raise ValidationError("derivative orders must be nonnegative")
    tb, xb = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    shape = tb.shape
    tf, xf = tb.ravel().copy(), xb.ravel().copy()
    fs = coefficients(params)
    v_sum, e_sum = _sum_route(spec, params, fs, tf, xf, mu, nu)
    v_op, e_op = _operator_route(spec, params, tf, xf, mu, nu)
    use_op = e_op < e_sum
    vals = np.where(use_op, v_op, v_sum)
    err = np.minimum(e_op, e_sum)
    bad = np.flatnonzero(err > tol * (1.0 + np.abs(vals)))
    if len(bad) > 200:
        warnings.warn(f"{len(bad)} points need multiprecision summation", ConditioningWarning, stacklevel=2)
    for i in bad:
        vals[i] = _mp_point(spec, params, float(tf[i]), float(xf[i]), mu, nu)
    vals = vals.reshape(shape)
    return vals[()] if vals.ndim == 0 else vals


def psi(spec: DispersionSpec, params: SuperoscParams, t: float, x: float, mu: int = 0, nu: int = 0) -> complex:
    """Scalar value of ``psi_{P,N}(t, x)`` (or a derivative of it)."""
    return complex(psi_points(spec, params, float(t), float(x), mu, nu))


def evolve_grid(spec: DispersionSpec, params: SuperoscParams, grid: GridRect, mu: int = 0, nu: int = 0) -> EvolvedField:
    T, X = np.meshgrid(grid.t, grid.x, indexing="ij")
    return EvolvedField(spec, params, grid.t, grid.x, psi_points(spec, params, T, X, mu, nu))


def limit_field(spec: DispersionSpec, a: float, t, x, mu: int = 0, nu: int = 0):
    """``d^mu_t d^nu_x`` of ``exp(i t P(a)) exp(i a x)``."""
    check_a_range(spec, a)
    Pa = complex(spec(a))
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    out = (1j * Pa) ** mu * (1j * a) ** nu * np.exp(1j * t * Pa + 1j * a * x)
    return out[()] if np.ndim(out) == 0 else out


def p_check_coeffs(spec: DispersionSpec) -> np.ndarray:
    """Coefficients of ``P_check(X) = -sum_k (-i)**k gamma_k X**k``.

    With this choice ``i d/dt - P_check(d/dx)`` annihilates every
    ``exp(i P(k) t + i k x)``.  For even real P it reduces to
    ``sum (-1)**(k'+1) gamma_{2k'} X**(2k')``.
    """
    return np.array([-((-1j) ** k) * g for k, g in enumerate(spec.gammas)], dtype=np.complex128)


def pde_residual(
    spec: DispersionSpec, params: SuperoscParams, t: float, x: float, h: float, exact_samples: bool = False
) -> complex:
    """Central-difference value of ``i psi_t - P_check(d/dx) psi`` at (t, x).

    With ``exact_samples`` the stencil values and their differences are
    taken in multiprecision, so only the O(h**2) truncation error remains.
    Double-precision samples carry a roundoff floor of about
    ``eps |psi| / h**k`` for the order-k term.
    """
    if not h > 0:
        raise ValidationError("h must be positive")
    if spec.kind != "polynomial" or spec.degree > 4:
        raise ValidationError("finite-difference residuals support polynomial P of degree <= 4")
    pc = p_check_coeffs(spec)
    if exact_samples:
        return _pde_residual_mp(spec, params, t, x, h, pc)
    f_t = lambda s: psi(spec, params, s, x)  # noqa: E731
    f_x = lambda s: psi(spec, params, t, s)  # noqa: E731
    res = 1j * fd_derivative(f_t, t, 1, h)
    for k, c in enumerate(pc):
        if c == 0:
            continue
        dk = f_x(x) if k == 0 else fd_derivative(f_x, x, k, h)
        res -= c * dk
    return complex(res)


def _pde_residual_mp(spec, params, t, x, h, pc) -> complex:
    with mpmath.workdps(_mp_dps(params)):
        c = coefficients_mp(params, mpmath.mp.dps)
        T, X, H = mpmath.mpf(t), mpmath.mpf(x), mpmath.mpf(h)

        def diff(order, along_t):
            offs, w, p = _STENCILS[order]
            acc = mpmath.mpc(0)
            for o, wt in zip(offs, w):
                tt, xx = (T + o * H, X) if along_t else (T, X + o * H)
                acc += mpmath.mpf(wt) * _mp_value(spec, params, tt, xx, 0, 0, c)
            return acc / H ** p

        res = 1j * diff(1, True)
        for k, ck in enumerate(pc):
            if ck != 0:
                res -= mpmath.mpc(ck) * diff(k, False)
        return complex(res)


def check_time_derivative_exchange(p: int, params: SuperoscParams, t, x) -> float:
    """Max ``|d_t psi - i**(1-p) d_x**p psi|`` for ``P = X**p`` (exact derivatives)."""
    spec = DispersionSpec.monomial(p)
    lhs = psi_points(spec, params, t, x, mu=1)
    rhs = (1j ** ((1 - p) % 4)) * psi_points(spec, params, t, x, nu=p)
    return float(np.max(np.abs(lhs - rhs)))


def supershift_gap(
    spec: DispersionSpec,
    a: float,
    grid: GridRect = GridRect(),
    Ns: Sequence[int] = tuple(range(10, 641, 10)),
    mu: int = 0,
    nu: int = 0,
) -> GapReport:
    """Sup over the grid of ``|d^(mu,nu) psi_{P,N} - d^(mu,nu) limit|`` per N."""
    if mu + nu > 4:
        raise ValidationError("mu + nu must be <= 4")
    if list(Ns) != sorted(set(Ns)):
        raise ValidationError("Ns must be strictly increasing")
    check_a_range(spec, a)
    T, X = np.meshgrid(grid.t, grid.x, indexing="ij")
    lim = limit_field(spec, a, T, X, mu, nu)
    gaps = []
    for N in Ns:
        vals = psi_points(spec, SuperoscParams(a, N), T, X, mu, nu)
        gaps.append(float(np.max(np.abs(vals - lim))))
    rate, resid = fit_rate(Ns, gaps)
    flags = {"superoscillation_criterion": superoscillation_flag(spec, a), "in_band": abs(a) <= 1.0}
    return GapReport(grid.as_dict(), list(Ns), gaps, rate, resid, (mu, nu), flags)
