"""Infinite-order differential operators given by entire symbols.

A dispersion relation ``P(X) = sum_k gamma_k X**k`` and a time ``t``
define the symbol

    sigma_t(W) = exp(t * sum_k i**(1-k) gamma_k W**k) = exp(i t P(-i W)),

and the operator ``sum_j b_j (d/dz)**j`` with ``b_j`` the Taylor
coefficients of ``sigma_t``.  It acts on exponentials by
``exp(i lam z) -> exp(i t P(lam)) exp(i lam z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln

from . import _kernels
from .errors import (
    CertificateOverflowError,
    DomainError,
    TruncationError,
    ValidationError,
)
from .sequences import GrowthCertificate, growth_certificate
from .special_functions import mittag_leffler, SeriesEvalConfig

__all__ = [
    "DispersionSpec",
    "OperatorSymbol",
    "EntireFunctionSeries",
    "TransportReport",
    "symbol_from_dispersion",
    "symbol_multiply",
    "apply_operator",
    "apply_to_exponential",
    "exponential_series",
    "growth_transport_check",
    "MAX_TRUNCATION",
]

MAX_TRUNCATION = 512
DEFAULT_J = 256
DEFAULT_L = 256
# margin on the symbol type b = (sum |t gamma_k|)**(1/p)
_TYPE_MARGIN = 1.1


@dataclass(frozen=True)
class DispersionSpec:
    """Dispersion ``P`` as a polynomial or a power series of radius ``rho``."""

    kind: str
    gammas: tuple
    radius: float = math.inf

    def __post_init__(self):
        g = tuple(complex(v) for v in self.gammas)
        object.__setattr__(self, "gammas", g)
        if self.kind not in ("polynomial", "power_series"):
            raise ValidationError("kind must be 'polynomial' or 'power_series'")
        if self.kind == "polynomial":
            if len(g) and g[-1] == 0:
                raise ValidationError("leading polynomial coefficient must be nonzero")
            object.__setattr__(self, "radius", math.inf)
        else:
            if not self.radius > 0:
                raise ValidationError("power-series radius must be positive")
            self._check_tail()

    def _check_tail(self):
        # sampled root test: the stored tail must not decay slower than 1/rho
        g = np.abs(np.asarray(self.gammas))
        k = np.arange(len(g))
        tail = (k >= max(2, len(g) // 2)) & (g > 0)
        if not np.any(tail):
            return
        root = np.max(g[tail] ** (1.0 / k[tail]))
        if math.isfinite(self.radius) and root > 2.0 / self.radius:
            raise ValidationError(
                f"coefficient tail (|gamma_k|^(1/k) ~ {root:.3g}) is inconsistent with radius {self.radius:g}"
            )

    @classmethod
    def polynomial(cls, gammas: Sequence[complex]) -> "DispersionSpec":
        g = list(gammas)
        while g and g[-1] == 0:
            g.pop()
        return cls("polynomial", tuple(g))

    @classmethod
    def monomial(cls, p: int, coeff: complex = 1.0) -> "DispersionSpec":
        return cls.polynomial([0.0] * p + [coeff])

    @classmethod
    def power_series(cls, gammas: Sequence[complex], radius: float) -> "DispersionSpec":
        return cls("power_series", tuple(gammas), radius)

    @property
    def degree(self) -> int:
        return max(len(self.gammas) - 1, 0)

    @property
    def is_even_real(self) -> bool:
        g = np.asarray(self.gammas)
        return bool(np.all(g.imag == 0) and np.all(g[1::2] == 0))

    def __call__(self, lam):
        """P(lam) by Horner's rule (scalar or array)."""
        lam = np.asarray(lam, dtype=np.complex128)
        if self.kind == "power_series" and np.any(np.abs(lam) >= self.radius):
            raise DomainError("power-series dispersion evaluated outside its disc of convergence")
        acc = np.zeros(lam.shape, dtype=np.complex128)
        for g in reversed(self.gammas):
            acc = acc * lam + g
        return acc[()] if acc.ndim == 0 else acc

    def exponent_series(self, t: float, length: int) -> np.ndarray:
        """Coefficients of ``t sum_k i**(1-k) gamma_k W**k`` up to degree ``length-1``."""
        g = np.zeros(length, dtype=np.complex128)
        for k, gam in enumerate(self.gammas[:length]):
            g[k] = t * (1j ** ((1 - k) % 4)) * gam
        return g


@dataclass(frozen=True)
class OperatorSymbol:
    """Truncated symbol ``sum_{j<=J} b_j W**j`` with its growth certificate."""

    coeffs: np.ndarray
    symbol_order: float
    symbol_type_bound: float
    truncation_J: int
    certificate: Optional[GrowthCertificate] = None
    # |coefficients| of the exponent series, when the symbol is exp(g)
    majorant_exponent: Optional[np.ndarray] = None
    # True when every coefficient beyond truncation_J vanishes
    exact: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if len(c) != self.truncation_J + 1:
            raise ValidationError("symbol needs truncation_J + 1 coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.certificate is None:
            cert = growth_certificate(c, self.symbol_order, max(self.symbol_type_bound, 1e-300))
            object.__setattr__(self, "certificate", cert)

    @classmethod
    def identity(cls, J: int = 0) -> "OperatorSymbol":
        c = np.zeros(J + 1, dtype=np.complex128)
        c[0] = 1.0
        return cls(c, 1.0, 1.0, J, exact=True)

    @classmethod
    def zero(cls, J: int = 0) -> "OperatorSymbol":
        return cls(np.zeros(J + 1, dtype=np.complex128), 1.0, 1.0, J, exact=True)


@dataclass(frozen=True)
class EntireFunctionSeries:
    """Taylor coefficients ``a_0..a_L`` plus a growth certificate."""

    taylor_coeffs: np.ndarray
    certificate: GrowthCertificate

    def __post_init__(self):
        c = np.asarray(self.taylor_coeffs, dtype=np.complex128)
        c.setflags(write=False)
        object.__setattr__(self, "taylor_coeffs", c)
        if not self.certificate.validates(c, rtol=1e-9):
            raise ValidationError("certificate does not bound the Taylor coefficients")

    @property
    def degree(self) -> int:
        return len(self.taylor_coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs, p: float = 1.0, b: Optional[float] = None) -> "EntireFunctionSeries":
        """Wrap a coefficient list with the minimal certificate for ``(p, b)``.

        With ``b`` omitted the type is fitted from the coefficients.
        """
        c = np.asarray(coeffs, dtype=np.complex128)
        if b is None:
            b = _fit_type(c, p)
        return cls(c, growth_certificate(c, p, b))

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros(z.shape, dtype=np.complex128)
        for a in reversed(self.taylor_coeffs):
            acc = acc * z + a
        return acc[()] if acc.ndim == 0 else acc

    def __add__(self, other):
        n = max(len(self.taylor_coeffs), len(other.taylor_coeffs))
        c = np.zeros(n, dtype=np.complex128)
        c[: len(self.taylor_coeffs)] += self.taylor_coeffs
        c[: len(other.taylor_coeffs)] += other.taylor_coeffs
        p = max(self.certificate.p, other.certificate.p)
        b = max(self.certificate.b, other.certificate.b)
        return EntireFunctionSeries.from_coeffs(c, p, b if b > 0 else None)

    def scale(self, s: complex) -> "EntireFunctionSeries":
        cert = self.certificate
        return EntireFunctionSeries(self.taylor_coeffs * s, GrowthCertificate(cert.p, cert.C * abs(s), cert.b))


def _fit_type(c: np.ndarray, p: float) -> float:
    mag = np.abs(c)
    j = np.arange(len(c))
    sel = (j >= 1) & (mag > 0)
    if not np.any(sel):
        return 1.0
    est = np.exp((np.log(mag[sel]) + gammaln(j[sel] / p + 1.0)) / j[sel])
    return float(max(np.max(est), 1e-12))


def exponential_series(lam: complex, L: int = DEFAULT_L) -> EntireFunctionSeries:
    """Taylor series of ``exp(i lam z)`` with its exact certificate (C=1, b=|lam|)."""
    ell = np.arange(L + 1)
    with np.errstate(divide="ignore", under="ignore"):
        logmag = np.where(ell == 0, 0.0, ell * np.log(abs(lam)) if lam != 0 else -np.inf) - gammaln(ell + 1.0)
        mag = np.exp(logmag)
    c = mag * np.exp(1j * np.angle(1j * lam) * ell) if lam != 0 else (ell == 0).astype(np.complex128)
    b = abs(lam) if lam != 0 else 1.0
    return EntireFunctionSeries(c, GrowthCertificate(1.0, 1.0, b))


def symbol_from_dispersion(spec: DispersionSpec, t: float, truncation_J: int = DEFAULT_J) -> OperatorSymbol:
    """Taylor coefficients ``b_0..b_J`` of ``exp(t sum_k i**(1-k) gamma_k W**k)``.

    Computed by the power-series exponential recurrence
    ``j c_j = sum_m m g_m c_{j-m}``.
    """
    J = int(truncation_J)
    if J > MAX_TRUNCATION:
        raise TruncationError(f"truncation_J={J} exceeds the stability limit {MAX_TRUNCATION}")
    if spec.kind == "polynomial" and J < spec.degree:
        raise ValidationError(f"truncation_J={J} is below the dispersion degree {spec.degree}")
    g = spec.exponent_series(float(t), J + 1)
    c = _kernels.series_exp(g)
    if spec.kind == "polynomial":
        p = float(max(spec.degree, 1))
        s = float(np.sum(np.abs(g[1:])))
        b = _TYPE_MARGIN * s ** (1.0 / p) if s > 0 else 1.0
    else:
        p = 1.0
        b = max(_fit_type(c, p), 1e-12) * _TYPE_MARGIN
    return OperatorSymbol(c, p, b, J, growth_certificate(c, p, b), np.abs(spec.exponent_series(float(t), len(spec.gammas))))


def symbol_multiply(sym: OperatorSymbol, poly) -> OperatorSymbol:
    """Symbol of ``q(d/dz) o sym`` for a polynomial ``q`` given by coefficients."""
    q = np.asarray(poly, dtype=np.complex128)
    c = np.convolve(sym.coeffs, q)
    b = sym.symbol_type_bound
    if sym.exact:
        J = len(c) - 1
        return OperatorSymbol(c, sym.symbol_order, b, J, growth_certificate(c, sym.symbol_order, b), exact=True)
    c = c[: sym.truncation_J + 1]
    return OperatorSymbol(c, sym.symbol_order, b, sym.truncation_J, growth_certificate(c, sym.symbol_order, b))


def _tail_start(sym: OperatorSymbol, beta: float, tol: float, extra: int = 256) -> int:
    """Smallest J0 with ``sum_{j>J0} |b_j| beta**j <= tol * sum_j |b_j| beta**j``.

    Stored coefficients are used as they are.  The terms beyond
    ``truncation_J`` are bounded by the majorant ``exp(sum |g_k| W**k)``
    when the symbol is an exponential, else by the symbol certificate.
    """
    J = sym.truncation_J
    with np.errstate(divide="ignore", under="ignore", over="ignore"):
        lb = math.log(beta) if beta > 0 else -math.inf
        j = np.arange(J + 1)
        lw = np.log(np.abs(sym.coeffs)) + np.where(j == 0, 0.0, j * lb)
        if sym.exact:
            lt = np.array([-math.inf])
        elif sym.majorant_exponent is not None:
            g = np.zeros(J + 1)
            g[: min(J + 1, len(sym.majorant_exponent))] = sym.majorant_exponent[: J + 1]
            m = _kernels.series_exp(g.astype(np.complex128)).real
            total = math.exp(float(np.polyval(sym.majorant_exponent[::-1], beta)))
            lump = total - float(np.sum(m * beta ** j))
            lt = np.array([math.log(lump) if lump > 1e-15 * total else -math.inf])
        else:
            jt = np.arange(J + 1, J + 1 + extra)
            lt = sym.certificate.log_bound(jt) + jt * lb
    lw = np.concatenate([lw, lt])
    m = np.max(lw)
    if m == -math.inf:
        return 0
    w = np.exp(lw - m)
    tail = np.cumsum(w[::-1])[::-1]
    ok = np.flatnonzero(np.append(tail[1:], 0.0) <= tol * tail[0])
    return int(ok[0]) if len(ok) else len(w)


def apply_operator(sym: OperatorSymbol, f: EntireFunctionSeries, tol: float = 1e-12) -> EntireFunctionSeries:
    """Apply ``sum_j b_j (d/dz)**j`` to a Taylor series.

    In derivative form ``d_m = m! a_m`` the action is a correlation,
    ``d'_l = sum_j b_j d_{l+j}``, equivalent to
    ``(Df)_l = sum_j (j+l)!/l! b_j a_{l+j}``.  Output degree is the
    largest ``l`` whose truncation tail ``sum_{j>L-l} |b_j| beta**j``
    (input certificate ``|d_m| <= C_f beta**m``) is below ``tol`` relative to
    the full sum.
    The output certificate is ``C = C_f C_sym E_{1/p,1}(b_sym beta)`` with
    order 1 and type ``beta = b_f`` (requires ``f`` of order 1).
    """
    cf = f.certificate
    cs = sym.certificate
    if cf.p != 1.0:
        raise ValidationError("apply_operator expects an order-1 input series")
    L = f.degree
    beta = cf.b
    x = cs.b * beta
    ml = mittag_leffler(cs.p, x, SeriesEvalConfig(max_terms=20000)).real if x > 0 else 1.0
    C_out = cf.C * cs.C * ml
    if not math.isfinite(C_out):
        raise CertificateOverflowError(
            f"Mittag-Leffler factor E_1/{cs.p:g},1({x:.3g}) is not finite at this truncation"
        )
    J0 = _tail_start(sym, beta, tol)
    out_deg = L - J0
    if out_deg < 0:
        raise ValidationError(
            f"input series of degree {L} is too short: the tail needs degree >= {J0} (tol {tol:g})"
        )
    ell = np.arange(L + 1)
    a = f.taylor_coeffs
    d = _times_factorial(a, ell)
    dp = _kernels.correlate_apply(sym.coeffs, d, out_deg + 1)
    out = _times_factorial(dp, np.arange(out_deg + 1), sign=-1.0)
    cert = GrowthCertificate(1.0, C_out * (1.0 + 1e-12), beta)
    return EntireFunctionSeries(out, cert)


def _times_factorial(a: np.ndarray, ell: np.ndarray, sign: float = 1.0) -> np.ndarray:
    # a_l * (l!)**sign in log space; avoids subnormal intermediates
    mag = np.abs(a)
    out = np.zeros(a.shape, dtype=np.complex128)
    nz = mag > 0
    with np.errstate(over="ignore", under="ignore"):
        out[nz] = np.exp(np.log(mag[nz]) + sign * gammaln(ell[nz] + 1.0)) * np.exp(1j * np.angle(a[nz]))
    return out


def apply_to_exponential(spec: DispersionSpec, t: float, lam: complex) -> complex:
    """Scalar ``exp(i t P(lam))`` by which the operator multiplies ``exp(i lam z)``."""
    if spec.kind == "power_series" and abs(lam) >= spec.radius:
        raise DomainError(f"|lambda|={abs(lam):g} is outside the disc of radius {spec.radius:g}")
    return complex(np.exp(1j * t * spec(lam)))


@dataclass(frozen=True)
class TransportReport:
    """Radial growth fit of an applied series ``g``."""

    radii: np.ndarray
    max_modulus: np.ndarray
    fitted_order: float
    fitted_C: float
    fitted_eps: float
    p_check: float
    bound_holds: bool
    identically_zero: bool


def growth_transport_check(
    sym: OperatorSymbol, f: EntireFunctionSeries, p_check: float, radius: float = 8.0, n_r: int = 33, n_theta: int = 64
) -> TransportReport:
    """Sample ``g = D f`` on circles and fit its growth.

    ``fitted_order`` is the slope of ``log log M(r)`` against ``log r`` on
    the outer half of the radii (where ``log M > 1``).  ``(C', eps)`` fit
    ``log M(r) = log C' + eps r**p_check`` by least squares, then ``C'`` is
    raised so the bound holds at every sample.  ``bound_holds`` reports
    whether the fitted order stays within ``p_check`` (+0.05 slack).  The
    Z-type constant of the two-variable estimate is fixed to 1.
    """
    if not (1.0 < p_check <= 2.0):
        raise ValidationError("p_check must lie in (1, 2]")
    g = apply_operator(sym, f)
    r = np.linspace(radius / n_r, radius, n_r)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = g(r[:, None] * np.exp(1j * th[None, :]))
    M = np.max(np.abs(vals), axis=1)
    if np.all(M == 0):
        return TransportReport(r, M, 0.0, 0.0, 0.0, p_check, True, True)
    logM = np.log(np.maximum(M, 1e-300))
    sel = (r >= radius / 2) & (logM > 1.0)
    if np.count_nonzero(sel) >= 2:
        order = float(np.polyfit(np.log(r[sel]), np.log(logM[sel]), 1)[0])
    else:
        order = 0.0
    A = np.vstack([np.ones_like(r), r ** p_check]).T
    coef, *_ = np.linalg.lstsq(A, logM, rcond=None)
    eps = max(float(coef[1]), 0.0)
    logC = float(np.max(logM - eps * r ** p_check))
    return TransportReport(r, M, order, math.exp(logC), eps, p_check, order <= p_check + 0.05, False)
