"""Regularization of formal Fresnel-type integrals

    I = int_0^inf x**chi exp(-i phi x**2) G(x) dx,   chi > -1, phi != 0 real,

for analytic G of order below 2 (or of order 2 with small type).  The
value is defined by rotating the ray by ``exp(-i sign(phi) pi/4)``, where
the Gaussian factor becomes ``exp(-|phi| y**2)``:

    I = w**(chi+1) int_0^inf y**chi exp(-|phi| y**2) G(w y) dy,
    w = exp(-i sign(phi) pi/4).

A further rotation ``u = exp(i theta)``, ``|theta| < pi/4``, leaves the
value unchanged and is exposed for verification.  The same value is the
limit of the Gaussian-damped real-axis integrals as the damping tends to
zero (:func:`epsilon_oracle`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gammaincc, gammaln, roots_genlaguerre, roots_jacobi, roots_legendre

from . import _kernels
from .errors import (
    ExtrapolationError,
    GrowthViolationError,
    QuadratureError,
    ValidationError,
)

__all__ = [
    "FresnelIntegrand",
    "QuadratureConfig",
    "AngleReport",
    "regularize_halfline",
    "regularize_realline",
    "epsilon_oracle",
    "angle_independence_check",
    "neville_at_zero",
    "standard_suite",
    "verify_suite",
    "SuiteRecord",
]

_TAIL_TARGET = 1e-16
_TAU_MAX = 6.5


def _probe_vectorized(g: Callable) -> bool:
    z = np.array([0.3 + 0.2j, 1.1 - 0.4j, -0.7 + 0.9j])
    try:
        v = np.asarray(g(z), dtype=np.complex128)
    except Exception:
        return False
    return v.shape == z.shape


def _check_analytic(g: Callable, vectorized: bool) -> None:
    pts = [0.3 + 0.2j, 1.1 - 0.4j, -0.7 + 0.9j, 0.05 - 0.6j]
    h = 1e-5

    def ev(z):
        return complex(g(np.array([z]))[0]) if vectorized else complex(g(z))

    for z in pts:
        try:
            vals = [ev(z + d) for d in (h, -h, 1j * h, -1j * h)]
        except Exception as exc:
            raise ValidationError(f"analytic factor must be evaluable at complex arguments ({exc})") from exc
        if not all(np.isfinite(v) for v in vals):
            raise ValidationError("analytic factor returned non-finite values at complex arguments")
        dx = (vals[0] - vals[1]) / (2 * h)
        dy = (vals[2] - vals[3]) / (2j * h)
        scale = max(abs(dx), abs(dy), abs(ev(z)), 1e-300)
        if abs(dx - dy) > 1e-3 * scale + 1e-10:
            raise ValidationError(
                "analytic factor fails the Cauchy-Riemann check; it must be an analytic "
                "function evaluable on complex rays"
            )


@dataclass(frozen=True)
class FresnelIntegrand:
    """Data ``(chi, phi, G)`` of a Fresnel-type integral.

    ``growth_order`` (p_check in (1, 2]) and ``growth_budget`` (eps) declare
    ``|G(z)| <= C_eps exp(eps |z|**p_check)`` on the rays used.  The budget
    defaults to, and may not exceed, ``|phase| / 4``.
    """

    chi: float
    phase: float
    analytic_factor: Callable
    growth_order: float = 2.0
    growth_budget: Optional[float] = None
    description: str = ""
    _vectorized: bool = field(default=False, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.chi > -1.0):
            raise ValidationError(f"chi must exceed -1 (got {self.chi})")
        if not (self.phase != 0 and math.isfinite(self.phase)):
            raise ValidationError("phase must be a nonzero real number")
        if not (1.0 < self.growth_order <= 2.0):
            raise ValidationError("growth_order must lie in (1, 2]")
        cap = abs(self.phase) / 4.0
        if self.growth_budget is None:
            object.__setattr__(self, "growth_budget", cap)
        elif not (0 < self.growth_budget <= cap * (1 + 1e-12)):
            raise ValidationError(f"growth_budget must lie in (0, |phase|/4 = {cap:g}]")
        if not callable(self.analytic_factor):
            raise ValidationError("analytic_factor must be callable")
        vec = _probe_vectorized(self.analytic_factor)
        object.__setattr__(self, "_vectorized", vec)
        _check_analytic(self.analytic_factor, vec)

    def G(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        if self._vectorized:
            out = np.asarray(self.analytic_factor(z), dtype=np.complex128)
            return np.broadcast_to(out, z.shape).copy() if out.shape != z.shape else out
        flat = z.ravel()
        return np.array([complex(self.analytic_factor(v)) for v in flat]).reshape(z.shape)

    def with_factor(self, g: Callable, description: str = "") -> "FresnelIntegrand":
        return FresnelIntegrand(self.chi, self.phase, g, self.growth_order, self.growth_budget, description)


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature along the rotated ray.

    ``scheme`` is ``"adaptive-tanh-sinh"`` (level doubling on
    ``[0, truncation_radius]``) or ``"generalized-gauss"`` (Gauss-Laguerre
    in ``s = c r**2`` on the even and odd parts of the integrand).
    ``truncation_radius=None`` picks the radius from the growth audit.
    ``center`` applies to full-line integrals with ``chi = 0`` only: the
    rotated line passes through this real point instead of the origin
    (``None`` estimates the saddle point of the integrand).
    """

    ray_angle_offset: float = 0.0
    nodes: int = 64
    scheme: str = "adaptive-tanh-sinh"
    truncation_radius: Optional[float] = None
    tol: float = 1e-13
    max_levels: int = 10
    center: Optional[float] = None

    def __post_init__(self):
        if not abs(self.ray_angle_offset) < math.pi / 4:
            raise ValidationError("ray_angle_offset must satisfy |theta| < pi/4")
        if self.nodes < 16:
            raise ValidationError("nodes must be >= 16")
        if self.scheme not in ("adaptive-tanh-sinh", "generalized-gauss"):
            raise ValidationError("scheme must be 'adaptive-tanh-sinh' or 'generalized-gauss'")
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise ValidationError("truncation_radius must be positive")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")


# ---------------------------------------------------------------------------
# core: int_0^inf r**chi exp(-c r**2) H(r) dr with Re c > 0
# ---------------------------------------------------------------------------

def _audit(H: Callable, c_re: float, eps: float, p: float, chi: float, label: str):
    """Return (C_eps, R): growth constant of H on the ray and a radius whose
    tail bound is below the target."""
    r_audit = math.sqrt(60.0 / max(c_re - eps, 1e-300)) + 1.0
    for attempt in range(6):
        r = np.linspace(0.0, r_audit, 513)
        vals = H(r)
        if not np.all(np.isfinite(vals)):
            raise GrowthViolationError(f"analytic factor is not finite on the ray ({label})")
        with np.errstate(divide="ignore"):
            excess = np.log(np.abs(vals) + 1e-300) - eps * r ** p
        C = float(math.exp(min(np.max(excess), 700.0)))
        # excess still rising over the outer tenth: growth beyond the budget
        outer = excess[-52:]
        if outer[-1] > np.max(excess[:-52]) + 1e-9 and outer[-1] > outer[0] + 1e-9:
            if attempt < 5:
                r_audit *= 2.0
                continue
            raise GrowthViolationError(
                f"analytic factor outgrows exp({eps:.3g} r^{p:g}) on the ray ({label}) up to r={r_audit:.3g}"
            )
        # tail: int_R^inf r^chi exp(-(c-eps) r^2) dr (r^p <= r^2 for r >= 1)
        k = c_re - eps
        a = 0.5 * (chi + 1.0)

        def tail(R):
            return C * math.exp(gammaln(a)) * gammaincc(a, k * R * R) / (2.0 * k ** a)

        lo, hi = 1.0, r_audit
        if tail(hi) > _TAIL_TARGET:
            r_audit *= 1.5
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if tail(mid) > _TAIL_TARGET:
                lo = mid
            else:
                hi = mid
        return C, hi
    raise GrowthViolationError(f"no truncation radius meets the tail target ({label})")


def _tanh_sinh(chi: float, c: complex, H: Callable, R: float, q: QuadratureConfig):
    """Level-doubling tanh-sinh on [0, R] in log-space near r = 0."""
    h0 = 2.0 * _TAU_MAX / q.nodes
    est = math.inf

    def contrib(tau, h):
        qq = 0.5 * math.pi * np.sinh(tau)
        aq = np.abs(qq)
        e2 = np.exp(-2.0 * aq)
        log_sech2 = math.log(4.0) - 2.0 * aq - 2.0 * np.log1p(e2)
        log_jac = math.log(0.25 * math.pi * R) + np.log(np.cosh(tau)) + log_sech2
        # r and R - r in stable form
        small = R * e2 / (1.0 + e2)
        r = np.where(qq < 0, small, R - small)
        log_r = np.where(qq < 0, math.log(R) - 2.0 * aq - np.log1p(e2), np.log(np.maximum(r, 1e-300)))
        w = np.exp(chi * log_r + log_jac)
        f = w * np.exp(-c * r * r) * H(r)
        f = np.where(w == 0, 0.0, f)
        return h * _kernels.kahan_sum(f.astype(np.complex128)), h * float(np.sum(np.abs(f)))

    # level 0
    n0 = int(round(_TAU_MAX / h0))
    tau = h0 * np.arange(-n0, n0 + 1)
    total, mass = contrib(tau, h0)
    h = h0
    for level in range(1, q.max_levels + 1):
        h *= 0.5
        tau = h * (2 * np.arange(-n0 * 2 ** (level - 1), n0 * 2 ** (level - 1)) + 1)
        part, pmass = contrib(tau, h)
        new = 0.5 * total + part
        mass = 0.5 * mass + pmass
        est = abs(new - total)
        total = new
        # refinements cannot agree below the cancellation floor
        floor = 64.0 * np.finfo(float).eps * mass
        if level >= 2 and est <= max(q.tol * abs(total), floor):
            return total, max(est, floor)
    if est > max(10.0 * q.tol * abs(total), floor, 1e-14):
        raise QuadratureError(f"tanh-sinh refinements disagree by {est:.3g} (value {abs(total):.3g})")
    return total, est


def _gen_gauss(chi: float, c: complex, H: Callable, q: QuadratureConfig):
    """Gauss-Laguerre in s = Re(c) r**2 applied to even/odd parts of H."""
    cr = c.real
    ci = c.imag
    alpha = 0.5 * (chi - 1.0)

    def rule(n):
        s_e, w_e = roots_genlaguerre(n, alpha)
        s_o, w_o = roots_genlaguerre(n, alpha + 0.5)
        r_e = np.sqrt(s_e / cr)
        r_o = np.sqrt(s_o / cr)
        ph_e = np.exp(-1j * ci * r_e * r_e)
        ph_o = np.exp(-1j * ci * r_o * r_o)
        even = 0.5 * (H(r_e) + H(-r_e)) * ph_e
        odd = 0.5 * (H(r_o) - H(-r_o)) / np.where(r_o == 0, 1.0, r_o) * ph_o
        pref = 0.5 * cr ** (-0.5 * (chi + 1.0))
        return pref * (np.dot(w_e, even) + cr ** -0.5 * np.dot(w_o, odd))

    n = q.nodes
    val = rule(n)
    est = math.inf
    for _ in range(q.max_levels):
        n2 = int(n * 1.5)
        if n2 > 700:
            break
        v2 = rule(n2)
        est = abs(v2 - val)
        val, n = v2, n2
        if est <= q.tol * max(abs(val), 1e-300):
            return val, est
    if est > 10.0 * q.tol * max(abs(val), 1e-300) and est > 1e-14:
        raise QuadratureError(f"Gauss-Laguerre refinements disagree by {est:.3g}")
    return val, est


def _ray_integral(f: FresnelIntegrand, q: QuadratureConfig, G: Callable, chi: float, label: str):
    """w**(chi+1) u**(chi+1) int_0^inf r^chi exp(-|phi| u^2 r^2) G(w u r) dr."""
    sgn = 1.0 if f.phase > 0 else -1.0
    w = complex(np.exp(-1j * sgn * math.pi / 4.0))
    u = complex(np.exp(1j * q.ray_angle_offset))
    c = abs(f.phase) * u * u
    H = lambda r: G(w * u * np.asarray(r))  # noqa: E731
    eps = min(f.growth_budget, 0.5 * c.real)
    C, R = _audit(H, c.real, eps, f.growth_order, chi, label)
    if q.truncation_radius is not None:
        R = q.truncation_radius
    if C == 0:
        return 0.0 + 0.0j, 0.0
    if q.scheme == "adaptive-tanh-sinh":
        val, err = _tanh_sinh(chi, c, H, R, q)
    else:
        val, err = _gen_gauss(chi, c, H, q)
    pref = (w * u) ** (chi + 1.0)
    return pref * val, abs(pref) * err


def regularize_halfline(f: FresnelIntegrand, q: QuadratureConfig = QuadratureConfig()) -> complex:
    """Regularized ``int_0^inf x**chi exp(-i phi x**2) G(x) dx`` by contour rotation."""
    val, _ = _ray_integral(f, q, f.G, f.chi, "half-line")
    return complex(val)


def _saddle_center(f: FresnelIntegrand) -> float:
    # stationary point of -i phi x^2 + log G(x), real part, by fixed-point steps
    x = 0.0
    h = 1e-5
    for _ in range(4):
        g0 = f.G(np.array([x + 0j]))[0]
        if g0 == 0:
            return x
        d = (f.G(np.array([x + h]))[0] - f.G(np.array([x - h]))[0]) / (2 * h * g0)
        x_new = (d / (2j * f.phase)).real
        if not math.isfinite(x_new):
            return x
        if abs(x_new - x) < 1e-6 * (1 + abs(x)):
            return x_new
        x = x_new
    return x


def regularize_realline(f: FresnelIntegrand, q: QuadratureConfig = QuadratureConfig()) -> complex:
    """Regularized ``int_R |x|**chi exp(-i phi x**2) G(x) dx``.

    Sum of the half-line values for ``G(x)`` and ``G(-x)``.  For ``chi = 0``
    the integrand is entire and both rotated rays may start from a common
    real center ``x_c`` (Cauchy's theorem), which keeps the rotated
    integrand at the size of the result when G oscillates fast.
    """
    if f.chi == 0.0:
        xc = _saddle_center(f) if q.center is None else float(q.center)
        if xc != 0.0:
            # exp(-i phi (xc + y)^2) = exp(-i phi xc^2) exp(-2 i phi xc y) exp(-i phi y^2)
            shift = complex(np.exp(-1j * f.phase * xc * xc))
            Gp = lambda z: f.G(xc + z) * np.exp(-2j * f.phase * xc * z)  # noqa: E731
            Gm = lambda z: f.G(xc - z) * np.exp(2j * f.phase * xc * z)  # noqa: E731
            vp, _ = _ray_integral(f, q, Gp, 0.0, f"right half from {xc:.3g}")
            vm, _ = _ray_integral(f, q, Gm, 0.0, f"left half from {xc:.3g}")
            return complex(shift * (vp + vm))
    vp, _ = _ray_integral(f, q, f.G, f.chi, "right half")
    vm, _ = _ray_integral(f, q, lambda z: f.G(-np.asarray(z)), f.chi, "left half")
    return complex(vp + vm)


# ---------------------------------------------------------------------------
# epsilon-damping oracle on the real axis
# ---------------------------------------------------------------------------

def neville_at_zero(eps: Sequence[float], vals: Sequence[complex]):
    """Diagonal Neville extrapolants ``T_k`` to 0 using the first ``k+1`` points."""
    e = np.asarray(eps, dtype=float)
    P = np.asarray(vals, dtype=np.complex128).copy()
    n = len(e)
    diag = [P[0]]
    # tableau over increasing point counts
    T = [[P[i]] for i in range(n)]
    for i in range(1, n):
        for m in range(1, i + 1):
            j = i - m
            # polynomial through points j..i evaluated at 0
            num = (0.0 - e[j]) * T[i][m - 1] - (0.0 - e[i]) * T[i - 1][m - 1]
            T[i].append(num / (e[i] - e[j]))
        diag.append(T[i][i])
    return np.array(diag)


def _damped_integral(f: FresnelIntegrand, eps: float, n_gl: int = 16):
    """``int_0^inf x^chi exp((i w - eps) x^2) G(x) dx`` on the real axis, w = -phi.

    In ``s = x^2``: ``(1/2) int s^((chi-1)/2) exp((i w - eps) s) G(sqrt s) ds``,
    with G split into even and odd parts so the first panel is a
    Gauss-Jacobi rule and the rest are Gauss-Legendre half-period panels.
    """
    w = -f.phase
    chi = f.chi
    beta = 0.5 * (chi - 1.0)
    width = math.pi / abs(w)
    # upper limit: damping below 1e-17 relative after the integrand peak
    def mag(s):
        x = math.sqrt(s)
        g = abs(f.G(np.array([x + 0j]))[0]) + abs(f.G(np.array([-x + 0j]))[0])
        return s ** beta * math.exp(-eps * s) * (g + 1e-300)

    S = 40.0 / eps
    peak = max(mag(s) for s in np.linspace(width, S, 64))
    while mag(S) > 1e-18 * peak * eps:
        S *= 1.5

    def even(s):
        x = np.sqrt(s)
        return 0.5 * (f.G(x + 0j) + f.G(-x + 0j))

    def odd_over_x(s):
        x = np.sqrt(s)
        return 0.5 * (f.G(x + 0j) - f.G(-x + 0j)) / x

    k = 1j * w - eps
    # first panel [0, width]: weight s^beta (even part) and s^(beta+1/2) (odd part)
    out = 0.0 + 0.0j
    mass = 0.0
    for b, fn in ((beta, even), (beta + 0.5, odd_over_x)):
        xj, wj = roots_jacobi(40, 0.0, b)
        s = 0.5 * width * (1.0 + xj)
        terms = (0.5 * width) ** (b + 1.0) * wj * fn(s) * np.exp(k * s)
        out += np.sum(terms)
        mass += float(np.sum(np.abs(terms)))
    # remaining panels, vectorized in chunks
    xg, wg = roots_legendre(n_gl)
    n_pan = int(math.ceil((S - width) / width))
    acc = np.zeros(0, dtype=np.complex128)
    parts = []
    chunk = 4096
    for start in range(0, n_pan, chunk):
        idx = np.arange(start, min(n_pan, start + chunk))
        a0 = width * (1 + idx)
        s = (a0[:, None] + 0.5 * width * (1.0 + xg[None, :])).ravel()
        x = np.sqrt(s)
        g = f.G(x + 0j)
        vals = s ** beta * np.exp(k * s) * g * np.tile(wg, len(idx))
        parts.append(0.5 * width * vals)
    if parts:
        acc = np.concatenate(parts)
        out += _kernels.kahan_sum(acc)
        mass += float(np.sum(np.abs(acc)))
    return 0.5 * out, 0.5 * mass


def epsilon_oracle(
    f: FresnelIntegrand,
    eps_list: Optional[Sequence[float]] = None,
    return_error: bool = False,
):
    """Limit of the damped real-axis integrals as the damping tends to zero.

    Polynomial (Neville) extrapolation to eps = 0.  With an explicit
    ``eps_list`` (e.g. ``(1e-1, 1e-2, 1e-3, 1e-4)``) all points are used
    and the error estimate is the difference of the last two diagonal
    extrapolants.  With ``eps_list=None`` the list is geometric,
    ``eps_k = |phase| 2^-(k+1)``, and stops once the cancellation floor
    ``1e-16 * sum|terms|`` of the next damped integral would exceed 1e-8
    of its value; the returned extrapolant is the one with the smallest
    successive difference.  Raises :class:`ExtrapolationError` if the
    extrapolants do not settle.
    """
    if eps_list is not None:
        e = [float(v) for v in eps_list]
        if len(e) < 3:
            raise ValidationError("eps_list needs at least 3 entries")
        if any(v <= 0 for v in e) or any(e[i] <= e[i + 1] for i in range(len(e) - 1)):
            raise ValidationError("eps_list must be positive and strictly decreasing")
        vals = [_damped_integral(f, v)[0] for v in e]
        T = neville_at_zero(e, vals)
        best = len(T) - 1
    else:
        e, vals = [], []
        ek = 0.5 * abs(f.phase)
        while len(e) < 14:
            v, mass = _damped_integral(f, ek)
            if len(e) >= 4 and 1e-16 * mass > 1e-8 * max(abs(v), 1e-300):
                break
            e.append(ek)
            vals.append(v)
            ek *= 0.5
        T = neville_at_zero(e, vals)
        diffs = np.abs(np.diff(T))
        best = int(np.argmin(diffs[1:])) + 2
    err = float(abs(T[best] - T[best - 1]))
    prev = float(abs(T[best - 1] - T[best - 2]))
    scale = max(abs(T[best]), 1.0)
    if err > 1e-4 * scale and err >= prev:
        raise ExtrapolationError(f"eps-extrapolants do not converge (last differences {prev:.3g}, {err:.3g})")
    return (complex(T[best]), err) if return_error else complex(T[best])


@dataclass
class AngleReport:
    thetas: list
    values: list
    max_deviation: float


def angle_independence_check(
    f: FresnelIntegrand, thetas: Sequence[float] = (-0.6, -0.3, 0.0, 0.3, 0.6), q: Optional[QuadratureConfig] = None
) -> AngleReport:
    """Max pairwise deviation of :func:`regularize_halfline` over ray offsets."""
    base = q or QuadratureConfig()
    vals = []
    for th in thetas:
        if abs(th) > math.pi / 4 - 0.05 + 1e-15:
            raise ValidationError("angles must satisfy |theta| <= pi/4 - 0.05")
        qq = QuadratureConfig(th, base.nodes, base.scheme, base.truncation_radius, base.tol, base.max_levels, base.center)
        vals.append(regularize_halfline(f, qq))
    v = np.array(vals)
    dev = float(np.max(np.abs(v[:, None] - v[None, :]))) if len(v) else 0.0
    return AngleReport(list(thetas), [complex(x) for x in vals], dev)


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

def _make_factor(kind: str, rng: np.random.Generator, phase: float):
    if kind == "one":
        return (lambda z: np.ones_like(np.asarray(z, dtype=np.complex128))), "G = 1"
    if kind == "poly":
        deg = int(rng.integers(1, 5))
        c = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
        c = c / np.arange(1, deg + 2)
        return (lambda z, c=c: np.polynomial.polynomial.polyval(np.asarray(z), c)), f"polynomial, degree {deg}"
    if kind == "plane":
        lam = float(rng.uniform(-2, 2))
        return (lambda z, lam=lam: np.exp(1j * lam * np.asarray(z))), f"exp(i {lam:.4f} x)"
    if kind == "gauss":
        beta = float(0.1 * abs(phase) * rng.uniform(0.2, 1.0))
        return (lambda z, b=beta: np.exp(-b * np.asarray(z) ** 2)), f"exp(-{beta:.4f} x^2)"
    raise ValidationError(f"unknown factor kind {kind!r}")


def standard_suite(seed: int = 0, n: int = 20) -> list:
    """Seeded integrands cycling through G in {1, polynomial <= deg 4, plane wave, Gaussian}.

    ``chi`` is uniform in (-0.5, 1.5) and ``|phase|`` in (0.5, 2) with a
    random sign.  Gaussian types stay below ``0.1 |phase|`` so the rotated
    rays of the angle check remain inside the growth budget.
    """
    rng = np.random.default_rng(seed)
    kinds = ("one", "poly", "plane", "gauss")
    out = []
    for i in range(n):
        chi = float(rng.uniform(-0.5, 1.5))
        phase = float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0]))
        g, desc = _make_factor(kinds[i % 4], rng, phase)
        out.append(FresnelIntegrand(chi, phase, g, description=desc))
    return out


@dataclass
class SuiteRecord:
    chi: float
    phase: float
    description: str
    contour: complex
    oracle: complex
    oracle_error: float
    relative_deviation: float
    angle_deviation: float


def verify_suite(integrands: Sequence[FresnelIntegrand], thetas: Sequence[float] = (-0.6, -0.3, 0.0, 0.3, 0.6)) -> list:
    """Contour value, eps-oracle value and angle spread for each integrand."""
    recs = []
    for f in integrands:
        c = regularize_halfline(f)
        o, oe = epsilon_oracle(f, return_error=True)
        dev = abs(c - o) / max(abs(c), 1e-10)
        ang = angle_independence_check(f, thetas).max_deviation
        recs.append(SuiteRecord(f.chi, f.phase, f.description, c, o, oe, dev, ang))
    return recs
