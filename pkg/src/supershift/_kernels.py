"""Hot inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and the environment
variable ``SUPERSHIFT_DISABLE_NUMBA`` is unset (or ``0``). Both paths are
always importable as ``<name>_numba`` / ``<name>_numpy`` so they can be
benchmarked and cross-checked against each other; the unsuffixed names
are the dispatched versions used by the rest of the package.

All sums use compensated (Kahan) accumulation.
"""

import os

import numpy as np

_DISABLED = os.environ.get("SUPERSHIFT_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def _njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# exponential sums  out[p] = sum_j w[j] * exp(a[j] * t[p] + b[j] * x[p])
# ---------------------------------------------------------------------------

def _expsum2_py(w, a, b, t, x):
    n_pts = t.shape[0]
    n_terms = w.shape[0]
    out = np.empty(n_pts, dtype=np.complex128)
    for p in range(n_pts):
        s = 0.0 + 0.0j
        c = 0.0 + 0.0j
        tp = t[p]
        xp = x[p]
        for j in range(n_terms):
            y = w[j] * np.exp(a[j] * tp + b[j] * xp) - c
            tot = s + y
            c = (tot - s) - y
            s = tot
        out[p] = s
    return out


expsum2_numba = _njit(_expsum2_py)


def expsum2_numpy(w, a, b, t, x):
    s = np.zeros(t.shape[0], dtype=np.complex128)
    c = np.zeros_like(s)
    for j in range(w.shape[0]):
        y = w[j] * np.exp(a[j] * t + b[j] * x) - c
        tot = s + y
        c = (tot - s) - y
        s = tot
    return s


# ---------------------------------------------------------------------------
# compensated sum of a 1-d complex array
# ---------------------------------------------------------------------------

def _kahan_sum_py(v):
    s = 0.0 + 0.0j
    c = 0.0 + 0.0j
    for k in range(v.shape[0]):
        y = v[k] - c
        tot = s + y
        c = (tot - s) - y
        s = tot
    return s


kahan_sum_numba = _njit(_kahan_sum_py)


def kahan_sum_numpy(v):
    # Neumaier's variant vectorises poorly; the loop is short in practice.
    return _kahan_sum_py(np.asarray(v, dtype=np.complex128))


# ---------------------------------------------------------------------------
# power-series exponential:  c = exp(g),  j c_j = sum_{m=1}^j m g_m c_{j-m}
# ---------------------------------------------------------------------------

def _series_exp_py(g):
    n = g.shape[0]
    c = np.zeros(n, dtype=np.complex128)
    c[0] = np.exp(g[0])
    for j in range(1, n):
        s = 0.0 + 0.0j
        comp = 0.0 + 0.0j
        for m in range(1, j + 1):
            if g[m] != 0:
                y = m * g[m] * c[j - m] - comp
                tot = s + y
                comp = (tot - s) - y
                s = tot
        c[j] = s / j
    return c


series_exp_numba = _njit(_series_exp_py)


def series_exp_numpy(g):
    n = g.shape[0]
    c = np.zeros(n, dtype=np.complex128)
    c[0] = np.exp(g[0])
    mg = np.arange(n) * g
    for j in range(1, n):
        c[j] = np.dot(mg[1:j + 1], c[j - 1::-1]) / j
    return c


# ---------------------------------------------------------------------------
# infinite-order operator in derivative form:  e_l = sum_j b_j d_{l+j}
# ---------------------------------------------------------------------------

def _correlate_apply_py(b, d, n_out):
    nb = b.shape[0]
    nd = d.shape[0]
    out = np.zeros(n_out, dtype=np.complex128)
    for ell in range(n_out):
        s = 0.0 + 0.0j
        comp = 0.0 + 0.0j
        jmax = min(nb, nd - ell)
        for j in range(jmax):
            y = b[j] * d[ell + j] - comp
            tot = s + y
            comp = (tot - s) - y
            s = tot
        out[ell] = s
    return out


correlate_apply_numba = _njit(_correlate_apply_py)


def correlate_apply_numpy(b, d, n_out):
    out = np.zeros(n_out, dtype=np.complex128)
    nd = d.shape[0]
    for ell in range(n_out):
        jmax = min(b.shape[0], nd - ell)
        out[ell] = np.dot(b[:jmax], d[ell:ell + jmax])
    return out


# ---------------------------------------------------------------------------
# alternating Bessel-type series
#   E_nu(z) = sum_k (-1)^k (z/2)^{2k} / (k! Gamma(nu+k+1))
# first term 1/Gamma(nu+1) is supplied by the caller; the remaining terms
# follow from the ratio  -(z/2)^2 / (k (nu+k)).
# Returns (sums, n_terms_used, last_term_magnitude) per point.
# ---------------------------------------------------------------------------

def _e_nu_series_py(nu, z, first, max_terms, tol):
    n = z.shape[0]
    out = np.empty(n, dtype=np.complex128)
    used = np.zeros(n, dtype=np.int64)
    tail = np.zeros(n, dtype=np.float64)
    for p in range(n):
        q = -(z[p] * 0.5) ** 2
        term = first + 0.0j
        s = term
        comp = 0.0 + 0.0j
        k = 0
        last = abs(term)
        while k < max_terms:
            k += 1
            term = term * q / (k * (nu + k))
            y = term - comp
            tot = s + y
            comp = (tot - s) - y
            s = tot
            last = abs(term)
            # terms decrease monotonically once k(nu+k) > |q|
            if last <= tol and k * (nu + k) > 2.0 * abs(q):
                break
        out[p] = s
        used[p] = k
        tail[p] = last
    return out, used, tail


e_nu_series_numba = _njit(_e_nu_series_py)


def e_nu_series_numpy(nu, z, first, max_terms, tol):
    q = -(z * 0.5) ** 2
    term = np.full(z.shape, first, dtype=np.complex128)
    s = term.copy()
    comp = np.zeros_like(s)
    done = np.zeros(z.shape, dtype=bool)
    used = np.zeros(z.shape, dtype=np.int64)
    last = np.abs(term)
    k = 0
    while k < max_terms and not done.all():
        k += 1
        term = term * q / (k * (nu + k))
        y = np.where(done, 0.0, term - comp)
        tot = s + y
        comp = np.where(done, comp, (tot - s) - y)
        s = tot
        mag = np.abs(term)
        last = np.where(done, last, mag)
        used = np.where(done, used, k)
        done |= (mag <= tol) & (k * (nu + k) > 2.0 * np.abs(q))
    return s, used, last


# ---------------------------------------------------------------------------
# derivative jet of v = u**n (Miller's power recurrence in derivative form)
#   D_m = (1 / (m u_0)) sum_{k=1}^m binom(m,k) (n k - m + k) U_k D_{m-k}
# U[p, k] holds the k-th derivative of u at point p; binom is (M+1)x(M+1).
# ---------------------------------------------------------------------------

def _power_jet_py(U, n, binom):
    n_pts = U.shape[0]
    order = U.shape[1]
    D = np.zeros((n_pts, order), dtype=np.complex128)
    for p in range(n_pts):
        u0 = U[p, 0]
        D[p, 0] = u0 ** n
        for m in range(1, order):
            s = 0.0 + 0.0j
            comp = 0.0 + 0.0j
            for k in range(1, m + 1):
                y = binom[m, k] * (n * k - m + k) * U[p, k] * D[p, m - k] - comp
                tot = s + y
                comp = (tot - s) - y
                s = tot
            D[p, m] = s / (m * u0)
    return D


power_jet_numba = _njit(_power_jet_py)


def power_jet_numpy(U, n, binom):
    n_pts, order = U.shape
    D = np.zeros((n_pts, order), dtype=np.complex128)
    D[:, 0] = U[:, 0] ** n
    for m in range(1, order):
        k = np.arange(1, m + 1)
        w = binom[m, 1:m + 1] * (n * k - m + k)
        D[:, m] = np.sum(w * U[:, 1:m + 1] * D[:, m - 1::-1][:, :m], axis=1) / (m * U[:, 0])
    return D


if USE_NUMBA:
    expsum2 = expsum2_numba
    kahan_sum = kahan_sum_numba
    series_exp = series_exp_numba
    correlate_apply = correlate_apply_numba
    e_nu_series = e_nu_series_numba
    power_jet = power_jet_numba
else:
    expsum2 = expsum2_numpy
    kahan_sum = kahan_sum_numpy
    series_exp = series_exp_numpy
    correlate_apply = correlate_apply_numpy
    e_nu_series = e_nu_series_numpy
    power_jet = power_jet_numpy
