"""The numba and numpy kernel paths agree, and the env flag selects between them."""

import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.special import comb

from supershift import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")


def _pair(name):
    return getattr(_kernels, name + "_numba"), getattr(_kernels, name + "_numpy")


def _first(out):
    return out[0] if isinstance(out, tuple) else out


def _agree(name, args, rtol):
    nb, npy = _pair(name)
    a, b = np.asarray(_first(nb(*args))), np.asarray(_first(npy(*args)))
    assert a.shape == b.shape
    assert np.max(np.abs(a - b)) <= rtol * max(np.max(np.abs(b)), 1e-300)


def test_expsum2(rng):
    n = 41
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = 1j * rng.uniform(-1, 1, n)
    b = 1j * np.linspace(-1, 1, n)
    _agree("expsum2", (w, a, b, rng.uniform(0, 1, 100), rng.uniform(-2, 2, 100)), 1e-13)


def test_kahan_sum(rng):
    v = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
    _agree("kahan_sum", (v,), 1e-14)
    # compensated: 1 + many tiny terms
    w = np.concatenate([[1.0 + 0j], np.full(100_000, 1e-17 + 0j)])
    assert abs(_kahan_sum(w) - (1 + 1e-12)) < 1e-16


def _kahan_sum(v):
    return _kernels.kahan_sum(v)


def test_series_exp(rng):
    g = np.zeros(129, dtype=np.complex128)
    g[1:6] = rng.standard_normal(5) * 0.3
    _agree("series_exp", (g,), 1e-13)
    # exp of W is sum W^j/j!
    h = np.zeros(20, dtype=np.complex128)
    h[1] = 1.0
    from math import factorial

    assert np.allclose(_kernels.series_exp(h).real, [1 / factorial(j) for j in range(20)], rtol=1e-14)


def test_correlate_apply(rng):
    b = rng.standard_normal(32) + 0j
    d = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    _agree("correlate_apply", (b, d, 200), 1e-13)
    ref = np.array([np.sum(b[: min(32, 256 - l)] * d[l : l + min(32, 256 - l)]) for l in range(200)])
    assert np.allclose(_kernels.correlate_apply(b, d, 200), ref, rtol=1e-13, atol=1e-13)


def test_e_nu_series(rng):
    z = rng.uniform(-15, 15, 500) + 1j * rng.uniform(-3, 3, 500)
    _agree("e_nu_series", (1.118, z, 1.0 / 1.0569, 400, 1e-16), 1e-11)


def test_power_jet(rng):
    order, N = 30, 20
    pts = rng.uniform(-3, 3, 20)
    k = np.arange(order)
    U = np.empty((len(pts), order), dtype=np.complex128)
    for i, p in enumerate(pts):
        ph = p / N + k * np.pi / 2
        U[i] = N ** (-k.astype(float)) * (np.cos(ph) + 2j * np.sin(ph))
    binom = comb(np.arange(order)[:, None], np.arange(order)[None, :])
    _agree("power_jet", (U, float(N), binom), 1e-12)


@pytest.mark.parametrize("flag, expected", [("1", "False"), ("0", "True")])
def test_env_flag_selects_path(flag, expected):
    env = dict(os.environ, SUPERSHIFT_DISABLE_NUMBA=flag)
    code = (
        "from supershift import _kernels as k;"
        "print(k.USE_NUMBA, k.expsum2 is (k.expsum2_numba if k.USE_NUMBA else k.expsum2_numpy))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == [expected, "True"]


def test_numpy_path_end_to_end():
    env = dict(os.environ, SUPERSHIFT_DISABLE_NUMBA="1")
    code = (
        "from supershift.evolution import psi; from supershift.operators import DispersionSpec;"
        "from supershift.sequences import SuperoscParams;"
        "print(repr(psi(DispersionSpec.monomial(2), SuperoscParams(2.0, 40), 0.5, 0.3)))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    from supershift.evolution import psi
    from supershift.operators import DispersionSpec
    from supershift.sequences import SuperoscParams

    ref = psi(DispersionSpec.monomial(2), SuperoscParams(2.0, 40), 0.5, 0.3)
    assert abs(complex(out.stdout.strip()) - ref) < 1e-12
