"""Time the numba and pure-numpy kernel paths on representative inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel: best wall time of each path, speedup, and the
max relative disagreement between the two outputs.
"""

import argparse
import time

import numpy as np
from scipy.special import comb

from supershift import _kernels


def _cases(rng):
    n = 321
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = 1j * rng.uniform(-1, 1, n)
    b = 1j * np.linspace(-1, 1, n)
    t = rng.uniform(0, 1, 2000)
    x = rng.uniform(-2, 2, 2000)
    v = rng.standard_normal(200_000) + 1j * rng.standard_normal(200_000)
    g = np.zeros(257, dtype=np.complex128)
    g[1:7] = rng.standard_normal(6) * 0.3
    bb = rng.standard_normal(64) + 0j
    d = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    z = rng.uniform(-15, 15, 20_000) + 1j * rng.uniform(-3, 3, 20_000)
    order = 120
    pts = rng.uniform(-3, 3, 200)
    N = 80
    k = np.arange(order)
    U = np.empty((len(pts), order), dtype=np.complex128)
    for i, p in enumerate(pts):
        ph = p / N + k * np.pi / 2
        U[i] = N ** (-k.astype(float)) * (np.cos(ph) + 2j * np.sin(ph))
    binom = comb(np.arange(order)[:, None], np.arange(order)[None, :])
    return {
        "expsum2": ((w, a, b, t, x), {}),
        "kahan_sum": ((v,), {}),
        "series_exp": ((g,), {}),
        "correlate_apply": ((bb, d, 400), {}),
        "e_nu_series": ((1.118, z, 1.0 / 1.0569, 400, 1e-16), {}),
        "power_jet": ((U, N, binom), {}),
    }


def _best(fn, args, repeat):
    fn(*args)  # warm-up (compilation for the numba path)
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _first(out):
    return out[0] if isinstance(out, tuple) else out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, (a, _) in _cases(rng).items():
        tn, on = _best(getattr(_kernels, name + "_numba"), a, args.repeat)
        tp, op = _best(getattr(_kernels, name + "_numpy"), a, args.repeat)
        on, op = np.asarray(_first(on)), np.asarray(_first(op))
        diff = float(np.max(np.abs(on - op)) / max(np.max(np.abs(op)), 1e-300))
        print(f"{name:<16}{1e3 * tn:>12.3f}{1e3 * tp:>12.3f}{tp / tn:>10.1f}{diff:>15.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
