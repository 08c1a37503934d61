"""Command-line front end.

    supershift CONFIG.yaml [--output PATH] [--format csv|json] [--seed N]

The config is a YAML mapping with keys ``experiment``, ``parameters``,
``output_path``, ``output_format`` and ``seed``.  Experiments: ``synth``,
``evolve``, ``fresnel-verify``, ``harmonic``, ``centrifugal``, ``probe``.
Exit status 1 on validation failure, 2 on numerical failure.

CSV files start with ``#`` metadata lines (timestamp first, then a JSON
echo of the config and the package version) followed by a header row.
JSON files hold one object with ``meta`` and ``results``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as _dt
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import yaml

from . import __version__
from .errors import NumericalError, ValidationError
from .evolution import GridRect, supershift_gap
from .fresnel import FresnelIntegrand, _make_factor, standard_suite, verify_suite
from .operators import DispersionSpec
from .propagators import (
    CentrifugalSpec,
    _check_grid_margin,
    singularity_probe,
    supershift_gap_centrifugal,
    supershift_gap_harmonic,
)
from .sequences import SuperoscParams, evaluate_product, closeness_bound

__all__ = ["ExperimentConfig", "load_config", "run", "main", "read_output", "EXPERIMENTS"]

EXPERIMENTS = ("synth", "evolve", "fresnel-verify", "harmonic", "centrifugal", "probe")


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_path: str = "out.csv"
    output_format: str = "csv"
    seed: int = 0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"experiment must be one of {', '.join(EXPERIMENTS)}")
        if self.output_format not in ("csv", "json"):
            raise ValidationError("output_format must be 'csv' or 'json'")
        if not isinstance(self.parameters, dict):
            raise ValidationError("parameters must be a mapping")
        if int(self.seed) != self.seed:
            raise ValidationError("seed must be an integer")
        self.seed = int(self.seed)

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "output_path": self.output_path,
            "output_format": self.output_format,
            "seed": self.seed,
        }


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ValidationError("config must be a mapping")
    unknown = set(raw) - {"experiment", "parameters", "output_path", "output_format", "seed"}
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    if "experiment" not in raw:
        raise ValidationError("config needs an 'experiment' key")
    return ExperimentConfig(**raw)


# ---------------------------------------------------------------------------
# parameter bags
# ---------------------------------------------------------------------------

def _take(params: dict, defaults: dict, name: str) -> dict:
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValidationError(f"{name}: unknown parameters {sorted(unknown)}")
    out = dict(defaults)
    out.update(params)
    return out


def _grid(p: dict, default: GridRect) -> GridRect:
    g = dataclasses.asdict(default)
    unknown = set(p or {}) - set(g)
    if unknown:
        raise ValidationError(f"grid: unknown keys {sorted(unknown)}")
    g.update(p or {})
    return GridRect(**g)


def _ints(v, name: str) -> List[int]:
    if isinstance(v, dict):
        v = list(range(int(v["start"]), int(v["stop"]) + 1, int(v["step"])))
    out = [int(n) for n in v]
    if not out or any(n < 1 for n in out):
        raise ValidationError(f"{name} must be a nonempty list of positive integers")
    return out


# each experiment validates its parameters and returns a compute closure


def _synth(p: dict, seed: int):
    q = _take(p, {"a": 2.0, "N": 20, "x_min": -5.0, "x_max": 5.0, "nx": 101}, "synth")
    params = SuperoscParams(float(q["a"]), int(q["N"]))
    if not q["x_max"] > q["x_min"] or int(q["nx"]) < 2:
        raise ValidationError("synth needs x_max > x_min and nx >= 2")

    def compute():
        x = np.linspace(float(q["x_min"]), float(q["x_max"]), int(q["nx"]))
        F = evaluate_product(x, params)
        err = np.abs(F - np.exp(1j * params.a * x))
        bound = closeness_bound(x, params)
        rows = [[xi, fi.real, fi.imag, ei, bi] for xi, fi, ei, bi in zip(x, F, err, bound)]
        summary = {"max_error": float(err.max()), "bound_violations": int(np.sum(err > bound))}
        return ["x", "re_F", "im_F", "abs_error", "bound"], rows, summary

    return compute


def _dispersion(q: dict) -> DispersionSpec:
    if q.get("gammas") is not None:
        return DispersionSpec.polynomial([complex(g) for g in q["gammas"]])
    return DispersionSpec.monomial(int(q["p"]))


def _evolve(p: dict, seed: int):
    q = _take(p, {"p": 2, "gammas": None, "a": 2.0, "Ns": {"start": 10, "stop": 640, "step": 10},
                  "mu": 0, "nu": 0, "grid": {}}, "evolve")
    spec = _dispersion(q)
    Ns = _ints(q["Ns"], "Ns")
    grid = _grid(q["grid"], GridRect())
    mu, nu = int(q["mu"]), int(q["nu"])
    if mu + nu > 4 or mu < 0 or nu < 0:
        raise ValidationError("mu + nu must be <= 4")

    def compute():
        rep = supershift_gap(spec, float(q["a"]), grid, Ns, mu, nu)
        rows = [[n, g] for n, g in zip(rep.Ns, rep.gaps)]
        return ["N", "gap"], rows, rep.as_dict()

    return compute


def _fresnel(p: dict, seed: int):
    q = _take(p, {"chi": None, "phase": None, "G": "one", "n": 20}, "fresnel-verify")
    if q["chi"] is not None or q["phase"] is not None:
        chi = float(q["chi"] if q["chi"] is not None else 0.0)
        phase = float(q["phase"] if q["phase"] is not None else 1.0)
        g, desc = _make_factor(str(q["G"]), np.random.default_rng(seed), phase)
        items = [FresnelIntegrand(chi, phase, g, description=desc)]
    else:
        if int(q["n"]) < 1:
            raise ValidationError("n must be positive")
        items = standard_suite(seed, int(q["n"]))

    def compute():
        recs = verify_suite(items)
        rows = [[r.chi, r.phase, r.description, r.contour.real, r.contour.imag, r.oracle.real, r.oracle.imag,
                 r.relative_deviation, r.angle_deviation] for r in recs]
        summary = {
            "max_oracle_deviation": max(r.relative_deviation for r in recs),
            "max_angle_deviation": max(r.angle_deviation for r in recs),
            "count": len(recs),
        }
        cols = ["chi", "phase", "G", "re_contour", "im_contour", "re_oracle", "im_oracle",
                "oracle_deviation", "angle_deviation"]
        return cols, rows, summary

    return compute


def _harmonic(p: dict, seed: int):
    q = _take(p, {"a": 2.0, "Ns": [10, 20, 40, 80, 160, 320], "mu": 0, "nu": 0, "margin": 0.1,
                  "grid": {"t_min": 0.2, "t_max": 1.3, "x_min": -2.0, "x_max": 2.0, "nt": 23, "nx": 41}},
              "harmonic")
    Ns = _ints(q["Ns"], "Ns")
    grid = _grid(q["grid"], GridRect(0.2, 1.3, -2.0, 2.0, 23, 41))
    mu, nu = int(q["mu"]), int(q["nu"])
    if mu > 2 or nu > 2 or mu < 0 or nu < 0:
        raise ValidationError("harmonic gaps support mu, nu <= 2")
    _check_grid_margin(grid, float(q["margin"]))

    def compute():
        rep = supershift_gap_harmonic(float(q["a"]), grid, Ns, mu, nu, float(q["margin"]))
        return ["N", "gap"], [[n, g] for n, g in zip(rep.Ns, rep.gaps)], rep.as_dict()

    return compute


def _centrifugal(p: dict, seed: int):
    q = _take(p, {"u": 1.0, "a": 2.0, "Ns": [10, 20, 40, 80, 160],
                  "grid": {"t_min": 0.5, "t_max": 1.5, "x_min": 0.5, "x_max": 2.0, "nt": 6, "nx": 7}},
              "centrifugal")
    spec = CentrifugalSpec(float(q["u"]))
    Ns = _ints(q["Ns"], "Ns")
    grid = _grid(q["grid"], GridRect(0.5, 1.5, 0.5, 2.0, 6, 7))
    if not (grid.t_min > 0 and grid.x_min > 0):
        raise ValidationError("centrifugal grid must lie in (0, inf) x (0, inf)")

    def compute():
        rep = supershift_gap_centrifugal(spec, float(q["a"]), grid, Ns)
        return ["N", "gap"], [[n, g] for n, g in zip(rep.Ns, rep.gaps)], rep.as_dict()

    return compute


def _probe(p: dict, seed: int):
    q = _take(p, {"lam": 1.0, "x": 0.7, "t_list": None, "n": 20, "d_min": 1e-6, "d_max": 1e-1}, "probe")
    if q["t_list"] is not None:
        t = [float(v) for v in q["t_list"]]
    else:
        if not 0 < q["d_min"] < q["d_max"]:
            raise ValidationError("probe needs 0 < d_min < d_max")
        t = list(0.5 * math.pi - np.logspace(math.log10(q["d_max"]), math.log10(q["d_min"]), int(q["n"])))
    if len(t) < 3:
        raise ValidationError("t_list needs at least 3 times")

    def compute():
        rep = singularity_probe(float(q["lam"]), float(q["x"]), t)
        rows = [[ti, abs(math.cos(ti)), m] for ti, m in zip(rep.t, rep.modulus)]
        summary = {"exponent": rep.exponent, "fit_residual": rep.fit_residual, "blow_up": rep.blow_up}
        return ["t", "abs_cos_t", "modulus"], rows, summary

    return compute


_PREPARE: Dict[str, Callable] = {
    "synth": _synth,
    "evolve": _evolve,
    "fresnel-verify": _fresnel,
    "harmonic": _harmonic,
    "centrifugal": _centrifugal,
    "probe": _probe,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _render(cfg: ExperimentConfig, columns, rows, summary) -> str:
    stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    meta = {"config": _jsonable(cfg.as_dict()), "version": __version__, "summary": _jsonable(summary)}
    if cfg.output_format == "json":
        body = {"meta": dict(meta, columns=list(columns)), "results": [[_jsonable(c) for c in r] for r in rows]}
        text = json.dumps(body, indent=1, sort_keys=True)
        return _json_with_stamp(stamp, text)
    buf = io.StringIO()
    buf.write(f"# generated {stamp}\n")
    buf.write("# meta " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(c) for c in r])
    return buf.getvalue()


def _json_with_stamp(stamp: str, text: str) -> str:
    # timestamp alone on the first line; the rest is the deterministic body
    return "{\"generated\": \"" + stamp + "\",\n" + text[1:].lstrip("\n") + "\n"


def read_output(path: str) -> dict:
    """Parse and validate a file written by :func:`run`.

    Returns ``{"meta": ..., "columns": [...], "rows": [...]}``.
    """
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        if not {"meta", "results"} <= set(obj):
            raise ValidationError("JSON output needs 'meta' and 'results'")
        meta = obj["meta"]
        cols = meta.get("columns")
        rows = obj["results"]
    else:
        lines = text.splitlines()
        if not (lines and lines[0].startswith("# generated ") and lines[1].startswith("# meta ")):
            raise ValidationError("CSV output needs '# generated' and '# meta' header lines")
        meta = json.loads(lines[1][len("# meta "):])
        reader = csv.reader(lines[2:])
        cols = next(reader)
        rows = [r for r in reader]
    for key in ("config", "version", "summary"):
        if key not in meta:
            raise ValidationError(f"metadata lacks {key!r}")
    if not isinstance(cols, list) or any(len(r) != len(cols) for r in rows):
        raise ValidationError("rows do not match the column header")
    ExperimentConfig(**meta["config"])
    return {"meta": meta, "columns": cols, "rows": rows}


def run(cfg: ExperimentConfig) -> int:
    """Validate, compute and write one experiment; returns the exit status."""
    try:
        compute = _PREPARE[cfg.experiment](cfg.parameters, cfg.seed)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    try:
        columns, rows, summary = compute()
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    text = _render(cfg, columns, rows, summary)
    with open(cfg.output_path, "w", newline="") as fh:
        fh.write(text)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="supershift", description="Run a supershift experiment from a YAML config.")
    ap.add_argument("config", help="YAML experiment config")
    ap.add_argument("--output", help="output path (overrides output_path)")
    ap.add_argument("--format", choices=("csv", "json"), help="output format (overrides output_format)")
    ap.add_argument("--seed", type=int, help="seed for randomized suites (overrides seed)")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.output:
            cfg.output_path = args.output
        if args.format:
            cfg.output_format = args.format
        if args.seed is not None:
            cfg.seed = args.seed
    except (OSError, yaml.YAMLError) as exc:
        print(f"validation error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, TypeError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
