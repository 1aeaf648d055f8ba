"""Sweep configuration: a single JSON document with a ``kind`` discriminator.

Kinds and their ``params``:

* ``binary_independent`` -- {p, p2, p3}
* ``binary_correlated``  -- {p, p1, p2}
* ``classification``     -- {p, p2, n}
* ``gaussian``           -- {var_s, var_x1, var_x2, var_y, cov_sx1, cov_x1y, cov_x2y}
* ``custom``             -- inline pmf and distortion tables (see below)

Common fields: ``grid`` with entries ``d1``/``d2``/``ds``, each either an
explicit list of values or {"linspace": [start, stop, num]}; optional
``method`` ("auto" routes in-region points to the closed form and the rest to
the solver; "closed_form" errors outside regions; "ba" always solves);
optional ``solver`` overrides (SolverOptions field names); optional
``workers``; optional ``base`` ("bits"/"nats", gaussian only).

``custom`` params: {"alphabets": {name: [labels...]}, "source": {"axes":
[names], "probs": nested}, "repro_axes": [names], "d1"/"d2"/"ds_mod":
{"source_axis": name, "repro_axis": name, "values": nested}, "log_base"}.
Custom sweeps always use the solver.

Schema violations raise ConfigError with the offending field path.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError
from .prob import Alphabet, BinarySourceSpec, DistortionMatrix, JointPMF, ProbabilityError
from .gaussian import GaussianSpec
from .solver import RDProblem, SolverOptions
from . import sources

KINDS = ("binary_independent", "binary_correlated", "classification", "gaussian", "custom")
METHODS = ("auto", "closed_form", "ba")


def _fail(path: str, msg: str) -> None:
    raise ConfigError(f"{path}: {msg}")


def _get(obj: Mapping, path: str, key: str, required: bool = True, default: Any = None) -> Any:
    if key not in obj:
        if required:
            _fail(f"{path}.{key}" if path else key, "missing required field")
        return default
    return obj[key]


def _real(value: Any, path: str, lo: float | None = None, hi: float | None = None) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        _fail(path, f"must be a finite number, got {value!r}")
    if lo is not None and value < lo:
        _fail(path, f"must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        _fail(path, f"must be <= {hi}, got {value}")
    return float(value)


def _grid_axis(value: Any, path: str) -> tuple[float, ...]:
    if isinstance(value, Mapping):
        spec = _get(value, path, "linspace")
        if not isinstance(spec, (list, tuple)) or len(spec) != 3:
            _fail(f"{path}.linspace", "must be [start, stop, num]")
        start = _real(spec[0], f"{path}.linspace[0]")
        stop = _real(spec[1], f"{path}.linspace[1]")
        if not isinstance(spec[2], int) or isinstance(spec[2], bool) or spec[2] < 1:
            _fail(f"{path}.linspace[2]", f"must be a positive integer, got {spec[2]!r}")
        return tuple(float(v) for v in np.linspace(start, stop, spec[2]))
    if isinstance(value, (list, tuple)):
        if not value:
            _fail(path, "empty grid")
        return tuple(_real(v, f"{path}[{i}]") for i, v in enumerate(value))
    _fail(path, f"must be a list of values or a linspace object, got {type(value).__name__}")
    raise AssertionError  # unreachable


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    kind: str
    method: str
    grid: dict[str, tuple[float, ...]]
    solver_options: SolverOptions
    workers: int | None
    base: str
    # discrete kinds
    binary_spec: BinarySourceSpec | None = None
    classification_n: int | None = None
    classification_p: float | None = None
    classification_p2: float | None = None
    problem: RDProblem | None = None
    # gaussian kind
    gaussian_spec: GaussianSpec | None = None


def _parse_solver_options(obj: Any, path: str) -> SolverOptions:
    if obj is None:
        return SolverOptions()
    if not isinstance(obj, Mapping):
        _fail(path, "must be an object")
    allowed = {f.name for f in dataclasses.fields(SolverOptions)}
    kwargs: dict[str, Any] = {}
    for key, value in obj.items():
        if key not in allowed:
            _fail(f"{path}.{key}", f"unknown solver option; allowed: {sorted(allowed)}")
        kwargs[key] = value
    try:
        return SolverOptions(**kwargs)
    except (ProbabilityError, TypeError) as exc:
        _fail(path, str(exc))
        raise AssertionError


def _parse_alphabets(obj: Any, path: str) -> dict[str, Alphabet]:
    if not isinstance(obj, Mapping) or not obj:
        _fail(path, "must be a non-empty object mapping axis name to label list")
    out = {}
    for name, labels in obj.items():
        if not isinstance(labels, (list, tuple)) or not labels:
            _fail(f"{path}.{name}", "must be a non-empty list of labels")
        try:
            out[name] = Alphabet(name, len(labels), tuple(str(l) for l in labels))
        except ProbabilityError as exc:
            _fail(f"{path}.{name}", str(exc))
    return out


def _parse_table(
    obj: Any, path: str, alphabets: dict[str, Alphabet]
) -> DistortionMatrix:
    if not isinstance(obj, Mapping):
        _fail(path, "must be an object")
    src = _get(obj, path, "source_axis")
    rep = _get(obj, path, "repro_axis")
    for key, val in (("source_axis", src), ("repro_axis", rep)):
        if val not in alphabets:
            _fail(f"{path}.{key}", f"unknown alphabet {val!r}")
    values = _get(obj, path, "values")
    try:
        return DistortionMatrix(alphabets[src], alphabets[rep], np.asarray(values, dtype=float))
    except (ProbabilityError, ValueError) as exc:
        _fail(f"{path}.values", str(exc))
        raise AssertionError


def _parse_custom(params: Any, path: str) -> RDProblem:
    if not isinstance(params, Mapping):
        _fail(path, "must be an object")
    alphabets = _parse_alphabets(_get(params, path, "alphabets"), f"{path}.alphabets")
    src_obj = _get(params, path, "source")
    if not isinstance(src_obj, Mapping):
        _fail(f"{path}.source", "must be an object")
    axes = _get(src_obj, f"{path}.source", "axes")
    if not isinstance(axes, (list, tuple)) or len(axes) != 3:
        _fail(f"{path}.source.axes", "must list exactly 3 axis names (x1, x2, y roles)")
    for i, name in enumerate(axes):
        if name not in alphabets:
            _fail(f"{path}.source.axes[{i}]", f"unknown alphabet {name!r}")
    try:
        source = JointPMF(
            tuple(alphabets[n] for n in axes),
            np.asarray(_get(src_obj, f"{path}.source", "probs"), dtype=float),
        )
    except (ProbabilityError, ValueError) as exc:
        _fail(f"{path}.source.probs", str(exc))
        raise AssertionError
    d1 = _parse_table(_get(params, path, "d1"), f"{path}.d1", alphabets)
    d2 = _parse_table(_get(params, path, "d2"), f"{path}.d2", alphabets)
    ds_mod = _parse_table(_get(params, path, "ds_mod"), f"{path}.ds_mod", alphabets)
    log_base = _real(_get(params, path, "log_base", required=False, default=2.0),
                     f"{path}.log_base")
    try:
        return sources.custom_problem(source, d1, d2, ds_mod, log_base)
    except ProbabilityError as exc:
        _fail(path, str(exc))
        raise AssertionError


def parse_config(doc: Any) -> SweepConfig:
    if not isinstance(doc, Mapping):
        _fail("", f"config root must be an object, got {type(doc).__name__}")
    kind = _get(doc, "", "kind")
    if kind not in KINDS:
        _fail("kind", f"must be one of {KINDS}, got {kind!r}")
    method = _get(doc, "", "method", required=False, default="auto")
    if method not in METHODS:
        _fail("method", f"must be one of {METHODS}, got {method!r}")
    grid_obj = _get(doc, "", "grid")
    if not isinstance(grid_obj, Mapping):
        _fail("grid", "must be an object with d1/d2/ds entries")
    extra = set(grid_obj) - {"d1", "d2", "ds"}
    if extra:
        _fail("grid", f"unknown axes {sorted(extra)}")
    grid = {}
    for key in ("d1", "d2", "ds"):
        if key not in grid_obj:
            _fail(f"grid.{key}", "missing required field")
        grid[key] = _grid_axis(grid_obj[key], f"grid.{key}")
    opts = _parse_solver_options(doc.get("solver"), "solver")
    workers = doc.get("workers")
    if workers is not None and (not isinstance(workers, int) or isinstance(workers, bool) or workers < 1):
        _fail("workers", f"must be a positive integer, got {workers!r}")
    base = _get(doc, "", "base", required=False, default="nats" if kind == "gaussian" else "bits")
    if base not in ("bits", "nats"):
        _fail("base", f"must be 'bits' or 'nats', got {base!r}")
    if base == "nats" and kind != "gaussian":
        _fail("base", "nats output is only supported for the gaussian kind")

    params = _get(doc, "", "params")
    if not isinstance(params, Mapping) and kind != "custom":
        _fail("params", "must be an object")

    common = dict(kind=kind, method=method, grid=grid, solver_options=opts,
                  workers=workers, base=base)
    if kind == "binary_independent":
        p = _real(_get(params, "params", "p"), "params.p", 0.0, 0.5)
        p2 = _real(_get(params, "params", "p2"), "params.p2", 0.0, 0.5)
        p3 = _real(_get(params, "params", "p3"), "params.p3", 0.0, 0.5)
        return SweepConfig(binary_spec=BinarySourceSpec.conditionally_independent(p, p2, p3), **common)
    if kind == "binary_correlated":
        p = _real(_get(params, "params", "p"), "params.p", 0.0, 0.5)
        p1 = _real(_get(params, "params", "p1"), "params.p1", 0.0, 0.5)
        p2 = _real(_get(params, "params", "p2"), "params.p2", 0.0, 0.5)
        return SweepConfig(binary_spec=BinarySourceSpec.correlated(p, p1, p2), **common)
    if kind == "classification":
        p = _real(_get(params, "params", "p"), "params.p", 0.0, 0.5)
        p2 = _real(_get(params, "params", "p2"), "params.p2", 0.0, 0.5)
        n = _get(params, "params", "n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 4 or n % 2:
            _fail("params.n", f"must be an even integer >= 4, got {n!r}")
        return SweepConfig(classification_n=n, classification_p=p, classification_p2=p2, **common)
    if kind == "gaussian":
        if method == "ba":
            _fail("method", "the gaussian kind has no solver route; use closed_form/auto")
        kwargs = {}
        for fname in ("var_s", "var_x1", "var_x2", "var_y", "cov_sx1", "cov_x1y", "cov_x2y"):
            kwargs[fname] = _real(_get(params, "params", fname), f"params.{fname}")
        try:
            gspec = GaussianSpec(**kwargs)
        except ProbabilityError as exc:
            _fail("params", str(exc))
            raise AssertionError
        return SweepConfig(gaussian_spec=gspec, **common)
    # custom
    if method != "ba" and method != "auto":
        _fail("method", "custom sweeps have no closed form; use 'ba' (or 'auto')")
    problem = _parse_custom(params, "params")
    return SweepConfig(problem=problem, **common)


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return parse_config(doc)
