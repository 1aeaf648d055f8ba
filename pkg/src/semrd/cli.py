"""Command-line front end.

    semrd figure <id> --out DIR [--grid N] [--base bits|nats] [--workers N]
    semrd sweep --config FILE --out FILE
    semrd verify <suite> [--json]

Exit codes: 0 success, 1 usage/configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .config import SweepConfig, load_config
from .errors import ConfigError, InfeasibleDistortionError, SemrdError
from .figures import FIGURE_IDS, generate_figure
from .verify import SUITES, run_suite

USAGE_ERROR = 1
VERIFY_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semrd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="emit a figure preset's data files")
    fig.add_argument("figure_id", choices=FIGURE_IDS)
    fig.add_argument("--out", required=True, help="output directory")
    fig.add_argument("--grid", type=int, default=None, help="grid resolution override")
    fig.add_argument("--base", choices=("bits", "nats"), default=None)
    fig.add_argument("--workers", type=int, default=None, help="parallel solver processes")

    sw = sub.add_parser("sweep", help="run a configured distortion-grid sweep")
    sw.add_argument("--config", required=True, help="JSON config path")
    sw.add_argument("--out", required=True, help="output CSV path")

    ver = sub.add_parser("verify", help="run a cross-module check suite")
    ver.add_argument("suite", choices=sorted(SUITES))
    ver.add_argument("--json", action="store_true", help="print a JSON report")
    return parser


def _sweep_rows(cfg: SweepConfig):
    """Yield one row dict per grid cell, ordered by grid index."""
    import itertools

    from . import sources
    from .closed_form import (
        in_region_classification,
        in_region_correlated,
        rate_classification,
        rate_conditionally_independent,
        rate_correlated,
    )
    from .errors import RegionError
    from .gaussian import gaussian_rate, nats_to_bits
    from .solver import RDQuery, solve_rd_point, sweep_surface

    cells = list(itertools.product(cfg.grid["d1"], cfg.grid["d2"], cfg.grid["ds"]))

    def closed_value(d1, d2, ds):
        if cfg.kind == "binary_independent":
            return rate_conditionally_independent(cfg.binary_spec, d1, d2, ds), True
        if cfg.kind == "binary_correlated":
            if in_region_correlated(cfg.binary_spec, d1, d2, ds):
                return rate_correlated(cfg.binary_spec, d1, d2, ds), True
            return None, False
        if cfg.kind == "classification":
            if in_region_classification(
                cfg.classification_p, cfg.classification_p2, cfg.classification_n, d1, d2, ds
            ):
                return (
                    rate_classification(
                        cfg.classification_p, cfg.classification_p2, cfg.classification_n,
                        d1, d2, ds,
                    ),
                    True,
                )
            return None, False
        raise AssertionError(cfg.kind)

    if cfg.kind == "gaussian":
        for d1, d2, ds in cells:
            row = {"d1": d1, "d2": d2, "ds": ds, "method": "closed_form",
                   "converged": True, "cs_residual": None, "error": None, "rate": None}
            try:
                res = gaussian_rate(cfg.gaussian_spec, d1, d2, ds)
                row["rate"] = res.rate_nats if cfg.base == "nats" else nats_to_bits(res.rate_nats)
            except (InfeasibleDistortionError, SemrdError) as exc:
                row["error"] = f"infeasible: {exc}"
                row["converged"] = False
            yield row
        return

    if cfg.kind == "custom":
        problem = cfg.problem
    elif cfg.kind == "classification":
        problem = sources.classification_problem(
            cfg.classification_p, cfg.classification_p2, cfg.classification_n
        )
    elif cfg.kind == "binary_independent":
        problem = sources.conditionally_independent_problem(cfg.binary_spec)
    else:
        problem = sources.correlated_problem(cfg.binary_spec)

    ba_cells = []
    rows = []
    for d1, d2, ds in cells:
        row = {"d1": d1, "d2": d2, "ds": ds, "rate": None, "method": None,
               "converged": None, "cs_residual": None, "error": None}
        use_ba = cfg.method == "ba" or cfg.kind == "custom"
        if not use_ba:
            try:
                value, ok = closed_value(d1, d2, ds)
            except SemrdError as exc:
                row.update(method="closed_form", converged=False, error=str(exc))
                rows.append(row)
                continue
            if ok:
                row.update(rate=value, method="closed_form", converged=True)
            elif cfg.method == "closed_form":
                row.update(
                    method="closed_form",
                    converged=False,
                    error="RegionError: outside the closed form's proven region",
                )
            else:
                use_ba = True
        if use_ba:
            row["method"] = "ba"
            ba_cells.append((len(rows), RDQuery(d1, d2, ds)))
        rows.append(row)

    if ba_cells:
        for pos, query in ba_cells:
            try:
                point = solve_rd_point(problem, query, cfg.solver_options)
                rows[pos].update(
                    rate=point.rate, converged=point.converged, cs_residual=point.cs_residual
                )
            except SemrdError as exc:
                rows[pos].update(converged=False, error=f"{type(exc).__name__}: {exc}")
    yield from rows


def cmd_sweep(config_path: str, out_path: str) -> int:
    cfg = load_config(config_path)
    header = ("d1", "d2", "ds", "rate", "method", "converged", "cs_residual", "error")
    try:
        fh = open(out_path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write output {out_path!r}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in _sweep_rows(cfg):
            writer.writerow(
                [
                    _csv_value(row[k])
                    for k in header
                ]
            )
    return 0


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".9g")
    return v


def cmd_figure(figure_id, out_dir, grid, base, workers) -> int:
    manifest = generate_figure(figure_id, out_dir, grid_n=grid, base=base, workers=workers)
    files = ", ".join(f["name"] for f in manifest["files"])
    print(f"{figure_id}: wrote {files} + {figure_id}_manifest.json in {out_dir}")
    return 0


def cmd_verify(suite_name: str, as_json: bool) -> int:
    report = run_suite(suite_name)
    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for line in report.summary_lines():
            print(line)
    return 0 if report.passed else VERIFY_FAILURE


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "figure":
            return cmd_figure(args.figure_id, args.out, args.grid, args.base, args.workers)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out)
        if args.command == "verify":
            return cmd_verify(args.suite, args.json)
        raise AssertionError(args.command)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except SemrdError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
