"""Command-line front end: ``bankqf run | list | validate | sweep``.

Exit codes: 0 success, 1 validation failure, 2 config or scenario error,
3 I/O error. Errors print a single line to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bankmodel, config, scenarios, validate
from .bankmodel import ConfigurationError, QFSeries, QuadratureConfig, TimeGrid
from .scenarios import ScenarioNotFound, ScenarioSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

SWEEP_PARAMS = {
    "mu_acm": ("coupling", "mu_acm"),
    "mu_cm": ("coupling", "mu_cm"),
    "lambda1": ("bank1", "lam"),
    "lambda2": ("bank2", "lam"),
    "omega1": ("bank1", "omega"),
    "omega2": ("bank2", "omega"),
    "Omega1": ("bank1", "Omega"),
    "Omega2": ("bank2", "Omega"),
    "N1": ("bank1", "N"),
    "N2": ("bank2", "N"),
}
METRICS = ("tail-mean", "tail-amplitude", "final-value")


class UsageError(Exception):
    """Bad command-line values; reported with the config exit code."""


# ---------------------------------------------------------------------------
# CSV


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def format_csv(series: QFSeries) -> str:
    buf = io.StringIO()
    buf.write(",".join(QFSeries.COLUMNS) + "\n")
    for row in zip(*series.columns()):
        buf.write(",".join(_fmt(float(v)) for v in row) + "\n")
    return buf.getvalue()


def read_csv(path) -> dict[str, np.ndarray]:
    """Parse a CSV written by ``run`` back into named columns."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in r] for r in reader if r]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def _write_text(path, text: str) -> None:
    # newline="" keeps "\n" on every platform so outputs stay byte-identical
    with open(path, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# SVG


def write_svg(series: QFSeries, path, title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "bankqf", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(series.times, series.n1, linestyle=":", color="k", label="n1(t)")
        ax.plot(series.times, series.n2, linestyle="-", color="k", label="n2(t)")
        ax.set_xlabel("t")
        ax.set_ylabel("QF")
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)


# ---------------------------------------------------------------------------
# helpers


def _quad(args) -> QuadratureConfig:
    if args.quad_refine is None:
        return QuadratureConfig()
    return QuadratureConfig(refine=args.quad_refine)


def _source(args) -> ScenarioSpec:
    if args.config is not None:
        return config.load(args.config)
    return scenarios.get(args.scenario)


def _grid(spec: ScenarioSpec, t_max: float | None, points: int | None) -> TimeGrid:
    return TimeGrid(
        spec.grid.t_max if t_max is None else t_max,
        spec.grid.points if points is None else points,
    )


def _with_param(spec: ScenarioSpec, param: str, value: float) -> ScenarioSpec:
    part, attr = SWEEP_PARAMS[param]
    model = spec.model
    model = replace(model, **{part: replace(getattr(model, part), **{attr: value})})
    return replace(spec, model=model)


def sweep_metric(series: QFSeries, qf: str, metric: str) -> float:
    x = series.n1 if qf == "n1" else series.n2
    if metric == "tail-mean":
        return scenarios.tail_mean(x, series)
    if metric == "tail-amplitude":
        return scenarios.tail_amplitude(x, series)
    return float(x[-1])


# ---------------------------------------------------------------------------
# commands


def cmd_run(args) -> int:
    spec = _source(args)
    grid = _grid(spec, args.t_max, args.steps)
    result = scenarios.run(spec, _quad(args), grid)
    _write_text(args.out, format_csv(result.series))
    if args.svg:
        write_svg(result.series, args.svg, spec.name)
    tags = " ".join(f"{t}={'pass' if ok else 'FAIL'}" for t, ok in result.report.items())
    print(f"{spec.name}: {grid.points} rows -> {args.out}" + (f"; {tags}" if tags else ""))
    return EXIT_OK


def cmd_list(args) -> int:
    specs = scenarios.registry()
    if args.dump:
        out = Path(args.dump)
        out.mkdir(parents=True, exist_ok=True)
        for s in specs:
            _write_text(out / f"{s.name}.cfg", config.dumps(s))
    width = max(len(s.name) for s in specs)
    for s in specs:
        print(f"{s.name:<{width}}  {','.join(s.tags)}")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validate.run_validation(_quad(args))
    print(validate.format_report(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError(f"--steps must be at least 2, got {args.steps}")
    if args.start > args.stop:
        raise UsageError(f"--from ({args.start}) must not exceed --to ({args.stop})")
    if args.param in ("N1", "N2") and not (0.0 <= args.start and args.stop <= 1.0):
        raise UsageError(f"{args.param} sweep must stay within [0, 1]")
    base = _source(args)
    grid = _grid(base, args.t_max, args.grid_points)
    quad = _quad(args)
    lines = ["value,metric"]
    for value in np.linspace(args.start, args.stop, args.steps):
        spec = _with_param(base, args.param, float(value))
        series = bankmodel.quantum_functions(spec.model, grid, quad)
        lines.append(f"{_fmt(float(value))},{_fmt(sweep_metric(series, args.qf, args.metric))}")
    _write_text(args.out, "\n".join(lines) + "\n")
    print(f"sweep {args.param} over {args.steps} values ({args.metric} of {args.qf}) -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _even_refine(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0 or value % 2:
        raise argparse.ArgumentTypeError(f"must be a positive even integer, got {value}")
    return value


def _add_source(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario", help="registry preset name (see `bankqf list`)")
    group.add_argument("--config", help="scenario config file")


def _add_quad(p):
    p.add_argument(
        "--quad-refine",
        type=_even_refine,
        default=None,
        help="Simpson subintervals per output step (default: automatic)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bankqf", description="Quantum Functions of two interacting banks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compute one scenario and write CSV (and optionally SVG)")
    _add_source(p)
    p.add_argument("--t-max", type=float, default=None, help="override the end time")
    p.add_argument("--steps", type=int, default=None, help="override the number of grid points")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", default=None, help="optional SVG plot path")
    _add_quad(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("list", help="print preset names and tags")
    p.add_argument("--dump", default=None, metavar="DIR", help="also write every preset as DIR/<name>.cfg")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("validate", help="run the self-check suite")
    _add_quad(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="scan one parameter and record a tail metric")
    _add_source(p)
    p.add_argument("--param", required=True, choices=sorted(SWEEP_PARAMS))
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=11, help="number of parameter values")
    p.add_argument("--metric", choices=METRICS, default="tail-amplitude")
    p.add_argument("--qf", choices=("n1", "n2"), default="n1")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_quad(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except (ScenarioNotFound, config.ConfigError, ConfigurationError, UsageError) as exc:
        print(f"bankqf: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"bankqf: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
