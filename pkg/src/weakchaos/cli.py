"""Command-line experiment runner.

Subcommands cover the four experiment families (sensitivity tubes,
complexity curves, renewal statistics, asymptotic-order fits) plus a
`report` mode that renders figures next to the delimited output.  Every
run is fully determined by a flat key=value config file and/or flags
(flags win), and identical config+seed produces byte-identical CSVs.

Exit codes: 0 success, 2 config error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .asymptotics import MODEL_ORDER, fit_order, make_series
from .complexity import ESTIMATORS, orbit_information_curve
from .errors import ConfigError, WeakChaosError
from .maps import MapSpec, parse_map
from .recurrence import RenewalModel, visit_counts
from .rng import CounterRNG
from .sensitivity import sensitivity_curve

_CONFIG_KEYS = ("map", "x0", "n_grid", "eps", "estimator", "trials", "seed", "out")
_DEFAULTS = {
    "x0": "0.5",
    "n_grid": "10,100,1000,10000",
    "eps": "0.0625",
    "estimator": "lz",
    "trials": "100",
    "seed": "0",
    "out": "-",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved run parameters; the trailing CSV comment echoes these."""

    map: str
    x0: str
    n_grid: tuple[int, ...]
    eps: tuple[float, ...]
    estimator: str
    trials: int
    seed: int
    out: str

    def canonical_items(self):
        """(key, value-string) pairs in a fixed order for the comment line."""
        return (
            ("eps", ",".join(repr(e) for e in self.eps)),
            ("estimator", self.estimator),
            ("map", self.map),
            ("n_grid", ",".join(str(n) for n in self.n_grid)),
            ("out", self.out),
            ("seed", str(self.seed)),
            ("trials", str(self.trials)),
            ("x0", self.x0),
        )

    def comment_line(self) -> str:
        body = " ".join(f"{k}={v}" for k, v in self.canonical_items())
        return f"# config: {body}"


def load_config_file(path: str) -> dict:
    """Flat key=value lines; blank lines and #-comments are ignored."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _parse_n_grid(text: str) -> tuple[int, ...]:
    try:
        grid = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"n_grid must be comma-separated integers, got {text!r}")
    if not grid or any(n < 0 for n in grid):
        raise ConfigError(f"n_grid entries must be >= 0, got {text!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"n_grid must be strictly increasing, got {text!r}")
    return grid


def _parse_eps_list(text: str) -> tuple[float, ...]:
    try:
        eps = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"eps must be comma-separated reals, got {text!r}")
    if not eps or any(not 0.0 < e < 1.0 for e in eps):
        raise ConfigError(f"eps entries must lie in (0,1), got {text!r}")
    return eps


def _parse_int(name: str, text: str, minimum: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {text!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge config file and flags (flags win) into a validated config."""
    values = dict(_DEFAULTS)
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = str(flag)
    if "map" not in values:
        raise ConfigError("a map spec is required (--map or map= in the config)")
    config = ExperimentConfig(
        map=values["map"],
        x0=values["x0"],
        n_grid=_parse_n_grid(values["n_grid"]),
        eps=_parse_eps_list(values["eps"]),
        estimator=values["estimator"],
        trials=_parse_int("trials", values["trials"], 1),
        seed=_parse_int("seed", values["seed"], 0),
        out=values["out"],
    )
    if config.estimator not in ESTIMATORS:
        raise ConfigError(
            f"estimator must be one of {'/'.join(ESTIMATORS)}, got {config.estimator!r}"
        )
    parse_map(config.map)  # fail fast on a malformed map spec
    return config


def _x0_samples(config: ExperimentConfig) -> list[float]:
    """Fixed starting point, or `random:K` uniform draws on stream 0."""
    policy = config.x0.strip()
    if policy.startswith("random:"):
        count_text = policy[len("random:"):]
        count = _parse_int("x0 sample count", count_text, 1)
        return [float(u) for u in CounterRNG(config.seed, 0).uniform_block(0, count)]
    try:
        x0 = float(policy)
    except ValueError:
        raise ConfigError(f"x0 must be a real or random:<count>, got {policy!r}")
    if not 0.0 <= x0 <= 1.0:
        raise ConfigError(f"x0 must lie in [0,1], got {x0}")
    return [x0]


class _CsvSink:
    """Writes header, rows, and the config-echo comment to a path or stdout."""

    def __init__(self, out: str, header: list[str]):
        self._own = out != "-"
        self._fh = open(out, "w", encoding="utf-8", newline="") if self._own else sys.stdout
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(header)

    def row(self, values) -> None:
        self._writer.writerow(values)

    def close(self, config: ExperimentConfig) -> None:
        self._fh.write(config.comment_line() + "\n")
        if self._own:
            self._fh.close()


def _fmt(x: float) -> str:
    return repr(float(x))


def run_sensitivity(config: ExperimentConfig, out: str | None = None):
    """Tube radii per (x0, eps, n); returns the rows for reuse by report."""
    spec = parse_map(config.map)
    rows = []
    for x0 in _x0_samples(config):
        for eps in config.eps:
            result = sensitivity_curve(spec, x0, eps, list(config.n_grid))
            for n, r, big_r in zip(result.ns, result.inner, result.outer):
                rows.append((int(n), float(r), float(big_r), eps, x0, spec.label))
    sink = _CsvSink(out if out is not None else config.out,
                    ["n", "r", "R", "eps", "x0", "map"])
    for n, r, big_r, eps, x0, label in rows:
        sink.row([n, _fmt(r), _fmt(big_r), _fmt(eps), _fmt(x0), label])
    sink.close(config)
    return rows


def run_complexity(config: ExperimentConfig, out: str | None = None):
    """Estimated information per (x0, eps, n), with the per-step rate."""
    spec = parse_map(config.map)
    if config.estimator == "codec" and spec.kind != "plmanneville":
        raise ConfigError(
            f"the codec estimator needs a plmanneville map, got {config.map!r}"
        )
    rows = []
    for x0 in _x0_samples(config):
        for eps in config.eps:
            curve = orbit_information_curve(
                spec, x0, eps, list(config.n_grid), config.estimator, seed=config.seed
            )
            for n, bits in zip(curve.ns, curve.bits):
                rate = float(bits) / n if n > 0 else float("nan")
                rows.append((int(n), int(bits), config.estimator, eps, x0,
                             spec.label, rate))
    sink = _CsvSink(out if out is not None else config.out,
                    ["n", "bits", "estimator", "eps", "x0", "map", "rate"])
    for n, bits, estimator, eps, x0, label, rate in rows:
        sink.row([n, bits, estimator, _fmt(eps), _fmt(x0), label, _fmt(rate)])
    sink.close(config)
    return rows


def run_renewal(config: ExperimentConfig, out: str | None = None):
    """Zero-visit counts N_n per (trial, n) for the chain of the PL map."""
    spec = parse_map(config.map)
    if spec.kind != "plmanneville":
        raise ConfigError(
            f"renewal statistics need a plmanneville map, got {config.map!r}"
        )
    grid = config.n_grid
    if grid[0] < 1:
        raise ConfigError("renewal horizons must be >= 1")
    model = RenewalModel(spec.z, spec.a)
    counts = visit_counts(model, list(grid), config.trials, config.seed)
    sink = _CsvSink(out if out is not None else config.out,
                    ["trial", "n", "N_n", "z", "a", "seed"])
    for trial in range(config.trials):
        for j, n in enumerate(grid):
            sink.row([trial, n, int(counts[trial, j]),
                      _fmt(spec.z), _fmt(spec.a), config.seed])
    sink.close(config)
    return counts


def run_fit(args: argparse.Namespace) -> int:
    """Fit asymptotic order to one CSV column averaged per horizon."""
    allowed = None
    if args.models:
        allowed = tuple(part.strip() for part in args.models.split(","))
        unknown = [tag for tag in allowed if tag not in MODEL_ORDER]
        if unknown:
            raise ConfigError(
                f"unknown model families {unknown}; choose from {'/'.join(MODEL_ORDER)}"
            )
    column = args.column
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    try:
        with open(args.input, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(row for row in fh if not row.startswith("#"))
            if reader.fieldnames is None or "n" not in reader.fieldnames:
                raise ConfigError(f"{args.input} has no 'n' column")
            if column not in reader.fieldnames:
                raise ConfigError(f"{args.input} has no {column!r} column")
            for record in reader:
                n = int(record["n"])
                value = float(record[column])
                sums[n] = sums.get(n, 0.0) + value
                counts[n] = counts.get(n, 0) + 1
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}")
    ns = sorted(sums)
    values = [sums[n] / counts[n] for n in ns]
    order = fit_order(make_series(ns, values), allowed=allowed)
    report = {
        "column": column,
        "tag": order.tag,
        "parameters": dict(order.params),
        "stderr": dict(order.stderr),
        "residuals": {
            tag: (None if math.isinf(res) else res)
            for tag, res in order.residuals.items()
        },
        "n_range": [ns[0], ns[-1]],
        "points": len(ns),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


def run_report(config: ExperimentConfig) -> int:
    """All applicable experiments into a directory: CSVs plus figures."""
    from . import figures  # deferred: pulls in matplotlib

    if config.out == "-":
        raise ConfigError("report needs --out <directory>")
    os.makedirs(config.out, exist_ok=True)
    spec = parse_map(config.map)
    written = []

    sens_rows = run_sensitivity(config, out=os.path.join(config.out, "sensitivity.csv"))
    written.append("sensitivity.csv")
    series = {}
    for eps in config.eps:
        for key, pick in (("r", 1), ("R", 2)):
            per_n = {}
            for row in sens_rows:
                if row[3] == eps:
                    per_n.setdefault(row[0], []).append(row[pick])
            series[f"{key} eps={_fmt(eps)}"] = [
                float(np.mean(per_n[n])) for n in config.n_grid
            ]
    figures.save_curve_figure(
        os.path.join(config.out, "sensitivity.png"), config.n_grid, series,
        "n", "tube radius", f"orbit-tube radii: {spec.label}",
    )
    written.append("sensitivity.png")

    comp_rows = run_complexity(config, out=os.path.join(config.out, "complexity.csv"))
    written.append("complexity.csv")
    series = {}
    for eps in config.eps:
        per_n = {}
        for row in comp_rows:
            if row[3] == eps:
                per_n.setdefault(row[0], []).append(row[1])
        series[f"bits eps={_fmt(eps)}"] = [
            float(np.mean(per_n[n])) for n in config.n_grid
        ]
    figures.save_curve_figure(
        os.path.join(config.out, "complexity.png"), config.n_grid, series,
        "n", f"{config.estimator} bits", f"orbit information: {spec.label}",
    )
    written.append("complexity.png")

    if spec.kind == "plmanneville" and config.n_grid[0] >= 1:
        counts = run_renewal(config, out=os.path.join(config.out, "renewal.csv"))
        written.append("renewal.csv")
        mean_counts = counts.mean(axis=0)
        figures.save_curve_figure(
            os.path.join(config.out, "renewal.png"), config.n_grid,
            {"mean N_n": mean_counts.tolist()},
            "n", "mean zero visits", f"renewal growth: {spec.label}",
        )
        written.append("renewal.png")

    for name in written:
        print(os.path.join(config.out, name))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakchaos",
        description="Numerical experiments for weakly chaotic interval maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--map", help="map spec, e.g. plmanneville:z=3,a=0.5")
        p.add_argument("--x0", help="starting point, a real or random:<count>")
        p.add_argument("--n-grid", dest="n_grid",
                       help="comma-separated strictly increasing horizons")
        p.add_argument("--eps", help="comma-separated accuracies in (0,1)")
        p.add_argument("--estimator", help="complexity estimator: codec or lz")
        p.add_argument("--trials", help="Monte-Carlo trial count")
        p.add_argument("--seed", help="base RNG seed")
        p.add_argument("--out", help="output CSV path, or - for stdout")

    for name, blurb in (
        ("sensitivity", "inner/outer tube radii along the horizon grid"),
        ("complexity", "compression-estimated orbit information"),
        ("renewal", "zero-visit counts of the recurrence chain"),
        ("report", "all applicable experiments plus rendered figures"),
    ):
        add_run_flags(sub.add_parser(name, help=blurb))

    fit = sub.add_parser("fit", help="fit an asymptotic order class to a CSV column")
    fit.add_argument("input", help="CSV produced by another subcommand")
    fit.add_argument("--column", default="bits", help="value column (default bits)")
    fit.add_argument("--models", help="comma-separated family subset to consider")
    fit.add_argument("--out", help="JSON report path, or - for stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fit":
            return run_fit(args)
        config = resolve_config(args)
        if args.command == "sensitivity":
            run_sensitivity(config)
        elif args.command == "complexity":
            run_complexity(config)
        elif args.command == "renewal":
            run_renewal(config)
        else:
            return run_report(config)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (WeakChaosError, ValueError, OverflowError, ZeroDivisionError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
