"""Command-line front end: sweep orchestration and CSV/JSON report emission.

Commands: verify (two-point estimate sweep), perturbed (variant without the
second-moment subtraction), ah (pointwise O(1/n) bound), rates (n-sweep with
a log-log fit), corpus (list the test functions). Exit status is 0 only when
every emitted check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .asymptotics import SweepResult, run_sweep
from .function_space import GridSpec, corpus, corpus_member
from .gruss_estimates import (
    BoundCheckRecord,
    EstimateConfig,
    ah_bound_check,
    check_perturbed,
    check_theorem,
)
from .kantorovich_operator import DEFAULT_RULE

__all__ = [
    "ConfigError",
    "ReportSummary",
    "RunConfig",
    "main",
    "parse_config",
    "run",
    "write_records",
]

COMMANDS = ("verify", "perturbed", "ah", "rates", "corpus")

_RESIDUAL_LONG = {"gv": "gv_residual", "gruss": "gruss_norm", "nfn": "nfn_limit"}
_NORM_LONG = {"grid": "grid_lower", "analytic": "analytic_upper"}
# Rate gates compare w(n)*sup(n) against the first sweep point; the weight is
# the reciprocal of the claimed order.
_RATE_WEIGHTS = {"gv": lambda n: n**0.5, "gruss": float, "nfn": float}

_FILE_KEYS = (
    "first",
    "second",
    "n_values",
    "grid_points",
    "pair_floor",
    "tau_check",
    "omega_mode",
    "norm_mode",
    "residual",
    "max_ratio",
    "output_path",
    "output_format",
)


class ConfigError(ValueError):
    """Raised for malformed or unresolvable run configuration."""


@dataclass
class RunConfig:
    command: str
    function_names: list[str] = field(default_factory=list)
    n_values: list[int] = field(default_factory=list)
    grid_points: int = 33
    pair_floor: float = 1e-3
    tau_check: float = 1e-9
    omega_mode: str = "lower"
    norm_mode: str = "grid_lower"
    residual: str = "gv"
    max_ratio: float | None = None
    output_path: str = ""
    output_format: str = "csv"


@dataclass(frozen=True)
class ReportSummary:
    total_checks: int
    passes: int
    min_slack: float
    max_lhs: float
    elapsed_seconds: float


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bklab",
        description="Verification sweeps for the Bernstein-Kantorovich operator estimates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "sweep the two-point Gruss-Voronovskaya estimate over grid pairs",
        "perturbed": "sweep the perturbed Gruss estimate over grid pairs",
        "ah": "check the pointwise O(1/n) approximation bound on the grid",
        "rates": "run an n-sweep of a residual and fit its empirical rate",
        "corpus": "list the test-function corpus",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("-f", "--first", default=None, help="first corpus function")
        sp.add_argument("-g", "--second", default=None, help="second corpus function")
        sp.add_argument(
            "-n", "--n-values", dest="n_values", default=None, help="comma-separated degrees"
        )
        sp.add_argument("--grid", dest="grid_points", default=None, help="grid point count")
        sp.add_argument("--pair-floor", dest="pair_floor", default=None)
        sp.add_argument("--tau", dest="tau_check", default=None, help="pass slack")
        sp.add_argument("--omega", dest="omega_mode", choices=("lower", "upper"), default=None)
        sp.add_argument("--norm", dest="norm_mode", choices=("grid", "analytic"), default=None)
        sp.add_argument("--residual", choices=tuple(_RESIDUAL_LONG), default=None)
        sp.add_argument("--max-ratio", dest="max_ratio", default=None, help="rate gate headroom")
        sp.add_argument("-o", "--output", dest="output_path", default=None)
        sp.add_argument("--format", dest="output_format", choices=("csv", "json"), default=None)
        sp.add_argument("--config", dest="config_path", default=None, help="JSON key-value file")
    return parser


def _to_int(key: str, value) -> int:
    try:
        out = int(str(value))
    except ValueError:
        raise ConfigError(f"{key}: could not parse {value!r} as an integer") from None
    return out


def _to_float(key: str, value) -> float:
    try:
        return float(str(value))
    except ValueError:
        raise ConfigError(f"{key}: could not parse {value!r} as a number") from None


def _to_n_values(key: str, value) -> list[int]:
    if isinstance(value, (list, tuple)):
        raw = list(value)
    else:
        raw = [part for part in str(value).split(",") if part.strip()]
    ns = []
    for item in raw:
        n = _to_int(key, item)
        if n < 1:
            raise ConfigError(f"{key}: degrees must be positive, got {n}")
        ns.append(n)
    if not ns:
        raise ConfigError(f"{key}: empty degree list")
    return sorted(set(ns))


def _resolve_name(key: str, value: str) -> str:
    try:
        return corpus_member(value).name
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--config: {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"--config: {path} must hold a flat JSON object")
    for key in data:
        if key not in _FILE_KEYS:
            raise ConfigError(f"--config: unknown key {key!r} in {path}")
    return data


_DEFAULT_N = {
    "verify": [1, 2, 4, 8, 16, 32, 64],
    "perturbed": [1, 2, 4, 8, 16, 32, 64],
    "ah": [1, 2, 4, 8, 16, 32, 64],
    "rates": [8, 16, 32, 64, 128, 256, 512, 1024],
    "corpus": [1],
}


def parse_config(argv: list[str]) -> RunConfig:
    """Resolve flags, optional JSON config file, and defaults into a RunConfig.

    A flag always overrides the corresponding file key.
    """
    ns = _build_parser().parse_args(argv)
    file_cfg = _load_config_file(ns.config_path) if ns.config_path else {}

    def pick(key: str, default=None):
        flag = getattr(ns, key, None)
        if flag is not None:
            return flag
        if key in file_cfg:
            return file_cfg[key]
        return default

    command = ns.command
    config = RunConfig(command=command)

    first = pick("first")
    second = pick("second")
    names = []
    if first is not None:
        names.append(_resolve_name("--first", str(first)))
    if second is not None:
        names.append(_resolve_name("--second", str(second)))
    needs_pair = command in ("verify", "perturbed") or (
        command == "rates" and pick("residual", "gv") != "nfn"
    )
    if needs_pair and len(names) != 2:
        raise ConfigError(f"{command}: both --first and --second are required")
    if command == "ah" and not names:
        raise ConfigError("ah: --first is required")
    config.function_names = names

    raw_n = pick("n_values")
    config.n_values = (
        _to_n_values("--n-values", raw_n) if raw_n is not None else list(_DEFAULT_N[command])
    )

    grid_default = 4097 if command == "rates" else 33
    config.grid_points = _to_int("--grid", pick("grid_points", grid_default))
    if config.grid_points < 2:
        raise ConfigError(f"--grid: need at least 2 points, got {config.grid_points}")
    config.pair_floor = _to_float("--pair-floor", pick("pair_floor", 1e-3))
    if not 0.0 < config.pair_floor < 1.0:
        raise ConfigError(f"--pair-floor: must lie in (0, 1), got {config.pair_floor}")
    config.tau_check = _to_float("--tau", pick("tau_check", 1e-9))
    if config.tau_check < 0:
        raise ConfigError(f"--tau: must be nonnegative, got {config.tau_check}")

    omega = str(pick("omega_mode", "lower"))
    if omega not in ("lower", "upper"):
        raise ConfigError(f"--omega: must be lower or upper, got {omega!r}")
    config.omega_mode = omega

    norm = str(pick("norm_mode", "grid"))
    norm = _NORM_LONG.get(norm, norm)
    if norm not in _NORM_LONG.values():
        raise ConfigError(f"--norm: must be grid or analytic, got {norm!r}")
    config.norm_mode = norm

    residual = str(pick("residual", "gv"))
    short = {v: k for k, v in _RESIDUAL_LONG.items()}.get(residual, residual)
    if short not in _RESIDUAL_LONG:
        raise ConfigError(f"--residual: must be one of gv, gruss, nfn, got {residual!r}")
    config.residual = short

    raw_ratio = pick("max_ratio")
    if raw_ratio is not None:
        config.max_ratio = _to_float("--max-ratio", raw_ratio)
        if config.max_ratio <= 0:
            raise ConfigError(f"--max-ratio: must be positive, got {config.max_ratio}")

    fmt = str(pick("output_format", "csv"))
    if fmt not in ("csv", "json"):
        raise ConfigError(f"--format: must be csv or json, got {fmt!r}")
    config.output_format = fmt

    default_path = "" if command == "corpus" else (
        f"rates_sweep.{fmt}" if command == "rates" else f"{command}_records.{fmt}"
    )
    config.output_path = str(pick("output_path", default_path))
    return config


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _record_rows(records: list[BoundCheckRecord]) -> list[str]:
    return [
        f"{r.n},{_fmt(r.x)},{_fmt(r.y)},{_fmt(r.lhs)},{_fmt(r.rhs)},{_fmt(r.slack)},"
        f"{'true' if r.passed else 'false'}"
        for r in records
    ]


def write_records(records, output_format: str = "csv", path: str = "") -> None:
    """Write check records or a rate sweep to CSV or JSON.

    CSV check columns are exactly n,x,y,lhs,rhs,slack,pass with 17-significant-
    digit reals; sweeps use residual,n,sup_value, with the fit as a trailing
    JSON object in JSON mode.
    """
    if isinstance(records, SweepResult):
        sweep = records
        if output_format == "csv":
            lines = ["residual,n,sup_value"]
            lines += [f"{sweep.residual_name},{n},{_fmt(s)}" for n, s in sweep.points]
            text = "\n".join(lines) + "\n"
        else:
            payload = [
                {"residual": sweep.residual_name, "n": n, "sup_value": s}
                for n, s in sweep.points
            ]
            payload.append(
                {"slope": sweep.slope, "intercept": sweep.intercept, "r_squared": sweep.r_squared}
            )
            text = json.dumps(payload, indent=2) + "\n"
    else:
        if output_format == "csv":
            lines = ["n,x,y,lhs,rhs,slack,pass"]
            lines += _record_rows(records)
            text = "\n".join(lines) + "\n"
        else:
            payload = [
                {
                    "n": r.n,
                    "x": r.x,
                    "y": r.y,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "slack": r.slack,
                    "pass": r.passed,
                }
                for r in records
            ]
            text = json.dumps(payload, indent=2) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _write_corpus(output_format: str, path: str) -> None:
    members = corpus()
    if output_format == "csv":
        lines = ["name,norm_bound_0,norm_bound_1,norm_bound_2,norm_bound_3"]
        lines += [
            f"{m.name},{_fmt(m.norm_bounds[0])},{_fmt(m.norm_bounds[1])},"
            f"{_fmt(m.norm_bounds[2])},{_fmt(m.norm_bounds[3])}"
            for m in members
        ]
        text = "\n".join(lines) + "\n"
    else:
        payload = [
            {"name": m.name, "norm_bounds": list(m.norm_bounds)} for m in members
        ]
        text = json.dumps(payload, indent=2) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def run(config: RunConfig) -> ReportSummary:
    """Execute the configured sweep, write the record file, print a summary."""
    start = time.perf_counter()
    grid = GridSpec(point_count=config.grid_points, pair_floor=config.pair_floor)
    cfg = EstimateConfig(
        tau_check=config.tau_check, omega_mode=config.omega_mode, norm_mode=config.norm_mode
    )
    rule = DEFAULT_RULE
    functions = [corpus_member(name) for name in config.function_names]
    lines: list[str] = [f"command: {config.command}"]
    if functions:
        lines.append(f"functions: {', '.join(f.name for f in functions)}")

    if config.command in ("verify", "perturbed", "ah"):
        records: list[BoundCheckRecord] = []
        for n in config.n_values:
            if config.command == "verify":
                records.extend(check_theorem(functions[0], functions[1], n, grid, cfg, rule))
            elif config.command == "perturbed":
                records.extend(check_perturbed(functions[0], functions[1], n, grid, cfg, rule))
            else:
                for h in functions:
                    records.extend(ah_bound_check(h, n, grid, rule, config.tau_check))
        write_records(records, config.output_format, config.output_path)
        total = len(records)
        passes = sum(1 for r in records if r.passed)
        min_slack = min((r.slack for r in records), default=0.0)
        max_lhs = max((r.lhs for r in records), default=0.0)
        lines.append(f"n values: {', '.join(str(n) for n in config.n_values)}")
        lines.append(f"checks: {total}  passes: {passes}  failures: {total - passes}")
        lines.append(f"min slack: {_fmt(min_slack)}")
        lines.append(f"max lhs: {_fmt(max_lhs)}")
        lines.append(f"records: {config.output_path}")
    elif config.command == "rates":
        f = functions[0] if functions else None
        g = functions[1] if len(functions) > 1 else None
        sweep = run_sweep(
            _RESIDUAL_LONG[config.residual], f, g, config.n_values, grid, rule
        )
        write_records(sweep, config.output_format, config.output_path)
        total = len(sweep.points)
        if config.max_ratio is None or sweep.identically_zero:
            passes = total
        else:
            weight = _RATE_WEIGHTS[config.residual]
            n0, s0 = sweep.points[0]
            base = weight(n0) * s0
            passes = sum(
                1 for n, s in sweep.points if weight(n) * s <= config.max_ratio * base
            )
        max_lhs = max((s for _, s in sweep.points), default=0.0)
        min_slack = 0.0
        lines.append(f"residual: {sweep.residual_name}")
        lines.append(
            f"fit: slope={_fmt(sweep.slope)} intercept={_fmt(sweep.intercept)} "
            f"r_squared={_fmt(sweep.r_squared)}"
        )
        if config.max_ratio is not None:
            lines.append(f"gate: {passes}/{total} points within ratio {config.max_ratio:g}")
        lines.append(f"records: {config.output_path}")
    else:  # corpus
        members = corpus()
        total = passes = len(members)
        min_slack = max_lhs = 0.0
        for m in members:
            lines.append(
                f"  {m.name}: norm bounds "
                f"({m.norm_bounds[0]:g}, {m.norm_bounds[1]:g}, "
                f"{m.norm_bounds[2]:g}, {m.norm_bounds[3]:g})"
            )
        if config.output_path:
            _write_corpus(config.output_format, config.output_path)
            lines.append(f"records: {config.output_path}")

    elapsed = time.perf_counter() - start
    lines.append(f"elapsed: {elapsed:.3f} s")
    print("\n".join(lines))
    return ReportSummary(
        total_checks=total,
        passes=passes,
        min_slack=min_slack,
        max_lhs=max_lhs,
        elapsed_seconds=elapsed,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        summary = run(config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if summary.passes == summary.total_checks else 1


def entrypoint() -> None:  # pragma: no cover - console script shim
    sys.exit(main())
