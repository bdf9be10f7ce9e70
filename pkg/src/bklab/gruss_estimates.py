"""Two-point Gruss-Voronovskaya bounds for the Kantorovich operator.

Evaluates both sides of the semi-discrete estimate (a divided-difference
correction plus a second-moment term against a bracket of moduli of
continuity), its perturbed variant without the second-moment subtraction,
and the pointwise O(1/n) approximation bound, then sweeps grids of (x, y)
pairs into pass/fail records.

The right-hand side defaults to lower-bound estimators for the moduli and
uniform norms, so a recorded pass certifies the underlying inequality on the
sampled points; upper-bound modes exist for tightness diagnostics only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .function_space import (
    DEFAULT_GRID,
    DEFAULT_PAIR_FLOOR,
    GridSpec,
    SmoothFunction,
    derivative_function,
    divided_difference,
    modulus_lower,
    modulus_upper,
    product,
    sup_norm_lower,
)
from .kantorovich_operator import (
    DEFAULT_RULE,
    QuadratureRule,
    kantorovich_grid,
    kantorovich_value,
)

__all__ = [
    "DEFAULT_TAU",
    "BoundCheckRecord",
    "EstimateConfig",
    "ah_bound_check",
    "check_perturbed",
    "check_theorem",
    "e_n",
    "f_n",
    "perturbed_gruss_lhs",
    "perturbed_gruss_rhs",
    "theorem_lhs",
    "theorem_rhs",
]

#: Slack absorbing quadrature and summation rounding in pass verdicts; the
#: worst case accumulated error stays near 1e-11 for n <= 4096.
DEFAULT_TAU = 1e-9

_OMEGA_MODES = ("lower", "upper")
_NORM_MODES = ("grid_lower", "analytic_upper")


@dataclass(frozen=True)
class EstimateConfig:
    """Estimator choices for the right-hand sides of the checks."""

    tau_check: float = DEFAULT_TAU
    omega_mode: str = "lower"
    norm_mode: str = "grid_lower"

    def __post_init__(self) -> None:
        if self.tau_check < 0:
            raise ValueError(f"tau_check must be nonnegative, got {self.tau_check}")
        if self.omega_mode not in _OMEGA_MODES:
            raise ValueError(f"omega_mode must be one of {_OMEGA_MODES}, got {self.omega_mode!r}")
        if self.norm_mode not in _NORM_MODES:
            raise ValueError(f"norm_mode must be one of {_NORM_MODES}, got {self.norm_mode!r}")


@dataclass(frozen=True)
class BoundCheckRecord:
    """One inequality evaluation at (n, x, y)."""

    n: int
    x: float
    y: float
    lhs: float
    rhs: float
    slack: float
    passed: bool


def _make_record(n: int, x: float, y: float, lhs: float, rhs: float, tau: float) -> BoundCheckRecord:
    return BoundCheckRecord(
        n=n, x=x, y=y, lhs=lhs, rhs=rhs, slack=rhs - lhs, passed=lhs <= rhs + tau
    )


def _require_degree(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")


def _require_unit_interval(**named) -> None:
    for label, value in named.items():
        arr = np.asarray(value, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError(f"{label} must lie in [0, 1], got {value}")


def f_n(n: int, x):
    """Second-moment correction (x(1-x)(n-1) + 1/3) / (n+1)^2; O(1/n) uniformly."""
    _require_degree(n)
    _require_unit_interval(x=x)
    return (x * (1.0 - x) * (n - 1) + 1.0 / 3.0) / (n + 1) ** 2


def e_n(n: int, x, y):
    """f_n(n, x) plus the two-point tilt (x-y)(1-2x) / (2(n+1))."""
    _require_degree(n)
    _require_unit_interval(x=x, y=y)
    return f_n(n, x) + (x - y) * (1.0 - 2.0 * x) / (2.0 * (n + 1))


def _omega_second(h: SmoothFunction, delta: float, grid: GridSpec, mode: str) -> float:
    """Modulus of continuity of h'' at step delta, per the configured estimator."""
    if mode == "lower":
        return modulus_lower(h.derivative(2), delta, grid)
    return modulus_upper(derivative_function(h, 2), delta)


def _sup_norm(h: SmoothFunction, grid: GridSpec, mode: str) -> float:
    if mode == "grid_lower":
        return sup_norm_lower(h, grid)
    return h.norm_bounds[0]


def theorem_lhs(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    x: float,
    y: float,
    rule: QuadratureRule = DEFAULT_RULE,
    pair_floor: float = DEFAULT_PAIR_FLOOR,
) -> float:
    """|K_n(fg) - K_n(f)K_n(g) + (x-y)(1-2x)/(2(n+1)) ([x,y;f][x,y;g] - f'g') - f_n f'g'| at x."""
    _require_degree(n)
    _require_unit_interval(x=x, y=y)
    fg = product(f, g)
    kf = kantorovich_value(f, n, x, rule)
    kg = kantorovich_value(g, n, x, rule)
    kfg = kantorovich_value(fg, n, x, rule)
    ddf = divided_difference(f, x, y, pair_floor)
    ddg = divided_difference(g, x, y, pair_floor)
    fpgp = float(f.eval_k(x, 1)) * float(g.eval_k(x, 1))
    tilt = (x - y) * (1.0 - 2.0 * x) / (2.0 * (n + 1))
    return abs(kfg - kf * kg + tilt * (ddf * ddg - fpgp) - f_n(n, x) * fpgp)


def _modulus_step(n: int, separation: float) -> float:
    # The modulus argument |x-y| + 2 sqrt(6)/sqrt(n+1) saturates at 1 because
    # the modulus over [0, 1] is constant beyond step 1; clipping is exact.
    return min(separation + 2.0 * math.sqrt(6.0) / math.sqrt(n + 1.0), 1.0)


def _bracket(n: int, x: float, separation: float) -> float:
    return f_n(n, x) + separation / (math.sqrt(3.0) * math.sqrt(n + 1.0))


def theorem_rhs(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    x: float,
    y: float,
    grid: GridSpec = DEFAULT_GRID,
    cfg: EstimateConfig = EstimateConfig(),
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """Bracket times the three second-derivative moduli, plus the error product.

    With the default lower estimators the result is a lower bound of the true
    right-hand side, keeping pass verdicts sound.
    """
    _require_degree(n)
    _require_unit_interval(x=x, y=y)
    fg = product(f, g)
    sep = abs(x - y)
    delta = _modulus_step(n, sep)
    moduli = (
        _omega_second(fg, delta, grid, cfg.omega_mode)
        + _sup_norm(g, grid, cfg.norm_mode) * _omega_second(f, delta, grid, cfg.omega_mode)
        + _sup_norm(f, grid, cfg.norm_mode) * _omega_second(g, delta, grid, cfg.omega_mode)
    )
    err_f = abs(kantorovich_value(f, n, x, rule) - float(f(x)))
    err_g = abs(kantorovich_value(g, n, x, rule) - float(g(x)))
    return _bracket(n, x, sep) * moduli + err_f * err_g


def perturbed_gruss_lhs(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    x: float,
    y: float,
    rule: QuadratureRule = DEFAULT_RULE,
    pair_floor: float = DEFAULT_PAIR_FLOOR,
) -> float:
    """Same as theorem_lhs but without subtracting the f_n f'g' term."""
    _require_degree(n)
    _require_unit_interval(x=x, y=y)
    fg = product(f, g)
    kf = kantorovich_value(f, n, x, rule)
    kg = kantorovich_value(g, n, x, rule)
    kfg = kantorovich_value(fg, n, x, rule)
    ddf = divided_difference(f, x, y, pair_floor)
    ddg = divided_difference(g, x, y, pair_floor)
    fpgp = float(f.eval_k(x, 1)) * float(g.eval_k(x, 1))
    tilt = (x - y) * (1.0 - 2.0 * x) / (2.0 * (n + 1))
    return abs(kfg - kf * kg + tilt * (ddf * ddg - fpgp))


def perturbed_gruss_rhs(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    x: float,
    y: float,
    grid: GridSpec = DEFAULT_GRID,
    cfg: EstimateConfig = EstimateConfig(),
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """theorem_rhs plus the absorbed correction f_n(x) |f'(x) g'(x)|."""
    fpgp = float(f.eval_k(x, 1)) * float(g.eval_k(x, 1))
    return theorem_rhs(f, g, n, x, y, grid, cfg, rule) + f_n(n, x) * abs(fpgp)


def _pair_records(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    grid: GridSpec,
    cfg: EstimateConfig,
    rule: QuadratureRule,
    perturbed: bool,
) -> list[BoundCheckRecord]:
    """Evaluate one inequality over all admissible ordered grid pairs (x, y)."""
    xs = grid.points()
    fg = product(f, g)
    kf = kantorovich_grid(f, n, xs, rule)
    kg = kantorovich_grid(g, n, xs, rule)
    kfg = kantorovich_grid(fg, n, xs, rule)
    fv = np.asarray(f(xs), dtype=float)
    gv = np.asarray(g(xs), dtype=float)
    f1 = np.asarray(f.eval_k(xs, 1), dtype=float)
    g1 = np.asarray(g.eval_k(xs, 1), dtype=float)
    fpgp = f1 * g1
    fn = f_n(n, xs)
    gruss = kfg - kf * kg
    err_product = np.abs(kf - fv) * np.abs(kg - gv)
    norm_f = _sup_norm(f, grid, cfg.norm_mode)
    norm_g = _sup_norm(g, grid, cfg.norm_mode)

    dx = xs[:, None] - xs[None, :]
    absdx = np.abs(dx)
    admissible = absdx >= grid.pair_floor
    with np.errstate(divide="ignore", invalid="ignore"):
        ddf = (fv[:, None] - fv[None, :]) / dx
        ddg = (gv[:, None] - gv[None, :]) / dx
    tilt = dx * ((1.0 - 2.0 * xs) / (2.0 * (n + 1)))[:, None]
    core = gruss[:, None] + tilt * (ddf * ddg - fpgp[:, None])
    if not perturbed:
        core = core - (fn * fpgp)[:, None]
    lhs = np.abs(core)

    shift = 2.0 * math.sqrt(6.0) / math.sqrt(n + 1.0)
    delta = np.minimum(absdx + shift, 1.0)
    bracket = fn[:, None] + absdx / (math.sqrt(3.0) * math.sqrt(n + 1.0))
    # The grid is uniform, so only a handful of distinct steps occur; compute
    # each modulus triple once.
    moduli = np.zeros_like(delta)
    for step in np.unique(delta[admissible]):
        total = (
            _omega_second(fg, float(step), grid, cfg.omega_mode)
            + norm_g * _omega_second(f, float(step), grid, cfg.omega_mode)
            + norm_f * _omega_second(g, float(step), grid, cfg.omega_mode)
        )
        moduli[delta == step] = total
    rhs = bracket * moduli + err_product[:, None]
    if perturbed:
        rhs = rhs + (fn * np.abs(fpgp))[:, None]

    tau = cfg.tau_check
    records = []
    for i in range(grid.point_count):
        for j in range(grid.point_count):
            if admissible[i, j]:
                records.append(
                    _make_record(n, float(xs[i]), float(xs[j]), float(lhs[i, j]), float(rhs[i, j]), tau)
                )
    return records


def check_theorem(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    grid: GridSpec = DEFAULT_GRID,
    cfg: EstimateConfig = EstimateConfig(),
    rule: QuadratureRule = DEFAULT_RULE,
) -> list[BoundCheckRecord]:
    """Sweep the two-point estimate over all grid pairs with |x - y| >= pair_floor.

    Pairs below the floor (including x = y, which the estimate excludes) are
    skipped, not errored.
    """
    _require_degree(n)
    return _pair_records(f, g, n, grid, cfg, rule, perturbed=False)


def check_perturbed(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    grid: GridSpec = DEFAULT_GRID,
    cfg: EstimateConfig = EstimateConfig(),
    rule: QuadratureRule = DEFAULT_RULE,
) -> list[BoundCheckRecord]:
    """Pair sweep of the perturbed estimate (no second-moment subtraction)."""
    _require_degree(n)
    return _pair_records(f, g, n, grid, cfg, rule, perturbed=True)


def ah_bound_check(
    h: SmoothFunction,
    n: int,
    grid: GridSpec = DEFAULT_GRID,
    rule: QuadratureRule = DEFAULT_RULE,
    tau_check: float = DEFAULT_TAU,
) -> list[BoundCheckRecord]:
    """Pointwise check |K_n(h) - h| <= sup|h'|/(2n) + 8 sup|h''|/(9n) on the grid.

    The right side uses the analytic norm bounds, so the checked inequality is
    a weaker-but-valid instance of the O(1/n) approximation estimate.
    """
    _require_degree(n)
    xs = grid.points()
    kh = kantorovich_grid(h, n, xs, rule)
    hv = np.asarray(h(xs), dtype=float)
    rhs = h.norm_bounds[1] / (2.0 * n) + 8.0 * h.norm_bounds[2] / (9.0 * n)
    return [
        _make_record(n, float(x), float(x), float(abs(k - v)), rhs, tau_check)
        for x, k, v in zip(xs, kh, hv)
    ]
