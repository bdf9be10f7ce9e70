"""Convergence-rate sweeps for the operator residuals.

Each residual is maximized over an x-grid for a ladder of degrees n, then the
(n, sup) series is fitted on log-log scale. The claimed orders are O(1/sqrt(n))
for the scaled Gruss-Voronovskaya residual and O(1/n) for the Gruss functional
and the second-moment limit; rate gates use boundedness with headroom rather
than slope windows because smooth pairs often decay faster than guaranteed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .function_space import DENSE_GRID, GridSpec, SmoothFunction, product
from .gruss_estimates import f_n
from .kantorovich_operator import DEFAULT_RULE, QuadratureRule, kantorovich_grid

__all__ = [
    "RESIDUAL_NAMES",
    "ZERO_SUP_FLOOR",
    "SweepResult",
    "fit_rate",
    "gruss_norm_sup",
    "gv_residual_sup",
    "nfn_limit_residual",
    "run_sweep",
]

RESIDUAL_NAMES = ("gv_residual", "gruss_norm", "nfn_limit")

#: Sup values at or below this are treated as exact zeros when fitting:
#: rounding noise in the operator reaches ~1e-8 after the n* scaling at the
#: largest supported degrees, while genuine residuals stay above 1e-4.
ZERO_SUP_FLOOR = 1e-7


@dataclass(frozen=True)
class SweepResult:
    """(n, sup) series for one residual plus its log-log least-squares fit."""

    residual_name: str
    points: tuple[tuple[int, float], ...]
    slope: float
    intercept: float
    r_squared: float

    @property
    def identically_zero(self) -> bool:
        """True for an all-zero series (log-log line at minus infinity)."""
        return math.isinf(self.intercept) and self.intercept < 0


@lru_cache(maxsize=512)
def _kn_on_grid(f: SmoothFunction, n: int, grid: GridSpec, rule: QuadratureRule) -> np.ndarray:
    values = kantorovich_grid(f, n, grid.points(), rule)
    values.setflags(write=False)
    return values


def gv_residual_sup(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    grid: GridSpec = DENSE_GRID,
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """sup over the grid of |n [K_n(fg) - K_n(f) K_n(g)] - x(1-x) f'(x) g'(x)|."""
    xs = grid.points()
    kf = _kn_on_grid(f, n, grid, rule)
    kg = _kn_on_grid(g, n, grid, rule)
    kfg = _kn_on_grid(product(f, g), n, grid, rule)
    residual = n * (kfg - kf * kg) - xs * (1.0 - xs) * np.asarray(
        f.eval_k(xs, 1), dtype=float
    ) * np.asarray(g.eval_k(xs, 1), dtype=float)
    return float(np.max(np.abs(residual)))


def gruss_norm_sup(
    f: SmoothFunction,
    g: SmoothFunction,
    n: int,
    grid: GridSpec = DENSE_GRID,
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """sup over the grid of the Gruss functional |K_n(fg) - K_n(f) K_n(g)|."""
    kf = _kn_on_grid(f, n, grid, rule)
    kg = _kn_on_grid(g, n, grid, rule)
    kfg = _kn_on_grid(product(f, g), n, grid, rule)
    return float(np.max(np.abs(kfg - kf * kg)))


def nfn_limit_residual(n: int, grid: GridSpec = DENSE_GRID) -> float:
    """sup over the grid of |n f_n(n, x) - x(1-x)|, the second-moment limit gap."""
    xs = grid.points()
    return float(np.max(np.abs(n * f_n(n, xs) - xs * (1.0 - xs))))


def fit_rate(
    points: Sequence[tuple[int, float]],
    residual_name: str = "",
    zero_floor: float = ZERO_SUP_FLOOR,
) -> SweepResult:
    """Least-squares fit of log(sup) against log(n) over the positive points.

    An all-zero series (everything at or below ``zero_floor``) yields the
    designated identically-zero result, on which rate gates pass vacuously.
    Fewer than 3 positive points, or positive points spanning less than two
    octaves in n, are rejected.
    """
    pts = sorted((int(n), float(s)) for n, s in points)
    if any(n < 1 for n, _ in pts):
        raise ValueError("sweep points need positive integer n")
    positive = [(n, s) for n, s in pts if s > zero_floor]
    if not positive:
        return SweepResult(
            residual_name=residual_name,
            points=tuple(pts),
            slope=0.0,
            intercept=-math.inf,
            r_squared=1.0,
        )
    if len(positive) < 3:
        raise ValueError(f"need at least 3 positive sup values to fit, got {len(positive)}")
    ns = np.array([n for n, _ in positive], dtype=float)
    if ns.max() < 4.0 * ns.min():
        raise ValueError("positive sup values must span at least two octaves in n")
    logn = np.log(ns)
    logs = np.log(np.array([s for _, s in positive]))
    slope, intercept = np.polyfit(logn, logs, 1)
    fitted = slope * logn + intercept
    sse = float(np.sum((logs - fitted) ** 2))
    sst = float(np.sum((logs - logs.mean()) ** 2))
    r_squared = 1.0 if sst == 0.0 else max(0.0, 1.0 - sse / sst)
    return SweepResult(
        residual_name=residual_name,
        points=tuple(pts),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=float(r_squared),
    )


def run_sweep(
    residual: str,
    f: SmoothFunction | None,
    g: SmoothFunction | None,
    n_list: Sequence[int],
    grid: GridSpec = DENSE_GRID,
    rule: QuadratureRule = DEFAULT_RULE,
) -> SweepResult:
    """Evaluate the named residual for each n and fit the empirical rate."""
    if residual not in RESIDUAL_NAMES:
        raise ValueError(f"residual must be one of {RESIDUAL_NAMES}, got {residual!r}")
    ns = list(n_list)
    if len(ns) < 4:
        raise ValueError(f"need at least 4 degrees in the sweep, got {len(ns)}")
    if ns != sorted(ns):
        raise ValueError("n_list must be ascending")
    if residual == "nfn_limit":
        points = [(n, nfn_limit_residual(n, grid)) for n in ns]
    else:
        if f is None or g is None:
            raise ValueError(f"residual {residual!r} needs both functions")
        evaluate = gv_residual_sup if residual == "gv_residual" else gruss_norm_sup
        points = [(n, evaluate(f, g, n, grid, rule)) for n in ns]
    return fit_rate(points, residual_name=residual)
