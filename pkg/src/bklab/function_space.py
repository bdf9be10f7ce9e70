"""Scalar analysis primitives on [0, 1].

Provides the named test-function corpus (values, analytic derivatives up to
order 3, and analytic sup-norm bounds), grid-based estimators for the uniform
norm and the modulus of continuity, and first-order divided differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

__all__ = [
    "DEFAULT_PAIR_FLOOR",
    "DEFAULT_GRID",
    "DENSE_GRID",
    "GridSpec",
    "SmoothFunction",
    "affine_function",
    "corpus",
    "corpus_member",
    "corpus_names",
    "derivative_function",
    "divided_difference",
    "modulus_lower",
    "modulus_upper",
    "product",
    "sup_norm_lower",
]

# Below ~1e-3 separation a divided difference loses roughly three digits to
# cancellation; callers wanting the coincident limit must use f'(x).
DEFAULT_PAIR_FLOOR = 1e-3

ScalarFunction = Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]]


@dataclass(frozen=True)
class GridSpec:
    """Uniform inclusive grid on [0, 1] plus the minimum |x - y| for pair sweeps."""

    point_count: int = 33
    pair_floor: float = DEFAULT_PAIR_FLOOR

    def __post_init__(self) -> None:
        if self.point_count < 2:
            raise ValueError(f"point_count must be at least 2, got {self.point_count}")
        if not 0.0 < self.pair_floor < 1.0:
            raise ValueError(f"pair_floor must lie in (0, 1), got {self.pair_floor}")

    @property
    def spacing(self) -> float:
        return 1.0 / (self.point_count - 1)

    def points(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.point_count)


#: 33-point verification grid: pair sweeps over it stay fast.
DEFAULT_GRID = GridSpec(33)
#: 4097-point diagnostic grid: sup-norm lower bounds tight to ~1e-6 for the corpus.
DENSE_GRID = GridSpec(4097)

_MAX_ORDER = 3


@dataclass(frozen=True, eq=False)
class SmoothFunction:
    """A named scalar function with analytic derivatives of order 0..3.

    ``derivatives[k]`` evaluates the k-th derivative (vectorized over numpy
    arrays); ``norm_bounds[k]`` is an analytic upper bound on the sup over
    [0, 1] of its absolute value.
    """

    name: str
    derivatives: tuple[ScalarFunction, ScalarFunction, ScalarFunction, ScalarFunction]
    norm_bounds: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.derivatives) != _MAX_ORDER + 1 or len(self.norm_bounds) != _MAX_ORDER + 1:
            raise ValueError("expected evaluators and bounds for orders 0..3")
        if any(b < 0 for b in self.norm_bounds):
            raise ValueError(f"norm bounds must be nonnegative, got {self.norm_bounds}")

    def __call__(self, x):
        return self.derivatives[0](x)

    def eval_k(self, x, k: int):
        """Evaluate the k-th derivative at x (scalar or array)."""
        if not 0 <= k <= _MAX_ORDER:
            raise ValueError(f"derivative order must be in 0..{_MAX_ORDER}, got {k}")
        return self.derivatives[k](x)

    def derivative(self, k: int) -> ScalarFunction:
        """The k-th derivative as a plain callable."""
        if not 0 <= k <= _MAX_ORDER:
            raise ValueError(f"derivative order must be in 0..{_MAX_ORDER}, got {k}")
        return self.derivatives[k]

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"SmoothFunction({self.name!r})"


def _unavailable(x):
    raise ValueError("derivative order not tracked for this function")


def derivative_function(f: SmoothFunction, order: int) -> SmoothFunction:
    """View f's ``order``-th derivative as a SmoothFunction.

    Evaluators and bounds shift down by ``order``; slots beyond the tracked
    order 3 get an infinite bound and reject evaluation.
    """
    if not 0 <= order <= _MAX_ORDER:
        raise ValueError(f"order must be in 0..{_MAX_ORDER}, got {order}")
    derivs = list(f.derivatives[order:]) + [_unavailable] * order
    bounds = list(f.norm_bounds[order:]) + [math.inf] * order
    return SmoothFunction(
        name=f"{f.name}^({order})",
        derivatives=tuple(derivs),
        norm_bounds=tuple(bounds),
    )


def product(f: SmoothFunction, g: SmoothFunction) -> SmoothFunction:
    """Pointwise product f*g with Leibniz-rule derivatives.

    Norm bounds compose as sum_j C(k,j) * bound_j(f) * bound_{k-j}(g), an
    upper bound for the k-th derivative of the product.
    """
    f0, f1, f2, f3 = f.derivatives
    g0, g1, g2, g3 = g.derivatives
    derivs = (
        lambda x: f0(x) * g0(x),
        lambda x: f1(x) * g0(x) + f0(x) * g1(x),
        lambda x: f2(x) * g0(x) + 2.0 * f1(x) * g1(x) + f0(x) * g2(x),
        lambda x: f3(x) * g0(x) + 3.0 * f2(x) * g1(x) + 3.0 * f1(x) * g2(x) + f0(x) * g3(x),
    )
    bf, bg = f.norm_bounds, g.norm_bounds
    bounds = tuple(
        float(sum(math.comb(k, j) * bf[j] * bg[k - j] for j in range(k + 1)))
        for k in range(_MAX_ORDER + 1)
    )
    return SmoothFunction(name=f"{f.name}*{g.name}", derivatives=derivs, norm_bounds=bounds)


def divided_difference(
    f, x: float, y: float, pair_floor: float = DEFAULT_PAIR_FLOOR
) -> float:
    """First-order divided difference (f(x) - f(y)) / (x - y).

    Symmetric in (x, y) down to the floating-point result. Separations below
    ``pair_floor`` are rejected rather than silently cancelling.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"points must lie in [0, 1], got x={x}, y={y}")
    if abs(x - y) < pair_floor:
        raise ValueError(
            f"|x - y| = {abs(x - y):.3g} is below the pair floor {pair_floor:.3g}; "
            "use the derivative for coincident points"
        )
    return (float(f(x)) - float(f(y))) / (x - y)


def _values_on(h, xs: np.ndarray) -> np.ndarray:
    """Evaluate a scalar function on an array, falling back to a point loop."""
    try:
        out = np.asarray(h(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(h(float(u))) for u in xs])


def modulus_lower(h, delta: float, grid: GridSpec = DEFAULT_GRID) -> float:
    """Grid lower estimate of the modulus of continuity of h at step delta.

    Maximizes |h(u) - h(v)| over grid pairs with |u - v| <= delta, augmented
    by the exact-offset pairs (u, u +/- delta) clipped to [0, 1]. The result
    underestimates the true modulus (up to roundoff), which keeps inequality
    verdicts built on it conservative.
    """
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    xs = grid.points()
    vals = _values_on(h, xs)
    best = 0.0
    spacing = grid.spacing
    m = 1
    while m < grid.point_count and m * spacing <= delta:
        best = max(best, float(np.max(np.abs(vals[m:] - vals[:-m]))))
        m += 1
    if delta > 0.0:
        up = np.minimum(xs + delta, 1.0)
        down = np.maximum(xs - delta, 0.0)
        best = max(best, float(np.max(np.abs(_values_on(h, up) - vals))))
        best = max(best, float(np.max(np.abs(_values_on(h, down) - vals))))
    return best


def modulus_upper(h: SmoothFunction, delta: float) -> float:
    """Analytic upper bound min(2*sup|h|, delta*sup|h'|) on the modulus of h."""
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    return min(2.0 * h.norm_bounds[0], delta * h.norm_bounds[1])


def sup_norm_lower(h, grid: GridSpec = DEFAULT_GRID) -> float:
    """Grid maximum of |h|, a lower bound on the uniform norm over [0, 1]."""
    return float(np.max(np.abs(_values_on(h, grid.points()))))


def affine_function(a: float, b: float) -> SmoothFunction:
    """The affine map x -> a*x + b with its exact norm bounds on [0, 1]."""
    return SmoothFunction(
        name=f"affine({a:g},{b:g})",
        derivatives=(
            lambda x: a * x + b,
            lambda x: 0.0 * x + a,
            lambda x: 0.0 * x,
            lambda x: 0.0 * x,
        ),
        norm_bounds=(max(abs(b), abs(a + b)), abs(a), 0.0, 0.0),
    )


_E = math.e
_SIN1 = math.sin(1.0)

_CORPUS: tuple[SmoothFunction, ...] = (
    SmoothFunction(
        "e_0",
        (lambda x: 0.0 * x + 1.0, lambda x: 0.0 * x, lambda x: 0.0 * x, lambda x: 0.0 * x),
        (1.0, 0.0, 0.0, 0.0),
    ),
    SmoothFunction(
        "e_1",
        (lambda x: 1.0 * x, lambda x: 0.0 * x + 1.0, lambda x: 0.0 * x, lambda x: 0.0 * x),
        (1.0, 1.0, 0.0, 0.0),
    ),
    SmoothFunction(
        "e_2",
        (lambda x: x * x, lambda x: 2.0 * x, lambda x: 0.0 * x + 2.0, lambda x: 0.0 * x),
        (1.0, 2.0, 2.0, 0.0),
    ),
    SmoothFunction(
        "e_3",
        (lambda x: x * x * x, lambda x: 3.0 * x * x, lambda x: 6.0 * x, lambda x: 0.0 * x + 6.0),
        (1.0, 3.0, 6.0, 6.0),
    ),
    affine_function(2.0, 1.0),
    affine_function(-1.0, 0.5),
    SmoothFunction("exp", (np.exp, np.exp, np.exp, np.exp), (_E, _E, _E, _E)),
    SmoothFunction(
        "sin",
        (np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)),
        (_SIN1, 1.0, _SIN1, 1.0),
    ),
    SmoothFunction(
        "cos",
        (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin),
        (1.0, _SIN1, 1.0, _SIN1),
    ),
    # k-th derivative of (1+x)^-1 is (-1)^k k! (1+x)^-(k+1), largest at x = 0.
    SmoothFunction(
        "1/(1+x)",
        (
            lambda x: (1.0 + x) ** -1.0,
            lambda x: -((1.0 + x) ** -2.0),
            lambda x: 2.0 * (1.0 + x) ** -3.0,
            lambda x: -6.0 * (1.0 + x) ** -4.0,
        ),
        (1.0, 1.0, 2.0, 6.0),
    ),
    # x e^-x peaks at x = 1 on [0, 1]; derivatives (1-x)e^-x, (x-2)e^-x,
    # (3-x)e^-x all peak in magnitude at x = 0.
    SmoothFunction(
        "x*exp(-x)",
        (
            lambda x: x * np.exp(-x),
            lambda x: (1.0 - x) * np.exp(-x),
            lambda x: (x - 2.0) * np.exp(-x),
            lambda x: (3.0 - x) * np.exp(-x),
        ),
        (math.exp(-1.0), 1.0, 2.0, 3.0),
    ),
)


def corpus() -> list[SmoothFunction]:
    """The fixed named test-function corpus."""
    return list(_CORPUS)


def corpus_names() -> list[str]:
    return [f.name for f in _CORPUS]


def _normalize(name: str) -> str:
    return name.replace("_", "").replace(" ", "").lower()


_BY_NAME = {f.name: f for f in _CORPUS}
_BY_ALIAS = {_normalize(f.name): f for f in _CORPUS}


def corpus_member(name: str) -> SmoothFunction:
    """Look up a corpus member by exact name or normalized alias (e.g. "e1")."""
    member = _BY_NAME.get(name) or _BY_ALIAS.get(_normalize(name))
    if member is None:
        raise ValueError(
            f"unknown function name {name!r}; known: {', '.join(corpus_names())}"
        )
    return member
