"""Numerical laboratory for Bernstein-Kantorovich polynomials.

Implements the operator itself, two-point Gruss-Voronovskaya and perturbed
Gruss estimates with grid pass/fail sweeps, and empirical convergence-rate
fits for the associated residuals.
"""

from .asymptotics import (
    RESIDUAL_NAMES,
    SweepResult,
    fit_rate,
    gruss_norm_sup,
    gv_residual_sup,
    nfn_limit_residual,
    run_sweep,
)
from .function_space import (
    DEFAULT_GRID,
    DEFAULT_PAIR_FLOOR,
    DENSE_GRID,
    GridSpec,
    SmoothFunction,
    affine_function,
    corpus,
    corpus_member,
    corpus_names,
    derivative_function,
    divided_difference,
    modulus_lower,
    modulus_upper,
    product,
    sup_norm_lower,
)
from .gruss_estimates import (
    DEFAULT_TAU,
    BoundCheckRecord,
    EstimateConfig,
    ah_bound_check,
    check_perturbed,
    check_theorem,
    e_n,
    f_n,
    perturbed_gruss_lhs,
    perturbed_gruss_rhs,
    theorem_lhs,
    theorem_rhs,
)
from .kantorovich_operator import (
    DEFAULT_RULE,
    MAX_N,
    OperatorEvaluation,
    QuadratureRule,
    bernstein_basis,
    bernstein_matrix,
    bernstein_row,
    cell_mean,
    cell_means,
    kantorovich_apply,
    kantorovich_grid,
    kantorovich_moment_exact,
    kantorovich_value,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_PAIR_FLOOR",
    "DEFAULT_RULE",
    "DEFAULT_TAU",
    "DENSE_GRID",
    "MAX_N",
    "RESIDUAL_NAMES",
    "BoundCheckRecord",
    "EstimateConfig",
    "GridSpec",
    "OperatorEvaluation",
    "QuadratureRule",
    "SmoothFunction",
    "SweepResult",
    "affine_function",
    "ah_bound_check",
    "bernstein_basis",
    "bernstein_matrix",
    "bernstein_row",
    "cell_mean",
    "cell_means",
    "check_perturbed",
    "check_theorem",
    "corpus",
    "corpus_member",
    "corpus_names",
    "derivative_function",
    "divided_difference",
    "e_n",
    "f_n",
    "fit_rate",
    "gruss_norm_sup",
    "gv_residual_sup",
    "kantorovich_apply",
    "kantorovich_grid",
    "kantorovich_moment_exact",
    "kantorovich_value",
    "modulus_lower",
    "modulus_upper",
    "nfn_limit_residual",
    "perturbed_gruss_lhs",
    "perturbed_gruss_rhs",
    "product",
    "run_sweep",
    "sup_norm_lower",
    "theorem_lhs",
    "theorem_rhs",
]
