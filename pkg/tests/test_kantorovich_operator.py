import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bklab.function_space import DENSE_GRID, corpus, corpus_member, product
from bklab.kantorovich_operator import (
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

# C(100, 50) / 2^100, exact big-integer oracle.
BASIS_100_50_HALF = 0.07958923738717877


class TestQuadratureRule:
    def test_weights_sum_to_two(self):
        assert abs(float(np.sum(DEFAULT_RULE.weights)) - 2.0) <= 1e-14

    def test_polynomial_exactness(self):
        # Exact through degree 2*order - 1 against closed-form antiderivatives:
        # integral of t^d over [-1, 1] is 2/(d+1) for even d, 0 for odd d.
        r = DEFAULT_RULE
        for d in range(2 * r.order):
            got = float(np.sum(r.weights * r.nodes**d))
            want = 2.0 / (d + 1) if d % 2 == 0 else 0.0
            assert abs(got - want) <= 1e-13, d

    def test_degree_16_not_exact(self):
        r = DEFAULT_RULE
        got = float(np.sum(r.weights * r.nodes**16))
        assert abs(got - 2.0 / 17) > 1e-10

    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureRule(order=0, nodes=np.array([]), weights=np.array([]))
        with pytest.raises(ValueError):
            QuadratureRule(order=1, nodes=np.array([1.0]), weights=np.array([1.0]))
        with pytest.raises(ValueError):
            QuadratureRule(order=1, nodes=np.array([0.0]), weights=np.array([-1.0]))

    def test_rule_arrays_read_only(self):
        with pytest.raises(ValueError):
            DEFAULT_RULE.nodes[0] = 0.0


class TestBernsteinBasis:
    def test_all_mass_at_zero(self):
        assert bernstein_basis(5, 0, 0.0) == 1.0
        assert bernstein_basis(5, 3, 0.0) == 0.0
        assert bernstein_basis(5, 5, 1.0) == 1.0

    def test_midpoint(self):
        assert bernstein_basis(2, 1, 0.5) == 0.5

    def test_central_value_against_big_integer_oracle(self):
        exact = Fraction(math.comb(100, 50), 2**100)
        assert float(exact) == pytest.approx(BASIS_100_50_HALF, abs=1e-17)
        assert bernstein_basis(100, 50, 0.5) == pytest.approx(BASIS_100_50_HALF, abs=1e-12)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            bernstein_basis(4, 5, 0.5)
        with pytest.raises(ValueError):
            bernstein_basis(4, -1, 0.5)

    def test_n_out_of_range(self):
        with pytest.raises(ValueError):
            bernstein_basis(0, 0, 0.5)
        with pytest.raises(ValueError):
            bernstein_basis(MAX_N + 1, 0, 0.5)

    def test_partition_of_unity_dense(self):
        xs = DENSE_GRID.points()
        for n in range(1, 257):
            sums = bernstein_matrix(n, xs).sum(axis=1)
            assert float(np.max(np.abs(sums - 1.0))) <= 1e-12, n

    def test_row_matches_scalar(self):
        for n in (3, 64, 65, 300):
            for x in (0.0, 0.125, 0.5, 0.997, 1.0):
                row = bernstein_row(n, x)
                for k in (0, n // 2, n):
                    assert row[k] == pytest.approx(bernstein_basis(n, k, x), rel=1e-13, abs=1e-300)

    def test_matrix_matches_row(self):
        xs = np.array([0.0, 0.2, 0.5, 0.9, 1.0])
        for n in (7, 130):
            m = bernstein_matrix(n, xs)
            for i, x in enumerate(xs):
                assert np.allclose(m[i], bernstein_row(n, float(x)), rtol=1e-13, atol=0)

    @given(n=st.integers(1, 200), x=st.floats(0.0, 1.0))
    @settings(max_examples=80, deadline=None)
    def test_row_sums_to_one(self, n, x):
        assert float(np.sum(bernstein_row(n, x))) == pytest.approx(1.0, abs=1e-12)

    def test_nonnegative(self):
        row = bernstein_row(500, 0.37)
        assert np.all(row >= 0.0)


class TestCellMean:
    def test_constant(self):
        assert cell_mean(corpus_member("e_0"), 7, 3) == pytest.approx(1.0, abs=1e-14)

    def test_identity_midpoint(self):
        # Mean of t over [0, 1/2] is the midpoint 1/4.
        assert cell_mean(corpus_member("e_1"), 1, 0) == pytest.approx(0.25, abs=1e-15)

    def test_square_exact_rational(self):
        # 3 * integral of t^2 over [1/3, 2/3] = 7/27.
        assert cell_mean(corpus_member("e_2"), 2, 1) == pytest.approx(7.0 / 27.0, abs=1e-15)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            cell_mean(corpus_member("e_0"), 3, 4)

    def test_means_vector_matches_scalar(self):
        f = corpus_member("x*exp(-x)")
        means = cell_means(f, 9)
        for k in range(10):
            assert means[k] == cell_mean(f, 9, k)


class TestKantorovichApply:
    def test_reproduces_constants(self):
        for n in (1, 13, 200):
            for x in (0.0, 0.4, 1.0):
                got = kantorovich_apply(corpus_member("e_0"), n, x)
                assert got.value == pytest.approx(1.0, abs=1e-13)
                assert got.method == "quadrature"

    def test_identity_closed_form_examples(self):
        e1 = corpus_member("e_1")
        assert kantorovich_apply(e1, 1, 0.5).value == pytest.approx(0.5, abs=1e-14)
        assert kantorovich_apply(e1, 3, 0.0).value == pytest.approx(0.125, abs=1e-14)

    def test_endpoint_identity_exact(self):
        # Only the k = 0 basis term survives at x = 0.
        for f in (corpus_member("exp"), corpus_member("e_2")):
            for n in (1, 5, 80):
                assert kantorovich_value(f, n, 0.0) == cell_mean(f, n, 0)
                assert kantorovich_value(f, n, 1.0) == cell_mean(f, n, n)

    def test_linearity(self):
        from bklab.function_space import SmoothFunction

        f = corpus_member("exp")
        g = corpus_member("sin")
        a, b = 2.5, -1.25
        combo = SmoothFunction(
            "combo",
            tuple(
                (lambda k: lambda x: a * f.eval_k(x, k) + b * g.eval_k(x, k))(k)
                for k in range(4)
            ),
            (
                a * f.norm_bounds[0] + abs(b) * g.norm_bounds[0],
                a * f.norm_bounds[1] + abs(b) * g.norm_bounds[1],
                a * f.norm_bounds[2] + abs(b) * g.norm_bounds[2],
                a * f.norm_bounds[3] + abs(b) * g.norm_bounds[3],
            ),
        )
        for n in (2, 31):
            for x in (0.1, 0.6):
                want = a * kantorovich_value(f, n, x) + b * kantorovich_value(g, n, x)
                assert kantorovich_value(combo, n, x) == pytest.approx(want, abs=1e-12)

    def test_positivity_and_range(self):
        xs = np.linspace(0.0, 1.0, 101)
        for f in corpus():
            lo = float(np.min(np.asarray(f(xs), dtype=float)))
            hi = float(np.max(np.asarray(f(xs), dtype=float)))
            for n in (1, 9, 64):
                values = kantorovich_grid(f, n, xs)
                if lo >= 0.0:
                    assert float(values.min()) >= -1e-14
                assert float(values.min()) >= lo - 1e-12 - 0.5 / n
                assert float(values.max()) <= hi + 1e-12 + 0.5 / n

    def test_value_within_cell_mean_hull(self):
        f = corpus_member("exp")
        for n in (1, 7, 40):
            means = cell_means(f, n)
            for x in (0.0, 0.3, 0.77, 1.0):
                v = kantorovich_value(f, n, x)
                assert means.min() - 1e-12 <= v <= means.max() + 1e-12

    def test_grid_path_matches_scalar_path(self):
        xs = np.linspace(0.0, 1.0, 17)
        for f in (corpus_member("exp"), product(corpus_member("exp"), corpus_member("sin"))):
            for n in (1, 64, 129):
                grid_vals = kantorovich_grid(f, n, xs)
                scalar_vals = np.array([kantorovich_value(f, n, float(x)) for x in xs])
                assert float(np.max(np.abs(grid_vals - scalar_vals))) <= 1e-12

    def test_evaluation_validation(self):
        with pytest.raises(ValueError):
            OperatorEvaluation(n=1, x=0.0, value=math.inf, method="quadrature")
        with pytest.raises(ValueError):
            OperatorEvaluation(n=1, x=0.0, value=1.0, method="other")


class TestMomentOracle:
    def test_constant(self):
        assert kantorovich_moment_exact(0, 7, 0.3) == 1.0

    def test_identity(self):
        assert kantorovich_moment_exact(1, 1, 0.5) == pytest.approx(0.5, abs=0)

    def test_square_at_zero(self):
        # K_1(e_2)(0) = 2 * integral of t^2 over [0, 1/2] = 1/12.
        assert kantorovich_moment_exact(2, 1, 0.0) == pytest.approx(1.0 / 12.0, abs=1e-17)

    def test_rejects_higher_moments(self):
        with pytest.raises(ValueError):
            kantorovich_moment_exact(3, 4, 0.5)

    def test_quadrature_agreement_full(self):
        # The central dual-route check: quadrature path vs closed forms.
        xs = np.linspace(0.0, 1.0, 33)
        monomials = [corpus_member("e_0"), corpus_member("e_1"), corpus_member("e_2")]
        worst = 0.0
        for n in range(1, 129):
            for j, f in enumerate(monomials):
                got = kantorovich_grid(f, n, xs)
                want = np.array([kantorovich_moment_exact(j, n, float(x)) for x in xs])
                worst = max(worst, float(np.max(np.abs(got - want))))
        assert worst <= 1e-12
