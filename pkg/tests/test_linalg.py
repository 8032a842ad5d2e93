from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from bisetkit.cyclotomic import Cyclotomic
from bisetkit.linalg import (ExactMatrix, bareiss_rank, in_span, mat_rank, matmul, right_kernel,
                             row_space, solve, solve_rational, span_dim)

small = st.integers(-4, 4)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_bareiss_matches_sympy(rows):
    assert bareiss_rank(rows) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(1, 5))
def test_fraction_rank_scale_invariant(rows, d):
    scaled = [[Fraction(x, d) for x in r] for r in rows]
    assert mat_rank(scaled) == mat_rank(rows)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_vectors(rows):
    ncols = len(rows[0])
    ker = right_kernel(rows, ncols)
    assert len(ker) == ncols - mat_rank(rows)
    for v in ker:
        assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in rows)


@settings(max_examples=40, deadline=None)
@given(matrices(5, 5))
def test_solve_consistent(rows):
    x = [Fraction(i + 1) for i in range(len(rows[0]))]
    b = [sum(a * xi for a, xi in zip(r, x)) for r in rows]
    y = solve(rows, b)
    assert y is not None
    assert [sum(a * yi for a, yi in zip(r, y)) for r in rows] == b


def test_solve_rational_unique():
    assert solve_rational([[2, 1], [1, 3]], [3, 4]) == [1, 1]
    with pytest.raises(ValueError):
        solve_rational([[1, 1], [1, 1]], [1, 2])


def test_cyclotomic_rank():
    w = Cyclotomic.zeta(3)
    # rows (1, w) and (w^2, 1) are dependent since w * w^2 = 1
    assert mat_rank([[1, w], [w * w, Cyclotomic.rational(1)]]) == 1
    assert mat_rank([[1, w], [w, Cyclotomic.rational(1)]]) == 2


def test_cyclotomic_kernel():
    i = Cyclotomic.zeta(4)
    ker = right_kernel([[1, i]], 2)
    assert len(ker) == 1
    assert ker[0][0] + i * ker[0][1] == 0


def test_span_helpers():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert span_dim(rows) == 2
    assert len(row_space(rows)) == 2
    assert in_span(rows, [1, 3, 4])
    assert not in_span(rows, [0, 0, 1])
    assert matmul([[1, 2]], [[3], [4]]) == [[11]]


def test_exact_matrix_json_roundtrip():
    w = Cyclotomic.zeta(5)
    m = ExactMatrix([[Cyclotomic.rational(Fraction(1, 2)), w], [w * w - 1, Cyclotomic.rational(0)]])
    back = ExactMatrix.from_json(m.to_json())
    assert back == m
    assert not m.is_symmetric()
    assert m.transpose().transpose() == m
