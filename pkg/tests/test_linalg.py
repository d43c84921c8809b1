from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from janus.linalg import (
    Echelon,
    SparseMatrix,
    block_diagonal,
    format_rational,
    hstack,
    is_invertible,
    kernel_basis,
    kernel_dim,
    parse_rational,
    rank,
    rref,
    span_rank,
)

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    # sparse-ish: most entries zero
    cell = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), small_rationals)
    rows = draw(st.lists(st.lists(cell, min_size=c, max_size=c), min_size=r, max_size=r))
    return SparseMatrix.from_dense(rows, cols=c) if r else SparseMatrix.zeros(0, c)


def test_rational_text_round_trip():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(4) == "4"
    assert parse_rational(" -1/2 ") == Fraction(-1, 2)
    with pytest.raises(ValueError):
        parse_rational("")


def test_no_stored_zeros_and_bounds():
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(2, 4)})
    assert m.nnz == 1
    assert m[1, 1] == Fraction(1, 2)
    assert m[0, 0] == 0
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(2, 0): 1})
    with pytest.raises(ValueError):
        SparseMatrix(-1, 2)


def test_known_ranks():
    assert rank(SparseMatrix.from_dense([[1, -1], [1, -1]])) == 1
    assert rank(SparseMatrix.identity(5)) == 5
    assert rank(SparseMatrix.zeros(3, 7)) == 0
    assert rank(SparseMatrix.zeros(0, 4)) == 0
    hilbert = SparseMatrix.from_dense([[Fraction(1, i + j + 1) for j in range(6)] for i in range(6)])
    assert rank(hilbert) == 6


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    expected = sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(m[i, j].numerator, m[i, j].denominator)).rank() if m.rows and m.cols else 0
    assert rank(m) == expected
    assert rank(m.T) == expected


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_kernel_of_right_size(m):
    basis = kernel_basis(m)
    assert len(basis) == kernel_dim(m) == m.cols - rank(m)
    for v in basis:
        assert all(x == 0 for x in m.apply(v))
    assert span_rank(basis, m.cols) == len(basis)


@settings(max_examples=60, deadline=None)
@given(matrices(4), matrices(4))
def test_products_and_transposes(a, b):
    if a.cols != b.rows:
        b = SparseMatrix.zeros(a.cols, b.cols)
    prod = a @ b
    assert prod.T == b.T @ a.T
    assert rank(prod) <= min(rank(a), rank(b))
    assert (a - a).is_zero()
    assert a + (-a) == SparseMatrix.zeros(a.rows, a.cols)


def test_rref_is_reduced():
    m = SparseMatrix.from_dense([[2, 4, 0], [1, 2, 1], [3, 6, 1]])
    rows, pivots = rref(m)
    assert pivots == [0, 2]
    for p, row in zip(pivots, rows):
        assert row[p] == 1
        for q in pivots:
            if q != p:
                assert row.get(q, 0) == 0


def test_echelon_membership():
    ech = Echelon(3)
    assert ech.add({0: 1, 1: 1}) is not None
    assert ech.add({0: 2, 1: 2}) is None
    assert ech.contains({0: -3, 1: -3})
    assert not ech.contains({2: 1})
    assert len(ech) == 1


def test_block_and_stack():
    a = SparseMatrix.identity(2)
    b = SparseMatrix.from_dense([[5]])
    d = block_diagonal([a, b])
    assert d.shape == (3, 3) and d[2, 2] == 5 and d[0, 2] == 0
    h = hstack([a, a])
    assert h.shape == (2, 4) and rank(h) == 2
    with pytest.raises(ValueError):
        hstack([a, b])
    assert is_invertible(d)
    assert not is_invertible(h)


def test_json_round_trip_and_rejections():
    m = SparseMatrix.from_dense([[0, Fraction(-1, 3)], [2, 0]])
    data = m.to_json()
    assert data == {"rows": 2, "cols": 2, "entries": [[0, 1, "-1/3"], [1, 0, "2"]]}
    assert SparseMatrix.from_json(data) == m
    with pytest.raises(ValueError):
        SparseMatrix.from_json({"rows": 1, "cols": 1, "entries": [[0, 0, "0"]]})
    with pytest.raises(ValueError):
        SparseMatrix.from_json({"rows": 1, "cols": 1, "entries": [[0, 0, "1"], [0, 0, "2"]]})


def test_matrix_is_hashable_value():
    a = SparseMatrix.from_dense([[1, 2]])
    b = SparseMatrix(1, 2, {(0, 0): 1, (0, 1): 2})
    assert a == b and hash(a) == hash(b)
    assert a != SparseMatrix.from_dense([[1, 2], [0, 0]])
