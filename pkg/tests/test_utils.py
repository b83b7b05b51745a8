"""Tests for exact arithmetic and combinatorics helpers"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.utils.combinatorics import (
    arrangements,
    binomial_shift,
    gray_code,
    multi_indices,
    multi_indices_upto,
    nu_factorial,
    simplex_grid,
)
from app.utils.gaussian import GaussianRational
from app.utils.linalg import in_row_space, nullspace_basis, rank

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)
gaussians = st.tuples(rationals, rationals).map(lambda t: GaussianRational(*t))


def test_gaussian_arithmetic():
    """Test field operations in Q(i)"""
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert (GaussianRational(1, 1) / GaussianRational(1, -1)) == i
    assert str(GaussianRational("1/2", "-3/4")) == "1/2 - 3/4i"
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / 0


@given(gaussians, gaussians)
def test_gaussian_division_inverts_multiplication(a, b):
    """Test (a * b) / b = a for nonzero b"""
    if b:
        assert (a * b) / b == a


def test_multi_indices_order():
    """Test lexicographically descending enumeration"""
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert multi_indices_upto(2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert nu_factorial((3, 2)) == 12


def test_arrangements():
    """Test distinct arrangements of a multi-index"""
    assert arrangements((2, 1)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_gray_code_visits_every_subset_once():
    """Test one bit changes per step"""
    masks = list(gray_code(4))
    assert sorted(mask for mask, _ in masks) == list(range(16))
    for (previous, _), (mask, flipped) in zip(masks, masks[1:]):
        assert previous ^ mask == 1 << flipped


def test_simplex_grid():
    """Test the total-degree grid"""
    assert sorted(simplex_grid(2, 1)) == [(0, 0), (0, 1), (1, 0)]


def test_binomial_shift():
    """Test (x + 2)^2 = x^2 + 4x + 4"""
    assert binomial_shift((2,), (2,)) == {(2,): 1, (1,): 4, (0,): 4}
    assert binomial_shift((1, 1), (0, 3)) == {(1, 1): 1, (1, 0): 3}


def test_linalg():
    """Test exact rank, nullspace and row-space membership"""
    rows = [[1, 2, 3], [2, 4, 6]]
    assert rank(rows, 3) == 1
    basis = nullspace_basis(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert sum(Fraction(a) * b for a, b in zip(rows[0], v)) == 0
    assert in_row_space(rows, [Fraction(1, 2), 1, Fraction(3, 2)], 3)
    assert not in_row_space(rows, [1, 0, 0], 3)
    assert nullspace_basis([], 2) == [[1, 0], [0, 1]]
