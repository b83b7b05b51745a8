"""Tests for the periodic stencil solver"""

from fractions import Fraction
from math import comb
from pathlib import Path

import pytest

from app.exceptions import ArgumentError
from app.models.operator import load_operator
from app.models.report import CheckStatus
from app.services.solver import (
    PolyAnsatz,
    StencilOperator,
    apply,
    check_bound,
    commutes_with_period_shift,
    in_span,
    polynomial_kernel,
    refine_period,
    translate,
)
from app.utils.sampling import Probe

DATA = Path(__file__).resolve().parent.parent / "data"
LAPLACIAN_1D = StencilOperator.constant(1, {(-1,): 1, (0,): -2, (1,): 1})


def test_apply_laplacian_1d():
    """Test the 1-D Laplacian on x and x^2"""
    assert apply(LAPLACIAN_1D, PolyAnsatz.monomial(1, (1,))).is_zero()
    result = apply(LAPLACIAN_1D, PolyAnsatz.monomial(1, (2,)))
    assert result.coefficients == {(0,): [Fraction(2)]}


def test_apply_identity():
    """Test the identity stencil"""
    identity = StencilOperator.constant(2, {(0, 0): 1}, period=2)
    u = PolyAnsatz(2, 2, {(1, 0): [1, 2, 3, 4], (0, 0): [0, 0, 5, 0]})
    assert apply(identity, u) == u


def test_apply_matches_pointwise():
    """Test re-expansion against direct evaluation"""
    D = StencilOperator(1, 2, {(-1,): [1, 2], (0,): [-3, Fraction(1, 2)], (2,): [0, 1]})
    u = PolyAnsatz(1, 2, {(2,): [1, -1], (1,): [3, 0], (0,): [0, 7]})
    Du = apply(D, u)
    for x in range(-5, 6):
        assert Du((x,)) == D(u, (x,))


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 3), (2, 5), (3, 7)])
def test_laplacian_2d_kernel(n, expected):
    """Test discrete harmonic polynomial counts"""
    kernel = polynomial_kernel(StencilOperator.laplacian(2), n)
    assert kernel.dimension == expected
    D = StencilOperator.laplacian(2)
    assert all(apply(D, b).is_zero() for b in kernel.basis)


def test_laplacian_2d_period_two():
    """Test period doubling keeps the dimensions"""
    D = load_operator(str(DATA / "laplacian2d_period2.json"))
    assert [polynomial_kernel(D, n).dimension for n in range(3)] == [1, 3, 5]
    refined = refine_period(StencilOperator.laplacian(2))
    assert refined.period == 2
    assert polynomial_kernel(refined, 2).dimension == 5


def test_kernel_contains_harmonics():
    """Test x1 x2 and x1^2 - x2^2 lie in the kernel"""
    kernel = polynomial_kernel(StencilOperator.laplacian(2), 2)
    assert in_span(kernel, PolyAnsatz.monomial(2, (1, 1)))
    assert in_span(kernel, PolyAnsatz(2, 1, {(2, 0): [1], (0, 2): [-1]}))
    assert not in_span(kernel, PolyAnsatz.monomial(2, (2, 0)))


def test_kernel_translation_invariant():
    """Test translates of kernel vectors stay in the kernel"""
    kernel = polynomial_kernel(StencilOperator.laplacian(2), 3)
    for b in kernel.basis:
        for t in [(1, 0), (0, 1), (-2, 3)]:
            assert in_span(kernel, translate(b, t))


def test_screened_operator_trivial():
    """Test -Delta + 1 has no polynomial-like solutions"""
    D = load_operator(str(DATA / "screened2d.json"))
    for n in range(4):
        assert polynomial_kernel(D, n).dimension == 0
    report = check_bound(D, 3)
    assert report.expect_trivial
    assert report.expectation_met


def test_check_bound_laplacian():
    """Test 5 <= C(4, 2) for the 2-D Laplacian"""
    report = check_bound(StencilOperator.laplacian(2), 2)
    assert report.dims == [1, 3, 5]
    assert report.bound == comb(4, 2)
    assert report.slack == 1
    assert report.monotone
    assert report.harmonic_bound == 6
    assert report.expectation_met


def test_check_bound_degree_zero():
    """Test dim P_0 = s"""
    report = check_bound(StencilOperator.laplacian(2), 0)
    assert report.dimension == report.s == report.bound == 1


def test_periodic_operator_bound():
    """Test a genuinely periodic operator respects the bound"""
    D = StencilOperator(1, 2, {(-1,): [1, 2], (0,): [-2, -4], (1,): [1, 2]})
    report = check_bound(D, 3)
    assert all(d <= report.s * comb(k + 1, 1) for k, d in enumerate(report.dims))
    assert all(apply(D, b).is_zero() for b in polynomial_kernel(D, 3).basis)


def test_commutes_with_period_shift():
    """Test D commutes with translations by the period lattice"""
    D = StencilOperator(2, 2, {(0, 0): [1, 2, 3, 4], (1, 0): [0, 1, 0, -1], (0, -1): [2, 2, 1, 1]})
    result = commutes_with_period_shift(D, Probe(samples=8))
    assert result.status == CheckStatus.PASSED


def test_ansatz_vector_round_trip():
    """Test unknown ordering round trip"""
    u = PolyAnsatz(2, 2, {(0, 1): [1, 0, 0, 2], (2, 0): [0, 0, 3, 0]})
    assert PolyAnsatz.from_vector(2, 2, 2, u.vector(2)) == u
    with pytest.raises(ArgumentError):
        u.vector(1)


def test_operator_validation():
    """Test malformed operators are rejected"""
    with pytest.raises(ArgumentError):
        StencilOperator(2, 1, {(1,): [1]})
    with pytest.raises(ArgumentError):
        StencilOperator(1, 2, {(1,): [1]})
    with pytest.raises(ArgumentError):
        StencilOperator(0, 1, {})
