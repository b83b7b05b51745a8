"""Tests for Floquet decomposition and reconstruction"""

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.exceptions import NotPolynomialLikeError, UnsupportedGroupError
from app.services import catalogue
from app.services.diffcalc import difference_closed
from app.services.floquet import (
    Decomposition,
    decompose,
    export_decomposition,
    fit_fourier,
    leading_coefficients,
    monomial,
    monomial_difference,
    reconstruct,
)
from app.services.gmodule import FloquetElement, NumericFunction
from app.services.groups import GroupSpec
from app.services.polymorph import from_Dn
from app.utils.combinatorics import arrangements, nu_factorial
from app.utils.sampling import Probe



def e(*k):
    return FloquetElement.exponential(len(k), k)


def x_pow(rank, nu):
    return FloquetElement.monomial(rank, nu)


@st.composite
def floquet_elements(draw, max_degree=4):
    r = draw(st.integers(min_value=1, max_value=3))
    count = draw(st.integers(min_value=0, max_value=6))
    terms = {}
    for _ in range(count):
        k = tuple(draw(st.lists(st.integers(-2, 2), min_size=r, max_size=r)))
        nu = [0] * r
        for _ in range(draw(st.integers(0, max_degree))):
            nu[draw(st.integers(0, r - 1))] += 1
        terms[(k, tuple(nu))] = draw(st.integers(-6, 6))
    return FloquetElement(r, terms)


def test_monomial_difference_values():
    """Test D^n x^nu on small tuples"""
    assert monomial_difference((2,), [(3,), (-2,)]) == 2 * 3 * -2
    assert monomial_difference((1, 1), [(1, 0), (0, 1)]) == 1
    assert monomial_difference((2, 1), [(1, 0), (1, 0), (0, 1)]) == 2


@pytest.mark.parametrize("nu", [(1,), (2,), (3,), (1, 1), (2, 1), (0, 2), (1, 1, 1)])
def test_monomial_difference_matches_operator(nu):
    """Test the monomial formula against the closed-form operator"""
    r = len(nu)
    G = GroupSpec.free_abelian(r)
    a = x_pow(r, nu)
    n = sum(nu)
    probe = Probe()
    for _ in range(15):
        gs = G.random_tuple(probe, n, radius=2)
        value = difference_closed(a, gs)
        assert value == FloquetElement.constant(r, monomial_difference(nu, gs))
        assert difference_closed(a, gs + (G.random_element(probe, 2),)).is_zero()


def test_monomial_difference_on_basis():
    """Test the matching basis arrangement gives nu!"""
    nu = (2, 1)
    gens = GroupSpec.free_abelian(2).free_generators()
    for kappa in arrangements(nu):
        assert monomial_difference(nu, [gens[i] for i in kappa]) == nu_factorial(nu)


def test_leading_coefficients():
    """Test top coefficients of e^{2 pi i x} x + 3 and x1 x2"""
    p = e(1) * FloquetElement.coordinate(1, 0) + FloquetElement.constant(1, 3)
    assert leading_coefficients(p, 1).coefficients == {(1,): e(1)}
    q = x_pow(2, (1, 1))
    coefficients = leading_coefficients(q, 2).coefficients
    assert coefficients[(1, 1)] == 1
    assert coefficients[(2, 0)].is_zero()
    assert coefficients[(0, 2)].is_zero()


def test_leading_coefficients_lower_degree():
    """Test elements of lower degree have zero top coefficients"""
    coefficients = leading_coefficients(FloquetElement.coordinate(2, 1), 2).coefficients
    assert all(a.is_zero() for a in coefficients.values())


def test_decompose_example():
    """Test x^2 + e^{2 pi i x} x + e^{4 pi i x}"""
    p = x_pow(1, (2,)) + e(1) * FloquetElement.coordinate(1, 0) + e(2)
    decomposition = decompose(p, 2)
    assert decomposition.coefficients == {(2,): FloquetElement.constant(1, 1), (1,): e(1), (0,): e(2)}
    assert reconstruct(decomposition) == p


def test_decompose_invariant():
    """Test an invariant element is its own constant coefficient"""
    p = e(1) + e(-3).scale(2)
    assert decompose(p, 0).coefficients == {(0,): p}


def test_reconstruct_trivial():
    """Test empty and constant decompositions"""
    zero = FloquetElement.zero(1)
    assert reconstruct(Decomposition(0, zero)).is_zero()
    assert reconstruct(Decomposition(0, zero, {(0,): e(1)})) == e(1)


def test_decompose_not_polynomial_like():
    """Test decomposition below the degree reports the failing level"""
    with pytest.raises(NotPolynomialLikeError) as info:
        decompose(x_pow(1, (3,)), 2)
    assert info.value.level == 2


def test_decompose_non_abelian():
    """Test decomposition is refused on the Heisenberg group"""
    with pytest.raises(UnsupportedGroupError):
        decompose(catalogue.build("heisenberg_center"), 2)


@hypothesis_settings(max_examples=200, deadline=None)
@given(floquet_elements())
def test_round_trip(p):
    """Test reconstruct(decompose(p)) = p exactly"""
    decomposition = decompose(p, max(p.degree(), 0))
    assert reconstruct(decomposition) == p
    for nu, a in decomposition.coefficients.items():
        assert a.is_invariant_exact()
        assert p.by_exponent()[nu] == a


@hypothesis_settings(max_examples=30, deadline=None)
@given(floquet_elements(max_degree=3))
def test_tensor_matches_leading_coefficients(p):
    """Test the polymorphism tensor is nu! a_nu at every arrangement of nu"""
    n = p.degree()
    if n < 1:
        return
    L = from_Dn(p, n, Probe(samples=4)).polymorphism
    leading = leading_coefficients(p, n, verified=True)
    for nu, a in leading.coefficients.items():
        for kappa in arrangements(nu):
            assert L[kappa] == a.scale(nu_factorial(nu))


def test_decompose_numeric():
    """Test sin(2 pi x) x has a_1 = sin(2 pi x) at sample points"""
    p = catalogue.build("sin_times_x")
    probe = Probe()
    decomposition = decompose(p, 1, probe)
    a1 = decomposition.coefficients[(1,)]
    for point in probe.reals(1, 20):
        assert a1(point) == pytest.approx(np.sin(2 * np.pi * point[0]), abs=1e-8)


@pytest.mark.parametrize("name", ["sin_times_x", "cos_periodic", "sin_times_square", "mixed_quadratic", "plane_wave_linear"])
def test_numeric_round_trip(name):
    """Test black-box round trips within tolerance at 50 points"""
    entry = catalogue.get(name)
    p = entry.build()
    probe = Probe(points=50)
    rebuilt = reconstruct(decompose(p, entry.degree, probe))
    assert rebuilt.distinguish(p, probe) is None


def test_fit_fourier():
    """Test the Fourier export of sin(2 pi x)"""
    f = NumericFunction(1, lambda x: np.sin(2 * np.pi * x[0]))
    fitted = fit_fourier(f, cutoff=3, grid=16)
    assert fitted.is_invariant_exact()
    terms = fitted.terms
    assert set(terms) == {((1,), (0,)), ((-1,), (0,))}
    assert str(terms[((1,), (0,))]) == "-1/2i"


def test_export_decomposition():
    """Test exported coefficients are Floquet elements"""
    p = catalogue.build("sin_times_square")
    exported = export_decomposition(decompose(p, 2, Probe()), cutoff=2, grid=16)
    assert all(isinstance(a, FloquetElement) for a in exported.coefficients.values())
    assert (1,) in exported.coefficients
    assert exported.coefficients[(1,)] == FloquetElement.constant(1, 1)


def test_monomial_in_module():
    """Test monomials are built in the module of the template"""
    numeric = monomial(catalogue.build("cos_periodic"), (2,))
    assert numeric([3.0]) == pytest.approx(9.0)
    assert monomial(FloquetElement.zero(2), (1, 0)) == FloquetElement.coordinate(2, 0)
