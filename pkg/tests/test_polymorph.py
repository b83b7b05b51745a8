"""Tests for polymorphisms, bases and dimension formulas"""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.exceptions import ArgumentError, NotPolynomialLikeError, PropertyViolationError, UnsupportedGroupError
from app.services import catalogue
from app.services.diffcalc import coboundary
from app.services.gmodule import FloquetElement
from app.services.groups import GroupSpec
from app.services.polymorph import (
    Polymorphism,
    ScalarVector,
    SymmetricPolymorphism,
    basis,
    brute_force_dim_Ln,
    brute_force_dim_LnS,
    brute_force_unknowns,
    coefficients_in_basis,
    dim_Ln,
    dim_LnS,
    dim_Pn_bound,
    extend_to_Rr,
    from_Dn,
    from_basis_coefficients,
    telescoped_bound,
)
from app.utils.gaussian import GaussianRational
from app.utils.sampling import Probe

Z2 = GroupSpec.free_abelian(2)
H = GroupSpec.heisenberg()


def linear_form():
    """b = (5, 7) on Z^2 with scalar values"""
    return Polymorphism(1, Z2, {(0,): ScalarVector([5]), (1,): ScalarVector([7])}, ScalarVector.zero(1))


def test_eval_linear_form():
    """Test 2*5 + (-1)*7 = 3"""
    assert linear_form().eval((Z2.element(2, -1),)) == ScalarVector([3])


def test_eval_vanishes_on_identity():
    """Test normalization of polymorphisms"""
    L = Polymorphism(2, Z2, {(0, 1): ScalarVector([1]), (1, 1): ScalarVector([-2])}, ScalarVector.zero(1))
    assert L.eval((Z2.identity(), Z2.element(3, 4))).is_zero()


def test_eval_heisenberg_commutator():
    """Test polymorphisms factor through the abelianization"""
    zero = ScalarVector.zero(1)
    L = Polymorphism(2, H, {(0, 1): ScalarVector([1]), (1, 0): ScalarVector([3])}, zero)
    commutator = H.commutator(H.element(1, 0, 0), H.element(0, 1, 0))
    assert L.eval((commutator, H.element(2, 5, 1))).is_zero()
    g, h = H.element(1, 2, 0), H.element(-1, 4, 7)
    assert L.eval((g * commutator, h)) == L.eval((g, h))


def test_eval_torsion_vanishes():
    """Test torsion generators are killed"""
    G = GroupSpec.fin_gen_abelian(1, [4])
    L = Polymorphism(1, G, {(0,): ScalarVector([2])}, ScalarVector.zero(1))
    assert L.eval((G.element(0, 1),)).is_zero()
    assert L.eval((G.element(3, 2),)) == ScalarVector([6])


def test_eval_multilinear():
    """Test additivity in each slot"""
    L = Polymorphism(2, Z2, {(0, 1): ScalarVector([2]), (1, 1): ScalarVector([-1])}, ScalarVector.zero(1))
    probe = Probe()
    for _ in range(10):
        g, g2, h = Z2.random_tuple(probe, 3)
        assert L.eval((g * g2, h)) == L.eval((g, h)) + L.eval((g2, h))
        assert L.eval((h, g * g2)) == L.eval((h, g)) + L.eval((h, g2))


def test_polymorphism_is_cocycle():
    """Test delta L = 0 for a Floquet-valued polymorphism"""
    zero = FloquetElement.zero(2)
    L = Polymorphism(2, Z2, {(0, 1): FloquetElement.exponential(2, (1, 0)), (1, 1): FloquetElement.constant(2, 3)}, zero)
    c = coboundary(L.as_cochain())
    probe = Probe()
    for _ in range(10):
        assert c(Z2.random_tuple(probe, 3)).is_zero()


def test_basis_counts():
    """Test the basis has s * r^n forms"""
    assert len(basis(1, 2, 1)) == 2
    assert len(basis(2, 2, 1)) == 4
    assert len(basis(2, 3, 2)) == 18
    with pytest.raises(ArgumentError):
        basis(0, 2, 1)


def test_basis_coordinates():
    """Test coordinates in the basis rebuild the form"""
    coefficients = {((0, 1), 0): Fraction(3), ((1, 1), 1): Fraction(-1, 2)}
    L = from_basis_coefficients(coefficients, 2, 2, 2)
    assert coefficients_in_basis(L) == coefficients
    g, h = Z2.element(1, 2), Z2.element(3, 4)
    assert L.eval((g, h)) == ScalarVector([3 * 1 * 4, Fraction(-1, 2) * 2 * 4])


def test_dimension_formulas():
    """Test dimension values"""
    assert (dim_Ln(2, 2, 1), dim_LnS(2, 2, 1), dim_Pn_bound(2, 2, 1)) == (4, 3, 6)
    assert dim_Ln(1, 3, 2) == dim_LnS(1, 3, 2) == 6
    assert dim_LnS(3, 2, 2) == 8
    assert dim_Pn_bound(0, 3, 2) == 2
    assert dim_Pn_bound(3, 1, 1) == 4
    assert telescoped_bound(2, 2, 1) == 7


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("s", [1, 2])
def test_brute_force_dimensions(n, r, s):
    """Test formulas against brute-force ranks"""
    assert brute_force_dim_Ln(n, r, s) == dim_Ln(n, r, s)
    assert brute_force_dim_LnS(n, r, s) == dim_LnS(n, r, s) == s * comb(n + r - 1, r - 1)


def test_brute_force_additivity_system():
    """Test the additivity system alone pins down the dimensions"""
    assert brute_force_unknowns(4, 2) == 256
    assert brute_force_dim_Ln(4, 2, 1) == 16
    assert brute_force_dim_LnS(4, 2, 1) == 5
    assert brute_force_dim_Ln(1, 1, 3) == 3
    with pytest.raises(ArgumentError):
        brute_force_dim_Ln(0, 2, 1)


def test_symmetric_polymorphism_validation():
    """Test asymmetric tensors are rejected"""
    zero = ScalarVector.zero(1)
    with pytest.raises(PropertyViolationError):
        SymmetricPolymorphism(2, Z2, {(0, 1): ScalarVector([1])}, zero)
    L = SymmetricPolymorphism(2, Z2, {(0, 1): ScalarVector([1]), (1, 0): ScalarVector([1])}, zero)
    assert L.is_symmetric


def test_from_Dn_product():
    """Test x1 x2 gives b_12 = b_21 = 1 and b_11 = b_22 = 0"""
    a = FloquetElement.monomial(2, (1, 1))
    extraction = from_Dn(a, 2, Probe())
    L = extraction.polymorphism
    assert isinstance(L, SymmetricPolymorphism)
    assert L[(0, 1)] == FloquetElement.constant(2, 1)
    assert L[(1, 0)] == FloquetElement.constant(2, 1)
    assert L[(0, 0)].is_zero()
    assert L[(1, 1)].is_zero()
    assert all(check.ok for check in extraction.checks)


def test_from_Dn_invariant_entry():
    """Test e^{2 pi i x} x gives b_1 = e^{2 pi i x}"""
    a = FloquetElement.monomial(1, (1,), k=(1,))
    L = from_Dn(a, 1, Probe()).polymorphism
    assert L[(0,)] == FloquetElement.exponential(1, (1,))


def test_from_Dn_requires_membership():
    """Test extraction refuses elements outside P_n"""
    with pytest.raises(NotPolynomialLikeError):
        from_Dn(FloquetElement.monomial(1, (3,)), 2, Probe())


@st.composite
def elements_with_degree_bound(draw):
    r = draw(st.integers(min_value=1, max_value=3))
    n = draw(st.integers(min_value=1, max_value=3))
    terms = {}
    for _ in range(draw(st.integers(min_value=0, max_value=4))):
        k = tuple(draw(st.lists(st.integers(-2, 2), min_size=r, max_size=r)))
        nu = [0] * r
        for _ in range(draw(st.integers(min_value=0, max_value=n))):
            nu[draw(st.integers(min_value=0, max_value=r - 1))] += 1
        terms[(k, tuple(nu))] = draw(st.integers(-4, 4))
    return FloquetElement(r, terms), n


@hypothesis_settings(max_examples=100, deadline=None)
@given(elements_with_degree_bound())
def test_from_Dn_zero_iff_lower_degree(pair):
    """Test the extracted tensor vanishes exactly when degree < n"""
    a, n = pair
    L = from_Dn(a, n, Probe(samples=4)).polymorphism
    assert L.is_zero() == (a.degree() <= n - 1)


def test_from_Dn_heisenberg():
    """Test the Heisenberg center coordinate: multilinear, commutators vanish, asymmetric"""
    u = catalogue.build("heisenberg_center")
    extraction = from_Dn(u, 2, Probe())
    assert extraction.multilinearity.ok
    assert extraction.commutators.ok
    assert not extraction.symmetry.symmetric
    L = extraction.polymorphism
    h = H.element(3, -2, 5)
    assert L[(0, 1)](h) == 1
    assert L[(1, 0)](h) == 0


def test_extension_to_reals():
    """Test the real-multilinear extension"""
    ext = extend_to_Rr(linear_form())
    assert ext((0.5, 0)) == ScalarVector([Fraction(5, 2)])
    assert ext((2, -1)) == linear_form().eval((Z2.element(2, -1),))


def test_extension_bilinear():
    """Test bilinearity of the extension on real vectors"""
    zero = ScalarVector.zero(1)
    L = Polymorphism(2, Z2, {(0, 1): ScalarVector([2]), (1, 0): ScalarVector([-3])}, zero)
    ext = extend_to_Rr(L)
    u, v, w = (0.25, 1.5), (-0.75, 2.0), (3.0, -0.5)
    total = (u[0] + v[0], u[1] + v[1])
    assert ext(total, w) == ext(u, w) + ext(v, w)


def test_extension_needs_free_abelian():
    """Test the extension is refused with torsion or non-abelian groups"""
    zero = ScalarVector.zero(1)
    with pytest.raises(UnsupportedGroupError):
        extend_to_Rr(Polymorphism(1, H, {}, zero))


def test_scalar_vector_complex_entries():
    """Test scalar vectors carry Gaussian rationals"""
    v = ScalarVector([GaussianRational(1, 2), 3])
    assert (v + v).values == (GaussianRational(2, 4), GaussianRational(6))
