"""Tests for the identity suite"""

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.exceptions import ArgumentError, NotPolynomialLikeError
from app.models.report import CheckStatus
from app.services import catalogue
from app.services.diffcalc import Cochain, d, difference_closed
from app.services.gmodule import FloquetElement
from app.services.groups import GroupSpec
from app.services.identities import (
    closed_form_check,
    coboundary_slice_check,
    coboundary_square_check,
    cocycle_check,
    delta_D_relation_check,
    delta_d_relation_check,
    delta_relation_check,
    invariant_linearity_check,
    invariant_part,
    leibniz_check,
    recursion_identity_check,
    ring_closure_check,
    run_suite,
    sample_tuples,
    symmetry_check,
)
from app.utils.sampling import Probe

Z1 = GroupSpec.free_abelian(1)
Z2 = GroupSpec.free_abelian(2)
H = GroupSpec.heisenberg()


def probe():
    return Probe(samples=8)


def test_leibniz_example():
    """Test D^1(x^2)(1) = 2x + 1 and the Leibniz formula"""
    x = FloquetElement.coordinate(1, 0)
    g = Z1.element(1)
    assert difference_closed(x * x, (g,)) == x.scale(2) + FloquetElement.constant(1, 1)
    result = leibniz_check(x, x, [g, Z1.element(-4)], probe())
    assert result.status == CheckStatus.PASSED
    assert result.exact


def test_recursion_example():
    """Test the recursion identity on x^2 at (1, 2)"""
    a = FloquetElement.monomial(1, (2,))
    gs = (Z1.element(1), Z1.element(2))
    assert difference_closed(a, gs) == FloquetElement.constant(1, 4)
    assert recursion_identity_check(a, 1, [gs], probe()).ok


def test_recursion_wrong_length():
    """Test the recursion identity rejects tuples of the wrong length"""
    a = FloquetElement.monomial(1, (2,))
    with pytest.raises(ArgumentError):
        recursion_identity_check(a, 1, [(Z1.element(1),)], probe())


def test_operator_identities_floquet():
    """Test closed form, delta sums and delta D relations exactly"""
    a = FloquetElement.monomial(2, (2, 1), k=(1, -1)) + FloquetElement.monomial(2, (0, 1))
    p = probe()
    for n in range(1, 5):
        assert closed_form_check(a, n, sample_tuples(Z2, n, p, 4), p).ok
        result = delta_D_relation_check(a, n, sample_tuples(Z2, n + 1, p, 4), p)
        assert result.status == CheckStatus.PASSED
    assert delta_relation_check(a, sample_tuples(Z2, 3, p, 4), p).ok


def test_delta_D_relation_heisenberg():
    """Test delta^n D^n = -D^{n+1} (odd n) on the Heisenberg group"""
    u = catalogue.build("heisenberg_center")
    p = probe()
    for n in (1, 2, 3):
        assert delta_D_relation_check(u, n, sample_tuples(H, n + 1, p, 3), p).ok


def test_coboundary_identities():
    """Test delta o delta = 0, slicing and the delta-d relation"""
    a = FloquetElement.monomial(1, (3,), k=(1,))
    p = probe()
    c = d(Cochain.constant(a))
    assert coboundary_square_check(c, sample_tuples(Z1, 3, p, 4), p).ok
    assert coboundary_slice_check(c, sample_tuples(Z1, 2, p, 4), p).ok
    assert delta_d_relation_check(c, sample_tuples(Z1, 3, p, 4), p).ok
    assert delta_d_relation_check(Cochain.constant(a), sample_tuples(Z1, 2, p, 4), p).ok


def test_coboundary_slice_needs_arity():
    """Test slicing is rejected for 0-cochains"""
    with pytest.raises(ArgumentError):
        coboundary_slice_check(Cochain.constant(FloquetElement.constant(1, 1)), [], probe())


def test_ring_closure():
    """Test a in P_1, b in P_2 gives D^4(ab) = 0 exactly"""
    a = FloquetElement.monomial(1, (1,), k=(1,)) + FloquetElement.constant(1, 2)
    b = FloquetElement.monomial(1, (2,), k=(-2,)) + FloquetElement.coordinate(1, 0)
    result = ring_closure_check(a, 2, b, 3, probe())
    assert result.status == CheckStatus.PASSED
    assert result.exact


@st.composite
def ring_factors(draw, m, n):
    r = draw(st.integers(min_value=1, max_value=3))

    def element(max_degree):
        terms = {}
        for _ in range(draw(st.integers(min_value=1, max_value=3))):
            k = tuple(draw(st.lists(st.integers(-2, 2), min_size=r, max_size=r)))
            nu = [0] * r
            for _ in range(draw(st.integers(min_value=0, max_value=max_degree))):
                nu[draw(st.integers(min_value=0, max_value=r - 1))] += 1
            terms[(k, tuple(nu))] = draw(st.integers(-3, 3))
        return FloquetElement(r, terms)

    return element(m - 1), element(n - 1)


RING_ORDERS = [(m, n) for m in range(1, 5) for n in range(1, 6 - m)]


@pytest.mark.parametrize("m, n", RING_ORDERS)
@hypothesis_settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_ring_closure_random(m, n, data):
    """Test D^m a = 0 and D^n b = 0 give D^{m+n-1}(ab) = 0 exactly for random elements"""
    a, b = data.draw(ring_factors(m, n))
    result = ring_closure_check(a, m, b, n, probe())
    assert result.status == CheckStatus.PASSED
    assert result.exact


def test_ring_closure_precondition():
    """Test ring closure requires the annihilating orders to hold"""
    x = FloquetElement.coordinate(1, 0)
    with pytest.raises(NotPolynomialLikeError):
        ring_closure_check(x * x, 1, x, 2, probe())
    with pytest.raises(ArgumentError):
        ring_closure_check(x, 0, x, 1, probe())


def test_invariant_linearity():
    """Test D^n(ab) = a D^n b for invariant a"""
    a = FloquetElement.exponential(1, (3,))
    b = FloquetElement.monomial(1, (2,), k=(1,))
    p = probe()
    assert invariant_linearity_check(a, b, 2, sample_tuples(Z1, 2, p, 4), p).ok
    with pytest.raises(ArgumentError):
        invariant_linearity_check(b, a, 1, sample_tuples(Z1, 1, p, 4), p)


def test_cocycle_and_symmetry():
    """Test D^n a is a symmetric cocycle for a in P_n"""
    a = FloquetElement.monomial(2, (1, 1)) + FloquetElement.monomial(2, (2, 0), k=(0, 1))
    p = probe()
    assert cocycle_check(a, 2, sample_tuples(Z2, 3, p, 4), p).ok
    assert symmetry_check(a, 2, p).status == CheckStatus.PASSED


def test_symmetry_diagnostic_heisenberg():
    """Test asymmetry is recorded, not failed, on the Heisenberg group"""
    result = symmetry_check(catalogue.build("heisenberg_center"), 2, probe())
    assert result.status == CheckStatus.DIAGNOSTIC
    assert result.detail == "asymmetric"
    assert result.ok


def test_run_suite_square():
    """Test every identity passes on x^2 with n = 2"""
    results = run_suite(FloquetElement.monomial(1, (2,)), 2, probe())
    assert all(r.ok for r in results)
    assert results[0].name == "membership[n=2]"
    assert results[0].exact


def test_run_suite_membership_failure():
    """Test x^2 with n = 1 fails membership and skips dependent checks"""
    results = run_suite(FloquetElement.monomial(1, (2,)), 1, probe())
    membership = results[0]
    assert membership.status == CheckStatus.FAILED
    assert membership.witness == {"at": [[1], [1]], "value": "2"}
    skipped = [r.name for r in results if r.status == CheckStatus.SKIPPED]
    assert "cocycle[n=1]" in skipped


def test_run_suite_zero_element():
    """Test the zero element passes trivially"""
    assert all(r.ok for r in run_suite(FloquetElement.zero(1), 0, probe()))


def test_run_suite_numeric():
    """Test the sampled suite on a black box"""
    results = run_suite(catalogue.build("sin_times_x"), 1, probe())
    assert all(r.ok for r in results)
    assert not results[0].exact


def test_run_suite_heisenberg():
    """Test the suite on the Heisenberg center coordinate"""
    results = run_suite(catalogue.build("heisenberg_center"), 2, probe())
    failed = [r.name for r in results if not r.ok]
    assert failed == []


def test_invariant_part():
    """Test the nu = 0 part of a Floquet element and D^n a of a black box"""
    a = FloquetElement.monomial(1, (2,)) + FloquetElement.exponential(1, (1,), 3)
    assert invariant_part(a) == FloquetElement.exponential(1, (1,), 3)
    assert invariant_part(FloquetElement.monomial(1, (2,))) is None
    assert invariant_part(catalogue.build("sin_times_x"), None, probe()) is None
    numeric = invariant_part(catalogue.build("sin_times_x"), 1, probe())
    assert abs(numeric((0.25,)) - 1) < 1e-9


def test_run_suite_invariant_linearity():
    """Test the suite checks D^k(ca) = c D^k a for the invariant part c of a"""
    a = FloquetElement.monomial(1, (2,)) + FloquetElement.constant(1, 3)
    results = {r.name: r for r in run_suite(a, 2, probe())}
    for k in (1, 2, 3):
        check = results[f"invariant_linearity[n={k}]"]
        assert check.status == CheckStatus.PASSED
        assert check.exact
    numeric = {r.name: r for r in run_suite(catalogue.build("sin_times_x"), 1, probe())}
    assert numeric["invariant_linearity[n=1]"].status == CheckStatus.PASSED
    assert not numeric["invariant_linearity[n=1]"].exact
    skipped = {r.name: r for r in run_suite(FloquetElement.monomial(1, (2,)), 2, probe())}
    assert skipped["invariant_linearity[n=3]"].status == CheckStatus.SKIPPED
