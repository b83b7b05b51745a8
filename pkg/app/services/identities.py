"""Identity and property suite for difference operators and coboundaries.

Every check returns a `CheckResult`; exact module kinds are compared exactly,
black boxes on the probe's sample points within `probe.tol`.
"""

from __future__ import annotations

import itertools
from typing import Iterable, List, Optional, Sequence, Tuple

from app.exceptions import ArgumentError, ModuleMismatchError, NotPolynomialLikeError
from app.models.report import CheckResult, CheckStatus
from app.services.diffcalc import (
    Cochain,
    GroupTuple,
    check_normalization,
    check_symmetry,
    coboundary,
    d,
    delta,
    difference,
    difference_closed,
    is_polynomial_like,
)
from app.services.gmodule import FloquetElement, ModuleElement, is_invariant
from app.services.groups import GroupSpec
from app.services.logger import get_logger
from app.utils.sampling import Probe

logger = get_logger(__name__)

Comparison = Tuple[object, ModuleElement, ModuleElement]


def sample_tuples(group: GroupSpec, length: int, probe: Probe, limit: Optional[int] = None) -> List[GroupTuple]:
    """Generator tuples (at most 16) followed by `probe.samples` random tuples"""
    tuples = list(itertools.islice(itertools.product(group.generators(), repeat=length), 16))
    count = probe.samples if limit is None else limit
    tuples += [group.random_tuple(probe, length) for _ in range(count)]
    return tuples


def _coords(gs: Sequence) -> list:
    return [list(g.coords) for g in gs]


def _compare(name: str, comparisons: Iterable[Comparison], exact: bool, probe: Probe) -> CheckResult:
    checked = 0
    for label, lhs, rhs in comparisons:
        checked += 1
        witness = lhs.distinguish(rhs, probe)
        if witness is not None:
            logger.info("identity_failed", check=name, at=label)
            return CheckResult.failed(name, {"at": label, "difference": witness}, checked, exact)
    return CheckResult.passed(name, checked, exact)


def _require_ring(*elements: ModuleElement) -> None:
    for a in elements:
        if not callable(getattr(a, "__mul__", None)):
            raise ModuleMismatchError(f"{type(a).__name__} is not a ring")
    first = elements[0]
    for other in elements[1:]:
        first._check_same_kind(other)


# Operator identities


def closed_form_check(a: ModuleElement, n: int, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """Recursive D^n agrees with the inclusion-exclusion formula"""
    probe = probe or Probe()
    recursive = difference(a, n)
    return _compare(
        f"closed_form[n={n}]",
        ((_coords(gs), recursive(gs), difference_closed(a, gs)) for gs in tuples),
        a.exact,
        probe,
    )


def recursion_identity_check(a: ModuleElement, n: int, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """[D^{n+1} a](g_1..g_{n+1}) = [D^n a^{g_1}](g_2..g_{n+1}) - [D^n a](g_2..g_{n+1})"""
    probe = probe or Probe()

    def comparisons():
        for gs in tuples:
            if len(gs) != n + 1:
                raise ArgumentError(f"recursion identity needs {n + 1}-tuples, got {len(gs)}")
            lhs = difference_closed(a, gs)
            rhs = difference_closed(a.act(gs[0]), gs[1:]) - difference_closed(a, gs[1:])
            yield _coords(gs), lhs, rhs

    return _compare(f"recursion[n={n}]", comparisons(), a.exact, probe)


def delta_relation_check(a: ModuleElement, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """Delta^n a equals the signed sum of S_s built from omitted-index products"""
    probe = probe or Probe()
    group = a.group

    def comparisons():
        for gs in tuples:
            n = len(gs)
            terms = []
            for s in range(1, n + 1):
                for omitted in itertools.combinations(range(1, n + 1), s):
                    terms.append(((-1) ** s, group.pi_product(omitted, gs)))
            yield _coords(gs), delta(a, gs), a.combine(terms)

    return _compare("delta_sum", comparisons(), a.exact, probe)


def coboundary_square_check(c: Cochain, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """delta o delta = 0"""
    probe = probe or Probe()
    twice = coboundary(coboundary(c))
    return _compare(
        f"coboundary_square[n={c.arity}]",
        ((_coords(gs), twice(gs), c.zero) for gs in tuples),
        c.zero.exact,
        probe,
    )


def coboundary_slice_check(c: Cochain, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """[delta^n c](h, g_1..g_n) = c(g) - c(h g_1, g_2..) + c(h, g_2..) - [delta^{n-1} c_h](g)

    Tuples have length n + 1 and start with h; requires n >= 1.
    """
    probe = probe or Probe()
    n = c.arity
    if n < 1:
        raise ArgumentError("the slicing identity needs a cochain of arity >= 1")
    group = c.group
    full = coboundary(c)

    def comparisons():
        for hs in tuples:
            h, gs = hs[0], hs[1:]
            rhs = c(gs) - c((group.multiply(h, gs[0]),) + gs[1:]) + c((h,) + gs[1:])
            rhs = rhs - coboundary(c.slice(h))(gs)
            yield _coords(hs), full(hs), rhs

    return _compare(f"coboundary_slice[n={n}]", comparisons(), c.zero.exact, probe)


def delta_d_relation_check(c: Cochain, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """delta^n (d c) = d (delta^{n-1} c) + (-1)^n d (d c) for c of arity n - 1"""
    probe = probe or Probe()
    n = c.arity + 1
    lhs = coboundary(d(c))
    first = d(coboundary(c))
    second = d(d(c))

    def comparisons():
        for gs in tuples:
            rhs = first(gs) + second(gs) if n % 2 == 0 else first(gs) - second(gs)
            yield _coords(gs), lhs(gs), rhs

    return _compare(f"delta_d_relation[n={n}]", comparisons(), c.zero.exact, probe)


def delta_D_relation_check(a: ModuleElement, n: int, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """delta^n D^n a = -D^{n+1} a for odd n and 0 for even n"""
    probe = probe or Probe()
    lhs = coboundary(difference(a, n))

    def comparisons():
        for gs in tuples:
            rhs = -difference_closed(a, gs) if n % 2 else a.zero_like()
            yield _coords(gs), lhs(gs), rhs

    return _compare(f"delta_D_relation[n={n}]", comparisons(), a.exact, probe)


def normalization_check(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> CheckResult:
    """[D^n a](..., e, ...) = 0"""
    probe = probe or Probe()
    name = f"normalization[n={n}]"
    violation = check_normalization(a, n, probe)
    checked = max(probe.samples // 8, 1) * n
    if violation is not None:
        return CheckResult.failed(name, violation, checked, a.exact)
    return CheckResult.passed(name, checked, a.exact)


# Ring identities


def leibniz_check(a: ModuleElement, b: ModuleElement, elements: Sequence, probe: Optional[Probe] = None) -> CheckResult:
    """D^1(ab)(g) = a^g * D^1 b(g) + D^1 a(g) * b"""
    _require_ring(a, b)
    probe = probe or Probe()

    def comparisons():
        for g in elements:
            lhs = difference_closed(a * b, (g,))
            rhs = a.act(g) * difference_closed(b, (g,)) + difference_closed(a, (g,)) * b
            yield list(g.coords), lhs, rhs

    return _compare("leibniz", comparisons(), a.exact and b.exact, probe)


def ring_closure_check(a: ModuleElement, m: int, b: ModuleElement, n: int, probe: Optional[Probe] = None) -> CheckResult:
    """D^m a = 0 and D^n b = 0 imply D^{m+n-1}(ab) = 0 (m, n >= 1)"""
    _require_ring(a, b)
    if m < 1 or n < 1:
        raise ArgumentError(f"annihilating orders must be >= 1, got {m} and {n}")
    probe = probe or Probe()
    for element, order in ((a, m), (b, n)):
        certificate = is_polynomial_like(element, order - 1, probe)
        if not certificate.holds:
            raise NotPolynomialLikeError(
                f"D^{order} does not annihilate {element!r}", certificate.witness
            )
    product = is_polynomial_like(a * b, m + n - 2, probe)
    name = f"ring_closure[m={m},n={n}]"
    exact = product.kind.value == "exact"
    if not product.holds:
        return CheckResult.failed(name, {"at": product.witness, "value": product.value}, product.checked, exact)
    return CheckResult.passed(name, product.checked, exact)


def invariant_linearity_check(a: ModuleElement, b: ModuleElement, n: int, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """D^n(ab) = a D^n b for invariant a"""
    _require_ring(a, b)
    probe = probe or Probe()
    certificate = is_invariant(a, probe=probe)
    if not certificate.invariant:
        raise ArgumentError(f"{a!r} is not invariant", list(certificate.witness.coords))
    product = a * b
    return _compare(
        f"invariant_linearity[n={n}]",
        ((_coords(gs), difference_closed(product, gs), a * difference_closed(b, gs)) for gs in tuples),
        a.exact and b.exact,
        probe,
    )


def invariant_part(a: ModuleElement, n: Optional[int] = None, probe: Optional[Probe] = None) -> Optional[ModuleElement]:
    """An invariant element built from a, or None.

    Floquet elements give their nu = 0 part. Other kinds give D^n a at the first
    free generator repeated n times, which is invariant when a is in P_n; pass
    n = None when membership does not hold.
    """
    if isinstance(a, FloquetElement):
        part = a.by_exponent().get((0,) * a.rank)
        return None if part is None or part.is_zero() else part
    if n is None or n < 1 or not a.group.abelian_rank:
        return None
    h = a.group.free_generators()[0]
    part = difference_closed(a, (h,) * n)
    return part if is_invariant(part, probe=probe or Probe()).invariant else None


# Consequences of membership


def cocycle_check(a: ModuleElement, n: int, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """delta^n D^n a = 0 for a in P_n"""
    probe = probe or Probe()
    lhs = coboundary(difference(a, n))
    zero = a.zero_like()
    return _compare(f"cocycle[n={n}]", ((_coords(gs), lhs(gs), zero) for gs in tuples), a.exact, probe)


def filtration_check(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> CheckResult:
    """a in P_n implies a in P_{n+1}"""
    probe = probe or Probe()
    name = f"filtration[n={n}]"
    lower = is_polynomial_like(a, n, probe)
    if not lower.holds:
        return CheckResult(name=name, status=CheckStatus.SKIPPED, exact=a.exact, detail="a is not in P_n")
    upper = is_polynomial_like(a, n + 1, probe)
    if not upper.holds:
        return CheckResult.failed(name, upper.witness, upper.checked, a.exact)
    return CheckResult.passed(name, lower.checked + upper.checked, a.exact)


def translation_invariance_check(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> CheckResult:
    """a in P_n implies a^g in P_n for every generator g"""
    probe = probe or Probe()
    name = f"translation_invariance[n={n}]"
    checked = 0
    for g in a.group.generators():
        certificate = is_polynomial_like(a.act(g), n, probe)
        checked += certificate.checked
        if not certificate.holds:
            return CheckResult.failed(name, {"g": list(g.coords), "at": certificate.witness}, checked, a.exact)
    return CheckResult.passed(name, checked, a.exact)


def invariant_values_check(a: ModuleElement, n: int, tuples: Sequence[GroupTuple], probe: Optional[Probe] = None) -> CheckResult:
    """Every value of D^n a is invariant when a is in P_n"""
    probe = probe or Probe()
    name = f"invariant_values[n={n}]"
    for i, gs in enumerate(tuples):
        certificate = is_invariant(difference_closed(a, gs), probe=probe)
        if not certificate.invariant:
            witness = {"at": _coords(gs), "g": list(certificate.witness.coords) if certificate.witness else None}
            return CheckResult.failed(name, witness, i + 1, a.exact)
    return CheckResult.passed(name, len(tuples), a.exact)


def symmetry_check(a: ModuleElement, k: int, probe: Optional[Probe] = None) -> CheckResult:
    """Permutation symmetry of D^k a; asserted for abelian groups, recorded otherwise"""
    probe = probe or Probe()
    report = check_symmetry(a, k, probe)
    name = f"symmetry[k={k}]"
    if a.group.is_abelian:
        if not report.symmetric:
            return CheckResult.failed(name, report.witness, report.checked, a.exact)
        return CheckResult.passed(name, report.checked, a.exact)
    return CheckResult(
        name=name,
        status=CheckStatus.DIAGNOSTIC,
        exact=a.exact,
        checked=report.checked,
        witness=report.witness,
        detail="symmetric" if report.symmetric else "asymmetric",
    )


# Suite


def run_suite(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> List[CheckResult]:
    """Membership of a in P_n followed by every identity that applies to it"""
    probe = probe or Probe()
    group = a.group
    top = min(n + 1, 4)
    results: List[CheckResult] = []

    certificate = is_polynomial_like(a, n, probe)
    membership = f"membership[n={n}]"
    if certificate.holds:
        results.append(CheckResult.passed(membership, certificate.checked, a.exact and certificate.kind.value == "exact"))
    else:
        results.append(CheckResult.failed(
            membership, {"at": certificate.witness, "value": certificate.value}, certificate.checked, a.exact,
        ))
    logger.info("membership", n=n, holds=certificate.holds, kind=certificate.kind.value)

    limit = max(probe.samples // 4, 1)
    for k in range(1, top + 1):
        tuples = sample_tuples(group, k, probe, limit)
        results.append(closed_form_check(a, k, tuples, probe))
        results.append(delta_D_relation_check(a, k, sample_tuples(group, k + 1, probe, limit), probe))
        results.append(normalization_check(a, k, probe))
    results.append(recursion_identity_check(a, 1, sample_tuples(group, 2, probe, limit), probe))
    results.append(delta_relation_check(a, sample_tuples(group, 2, probe, limit), probe))
    results.append(leibniz_check(a, a, group.generators() + [group.random_element(probe) for _ in range(limit)], probe))
    invariant = invariant_part(a, n if certificate.holds else None, probe)
    if invariant is None:
        results.append(CheckResult(
            name=f"invariant_linearity[n={top}]", status=CheckStatus.SKIPPED, exact=a.exact, detail="no invariant part",
        ))
    else:
        for k in range(1, top + 1):
            results.append(invariant_linearity_check(invariant, a, k, sample_tuples(group, k, probe, limit), probe))
    base = Cochain.constant(a)
    results.append(coboundary_square_check(d(base), sample_tuples(group, 3, probe, limit), probe))
    results.append(coboundary_slice_check(d(base), sample_tuples(group, 2, probe, limit), probe))
    results.append(delta_d_relation_check(d(base), sample_tuples(group, 3, probe, limit), probe))

    skipped = "a is not in P_n"
    if not certificate.holds:
        for name in ("cocycle", "translation_invariance", "invariant_values", "ring_closure"):
            results.append(CheckResult(name=f"{name}[n={n}]", status=CheckStatus.SKIPPED, exact=a.exact, detail=skipped))
        return results

    results.append(cocycle_check(a, n, sample_tuples(group, n + 1, probe, limit), probe))
    results.append(filtration_check(a, n, probe))
    results.append(translation_invariance_check(a, n, probe))
    if n >= 1:
        results.append(invariant_values_check(a, n, sample_tuples(group, n, probe, limit), probe))
        results.append(ring_closure_check(a, n + 1, a, n + 1, probe))
    for k in range(2, top + 1):
        results.append(symmetry_check(a, k, probe))
    return results
