"""Normalized cochains, iterated difference operators and the coboundary"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from app.exceptions import ArgumentError, PropertyViolationError
from app.services.gmodule import FloquetElement, ModuleElement
from app.services.groups import GroupElement, GroupSpec
from app.services.logger import get_logger
from app.utils.combinatorics import gray_code, simplex_grid
from app.utils.sampling import Probe

logger = get_logger(__name__)

GroupTuple = Tuple[GroupElement, ...]


class Cochain:
    """Lazily evaluated map G^n -> A.

    Values are computed on demand; nothing is tabulated.
    """

    def __init__(self, arity: int, group: GroupSpec, evaluator: Callable[[GroupTuple], ModuleElement], zero: ModuleElement, label: str = "c"):
        if arity < 0:
            raise ArgumentError(f"cochain arity must be non-negative, got {arity}")
        self.arity = arity
        self.group = group
        self.evaluator = evaluator
        self.zero = zero
        self.label = label

    @classmethod
    def constant(cls, a: ModuleElement) -> Cochain:
        """The 0-cochain with value a"""
        return cls(0, a.group, lambda gs: a, a.zero_like(), label=repr(a))

    def __call__(self, *gs: GroupElement) -> ModuleElement:
        if len(gs) == 1 and isinstance(gs[0], tuple):
            gs = gs[0]
        if len(gs) != self.arity:
            raise ArgumentError(f"{self.label} has arity {self.arity}, got {len(gs)} arguments")
        self.group.check(*gs)
        return self.evaluator(tuple(gs))

    def slice(self, h: GroupElement) -> Cochain:
        """c_h(h_1..h_{n-1}) = c(h, h_1..h_{n-1})"""
        if self.arity == 0:
            raise ArgumentError("cannot slice a 0-cochain")
        c = self
        return Cochain(self.arity - 1, self.group, lambda gs: c((h,) + gs), self.zero, f"{self.label}_{h!r}")

    def __add__(self, other: Cochain) -> Cochain:
        _check_same_arity(self, other)
        c, e = self, other
        return Cochain(self.arity, self.group, lambda gs: c(gs) + e(gs), self.zero, f"({self.label}+{other.label})")

    def __neg__(self) -> Cochain:
        c = self
        return Cochain(self.arity, self.group, lambda gs: -c(gs), self.zero, f"-{self.label}")

    def __sub__(self, other: Cochain) -> Cochain:
        return self + (-other)

    def scale(self, k: int) -> Cochain:
        c = self
        return Cochain(self.arity, self.group, lambda gs: c(gs).scale(k), self.zero, f"{k}*{self.label}")

    def __repr__(self) -> str:
        return f"Cochain(arity={self.arity}, {self.label})"


def _check_same_arity(c: Cochain, e: Cochain) -> None:
    if c.arity != e.arity:
        raise ArgumentError(f"arity mismatch: {c.arity} vs {e.arity}")
    if c.group != e.group:
        raise ArgumentError(f"cochains over {c.group} and {e.group}")


# Operators


def d(c: Cochain) -> Cochain:
    """d_n: C^{n-1} -> C^n, (d c)(g_1..g_n) = c(g_1..g_{n-1})^{g_n} - c(g_1..g_{n-1})"""

    def evaluate(gs: GroupTuple) -> ModuleElement:
        value = c(gs[:-1])
        return value.act(gs[-1]) - value

    return Cochain(c.arity + 1, c.group, evaluate, c.zero, f"d{c.label}")


def difference(a: ModuleElement, n: int) -> Cochain:
    """D^n a via the recursion D^0 = id, D^n = d_n D^{n-1}"""
    if n < 0:
        raise ArgumentError(f"n must be non-negative, got {n}")
    c = Cochain.constant(a)
    for _ in range(n):
        c = d(c)
    c.label = f"D^{n}[{a!r}]"
    return c


def _signed_products(group: GroupSpec, gs: GroupTuple) -> Dict[GroupElement, int]:
    """Coefficients of a^pi in the inclusion-exclusion formula, merged by pi.

    Subsets K of kept positions are visited in Gray-code order; for abelian
    groups the running product is updated by one factor per step.
    """
    n = len(gs)
    terms: Dict[GroupElement, int] = {}
    running = group.identity()
    for mask, flipped in gray_code(n):
        if group.is_abelian:
            if flipped is not None:
                g = gs[flipped]
                running = group.multiply(running, g if mask >> flipped & 1 else group.inverse(g))
            pi = running
        else:
            pi = group.product([gs[j] for j in range(n) if mask >> j & 1])
        sign = -1 if (n - bin(mask).count("1")) % 2 else 1
        terms[pi] = terms.get(pi, 0) + sign
    return terms


def difference_closed(a: ModuleElement, gs: Sequence[GroupElement]) -> ModuleElement:
    """[D^n a](g_1..g_n) as sum over subsets of (-1)^(omitted) a^{pi}"""
    gs = tuple(gs)
    a.group.check(*gs)
    if not gs:
        return a
    terms = _signed_products(a.group, gs)
    return a.combine([(c, pi) for pi, c in terms.items() if c])


def delta(a: ModuleElement, gs: Sequence[GroupElement]) -> ModuleElement:
    """Delta^n a = D^n a - a^{g_1...g_n}"""
    gs = tuple(gs)
    if not gs:
        raise ArgumentError("Delta^n needs n >= 1")
    return difference_closed(a, gs) - a.act(a.group.product(gs))


def coboundary(c: Cochain) -> Cochain:
    """delta^n: C^n -> C^{n+1} for the trivial left action"""
    n = c.arity
    group = c.group

    def evaluate(gs: GroupTuple) -> ModuleElement:
        total = c(gs[1:])
        for i in range(1, n + 1):
            merged = gs[: i - 1] + (group.multiply(gs[i - 1], gs[i]),) + gs[i + 1:]
            value = c(merged)
            total = total + value if i % 2 == 0 else total - value
        last = c(gs[:n])
        return total + last if (n + 1) % 2 == 0 else total - last

    return Cochain(n + 1, group, evaluate, c.zero, f"delta{c.label}")


# Membership


class CertificateKind(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


@dataclass
class MembershipCertificate:
    """Outcome of testing D^{n+1} a = 0"""
    holds: bool
    kind: CertificateKind
    n: int
    checked: int = 0
    witness: Optional[List[List[int]]] = None
    value: Optional[Any] = None

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "kind": self.kind.value,
            "n": self.n,
            "checked": self.checked,
            "witness": self.witness,
            "value": self.value,
        }


def certification_tuples(group: GroupSpec, slots: int, total: int) -> Iterator[GroupTuple]:
    """Tuples of `slots` nonzero vectors in N^r with coordinate sum <= total.

    Tuples containing the identity are skipped (their values vanish by
    normalization). For abelian groups D^k a is symmetric, so slot vectors
    are taken in non-decreasing order.
    """
    r = group.abelian_rank
    budget = total - (slots - 1)
    if budget < 1:
        return
    vectors = [v for v in simplex_grid(r, budget) if any(v)]
    pad = (0,) * (group.coordinate_count - r)
    if group.is_abelian:
        choices = itertools.combinations_with_replacement(vectors, slots)
    else:
        choices = itertools.product(vectors, repeat=slots)
    for combo in choices:
        if sum(sum(v) for v in combo) <= total:
            yield tuple(group.element(*(v + pad)) for v in combo)


def is_polynomial_like(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> MembershipCertificate:
    """Decide a in P_n = ker D^{n+1}.

    Floquet elements: exact. degree(a) <= n decides membership, and D^{n+1} a
    is evaluated on the total-degree grid of tuples. Each value is a
    polynomial of total degree <= deg(a) in the tuple coordinates, so
    vanishing on that grid is a proof. Black boxes: D^{n+1} a on
    `probe.samples` random tuples of radius `probe.radius`.
    """
    if n < 0:
        raise ArgumentError(f"n must be non-negative, got {n}")
    group = a.group

    if isinstance(a, FloquetElement):
        deg = a.degree()
        claimed = deg <= n
        total = max(deg, n + 1)
        checked = 0
        for gs in certification_tuples(group, n + 1, total):
            checked += 1
            value = difference_closed(a, gs)
            if not value.is_zero():
                if claimed:
                    raise PropertyViolationError(
                        f"D^{n + 1} of an element of degree {deg} is nonzero", _coords(gs)
                    )
                logger.debug("membership_refuted", n=n, degree=deg, witness=_coords(gs))
                return MembershipCertificate(False, CertificateKind.EXACT, n, checked, _coords(gs), str(value))
        if not claimed:
            raise PropertyViolationError(f"D^{n + 1} vanished on the grid but degree is {deg}")
        return MembershipCertificate(True, CertificateKind.EXACT, n, checked)

    probe = probe or Probe()
    for i in range(probe.samples):
        gs = group.random_tuple(probe, n + 1)
        witness = difference_closed(a, gs).nonzero_witness(probe)
        if witness is not None:
            logger.debug("membership_refuted", n=n, witness=_coords(gs))
            return MembershipCertificate(False, CertificateKind.SAMPLED, n, i + 1, _coords(gs), witness)
    return MembershipCertificate(True, CertificateKind.SAMPLED, n, probe.samples)


def _coords(gs: Sequence[GroupElement]) -> List[List[int]]:
    return [list(g.coords) for g in gs]


# Diagnostics


@dataclass
class SymmetryReport:
    """Observed (a)symmetry of D^n a under argument permutations"""
    n: int
    symmetric: bool
    checked: int
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self) -> dict:
        return {"n": self.n, "symmetric": self.symmetric, "checked": self.checked, "witness": self.witness}


def check_symmetry(a: ModuleElement, n: int, probe: Optional[Probe] = None, tuples: Optional[Sequence[GroupTuple]] = None) -> SymmetryReport:
    """Compare [D^n a](g_1..g_n) with every permutation of its arguments"""
    probe = probe or Probe()
    group = a.group
    if tuples is None:
        gens = group.free_generators()
        tuples = list(itertools.product(gens, repeat=n))
        tuples += [group.random_tuple(probe, n) for _ in range(probe.samples // 4)]
    checked = 0
    for gs in tuples:
        base = difference_closed(a, gs)
        for perm in itertools.permutations(range(n)):
            permuted = tuple(gs[i] for i in perm)
            if permuted == tuple(gs):
                continue
            checked += 1
            witness = difference_closed(a, permuted).distinguish(base, probe)
            if witness is not None:
                return SymmetryReport(n, False, checked, {
                    "tuple": _coords(gs), "permuted": _coords(permuted), "difference": witness,
                })
    return SymmetryReport(n, True, checked)


def check_normalization(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> Optional[Dict[str, Any]]:
    """[D^n a](..., e, ...) = 0 on sampled tuples; returns a violation or None"""
    probe = probe or Probe()
    group = a.group
    if n == 0:
        return None
    for _ in range(max(probe.samples // 8, 1)):
        gs = group.random_tuple(probe, n)
        for position in range(n):
            with_identity = gs[:position] + (group.identity(),) + gs[position + 1:]
            witness = difference_closed(a, with_identity).nonzero_witness(probe)
            if witness is not None:
                return {"tuple": _coords(with_identity), "value": witness}
    return None
