"""Polymorphisms (multi-additive cochains) over finitely generated groups.

A polymorphism L in L_n(G, B) factors through the free part of the
abelianization, so it is stored as the tensor of its values
b_I = L(h_{i_1}, ..., h_{i_n}) on free generators (0-based index tuples).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from app.config import settings
from app.exceptions import (
    ArgumentError,
    NotPolynomialLikeError,
    PropertyViolationError,
    UnsupportedGroupError,
)
from app.models.report import CheckResult
from app.services.diffcalc import Cochain, SymmetryReport, difference_closed, is_polynomial_like
from app.services.gmodule import ModuleElement
from app.services.groups import GroupElement, GroupSpec
from app.services.logger import get_logger
from app.utils import linalg
from app.utils.gaussian import GaussianRational, Scalar
from app.utils.sampling import Probe

logger = get_logger(__name__)

IndexTuple = Tuple[int, ...]
Entry = Any  # ModuleElement, ScalarVector or GaussianRational


class ScalarVector:
    """Vector of F^s with exact Q(i) entries; the abstract coefficient space B"""

    __slots__ = ("values",)

    def __init__(self, values: Sequence[Scalar]):
        self.values = tuple(GaussianRational.coerce(v) for v in values)

    @classmethod
    def zero(cls, s: int) -> ScalarVector:
        return cls([0] * s)

    @classmethod
    def unit(cls, s: int, i: int) -> ScalarVector:
        return cls([1 if j == i else 0 for j in range(s)])

    @property
    def dim(self) -> int:
        return len(self.values)

    def _check(self, other: ScalarVector) -> None:
        if not isinstance(other, ScalarVector) or other.dim != self.dim:
            raise ArgumentError(f"cannot combine vectors of F^{self.dim} and {other!r}")

    def __add__(self, other: ScalarVector) -> ScalarVector:
        self._check(other)
        return ScalarVector([a + b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> ScalarVector:
        return ScalarVector([-a for a in self.values])

    def __sub__(self, other: ScalarVector) -> ScalarVector:
        return self + (-other)

    def scale(self, c: Scalar) -> ScalarVector:
        return ScalarVector([a * c for a in self.values])

    def __mul__(self, c: Scalar) -> ScalarVector:
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self, probe: Optional[Probe] = None) -> bool:
        return not any(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarVector) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def _is_zero(entry: Entry, probe: Optional[Probe] = None) -> bool:
    if isinstance(entry, GaussianRational):
        return not entry
    return entry.is_zero(probe)


def _differ(x: Entry, y: Entry, probe: Optional[Probe] = None) -> Optional[Any]:
    if isinstance(x, ModuleElement):
        return x.distinguish(y, probe)
    difference = x - y
    return None if _is_zero(difference) else repr(difference)


class Polymorphism:
    """Element of L_n(G, B) given by its generator tensor"""

    def __init__(self, arity: int, group: GroupSpec, values: Dict[IndexTuple, Entry], zero: Entry):
        if arity < 0:
            raise ArgumentError(f"arity must be non-negative, got {arity}")
        r = group.abelian_rank
        for index in values:
            if len(index) != arity or any(i < 0 or i >= r for i in index):
                raise ArgumentError(f"index {index} is not in {{0..{r - 1}}}^{arity}")
        self.arity = arity
        self.group = group
        self.zero = zero
        self.values = {index: values[index] for index in sorted(values)}

    @property
    def rank(self) -> int:
        return self.group.abelian_rank

    def indices(self) -> Iterator[IndexTuple]:
        return itertools.product(range(self.rank), repeat=self.arity)

    def __getitem__(self, index: IndexTuple) -> Entry:
        return self.values.get(tuple(index), self.zero)

    def is_zero(self, probe: Optional[Probe] = None) -> bool:
        return all(_is_zero(v, probe) for v in self.values.values())

    def eval(self, gs: Sequence[GroupElement]) -> Entry:
        """sum over I of x_{1,i_1} ... x_{n,i_n} b_I in abelianized free coordinates"""
        gs = tuple(gs)
        if len(gs) != self.arity:
            raise ArgumentError(f"polymorphism of arity {self.arity} evaluated on {len(gs)} elements")
        self.group.check(*gs)
        coords = [self.group.abelianize(g).free_part for g in gs]
        total = self.zero
        for index, entry in self.values.items():
            weight = prod(x[i] for x, i in zip(coords, index))
            if weight:
                total = total + entry * weight
        return total

    __call__ = eval

    def as_cochain(self) -> Cochain:
        """L viewed as a normalized n-cochain"""
        if not isinstance(self.zero, ModuleElement):
            raise ArgumentError("only module-valued polymorphisms are cochains")
        return Cochain(self.arity, self.group, self.eval, self.zero, "L")

    @property
    def is_symmetric(self) -> bool:
        return symmetry_report(self).symmetric

    def __add__(self, other: Polymorphism) -> Polymorphism:
        if other.arity != self.arity or other.group != self.group:
            raise ArgumentError("polymorphisms of different arity or group")
        keys = set(self.values) | set(other.values)
        return Polymorphism(self.arity, self.group, {k: self[k] + other[k] for k in keys}, self.zero)

    def scale(self, c: Scalar) -> Polymorphism:
        return Polymorphism(self.arity, self.group, {k: v * c for k, v in self.values.items()}, self.zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polymorphism) or other.arity != self.arity or other.group != self.group:
            return False
        keys = set(self.values) | set(other.values)
        return all(_differ(self[k], other[k]) is None for k in keys)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(arity={self.arity}, group={self.group}, entries={len(self.values)})"


class SymmetricPolymorphism(Polymorphism):
    """Polymorphism whose tensor is invariant under index permutations"""

    def __init__(self, arity: int, group: GroupSpec, values: Dict[IndexTuple, Entry], zero: Entry):
        super().__init__(arity, group, values, zero)
        report = symmetry_report(self)
        if not report.symmetric:
            raise PropertyViolationError("tensor is not symmetric", report.witness)


def symmetry_report(L: Polymorphism) -> SymmetryReport:
    """Compare b_I with b_{sigma(I)} for every index tuple"""
    checked = 0
    for index in L.indices():
        base = L[index]
        for permuted in sorted(set(itertools.permutations(index))):
            if permuted == index:
                continue
            checked += 1
            witness = _differ(L[permuted], base)
            if witness is not None:
                return SymmetryReport(L.arity, False, checked, {
                    "index": [i + 1 for i in index],
                    "permuted": [i + 1 for i in permuted],
                    "difference": witness,
                })
    return SymmetryReport(L.arity, True, checked)


# Bases and dimensions


def basis(n: int, r: int, s: int) -> List[Polymorphism]:
    """The s * r^n indicator forms l_I^i on Z^r with values in F^s"""
    if n < 1 or r < 1 or s < 1:
        raise ArgumentError(f"basis needs n, r, s >= 1, got {n}, {r}, {s}")
    group = GroupSpec.free_abelian(r)
    zero = ScalarVector.zero(s)
    return [
        Polymorphism(n, group, {index: ScalarVector.unit(s, i)}, zero)
        for index in itertools.product(range(r), repeat=n)
        for i in range(s)
    ]


def coefficients_in_basis(L: Polymorphism) -> Dict[Tuple[IndexTuple, int], GaussianRational]:
    """Coordinates a_I^i of L = sum a_I^i l_I^i, read off the tensor"""
    if not isinstance(L.zero, ScalarVector):
        raise ArgumentError("basis coordinates need values in F^s")
    coefficients = {}
    for index in L.indices():
        for i, value in enumerate(L[index].values):
            if value:
                coefficients[(index, i)] = value
    return coefficients


def from_basis_coefficients(coefficients: Dict[Tuple[IndexTuple, int], Scalar], n: int, r: int, s: int) -> Polymorphism:
    """sum of a_I^i l_I^i"""
    zero = ScalarVector.zero(s)
    values: Dict[IndexTuple, ScalarVector] = {}
    for (index, i), a in coefficients.items():
        index = tuple(index)
        if len(index) != n or any(j < 0 or j >= r for j in index) or not 0 <= i < s:
            raise ArgumentError(f"no basis form l_{index}^{i} for n={n}, r={r}, s={s}")
        values[index] = values.get(index, zero) + ScalarVector.unit(s, i) * a
    return Polymorphism(n, GroupSpec.free_abelian(r), values, zero)


def dim_Ln(n: int, r: int, s: int) -> int:
    return s * r ** n


def dim_LnS(n: int, r: int, s: int) -> int:
    if r == 0:
        return s if n == 0 else 0
    return s * comb(n + r - 1, r - 1)


def dim_Pn_bound(n: int, r: int, s: int) -> int:
    """s * C(n + r, r), the bound through symmetric polymorphisms"""
    return s * comb(n + r, r)


def telescoped_bound(n: int, r: int, s: int) -> int:
    """s * sum_{k <= n} r^k, through the (not necessarily symmetric) tensors"""
    return s * sum(r ** k for k in range(n + 1))


def brute_force_unknowns(n: int, r: int) -> int:
    """Number of unknowns L(g_1..g_n), g_j in {0,1}^r, of the brute-force systems"""
    return 2 ** (r * n)


def _additive_system(n: int, r: int, symmetric: bool) -> Tuple[List[Dict[int, int]], int]:
    """Linear constraints on the values of a Q-valued function on the box ({0,1}^r)^n.

    Each slot must be additive: L(.., g + h, ..) = L(.., g, ..) + L(.., h, ..)
    whenever g, h and g + h lie in the box. With `symmetric`, L must also be
    invariant under adjacent transpositions of its arguments.
    """
    if n < 1 or r < 1:
        raise ArgumentError(f"brute-force systems need n, r >= 1, got {n}, {r}")
    points = list(itertools.product((0, 1), repeat=r))
    position = {p: j for j, p in enumerate(points)}
    size = len(points)
    sums = []
    for g in range(size):
        for h in range(g, size):
            total = tuple(a + b for a, b in zip(points[g], points[h]))
            if total in position:
                sums.append((g, h, position[total]))

    def column(args: Sequence[int]) -> int:
        return sum(a * size ** k for k, a in enumerate(args))

    rows: List[Dict[int, int]] = []
    for slot in range(n):
        for others in itertools.product(range(size), repeat=n - 1):
            for g, h, gh in sums:
                row: Dict[int, int] = {}
                for point, sign in ((gh, 1), (g, -1), (h, -1)):
                    key = column(others[:slot] + (point,) + others[slot:])
                    row[key] = row.get(key, 0) + sign
                rows.append(row)
    if symmetric:
        for args in itertools.product(range(size), repeat=n):
            for slot in range(n - 1):
                swapped = args[:slot] + (args[slot + 1], args[slot]) + args[slot + 2:]
                if swapped > args:
                    rows.append({column(args): 1, column(swapped): -1})
    return rows, size ** n


def brute_force_dim_Ln(n: int, r: int, s: int) -> int:
    """Dimension of the solution space of the slotwise additivity system, times s.

    The F^s components of a polymorphism decouple, so the scalar system is
    solved once.
    """
    rows, unknowns = _additive_system(n, r, symmetric=False)
    return s * (unknowns - linalg.sparse_rank(rows, unknowns))


def brute_force_dim_LnS(n: int, r: int, s: int) -> int:
    """As brute_force_dim_Ln with the argument-swap constraints added"""
    rows, unknowns = _additive_system(n, r, symmetric=True)
    return s * (unknowns - linalg.sparse_rank(rows, unknowns))


# Extraction from D^n


@dataclass
class Extraction:
    """D^n a as a polymorphism together with its post-verification"""
    polymorphism: Polymorphism
    multilinearity: CheckResult
    commutators: CheckResult
    symmetry: SymmetryReport

    @property
    def checks(self) -> List[CheckResult]:
        return [self.multilinearity, self.commutators]


def from_Dn(a: ModuleElement, n: int, probe: Optional[Probe] = None) -> Extraction:
    """Tensor b_I = [D^n a](h_{i_1}..h_{i_n}) of a in P_n.

    Multilinearity is verified against D^n a on MULTILINEARITY_SAMPLES random
    tuples; a failure raises PropertyViolationError with the tuple. For
    abelian groups the result is a SymmetricPolymorphism.
    """
    if n < 1:
        raise ArgumentError(f"from_Dn needs n >= 1, got {n}")
    probe = probe or Probe()
    group = a.group
    certificate = is_polynomial_like(a, n, probe)
    if not certificate.holds:
        raise NotPolynomialLikeError(
            f"D^{n + 1} does not vanish on {a!r}", {"at": certificate.witness, "value": certificate.value}
        )

    gens = group.free_generators()
    values = {
        index: difference_closed(a, tuple(gens[i] for i in index))
        for index in itertools.product(range(group.abelian_rank), repeat=n)
    }
    zero = a.zero_like()
    L = Polymorphism(n, group, values, zero)

    samples = settings.MULTILINEARITY_SAMPLES
    radius = settings.MULTILINEARITY_RADIUS
    for i in range(samples):
        gs = group.random_tuple(probe, n, radius)
        witness = L.eval(gs).distinguish(difference_closed(a, gs), probe)
        if witness is not None:
            raise PropertyViolationError(
                "D^n a is not multilinear", {"at": [list(g.coords) for g in gs], "difference": witness}
            )
    multilinearity = CheckResult.passed("multilinearity", samples, a.exact)
    commutators = _commutator_check(a, n, probe)
    symmetry = symmetry_report(L)
    if group.is_abelian:
        if not symmetry.symmetric:
            raise PropertyViolationError("D^n a is not symmetric over an abelian group", symmetry.witness)
        L = SymmetricPolymorphism(n, group, values, zero)
    logger.info("polymorphism_extracted", n=n, group=str(group), symmetric=symmetry.symmetric)
    return Extraction(L, multilinearity, commutators, symmetry)


def _commutator_check(a: ModuleElement, n: int, probe: Probe) -> CheckResult:
    """D^n a vanishes when a slot holds a commutator or torsion generator"""
    group = a.group
    killers = [g for g in group.probe_elements() if not any(group.abelianize(g).free_part)]
    checked = 0
    for killer in killers:
        for position in range(n):
            gs = list(group.random_tuple(probe, n))
            gs[position] = killer
            checked += 1
            witness = difference_closed(a, gs).nonzero_witness(probe)
            if witness is not None:
                return CheckResult.failed(
                    "commutator_vanishing", {"at": [list(g.coords) for g in gs], "value": witness}, checked, a.exact
                )
    return CheckResult.passed("commutator_vanishing", checked, a.exact)


# Real extension


class MultilinearExtension:
    """The unique real-multilinear extension of L from Z^r to R^r.

    Float coordinates are converted exactly with Fraction, so the result is
    exact and agrees with L.eval on integer points.
    """

    def __init__(self, L: Polymorphism):
        group = L.group
        if not group.is_abelian or group.torsion_moduli:
            raise UnsupportedGroupError(f"real extension needs a free abelian group, got {group}")
        self.L = L

    def __call__(self, *vectors: Sequence[Union[float, int, Fraction]]) -> Entry:
        L = self.L
        if len(vectors) != L.arity:
            raise ArgumentError(f"expected {L.arity} vectors, got {len(vectors)}")
        coords = []
        for v in vectors:
            if len(v) != L.rank:
                raise ArgumentError(f"vectors in R^{L.rank} expected, got length {len(v)}")
            coords.append([Fraction(x) for x in v])
        total = L.zero
        for index, entry in L.values.items():
            weight = prod((x[i] for x, i in zip(coords, index)), start=Fraction(1))
            if weight:
                total = total + entry * weight
        return total


def extend_to_Rr(L: Polymorphism) -> MultilinearExtension:
    return MultilinearExtension(L)
