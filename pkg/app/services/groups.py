"""Finitely generated groups with exact element arithmetic and abelianization"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Sequence, Tuple

from app.exceptions import ArgumentError, GroupMismatchError
from app.utils.sampling import Probe


class GroupKind(str, Enum):
    """Supported group families"""
    FREE_ABELIAN = "free_abelian"
    FIN_GEN_ABELIAN = "fin_gen_abelian"
    HEISENBERG = "heisenberg"


@dataclass(frozen=True)
class AbelianizedCoords:
    """Image of an element in G/[G,G] = Z^r x Z/m_1 x ... x Z/m_t; residues are kept reduced"""
    free_part: Tuple[int, ...]
    torsion_part: Tuple[int, ...] = ()
    torsion_moduli: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.torsion_part) != len(self.torsion_moduli):
            raise ArgumentError(
                f"{len(self.torsion_part)} torsion residues for {len(self.torsion_moduli)} moduli"
            )
        reduced = tuple(c % m for c, m in zip(self.torsion_part, self.torsion_moduli))
        object.__setattr__(self, "torsion_part", reduced)

    def __add__(self, other: AbelianizedCoords) -> AbelianizedCoords:
        if self.torsion_moduli != other.torsion_moduli or len(self.free_part) != len(other.free_part):
            raise GroupMismatchError("abelianized coordinates come from different groups")
        return AbelianizedCoords(
            tuple(a + b for a, b in zip(self.free_part, other.free_part)),
            tuple(a + b for a, b in zip(self.torsion_part, other.torsion_part)),
            self.torsion_moduli,
        )

    def is_zero(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated group: Z^r, Z^r x finite cyclic factors, or the integer Heisenberg group"""
    kind: GroupKind
    rank: int = 0
    torsion_moduli: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", GroupKind(self.kind))
        object.__setattr__(self, "torsion_moduli", tuple(int(m) for m in self.torsion_moduli))
        if self.kind == GroupKind.HEISENBERG:
            if self.rank not in (0, 2) or self.torsion_moduli:
                raise ArgumentError("HeisenbergZ has abelianization rank 2 and trivial torsion")
            object.__setattr__(self, "rank", 2)
            return
        if self.rank < 0:
            raise ArgumentError(f"rank must be non-negative, got {self.rank}")
        if self.kind == GroupKind.FREE_ABELIAN and self.torsion_moduli:
            raise ArgumentError("FreeAbelian groups carry no torsion")
        for modulus in self.torsion_moduli:
            if modulus < 2:
                raise ArgumentError(f"torsion moduli must be >= 2, got {modulus}")

    # Constructors

    @classmethod
    def free_abelian(cls, rank: int) -> GroupSpec:
        return cls(GroupKind.FREE_ABELIAN, rank)

    @classmethod
    def fin_gen_abelian(cls, rank: int, torsion_moduli: Sequence[int]) -> GroupSpec:
        return cls(GroupKind.FIN_GEN_ABELIAN, rank, tuple(torsion_moduli))

    @classmethod
    def heisenberg(cls) -> GroupSpec:
        return cls(GroupKind.HEISENBERG, 2)

    def __str__(self) -> str:
        if self.kind == GroupKind.HEISENBERG:
            return "HeisenbergZ"
        factors = ["Z"] * self.rank + [f"Z/{m}" for m in self.torsion_moduli]
        return " x ".join(factors) or "trivial"

    # Structure

    @property
    def is_abelian(self) -> bool:
        return self.kind != GroupKind.HEISENBERG

    @property
    def abelian_rank(self) -> int:
        """Rank r of the abelianization"""
        return self.rank

    @property
    def coordinate_count(self) -> int:
        if self.kind == GroupKind.HEISENBERG:
            return 3
        return self.rank + len(self.torsion_moduli)

    def element(self, *coords: int) -> GroupElement:
        """Build an element from raw coordinates, reducing torsion residues"""
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.coordinate_count:
            raise ArgumentError(
                f"{self} elements have {self.coordinate_count} coordinates, got {len(coords)}"
            )
        coords = tuple(int(c) for c in coords)
        if self.torsion_moduli:
            free = coords[: self.rank]
            residues = tuple(c % m for c, m in zip(coords[self.rank:], self.torsion_moduli))
            coords = free + residues
        return GroupElement(self, coords)

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.coordinate_count)

    def _unit(self, position: int) -> GroupElement:
        coords = [0] * self.coordinate_count
        coords[position] = 1
        return self.element(*coords)

    def free_generators(self) -> List[GroupElement]:
        """Preimages h_1..h_r of the free basis of the abelianization"""
        return [self._unit(i) for i in range(self.rank)]

    def torsion_generators(self) -> List[GroupElement]:
        if self.kind == GroupKind.HEISENBERG:
            return []
        return [self._unit(self.rank + j) for j in range(len(self.torsion_moduli))]

    def generators(self) -> List[GroupElement]:
        """Standard generators: free generators, then one per torsion factor"""
        return self.free_generators() + self.torsion_generators()

    def probe_elements(self) -> List[GroupElement]:
        """Generators followed by the nontrivial commutators of pairs of generators"""
        gens = self.generators()
        probes = list(gens)
        for a, b in itertools.combinations(gens, 2):
            c = self.commutator(a, b)
            if not c.is_identity and c not in probes:
                probes.append(c)
        return probes

    def check(self, *elements: GroupElement) -> None:
        """Raise GroupMismatchError unless every element belongs to this group"""
        for g in elements:
            if not isinstance(g, GroupElement) or g.group != self:
                raise GroupMismatchError(f"element {g!r} does not belong to {self}")

    # Group law

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self.check(a, b)
        if self.kind == GroupKind.HEISENBERG:
            (a1, b1, c1), (a2, b2, c2) = a.coords, b.coords
            return GroupElement(self, (a1 + a2, b1 + b2, c1 + c2 + a1 * b2))
        return self.element(*(x + y for x, y in zip(a.coords, b.coords)))

    def inverse(self, g: GroupElement) -> GroupElement:
        self.check(g)
        if self.kind == GroupKind.HEISENBERG:
            a, b, c = g.coords
            return GroupElement(self, (-a, -b, a * b - c))
        return self.element(*(-x for x in g.coords))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        base = g if k >= 0 else self.inverse(g)
        return self.product([base] * abs(k))

    def product(self, elements: Sequence[GroupElement]) -> GroupElement:
        """Ordered product; the empty product is the identity"""
        result = self.identity()
        for g in elements:
            result = self.multiply(result, g)
        return result

    def commutator(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """a * b * a^-1 * b^-1"""
        return self.product([a, b, self.inverse(a), self.inverse(b)])

    def abelianize(self, g: GroupElement) -> AbelianizedCoords:
        """Natural epimorphism onto G/[G,G]"""
        self.check(g)
        if self.kind == GroupKind.HEISENBERG:
            return AbelianizedCoords(g.coords[:2])
        return AbelianizedCoords(g.coords[: self.rank], g.coords[self.rank:], self.torsion_moduli)

    def pi_product(self, indices: Sequence[int], elements: Sequence[GroupElement]) -> GroupElement:
        """Ordered product of `elements` with the (1-based) positions in `indices` omitted"""
        n = len(elements)
        indices = list(indices)
        if any(i < 1 or i > n for i in indices) or any(
            a >= b for a, b in zip(indices, indices[1:])
        ):
            raise ArgumentError(
                f"index set {indices} must be strictly increasing within 1..{n}"
            )
        omitted = set(indices)
        return self.product([g for pos, g in enumerate(elements, start=1) if pos not in omitted])

    # Enumeration and sampling

    def random_element(self, probe: Probe, radius: int = None) -> GroupElement:
        radius = probe.radius if radius is None else radius
        return self.element(*probe.integers(-radius, radius, self.coordinate_count))

    def random_tuple(self, probe: Probe, length: int, radius: int = None) -> Tuple[GroupElement, ...]:
        return tuple(self.random_element(probe, radius) for _ in range(length))

    def elements_in_box(self, radius: int) -> Iterator[GroupElement]:
        """Every element whose raw coordinates lie in [-radius, radius] (residues reduced)"""
        seen = set()
        for coords in itertools.product(range(-radius, radius + 1), repeat=self.coordinate_count):
            g = self.element(*coords)
            if g not in seen:
                seen.add(g)
                yield g


@dataclass(frozen=True)
class GroupElement:
    """Immutable group element; arithmetic delegates to the owning GroupSpec"""
    group: GroupSpec
    coords: Tuple[int, ...]

    def __mul__(self, other: GroupElement) -> GroupElement:
        return self.group.multiply(self, other)

    def inverse(self) -> GroupElement:
        return self.group.inverse(self)

    @property
    def is_identity(self) -> bool:
        return not any(self.coords)

    def abelianize(self) -> AbelianizedCoords:
        return self.group.abelianize(self)

    def __repr__(self) -> str:
        return f"{tuple(self.coords)}"


def multiply(group: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    return group.multiply(a, b)


def commutator(group: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    return group.commutator(a, b)


def abelianize(group: GroupSpec, g: GroupElement) -> AbelianizedCoords:
    return group.abelianize(g)


def pi_product(group: GroupSpec, indices: Sequence[int], elements: Sequence[GroupElement]) -> GroupElement:
    return group.pi_product(indices, elements)
