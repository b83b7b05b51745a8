"""Right G-modules: the exact Floquet algebra, numeric black boxes and functions on a group"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import settings
from app.exceptions import ArgumentError, ModuleMismatchError
from app.services.groups import GroupElement, GroupSpec
from app.services.logger import get_logger
from app.utils.combinatorics import MultiIndex, add_indices, binomial_shift
from app.utils.gaussian import GaussianRational, Scalar
from app.utils.sampling import Probe

logger = get_logger(__name__)

TermKey = Tuple[MultiIndex, MultiIndex]  # (fourier index k, exponent nu)
SCALAR_TYPES = (int, Fraction, GaussianRational)


class ModuleElement(ABC):
    """Element of a right G-module A with a linear action a -> a^g"""

    exact: bool = True

    @property
    @abstractmethod
    def group(self) -> GroupSpec:
        """Group acting on the module"""

    @abstractmethod
    def act(self, g: GroupElement) -> ModuleElement:
        """a^g"""

    @abstractmethod
    def __add__(self, other: ModuleElement) -> ModuleElement:
        ...

    @abstractmethod
    def __neg__(self) -> ModuleElement:
        ...

    @abstractmethod
    def scale(self, c: Scalar) -> ModuleElement:
        ...

    @abstractmethod
    def zero_like(self) -> ModuleElement:
        ...

    @abstractmethod
    def nonzero_witness(self, probe: Optional[Probe] = None) -> Optional[Any]:
        """None when the element is zero (exactly, or on the probe's sample points)"""

    def __sub__(self, other: ModuleElement) -> ModuleElement:
        return self + (-other)

    def __rmul__(self, c):
        if isinstance(c, SCALAR_TYPES):
            return self.scale(c)
        return NotImplemented

    def combine(self, terms: Sequence[Tuple[int, GroupElement]]) -> ModuleElement:
        """Sum of c * a^g over (c, g) pairs"""
        total = self.zero_like()
        for c, g in terms:
            if c:
                total = total + self.act(g).scale(c)
        return total

    def is_zero(self, probe: Optional[Probe] = None) -> bool:
        return self.nonzero_witness(probe) is None

    def distinguish(self, other: ModuleElement, probe: Optional[Probe] = None) -> Optional[Any]:
        """Witness that self != other, or None"""
        return (self - other).nonzero_witness(probe)

    def _check_same_kind(self, other: Any) -> None:
        if type(other) is not type(self):
            raise ModuleMismatchError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if other.group != self.group:
            raise ModuleMismatchError(f"modules over {self.group} and {other.group} differ")

    def _check_acting(self, g: GroupElement) -> None:
        if not isinstance(g, GroupElement) or g.group != self.group:
            raise ModuleMismatchError(f"{g!r} does not act on a module over {self.group}")


# Floquet algebra


class FloquetElement(ModuleElement):
    """Finite sum of c * e^{2 pi i k.x} * x^nu with c in Q(i).

    Canonical form: no zero coefficients. The lattice Z^r acts by translation,
    which is exact because k.g is an integer.
    """

    def __init__(self, rank: int, terms: Optional[Mapping[TermKey, Scalar]] = None):
        if rank < 0:
            raise ArgumentError(f"rank must be non-negative, got {rank}")
        self.rank = rank
        canonical: Dict[TermKey, GaussianRational] = {}
        for (k, nu), c in (terms or {}).items():
            k, nu = tuple(int(v) for v in k), tuple(int(v) for v in nu)
            if len(k) != rank or len(nu) != rank:
                raise ArgumentError(f"term ({k}, {nu}) does not have rank {rank}")
            if any(v < 0 for v in nu):
                raise ArgumentError(f"negative exponent in {nu}")
            c = GaussianRational.coerce(c)
            if c:
                canonical[(k, nu)] = canonical.get((k, nu), GaussianRational(0)) + c
        self._terms = {key: c for key, c in sorted(canonical.items()) if c}
        self._hash = None

    # Constructors

    @classmethod
    def zero(cls, rank: int) -> FloquetElement:
        return cls(rank)

    @classmethod
    def constant(cls, rank: int, c: Scalar = 1) -> FloquetElement:
        return cls(rank, {((0,) * rank, (0,) * rank): c})

    @classmethod
    def monomial(cls, rank: int, nu: Sequence[int], k: Optional[Sequence[int]] = None, c: Scalar = 1) -> FloquetElement:
        k = tuple(k) if k is not None else (0,) * rank
        return cls(rank, {(k, tuple(nu)): c})

    @classmethod
    def exponential(cls, rank: int, k: Sequence[int], c: Scalar = 1) -> FloquetElement:
        return cls.monomial(rank, (0,) * rank, k, c)

    @classmethod
    def coordinate(cls, rank: int, i: int) -> FloquetElement:
        """x_{i+1}"""
        nu = [0] * rank
        nu[i] = 1
        return cls.monomial(rank, nu)

    # Structure

    @property
    def terms(self) -> Dict[TermKey, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def group(self) -> GroupSpec:
        return GroupSpec.free_abelian(self.rank)

    def degree(self) -> int:
        """max |nu|_1 over stored terms; -1 for the zero element"""
        return max((sum(nu) for _, nu in self._terms), default=-1)

    def is_invariant_exact(self) -> bool:
        return all(not any(nu) for _, nu in self._terms)

    def by_exponent(self) -> Dict[MultiIndex, FloquetElement]:
        """Group terms by nu: p = sum_nu (periodic part_nu) * x^nu"""
        parts: Dict[MultiIndex, Dict[TermKey, GaussianRational]] = {}
        zero = (0,) * self.rank
        for (k, nu), c in self._terms.items():
            parts.setdefault(nu, {})[(k, zero)] = c
        return {nu: FloquetElement(self.rank, t) for nu, t in sorted(parts.items())}

    # Action and arithmetic

    def act(self, g: GroupElement) -> FloquetElement:
        self._check_acting(g)
        return self._shift(g.coords)

    def _shift(self, shift: Sequence[int]) -> FloquetElement:
        result: Dict[TermKey, GaussianRational] = {}
        for (k, nu), c in self._terms.items():
            for mu, b in binomial_shift(nu, shift).items():
                key = (k, mu)
                result[key] = result.get(key, GaussianRational(0)) + c * b
        return FloquetElement(self.rank, result)

    def combine(self, terms: Sequence[Tuple[int, GroupElement]]) -> FloquetElement:
        result: Dict[TermKey, GaussianRational] = {}
        for coefficient, g in terms:
            if not coefficient:
                continue
            self._check_acting(g)
            for (k, nu), c in self._terms.items():
                for mu, b in binomial_shift(nu, g.coords).items():
                    key = (k, mu)
                    result[key] = result.get(key, GaussianRational(0)) + c * (b * coefficient)
        return FloquetElement(self.rank, result)

    def __add__(self, other: FloquetElement) -> FloquetElement:
        self._check_same_kind(other)
        merged = dict(self._terms)
        for key, c in other._terms.items():
            merged[key] = merged.get(key, GaussianRational(0)) + c
        return FloquetElement(self.rank, merged)

    def __neg__(self) -> FloquetElement:
        return FloquetElement(self.rank, {key: -c for key, c in self._terms.items()})

    def scale(self, c: Scalar) -> FloquetElement:
        c = GaussianRational.coerce(c)
        return FloquetElement(self.rank, {key: v * c for key, v in self._terms.items()})

    def __mul__(self, other: Union[FloquetElement, Scalar]) -> FloquetElement:
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        self._check_same_kind(other)
        result: Dict[TermKey, GaussianRational] = {}
        for (k1, nu1), c1 in self._terms.items():
            for (k2, nu2), c2 in other._terms.items():
                key = (add_indices(k1, k2), add_indices(nu1, nu2))
                result[key] = result.get(key, GaussianRational(0)) + c1 * c2
        return FloquetElement(self.rank, result)

    def zero_like(self) -> FloquetElement:
        return FloquetElement(self.rank)

    def nonzero_witness(self, probe: Optional[Probe] = None) -> Optional[Any]:
        for (k, nu), c in self._terms.items():
            return {"k": list(k), "nu": list(nu), "coefficient": str(c)}
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, SCALAR_TYPES):
            other = FloquetElement.constant(self.rank, other)
        if not isinstance(other, FloquetElement):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self._terms.items())))
        return self._hash

    # Numeric evaluation

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Complex values at an (m, r) array of real points"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.zeros(points.shape[0], dtype=complex)
        for (k, nu), c in self._terms.items():
            phase = np.exp(2j * np.pi * (points @ np.asarray(k, dtype=float)))
            power = np.prod(points ** np.asarray(nu, dtype=float), axis=1)
            values += complex(c) * phase * power
        return values

    def __call__(self, x: Sequence[float]) -> complex:
        return complex(self.evaluate(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (k, nu), c in sorted(self._terms.items(), key=lambda t: (-sum(t[0][1]), t[0])):
            factors = []
            if any(k):
                factors.append(f"e[{','.join(map(str, k))}]")
            for i, p in enumerate(nu):
                if p:
                    factors.append(f"x{i + 1}" + (f"^{p}" if p > 1 else ""))
            if not factors:
                parts.append(str(c) if c.im == 0 else f"({c})")
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([f"({c})"] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FloquetElement(rank={self.rank}, {self})"


# Black-box modules


class NumericFunction(ModuleElement):
    """Black-box complex function on R^r; Z^r acts by f^g(x) = f(x + g)"""

    exact = False

    def __init__(self, rank: int, evaluator: Callable[[np.ndarray], complex], label: str = "f"):
        self.rank = rank
        self.evaluator = evaluator
        self.label = label

    @property
    def group(self) -> GroupSpec:
        return GroupSpec.free_abelian(self.rank)

    def __call__(self, x: Sequence[float]) -> complex:
        return complex(self.evaluator(np.asarray(x, dtype=float)))

    def act(self, g: GroupElement) -> NumericFunction:
        self._check_acting(g)
        f, shift = self.evaluator, np.asarray(g.coords, dtype=float)
        return NumericFunction(self.rank, lambda x: f(x + shift), f"{self.label}^{g!r}")

    def combine(self, terms: Sequence[Tuple[int, GroupElement]]) -> NumericFunction:
        for _, g in terms:
            self._check_acting(g)
        f = self.evaluator
        shifts = [(complex(c), np.asarray(g.coords, dtype=float)) for c, g in terms if c]
        return NumericFunction(
            self.rank, lambda x: sum((c * f(x + s) for c, s in shifts), 0j), f"D[{self.label}]"
        )

    def __add__(self, other: NumericFunction) -> NumericFunction:
        self._check_same_kind(other)
        f, h = self.evaluator, other.evaluator
        return NumericFunction(self.rank, lambda x: f(x) + h(x), f"({self.label}+{other.label})")

    def __neg__(self) -> NumericFunction:
        f = self.evaluator
        return NumericFunction(self.rank, lambda x: -f(x), f"-{self.label}")

    def scale(self, c: Scalar) -> NumericFunction:
        f, c = self.evaluator, complex(GaussianRational.coerce(c))
        return NumericFunction(self.rank, lambda x: c * f(x), f"{c}*{self.label}")

    def __mul__(self, other):
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        self._check_same_kind(other)
        f, h = self.evaluator, other.evaluator
        return NumericFunction(self.rank, lambda x: f(x) * h(x), f"{self.label}*{other.label}")

    def zero_like(self) -> NumericFunction:
        return NumericFunction(self.rank, lambda x: 0j, "0")

    def sample_points(self, probe: Probe) -> np.ndarray:
        return probe.reals(self.rank, probe.points)

    def nonzero_witness(self, probe: Optional[Probe] = None) -> Optional[Any]:
        probe = probe or Probe()
        for x in self.sample_points(probe):
            value = self(x)
            if abs(value) > probe.tol:
                return {"x": [float(v) for v in x], "value": [value.real, value.imag]}
        return None

    def __repr__(self) -> str:
        return f"NumericFunction(rank={self.rank}, {self.label})"


class GroupFunction(ModuleElement):
    """Exact Q(i)-valued function on a group; right action (a^g)(h) = a(g h)"""

    def __init__(self, group: GroupSpec, evaluator: Callable[[GroupElement], Scalar], label: str = "u"):
        self._group = group
        self.evaluator = evaluator
        self.label = label

    @property
    def group(self) -> GroupSpec:
        return self._group

    def __call__(self, h: GroupElement) -> GaussianRational:
        return GaussianRational.coerce(self.evaluator(h))

    def act(self, g: GroupElement) -> GroupFunction:
        self._check_acting(g)
        u = self.evaluator
        return GroupFunction(self._group, lambda h: u(g * h), f"{self.label}^{g!r}")

    def combine(self, terms: Sequence[Tuple[int, GroupElement]]) -> GroupFunction:
        for _, g in terms:
            self._check_acting(g)
        u = self.evaluator
        live = [(c, g) for c, g in terms if c]
        return GroupFunction(
            self._group,
            lambda h: sum((GaussianRational.coerce(u(g * h)) * c for c, g in live), GaussianRational(0)),
            f"D[{self.label}]",
        )

    def __add__(self, other: GroupFunction) -> GroupFunction:
        self._check_same_kind(other)
        u, v = self, other
        return GroupFunction(self._group, lambda h: u(h) + v(h), f"({self.label}+{other.label})")

    def __neg__(self) -> GroupFunction:
        u = self
        return GroupFunction(self._group, lambda h: -u(h), f"-{self.label}")

    def scale(self, c: Scalar) -> GroupFunction:
        u, c = self, GaussianRational.coerce(c)
        return GroupFunction(self._group, lambda h: u(h) * c, f"{c}*{self.label}")

    def __mul__(self, other):
        if isinstance(other, SCALAR_TYPES):
            return self.scale(other)
        self._check_same_kind(other)
        u, v = self, other
        return GroupFunction(self._group, lambda h: u(h) * v(h), f"{self.label}*{other.label}")

    def zero_like(self) -> GroupFunction:
        return GroupFunction(self._group, lambda h: 0, "0")

    def sample_points(self, probe: Probe) -> List[GroupElement]:
        points = [self._group.identity()]
        points += [self._group.random_element(probe) for _ in range(max(probe.points - 1, 0))]
        return points

    def nonzero_witness(self, probe: Optional[Probe] = None) -> Optional[Any]:
        probe = probe or Probe()
        for h in self.sample_points(probe):
            value = self(h)
            if value:
                return {"h": list(h.coords), "value": str(value)}
        return None

    def __repr__(self) -> str:
        return f"GroupFunction({self._group}, {self.label})"


# Operations


@dataclass
class InvarianceCertificate:
    """Outcome of an invariance test a^g = a"""
    invariant: bool
    exact: bool
    witness: Optional[GroupElement] = None
    point: Optional[Any] = None


def act(a: ModuleElement, g: GroupElement) -> ModuleElement:
    return a.act(g)


def add(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    return a + b


def scale(a: ModuleElement, c: Scalar) -> ModuleElement:
    return a.scale(c)


def mul(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    return a * b


def degree(a: FloquetElement) -> int:
    return a.degree()


def is_invariant(a: ModuleElement, group: Optional[GroupSpec] = None, probe: Optional[Probe] = None) -> InvarianceCertificate:
    """Test a in A^G.

    Floquet elements are decided exactly (all nu = 0). Black boxes are compared
    on sample points against the probe elements of the group and `probe.samples`
    random elements; the first failing g is returned as witness.
    """
    if group is not None and group != a.group:
        raise ModuleMismatchError(f"module over {a.group} tested against {group}")
    group = a.group

    if isinstance(a, FloquetElement):
        if a.is_invariant_exact():
            return InvarianceCertificate(True, True)
        for g in group.generators():
            if a.act(g) != a:
                return InvarianceCertificate(False, True, witness=g)
        return InvarianceCertificate(False, True)

    probe = probe or Probe()
    elements = group.probe_elements()
    elements += [group.random_element(probe) for _ in range(probe.samples)]
    shifted = [(g, a.act(g)) for g in elements]
    for x in a.sample_points(probe):
        base = a(x)
        for g, a_g in shifted:
            value = a_g(x)
            differs = value != base if a.exact else abs(value - base) > probe.tol
            if differs:
                logger.debug("invariance_failed", element=repr(a), witness=repr(g))
                point = list(x.coords) if isinstance(x, GroupElement) else [float(v) for v in x]
                return InvarianceCertificate(False, False, witness=g, point=point)
    return InvarianceCertificate(True, False)


def additive_function(group: GroupSpec, weights: Sequence[Union[int, Fraction, str]]) -> GroupFunction:
    """u(h) = alpha(abelianize(h)) for a homomorphism alpha: G~ -> Q.

    `weights` gives alpha on the free generators, optionally followed by
    weights on the torsion generators, which must all vanish.
    """
    weights = [Fraction(w) for w in weights]
    r, t = group.abelian_rank, len(group.torsion_moduli)
    if len(weights) not in (r, r + t):
        raise ArgumentError(f"expected {r} (or {r + t}) weights for {group}, got {len(weights)}")
    if any(weights[r:]):
        raise ArgumentError("a homomorphism to Q vanishes on torsion; torsion weights must be 0")
    free_weights = weights[:r]

    def evaluate(h: GroupElement) -> Fraction:
        coords = group.abelianize(h).free_part
        return sum((w * c for w, c in zip(free_weights, coords)), Fraction(0))

    label = "alpha(" + ",".join(str(w) for w in free_weights) + ")"
    return GroupFunction(group, evaluate, label)


def coordinate_functions(group: GroupSpec) -> List[GroupFunction]:
    """Additive functions h_1..h_r dual to the free generators"""
    r = group.abelian_rank
    return [additive_function(group, [1 if i == j else 0 for j in range(r)]) for i in range(r)]


def check_action_law(a: ModuleElement, probe: Optional[Probe] = None, samples: Optional[int] = None) -> Optional[Dict[str, Any]]:
    """Verify (a^g)^h = a^{gh} and a^e = a; returns the first violation or None"""
    probe = probe or Probe()
    group = a.group
    samples = settings.ACTION_LAW_SAMPLES if samples is None else samples

    witness = a.act(group.identity()).distinguish(a, probe)
    if witness is not None:
        return {"law": "identity", "witness": witness}

    gens = group.generators()
    pairs = list(itertools.product(gens, repeat=2))
    pairs += [(group.random_element(probe), group.random_element(probe)) for _ in range(samples)]
    for g, h in pairs:
        witness = a.act(g).act(h).distinguish(a.act(g * h), probe)
        if witness is not None:
            return {"law": "composition", "g": list(g.coords), "h": list(h.coords), "witness": witness}
    return None
