"""Polynomial-like solutions of periodic stencil operators on Z^r.

Solutions are sought in the ansatz u(x) = sum_nu a_nu(x mod N) x^nu with
N-periodic coefficient tables; the representation is unique, so the kernel
of D on the ansatz space is the kernel of an exact rational matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple

from app.exceptions import ArgumentError, PropertyViolationError
from app.models.report import CheckResult
from app.services.logger import get_logger
from app.utils import linalg
from app.utils.combinatorics import MultiIndex, binomial_shift, multi_indices_upto
from app.utils.sampling import Probe

logger = get_logger(__name__)

Offset = Tuple[int, ...]
Cell = Tuple[int, ...]


def cells(rank: int, period: int) -> List[Cell]:
    """Residues of (Z/N)^r in row-major order"""
    return list(itertools.product(range(period), repeat=rank))


def cell_index(x: Sequence[int], period: int) -> int:
    """Row-major position of x mod N"""
    index = 0
    for v in x:
        index = index * period + v % period
    return index


def _table(values: Sequence, size: int, what: str) -> List[Fraction]:
    table = [Fraction(v) for v in values]
    if len(table) != size:
        raise ArgumentError(f"{what} needs {size} entries, got {len(table)}")
    return table


class StencilOperator:
    """(D u)(x) = sum over offsets o of c_o(x mod N) u(x + o)"""

    def __init__(self, rank: int, period: int, stencil: Dict[Offset, Sequence], name: str = "D"):
        if rank < 1:
            raise ArgumentError(f"rank must be positive, got {rank}")
        if period < 1:
            raise ArgumentError(f"period must be positive, got {period}")
        size = period ** rank
        self.rank = rank
        self.period = period
        self.name = name
        self.stencil: Dict[Offset, List[Fraction]] = {}
        for offset, coeffs in sorted(stencil.items()):
            offset = tuple(int(v) for v in offset)
            if len(offset) != rank:
                raise ArgumentError(f"offset {offset} does not have rank {rank}")
            table = _table(coeffs, size, f"coefficients of offset {offset}")
            if offset in self.stencil:
                table = [a + b for a, b in zip(self.stencil[offset], table)]
            self.stencil[offset] = table

    @classmethod
    def constant(cls, rank: int, stencil: Dict[Offset, object], period: int = 1, name: str = "D") -> StencilOperator:
        """Operator whose coefficients do not depend on the cell"""
        size = period ** rank
        return cls(rank, period, {o: [c] * size for o, c in stencil.items()}, name)

    @classmethod
    def laplacian(cls, rank: int, period: int = 1, shift: object = 0) -> StencilOperator:
        """Discrete Laplacian sum_i (u(x+e_i) - 2u(x) + u(x-e_i)) plus `shift` * u"""
        stencil: Dict[Offset, object] = {(0,) * rank: Fraction(-2 * rank) + Fraction(shift)}
        for i in range(rank):
            for sign in (1, -1):
                offset = [0] * rank
                offset[i] = sign
                stencil[tuple(offset)] = 1
        return cls.constant(rank, stencil, period, name="laplacian")

    @property
    def size(self) -> int:
        return self.period ** self.rank

    def coefficient(self, offset: Offset, x: Sequence[int]) -> Fraction:
        table = self.stencil.get(tuple(offset))
        return table[cell_index(x, self.period)] if table else Fraction(0)

    def __call__(self, u, x: Sequence[int]) -> Fraction:
        """(D u)(x) for any callable u on Z^r"""
        x = tuple(x)
        j = cell_index(x, self.period)
        return sum(
            (table[j] * u(tuple(a + b for a, b in zip(x, o))) for o, table in self.stencil.items() if table[j]),
            Fraction(0),
        )

    def constant_response(self) -> List[Fraction]:
        """D(1) on each cell"""
        return [sum((table[j] for table in self.stencil.values()), Fraction(0)) for j in range(self.size)]

    def __repr__(self) -> str:
        return f"StencilOperator({self.name}, rank={self.rank}, period={self.period}, offsets={len(self.stencil)})"


@dataclass
class PolyAnsatz:
    """u(x) = sum over nu of a_nu(x mod N) x^nu with row-major coefficient tables"""
    rank: int
    period: int
    coefficients: Dict[MultiIndex, List[Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        size = self.period ** self.rank
        canonical = {}
        for nu, table in self.coefficients.items():
            nu = tuple(int(v) for v in nu)
            if len(nu) != self.rank or any(v < 0 for v in nu):
                raise ArgumentError(f"invalid exponent {nu} for rank {self.rank}")
            table = _table(table, size, f"coefficient table of x^{nu}")
            if any(table):
                canonical[nu] = table
        self.coefficients = {nu: canonical[nu] for nu in sorted(canonical, key=lambda nu: (sum(nu), nu))}

    @classmethod
    def monomial(cls, rank: int, nu: Sequence[int], period: int = 1) -> PolyAnsatz:
        return cls(rank, period, {tuple(nu): [1] * period ** rank})

    @property
    def degree(self) -> int:
        return max((sum(nu) for nu in self.coefficients), default=-1)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x: Sequence[int]) -> Fraction:
        j = cell_index(x, self.period)
        return sum(
            (table[j] * prod(v ** k for v, k in zip(x, nu)) for nu, table in self.coefficients.items()),
            Fraction(0),
        )

    def vector(self, n: int) -> List[Fraction]:
        """Coordinates in the unknown order (|nu|, nu, cell) up to degree n"""
        if self.degree > n:
            raise ArgumentError(f"ansatz of degree {self.degree} does not fit degree {n}")
        zero = [Fraction(0)] * self.period ** self.rank
        return [v for nu in multi_indices_upto(self.rank, n) for v in self.coefficients.get(nu, zero)]

    @classmethod
    def from_vector(cls, rank: int, period: int, n: int, vector: Sequence) -> PolyAnsatz:
        size = period ** rank
        exponents = multi_indices_upto(rank, n)
        if len(vector) != size * len(exponents):
            raise ArgumentError(f"vector of length {len(vector)} does not match {len(exponents)} exponents x {size} cells")
        return cls(rank, period, {nu: list(vector[i * size:(i + 1) * size]) for i, nu in enumerate(exponents)})

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for nu, table in sorted(self.coefficients.items(), key=lambda t: (-sum(t[0]), t[0])):
            monomial = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(nu) if k) or "1"
            if len(set(table)) == 1:
                parts.append(f"({table[0]})*{monomial}")
            else:
                parts.append("[" + ",".join(str(v) for v in table) + f"]*{monomial}")
        return " + ".join(parts)


def _check_compatible(D: StencilOperator, u: PolyAnsatz) -> None:
    if D.rank != u.rank or D.period != u.period:
        raise ArgumentError(
            f"operator (rank {D.rank}, period {D.period}) and ansatz (rank {u.rank}, period {u.period}) differ"
        )


def apply(D: StencilOperator, u: PolyAnsatz) -> PolyAnsatz:
    """D u re-expanded: b_mu(j) = sum_o sum_{nu >= mu} c_o(j) a_nu(j + o) C(nu, mu) o^(nu - mu)"""
    _check_compatible(D, u)
    size = D.size
    result: Dict[MultiIndex, List[Fraction]] = {}
    for j, cell in enumerate(cells(D.rank, D.period)):
        for offset, table in D.stencil.items():
            c = table[j]
            if not c:
                continue
            source = cell_index(tuple(a + b for a, b in zip(cell, offset)), D.period)
            for nu, a in u.coefficients.items():
                value = a[source]
                if not value:
                    continue
                for mu, b in binomial_shift(nu, offset).items():
                    row = result.setdefault(mu, [Fraction(0)] * size)
                    row[j] += c * value * b
    return PolyAnsatz(u.rank, u.period, result)


def translate(u: PolyAnsatz, t: Sequence[int]) -> PolyAnsatz:
    """x -> u(x + t) re-expanded in the ansatz"""
    t = tuple(int(v) for v in t)
    if len(t) != u.rank:
        raise ArgumentError(f"shift {t} does not have rank {u.rank}")
    shift = StencilOperator.constant(u.rank, {t: 1}, u.period, name="shift")
    return apply(shift, u)


@dataclass
class Kernel:
    """Basis of {u in the degree-n ansatz : D u = 0} in reduced echelon form"""
    operator: StencilOperator
    n: int
    basis: List[PolyAnsatz]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def vectors(self) -> List[List[Fraction]]:
        return [b.vector(self.n) for b in self.basis]


def system_matrix(D: StencilOperator, n: int) -> List[List[Fraction]]:
    """Rows: coefficients (mu, cell) of D u; columns: unknowns (|nu|, nu, cell)"""
    size = D.size
    exponents = multi_indices_upto(D.rank, n)
    column = {nu: i * size for i, nu in enumerate(exponents)}
    row_of = {mu: i * size for i, mu in enumerate(exponents)}
    rows = [[Fraction(0)] * (size * len(exponents)) for _ in range(size * len(exponents))]
    for j, cell in enumerate(cells(D.rank, D.period)):
        for offset, table in D.stencil.items():
            c = table[j]
            if not c:
                continue
            source = cell_index(tuple(a + b for a, b in zip(cell, offset)), D.period)
            for nu in exponents:
                for mu, b in binomial_shift(nu, offset).items():
                    rows[row_of[mu] + j][column[nu] + source] += c * b
    return [row for row in rows if any(row)]


def polynomial_kernel(D: StencilOperator, n: int) -> Kernel:
    """Exact kernel of D on the degree-n ansatz"""
    if n < 0:
        raise ArgumentError(f"n must be non-negative, got {n}")
    columns = D.size * len(multi_indices_upto(D.rank, n))
    vectors = linalg.nullspace_basis(system_matrix(D, n), columns)
    basis = [PolyAnsatz.from_vector(D.rank, D.period, n, v) for v in vectors]
    for b in basis:
        if not apply(D, b).is_zero():
            raise PropertyViolationError(f"kernel vector is not annihilated by {D.name}", str(b))
    logger.info("kernel", operator=D.name, period=D.period, n=n, dimension=len(basis))
    return Kernel(D, n, basis)


def in_span(kernel: Kernel, u: PolyAnsatz) -> bool:
    """Exact membership of u in the span of the kernel basis"""
    if u.rank != kernel.operator.rank or u.period != kernel.operator.period:
        raise ArgumentError("ansatz and kernel live in different spaces")
    if u.degree > kernel.n:
        return False
    columns = kernel.operator.size * len(multi_indices_upto(u.rank, kernel.n))
    return linalg.in_row_space(kernel.vectors(), u.vector(kernel.n), columns)


def refine_period(D: StencilOperator, factor: int = 2) -> StencilOperator:
    """The same operator with its coefficients viewed as (factor * N)-periodic"""
    if factor < 1:
        raise ArgumentError(f"factor must be positive, got {factor}")
    period = D.period * factor
    stencil = {
        offset: [table[cell_index(cell, D.period)] for cell in cells(D.rank, period)]
        for offset, table in D.stencil.items()
    }
    return StencilOperator(D.rank, period, stencil, D.name)


def commutes_with_period_shift(D: StencilOperator, probe: Optional[Probe] = None, samples: Optional[int] = None) -> CheckResult:
    """(D u)(x + t) = D(u(. + t))(x) for t in N Z^r, random ansatz u and points x"""
    probe = probe or Probe()
    samples = probe.samples if samples is None else samples
    for i in range(samples):
        degree = int(probe.integers(0, 2, 1)[0])
        u = PolyAnsatz(D.rank, D.period, {
            nu: probe.integers(-3, 3, D.size) for nu in multi_indices_upto(D.rank, degree)
        })
        x = tuple(probe.integers(-probe.radius, probe.radius, D.rank))
        t = tuple(D.period * v for v in probe.integers(-probe.radius, probe.radius, D.rank))
        shifted_x = tuple(a + b for a, b in zip(x, t))
        lhs = D(u, shifted_x)
        rhs = D(translate(u, t), x)
        if lhs != rhs:
            return CheckResult.failed("period_shift", {"x": list(x), "t": list(t), "u": str(u)}, i + 1)
    return CheckResult.passed("period_shift", samples)


@dataclass
class BoundReport:
    """Kernel dimensions up to degree n against s * C(n + r, r)"""
    operator: str
    rank: int
    period: int
    n: int
    s: int
    dims: List[int]
    bound: int
    constant_response: List[Fraction]
    harmonic_bound: Optional[int] = None
    expect_trivial: bool = False

    @property
    def dimension(self) -> int:
        return self.dims[-1]

    @property
    def slack(self) -> int:
        return self.bound - self.dimension

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.dims, self.dims[1:]))

    @property
    def expectation_met(self) -> Optional[bool]:
        """Comparison with the covering-operator expectations, when one applies"""
        if self.harmonic_bound is not None:
            return self.dimension <= self.harmonic_bound
        if self.expect_trivial:
            return not any(self.dims)
        return None

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "rank": self.rank,
            "period": self.period,
            "n": self.n,
            "s": self.s,
            "dims": self.dims,
            "bound": self.bound,
            "slack": self.slack,
            "constant_response": [str(v) for v in self.constant_response],
            "harmonic_bound": self.harmonic_bound,
            "expect_trivial": self.expect_trivial,
            "expectation_met": self.expectation_met,
        }


def check_bound(D: StencilOperator, n: int) -> BoundReport:
    """dim P_k <= s * C(k + r, r) for k <= n, with s = dim P_0.

    A violation raises PropertyViolationError. When D(1) = 0 the dimension is
    also compared with C(n + r, r); when D(1) >= 0 and D(1) != 0 the
    expectation dim = 0 is recorded. Neither comparison fails the check.
    """
    dims = [polynomial_kernel(D, k).dimension for k in range(n + 1)]
    s = dims[0]
    for k, dim in enumerate(dims):
        bound = s * comb(k + D.rank, D.rank)
        if dim > bound:
            raise PropertyViolationError(
                f"dim P_{k} = {dim} exceeds s * C({k + D.rank}, {D.rank}) = {bound}", {"n": k, "dims": dims}
            )
    if any(a > b for a, b in zip(dims, dims[1:])):
        raise PropertyViolationError("kernel dimensions are not monotone in n", {"dims": dims})
    response = D.constant_response()
    harmonic = comb(n + D.rank, D.rank) if not any(response) else None
    expect_trivial = all(v >= 0 for v in response) and any(response)
    report = BoundReport(
        D.name, D.rank, D.period, n, s, dims, s * comb(n + D.rank, D.rank), response, harmonic, expect_trivial,
    )
    logger.info("bound_checked", operator=D.name, n=n, dims=dims, bound=report.bound, slack=report.slack)
    return report
