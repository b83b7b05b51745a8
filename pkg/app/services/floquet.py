"""Floquet decomposition of polynomial-like elements into periodic monomials.

An element p of P_n over the lattice Z^r is written as sum_nu a_nu(x) x^nu
with invariant coefficients a_nu. The top coefficients are read off D^n p on
standard basis tuples and divided by nu!, the top degree is subtracted and
the procedure recurses down to degree 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from app.config import settings
from app.exceptions import ArgumentError, NotPolynomialLikeError, PropertyViolationError, UnsupportedGroupError
from app.services.diffcalc import difference_closed, is_polynomial_like
from app.services.gmodule import FloquetElement, GroupFunction, ModuleElement, NumericFunction, is_invariant
from app.services.groups import GroupElement
from app.services.logger import get_logger
from app.utils.combinatorics import MultiIndex, arrangements, canonical_arrangement, multi_indices, nu_factorial
from app.utils.gaussian import GaussianRational
from app.utils.sampling import Probe

logger = get_logger(__name__)


def monomial_difference(nu: Sequence[int], gs: Sequence[Union[GroupElement, Sequence[int]]]) -> int:
    """[D^n x^nu](g_1..g_n) = nu! * sum over arrangements k of nu of g_{1,k_1} ... g_{n,k_n}"""
    nu = tuple(nu)
    n = sum(nu)
    if len(gs) != n:
        raise ArgumentError(f"|nu| = {n} but {len(gs)} group elements were given")
    coords = [g.coords if isinstance(g, GroupElement) else tuple(g) for g in gs]
    for x in coords:
        if len(x) < len(nu):
            raise ArgumentError(f"element {x} has fewer than {len(nu)} coordinates")
    total = sum(prod(x[i] for x, i in zip(coords, kappa)) for kappa in arrangements(nu))
    return nu_factorial(nu) * total


def monomial(template: ModuleElement, nu: Sequence[int]) -> ModuleElement:
    """x^nu in the module of `template`"""
    nu = tuple(nu)
    if isinstance(template, FloquetElement):
        return FloquetElement.monomial(template.rank, nu)
    if isinstance(template, NumericFunction):
        exponents = np.asarray(nu, dtype=float)
        return NumericFunction(template.rank, lambda x: complex(np.prod(x ** exponents)), f"x^{nu}")
    if isinstance(template, GroupFunction):
        group = template.group

        def evaluate(h: GroupElement) -> int:
            free = group.abelianize(h).free_part
            return prod(c ** k for c, k in zip(free, nu))

        return GroupFunction(group, evaluate, f"h^{nu}")
    raise UnsupportedGroupError(f"no monomials in {type(template).__name__}")


@dataclass
class LeadingCoefficients:
    """a_nu = [D^n p](e_k)/nu! for |nu| = n, with arrangement diagnostics"""
    n: int
    coefficients: Dict[MultiIndex, ModuleElement]
    arrangement_dependent: Dict[MultiIndex, Any] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.arrangement_dependent


def leading_coefficients(p: ModuleElement, n: int, probe: Optional[Probe] = None, verified: bool = False) -> LeadingCoefficients:
    """Top-degree coefficients of p in P_n.

    Every arrangement of each nu is evaluated; disagreement is an error over
    abelian groups and is recorded as a diagnostic otherwise.
    """
    probe = probe or Probe()
    group = p.group
    if not verified:
        certificate = is_polynomial_like(p, n, probe)
        if not certificate.holds:
            raise NotPolynomialLikeError(
                f"D^{n + 1} does not vanish", {"at": certificate.witness, "value": certificate.value}
            )
    gens = group.free_generators()
    coefficients: Dict[MultiIndex, ModuleElement] = {}
    dependent: Dict[MultiIndex, Any] = {}
    for nu in multi_indices(group.abelian_rank, n):
        canonical = canonical_arrangement(nu)
        value = difference_closed(p, tuple(gens[i] for i in canonical))
        for kappa in arrangements(nu):
            if kappa == canonical:
                continue
            witness = difference_closed(p, tuple(gens[i] for i in kappa)).distinguish(value, probe)
            if witness is not None:
                info = {"arrangement": [i + 1 for i in kappa], "difference": witness}
                if group.is_abelian:
                    raise PropertyViolationError(f"D^{n} p depends on the arrangement of {nu}", info)
                dependent[nu] = info
                break
        a_nu = value.scale(Fraction(1, nu_factorial(nu)))
        invariance = is_invariant(a_nu, probe=probe)
        if not invariance.invariant:
            raise PropertyViolationError(
                f"coefficient of x^{nu} is not invariant", list(invariance.witness.coords) if invariance.witness else None
            )
        coefficients[nu] = a_nu
    return LeadingCoefficients(n, coefficients, dependent)


@dataclass
class Decomposition:
    """p = sum over nu of coefficients[nu] * x^nu with invariant coefficients"""
    n: int
    zero: ModuleElement
    coefficients: Dict[MultiIndex, ModuleElement] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.zero.group.abelian_rank

    def __len__(self) -> int:
        return len(self.coefficients)


def decompose(p: ModuleElement, n: int, probe: Optional[Probe] = None) -> Decomposition:
    """Peel p in P_n down to degree 0 over an abelian group"""
    probe = probe or Probe()
    group = p.group
    if not group.is_abelian:
        raise UnsupportedGroupError(f"decomposition is only defined over abelian groups, got {group}")
    if n < 0:
        raise ArgumentError(f"n must be non-negative, got {n}")

    current = p
    collected: Dict[MultiIndex, ModuleElement] = {}
    for level in range(n, -1, -1):
        certificate = is_polynomial_like(current, level, probe)
        if not certificate.holds:
            raise NotPolynomialLikeError(
                f"remainder is not in P_{level}",
                {"at": certificate.witness, "value": certificate.value},
                level=level,
            )
        leading = leading_coefficients(current, level, probe, verified=True)
        for nu, a_nu in leading.coefficients.items():
            if a_nu.is_zero(probe):
                continue
            collected[nu] = a_nu
            current = current - a_nu * monomial(p, nu)
        logger.debug("peeled", level=level, terms=len(collected))

    witness = current.nonzero_witness(probe)
    if witness is not None:
        raise PropertyViolationError("remainder after peeling is nonzero", witness)
    ordered = {nu: collected[nu] for nu in sorted(collected, key=lambda nu: (-sum(nu), tuple(-k for k in nu)))}
    logger.info("decomposed", n=n, terms=len(ordered), exact=p.exact)
    return Decomposition(n, p.zero_like(), ordered)


def reconstruct(decomposition: Decomposition) -> ModuleElement:
    """sum of a_nu * x^nu"""
    total = decomposition.zero
    for nu, a_nu in decomposition.coefficients.items():
        total = total + a_nu * monomial(decomposition.zero, nu)
    return total


def fit_fourier(f: ModuleElement, cutoff: Optional[int] = None, grid: Optional[int] = None, tol: Optional[float] = None, max_denominator: int = 10**6) -> FloquetElement:
    """Truncated Fourier series of a periodic black box as an invariant FloquetElement.

    f is sampled on the grid {j/grid} of [0, 1)^r; coefficients with |k|_inf
    above `cutoff` or modulus below `tol` are dropped and the rest are
    rationalized with `max_denominator`.
    """
    if isinstance(f, FloquetElement):
        return f
    if not isinstance(f, NumericFunction):
        raise UnsupportedGroupError(f"cannot sample {type(f).__name__} on R^r")
    cutoff = settings.FOURIER_CUTOFF if cutoff is None else cutoff
    grid = settings.FOURIER_GRID if grid is None else grid
    tol = settings.TOLERANCE if tol is None else tol
    if grid <= 2 * cutoff:
        raise ArgumentError(f"grid {grid} cannot resolve frequencies up to {cutoff}")
    r = f.rank
    axes = np.meshgrid(*([np.arange(grid) / grid] * r), indexing="ij")
    points = np.stack([a.ravel() for a in axes], axis=-1)
    samples = np.array([f(x) for x in points], dtype=complex).reshape((grid,) * r)
    spectrum = np.fft.fftn(samples) / grid ** r

    terms: Dict[Any, GaussianRational] = {}
    zero = (0,) * r
    for k in np.ndindex(*((2 * cutoff + 1,) * r)):
        k = tuple(int(v) - cutoff for v in k)
        c = spectrum[tuple(v % grid for v in k)]
        if abs(c) < tol:
            continue
        terms[(k, zero)] = GaussianRational(
            Fraction(float(c.real)).limit_denominator(max_denominator),
            Fraction(float(c.imag)).limit_denominator(max_denominator),
        )
    return FloquetElement(r, terms)


def export_decomposition(decomposition: Decomposition, cutoff: Optional[int] = None, grid: Optional[int] = None) -> Decomposition:
    """Decomposition with every black-box coefficient replaced by its Fourier fit"""
    coefficients = {nu: fit_fourier(a, cutoff, grid) for nu, a in decomposition.coefficients.items()}
    rank = decomposition.rank
    return Decomposition(decomposition.n, FloquetElement.zero(rank), coefficients)
