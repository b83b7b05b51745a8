"""Multi-index and subset combinatorics"""

import itertools
from math import comb, factorial, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

MultiIndex = Tuple[int, ...]


def multi_indices(r: int, degree: int) -> List[MultiIndex]:
    """All nu in N^r with |nu|_1 == degree, lexicographically descending"""
    if degree < 0:
        return []
    if r == 0:
        return [()] if degree == 0 else []
    result = []
    for first in range(degree, -1, -1):
        for rest in multi_indices(r - 1, degree - first):
            result.append((first,) + rest)
    return result


def multi_indices_upto(r: int, n: int) -> List[MultiIndex]:
    """All nu with |nu|_1 <= n ordered by (|nu|_1, nu lexicographic)"""
    result = []
    for degree in range(n + 1):
        result.extend(sorted(multi_indices(r, degree)))
    return result


def nu_factorial(nu: Sequence[int]) -> int:
    """nu! = nu_1! ... nu_r!"""
    return prod(factorial(k) for k in nu)


def canonical_arrangement(nu: Sequence[int]) -> Tuple[int, ...]:
    """Sorted index sequence (0-based) with multiplicities nu"""
    return tuple(i for i, k in enumerate(nu) for _ in range(k))


def arrangements(nu: Sequence[int]) -> List[Tuple[int, ...]]:
    """All distinct index sequences (0-based) with multiplicities nu"""
    base = canonical_arrangement(nu)
    return sorted(set(itertools.permutations(base)))


def gray_code(n: int) -> Iterator[Tuple[int, Optional[int]]]:
    """Subsets of {0..n-1} as bit masks in reflected Gray-code order.

    Yields (mask, flipped) where flipped is the bit changed from the previous
    mask (None for the first, empty subset).
    """
    previous = 0
    yield 0, None
    for step in range(1, 1 << n):
        mask = step ^ (step >> 1)
        flipped = (mask ^ previous).bit_length() - 1
        previous = mask
        yield mask, flipped


def simplex_grid(dim: int, total: int) -> Iterator[Tuple[int, ...]]:
    """Vectors in N^dim with coordinate sum <= total"""
    if dim == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in simplex_grid(dim - 1, total - first):
            yield (first,) + rest


def binomial_shift(nu: Sequence[int], shift: Sequence[int]) -> Dict[MultiIndex, int]:
    """Coefficients of (x + shift)^nu as a map mu -> integer coefficient"""
    ranges = [range(k + 1) for k in nu]
    result: Dict[MultiIndex, int] = {}
    for mu in itertools.product(*ranges):
        coefficient = 1
        for k, m, s in zip(nu, mu, shift):
            coefficient *= comb(k, m) * s ** (k - m)
            if coefficient == 0:
                break
        if coefficient:
            result[tuple(mu)] = coefficient
    return result


def add_indices(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))
