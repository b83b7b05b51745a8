"""Exact linear algebra over Q through sympy"""

from fractions import Fraction
from typing import Dict, List, Sequence

from sympy import QQ, Matrix, Rational
from sympy.polys.matrices import DomainMatrix


def to_rational(value) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def rational_matrix(rows: Sequence[Sequence], columns: int) -> Matrix:
    """Build a sympy Matrix with exact rational entries"""
    if not rows:
        return Matrix.zeros(0, columns)
    return Matrix([[to_rational(v) for v in row] for row in rows])


def rank(rows: Sequence[Sequence], columns: int) -> int:
    if not rows or columns == 0:
        return 0
    return rational_matrix(rows, columns).rank()


def nullspace_basis(rows: Sequence[Sequence], columns: int) -> List[List[Fraction]]:
    """Basis of {v : M v = 0} in reduced row echelon form.

    The basis vectors are the nonzero rows of rref of the stacked nullspace,
    which makes the output independent of sympy's internal pivot choices.
    """
    if columns == 0:
        return []
    if not rows:
        vectors = Matrix.eye(columns)
    else:
        kernel = rational_matrix(rows, columns).nullspace()
        if not kernel:
            return []
        vectors = Matrix.hstack(*kernel).T
    reduced, pivots = vectors.rref()
    return [
        [to_fraction(reduced[i, j]) for j in range(columns)]
        for i in range(len(pivots))
    ]


def in_row_space(rows: Sequence[Sequence], vector: Sequence, columns: int) -> bool:
    """Whether `vector` is a rational combination of `rows`"""
    if not any(Fraction(v) for v in vector):
        return True
    if not rows:
        return False
    return rank(list(rows) + [list(vector)], columns) == rank(rows, columns)


def sparse_rank(rows: Sequence[Dict[int, int]], columns: int) -> int:
    """Rank over Q of a matrix given as {column: entry} rows"""
    entries = {}
    for i, row in enumerate(rows):
        nonzero = {j: Fraction(v) for j, v in row.items() if v}
        if nonzero:
            entries[i] = {j: QQ(v.numerator, v.denominator) for j, v in nonzero.items()}
    if not entries or columns == 0:
        return 0
    return DomainMatrix(entries, (len(rows), columns), QQ).rank()
