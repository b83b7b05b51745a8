"""Named black-box module elements reachable as `catalogue:NAME`"""

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from app.exceptions import InputError
from app.services.gmodule import GroupFunction, ModuleElement, NumericFunction, additive_function
from app.services.groups import GroupSpec

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class CatalogueEntry:
    """A named element with its known polynomial-like degree"""
    name: str
    degree: int
    description: str
    factory: Callable[[], ModuleElement]

    def build(self) -> ModuleElement:
        return self.factory()


def _sin_times_x() -> NumericFunction:
    return NumericFunction(1, lambda x: np.sin(TWO_PI * x[0]) * x[0], "sin(2pi x)*x")


def _cos_periodic() -> NumericFunction:
    return NumericFunction(1, lambda x: np.cos(TWO_PI * x[0]), "cos(2pi x)")


def _sin_times_square() -> NumericFunction:
    return NumericFunction(1, lambda x: np.sin(TWO_PI * x[0]) * x[0] ** 2 + x[0], "sin(2pi x)*x^2 + x")


def _mixed_quadratic() -> NumericFunction:
    def evaluate(x):
        return x[0] * x[1] + np.cos(TWO_PI * x[0]) * x[1] + np.sin(TWO_PI * x[1])

    return NumericFunction(2, evaluate, "x1*x2 + cos(2pi x1)*x2 + sin(2pi x2)")


def _plane_wave_linear() -> NumericFunction:
    def evaluate(x):
        return np.exp(1j * TWO_PI * (x[0] - x[1])) * x[0] + 1

    return NumericFunction(2, evaluate, "e^{2pi i(x1-x2)}*x1 + 1")


def _heisenberg_center() -> GroupFunction:
    return GroupFunction(GroupSpec.heisenberg(), lambda h: h.coords[2], "c")


def _heisenberg_first() -> GroupFunction:
    return additive_function(GroupSpec.heisenberg(), [1, 0])


CATALOGUE: Dict[str, CatalogueEntry] = {
    entry.name: entry
    for entry in [
        CatalogueEntry("sin_times_x", 1, "sin(2 pi x) x on R", _sin_times_x),
        CatalogueEntry("cos_periodic", 0, "cos(2 pi x) on R", _cos_periodic),
        CatalogueEntry("sin_times_square", 2, "sin(2 pi x) x^2 + x on R", _sin_times_square),
        CatalogueEntry("mixed_quadratic", 2, "x1 x2 + cos(2 pi x1) x2 + sin(2 pi x2) on R^2", _mixed_quadratic),
        CatalogueEntry("plane_wave_linear", 1, "e^{2 pi i (x1 - x2)} x1 + 1 on R^2", _plane_wave_linear),
        CatalogueEntry("heisenberg_center", 2, "u(a, b, c) = c on the integer Heisenberg group", _heisenberg_center),
        CatalogueEntry("heisenberg_first", 1, "u(a, b, c) = a on the integer Heisenberg group", _heisenberg_first),
    ]
}


def names() -> List[str]:
    return sorted(CATALOGUE)


def get(name: str) -> CatalogueEntry:
    try:
        return CATALOGUE[name]
    except KeyError:
        raise InputError(f"unknown catalogue element {name!r}; known: {', '.join(names())}") from None


def build(name: str) -> ModuleElement:
    return get(name).build()
