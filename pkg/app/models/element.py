"""FloquetElement and Decomposition file formats"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from app.exceptions import InputError
from app.services import catalogue
from app.services.floquet import Decomposition, fit_fourier, reconstruct
from app.services.gmodule import FloquetElement, GroupFunction, ModuleElement, NumericFunction, is_invariant
from app.utils.gaussian import GaussianRational
from app.utils.sampling import Probe


def parse_rational(value: Union[str, int]) -> str:
    try:
        return str(Fraction(str(value).strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{value!r} is not an exact rational") from None


class FloquetTerm(BaseModel):
    """One term c * e^{2 pi i k.x} * x^nu with c = re + im*i"""
    k: List[int] = Field(..., description="Fourier index")
    nu: List[int] = Field(..., description="Exponent, non-negative")
    re: str = Field("0", description="Real part as p/q")
    im: str = Field("0", description="Imaginary part as p/q")

    @field_validator("nu")
    @classmethod
    def check_exponent(cls, nu: List[int]) -> List[int]:
        if any(v < 0 for v in nu):
            raise ValueError(f"negative exponent in {nu}")
        return nu

    @field_validator("re", "im", mode="before")
    @classmethod
    def check_rational(cls, value: Union[str, int]) -> str:
        return parse_rational(value)


class DecompositionTerm(BaseModel):
    """Coefficient a_nu of x^nu in a decomposition"""
    nu: List[int] = Field(..., description="Exponent of the monomial")
    coefficient: List[FloquetTerm] = Field(..., description="Invariant coefficient (all nu = 0)")


def parse_element(data: Any, rank: Optional[int] = None) -> FloquetElement:
    """Build a FloquetElement from a term list or {"rank": r, "terms": [...]}"""
    if isinstance(data, dict):
        rank = data.get("rank", rank)
        data = data.get("terms", [])
    if not isinstance(data, list):
        raise InputError("an element is a list of {k, nu, re, im} terms")
    try:
        terms = [FloquetTerm.model_validate(t) for t in data]
    except ValidationError as e:
        raise InputError(f"invalid element term: {e.errors()[0]['msg']}") from None
    if rank is None:
        rank = len(terms[0].k) if terms else 1
    for t in terms:
        if len(t.k) != rank or len(t.nu) != rank:
            raise InputError(f"term k={t.k}, nu={t.nu} does not have rank {rank}")
    merged: Dict[Any, GaussianRational] = {}
    for t in terms:
        key = (tuple(t.k), tuple(t.nu))
        merged[key] = merged.get(key, GaussianRational(0)) + GaussianRational(t.re, t.im)
    return FloquetElement(rank, merged)


def dump_element(element: FloquetElement) -> List[dict]:
    """Canonical term list"""
    return [
        FloquetTerm(k=list(k), nu=list(nu), re=str(c.re), im=str(c.im)).model_dump()
        for (k, nu), c in element.items()
    ]


def sample_values(f: NumericFunction, probe: Optional[Probe] = None) -> Dict[str, List[dict]]:
    """Values of a black box on the probe's evaluation points"""
    probe = probe or Probe()
    samples = []
    for x in f.sample_points(probe):
        value = f(x)
        samples.append({"x": [float(v) for v in x], "re": float(value.real), "im": float(value.imag)})
    return {"samples": samples}


def fourier_export(f: NumericFunction, probe: Optional[Probe] = None, cutoff: Optional[int] = None) -> Optional[FloquetElement]:
    """Fourier fit of an invariant black box, or None when f is not periodic
    or the fit does not reproduce f on the evaluation points within tolerance"""
    probe = probe or Probe()
    if not is_invariant(f, probe=probe).invariant:
        return None
    fit = fit_fourier(f, cutoff=cutoff, tol=probe.tol)
    points = f.sample_points(probe)
    expected = np.array([f(x) for x in points], dtype=complex)
    if np.max(np.abs(fit.evaluate(points) - expected), initial=0.0) > probe.tol:
        return None
    return fit


def dump_value(value: ModuleElement, probe: Optional[Probe] = None, cutoff: Optional[int] = None) -> Any:
    """Serializable form of a module element.

    Black boxes become a term list when they are periodic and their Fourier
    fit reproduces them, and {"samples": [...]} otherwise.
    """
    if isinstance(value, FloquetElement):
        return dump_element(value)
    if isinstance(value, NumericFunction):
        fit = fourier_export(value, probe, cutoff)
        return dump_element(fit) if fit is not None else sample_values(value, probe)
    if isinstance(value, GroupFunction):
        # invariant functions on the group itself are constants
        return str(value(value.group.identity()))
    raise InputError(f"cannot serialize {type(value).__name__}")


def dump_decomposition(decomposition: Decomposition) -> List[dict]:
    return [
        {"nu": list(nu), "coefficient": dump_value(a)}
        for nu, a in decomposition.coefficients.items()
    ]


def parse_decomposition(data: Any, rank: int, n: Optional[int] = None) -> Decomposition:
    """Decomposition over the Floquet algebra of rank `rank`"""
    try:
        terms = [DecompositionTerm.model_validate(t) for t in data]
    except ValidationError as e:
        raise InputError(f"invalid decomposition term: {e.errors()[0]['msg']}") from None
    coefficients = {}
    for t in terms:
        coefficient = parse_element([c.model_dump() for c in t.coefficient], rank)
        if not coefficient.is_invariant_exact():
            raise InputError(f"coefficient of x^{t.nu} is not invariant")
        coefficients[tuple(t.nu)] = coefficient
    degree = max((sum(nu) for nu in coefficients), default=0)
    return Decomposition(degree if n is None else n, FloquetElement.zero(rank), coefficients)


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def is_decomposition(data: Any) -> bool:
    return isinstance(data, list) and bool(data) and all(isinstance(t, dict) and "coefficient" in t for t in data)


def load_element(source: str, rank: Optional[int] = None) -> ModuleElement:
    """`catalogue:NAME`, a FloquetElement JSON file, or a decomposition file (reconstructed)"""
    if source.startswith("catalogue:"):
        return catalogue.build(source.split(":", 1)[1])
    data = read_json(source)
    if is_decomposition(data):
        if rank is None:
            rank = len(data[0].get("nu", [])) or 1
        return reconstruct(parse_decomposition(data, rank))
    return parse_element(data, rank)
