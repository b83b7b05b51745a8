"""Polymorphism file format: {"arity": n, "rank": r, "values": {"1,2": <element>, ...}}"""

from typing import Any, Dict

from pydantic import BaseModel, Field, ValidationError

from app.exceptions import InputError
from app.models.element import dump_value, parse_element, read_json
from app.services.gmodule import FloquetElement, ModuleElement
from app.services.groups import GroupSpec
from app.services.polymorph import Polymorphism, ScalarVector


class PolymorphismModel(BaseModel):
    """Generator tensor with 1-based comma-separated index keys"""
    arity: int = Field(..., ge=0, description="Number of arguments n")
    rank: int = Field(..., ge=0, description="Free rank r of the abelianization")
    values: Dict[str, Any] = Field(default_factory=dict, description="b_{i_1..i_n} keyed by \"i_1,...,i_n\"")


def _key(index) -> str:
    return ",".join(str(i + 1) for i in index)


def dump_polymorphism(L: Polymorphism) -> dict:
    values = {}
    for index, entry in L.values.items():
        if isinstance(entry, ModuleElement):
            if entry.is_zero():
                continue
            values[_key(index)] = dump_value(entry)
        elif isinstance(entry, ScalarVector):
            if not entry.is_zero():
                values[_key(index)] = [str(v) for v in entry.values]
        elif entry:
            values[_key(index)] = str(entry)
    return PolymorphismModel(arity=L.arity, rank=L.rank, values=values).model_dump()


def parse_polymorphism(data: Any) -> Polymorphism:
    """Polymorphism over Z^r with FloquetElement entries"""
    try:
        model = PolymorphismModel.model_validate(data)
    except ValidationError as e:
        raise InputError(f"invalid polymorphism: {e.errors()[0]['msg']}") from None
    values = {}
    for key, entry in model.values.items():
        try:
            index = tuple(int(i) - 1 for i in key.split(",")) if key else ()
        except ValueError:
            raise InputError(f"invalid index key {key!r}") from None
        if len(index) != model.arity or any(i < 0 or i >= model.rank for i in index):
            raise InputError(f"index {key!r} outside {{1..{model.rank}}}^{model.arity}")
        element = parse_element(entry, model.rank)
        if not element.is_invariant_exact():
            raise InputError(f"entry {key!r} is not invariant")
        values[index] = element
    return Polymorphism(model.arity, GroupSpec.free_abelian(model.rank), values, FloquetElement.zero(model.rank))


def load_polymorphism(path: str) -> Polymorphism:
    return parse_polymorphism(read_json(path))
