"""StencilOperator and kernel file formats"""

from typing import Any, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from app.exceptions import ArgumentError, InputError
from app.models.element import parse_rational, read_json
from app.services.solver import Kernel, StencilOperator


class StencilEntry(BaseModel):
    """Offset with its coefficient table, flattened row-major over (Z/N)^r"""
    offset: List[int] = Field(..., description="Offset o in Z^r")
    coeffs: List[str] = Field(..., description="c_o on each cell as p/q")

    @field_validator("coeffs", mode="before")
    @classmethod
    def check_coeffs(cls, values: List[Any]) -> List[str]:
        return [parse_rational(v) for v in values]


class StencilOperatorModel(BaseModel):
    """Serialized periodic stencil operator"""
    rank: int = Field(..., ge=1, description="Lattice rank r")
    period: int = Field(1, ge=1, description="Coefficient period N")
    stencil: List[StencilEntry] = Field(..., description="Offsets and coefficient tables")
    name: Optional[str] = Field(None, description="Label used in reports")

    def to_operator(self) -> StencilOperator:
        try:
            return StencilOperator(
                self.rank,
                self.period,
                {tuple(e.offset): e.coeffs for e in self.stencil},
                self.name or "D",
            )
        except ArgumentError as e:
            raise InputError(e.message) from None

    @classmethod
    def from_operator(cls, D: StencilOperator) -> "StencilOperatorModel":
        return cls(
            rank=D.rank,
            period=D.period,
            name=D.name,
            stencil=[StencilEntry(offset=list(o), coeffs=[str(c) for c in table]) for o, table in D.stencil.items()],
        )


def parse_operator(data: Any) -> StencilOperator:
    try:
        return StencilOperatorModel.model_validate(data).to_operator()
    except ValidationError as e:
        raise InputError(f"invalid operator: {e.errors()[0]['msg']}") from None


def load_operator(path: str) -> StencilOperator:
    return parse_operator(read_json(path))


def dump_kernel(kernel: Kernel) -> dict:
    """Dimension and basis; each basis element maps "nu" to its coefficient table"""
    return {
        "n": kernel.n,
        "dimension": kernel.dimension,
        "basis": [
            {",".join(map(str, nu)): [str(v) for v in table] for nu, table in b.coefficients.items()}
            for b in kernel.basis
        ],
        "text": [str(b) for b in kernel.basis],
    }
