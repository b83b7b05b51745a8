"""Group specification models"""

from typing import List

from pydantic import BaseModel, Field

from app.services.groups import GroupKind, GroupSpec


class GroupSpecModel(BaseModel):
    """Serialized GroupSpec, e.g. {"kind": "free_abelian", "rank": 2}"""
    kind: GroupKind = Field(..., description="Group family")
    rank: int = Field(0, ge=0, description="Rank of the abelianization (forced to 2 for heisenberg)")
    torsion_moduli: List[int] = Field(default_factory=list, description="Cyclic torsion factors, each >= 2")

    def to_spec(self) -> GroupSpec:
        return GroupSpec(self.kind, self.rank, tuple(self.torsion_moduli))

    @classmethod
    def from_spec(cls, spec: GroupSpec) -> "GroupSpecModel":
        return cls(kind=spec.kind, rank=spec.rank, torsion_moduli=list(spec.torsion_moduli))
