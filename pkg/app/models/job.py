"""Resolved job configuration echoed in every report"""

from typing import Optional

from pydantic import BaseModel, Field

from app.config import settings
from app.models.group import GroupSpecModel
from app.utils.sampling import Probe


class JobConfig(BaseModel):
    """CLI flags after defaults from settings are applied"""
    command: str = Field(..., description="Subcommand")
    group: Optional[GroupSpecModel] = Field(None, description="Group, when not implied by the element")
    element: Optional[str] = Field(None, description="Element file or catalogue:NAME")
    operator: Optional[str] = Field(None, description="Stencil operator file")
    degree: Optional[int] = Field(None, ge=0, description="n")
    rank: Optional[int] = Field(None, ge=0, description="r for dims")
    invariant_dim: Optional[int] = Field(None, ge=1, description="s = dim A^G for dims")
    tol: float = Field(default_factory=lambda: settings.TOLERANCE, gt=0)
    samples: int = Field(default_factory=lambda: settings.RANDOM_SAMPLES, ge=1)
    radius: int = Field(default_factory=lambda: settings.SAMPLE_RADIUS, ge=1)
    seed: int = Field(default_factory=lambda: settings.SEED)
    fourier_cutoff: int = Field(default_factory=lambda: settings.FOURIER_CUTOFF, ge=0)
    max_period: int = Field(default_factory=lambda: settings.MAX_PERIOD, ge=1)
    max_degree: int = Field(default_factory=lambda: settings.MAX_DEGREE, ge=0)
    expect: Optional[str] = Field(None, description="Polymorphism file that D^n a must equal (diff)")
    out: Optional[str] = Field(None, description="Report path; stdout when omitted")

    def probe(self) -> Probe:
        """Fresh probe; identical configs draw identical tuples"""
        return Probe(seed=self.seed, tol=self.tol, samples=self.samples, radius=self.radius)

    def echo(self) -> dict:
        """Configuration as written to reports (output path excluded)"""
        return self.model_dump(mode="json", exclude={"out"}, exclude_none=True)
