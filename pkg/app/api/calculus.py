"""Calculus endpoints: the CLI commands over JSON"""

import json
from typing import Any, List, Optional, Union

from fastapi import APIRouter, HTTPException, Query
from pydantic import BaseModel, Field

from app.cli import cmd_decompose, cmd_diff, cmd_dims, cmd_solve, cmd_verify
from app.config import settings
from app.exceptions import CalculusError
from app.models.element import parse_element
from app.models.job import JobConfig
from app.models.operator import StencilOperatorModel
from app.services import catalogue
from app.services.gmodule import ModuleElement
from app.services.logger import get_logger

router = APIRouter()
logger = get_logger(__name__)


class ElementRequest(BaseModel):
    """Element given as FloquetElement terms or as a catalogue name"""
    element: Union[str, List[Any]] = Field(..., description="Term list or catalogue name")
    rank: Optional[int] = Field(None, ge=0, description="Rank for an empty term list")
    degree: Optional[int] = Field(None, ge=0, description="n")
    seed: int = Field(default_factory=lambda: settings.SEED)
    samples: int = Field(default_factory=lambda: settings.RANDOM_SAMPLES, ge=1)
    tol: float = Field(default_factory=lambda: settings.TOLERANCE, gt=0)

    def resolve(self) -> ModuleElement:
        if isinstance(self.element, str):
            return catalogue.build(self.element)
        return parse_element(self.element, self.rank)

    def job(self, command: str) -> JobConfig:
        source = f"catalogue:{self.element}" if isinstance(self.element, str) else None
        return JobConfig(
            command=command, element=source, degree=self.degree, seed=self.seed, samples=self.samples, tol=self.tol, rank=self.rank
        )


class DiffRequest(ElementRequest):
    """Element plus the tuples at which D^n is evaluated"""
    at: Optional[List[List[List[int]]]] = Field(None, description="Tuples of coordinate lists")


class SolveRequest(BaseModel):
    """Stencil operator and degree"""
    operator: StencilOperatorModel
    degree: int = Field(..., ge=0, description="n")
    seed: int = Field(default_factory=lambda: settings.SEED)


def _run(command: str, call):
    try:
        report = call()
    except CalculusError as e:
        logger.warning("request_failed", command=command, error=type(e).__name__)
        raise HTTPException(status_code=e.http_status, detail=e.to_dict())
    return report.model_dump(mode="json") | {"passed": report.passed}


@router.get("/dims")
async def dims(
    n: int = Query(..., ge=0, le=settings.DIMS_MAX_ARGUMENT),
    r: int = Query(..., ge=0, le=settings.DIMS_MAX_ARGUMENT),
    s: int = Query(1, ge=1, le=settings.DIMS_MAX_ARGUMENT),
):
    """dim L_n, dim L_n^S and the P_n bounds"""
    return _run("dims", lambda: cmd_dims(JobConfig(command="dims", degree=n, rank=r, invariant_dim=s)))


@router.post("/verify")
async def verify(request: ElementRequest):
    """Membership and identity suite"""
    return _run("verify", lambda: cmd_verify(request.job("verify"), element=request.resolve()))


@router.post("/diff")
async def diff(request: DiffRequest):
    """Values of D^n on tuples"""
    at = json.dumps(request.at) if request.at is not None else None
    return _run("diff", lambda: cmd_diff(request.job("diff"), at, element=request.resolve()))


@router.post("/decompose")
async def decompose(request: ElementRequest):
    """Floquet decomposition with round-trip check"""
    return _run("decompose", lambda: cmd_decompose(request.job("decompose"), element=request.resolve()))


@router.post("/solve")
async def solve(request: SolveRequest):
    """Polynomial-like kernel of a periodic stencil operator"""
    config = JobConfig(command="solve", degree=request.degree, seed=request.seed)
    return _run("solve", lambda: cmd_solve(config, operator=request.operator.to_operator()))
