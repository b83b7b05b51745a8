"""Health check endpoints"""

from fastapi import APIRouter
from datetime import datetime

import numpy
import sympy

from app import __version__
from app.config import settings
from app.services import catalogue

router = APIRouter()


@router.get("/health")
async def health_check():
    """Basic health check endpoint"""
    return {
        "status": "healthy",
        "timestamp": datetime.utcnow().isoformat(),
        "version": __version__
    }


@router.get("/health/detailed")
async def detailed_health_check():
    """Detailed health check with library and configuration information"""
    return {
        "status": "healthy",
        "timestamp": datetime.utcnow().isoformat(),
        "version": __version__,
        "environment": settings.ENVIRONMENT,
        "seed": settings.SEED,
        "tolerance": settings.TOLERANCE,
        "sympy_version": sympy.__version__,
        "numpy_version": numpy.__version__,
        "catalogue": catalogue.names()
    }
