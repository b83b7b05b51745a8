"""FastAPI application entry point for the difference calculus service"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app import __version__
from app.api import calculus, health
from app.config import settings
from app.services.logger import configure_logging, get_logger

configure_logging()
logger = get_logger(__name__)

app = FastAPI(
    title=settings.APP_NAME,
    description="Exact difference operators, polymorphism spaces, Floquet decompositions and periodic stencil kernels",
    version=__version__
)

# CORS middleware - parse CORS_ORIGINS string
cors_origins = ["*"] if settings.CORS_ORIGINS == "*" else [origin.strip() for origin in settings.CORS_ORIGINS.split(",")]

app.add_middleware(
    CORSMiddleware,
    allow_origins=cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(health.router, prefix="/api", tags=["health"])
app.include_router(calculus.router, prefix="/api", tags=["calculus"])


@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "message": settings.APP_NAME,
        "version": __version__,
        "docs": "/docs"
    }
