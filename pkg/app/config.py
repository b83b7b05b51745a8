"""Configuration management using Pydantic Settings"""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings"""

    # Application
    APP_NAME: str = "Difference Calculus Toolkit"
    DEBUG: bool = False
    ENVIRONMENT: str = "development"

    # Server
    HOST: str = "0.0.0.0"
    PORT: int = 8000

    # CORS
    CORS_ORIGINS: str = "*"  # Can be "*" or comma-separated list

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = False  # JSON lines instead of console rendering

    # Randomized checks
    SEED: int = 20240601
    TOLERANCE: float = 1e-8  # absolute, black-box modules only
    RANDOM_SAMPLES: int = 64  # N_rand
    SAMPLE_RADIUS: int = 3  # coordinate radius R
    EVALUATION_POINTS: int = 8  # points x used to compare black-box elements
    ACTION_LAW_SAMPLES: int = 100

    # Polymorphism extraction
    MULTILINEARITY_SAMPLES: int = 16
    MULTILINEARITY_RADIUS: int = 3

    # Dimension cross-checks
    BRUTE_FORCE_MAX_UNKNOWNS: int = 512  # dims skips the brute-force ranks above this
    DIMS_MAX_ARGUMENT: int = 64  # largest n or r accepted by the dims endpoint

    # Fourier export of black-box coefficients
    FOURIER_CUTOFF: int = 4  # max |k| per axis
    FOURIER_GRID: int = 32  # samples per axis on [0, 1)^r

    # Solver caps (CLI defaults, flags override)
    MAX_PERIOD: int = 8
    MAX_DEGREE: int = 4

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True


settings = Settings()
