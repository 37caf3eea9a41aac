import os

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Only load .env in local development (not in containers that inject the environment)
if os.getenv("GALILEI_CONTAINER") is None:
    load_dotenv()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="GALILEI_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_TITLE: str = Field(
        default="Galilei Hybrid Toolkit",
        description="Title used by the CLI banner and the HTTP docs"
    )
    APP_VERSION: str = Field(
        default="1.0.0",
        description="Toolkit version"
    )
    ENVIRONMENT: str = Field(
        default="development",
        description="Application environment"
    )
    LOG_LEVEL: str = Field(
        default="INFO",
        description="Root logging level"
    )

    # Classification
    CLASSIFY_QUANTUM_MASS: int = Field(
        default=2,
        description="Generic numeric quantum mass M used to build the constraint system",
        ge=1, le=10_000
    )
    CLASSIFY_CLASSICAL_MASS: int = Field(
        default=3,
        description="Generic numeric classical mass m used to build the constraint system",
        ge=1, le=10_000
    )
    CLASSIFY_MAX_WORKERS: int = Field(
        default=1,
        description="Threads used to expand constraint rows",
        ge=1, le=64
    )
    CLASSIFY_MAX_DEGREE_LIMIT: int = Field(
        default=4,
        description="Largest total degree accepted for exploratory classification runs",
        ge=0, le=8
    )
    CLASSIFY_RATE_LIMIT: str = Field(
        default="10/minute",
        description="Rate limit applied to the HTTP classify endpoint"
    )

    # Simulation
    MIN_POINTS_PER_SIGMA: float = Field(
        default=4.0,
        description="Minimum grid points per standard deviation of an initial packet",
        ge=1.0, le=64.0
    )
    TAIL_FRACTION: float = Field(
        default=0.05,
        description="Fraction of each axis treated as the boundary band by the tail-mass diagnostic",
        gt=0.0, lt=0.5
    )
    TAIL_MASS_TOLERANCE: float = Field(
        default=1e-8,
        description="Tail mass above which an aliasing warning is logged",
        gt=0.0
    )
    FFT_WORKERS: int = Field(
        default=1,
        description="Worker threads handed to scipy.fft per transform",
        ge=1, le=64
    )

    # Server Configuration
    PORT: int = Field(
        default=8000,
        description="Port for the HTTP server to listen on",
        ge=1, le=65535
    )


settings = Settings()
