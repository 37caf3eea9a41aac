"""
Galilei Hybrid Toolkit API
FastAPI surface mirroring the CLI: algebra, verification, classification and simulation.
"""

import logging
from contextlib import asynccontextmanager
from typing import Any, Dict

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from slowapi import Limiter, _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
from slowapi.util import get_remote_address

from app.core.config import settings
from app.core.exceptions import (
    ExpressionSyntaxError,
    GalileiToolkitError,
    SimulationDivergenceError,
)
from app.models.galilei_schemas import (
    ClassificationConfig,
    CommuteRequest,
    LiouvillianRequest,
    NormalFormRequest,
    SimulationConfig,
    VerifyRequest,
)
from app.models.report_schemas import Report
from app.services.toolkit.toolkit_service import GalileiToolkitService

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Rate limiter
limiter = Limiter(key_func=get_remote_address)

service = GalileiToolkitService()


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Lifespan context manager for startup and shutdown events."""
    logger.info("=" * 60)
    logger.info(f"Starting {settings.APP_TITLE}")
    logger.info(f"Environment: {settings.ENVIRONMENT}")
    logger.info(f"Version: {settings.APP_VERSION}")
    logger.info(f"Port: {settings.PORT}")
    logger.info(
        f"Classification masses: M={settings.CLASSIFY_QUANTUM_MASS}, m={settings.CLASSIFY_CLASSICAL_MASS}, "
        f"workers={settings.CLASSIFY_MAX_WORKERS}"
    )
    logger.info(f"Classify rate limit: {settings.CLASSIFY_RATE_LIMIT}")
    logger.info("=" * 60)

    yield

    logger.info(f"Shutting down {settings.APP_TITLE}")


app = FastAPI(
    title=settings.APP_TITLE,
    version=settings.APP_VERSION,
    description="""
    Symbolic Galilei-algebra engine for quantum, Koopman-von Neumann classical
    and hybrid representations, plus a split-step simulator of the hybrid model.

    ## Endpoints
    - `POST /commute` - Normal form of a commutator
    - `POST /normal-form` - Canonical form of an expression
    - `POST /verify` - Galilei bracket table of a representation
    - `POST /classify` - Invariant interaction terms (rate limited)
    - `POST /liouvillian` - Liouvillian of a classical Hamiltonian
    - `POST /simulate` - Hybrid dynamics run, summary report
    - `GET /health` - Health check
    """,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan
)

app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# ========== Exception Handlers ==========

@app.exception_handler(ExpressionSyntaxError)
async def expression_syntax_error_handler(request: Request, exc: ExpressionSyntaxError):
    """Handle expressions that do not parse."""
    logger.warning(f"Expression Error: {exc.message}")
    return JSONResponse(
        status_code=exc.status_code,
        content=exc.to_dict()
    )


@app.exception_handler(SimulationDivergenceError)
async def simulation_divergence_handler(request: Request, exc: SimulationDivergenceError):
    """Handle aborted simulations."""
    logger.error(f"Simulation Diverged: {exc.message}")
    return JSONResponse(
        status_code=exc.status_code,
        content=exc.to_dict()
    )


@app.exception_handler(GalileiToolkitError)
async def toolkit_error_handler(request: Request, exc: GalileiToolkitError):
    """Handle every other toolkit failure with its own status code."""
    logger.warning(f"Toolkit Error: {exc.error_code} - {exc.message}")
    return JSONResponse(
        status_code=exc.status_code,
        content=exc.to_dict()
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    """Handle unexpected exceptions."""
    logger.error(f"Unexpected error: {str(exc)}", exc_info=True)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={
            "error": "INTERNAL_SERVER_ERROR",
            "message": "An unexpected error occurred.",
            "details": {}
        }
    )


# ========== Endpoints ==========

@app.get("/", tags=["Info"])
async def root() -> Dict[str, Any]:
    """API information and status."""
    return {
        "name": settings.APP_TITLE,
        "version": settings.APP_VERSION,
        "status": "operational",
        "environment": settings.ENVIRONMENT,
        "endpoints": {
            "commute": "/commute",
            "normal_form": "/normal-form",
            "verify": "/verify",
            "classify": "/classify",
            "liouvillian": "/liouvillian",
            "simulate": "/simulate",
            "health": "/health",
            "docs": "/docs",
        },
        "limits": {
            "classify_rate_limit": settings.CLASSIFY_RATE_LIMIT,
            "max_degree": settings.CLASSIFY_MAX_DEGREE_LIMIT,
        }
    }


@app.get("/health", tags=["Health"])
async def health_check() -> Dict[str, str]:
    """Health check endpoint."""
    return {
        "status": "healthy",
        "version": settings.APP_VERSION,
        "environment": settings.ENVIRONMENT
    }


@app.post("/commute", response_model=Report, tags=["Algebra"])
def commute(body: CommuteRequest) -> Report:
    """Normal form of [left, right]."""
    _, report = service.commute(body.left, body.right)
    return report


@app.post("/normal-form", response_model=Report, tags=["Algebra"])
def normal_form(body: NormalFormRequest) -> Report:
    """Canonical normal-ordered form of an expression."""
    _, report = service.normal_form(body.expression)
    return report


@app.post("/liouvillian", response_model=Report, tags=["Algebra"])
def liouvillian(body: LiouvillianRequest) -> Report:
    """Liouvillian ∇ₚH·λ_q − ∇_qH·λ_p of a classical Hamiltonian."""
    _, report = service.liouvillian(body.hamiltonian)
    return report


@app.post("/verify", response_model=Report, tags=["Algebra"])
def verify(body: VerifyRequest) -> Report:
    """
    Galilei bracket table of a representation.

    `passed` in the response is false when any relation fails; the status is still 200.
    """
    logger.info(f"Verify request: rep={body.rep}, interaction={body.interaction!r}")
    return service.verify(body.rep, body.interaction)


@app.post("/classify", response_model=Report, tags=["Classification"])
@limiter.limit(settings.CLASSIFY_RATE_LIMIT)
def classify(request: Request, body: ClassificationConfig) -> Report:
    """
    Solve for the Galilei-invariant interaction terms.

    The body is a classification config; omitted fields take their defaults
    (degree ≤ 2, λp-degree ≤ 1, no momentum filter).
    """
    logger.info(
        f"Classify request: max_degree={body.max_degree}, lp_degree={body.max_lambda_p_degree}, "
        f"conserve_momentum={body.require_total_momentum_conservation}"
    )
    return service.classify(body)


@app.post("/simulate", response_model=Report, tags=["Dynamics"])
def simulate(body: SimulationConfig) -> Report:
    """Run the hybrid split-step simulation and return its drift summary."""
    _, report = service.simulate(body)
    return report


# Run the application
if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host="0.0.0.0",
        port=settings.PORT,
        reload=settings.ENVIRONMENT == "development",
        log_level="info"
    )
