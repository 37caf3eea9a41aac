from typing import List, Literal, Optional, Tuple, get_args

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from app.core.config import settings

# ===== CLASSIFICATION =====

BUILDING_BLOCK_SYMBOLS: Tuple[str, ...] = ("r", "k", "q", "p", "lq", "lp")
DEFAULT_BUILDING_BLOCKS: Tuple[str, ...] = ("r", "k", "q", "p", "lp")


class ClassificationConfig(BaseModel):
    """Search space and filters for the invariant interaction classification"""
    model_config = ConfigDict(frozen=True)

    max_degree: int = Field(default=2, ge=0, description="Maximum total degree of candidate monomials")
    max_lambda_p_degree: int = Field(default=1, ge=0, description="Maximum combined degree in lp[i]")
    include_lambda_q: bool = Field(default=False, description="Explicit opt-in for lq[i] building blocks")
    building_blocks: Tuple[str, ...] = Field(
        default=DEFAULT_BUILDING_BLOCKS,
        validate_default=True,
        description="Generator symbols monomials are built from"
    )
    require_hermitian: bool = Field(default=True, description="Present symmetrized Hermitian representatives")
    require_total_momentum_conservation: bool = Field(
        default=False,
        description="Keep only interactions commuting with k + p"
    )
    quantum_mass: int = Field(
        default_factory=lambda: settings.CLASSIFY_QUANTUM_MASS,
        ge=1,
        description="Numeric M of the constraint system"
    )
    classical_mass: int = Field(
        default_factory=lambda: settings.CLASSIFY_CLASSICAL_MASS,
        ge=1,
        description="Numeric m of the constraint system"
    )

    @field_validator("max_degree")
    @classmethod
    def degree_within_limit(cls, value: int) -> int:
        if value > settings.CLASSIFY_MAX_DEGREE_LIMIT:
            raise ValueError(
                f"max_degree {value} exceeds the configured limit {settings.CLASSIFY_MAX_DEGREE_LIMIT}"
            )
        return value

    @field_validator("building_blocks")
    @classmethod
    def known_symbols(cls, value: Tuple[str, ...], info: ValidationInfo) -> Tuple[str, ...]:
        unknown = [symbol for symbol in value if symbol not in BUILDING_BLOCK_SYMBOLS]
        if unknown:
            raise ValueError(f"unknown building blocks {unknown}")
        include_lambda_q = info.data.get("include_lambda_q", False)
        if "lq" in value and not include_lambda_q:
            raise ValueError("lq is only allowed with include_lambda_q")
        return tuple(
            symbol for symbol in BUILDING_BLOCK_SYMBOLS
            if symbol in value or (symbol == "lq" and include_lambda_q)
        )

    @model_validator(mode="after")
    def generic_masses(self) -> "ClassificationConfig":
        if self.quantum_mass == self.classical_mass:
            raise ValueError("quantum and classical masses must differ to keep the system generic")
        return self


# ===== SIMULATION =====

class AxisGrid(BaseModel):
    """Periodic grid along one axis: points at -L + j*2L/N"""
    model_config = ConfigDict(frozen=True)

    points: int = Field(..., ge=2, description="Number of grid points (power of two)")
    half_width: float = Field(..., gt=0, description="Domain half-width L")

    @field_validator("points")
    @classmethod
    def power_of_two(cls, value: int) -> int:
        if value & (value - 1):
            raise ValueError(f"grid points must be a power of two, got {value}")
        return value

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / self.points


class GridSpec(BaseModel):
    """Grid over (x, q, p) with the time stepping"""
    model_config = ConfigDict(frozen=True)

    x: AxisGrid = Field(..., description="Quantum position axis")
    q: AxisGrid = Field(..., description="Classical position axis")
    p: AxisGrid = Field(..., description="Classical momentum axis")
    dt: float = Field(..., gt=0, description="Time step")
    steps: int = Field(default=0, ge=0, description="Total number of steps")

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.x.points, self.q.points, self.p.points)

    @property
    def cell_volume(self) -> float:
        return self.x.spacing * self.q.spacing * self.p.spacing


class HamiltonianSpec(BaseModel):
    """H_T = k^2/2M + p*lq/m + g1 (x-q)^2 + g2 (k/M - p/m)^2 + g3 (x-q) lp"""
    model_config = ConfigDict(frozen=True)

    quantum_mass: float = Field(default=1.0, gt=0, description="Quantum mass M")
    classical_mass: float = Field(default=1.0, gt=0, description="Classical mass m")
    g1: float = Field(default=0.0, description="Coupling of (x - q)^2")
    g2: float = Field(default=0.0, description="Coupling of (k/M - p/m)^2")
    g3: float = Field(default=0.0, description="Coupling of (x - q) lp")

    @property
    def interaction_terms(self) -> List[str]:
        return [name for name in ("g1", "g2", "g3") if getattr(self, name)]


class InitialPacket(BaseModel):
    """Product Gaussian phi(x) chi(q, p) with mean quantum momentum k0"""
    model_config = ConfigDict(frozen=True)

    x0: float = Field(default=0.0, description="Quantum packet center")
    q0: float = Field(default=0.0, description="Classical position center")
    p0: float = Field(default=0.0, description="Classical momentum center")
    sigma_x: float = Field(default=1.0, gt=0, description="Width of |phi|^2 in x")
    sigma_q: float = Field(default=1.0, gt=0, description="Width of |chi|^2 in q")
    sigma_p: float = Field(default=1.0, gt=0, description="Width of |chi|^2 in p")
    k0: float = Field(default=0.0, description="Mean quantum momentum")


class SimulationConfig(BaseModel):
    """Simulation document accepted by the simulate command"""
    model_config = ConfigDict(frozen=True)

    grid: GridSpec = Field(..., description="Grid and time stepping")
    hamiltonian: HamiltonianSpec = Field(default_factory=HamiltonianSpec, description="Masses and couplings")
    packet: InitialPacket = Field(default_factory=InitialPacket, description="Initial product Gaussian")
    record_every: int = Field(default=1, ge=1, description="Record observables every N steps")
    check_tail_mass: bool = Field(default=True, description="Log the tail-mass diagnostic at each record")


# ===== HTTP REQUESTS =====

RepresentationName = Literal["quantum", "classical", "hybrid", "two-quantum", "two-classical"]
REPRESENTATION_NAMES: Tuple[str, ...] = get_args(RepresentationName)


class CommuteRequest(BaseModel):
    """Two operator expressions to bracket"""
    left: str = Field(..., description="First operator expression")
    right: str = Field(..., description="Second operator expression")


class NormalFormRequest(BaseModel):
    """One operator expression to normal-order"""
    expression: str = Field(..., description="Operator expression")


class VerifyRequest(BaseModel):
    """Representation to verify against the Galilei brackets"""
    rep: RepresentationName = Field(default="hybrid", description="Representation to build")
    interaction: Optional[str] = Field(None, description="Interaction term or two-particle potential")


class LiouvillianRequest(BaseModel):
    """Classical Hamiltonian polynomial in q and p"""
    hamiltonian: str = Field(..., description="Hamiltonian expression")
