from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

# ===== SHARED =====


class ExpressionOut(BaseModel):
    """Operator in normal form, printed both ways"""
    dsl: str = Field(..., description="ASCII form; re-parses to the same operator")
    unicode: str = Field(..., description="Pretty-printed form")
    hermitian: bool = Field(..., description="Adjoint-fixed")
    degree: int = Field(..., description="Total degree in the generators")


# ===== VERIFY =====


class RelationRow(BaseModel):
    """One bracket of the algebra"""
    family: str = Field(..., description="Bracket family, e.g. [T,G]")
    label: str = Field(..., description="Component label, e.g. [T1,G1]")
    expected: str = Field(..., description="Expected right-hand side")
    residual: str = Field(..., description="Computed minus expected")
    passed: bool = Field(..., description="Residual is identically zero")
    note: str = Field(default="", description="Annotation such as 'central charge 0'")


class FamilyRow(BaseModel):
    """Pass/fail tally for one bracket family"""
    family: str
    passed: int
    total: int
    ok: bool


class VerifyResults(BaseModel):
    representation: str = Field(..., description="Representation name")
    central_charge: str = Field(..., description="Scalar in [T_i, G_i]")
    all_passed: bool = Field(..., description="Every relation holds")
    families: List[FamilyRow] = Field(default_factory=list, description="Per-family tallies")
    relations: List[RelationRow] = Field(default_factory=list, description="Every checked relation")


# ===== CLASSIFY =====


class FlagsOut(BaseModel):
    conserves_momentum: bool = Field(..., description="Commutes with k + p")
    commutes_with_q: bool = Field(..., description="Commutes with every q[i]")
    commutes_with_p: bool = Field(..., description="Commutes with every p[i]")
    back_reaction: bool = Field(..., description="Acts on the classical observables")


class InvariantRow(BaseModel):
    """One element of the reduced invariant basis"""
    label: str
    unicode_label: str
    operator: ExpressionOut
    symbolic: bool = Field(..., description="Matched to a named scalar with symbolic masses")
    verified: bool = Field(..., description="Commutes with T, G and J with symbolic masses and t")
    flags: Optional[FlagsOut] = None


class ScalarRow(BaseModel):
    """A named scalar building block and its individual flags"""
    label: str
    unicode_label: str
    operator: ExpressionOut
    flags: FlagsOut
    acceleration_observable: Optional[bool] = Field(
        None, description="Acceleration free of λ operators; null when the scalar is not Hermitian"
    )


class MomentumCheckOut(BaseModel):
    constraint_rows_dimension: int
    restricted_kernel_dimension: int
    consistent: bool


class ClassifyResults(BaseModel):
    dimension: int = Field(..., description="Dimension of the solved invariant space")
    numeric_dimension: int = Field(..., description="Kernel dimension at the generic numeric masses")
    monomial_count: int = Field(..., description="Size of the candidate monomial basis")
    matched: bool = Field(..., description="Every kernel direction matched a named scalar")
    verified: bool = Field(..., description="Every element verified symbolically")
    elements: List[InvariantRow] = Field(default_factory=list)
    scalars: List[ScalarRow] = Field(default_factory=list)
    momentum_check: Optional[MomentumCheckOut] = None


# ===== SIMULATE =====


class SimulationResults(BaseModel):
    records: int = Field(..., description="Number of recorded rows")
    columns: List[str] = Field(..., description="CSV header")
    final_time: float
    norm_drift: float
    ktot_drift: float
    p_drift: float
    energy_drift: float = Field(..., description="Drift of the total energy expectation")
    max_tail_mass: float
    output: Optional[str] = Field(None, description="CSV path, when written to disk")


# ===== REPORT =====


class Report(BaseModel):
    """Machine-readable outcome of one command"""
    command: str = Field(..., description="Command that produced the report")
    inputs: Dict[str, Any] = Field(default_factory=dict, description="Echo of the inputs")
    passed: bool = Field(default=True, description="Overall pass/fail")
    results: Union[ExpressionOut, VerifyResults, ClassifyResults, SimulationResults] = Field(
        ..., description="Command-specific results"
    )

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
