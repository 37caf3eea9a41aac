from app.services.classify.invariant_classifier import (
    AccelerationResult,
    CandidateScalar,
    ConservationFlags,
    ConstraintSystem,
    InvariantBasis,
    InvariantElement,
    MomentumFilterCheck,
    ScalarReport,
    acceleration_operator,
    candidate_scalars,
    conservation_flags,
    constraint_matrix,
    element_flags,
    invariance_residuals,
    momentum_conserving_subspace,
    monomial_basis,
    solve_invariant_space,
)

__all__ = [
    "AccelerationResult",
    "CandidateScalar",
    "ConservationFlags",
    "ConstraintSystem",
    "InvariantBasis",
    "InvariantElement",
    "MomentumFilterCheck",
    "ScalarReport",
    "acceleration_operator",
    "candidate_scalars",
    "conservation_flags",
    "constraint_matrix",
    "element_flags",
    "invariance_residuals",
    "momentum_conserving_subspace",
    "monomial_basis",
    "solve_invariant_space",
]
