from app.services.galilei.algebra_verifier import (
    RELATION_FAMILIES,
    AlgebraReport,
    RelationCheck,
    two_particle_classical_check,
    two_particle_liouvillian,
    two_particle_quantum_check,
    verify_algebra,
)
from app.services.galilei.phase_space import (
    PhaseSpacePoly,
    apply_to_phase_space,
    liouvillian_from_hamiltonian,
    poisson_bracket,
)
from app.services.galilei.representations import (
    Representation,
    build_classical_rep,
    build_hybrid_rep,
    build_quantum_rep,
    build_two_classical_rep,
    build_two_quantum_rep,
    coerce_mass,
    total_momentum,
)

__all__ = [
    "RELATION_FAMILIES",
    "AlgebraReport",
    "RelationCheck",
    "two_particle_classical_check",
    "two_particle_liouvillian",
    "two_particle_quantum_check",
    "verify_algebra",
    "PhaseSpacePoly",
    "apply_to_phase_space",
    "liouvillian_from_hamiltonian",
    "poisson_bracket",
    "Representation",
    "build_classical_rep",
    "build_hybrid_rep",
    "build_quantum_rep",
    "build_two_classical_rep",
    "build_two_quantum_rep",
    "coerce_mass",
    "total_momentum",
]
