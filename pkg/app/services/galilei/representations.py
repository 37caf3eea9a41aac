"""
Unitary representations of the Galilei algebra on operator polynomials.

Builders for the quantum particle (translations k, rotations r×k, boosts
M r − t k, Hamiltonian k²/2M), the KvN classical particle (translations λ_q,
boosts −t λ_q − m λ_p, Liouvillian p·λ_q/m) and their hybrid sum, plus the
two-particle variants used to check interaction potentials.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from app.core.exceptions import InvalidParameterError, NonHermitianOperatorError
from app.services.galilei.phase_space import PhaseSpacePoly, liouvillian_from_hamiltonian
from app.services.opalgebra.generators import AXES, Sector
from app.services.opalgebra.operator_expr import OperatorExpr, add, substitute_params
from app.services.opalgebra.param_scalar import ParamScalar, RationalLike
from app.services.opalgebra.vectors import (
    LP,
    LQ,
    K,
    P,
    Q,
    R,
    Vector,
    cross,
    dot,
    vadd,
    vscale,
    vsub,
    zero_vector,
)

logger = logging.getLogger(__name__)

MassLike = Union[ParamScalar, str, int, Fraction]

ROLE_LABELS = ("T", "J", "G")


@dataclass(frozen=True)
class Representation:
    """Assignment of the Galilei generator roles to operators."""

    name: str
    translations: Vector
    rotations: Vector
    boosts: Vector
    hamiltonian: OperatorExpr
    central_charge: ParamScalar
    masses: Tuple[Tuple[str, ParamScalar], ...] = ()
    interaction: OperatorExpr = field(default_factory=OperatorExpr.zero)

    def mass(self, role: str) -> ParamScalar:
        for name, value in self.masses:
            if name == role:
                return value
        raise KeyError(f"representation '{self.name}' has no {role} mass")

    def components(self) -> List[Tuple[str, OperatorExpr]]:
        labelled = []
        for label, vec in zip(ROLE_LABELS, (self.translations, self.rotations, self.boosts)):
            labelled.extend((f"{label}{axis}", op) for axis, op in zip(AXES, vec))
        labelled.append(("H", self.hamiltonian))
        return labelled

    def hermiticity_violations(self) -> List[str]:
        return [label for label, op in self.components() if not op.is_hermitian()]

    def substitute_params(self, bindings: Mapping[str, RationalLike]) -> "Representation":
        sub = lambda vec: tuple(substitute_params(op, bindings) for op in vec)  # noqa: E731
        return replace(
            self,
            translations=sub(self.translations),
            rotations=sub(self.rotations),
            boosts=sub(self.boosts),
            hamiltonian=substitute_params(self.hamiltonian, bindings),
            central_charge=self.central_charge.substitute(bindings),
            masses=tuple((name, value.substitute(bindings)) for name, value in self.masses),
            interaction=substitute_params(self.interaction, bindings),
        )

    def has_numeric_coefficients(self) -> bool:
        return all(op.has_numeric_coefficients() for _, op in self.components())


def coerce_mass(value: MassLike, role: str = "mass") -> ParamScalar:
    """Masses are nonzero parameter expressions or positive rationals."""
    mass = ParamScalar.coerce(value)
    if not mass:
        raise InvalidParameterError(f"{role} must be nonzero", field=role, value=value)
    if mass.is_constant:
        gaussian = mass.to_gaussian()
        if gaussian.y or gaussian.x <= 0:
            raise InvalidParameterError(f"{role} must be a positive rational", field=role, value=mass.to_dsl())
    return mass


def _time() -> ParamScalar:
    return ParamScalar.parameter("t")


def build_quantum_rep(mass: MassLike = "M", sector: Sector = Sector.QUANTUM) -> Representation:
    """Free quantum particle: T = k, J = r×k, G = M r − t k, H = k²/2M, central charge M."""
    M = coerce_mass(mass, "quantum mass")
    r, k = R(sector), K(sector)
    return Representation(
        name="quantum",
        translations=k,
        rotations=cross(r, k),
        boosts=vsub(vscale(r, M), vscale(k, _time())),
        hamiltonian=dot(k, k) / (2 * M),
        central_charge=M,
        masses=(("quantum", M),),
    )


def build_classical_rep(mass: MassLike = "m", sector: Sector = Sector.CLASSICAL) -> Representation:
    """KvN particle: T = λ_q, J = q×λ_q + p×λ_p, G = −t λ_q − m λ_p, H = p·λ_q/m, central charge 0."""
    m = coerce_mass(mass, "classical mass")
    q, p, lq, lp = Q(sector), P(sector), LQ(sector), LP(sector)
    return Representation(
        name="classical",
        translations=lq,
        rotations=vadd(cross(q, lq), cross(p, lp)),
        boosts=vsub(vscale(lq, -_time()), vscale(lp, m)),
        hamiltonian=dot(p, lq) / m,
        central_charge=ParamScalar(0),
        masses=(("classical", m),),
    )


def combine(
    name: str,
    parts: Sequence[Representation],
    central_charge: ParamScalar,
    interaction: Optional[OperatorExpr] = None,
) -> Representation:
    """Component-wise sum of independent representations plus an interaction."""
    interaction = interaction if interaction is not None else OperatorExpr.zero()
    if interaction and not interaction.is_hermitian():
        raise NonHermitianOperatorError(
            "Interaction term must be Hermitian",
            operator=interaction.to_dsl(),
        )
    translations = rotations = boosts = zero_vector()
    hamiltonian = interaction
    masses: Dict[str, ParamScalar] = {}
    for part in parts:
        translations = vadd(translations, part.translations)
        rotations = vadd(rotations, part.rotations)
        boosts = vadd(boosts, part.boosts)
        hamiltonian = add(hamiltonian, part.hamiltonian)
        masses.update(dict(part.masses))
    return Representation(
        name=name,
        translations=translations,
        rotations=rotations,
        boosts=boosts,
        hamiltonian=hamiltonian,
        central_charge=central_charge,
        masses=tuple(masses.items()),
        interaction=interaction,
    )


def build_hybrid_rep(
    quantum_mass: MassLike = "M",
    classical_mass: MassLike = "m",
    interaction: Optional[OperatorExpr] = None,
) -> Representation:
    """Quantum ⊗ classical sum with Ĥ_T = Ĥ_Q + Ĥ_cl + Ĥ_int; the central charge is the quantum mass.

    Raises:
        InvalidParameterError: zero or nonpositive mass
        NonHermitianOperatorError: interaction is not adjoint-fixed
    """
    quantum = build_quantum_rep(quantum_mass)
    classical = build_classical_rep(classical_mass)
    return combine("hybrid", [quantum, classical], quantum.central_charge, interaction)


def build_two_quantum_rep(
    potential: Optional[OperatorExpr] = None,
    masses: Tuple[MassLike, MassLike] = ("M1", "M2"),
) -> Representation:
    first = build_quantum_rep(masses[0], Sector.QUANTUM)
    second = build_quantum_rep(masses[1], Sector.QUANTUM_2)
    rep = combine(
        "two-quantum",
        [first, second],
        first.central_charge + second.central_charge,
        potential,
    )
    return replace(rep, masses=(("quantum", first.central_charge), ("quantum-2", second.central_charge)))


def two_particle_hamiltonian(
    potential: Optional[PhaseSpacePoly] = None,
    masses: Tuple[MassLike, MassLike] = ("m1", "m2"),
) -> PhaseSpacePoly:
    """H_c = p₁²/2m₁ + p₂²/2m₂ + V."""
    m1 = coerce_mass(masses[0], "classical mass 1")
    m2 = coerce_mass(masses[1], "classical mass 2")
    kinetic = PhaseSpacePoly()
    for axis in AXES:
        kinetic = kinetic + PhaseSpacePoly.p(axis, Sector.CLASSICAL) ** 2 / (2 * m1)
        kinetic = kinetic + PhaseSpacePoly.p(axis, Sector.CLASSICAL_2) ** 2 / (2 * m2)
    return kinetic + (potential if potential is not None else PhaseSpacePoly())


def build_two_classical_rep(
    potential: Optional[PhaseSpacePoly] = None,
    masses: Tuple[MassLike, MassLike] = ("m1", "m2"),
) -> Representation:
    """Two KvN particles whose Liouvillian is generated by p₁²/2m₁ + p₂²/2m₂ + V."""
    first = build_classical_rep(masses[0], Sector.CLASSICAL)
    second = build_classical_rep(masses[1], Sector.CLASSICAL_2)
    hamiltonian = two_particle_hamiltonian(potential, masses)
    liouvillian = liouvillian_from_hamiltonian(hamiltonian)
    free = add(first.hamiltonian, second.hamiltonian)
    rep = combine("two-classical", [first, second], ParamScalar(0), add(liouvillian, -free))
    return replace(rep, masses=(("classical", first.mass("classical")), ("classical-2", second.mass("classical"))))


def total_momentum() -> Vector:
    """k + p, the total linear momentum of the hybrid system."""
    return vadd(K(Sector.QUANTUM), P(Sector.CLASSICAL))
