"""
Bracket-by-bracket verification of the Galilei algebra.

For a Representation with central charge C the checked relations are

    [Tᵢ, Tⱼ] = [Gᵢ, Gⱼ] = [Jᵢ, H] = [Tᵢ, H] = 0
    [Jᵢ, Jⱼ] = iεᵢⱼₖ Jₖ    [Jᵢ, Tⱼ] = iεᵢⱼₖ Tₖ    [Jᵢ, Gⱼ] = iεᵢⱼₖ Gₖ
    [Tᵢ, Gⱼ] = −iδᵢⱼ C      [Gᵢ, H] = i Tᵢ

with every sign fixed by [rᵢ, kⱼ] = iδᵢⱼ and G = M r − t k. Parameters,
including t, stay symbolic, so a pass holds for all parameter values.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.services.galilei.phase_space import PhaseSpacePoly, liouvillian_from_hamiltonian
from app.services.galilei.representations import (
    MassLike,
    Representation,
    build_two_classical_rep,
    build_two_quantum_rep,
    two_particle_hamiltonian,
)
from app.services.opalgebra.generators import AXES, Sector
from app.services.opalgebra.operator_expr import OperatorExpr, add, commutator, linear_combination
from app.services.opalgebra.param_scalar import I, ParamScalar
from app.services.opalgebra.vectors import P, levi_civita

logger = logging.getLogger(__name__)

RELATION_FAMILIES: Tuple[str, ...] = (
    "[T,T]",
    "[G,G]",
    "[J,H]",
    "[T,H]",
    "[J,J]",
    "[J,T]",
    "[J,G]",
    "[T,G]",
    "[G,H]",
)
INTERACTION_FAMILIES: Tuple[str, ...] = ("[T,Hint]", "[G,Hint]", "[J,Hint]")

CENTRAL_CHARGE_ZERO_NOTE = "central charge 0"


@dataclass(frozen=True)
class RelationCheck:
    family: str
    label: str
    lhs: OperatorExpr
    expected: OperatorExpr
    residual: OperatorExpr
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.residual.is_zero


@dataclass
class AlgebraReport:
    representation: str
    central_charge: ParamScalar
    entries: List[RelationCheck] = field(default_factory=list)
    conservation: List[RelationCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(entry.passed for entry in self.entries + self.conservation)

    def failures(self) -> List[RelationCheck]:
        return [entry for entry in self.entries + self.conservation if not entry.passed]

    def family_summary(self) -> Dict[str, Tuple[int, int]]:
        """family → (passed, total), in verification order."""
        summary: Dict[str, List[int]] = OrderedDict()
        for entry in self.entries + self.conservation:
            counts = summary.setdefault(entry.family, [0, 0])
            counts[0] += int(entry.passed)
            counts[1] += 1
        return {family: (passed, total) for family, (passed, total) in summary.items()}

    def family_passed(self, family: str) -> bool:
        return all(entry.passed for entry in self.entries + self.conservation if entry.family == family)


def _check(family: str, label: str, lhs: OperatorExpr, expected: OperatorExpr, note: str = "") -> RelationCheck:
    return RelationCheck(
        family=family,
        label=label,
        lhs=lhs,
        expected=expected,
        residual=add(lhs, -expected),
        note=note,
    )


def _epsilon_combination(i: int, j: int, vec) -> OperatorExpr:
    return linear_combination(
        (levi_civita(i, j, k) * I, vec[k - 1]) for k in AXES if levi_civita(i, j, k)
    )


def verify_algebra(rep: Representation) -> AlgebraReport:
    """Evaluate every Galilei bracket of a representation and report residuals.

    Expects [Tᵢ, Gⱼ] = −iδᵢⱼC, the sign fixed by [r, k] = i and G = Mr − tk.
    """
    T, J, G, H = rep.translations, rep.rotations, rep.boosts, rep.hamiltonian
    C = rep.central_charge
    zero = OperatorExpr.zero()
    charge_note = CENTRAL_CHARGE_ZERO_NOTE if not C else ""
    entries: List[RelationCheck] = []

    logger.info(f"Verifying Galilei algebra for '{rep.name}' representation")

    for family, left, right, sym in (("[T,T]", T, T, "T"), ("[G,G]", G, G, "G")):
        for i in AXES:
            for j in AXES:
                if i < j:
                    label = f"[{sym}{i},{sym}{j}]"
                    entries.append(_check(family, label, commutator(left[i - 1], right[j - 1]), zero))

    for family, vec, sym in (("[J,H]", J, "J"), ("[T,H]", T, "T")):
        for i in AXES:
            entries.append(_check(family, f"[{sym}{i},H]", commutator(vec[i - 1], H), zero))

    for i in AXES:
        for j in AXES:
            if i < j:
                entries.append(
                    _check("[J,J]", f"[J{i},J{j}]", commutator(J[i - 1], J[j - 1]), _epsilon_combination(i, j, J))
                )

    for family, vec, sym in (("[J,T]", T, "T"), ("[J,G]", G, "G")):
        for i in AXES:
            for j in AXES:
                entries.append(
                    _check(family, f"[J{i},{sym}{j}]", commutator(J[i - 1], vec[j - 1]), _epsilon_combination(i, j, vec))
                )

    for i in AXES:
        for j in AXES:
            expected = OperatorExpr.scalar(-I * C) if i == j else zero
            entries.append(
                _check("[T,G]", f"[T{i},G{j}]", commutator(T[i - 1], G[j - 1]), expected, note=charge_note)
            )

    for i in AXES:
        entries.append(_check("[G,H]", f"[G{i},H]", commutator(G[i - 1], H), T[i - 1].scale(I)))

    if rep.interaction:
        for family, vec, sym in zip(INTERACTION_FAMILIES, (T, G, J), ("T", "G", "J")):
            for i in AXES:
                entries.append(
                    _check(family, f"[{sym}{i},Hint]", commutator(vec[i - 1], rep.interaction), zero)
                )

    report = AlgebraReport(representation=rep.name, central_charge=C, entries=entries)
    passed = sum(entry.passed for entry in entries)
    logger.info(f"'{rep.name}': {passed}/{len(entries)} relations hold")
    return report


def two_particle_quantum_check(
    potential: Optional[OperatorExpr] = None,
    masses: Tuple[MassLike, MassLike] = ("M1", "M2"),
) -> AlgebraReport:
    """Verify the algebra of two quantum particles with Ĥ_Q = k₁²/2M₁ + k₂²/2M₂ + V.

    Raises:
        NonHermitianOperatorError: V is not Hermitian
    """
    rep = build_two_quantum_rep(potential, masses)
    report = verify_algebra(rep)
    report.conservation = [
        _check("momentum", f"[k[{i}]+k2[{i}],H]", commutator(rep.translations[i - 1], rep.hamiltonian), OperatorExpr.zero())
        for i in AXES
    ]
    return report


def two_particle_classical_check(
    potential: Optional[PhaseSpacePoly] = None,
    masses: Tuple[MassLike, MassLike] = ("m1", "m2"),
) -> AlgebraReport:
    """Verify two KvN particles under H_c = p₁²/2m₁ + p₂²/2m₂ + V(q₁, q₂).

    Also records [p₁ᵢ + p₂ᵢ, Ĥ_cl] = 0, the statement that V depending only on
    q₁ − q₂ conserves the total classical momentum.
    """
    rep = build_two_classical_rep(potential, masses)
    report = verify_algebra(rep)
    total_p = [add(a, b) for a, b in zip(P(Sector.CLASSICAL), P(Sector.CLASSICAL_2))]
    report.conservation = [
        _check("momentum", f"[p[{i}]+p2[{i}],H]", commutator(total_p[i - 1], rep.hamiltonian), OperatorExpr.zero())
        for i in AXES
    ]
    return report


def two_particle_liouvillian(
    potential: Optional[PhaseSpacePoly] = None,
    masses: Tuple[MassLike, MassLike] = ("m1", "m2"),
) -> OperatorExpr:
    return liouvillian_from_hamiltonian(two_particle_hamiltonian(potential, masses))
