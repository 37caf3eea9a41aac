from fractions import Fraction

import pytest

from app.core.exceptions import (
    InvalidParameterError,
    NonHermitianOperatorError,
    PhaseSpaceConversionError,
)
from app.services.expressions import parse_expression
from app.services.galilei import (
    RELATION_FAMILIES,
    PhaseSpacePoly,
    apply_to_phase_space,
    build_classical_rep,
    build_hybrid_rep,
    build_quantum_rep,
    coerce_mass,
    liouvillian_from_hamiltonian,
    poisson_bracket,
    two_particle_classical_check,
    two_particle_liouvillian,
    two_particle_quantum_check,
    verify_algebra,
)
from app.services.opalgebra import I, OperatorExpr, ParamScalar, gen
from app.services.opalgebra.vectors import LQ, P, dot

BASE_RELATIONS = 45
INTERACTION_RELATIONS = 9


def entry(report, label):
    return next(item for item in report.entries if item.label == label)


# ===== SINGLE-PARTICLE REPRESENTATIONS =====


@pytest.mark.parametrize("builder", [build_quantum_rep, build_classical_rep, build_hybrid_rep])
def test_free_representations_close(builder):
    report = verify_algebra(builder())
    assert report.all_passed, [check.label for check in report.failures()]
    assert len(report.entries) == BASE_RELATIONS
    assert list(report.family_summary()) == list(RELATION_FAMILIES)


def test_family_tallies_cover_every_component():
    summary = verify_algebra(build_quantum_rep()).family_summary()
    assert summary["[T,G]"] == (9, 9)
    assert summary["[J,J]"] == (3, 3)
    assert summary["[G,H]"] == (3, 3)


def test_quantum_central_charge_is_mass():
    report = verify_algebra(build_quantum_rep())
    M = ParamScalar.parameter("M")
    assert report.central_charge == M
    assert entry(report, "[T1,G1]").lhs == OperatorExpr.scalar(-I * M)
    assert entry(report, "[T1,G2]").lhs.is_zero


def test_classical_central_charge_vanishes():
    report = verify_algebra(build_classical_rep())
    assert not report.central_charge
    tg = entry(report, "[T2,G2]")
    assert tg.lhs.is_zero
    assert tg.note == "central charge 0"


def test_hybrid_central_charge_is_quantum_mass():
    report = verify_algebra(build_hybrid_rep())
    assert entry(report, "[T1,G1]").lhs == OperatorExpr.scalar(-I * ParamScalar.parameter("M"))
    assert entry(report, "[T1,G1]").note == ""


def test_numeric_masses():
    report = verify_algebra(build_hybrid_rep(quantum_mass=3, classical_mass=5))
    assert report.all_passed
    assert report.central_charge == 3


def test_representation_generators_are_hermitian():
    for builder in (build_quantum_rep, build_classical_rep, build_hybrid_rep):
        assert builder().hermiticity_violations() == []


def test_substituted_representation_still_closes():
    rep = build_hybrid_rep().substitute_params({"M": 2, "m": 7})
    assert rep.mass("quantum") == 2
    assert verify_algebra(rep).all_passed


# ===== HYBRID INTERACTIONS =====


def test_invariant_interaction_passes_extra_relations():
    w_squared = parse_expression("dot(K/M - P/m, K/M - P/m)")
    report = verify_algebra(build_hybrid_rep(interaction=w_squared))
    assert report.all_passed
    assert len(report.entries) == BASE_RELATIONS + INTERACTION_RELATIONS
    assert report.family_passed("[G,Hint]")


def test_position_coupling_breaks_translations():
    report = verify_algebra(build_hybrid_rep(interaction=parse_expression("r[1]")))
    assert not report.all_passed
    assert not report.family_passed("[T,Hint]")
    assert "[T1,Hint]" in [check.label for check in report.failures()]


def test_quantum_kinetic_coupling_breaks_boosts():
    interaction = parse_expression("dot(K, K)")
    report = verify_algebra(build_hybrid_rep(interaction=interaction))
    assert report.family_passed("[T,Hint]")
    assert report.family_passed("[J,Hint]")
    assert not report.family_passed("[G,Hint]")


def test_non_hermitian_interaction_rejected():
    with pytest.raises(NonHermitianOperatorError):
        build_hybrid_rep(interaction=parse_expression("I*r[1]"))


@pytest.mark.parametrize("mass", [0, -1, Fraction(-1, 2)])
def test_invalid_masses(mass):
    with pytest.raises(InvalidParameterError):
        build_quantum_rep(mass)


def test_relative_position_is_boost_invariant():
    report = verify_algebra(build_hybrid_rep(interaction=parse_expression("dot(R - Q, R - Q)")))
    assert report.all_passed


def test_symbolic_mass_accepted():
    assert coerce_mass("m") == ParamScalar.parameter("m")


# ===== PHASE SPACE =====


def test_poisson_bracket_of_canonical_pair():
    assert poisson_bracket(PhaseSpacePoly.q(1), PhaseSpacePoly.p(1)) == 1
    assert poisson_bracket(PhaseSpacePoly.p(1), PhaseSpacePoly.q(1)) == -1
    assert not poisson_bracket(PhaseSpacePoly.q(1), PhaseSpacePoly.p(2))


def test_free_liouvillian():
    m = ParamScalar.parameter("m")
    hamiltonian = PhaseSpacePoly()
    for axis in (1, 2, 3):
        hamiltonian = hamiltonian + PhaseSpacePoly.p(axis) ** 2 / (2 * m)
    assert liouvillian_from_hamiltonian(hamiltonian) == dot(P(), LQ()) / m
    assert liouvillian_from_hamiltonian(hamiltonian) == build_classical_rep().hamiltonian


def test_liouvillian_is_hermitian():
    hamiltonian = PhaseSpacePoly.from_operator(parse_expression("dot(P,P)/(2*m) + q[1]^2*q[2] + q[3]*p[3]"))
    assert liouvillian_from_hamiltonian(hamiltonian).is_hermitian()


def test_liouvillian_acts_as_poisson_bracket():
    # L_H f = −i{f, H}
    hamiltonian = PhaseSpacePoly.from_operator(parse_expression("p[1]^2/2 + q[1]^4 + q[1]*q[2]"))
    f = PhaseSpacePoly.from_operator(parse_expression("q[1]*p[1] + p[2]^2"))
    liouvillian = liouvillian_from_hamiltonian(hamiltonian)
    expected = poisson_bracket(f, hamiltonian) * ParamScalar.gaussian(0, -1)
    assert apply_to_phase_space(liouvillian, f) == expected


def test_phase_space_conversion_rejects_lambda_and_quantum():
    with pytest.raises(PhaseSpaceConversionError):
        PhaseSpacePoly.from_operator(parse_expression("lq[1]"))
    with pytest.raises(PhaseSpaceConversionError):
        PhaseSpacePoly.from_operator(parse_expression("r[1]*q[1]"))
    with pytest.raises(PhaseSpaceConversionError):
        apply_to_phase_space(OperatorExpr.generator(gen("k", 1)), PhaseSpacePoly.q(1))


# ===== TWO-PARTICLE CHECKS =====


def test_two_classical_harmonic_coupling():
    potential = PhaseSpacePoly.from_operator(parse_expression("dot(Q-Q2,Q-Q2)/2"))
    report = two_particle_classical_check(potential)
    assert report.all_passed, [check.label for check in report.failures()]
    assert len(report.conservation) == 3

    expected = parse_expression("dot(P,LQ)/m1 + dot(P2,LQ2)/m2 - dot(Q-Q2,LP) + dot(Q-Q2,LP2)")
    assert two_particle_liouvillian(potential) == expected


def test_two_classical_external_potential_breaks_translations():
    report = two_particle_classical_check(PhaseSpacePoly.from_operator(parse_expression("q[1]^2")))
    assert not report.all_passed
    assert not report.family_passed("momentum")


def test_two_quantum_relative_potential():
    report = two_particle_quantum_check(parse_expression("dot(R-R2,R-R2)"))
    assert report.all_passed
    assert report.central_charge == ParamScalar.parameter("M1") + ParamScalar.parameter("M2")


def test_two_quantum_absolute_potential_fails():
    report = two_particle_quantum_check(parse_expression("dot(R,R)"))
    assert not report.all_passed
    assert not report.family_passed("momentum")
