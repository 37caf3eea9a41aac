from fractions import Fraction

import pytest

from app.core.exceptions import InvalidParameterError, ParameterPoleError
from app.services.expressions import parse_expression
from app.services.opalgebra import (
    I,
    CommutationTable,
    OperatorExpr,
    ParamScalar,
    Sector,
    adjoint,
    commutator,
    gen,
    mul,
    normal_form,
    rational,
)
from app.services.opalgebra.vectors import K, R, cross, dot, levi_civita, symmetrized_dot

PROPERTY_SAMPLES = 200


def op(symbol: str, axis: int) -> OperatorExpr:
    return OperatorExpr.generator(gen(symbol, axis))


# ===== CANONICAL BRACKETS =====


@pytest.mark.parametrize(
    "left, right",
    [("r", "k"), ("q", "lq"), ("p", "lp"), ("r2", "k2"), ("q2", "lq2"), ("p2", "lp2")],
)
def test_canonical_pairs_bracket_to_i(left, right):
    for axis in (1, 2, 3):
        assert commutator(op(left, axis), op(right, axis)) == I
        assert commutator(op(right, axis), op(left, axis)) == -I


@pytest.mark.parametrize(
    "left, right",
    [("r", "k"), ("q", "lq"), ("p", "lp")],
)
def test_different_axes_commute(left, right):
    assert commutator(op(left, 1), op(right, 2)).is_zero
    assert commutator(op(left, 3), op(right, 1)).is_zero


@pytest.mark.parametrize(
    "left, right",
    [("q", "p"), ("lq", "lp"), ("r", "q"), ("k", "lp"), ("r", "r2"), ("q", "lq2"), ("p", "lq")],
)
def test_unrelated_generators_commute(left, right):
    assert commutator(op(left, 1), op(right, 1)).is_zero


def test_cross_sector_table_entry_rejected():
    with pytest.raises(ValueError):
        CommutationTable({(gen("r", 1), gen("q", 1)): I})


def test_quantum_sector_has_no_lambda_generators():
    with pytest.raises(ValueError):
        gen("lr", 1)
    with pytest.raises(ValueError):
        gen("q", 4)


# ===== NORMAL FORM =====


def test_normal_form_reorders_with_bracket():
    result = normal_form([gen("k", 1), gen("r", 1)])
    assert result == normal_form([gen("r", 1), gen("k", 1)]) - OperatorExpr.scalar(I)
    assert result.to_dsl() == "r[1]*k[1] - I"
    assert result.to_unicode() == "r₁k₁ − i·𝟙"


def test_normal_form_collects_powers():
    result = normal_form([gen("p", 2), gen("q", 1), gen("p", 2)])
    assert result.to_dsl() == "q[1]*p[2]^2"
    assert result.degree() == 3


def test_identity_and_zero_printing():
    assert OperatorExpr.zero().to_dsl() == "0"
    assert OperatorExpr.scalar(I).to_dsl() == "I"
    assert OperatorExpr.scalar(I).to_unicode() == "i·𝟙"
    assert OperatorExpr.identity().to_unicode() == "𝟙"


def test_highest_degree_printed_first():
    expr = op("q", 1) + mul(op("p", 1), op("p", 1))
    assert expr.to_dsl() == "p[1]^2 + q[1]"


def test_normal_form_with_zero_coefficient_is_zero():
    assert normal_form([gen("r", 1), gen("k", 1)], 0).is_zero


def test_normal_form_moves_momentum_past_repeated_position():
    # k₁r₁r₁ = r₁²k₁ − 2i r₁
    result = normal_form([gen("k", 1), gen("r", 1), gen("r", 1)])
    expected = normal_form([gen("r", 1), gen("r", 1), gen("k", 1)]) + op("r", 1).scale(ParamScalar.gaussian(0, -2))
    assert result == expected
    assert result.degree() == 3


def test_negative_imaginary_coefficients_print_as_subtraction():
    M = ParamScalar.parameter("M")
    m = ParamScalar.parameter("m")
    cases = [
        op("r", 1).scale(M - I * m),
        op("r", 1) - op("k", 1).scale(I / M),
        OperatorExpr.scalar(M - I * m - I),
    ]
    for expr in cases:
        for text in (expr.to_dsl(), expr.to_unicode()):
            assert "+ -" not in text
            assert "+ −" not in text
            assert "+ (-" not in text
        assert parse_expression(expr.to_dsl()) == expr


def test_negated_fraction_coefficient_folds_into_join():
    M = ParamScalar.parameter("M")
    expr = mul(op("r", 1), op("r", 1)) - op("r", 1).scale(I / M)
    assert expr.to_dsl() == "r[1]^2 - (I/M)*r[1]"
    assert expr.to_unicode() == "r₁² − (i/M)·r₁"


def test_commutator_of_squares():
    # [k₁², r₁] = −2i k₁
    result = commutator(mul(op("k", 1), op("k", 1)), op("r", 1))
    assert result == op("k", 1).scale(ParamScalar.gaussian(0, -2))


def test_division_by_zero_operator_scalar():
    with pytest.raises(ParameterPoleError):
        op("q", 1) / 0


def test_operator_is_immutable():
    expr = op("q", 1)
    with pytest.raises(AttributeError):
        expr.foo = 1


# ===== PARAMETER SCALARS =====


def test_parameter_scalar_arithmetic():
    M = ParamScalar.parameter("M")
    assert (M * 2) / M == 2
    assert (M + 1) - M == 1
    assert I * I == -1
    assert I.conjugate() == -I
    assert (M * I).conjugate() == -(M * I)


def test_parameter_scalar_is_real():
    assert ParamScalar.parameter("m").is_real
    assert not (ParamScalar.parameter("m") * I).is_real


def test_unknown_parameter_rejected():
    with pytest.raises(InvalidParameterError):
        ParamScalar.parameter("x")


def test_substitution_leaves_unbound_parameters():
    value = ParamScalar.parameter("M") * ParamScalar.parameter("t")
    assert value.substitute({"M": 3}).free_parameters() == ("t",)
    assert value.substitute({"M": 3, "t": Fraction(1, 3)}) == 1


def test_substitution_at_pole_raises():
    value = ParamScalar(1) / (ParamScalar.parameter("M") - ParamScalar.parameter("m"))
    with pytest.raises(ParameterPoleError):
        value.substitute({"M": 2, "m": 2})


def test_rational_with_zero_denominator():
    with pytest.raises(ParameterPoleError):
        rational(1, 0)


def test_to_gaussian_requires_constant():
    with pytest.raises(InvalidParameterError):
        ParamScalar.parameter("t").to_gaussian()
    assert ParamScalar.gaussian(Fraction(1, 2), -1).to_complex() == complex(0.5, -1)


def test_booleans_are_not_scalars():
    with pytest.raises(TypeError):
        ParamScalar(True)


def test_substitute_params_on_operator():
    expr = op("r", 1).scale(ParamScalar.parameter("M"))
    assert expr.substitute_params({"M": 2}) == op("r", 1).scale(2)


# ===== ADJOINT AND HERMITICITY =====


def test_generators_are_hermitian():
    for symbol in ("r", "k", "q", "p", "lq", "lp"):
        assert op(symbol, 1).is_hermitian()


def test_adjoint_conjugates_coefficients():
    assert adjoint(op("r", 1).scale(I)) == op("r", 1).scale(-I)


def test_adjoint_of_classical_momentum_pair():
    # (p₁λp₁)† = λp₁p₁ = p₁λp₁ − i
    product = mul(op("p", 1), op("lp", 1))
    assert adjoint(product) == product - OperatorExpr.scalar(I)
    assert not product.is_hermitian()


def test_product_of_conjugates_is_not_hermitian():
    product = mul(op("r", 1), op("k", 1))
    assert not product.is_hermitian()
    assert (product + mul(op("k", 1), op("r", 1))).is_hermitian()


def test_symmetrized_dot_is_hermitian():
    assert symmetrized_dot(R(), K()).is_hermitian()
    assert not dot(R(), K()).is_hermitian()


# ===== VECTORS =====


def test_levi_civita():
    assert levi_civita(1, 2, 3) == 1
    assert levi_civita(2, 3, 1) == 1
    assert levi_civita(2, 1, 3) == -1
    assert levi_civita(1, 1, 2) == 0


def test_cross_product_component():
    third = cross(R(), K())[2]
    assert third == normal_form([gen("r", 1), gen("k", 2)]) - normal_form([gen("r", 2), gen("k", 1)])


def test_vectors_per_sector():
    assert R(Sector.QUANTUM_2)[0] == op("r2", 1)
    assert K()[2] == op("k", 3)


# ===== ALGEBRAIC LAWS ON RANDOM OPERATORS =====


def test_antisymmetry(operator_factory):
    for _ in range(PROPERTY_SAMPLES):
        a, b = operator_factory(), operator_factory()
        assert commutator(a, b) == -commutator(b, a)


def test_leibniz_rule(operator_factory):
    for _ in range(PROPERTY_SAMPLES):
        a, b, c = operator_factory(max_length=2), operator_factory(max_length=2), operator_factory(max_length=2)
        assert commutator(a, mul(b, c)) == mul(commutator(a, b), c) + mul(b, commutator(a, c))


def test_jacobi_identity(operator_factory):
    for _ in range(PROPERTY_SAMPLES):
        a, b, c = (operator_factory(max_terms=2, max_length=2) for _ in range(3))
        total = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
        assert total.is_zero


def test_associativity(operator_factory):
    for _ in range(PROPERTY_SAMPLES):
        a, b, c = (operator_factory(max_terms=2, max_length=2) for _ in range(3))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_adjoint_reverses_products(operator_factory):
    for _ in range(PROPERTY_SAMPLES):
        a, b = operator_factory(), operator_factory()
        assert adjoint(mul(a, b)) == mul(adjoint(b), adjoint(a))
        assert adjoint(adjoint(a)) == a


def test_commutator_of_hermitian_operators_is_anti_hermitian(operator_factory):
    for _ in range(PROPERTY_SAMPLES):
        a, b = operator_factory(), operator_factory()
        a, b = a + adjoint(a), b + adjoint(b)
        bracket = commutator(a, b)
        assert adjoint(bracket) == -bracket
