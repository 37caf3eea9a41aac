import random
from fractions import Fraction

import pytest

from app.core.exceptions import ExpressionSyntaxError, ParameterPoleError
from app.services.expressions import (
    evaluate,
    parse,
    parse_expression,
    parse_vector,
    to_source,
    tokenize,
)
from app.services.expressions.ast_nodes import Atom, Binary, Call, Imaginary, Index, Number, Param, Unary, VectorRef
from app.services.opalgebra import I, OperatorExpr, ParamScalar, gen
from app.services.opalgebra.vectors import K, R, cross

ROUND_TRIPS = 100


def op(symbol: str, axis: int) -> OperatorExpr:
    return OperatorExpr.generator(gen(symbol, axis))


# ===== EVALUATION =====


def test_canonical_commutator():
    assert parse_expression("comm(q[1], lq[1])") == I
    assert parse_expression("comm(lq[1], q[1])") == -I


def test_boost_commutes_with_classical_translation():
    assert parse_expression("comm(lq[1], -t*lq[1] - m*lp[1])").is_zero


def test_linear_combination():
    assert parse_expression("2*r[1] - r[1]") == op("r", 1)
    assert parse_expression("0.5*q[1]") == op("q", 1) / 2
    assert parse_expression("q[1]/2") == op("q", 1) / 2


def test_imaginary_unit_spellings():
    assert parse_expression("i") == parse_expression("I")
    assert parse_expression("I*I") == -1


def test_parameters():
    M = ParamScalar.parameter("M")
    assert parse_expression("M*k[1]") == op("k", 1).scale(M)
    assert parse_expression("k[1]/(2*M)") == op("k", 1).scale(1 / (2 * M))


def test_precedence():
    q1 = op("q", 1)
    assert parse_expression("-q[1]^2") == -(q1 * q1)
    assert parse_expression("2*3^2") == 18
    assert parse_expression("1 + 2*3") == 7


def test_left_associativity():
    assert parse_expression("q[1] - p[1] - q[1]") == -op("p", 1)
    assert parse_expression("8/2/2") == 2


def test_vector_functions():
    assert parse_expression("cross(R,K)[3]") == cross(R(), K())[2]
    assert parse_expression("dot(R,K)") == parse_expression("r[1]*k[1] + r[2]*k[2] + r[3]*k[3]")
    assert parse_expression("(R - Q)[2]") == op("r", 2) - op("q", 2)


def test_adjoint_function():
    assert parse_expression("adj(I*r[1])") == op("r", 1).scale(-I)
    assert parse_expression("adj(r[1]*k[1])") == parse_expression("k[1]*r[1]")


def test_second_particle_symbols():
    assert parse_expression("comm(r2[1], k2[1])") == I
    assert parse_expression("comm(r[1], k2[1])").is_zero


def test_parse_vector():
    assert parse_vector("cross(R,K)") == cross(R(), K())
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_vector("r[1]")
    assert excinfo.value.kind == "type"


def test_division_by_vanishing_scalar():
    with pytest.raises(ParameterPoleError):
        parse_expression("1/(2-2)")


def test_printed_forms_reparse(operator_factory):
    for _ in range(ROUND_TRIPS):
        expr = operator_factory()
        assert parse_expression(expr.to_dsl()) == expr


def test_tokens_carry_byte_offsets():
    tokens = tokenize("lp[2] + 1.5")
    assert [(t.kind, t.text, t.position) for t in tokens] == [
        ("name", "lp", 0),
        ("op", "[", 2),
        ("number", "2", 3),
        ("op", "]", 4),
        ("op", "+", 6),
        ("number", "1.5", 8),
        ("end", "", 11),
    ]


# ===== ERRORS =====


@pytest.mark.parametrize(
    "text, kind, position",
    [
        ("", "syntax", 0),
        ("q[", "syntax", 2),
        ("q", "syntax", 1),
        ("q[1] $", "syntax", 5),
        ("\u00a0q[1] $", "syntax", 7),
        ("q[1] +", "syntax", 6),
        ("(q[1]", "syntax", 5),
        ("q[1] q[2]", "syntax", 5),
        ("x[1]", "unknown-symbol", 0),
        ("q[1] + sin(q[1])", "unknown-symbol", 7),
        ("r[4]", "index-out-of-range", 2),
        ("R[0]", "index-out-of-range", 2),
        ("q[1]/p[1]", "nonscalar-denominator", 4),
        ("q[1]^-1", "bad-exponent", 5),
        ("q[1]^1.5", "bad-exponent", 5),
        ("q[1]^2^3", "bad-exponent", 6),
        ("dot(R)", "syntax", 0),
        ("Q", "type", 0),
        ("R + r[1]", "type", 2),
        ("R*K", "type", 1),
    ],
)
def test_error_corpus(text, kind, position):
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression(text)
    error = excinfo.value
    assert error.kind == kind
    assert error.position == position
    assert error.details["position"] == position
    assert error.message.endswith(f"(at byte {position})")
    assert error.status_code == 400


def test_error_dictionary():
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expression("x[1]")
    payload = excinfo.value.to_dict()
    assert payload["error"] == "EXPRESSIONSYNTAX"
    assert payload["details"]["text"] == "x[1]"


# ===== SOURCE ROUND TRIPS =====

_PARAMS = ("M", "m", "t")
_ATOMS = ("r", "k", "q", "p", "lq", "lp")
_VECTORS = ("R", "K", "Q", "P", "LQ", "LP")


def random_tree(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.25:
        choice = rng.randrange(5)
        if choice == 0:
            return Number(Fraction(rng.randint(0, 5), rng.randint(1, 3)))
        if choice == 1:
            return Imaginary()
        if choice == 2:
            return Param(rng.choice(_PARAMS))
        if choice == 3:
            return Index(VectorRef(rng.choice(_VECTORS)), rng.randint(1, 3))
        return Atom(rng.choice(_ATOMS), rng.randint(1, 2))
    choice = rng.randrange(6)
    if choice == 0:
        return Unary("-", random_tree(rng, depth - 1))
    if choice == 1:
        return Binary("^", random_tree(rng, depth - 1), Number(Fraction(rng.randint(0, 2))))
    if choice == 2:
        return Call("comm", (random_tree(rng, depth - 1), random_tree(rng, depth - 1)))
    if choice == 3:
        return Call("adj", (random_tree(rng, depth - 1),))
    if choice == 4:
        return Binary("/", random_tree(rng, depth - 1), Number(Fraction(rng.randint(1, 4))))
    return Binary(rng.choice("+-*"), random_tree(rng, depth - 1), random_tree(rng, depth - 1))


def test_source_round_trip(rng):
    for _ in range(ROUND_TRIPS):
        tree = random_tree(rng, 3)
        source = to_source(tree)
        assert evaluate(parse(source), source) == evaluate(tree)
