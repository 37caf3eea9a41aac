"""
Lowering of syntax trees to normal-ordered operators.

Vector symbols (R, K, Q, P, LQ, LP and their sector-2 forms) exist only
during evaluation; the value of a whole expression must be a single
operator.
"""

import logging
from typing import Union

from app.core.exceptions import ExpressionSyntaxError
from app.services.expressions.ast_nodes import (
    Atom,
    Binary,
    Call,
    Imaginary,
    Index,
    Node,
    Number,
    Param,
    Unary,
    VectorRef,
)
from app.services.expressions.parser import VECTOR_SYMBOLS, parse
from app.services.opalgebra.generators import Generator, SYMBOL_TABLE
from app.services.opalgebra.operator_expr import OperatorExpr, add, adjoint, commutator, mul
from app.services.opalgebra.param_scalar import I, ParamScalar
from app.services.opalgebra.vectors import Vector, cross, dot, vadd, vector, vmap, vsub

logger = logging.getLogger(__name__)

Value = Union[OperatorExpr, Vector]


def _is_vector(value: Value) -> bool:
    return isinstance(value, tuple)


class ExpressionEvaluator:
    """Evaluates trees produced by parse(); `text` is only used in error reports."""

    def __init__(self, text: str = ""):
        self.text = text

    def _type_error(self, message: str, node: Node) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(message, node.position, "type", self.text or None)

    def _operator(self, node: Node) -> OperatorExpr:
        value = self.evaluate(node)
        if _is_vector(value):
            raise self._type_error("Expected an operator but found a vector", node)
        return value

    def _vector(self, node: Node) -> Vector:
        value = self.evaluate(node)
        if not _is_vector(value):
            raise self._type_error("Expected a vector but found an operator", node)
        return value

    def evaluate(self, node: Node) -> Value:
        if isinstance(node, Number):
            return OperatorExpr.scalar(node.value)
        if isinstance(node, Imaginary):
            return OperatorExpr.scalar(I)
        if isinstance(node, Param):
            return OperatorExpr.scalar(ParamScalar.parameter(node.name))
        if isinstance(node, Atom):
            sector, kind = SYMBOL_TABLE[node.symbol]
            return OperatorExpr.generator(Generator(sector, kind, node.index))
        if isinstance(node, VectorRef):
            sector, kind = SYMBOL_TABLE[VECTOR_SYMBOLS[node.name]]
            return vector(kind, sector)
        if isinstance(node, Index):
            return self._vector(node.target)[node.index - 1]
        if isinstance(node, Unary):
            value = self.evaluate(node.operand)
            return vmap(value, lambda x: -x) if _is_vector(value) else -value
        if isinstance(node, Binary):
            return self._binary(node)
        if isinstance(node, Call):
            return self._call(node)
        raise TypeError(f"not an expression node: {node!r}")

    def _binary(self, node: Binary) -> Value:
        if node.op == "^":
            return self._operator(node.left) ** int(node.right.value)
        if node.op == "/":
            numerator = self.evaluate(node.left)
            denominator = self._operator(node.right)
            if not denominator.is_scalar:
                raise ExpressionSyntaxError(
                    "Denominator must evaluate to a scalar",
                    node.position,
                    "nonscalar-denominator",
                    self.text or None,
                )
            divisor = denominator.as_scalar()
            if _is_vector(numerator):
                return vmap(numerator, lambda x: x / divisor)
            return numerator / divisor

        left, right = self.evaluate(node.left), self.evaluate(node.right)
        if node.op in ("+", "-"):
            if _is_vector(left) != _is_vector(right):
                raise self._type_error(f"Cannot apply '{node.op}' to a vector and an operator", node)
            if _is_vector(left):
                return vadd(left, right) if node.op == "+" else vsub(left, right)
            return add(left, right) if node.op == "+" else add(left, -right)
        if node.op == "*":
            if _is_vector(left) and _is_vector(right):
                raise self._type_error("Use dot() or cross() to multiply two vectors", node)
            if _is_vector(right):
                return tuple(mul(left, x) for x in right)
            if _is_vector(left):
                return tuple(mul(x, right) for x in left)
            return mul(left, right)
        raise self._type_error(f"Unknown operator '{node.op}'", node)

    def _call(self, node: Call) -> Value:
        if node.name == "comm":
            return commutator(self._operator(node.args[0]), self._operator(node.args[1]))
        if node.name == "dot":
            return dot(self._vector(node.args[0]), self._vector(node.args[1]))
        if node.name == "cross":
            return cross(self._vector(node.args[0]), self._vector(node.args[1]))
        if node.name == "adj":
            value = self.evaluate(node.args[0])
            return vmap(value, adjoint) if _is_vector(value) else adjoint(value)
        raise self._type_error(f"Unknown function '{node.name}'", node)


def evaluate(node: Node, text: str = "") -> OperatorExpr:
    """Lower a tree to one normal-ordered operator.

    Raises:
        ExpressionSyntaxError: kind "type" when the tree denotes a vector or mixes kinds
        ParameterPoleError: division by an expression that vanishes identically
    """
    evaluator = ExpressionEvaluator(text)
    value = evaluator.evaluate(node)
    if _is_vector(value):
        raise evaluator._type_error("Expression denotes a vector; index it, e.g. R[1]", node)
    return value


def parse_expression(text: str) -> OperatorExpr:
    """parse() followed by evaluate()."""
    return evaluate(parse(text), text)


def parse_vector(text: str) -> Vector:
    """Evaluate a vector-valued expression such as cross(R,K)."""
    evaluator = ExpressionEvaluator(text)
    return evaluator._vector(parse(text))
