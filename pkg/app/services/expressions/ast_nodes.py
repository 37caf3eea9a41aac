"""Syntax tree of the operator expression language."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union


@dataclass(frozen=True)
class Number:
    value: Fraction
    position: int = 0


@dataclass(frozen=True)
class Imaginary:
    position: int = 0


@dataclass(frozen=True)
class Param:
    name: str
    position: int = 0


@dataclass(frozen=True)
class Atom:
    """Generator component such as lp[2] or q2[1]."""

    symbol: str
    index: int
    position: int = 0


@dataclass(frozen=True)
class VectorRef:
    name: str
    position: int = 0


@dataclass(frozen=True)
class Index:
    target: "Node"
    index: int
    position: int = 0


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"
    position: int = 0


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"
    position: int = 0


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]
    position: int = 0


Node = Union[Number, Imaginary, Param, Atom, VectorRef, Index, Unary, Binary, Call]


def contains_generators(node: Node) -> bool:
    if isinstance(node, (Atom, VectorRef)):
        return True
    if isinstance(node, Index):
        return contains_generators(node.target)
    if isinstance(node, Unary):
        return contains_generators(node.operand)
    if isinstance(node, Binary):
        return contains_generators(node.left) or contains_generators(node.right)
    if isinstance(node, Call):
        return any(contains_generators(arg) for arg in node.args)
    return False


def to_source(node: Node) -> str:
    """Fully parenthesized source text that parses back to an equivalent tree."""
    if isinstance(node, Number):
        value = node.value
        return str(value.numerator) if value.denominator == 1 else f"({value.numerator}/{value.denominator})"
    if isinstance(node, Imaginary):
        return "I"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Atom):
        return f"{node.symbol}[{node.index}]"
    if isinstance(node, VectorRef):
        return node.name
    if isinstance(node, Index):
        return f"{to_source(node.target)}[{node.index}]"
    if isinstance(node, Unary):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Binary):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({','.join(to_source(arg) for arg in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")
