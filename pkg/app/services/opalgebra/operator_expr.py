"""
Normal-ordered noncommutative polynomials over ParamScalar.

An OperatorExpr is a finite map from ordered monomials to nonzero
coefficients. Every operation returns a value in normal order, so equality of
operators is equality of the stored maps.
"""

import logging
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from app.core.exceptions import ParameterPoleError
from app.services.opalgebra.generators import (
    DEFAULT_TABLE,
    CommutationTable,
    Generator,
    Kind,
    Monomial,
    Sector,
    Terms,
    monomial_key,
)
from app.services.opalgebra.param_scalar import ONE, ParamScalar, RationalLike

logger = logging.getLogger(__name__)

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")

OperandLike = Union["OperatorExpr", ParamScalar, int, Fraction]


def _add_into(target: Terms, monomial: Monomial, coeff: ParamScalar) -> None:
    total = target.get(monomial)
    total = coeff if total is None else total + coeff
    if total:
        target[monomial] = total
    else:
        target.pop(monomial, None)


def _word(monomial: Monomial) -> List[Generator]:
    return [g for g, exp in monomial for _ in range(exp)]


def _presentation_key(monomial: Monomial):
    degree, gens = monomial_key(monomial)
    return (-degree, gens)


class OperatorExpr:
    """Immutable normal-ordered operator polynomial."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Union[ParamScalar, RationalLike]]] = None):
        clean: Terms = {}
        for monomial, coeff in (terms or {}).items():
            if not isinstance(coeff, ParamScalar):
                coeff = ParamScalar(coeff)
            if coeff:
                clean[monomial] = coeff
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorExpr is immutable")

    @classmethod
    def _wrap(cls, terms: Terms) -> "OperatorExpr":
        expr = cls.__new__(cls)
        object.__setattr__(expr, "_terms", terms)
        object.__setattr__(expr, "_hash", None)
        return expr

    # ----- constructors -----

    @classmethod
    def zero(cls) -> "OperatorExpr":
        return cls._wrap({})

    @classmethod
    def identity(cls) -> "OperatorExpr":
        return cls._wrap({(): ONE})

    @classmethod
    def scalar(cls, value: Union[ParamScalar, RationalLike]) -> "OperatorExpr":
        return cls({(): value})

    @classmethod
    def generator(cls, g: Generator) -> "OperatorExpr":
        return cls._wrap({((g, 1),): ONE})

    @staticmethod
    def coerce(value: OperandLike) -> "OperatorExpr":
        if isinstance(value, OperatorExpr):
            return value
        return OperatorExpr.scalar(value)

    # ----- access -----

    def terms(self) -> List[Tuple[Monomial, ParamScalar]]:
        """Terms in presentation order (highest degree first)."""
        return sorted(self._terms.items(), key=lambda item: _presentation_key(item[0]))

    def raw_terms(self) -> Mapping[Monomial, ParamScalar]:
        return self._terms

    def coefficient(self, monomial: Monomial) -> ParamScalar:
        return self._terms.get(monomial, ParamScalar(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_scalar(self) -> bool:
        return all(not monomial for monomial in self._terms)

    def as_scalar(self) -> ParamScalar:
        if not self.is_scalar:
            raise ValueError(f"{self.to_dsl()} is not a multiple of the identity")
        return self._terms.get((), ParamScalar(0))

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def kind_degree(self, kind: Kind) -> int:
        """Largest total exponent carried by generators of one kind in a single term."""
        return max(
            (sum(e for g, e in m if g.kind == kind) for m in self._terms),
            default=0,
        )

    def generators(self) -> FrozenSet[Generator]:
        return frozenset(g for m in self._terms for g, _ in m)

    def sectors(self) -> FrozenSet[Sector]:
        return frozenset(g.sector for g in self.generators())

    def has_lambda(self) -> bool:
        return any(g.kind.is_lambda for g in self.generators())

    def has_numeric_coefficients(self) -> bool:
        return all(c.is_constant for c in self._terms.values())

    # ----- arithmetic -----

    def __add__(self, other: OperandLike) -> "OperatorExpr":
        return add(self, OperatorExpr.coerce(other))

    __radd__ = __add__

    def __sub__(self, other: OperandLike) -> "OperatorExpr":
        return add(self, -OperatorExpr.coerce(other))

    def __rsub__(self, other: OperandLike) -> "OperatorExpr":
        return add(OperatorExpr.coerce(other), -self)

    def __neg__(self) -> "OperatorExpr":
        return OperatorExpr._wrap({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def scale(self, factor: Union[ParamScalar, RationalLike]) -> "OperatorExpr":
        factor = ParamScalar(factor)
        if not factor:
            return OperatorExpr.zero()
        return OperatorExpr._wrap({m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other: OperandLike) -> "OperatorExpr":
        if isinstance(other, OperatorExpr):
            return mul(self, other)
        if isinstance(other, (ParamScalar, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: OperandLike) -> "OperatorExpr":
        if isinstance(other, (ParamScalar, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other: OperandLike) -> "OperatorExpr":
        if isinstance(other, OperatorExpr):
            other = other.as_scalar()
        divisor = ParamScalar(other)
        if not divisor:
            raise ParameterPoleError(f"Division of {self.to_dsl()} by zero")
        return self.scale(ParamScalar(1) / divisor)

    def __pow__(self, exponent: int) -> "OperatorExpr":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("operator powers must be nonnegative integers")
        result = OperatorExpr.identity()
        for _ in range(exponent):
            result = mul(result, self)
        return result

    # ----- comparison -----

    def __eq__(self, other):
        if isinstance(other, OperatorExpr):
            return self._terms == other._terms
        if isinstance(other, (ParamScalar, int, Fraction)) and not isinstance(other, bool):
            return self._terms == OperatorExpr.scalar(other)._terms
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    # ----- structure-preserving maps -----

    def adjoint(self, table: CommutationTable = DEFAULT_TABLE) -> "OperatorExpr":
        return adjoint(self, table)

    def is_hermitian(self, table: CommutationTable = DEFAULT_TABLE) -> bool:
        return adjoint(self, table) == self

    def substitute_params(self, bindings: Mapping[str, RationalLike]) -> "OperatorExpr":
        return substitute_params(self, bindings)

    # ----- printing -----

    def to_dsl(self) -> str:
        """ASCII rendering that re-parses to an equal operator."""
        if not self._terms:
            return "0"
        pieces = []
        for index, (monomial, coeff) in enumerate(self.terms()):
            mono_text = "*".join(
                g.to_dsl() if exp == 1 else f"{g.to_dsl()}^{exp}" for g, exp in monomial
            )
            pieces.append(_join_term(index, coeff, mono_text, unicode=False))
        return "".join(pieces)

    def to_unicode(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for index, (monomial, coeff) in enumerate(self.terms()):
            mono_text = "".join(
                g.to_unicode() if exp == 1 else f"{g.to_unicode()}{str(exp).translate(_SUPERSCRIPTS)}"
                for g, exp in monomial
            ) or "𝟙"
            pieces.append(_join_term(index, coeff, mono_text, unicode=True))
        return "".join(pieces)

    def __str__(self):
        return self.to_dsl()

    def __repr__(self):
        return f"OperatorExpr({self.to_dsl()})"


def _join_term(index: int, coeff: ParamScalar, mono_text: str, unicode: bool) -> str:
    mul_sign = "·" if unicode else "*"
    minus = "−" if unicode else "-"
    render = coeff.to_unicode if unicode else coeff.to_dsl
    negative = coeff.to_dsl().startswith("-") and not (-coeff).to_dsl().startswith("-")
    if negative:
        coeff = -coeff
    text = render()
    if coeff.needs_parentheses():
        text = f"({text})"

    if not mono_text:
        body = text
    elif coeff == 1:
        body = mono_text
    else:
        body = f"{text}{mul_sign}{mono_text}"

    if index == 0:
        return f"{minus}{body}" if negative else body
    return f" {minus} {body}" if negative else f" + {body}"


# ----- module-level operations -----

def normal_form(
    product: Sequence[Generator],
    coeff: Union[ParamScalar, RationalLike] = 1,
    table: CommutationTable = DEFAULT_TABLE,
) -> OperatorExpr:
    """Expand coeff·g₁g₂…gₙ into normal-ordered monomials."""
    coeff = ParamScalar(coeff)
    if not coeff:
        return OperatorExpr.zero()
    terms: Terms = {(): coeff}
    for g in product:
        step: Terms = {}
        for monomial, c in terms.items():
            for out, factor in table.times_generator(monomial, g).items():
                _add_into(step, out, c if factor is ONE else c * factor)
        terms = step
    return OperatorExpr._wrap(terms)


def add(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    if not b._terms:
        return a
    if not a._terms:
        return b
    terms = dict(a._terms)
    for monomial, coeff in b._terms.items():
        _add_into(terms, monomial, coeff)
    return OperatorExpr._wrap(terms)


def mul(a: OperatorExpr, b: OperatorExpr, table: CommutationTable = DEFAULT_TABLE) -> OperatorExpr:
    terms: Terms = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            coeff = ca * cb
            if not mb:
                _add_into(terms, ma, coeff)
                continue
            for out, factor in table.multiply_monomials(ma, mb).items():
                _add_into(terms, out, coeff if factor is ONE else coeff * factor)
    return OperatorExpr._wrap(terms)


def _interacts(a: OperatorExpr, b: OperatorExpr, table: CommutationTable) -> bool:
    return any(table.bracket(x, y) for x in a.generators() for y in b.generators())


def commutator(a: OperatorExpr, b: OperatorExpr, table: CommutationTable = DEFAULT_TABLE) -> OperatorExpr:
    """[a, b] = ab − ba."""
    if not _interacts(a, b, table):
        return OperatorExpr.zero()
    return add(mul(a, b, table), -mul(b, a, table))


def adjoint(a: OperatorExpr, table: CommutationTable = DEFAULT_TABLE) -> OperatorExpr:
    """Conjugate coefficients, reverse every word, re-normal-order."""
    result = OperatorExpr.zero()
    for monomial, coeff in a._terms.items():
        result = add(result, normal_form(list(reversed(_word(monomial))), coeff.conjugate(), table))
    return result


def substitute_params(a: OperatorExpr, bindings: Mapping[str, RationalLike]) -> OperatorExpr:
    """Evaluate coefficients at exact parameter values; ParameterPoleError on a vanishing denominator."""
    return OperatorExpr({m: c.substitute(bindings) for m, c in a._terms.items()})


def linear_combination(
    items: Iterable[Tuple[Union[ParamScalar, RationalLike], OperatorExpr]]
) -> OperatorExpr:
    terms: Terms = {}
    for weight, expr in items:
        weight = ParamScalar(weight)
        if not weight:
            continue
        for monomial, coeff in expr._terms.items():
            _add_into(terms, monomial, coeff * weight)
    return OperatorExpr._wrap(terms)

