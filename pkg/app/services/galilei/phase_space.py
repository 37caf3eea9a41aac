"""
Classical phase-space functions and the map to Liouvillian operators.

A PhaseSpacePoly is a commutative polynomial in the q and p coordinates of
the classical sectors. liouvillian_from_hamiltonian promotes
∇ₚH·λ_q − ∇_qH·λ_p to an OperatorExpr, and apply_to_phase_space realizes an
operator linear in λ on a phase-space function through λ = −i∇.
"""

import logging
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Union

from app.core.exceptions import PhaseSpaceConversionError
from app.services.opalgebra.generators import AXES, Generator, Kind, Monomial, Sector, monomial_key
from app.services.opalgebra.operator_expr import OperatorExpr, add, mul
from app.services.opalgebra.param_scalar import ParamScalar, RationalLike

logger = logging.getLogger(__name__)

CLASSICAL_SECTORS = (Sector.CLASSICAL, Sector.CLASSICAL_2)
_COORDINATE_KINDS = (Kind.POSITION, Kind.MOMENTUM)
_CONJUGATE = {Kind.LAMBDA_Q: Kind.POSITION, Kind.LAMBDA_P: Kind.MOMENTUM}


def _check_generator(g: Generator) -> None:
    if g.sector not in CLASSICAL_SECTORS or g.kind not in _COORDINATE_KINDS:
        raise PhaseSpaceConversionError(
            f"{g.to_dsl()} is not a classical phase-space coordinate",
            generator=g.to_dsl(),
        )


def _merge(a: Monomial, b: Monomial) -> Monomial:
    exps: Dict[Generator, int] = dict(a)
    for g, e in b:
        exps[g] = exps.get(g, 0) + e
    return tuple(sorted(exps.items(), key=lambda item: item[0].sort_key))


def _add_into(target: Dict[Monomial, ParamScalar], monomial: Monomial, coeff: ParamScalar) -> None:
    total = target.get(monomial)
    total = coeff if total is None else total + coeff
    if total:
        target[monomial] = total
    else:
        target.pop(monomial, None)


class PhaseSpacePoly:
    """Commutative polynomial H(q, p) with ParamScalar coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Union[ParamScalar, RationalLike]]] = None):
        clean: Dict[Monomial, ParamScalar] = {}
        for monomial, coeff in (terms or {}).items():
            for g, _ in monomial:
                _check_generator(g)
            coeff = ParamScalar(coeff)
            if coeff:
                clean[tuple(sorted(monomial, key=lambda item: item[0].sort_key))] = coeff
        self._terms = clean

    @classmethod
    def constant(cls, value: Union[ParamScalar, RationalLike]) -> "PhaseSpacePoly":
        return cls({(): value})

    @classmethod
    def coordinate(cls, kind: Kind, axis: int, sector: Sector = Sector.CLASSICAL) -> "PhaseSpacePoly":
        return cls({((Generator(sector, kind, axis), 1),): 1})

    @classmethod
    def q(cls, axis: int, sector: Sector = Sector.CLASSICAL) -> "PhaseSpacePoly":
        return cls.coordinate(Kind.POSITION, axis, sector)

    @classmethod
    def p(cls, axis: int, sector: Sector = Sector.CLASSICAL) -> "PhaseSpacePoly":
        return cls.coordinate(Kind.MOMENTUM, axis, sector)

    @classmethod
    def from_operator(cls, expr: OperatorExpr) -> "PhaseSpacePoly":
        """Read a λ-free classical operator as a phase-space function."""
        for g in expr.generators():
            _check_generator(g)
        return cls(dict(expr.raw_terms()))

    def to_operator(self) -> OperatorExpr:
        # q and p of the classical sectors commute, so sorted monomials are already normal.
        return OperatorExpr(dict(self._terms))

    # ----- arithmetic -----

    @staticmethod
    def _coerce(value) -> "PhaseSpacePoly":
        if isinstance(value, PhaseSpacePoly):
            return value
        return PhaseSpacePoly.constant(value)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for monomial, coeff in other._terms.items():
            _add_into(terms, monomial, coeff)
        return PhaseSpacePoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return PhaseSpacePoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: Dict[Monomial, ParamScalar] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                _add_into(terms, _merge(ma, mb), ca * cb)
        return PhaseSpacePoly(terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[ParamScalar, RationalLike]):
        factor = ParamScalar(1) / ParamScalar(other)
        return PhaseSpacePoly({m: c * factor for m, c in self._terms.items()})

    def __pow__(self, exponent: int):
        result = PhaseSpacePoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, PhaseSpacePoly):
            return self._terms == other._terms
        if isinstance(other, (ParamScalar, int)):
            return self._terms == PhaseSpacePoly.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # ----- calculus -----

    def diff(self, g: Generator) -> "PhaseSpacePoly":
        """Partial derivative with respect to one coordinate."""
        terms: Dict[Monomial, ParamScalar] = {}
        for monomial, coeff in self._terms.items():
            exps = dict(monomial)
            exp = exps.get(g, 0)
            if not exp:
                continue
            if exp == 1:
                del exps[g]
            else:
                exps[g] = exp - 1
            reduced = tuple(sorted(exps.items(), key=lambda item: item[0].sort_key))
            _add_into(terms, reduced, coeff * exp)
        return PhaseSpacePoly(terms)

    def sectors(self) -> FrozenSet[Sector]:
        return frozenset(g.sector for m in self._terms for g, _ in m)

    def terms(self):
        return sorted(self._terms.items(), key=lambda item: monomial_key(item[0]))

    def to_dsl(self) -> str:
        return self.to_operator().to_dsl()

    def __repr__(self):
        return f"PhaseSpacePoly({self.to_dsl()})"


def _canonical_pairs(sectors: Iterable[Sector]):
    for sector in sorted(sectors, key=lambda s: s.rank):
        for axis in AXES:
            yield Generator(sector, Kind.POSITION, axis), Generator(sector, Kind.MOMENTUM, axis)


def poisson_bracket(f: PhaseSpacePoly, g: PhaseSpacePoly) -> PhaseSpacePoly:
    """{f, g} = Σ (∂f/∂qᵢ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂qᵢ) over every classical sector present."""
    result = PhaseSpacePoly()
    for q, p in _canonical_pairs(f.sectors() | g.sectors()):
        result = result + f.diff(q) * g.diff(p) - f.diff(p) * g.diff(q)
    return result


def liouvillian_from_hamiltonian(hamiltonian: PhaseSpacePoly) -> OperatorExpr:
    """Ĥ_cl = ∇ₚH·λ̂_q − ∇_qH·λ̂_p, Hermitian and linear in λ."""
    result = OperatorExpr.zero()
    for q, p in _canonical_pairs(hamiltonian.sectors()):
        lambda_q = OperatorExpr.generator(Generator(q.sector, Kind.LAMBDA_Q, q.axis))
        lambda_p = OperatorExpr.generator(Generator(p.sector, Kind.LAMBDA_P, p.axis))
        result = add(result, mul(hamiltonian.diff(p).to_operator(), lambda_q))
        result = add(result, -mul(hamiltonian.diff(q).to_operator(), lambda_p))
    return result


def apply_to_phase_space(operator: OperatorExpr, f: PhaseSpacePoly) -> PhaseSpacePoly:
    """Act with an operator on f(q, p), reading λ_q = −i∇_q and λ_p = −i∇_p."""
    minus_i = ParamScalar.gaussian(0, -1)
    result = PhaseSpacePoly()
    for monomial, coeff in operator.raw_terms().items():
        multiplier = []
        derived = f
        for g, exp in monomial:
            if g.sector not in CLASSICAL_SECTORS:
                raise PhaseSpaceConversionError(
                    f"{g.to_dsl()} has no action on classical phase-space functions",
                    generator=g.to_dsl(),
                )
            if g.kind.is_lambda:
                coordinate = Generator(g.sector, _CONJUGATE[g.kind], g.axis)
                for _ in range(exp):
                    derived = derived.diff(coordinate) * minus_i
            else:
                multiplier.append((g, exp))
        result = result + PhaseSpacePoly({tuple(multiplier): coeff}) * derived
    return result
