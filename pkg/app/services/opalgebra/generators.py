"""
Canonical generators and their central commutation relations.

Generators are ordered by (sector, kind, axis); a monomial is a tuple of
(generator, exponent) pairs listed in that order. The CommutationTable turns
arbitrary words into sums of ordered monomials by swapping adjacent
out-of-order generators, x·y = y·x + [x, y]·𝟙, which is exact because every
bracket in the table is a scalar.
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Tuple

from app.services.opalgebra.param_scalar import I, ONE, ZERO, ParamScalar

logger = logging.getLogger(__name__)

AXES = (1, 2, 3)


class Sector(str, Enum):
    QUANTUM = "quantum"
    QUANTUM_2 = "quantum-particle-2"
    CLASSICAL = "classical"
    CLASSICAL_2 = "classical-particle-2"

    @property
    def rank(self) -> int:
        return _SECTOR_RANK[self]

    @property
    def is_quantum(self) -> bool:
        return self in (Sector.QUANTUM, Sector.QUANTUM_2)

    @property
    def suffix(self) -> str:
        return "2" if self in (Sector.QUANTUM_2, Sector.CLASSICAL_2) else ""


class Kind(str, Enum):
    POSITION = "position"
    MOMENTUM = "momentum"
    LAMBDA_Q = "lambda-q"
    LAMBDA_P = "lambda-p"

    @property
    def rank(self) -> int:
        return _KIND_RANK[self]

    @property
    def is_lambda(self) -> bool:
        return self in (Kind.LAMBDA_Q, Kind.LAMBDA_P)


_SECTOR_RANK = {sector: i for i, sector in enumerate(Sector)}
_KIND_RANK = {kind: i for i, kind in enumerate(Kind)}

QUANTUM_KINDS = (Kind.POSITION, Kind.MOMENTUM)

_QUANTUM_SYMBOLS = {Kind.POSITION: "r", Kind.MOMENTUM: "k"}
_CLASSICAL_SYMBOLS = {
    Kind.POSITION: "q",
    Kind.MOMENTUM: "p",
    Kind.LAMBDA_Q: "lq",
    Kind.LAMBDA_P: "lp",
}
_UNICODE_SYMBOLS = {"lq": "λq", "lp": "λp"}
_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class Generator:
    """A single Hermitian canonical generator."""

    sector: Sector
    kind: Kind
    axis: int
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be 1, 2 or 3, got {self.axis}")
        if self.sector.is_quantum and self.kind not in QUANTUM_KINDS:
            raise ValueError(f"quantum sector has no {self.kind.value} generator")
        object.__setattr__(self, "_hash", hash((self.sector.rank, self.kind.rank, self.axis)))

    def __hash__(self):
        return self._hash

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.sector.rank, self.kind.rank, self.axis)

    def __lt__(self, other: "Generator") -> bool:
        return self.sort_key < other.sort_key

    def __gt__(self, other: "Generator") -> bool:
        return self.sort_key > other.sort_key

    @property
    def symbol(self) -> str:
        table = _QUANTUM_SYMBOLS if self.sector.is_quantum else _CLASSICAL_SYMBOLS
        return table[self.kind] + self.sector.suffix

    def to_dsl(self) -> str:
        return f"{self.symbol}[{self.axis}]"

    def to_unicode(self) -> str:
        base = _CLASSICAL_SYMBOLS[self.kind] if not self.sector.is_quantum else _QUANTUM_SYMBOLS[self.kind]
        base = _UNICODE_SYMBOLS.get(base, base)
        tag = "⁽²⁾" if self.sector.suffix else ""
        return f"{base}{tag}{str(self.axis).translate(_SUBSCRIPTS)}"

    def __repr__(self):
        return self.to_dsl()


def gen(symbol: str, axis: int) -> Generator:
    """Look up a generator by its DSL spelling, e.g. gen('lp', 1) or gen('q2', 3)."""
    try:
        sector, kind = SYMBOL_TABLE[symbol]
    except KeyError:
        raise ValueError(f"unknown generator symbol '{symbol}'")
    return Generator(sector, kind, axis)


SYMBOL_TABLE: Dict[str, Tuple[Sector, Kind]] = {}
for _sector in Sector:
    _kinds = QUANTUM_KINDS if _sector.is_quantum else tuple(Kind)
    for _kind in _kinds:
        _sample = Generator(_sector, _kind, 1)
        SYMBOL_TABLE[_sample.symbol] = (_sector, _kind)


Monomial = Tuple[Tuple[Generator, int], ...]
Terms = Dict[Monomial, ParamScalar]

IDENTITY_MONOMIAL: Monomial = ()


def monomial_key(monomial: Monomial):
    """Deterministic presentation order: total degree, then generator order."""
    degree = sum(exp for _, exp in monomial)
    return (degree, tuple((g.sort_key, e) for g, e in monomial))


def _accumulate(target: Terms, monomial: Monomial, coeff: ParamScalar) -> None:
    total = target.get(monomial)
    total = coeff if total is None else total + coeff
    if total:
        target[monomial] = total
    else:
        target.pop(monomial, None)


class CommutationTable:
    """Central brackets [a, b] = c·𝟙 between canonical generators.

    Only pairs within one sector may carry a nonzero entry; entries are stored
    for ordered pairs a < b and antisymmetry supplies the rest.
    """

    def __init__(self, entries: Optional[Mapping[Tuple[Generator, Generator], ParamScalar]] = None):
        self._entries: Dict[Tuple[Generator, Generator], ParamScalar] = {}
        for (a, b), value in (entries or {}).items():
            value = ParamScalar(value)
            if not value:
                continue
            if a.sector != b.sector:
                raise ValueError(f"cross-sector bracket [{a}, {b}] must vanish")
            if a == b:
                raise ValueError(f"[{a}, {a}] must vanish")
            if a < b:
                self._entries[(a, b)] = value
            else:
                self._entries[(b, a)] = -value
        self._product_cache: Dict[Tuple[Monomial, Generator], Terms] = {}
        self._lock = threading.Lock()

    @classmethod
    def canonical(cls) -> "CommutationTable":
        """[rᵢ, kⱼ] = [qᵢ, λqⱼ] = [pᵢ, λpⱼ] = iδᵢⱼ in every sector."""
        entries = {}
        for sector in Sector:
            pairs = (
                [(Kind.POSITION, Kind.MOMENTUM)]
                if sector.is_quantum
                else [(Kind.POSITION, Kind.LAMBDA_Q), (Kind.MOMENTUM, Kind.LAMBDA_P)]
            )
            for left, right in pairs:
                for axis in AXES:
                    entries[(Generator(sector, left, axis), Generator(sector, right, axis))] = I
        return cls(entries)

    def bracket(self, a: Generator, b: Generator) -> ParamScalar:
        if a < b:
            return self._entries.get((a, b), ZERO)
        if b < a:
            value = self._entries.get((b, a))
            return -value if value is not None else ZERO
        return ZERO

    def entries(self) -> Iterable[Tuple[Generator, Generator, ParamScalar]]:
        for (a, b), value in sorted(self._entries.items(), key=lambda item: (item[0][0].sort_key, item[0][1].sort_key)):
            yield a, b, value

    # ----- normal ordering -----

    def times_generator(self, monomial: Monomial, y: Generator) -> Terms:
        """Normal-ordered expansion of monomial·y."""
        key = (monomial, y)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        result = self._times_generator(monomial, y)
        with self._lock:
            self._product_cache[key] = result
        return result

    def _times_generator(self, monomial: Monomial, y: Generator) -> Terms:
        if not monomial:
            return {((y, 1),): ONE}
        head, (x, exp) = monomial[:-1], monomial[-1]
        if x == y:
            return {head + ((x, exp + 1),): ONE}
        if x < y:
            return {monomial + ((y, 1),): ONE}

        # head·x^e·y = (head·y)·x^e + e[x, y]·head·x^(e-1)
        result: Terms = {}
        for mono, coeff in self.times_generator(head, y).items():
            _accumulate(result, mono + ((x, exp),), coeff)
        bracket = self.bracket(x, y)
        if bracket:
            tail = head + ((x, exp - 1),) if exp > 1 else head
            _accumulate(result, tail, bracket * exp)
        return result

    def multiply_monomials(self, left: Monomial, right: Monomial) -> Terms:
        result: Terms = {left: ONE}
        for g, exp in right:
            for _ in range(exp):
                step: Terms = {}
                for mono, coeff in result.items():
                    for out, c in self.times_generator(mono, g).items():
                        _accumulate(step, out, coeff * c)
                result = step
        return result

    def cache_size(self) -> int:
        return len(self._product_cache)


DEFAULT_TABLE = CommutationTable.canonical()
