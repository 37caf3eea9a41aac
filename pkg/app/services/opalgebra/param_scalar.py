"""
Exact parameter scalars.

ParamScalar is the coefficient field of every symbolic operator: rational
functions of the physical parameters with Gaussian-rational coefficients.
It is backed by sympy's sparse fraction field, whose elements are kept in
cancelled form with a canonical denominator unit, so equal values share one
stored representation.
"""

import logging
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.fields import FracElement, field

from app.core.exceptions import InvalidParameterError, ParameterPoleError

logger = logging.getLogger(__name__)

PARAMETER_NAMES: Tuple[str, ...] = ("m", "M", "m1", "m2", "M1", "M2", "t")

PARAM_FIELD, *_PARAM_GENS = field(",".join(PARAMETER_NAMES), QQ_I)
_PARAM_RING = PARAM_FIELD.ring
_PARAM_INDEX = {name: i for i, name in enumerate(PARAMETER_NAMES)}

_SUPERSCRIPTS = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")

RationalLike = Union[int, Fraction]
ScalarLike = Union["ParamScalar", int, Fraction]


def _to_qq(value: RationalLike):
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _format_rational(value, unicode: bool) -> str:
    num, den = int(value.numerator), int(value.denominator)
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def _format_gaussian(coeff, unicode: bool) -> Tuple[str, bool]:
    """Render a Gaussian rational; returns (text, is_compound)."""
    imag = "i" if unicode else "I"
    mul = "·" if unicode else "*"
    re, im = coeff.x, coeff.y
    if not im:
        return _format_rational(re, unicode), False
    if im == 1:
        im_text = imag
    elif im == -1:
        im_text = f"-{imag}"
    else:
        im_text = f"{_format_rational(im, unicode)}{mul}{imag}"
    if not re:
        return im_text, False
    sign = " - " if im < 0 else " + "
    im_abs = im_text[1:] if im_text.startswith("-") else im_text
    return f"{_format_rational(re, unicode)}{sign}{im_abs}", True


def _format_monomial(exponents: Tuple[int, ...], unicode: bool) -> str:
    mul = "·" if unicode else "*"
    factors = []
    for name, exp in zip(PARAMETER_NAMES, exponents):
        if exp == 0:
            continue
        if exp == 1:
            factors.append(name)
        elif unicode:
            factors.append(f"{name}{str(exp).translate(_SUPERSCRIPTS)}")
        else:
            factors.append(f"{name}^{exp}")
    return mul.join(factors)


def _format_poly(poly, unicode: bool) -> Tuple[str, int]:
    """Render a polynomial; returns (text, number of terms)."""
    mul = "·" if unicode else "*"
    terms = poly.terms()
    if not terms:
        return "0", 0
    pieces = []
    for index, (exponents, coeff) in enumerate(terms):
        monomial = _format_monomial(exponents, unicode)
        negative = (not coeff.y and coeff.x < 0) or (not coeff.x and coeff.y < 0)
        if negative:
            coeff = -coeff
        coeff_text, compound = _format_gaussian(coeff, unicode)
        if compound:
            coeff_text = f"({coeff_text})"
        if not monomial:
            body = coeff_text
        elif coeff == QQ_I.one:
            body = monomial
        else:
            body = f"{coeff_text}{mul}{monomial}"
        if index == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces), len(terms)


class ParamScalar:
    """Exact complex rational function of the parameters m, M, m1, m2, M1, M2, t.

    All parameters are real, so complex conjugation acts on the coefficients only.
    Instances are immutable and hashable.
    """

    __slots__ = ("_value",)

    def __init__(self, value: Union[ScalarLike, FracElement] = 0):
        if isinstance(value, ParamScalar):
            frac = value._value
        elif isinstance(value, FracElement):
            frac = value
        elif isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            frac = PARAM_FIELD(QQ_I(_to_qq(value)))
        else:
            raise TypeError(f"cannot build a ParamScalar from {type(value).__name__}")
        object.__setattr__(self, "_value", frac)

    def __setattr__(self, name, value):
        raise AttributeError("ParamScalar is immutable")

    # ----- constructors -----

    @classmethod
    def parameter(cls, name: str) -> "ParamScalar":
        """The scalar for a named physical parameter."""
        try:
            return cls(PARAM_FIELD.gens[_PARAM_INDEX[name]])
        except KeyError:
            raise InvalidParameterError(f"Unknown parameter '{name}'", field="parameter", value=name)

    @classmethod
    def gaussian(cls, real: RationalLike, imag: RationalLike = 0) -> "ParamScalar":
        return cls(PARAM_FIELD(QQ_I(_to_qq(real), _to_qq(imag))))

    @classmethod
    def from_gaussian(cls, value) -> "ParamScalar":
        """Wrap a QQ_I element."""
        return cls(PARAM_FIELD(value))

    @classmethod
    def coerce(cls, value: Union[ScalarLike, str]) -> "ParamScalar":
        """Accept a ParamScalar, an exact rational or a parameter name."""
        if isinstance(value, str):
            return cls.parameter(value)
        return cls(value)

    # ----- arithmetic -----

    def _other(self, other):
        if isinstance(other, ParamScalar):
            return other._value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PARAM_FIELD(QQ_I(_to_qq(other)))
        return None

    def __add__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        return ParamScalar(self._value + value)

    __radd__ = __add__

    def __sub__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        return ParamScalar(self._value - value)

    def __rsub__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        return ParamScalar(value - self._value)

    def __mul__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        return ParamScalar(self._value * value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        if not value:
            raise ParameterPoleError("Division by a vanishing parameter expression")
        return ParamScalar(self._value / value)

    def __rtruediv__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        if not self._value:
            raise ParameterPoleError("Division by a vanishing parameter expression")
        return ParamScalar(value / self._value)

    def __neg__(self):
        return ParamScalar(-self._value)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ParamScalar(1) / (self ** -exponent)
        return ParamScalar(self._value ** exponent)

    # ----- comparison -----

    def __eq__(self, other):
        value = self._other(other)
        if value is None:
            return NotImplemented
        return self._value.numer * value.denom == value.numer * self._value.denom

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self._value.numer, self._value.denom))

    def __bool__(self):
        return bool(self._value.numer)

    # ----- structure -----

    @property
    def numerator(self):
        return self._value.numer

    @property
    def denominator(self):
        return self._value.denom

    @property
    def is_constant(self) -> bool:
        return self._value.numer.is_ground and self._value.denom.is_ground

    @property
    def is_real(self) -> bool:
        return self == self.conjugate()

    def free_parameters(self) -> Tuple[str, ...]:
        used = set()
        for poly in (self._value.numer, self._value.denom):
            for exponents in poly.keys():
                used.update(i for i, e in enumerate(exponents) if e)
        return tuple(PARAMETER_NAMES[i] for i in sorted(used))

    def conjugate(self) -> "ParamScalar":
        numer = _PARAM_RING.from_dict(
            {mon: QQ_I(c.x, -c.y) for mon, c in self._value.numer.items()}
        )
        denom = _PARAM_RING.from_dict(
            {mon: QQ_I(c.x, -c.y) for mon, c in self._value.denom.items()}
        )
        return ParamScalar(PARAM_FIELD.new(numer, denom))

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "ParamScalar":
        """Evaluate bound parameters at exact rationals; others stay symbolic.

        Raises:
            ParameterPoleError: the denominator vanishes at the bindings
            InvalidParameterError: a binding names an unknown parameter
        """
        numer, denom = self._value.numer, self._value.denom
        for name, value in bindings.items():
            if name not in _PARAM_INDEX:
                raise InvalidParameterError(f"Unknown parameter '{name}'", field="parameter", value=name)
            index = _PARAM_INDEX[name]
            point = QQ_I(_to_qq(value))
            numer = numer.subs(index, point)
            denom = denom.subs(index, point)
            if not denom:
                raise ParameterPoleError(
                    f"Denominator {self.to_dsl()} vanishes at the given parameter values",
                    bindings={k: str(v) for k, v in bindings.items()},
                )
        return ParamScalar(PARAM_FIELD.new(numer, denom))

    def to_gaussian(self):
        """Return the QQ_I value of a constant scalar."""
        if not self.is_constant:
            raise InvalidParameterError(
                f"Scalar {self.to_dsl()} still depends on parameters {self.free_parameters()}",
                field="scalar",
            )
        return self._value.numer.const() / self._value.denom.const()

    def to_complex(self) -> complex:
        value = self.to_gaussian()
        return complex(float(value.x), float(value.y))

    # ----- printing -----

    def _render(self, unicode: bool) -> Tuple[str, bool]:
        numer_text, numer_terms = _format_poly(self._value.numer, unicode)
        denom = self._value.denom
        if denom == _PARAM_RING.one:
            compound = numer_terms > 1 or " " in numer_text
            return numer_text, compound
        denom_text, denom_terms = _format_poly(denom, unicode)
        if numer_terms > 1 or " " in numer_text:
            numer_text = f"({numer_text})"
        if denom_terms > 1 or any(op in denom_text for op in ("*", "·", "/", " ")):
            denom_text = f"({denom_text})"
        return f"{numer_text}/{denom_text}", True

    def to_dsl(self) -> str:
        """ASCII form accepted by the expression parser."""
        return self._render(unicode=False)[0]

    def to_unicode(self) -> str:
        return self._render(unicode=True)[0]

    def needs_parentheses(self) -> bool:
        """Whether the printed form must be grouped when used as a factor."""
        return self._render(unicode=False)[1]

    def __repr__(self):
        return f"ParamScalar({self.to_dsl()})"

    __str__ = to_dsl


ZERO = ParamScalar(0)
ONE = ParamScalar(1)
I = ParamScalar.gaussian(0, 1)


def rational(numerator: int, denominator: int = 1) -> ParamScalar:
    if denominator == 0:
        raise ParameterPoleError("Rational literal with zero denominator")
    return ParamScalar(Fraction(numerator, denominator))


def parameters(names: Iterable[str]) -> Tuple[ParamScalar, ...]:
    return tuple(ParamScalar.parameter(name) for name in names)
