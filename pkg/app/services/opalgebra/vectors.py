"""Three-component vector helpers over OperatorExpr."""

from typing import Callable, Tuple, Union

from app.services.opalgebra.generators import AXES, Generator, Kind, Sector
from app.services.opalgebra.operator_expr import OperatorExpr, add, mul
from app.services.opalgebra.param_scalar import ParamScalar, RationalLike

Vector = Tuple[OperatorExpr, OperatorExpr, OperatorExpr]


def levi_civita(i: int, j: int, k: int) -> int:
    """ε_ijk for axes numbered 1..3."""
    return (i - j) * (j - k) * (k - i) // 2


def vector(kind: Kind, sector: Sector) -> Vector:
    return tuple(OperatorExpr.generator(Generator(sector, kind, axis)) for axis in AXES)


def R(sector: Sector = Sector.QUANTUM) -> Vector:
    return vector(Kind.POSITION, sector)


def K(sector: Sector = Sector.QUANTUM) -> Vector:
    return vector(Kind.MOMENTUM, sector)


def Q(sector: Sector = Sector.CLASSICAL) -> Vector:
    return vector(Kind.POSITION, sector)


def P(sector: Sector = Sector.CLASSICAL) -> Vector:
    return vector(Kind.MOMENTUM, sector)


def LQ(sector: Sector = Sector.CLASSICAL) -> Vector:
    return vector(Kind.LAMBDA_Q, sector)


def LP(sector: Sector = Sector.CLASSICAL) -> Vector:
    return vector(Kind.LAMBDA_P, sector)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(add(x, y) for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(add(x, -y) for x, y in zip(a, b))


def vscale(a: Vector, factor: Union[ParamScalar, RationalLike]) -> Vector:
    return tuple(x.scale(factor) for x in a)


def vmap(a: Vector, fn: Callable[[OperatorExpr], OperatorExpr]) -> Vector:
    return tuple(fn(x) for x in a)


def dot(a: Vector, b: Vector) -> OperatorExpr:
    """Σᵢ aᵢbᵢ with the left factor kept on the left."""
    result = OperatorExpr.zero()
    for x, y in zip(a, b):
        result = add(result, mul(x, y))
    return result


def symmetrized_dot(a: Vector, b: Vector) -> OperatorExpr:
    """½ Σᵢ (aᵢbᵢ + bᵢaᵢ); Hermitian whenever a and b are."""
    return add(dot(a, b), dot(b, a)).scale(ParamScalar.gaussian(1) / 2)


def cross(a: Vector, b: Vector) -> Vector:
    """(a × b)ᵢ = ε_ijk aⱼ bₖ."""
    components = []
    for i in AXES:
        total = OperatorExpr.zero()
        for j in AXES:
            for k in AXES:
                sign = levi_civita(i, j, k)
                if sign:
                    total = add(total, mul(a[j - 1], b[k - 1]).scale(sign))
        components.append(total)
    return tuple(components)


def zero_vector() -> Vector:
    return (OperatorExpr.zero(),) * 3
