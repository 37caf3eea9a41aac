import random
from typing import Callable, List

import pytest

from app.models.galilei_schemas import AxisGrid, GridSpec, InitialPacket
from app.services.opalgebra.generators import AXES, Generator, Kind, Sector
from app.services.opalgebra.operator_expr import OperatorExpr, linear_combination, normal_form
from app.services.opalgebra.param_scalar import ParamScalar

GENERATOR_POOL: List[Generator] = [
    Generator(sector, kind, axis)
    for sector, kinds in (
        (Sector.QUANTUM, (Kind.POSITION, Kind.MOMENTUM)),
        (Sector.CLASSICAL, (Kind.POSITION, Kind.MOMENTUM, Kind.LAMBDA_Q, Kind.LAMBDA_P)),
    )
    for kind in kinds
    for axis in AXES[:2]
]

COEFFICIENT_PARAMETERS = ("M", "m", "t")


def random_scalar(rng: random.Random) -> ParamScalar:
    value = ParamScalar.gaussian(rng.randint(-3, 3), rng.randint(-2, 2))
    if not value:
        value = ParamScalar.gaussian(1)
    if rng.random() < 0.3:
        value = value * ParamScalar.parameter(rng.choice(COEFFICIENT_PARAMETERS))
    return value


def random_operator(rng: random.Random, max_terms: int = 3, max_length: int = 3) -> OperatorExpr:
    """Sum of a few scaled products of generators drawn from a small pool."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        word = [rng.choice(GENERATOR_POOL) for _ in range(rng.randint(0, max_length))]
        terms.append((1, normal_form(word, random_scalar(rng))))
    return linear_combination(terms)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def operator_factory(rng) -> Callable[..., OperatorExpr]:
    return lambda **options: random_operator(rng, **options)


def make_grid(points: int = 32, half_width: float = 8.0, p_half_width: float = 8.0, dt: float = 0.01, steps: int = 0) -> GridSpec:
    return GridSpec(
        x=AxisGrid(points=points, half_width=half_width),
        q=AxisGrid(points=points, half_width=half_width),
        p=AxisGrid(points=points, half_width=p_half_width),
        dt=dt,
        steps=steps,
    )


@pytest.fixture
def small_grid() -> GridSpec:
    return make_grid()


@pytest.fixture
def wide_packet() -> InitialPacket:
    return InitialPacket(x0=1.0, q0=0.0, p0=0.0, sigma_x=2.0, sigma_q=2.0, sigma_p=2.0)


@pytest.fixture
def grid_factory() -> Callable[..., GridSpec]:
    return make_grid
