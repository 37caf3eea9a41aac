"""Free classical transport by characteristics, independent of the spectral stepper."""

import logging
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline

from app.core.exceptions import InvalidParameterError
from app.models.galilei_schemas import GridSpec
from app.services.dynamics.grid import coordinates

logger = logging.getLogger(__name__)

Density = Union[np.ndarray, Callable[[np.ndarray, np.ndarray], np.ndarray]]


def _wrap(values: np.ndarray, half_width: float) -> np.ndarray:
    return (values + half_width) % (2 * half_width) - half_width


def characteristics_oracle(rho0: Density, grid: GridSpec, mass: float, t: float) -> np.ndarray:
    """ρ(q, p, t) = ρ₀(q − p t/m, p) on the (q, p) grid.

    rho0 is either a callable of (q, p) arrays, evaluated exactly at the
    periodically wrapped feet of the characteristics, or an array on the grid,
    interpolated along q with a periodic cubic spline.
    """
    if mass <= 0:
        raise InvalidParameterError("Classical mass must be positive", field="mass", value=mass)
    q = coordinates(grid.q)
    p = coordinates(grid.p)
    feet = _wrap(q[:, None] - p[None, :] * t / mass, grid.q.half_width)

    if callable(rho0):
        return np.asarray(rho0(feet, np.broadcast_to(p[None, :], feet.shape)), dtype=float)

    rho0 = np.asarray(rho0, dtype=float)
    if rho0.shape != (grid.q.points, grid.p.points):
        raise InvalidParameterError(
            f"Density shape {rho0.shape} does not match the (q, p) grid",
            field="rho0",
            value=str(rho0.shape),
        )
    if t == 0:
        return rho0.copy()
    nodes = np.append(q, grid.q.half_width)
    closed = np.vstack([rho0, rho0[:1]])
    spline = CubicSpline(nodes, closed, bc_type="periodic", axis=0)
    result = np.empty_like(rho0)
    for j in range(p.size):
        result[:, j] = spline(feet[:, j])[:, j]
    return result
