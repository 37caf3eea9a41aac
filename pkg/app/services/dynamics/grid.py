"""
Discretization of the hybrid space L²(x) ⊗ L²(q, p).

Every axis is periodic with points -L + j·2L/N; the frequency grids are the
discrete Fourier duals 2π·fftfreq(N, 2L/N). Axis order in every amplitude
array is (x, q, p).
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import GridResolutionError
from app.models.galilei_schemas import AxisGrid, GridSpec, InitialPacket

logger = logging.getLogger(__name__)

AXIS_NAMES: Tuple[str, str, str] = ("x", "q", "p")


def coordinates(axis: AxisGrid) -> np.ndarray:
    return -axis.half_width + np.arange(axis.points) * axis.spacing


def frequencies(axis: AxisGrid) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(axis.points, d=axis.spacing)


def axis_grids(grid: GridSpec) -> Tuple[AxisGrid, AxisGrid, AxisGrid]:
    return (grid.x, grid.q, grid.p)


def broadcast(values: np.ndarray, axis: int) -> np.ndarray:
    """Reshape a 1D array to broadcast along one axis of a (x, q, p) array."""
    shape = [1, 1, 1]
    shape[axis] = values.size
    return values.reshape(shape)


@dataclass(frozen=True, eq=False)
class HybridState:
    """Joint amplitude Ψ(x, q, p) at one time."""

    amplitude: np.ndarray
    grid: GridSpec
    time: float = 0.0

    def __post_init__(self):
        if self.amplitude.shape != self.grid.shape:
            raise ValueError(f"amplitude shape {self.amplitude.shape} does not match grid {self.grid.shape}")

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitude) ** 2) * self.grid.cell_volume)

    def with_amplitude(self, amplitude: np.ndarray, time: Optional[float] = None) -> "HybridState":
        return replace(self, amplitude=amplitude, time=self.time if time is None else time)


def _check_resolution(name: str, axis: AxisGrid, sigma: float) -> None:
    points_per_sigma = sigma / axis.spacing
    if points_per_sigma < settings.MIN_POINTS_PER_SIGMA:
        raise GridResolutionError(
            f"Packet width {sigma} on axis {name} spans {points_per_sigma:.2f} grid spacings, "
            f"need at least {settings.MIN_POINTS_PER_SIGMA}",
            axis=name,
            points_per_sigma=points_per_sigma,
        )


def init_gaussian(grid: GridSpec, packet: InitialPacket) -> HybridState:
    """Normalized product packet φ(x)·χ(q, p).

    |φ|² and |χ|² are Gaussians with standard deviations sigma_x, sigma_q,
    sigma_p; φ carries the plane-wave factor exp(i k0 x).

    Raises:
        GridResolutionError: a width covers fewer than MIN_POINTS_PER_SIGMA spacings
    """
    centers = (packet.x0, packet.q0, packet.p0)
    sigmas = (packet.sigma_x, packet.sigma_q, packet.sigma_p)
    for name, axis, sigma in zip(AXIS_NAMES, axis_grids(grid), sigmas):
        _check_resolution(name, axis, sigma)

    factors = []
    for index, (axis, center, sigma) in enumerate(zip(axis_grids(grid), centers, sigmas)):
        values = coordinates(axis)
        factor = np.exp(-((values - center) ** 2) / (4 * sigma ** 2)).astype(np.complex128)
        if index == 0 and packet.k0:
            factor = factor * np.exp(1j * packet.k0 * values)
        factors.append(broadcast(factor, index))

    amplitude = factors[0] * factors[1] * factors[2]
    amplitude = amplitude / np.sqrt(np.sum(np.abs(amplitude) ** 2) * grid.cell_volume)
    logger.debug(f"Initialized {grid.shape} packet at x0={packet.x0}, q0={packet.q0}, p0={packet.p0}")
    return HybridState(amplitude=amplitude, grid=grid, time=0.0)
