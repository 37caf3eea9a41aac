"""
Strang-split propagator for Ĥ_T = k²/2M + (p/m)λq + g1(x−q)² + g2(k/M − p/m)² + g3(x−q)λp.

Each group of terms is diagonal in one mixed representation, so every factor
is a unit-modulus phase:

    position        (x, q, p)     g1 (x−q)²
    q-frequency     (x, κq, p)    (p/m) κq
    p-frequency     (x, q, κp)    g3 (x−q) κp
    x-frequency     (κx, q, p)    κx²/2M + g2 (κx/M − p/m)²

A step applies half steps of the first three groups in that order, the full
x-frequency step, then the half steps in reverse.
"""

import logging
from functools import lru_cache
from typing import Callable, List, Optional

import numpy as np
import scipy.fft

from app.core.config import settings
from app.core.exceptions import SimulationDivergenceError
from app.models.galilei_schemas import GridSpec, HamiltonianSpec
from app.services.dynamics.grid import HybridState, broadcast, coordinates, frequencies

logger = logging.getLogger(__name__)

Factor = Callable[[np.ndarray], np.ndarray]


class SplitStepPropagator:
    """Phase factors for one (grid, Hamiltonian, dt), precomputed once."""

    def __init__(self, grid: GridSpec, hamiltonian: HamiltonianSpec, workers: Optional[int] = None):
        self.grid = grid
        self.hamiltonian = hamiltonian
        self.workers = workers or settings.FFT_WORKERS
        self.dt = grid.dt

        x, q, p = (broadcast(coordinates(axis), i) for i, axis in enumerate((grid.x, grid.q, grid.p)))
        kx, kq, kp = (broadcast(frequencies(axis), i) for i, axis in enumerate((grid.x, grid.q, grid.p)))
        M, m = hamiltonian.quantum_mass, hamiltonian.classical_mass
        g1, g2, g3 = hamiltonian.g1, hamiltonian.g2, hamiltonian.g3
        half = 0.5 * self.dt

        self._position_half = np.exp(-1j * half * g1 * (x - q) ** 2) if g1 else None
        self._q_half = np.exp(-1j * half * (p / m) * kq)
        self._p_half = np.exp(-1j * half * g3 * (x - q) * kp) if g3 else None
        x_generator = kx ** 2 / (2 * M)
        if g2:
            x_generator = x_generator + g2 * (kx / M - p / m) ** 2
        self._x_full = np.exp(-1j * self.dt * x_generator)

        self._half_steps = self._build_half_steps()
        logger.debug(
            f"Propagator ready: grid {grid.shape}, dt={self.dt}, "
            f"couplings {hamiltonian.interaction_terms or 'none'}"
        )

    def _in_frequency(self, axis: int, phase: np.ndarray) -> Factor:
        workers = self.workers

        def apply(psi: np.ndarray) -> np.ndarray:
            spectrum = scipy.fft.fft(psi, axis=axis, workers=workers)
            return scipy.fft.ifft(spectrum * phase, axis=axis, workers=workers)

        return apply

    def _build_half_steps(self) -> List[Factor]:
        steps: List[Factor] = []
        if self._position_half is not None:
            position = self._position_half
            steps.append(lambda psi: psi * position)
        steps.append(self._in_frequency(1, self._q_half))
        if self._p_half is not None:
            steps.append(self._in_frequency(2, self._p_half))
        return steps

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """One Strang step on a raw amplitude array."""
        for factor in self._half_steps:
            psi = factor(psi)
        psi = self._in_frequency(0, self._x_full)(psi)
        for factor in reversed(self._half_steps):
            psi = factor(psi)
        return psi

    def step(self, state: HybridState, index: int = 0) -> HybridState:
        """Advance a state by dt.

        Raises:
            SimulationDivergenceError: the amplitude stops being finite
        """
        psi = self.apply(state.amplitude)
        time = state.time + self.dt
        if not np.isfinite(psi).all():
            raise SimulationDivergenceError(
                f"Non-finite amplitude after step {index} (t={time:.6g})",
                step=index,
                time=time,
            )
        return state.with_amplitude(psi, time)


@lru_cache(maxsize=8)
def propagator_for(grid: GridSpec, hamiltonian: HamiltonianSpec) -> SplitStepPropagator:
    return SplitStepPropagator(grid, hamiltonian)


def step(state: HybridState, hamiltonian: HamiltonianSpec) -> HybridState:
    """One Strang step of length state.grid.dt."""
    return propagator_for(state.grid, hamiltonian).step(state)
