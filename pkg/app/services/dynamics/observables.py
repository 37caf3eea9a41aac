"""Expectation values and diagnostics of a HybridState."""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np
import scipy.fft

from app.core.config import settings
from app.models.galilei_schemas import HamiltonianSpec
from app.services.dynamics.grid import HybridState, broadcast, coordinates, frequencies

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    norm: float
    x: float
    k: float
    q: float
    p: float
    ktot: float
    energy: float
    tail_mass: float

    def as_row(self) -> Dict[str, float]:
        return asdict(self)


def _spectral_density(psi: np.ndarray, axis: int) -> np.ndarray:
    """|Ψ̃|² along one axis, scaled so it sums to the same total as |Ψ|²."""
    spectrum = scipy.fft.fft(psi, axis=axis, workers=settings.FFT_WORKERS)
    return np.abs(spectrum) ** 2 / psi.shape[axis]


def classical_marginal(state: HybridState) -> np.ndarray:
    """ρ(q, p) = ∫|Ψ|² dx on the (q, p) grid."""
    return np.sum(np.abs(state.amplitude) ** 2, axis=0) * state.grid.x.spacing


def tail_mass(state: HybridState, fraction: Optional[float] = None) -> float:
    """Largest probability held in the outer bands of any single axis."""
    fraction = settings.TAIL_FRACTION if fraction is None else fraction
    density = np.abs(state.amplitude) ** 2
    total = float(np.sum(density))
    if total == 0:
        return 0.0
    worst = 0.0
    for axis in range(3):
        n = density.shape[axis]
        band = max(1, math.ceil(fraction * n))
        profile = np.sum(density, axis=tuple(a for a in range(3) if a != axis))
        outer = float(np.sum(profile[:band]) + np.sum(profile[n - band:]))
        worst = max(worst, outer / total)
    return worst


def _energy(state: HybridState, hamiltonian: HamiltonianSpec, density: np.ndarray, total: float) -> float:
    grid = state.grid
    psi = state.amplitude
    x, q, p = (broadcast(coordinates(axis), i) for i, axis in enumerate((grid.x, grid.q, grid.p)))
    kx, kq, kp = (broadcast(frequencies(axis), i) for i, axis in enumerate((grid.x, grid.q, grid.p)))
    M, m = hamiltonian.quantum_mass, hamiltonian.classical_mass

    x_density = _spectral_density(psi, 0)
    q_density = _spectral_density(psi, 1)
    value = np.sum(x_density * kx ** 2) / (2 * M)
    value += np.sum(q_density * (p / m) * kq)
    if hamiltonian.g1:
        value += hamiltonian.g1 * np.sum(density * (x - q) ** 2)
    if hamiltonian.g2:
        value += hamiltonian.g2 * np.sum(x_density * (kx / M - p / m) ** 2)
    if hamiltonian.g3:
        value += hamiltonian.g3 * np.sum(_spectral_density(psi, 2) * (x - q) * kp)
    return float(value) / total


def observables(
    state: HybridState,
    hamiltonian: Optional[HamiltonianSpec] = None,
    check_tail_mass: bool = True,
) -> ObservableRecord:
    """Norm, first moments, ⟨k + p⟩, ⟨Ĥ_T⟩ and the tail-mass diagnostic.

    Moments are normalized by the current norm; ⟨k⟩ is taken in the x-frequency
    representation. energy is NaN when no Hamiltonian is given.
    """
    grid = state.grid
    density = np.abs(state.amplitude) ** 2
    total = float(np.sum(density))
    moments = []
    for axis, spec in enumerate((grid.x, grid.q, grid.p)):
        profile = np.sum(density, axis=tuple(a for a in range(3) if a != axis))
        moments.append(float(np.dot(profile, coordinates(spec))) / total)
    x_mean, q_mean, p_mean = moments

    k_profile = np.sum(_spectral_density(state.amplitude, 0), axis=(1, 2))
    k_mean = float(np.dot(k_profile, frequencies(grid.x))) / total

    energy = _energy(state, hamiltonian, density, total) if hamiltonian is not None else float("nan")
    tail = tail_mass(state)
    if check_tail_mass and tail > settings.TAIL_MASS_TOLERANCE:
        logger.warning(
            f"Tail mass {tail:.3e} at t={state.time:.6g} exceeds {settings.TAIL_MASS_TOLERANCE:.1e}; "
            f"the periodic grid may alias"
        )
    return ObservableRecord(
        t=state.time,
        norm=total * grid.cell_volume,
        x=x_mean,
        k=k_mean,
        q=q_mean,
        p=p_mean,
        ktot=k_mean + p_mean,
        energy=energy,
        tail_mass=tail,
    )
