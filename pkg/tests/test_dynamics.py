import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import GridResolutionError, InvalidParameterError, SimulationDivergenceError
from app.models.galilei_schemas import AxisGrid, GridSpec, HamiltonianSpec, InitialPacket, SimulationConfig
from app.services.dynamics import (
    CSV_COLUMNS,
    HybridState,
    SplitStepPropagator,
    characteristics_oracle,
    classical_marginal,
    coordinates,
    evolve,
    init_gaussian,
    observables,
    run_simulation,
    step,
    tail_mass,
)


def grid_of(x, q, p, dt, steps=0) -> GridSpec:
    """Grid from (points, half_width) pairs per axis."""
    return GridSpec(
        x=AxisGrid(points=x[0], half_width=x[1]),
        q=AxisGrid(points=q[0], half_width=q[1]),
        p=AxisGrid(points=p[0], half_width=p[1]),
        dt=dt,
        steps=steps,
    )


def gaussian_density(q0, p0, sigma_q, sigma_p):
    def rho(q, p):
        return np.exp(-((q - q0) ** 2) / (2 * sigma_q ** 2) - ((p - p0) ** 2) / (2 * sigma_p ** 2)) / (
            2 * math.pi * sigma_q * sigma_p
        )

    return rho


def coupled_grid(dt: float = 0.01) -> GridSpec:
    return grid_of((64, 8.0), (64, 8.0), (64, 8.0), dt=dt)


COUPLED_PACKET = InitialPacket(x0=1.0, sigma_x=1.0, sigma_q=1.0, sigma_p=1.0)


def l2_distance(a: np.ndarray, b: np.ndarray, volume: float) -> float:
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) * volume))


# ===== GRID AND INITIAL STATE =====


def test_axis_points_must_be_power_of_two():
    with pytest.raises(ValidationError):
        AxisGrid(points=48, half_width=8.0)


def test_coordinates_are_periodic_cells():
    values = coordinates(AxisGrid(points=4, half_width=2.0))
    assert values.tolist() == [-2.0, -1.0, 0.0, 1.0]


def test_initial_packet_is_normalized(small_grid, wide_packet):
    state = init_gaussian(small_grid, wide_packet)
    assert state.amplitude.shape == (32, 32, 32)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.sum(classical_marginal(state)) * small_grid.q.spacing * small_grid.p.spacing == pytest.approx(1.0)


def test_under_resolved_packet_rejected(grid_factory):
    with pytest.raises(GridResolutionError) as excinfo:
        init_gaussian(grid_factory(points=16, half_width=8.0), InitialPacket(sigma_x=1.0, sigma_q=4.0, sigma_p=4.0))
    assert excinfo.value.details["axis"] == "x"


def test_state_shape_must_match_grid(small_grid):
    with pytest.raises(ValueError):
        HybridState(amplitude=np.zeros((2, 2, 2), dtype=complex), grid=small_grid)


def test_well_localized_packet_has_no_tail_mass():
    grid = grid_of((64, 8.0), (64, 8.0), (64, 8.0), dt=0.01)
    state = init_gaussian(grid, InitialPacket())
    assert tail_mass(state) < 1e-8


def test_observables_without_hamiltonian(small_grid, wide_packet):
    record = observables(init_gaussian(small_grid, wide_packet))
    assert math.isnan(record.energy)
    assert record.norm == pytest.approx(1.0)
    assert record.ktot == pytest.approx(record.k + record.p)


def test_symmetric_packet_has_zero_first_moments():
    state = init_gaussian(coupled_grid(), InitialPacket())
    record = observables(state)
    assert abs(record.x) < 1e-10
    assert abs(record.k) < 1e-10
    assert abs(record.q) < 1e-10
    assert abs(record.p) < 1e-10


def test_shifted_classical_packet_mean_position():
    state = init_gaussian(coupled_grid(), InitialPacket(q0=1.0))
    record = observables(state)
    assert record.q == pytest.approx(1.0, abs=1e-8)
    assert abs(record.p) < 1e-10


# ===== FREE DYNAMICS =====


def test_free_classical_transport_matches_characteristics():
    grid = grid_of((16, 8.0), (128, 16.0), (64, 4.0), dt=0.1)
    packet = InitialPacket(q0=0.5, p0=0.5, sigma_x=4.0, sigma_q=1.0, sigma_p=0.5)
    hamiltonian = HamiltonianSpec()
    series = evolve(init_gaussian(grid, packet), hamiltonian, steps=10, record_every=10)

    final = series.final_state
    assert final.time == pytest.approx(1.0)
    expected = characteristics_oracle(gaussian_density(0.5, 0.5, 1.0, 0.5), grid, hamiltonian.classical_mass, final.time)
    volume = grid.q.spacing * grid.p.spacing
    assert l2_distance(classical_marginal(final), expected, volume) < 1e-6


def test_free_classical_transport_on_cubic_grid():
    grid = grid_of((64, 8.0), (64, 8.0), (64, 4.0), dt=0.1)
    packet = InitialPacket(q0=0.0, p0=0.5, sigma_x=1.0, sigma_q=1.0, sigma_p=0.5)
    hamiltonian = HamiltonianSpec(classical_mass=1.0)
    series = evolve(init_gaussian(grid, packet), hamiltonian, steps=10, record_every=10)

    final = series.final_state
    assert final.amplitude.shape == (64, 64, 64)
    assert final.time == pytest.approx(1.0)
    expected = characteristics_oracle(gaussian_density(0.0, 0.5, 1.0, 0.5), grid, 1.0, final.time)
    volume = grid.q.spacing * grid.p.spacing
    assert l2_distance(classical_marginal(final), expected, volume) < 1e-6
    assert series.column("q")[-1] == pytest.approx(0.5, abs=1e-8)


def test_free_quantum_packet_moves_with_group_velocity():
    grid = grid_of((128, 12.0), (16, 8.0), (16, 8.0), dt=0.01)
    packet = InitialPacket(x0=0.0, k0=1.0, sigma_x=1.0, sigma_q=4.0, sigma_p=4.0)
    hamiltonian = HamiltonianSpec(quantum_mass=2.0)
    series = evolve(init_gaussian(grid, packet), hamiltonian, steps=50, record_every=50, check_tail_mass=False)

    x, k = series.column("x"), series.column("k")
    assert k[0] == pytest.approx(1.0, abs=1e-6)
    assert x[-1] - x[0] == pytest.approx(0.5 * 1.0 / 2.0, abs=1e-6)


# ===== COUPLED DYNAMICS =====


def test_velocity_coupling_conserves_momenta_and_energy():
    grid = grid_of((16, 8.0), (16, 8.0), (16, 8.0), dt=0.01)
    packet = InitialPacket(x0=1.0, p0=0.3, k0=0.5, sigma_x=4.0, sigma_q=4.0, sigma_p=4.0)
    hamiltonian = HamiltonianSpec(quantum_mass=1.0, classical_mass=2.0, g2=0.5)
    series = evolve(
        init_gaussian(grid, packet), hamiltonian, steps=10_000, record_every=1000, check_tail_mass=False
    )

    assert len(series) == 11
    assert series.drift("k") < 1e-10
    assert series.drift("p") < 1e-10
    assert series.drift("ktot") < 1e-10
    assert series.drift("energy") < 1e-9
    assert series.drift("norm") < 1e-10


def test_position_coupling_pushes_quantum_momentum():
    g1 = 0.1
    series = evolve(
        init_gaussian(coupled_grid(), COUPLED_PACKET),
        HamiltonianSpec(g1=g1),
        steps=10,
        record_every=10,
        check_tail_mass=False,
    )
    separation = series.column("x")[0] - series.column("q")[0]
    k = series.column("k")

    assert series.drift("p") < 1e-10
    assert k[-1] - k[0] == pytest.approx(-2 * g1 * separation * 0.1, rel=1e-2)
    assert series.drift("ktot") > 1e-3


def test_back_reaction_coupling_pushes_classical_momentum():
    g3 = 0.1
    series = evolve(
        init_gaussian(coupled_grid(), COUPLED_PACKET),
        HamiltonianSpec(g3=g3),
        steps=10,
        record_every=10,
        check_tail_mass=False,
    )
    separation = series.column("x")[0] - series.column("q")[0]
    p = series.column("p")
    assert p[-1] - p[0] == pytest.approx(g3 * separation * 0.1, rel=1e-2)
    assert series.drift("norm") < 1e-10


def test_strang_splitting_is_second_order():
    hamiltonian = HamiltonianSpec(g1=0.5)
    final = {}
    for dt in (0.04, 0.02, 0.01):
        steps = round(0.4 / dt)
        series = evolve(init_gaussian(coupled_grid(dt), COUPLED_PACKET), hamiltonian, steps=steps, record_every=steps)
        final[dt] = series.final_state

    volume = final[0.01].grid.cell_volume
    coarse = l2_distance(final[0.04].amplitude, final[0.02].amplitude, volume)
    fine = l2_distance(final[0.02].amplitude, final[0.01].amplitude, volume)
    order = math.log2(coarse / fine)
    assert 1.8 <= order <= 2.2


def test_recording_cadence(small_grid, wide_packet):
    series = evolve(init_gaussian(small_grid, wide_packet), HamiltonianSpec(), steps=10, record_every=5)
    assert series.column("t").tolist() == pytest.approx([0.0, 0.05, 0.1])
    with pytest.raises(ValueError):
        evolve(init_gaussian(small_grid, wide_packet), HamiltonianSpec(), steps=1, record_every=0)


def test_single_step_helper(small_grid, wide_packet):
    state = init_gaussian(small_grid, wide_packet)
    hamiltonian = HamiltonianSpec(g1=0.2)
    advanced = step(state, hamiltonian)
    assert advanced.time == pytest.approx(small_grid.dt)
    np.testing.assert_allclose(advanced.amplitude, SplitStepPropagator(small_grid, hamiltonian).apply(state.amplitude))


def test_non_finite_amplitude_aborts(small_grid):
    state = HybridState(amplitude=np.full(small_grid.shape, np.nan, dtype=complex), grid=small_grid)
    with pytest.raises(SimulationDivergenceError) as excinfo:
        SplitStepPropagator(small_grid, HamiltonianSpec()).step(state, index=7)
    assert excinfo.value.details["step"] == 7


# ===== ORACLE =====


def test_oracle_at_time_zero_returns_input(small_grid):
    rho = np.random.default_rng(3).random((32, 32))
    np.testing.assert_array_equal(characteristics_oracle(rho, small_grid, 1.0, 0.0), rho)


def test_oracle_spline_agrees_with_exact_feet():
    grid = grid_of((16, 8.0), (64, 8.0), (64, 4.0), dt=0.1)
    rho0 = gaussian_density(0.0, 0.0, 1.0, 0.5)
    q = coordinates(grid.q)[:, None]
    p = coordinates(grid.p)[None, :]
    sampled = rho0(q, np.broadcast_to(p, (q.size, p.size)))
    interpolated = characteristics_oracle(sampled, grid, 2.0, 0.5)
    exact = characteristics_oracle(rho0, grid, 2.0, 0.5)
    np.testing.assert_allclose(interpolated, exact, atol=1e-3)


def test_oracle_rejects_bad_input(small_grid):
    with pytest.raises(InvalidParameterError):
        characteristics_oracle(np.zeros((32, 32)), small_grid, 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        characteristics_oracle(np.zeros((8, 8)), small_grid, 1.0, 1.0)


# ===== DRIVER =====


def test_run_simulation_csv(grid_factory, wide_packet):
    config = SimulationConfig(
        grid=grid_factory(steps=4),
        hamiltonian=HamiltonianSpec(g1=0.1, g3=0.05),
        packet=wide_packet,
        record_every=2,
        check_tail_mass=False,
    )
    series = run_simulation(config)
    text = series.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    assert run_simulation(config).to_csv() == text


def test_run_simulation_writes_file(tmp_path, grid_factory, wide_packet):
    config = SimulationConfig(grid=grid_factory(steps=2), packet=wide_packet, check_tail_mass=False)
    output = tmp_path / "series.csv"
    run_simulation(config).to_csv(output)
    assert output.read_text().startswith("t,norm,x,k,q,p,ktot\n")


def test_energy_is_tracked_but_not_written(grid_factory, wide_packet):
    config = SimulationConfig(
        grid=grid_factory(steps=2),
        hamiltonian=HamiltonianSpec(g2=0.1),
        packet=wide_packet,
        check_tail_mass=False,
    )
    series = run_simulation(config)
    header = series.to_csv().split("\n", 1)[0]
    assert header == "t,norm,x,k,q,p,ktot"
    assert "energy" in series.frame.columns
    assert np.all(np.isfinite(series.column("energy")))
