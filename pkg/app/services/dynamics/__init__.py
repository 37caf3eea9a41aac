from app.services.dynamics.grid import HybridState, coordinates, frequencies, init_gaussian
from app.services.dynamics.observables import ObservableRecord, classical_marginal, observables, tail_mass
from app.services.dynamics.oracle import characteristics_oracle
from app.services.dynamics.propagator import SplitStepPropagator, step
from app.services.dynamics.simulation import CSV_COLUMNS, TimeSeries, evolve, run_simulation

__all__ = [
    "HybridState",
    "coordinates",
    "frequencies",
    "init_gaussian",
    "ObservableRecord",
    "classical_marginal",
    "observables",
    "tail_mass",
    "characteristics_oracle",
    "SplitStepPropagator",
    "step",
    "CSV_COLUMNS",
    "TimeSeries",
    "evolve",
    "run_simulation",
]
