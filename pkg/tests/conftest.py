"""Shared fixtures: stepper warmup and session-wide caches of expensive runs."""

import pytest

from pulsecool import DriveEnvelope, Grid, simulate, simulate_nonlinear
from pulsecool.analysis import j_sweep
from pulsecool.presets import BASE_PARAMS, FIG4_J_GRID, SIMULATE_PRESETS


@pytest.fixture(scope="session", autouse=True)
def warm_stepper():
    # first call per process compiles (or loads the cached) njit steppers;
    # keep that cost out of anything timed
    env = DriveEnvelope.square(1e5, 0.01)
    grid = Grid(0.0, 0.01, 1e-4, 1)
    simulate(BASE_PARAMS, env, grid)
    simulate_nonlinear(BASE_PARAMS, env, grid)


@pytest.fixture(scope="session")
def preset_traj(warm_stepper):
    """Lazy per-session cache: run each named preset at most once."""
    cache = {}

    def run(name):
        if name not in cache:
            env, grid = SIMULATE_PRESETS[name]
            cache[name] = simulate(BASE_PARAMS, env, grid)
        return cache[name]

    return run


@pytest.fixture(scope="session")
def fig2c_traj(preset_traj):
    return preset_traj("fig2c")


@pytest.fixture(scope="session")
def fig2a_traj(preset_traj):
    return preset_traj("fig2a")


@pytest.fixture(scope="session")
def fig5a_traj(preset_traj):
    return preset_traj("fig5a")


@pytest.fixture(scope="session")
def sweep_rows(warm_stepper):
    return j_sweep(BASE_PARAMS, FIG4_J_GRID)
