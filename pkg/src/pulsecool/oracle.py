"""Nonlinear mean-field model used to validate the linearized dynamics.

The full equations of motion couple <a> and <b> through the bare coupling
g_m with no linearization; closing them under the factorization
<b+ a> = <b+><a> gives a two-variable nonlinear ODE system.  It cannot
produce phonon numbers, but its displacement X_m(t) is an independent
prediction the linearized model must track wherever linearization is valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _stepper
from .drive import DriveEnvelope, envelope_tables
from .errors import GridMismatchError, NonFiniteStateError
from .numerics import Grid
from .params import SystemParams


@dataclass(frozen=True)
class MeanTrajectory:
    """Decimated nonlinear-mean time series."""

    t: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray
    X_m: np.ndarray
    params: SystemParams
    envelope: DriveEnvelope
    grid: Grid

    def __len__(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class DeviationReport:
    """Displacement deviation between the linear and nonlinear models."""

    max_abs: float
    rms: float
    nrms: float
    window: tuple[float, float]


def simulate_nonlinear(params: SystemParams, env: DriveEnvelope, grid: Grid) -> MeanTrajectory:
    """Integrate the factorized nonlinear means across the grid."""
    E_starts, E_mid, E_ends = envelope_tables(env, grid)
    a_out, b_out, bad = _stepper.run_means_nonlinear(
        0.0 + 0.0j,
        0.0 + 0.0j,
        E_starts,
        E_mid,
        E_ends,
        grid.t_start,
        grid.dt,
        grid.n_steps,
        grid.sample_stride,
        params.kappa,
        params.gamma_m,
        params.g_m,
        params.omega_m,
        params.delta,
    )
    t = grid.sample_times()
    if bad >= 0:
        raise NonFiniteStateError("nonlinear mean state became non-finite", t=float(t[bad]))
    return MeanTrajectory(
        t=t,
        mean_a=a_out,
        mean_b=b_out,
        X_m=math.sqrt(2.0) * b_out.real,
        params=params,
        envelope=env,
        grid=grid,
    )


def driven_cavity_closed_form(params: SystemParams, E: float, t: np.ndarray) -> np.ndarray:
    """<a>(t) for g_m = 0 under a constant drive E from t=0.

    The decoupled cavity is a driven damped linear mode; this is the exact
    solution the numerical path must reproduce.
    """
    k, d = params.kappa, params.delta
    return E * (np.exp(1j * d * t) - np.exp(-k * t)) / (k + 1j * d)


def compare_displacement(
    linear, nonlinear: MeanTrajectory, window: tuple[float, float] | None = None
) -> DeviationReport:
    """Deviation metrics between the two models' X_m over a time window.

    nrms normalizes the RMS deviation by the RMS of the linear X_m, making
    runs of different drive strength comparable.
    """
    if len(linear.t) != len(nonlinear.t) or not np.array_equal(linear.t, nonlinear.t):
        raise GridMismatchError("linear and nonlinear trajectories use different grids")
    lo, hi = window if window is not None else (linear.t[0], linear.t[-1])
    mask = (linear.t >= lo) & (linear.t <= hi)
    if not mask.any():
        raise GridMismatchError(f"window [{lo}, {hi}] contains no samples")
    dx = linear.X_m[mask] - nonlinear.X_m[mask]
    rms_lin = float(np.sqrt(np.mean(linear.X_m[mask] ** 2)))
    rms = float(np.sqrt(np.mean(dx**2)))
    return DeviationReport(
        max_abs=float(np.max(np.abs(dx))),
        rms=rms,
        nrms=rms / rms_lin if rms_lin > 0 else math.inf,
        window=(float(lo), float(hi)),
    )
