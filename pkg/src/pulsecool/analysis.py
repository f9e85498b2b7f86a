"""Post-processing and schedule design on phonon-number trajectories.

The raw n_m(t) rides on a mechanical-frequency ripple, so every decision
made here (dip location, plateau levels) goes through a period-wide moving
average first; the reported dip values are then read from the raw series at
the detected location, since the physical quantity of interest is the actual
phonon number reached, not the ripple-averaged one.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .drive import DriveEnvelope
from .dynamics import Trajectory, simulate
from .errors import DipNotFoundError, PulsecoolError, ValidationError
from .numerics import Grid
from .params import SystemParams, amplitude_for_intensity

DEFAULT_HYSTERESIS = 0.01
# pulse durations are quoted to this grain, matching how schedules are stated
DESIGN_GRAIN = 0.01

WORKERS_ENV_VAR = "PULSECOOL_SWEEP_WORKERS"


@dataclass(frozen=True)
class DipReport:
    """First phonon-number minimum of a run.

    t_dip and n_dip are NaN when ``found`` is false (a series that only
    decreases has no dip to report; that is a result, not an error).
    """

    t_dip: float
    n_dip: float
    window: float
    found: bool


@dataclass(frozen=True)
class SweepRow:
    """One point of an intensity sweep; ``note`` carries per-row failures."""

    J: float
    E: float
    t_dip: float
    n_dip: float
    found: bool
    note: str = ""


def default_window(params: SystemParams) -> float:
    """One mechanical period, the shortest window that nulls the ripple."""
    return 2.0 * math.pi / params.omega_m


def period_average(traj: Trajectory, window: float | None = None) -> np.ndarray:
    """Centered moving average of n_m, one value per retained sample.

    Averages the piecewise-linear interpolant of the sampled series over
    [t - w/2, t + w/2], with windows truncated at the trajectory ends.  The
    integral form (rather than a discrete boxcar) keeps the residual of a
    pure omega_m ripple far below its amplitude even though the window edges
    fall between samples.
    """
    w = default_window(traj.params) if window is None else float(window)
    h = traj.sample_spacing
    if w < h:
        raise ValidationError(f"window {w!r} is below the sample spacing {h!r}")
    t = traj.t
    y = traj.n_m
    n = len(y)
    # cumulative integral of the interpolant at the sample nodes
    T = np.empty(n)
    T[0] = 0.0
    np.cumsum(0.5 * h * (y[1:] + y[:-1]), out=T[1:])

    def cum_at(tau: np.ndarray) -> np.ndarray:
        # integral from t[0] to tau, exact for the interpolant
        k = np.clip(np.floor((tau - t[0]) / h).astype(int), 0, n - 2)
        theta = (tau - t[k]) / h
        return T[k] + h * (theta * y[k] + 0.5 * theta**2 * (y[k + 1] - y[k]))

    lo = np.maximum(t - w / 2.0, t[0])
    hi = np.minimum(t + w / 2.0, t[-1])
    return (cum_at(hi) - cum_at(lo)) / (hi - lo)


def first_dip(
    traj: Trajectory,
    window: float | None = None,
    hysteresis: float = DEFAULT_HYSTERESIS,
) -> DipReport:
    """Locate the first minimum of n_m(t), ripple-rejected.

    Detection scans the period-averaged series for the first local minimum
    confirmed by a rise of at least hysteresis * (n_th - minimum); the
    reported dip is then the raw-series minimum within half a window of the
    detected location.  Smoothing alone would both bias the dip time early
    (the post-dip rise is steeper than the approach) and report a ripple
    mean instead of the phonon number actually reached.
    """
    w = default_window(traj.params) if window is None else float(window)
    if traj.t[-1] - traj.t[0] < w:
        raise ValidationError("trajectory shorter than one averaging window")
    smoothed = period_average(traj, w)
    n_ref = traj.params.n_th
    best = math.inf
    best_i = 0
    confirmed = False
    for i, v in enumerate(smoothed):
        if v < best:
            best = v
            best_i = i
        elif v - best >= hysteresis * (n_ref - best):
            confirmed = True
            break
    if not confirmed:
        return DipReport(t_dip=math.nan, n_dip=math.nan, window=w, found=False)
    center = traj.t[best_i]
    mask = np.abs(traj.t - center) <= w / 2.0
    local = np.flatnonzero(mask)
    j = local[np.argmin(traj.n_m[local])]
    return DipReport(
        t_dip=float(traj.t[j]), n_dip=float(traj.n_m[j]), window=w, found=True
    )


def probe_horizon(J: float, dt: float, stride: int) -> float:
    """Probe duration for a dip search at intensity J.

    The dip time shrinks roughly as 1/J, so the horizon adapts downward with
    J, clamped to [1, 20] and rounded up to a whole number of output samples.
    """
    span = min(max(5.0 / J + 1.0, 1.0), 20.0)
    quantum = dt * stride
    return math.ceil(span / quantum - 1e-9) * quantum


def _dip_for_amplitude(
    params: SystemParams, E: float, duration: float, grid: Grid
) -> tuple[DipReport, Trajectory]:
    probe_grid = Grid(0.0, duration, grid.dt, grid.sample_stride)
    traj = simulate(params, DriveEnvelope.square(E, duration), probe_grid)
    return first_dip(traj), traj


def _sweep_worker(args) -> SweepRow:
    params, J, pulse_duration, grid = args
    E = amplitude_for_intensity(params, J)
    duration = (
        pulse_duration
        if pulse_duration is not None
        else probe_horizon(J, grid.dt, grid.sample_stride)
    )
    try:
        dip, _ = _dip_for_amplitude(params, E, duration, grid)
    except PulsecoolError as exc:
        return SweepRow(J=J, E=E, t_dip=math.nan, n_dip=math.nan, found=False, note=str(exc))
    return SweepRow(J=J, E=E, t_dip=dip.t_dip, n_dip=dip.n_dip, found=dip.found)


def sweep_workers(n_jobs: int) -> int:
    """Worker count for a sweep, honoring the override environment variable."""
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is not None:
        try:
            k = int(raw)
        except ValueError as exc:
            raise ValidationError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}") from exc
        if k < 1:
            raise ValidationError(f"{WORKERS_ENV_VAR} must be >= 1, got {k}")
        return min(k, n_jobs)
    return min(os.cpu_count() or 1, n_jobs)


def j_sweep(
    params: SystemParams,
    J_values,
    pulse_duration: float | None = None,
    grid: Grid | None = None,
) -> list[SweepRow]:
    """Dip time and value as a function of effective intensity J.

    Each J runs an independent single-pulse probe (duration adapted to J
    unless pinned by ``pulse_duration``); rows keep the input order, which
    must be ascending.  Per-row failures are reported in the row, not raised.
    """
    J_values = [float(J) for J in J_values]
    if not J_values:
        raise ValidationError("J_values must be non-empty")
    if any(not (math.isfinite(J) and J > 0) for J in J_values):
        raise ValidationError("J values must be positive")
    if sorted(J_values) != J_values:
        raise ValidationError("J values must be sorted ascending")
    if grid is None:
        grid = Grid(0.0, 1.0)
    jobs = [(params, J, pulse_duration, grid) for J in J_values]
    workers = sweep_workers(len(jobs))
    if workers == 1:
        return [_sweep_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_worker, jobs))


def design_schedule(
    params: SystemParams,
    E: float,
    t2: float,
    n_pulses: int | None,
    grid: Grid,
) -> DriveEnvelope:
    """Turn a probe run into a pulse-train schedule.

    Simulates one long pulse at amplitude E over the probe grid, reads off
    the first dip, rounds its time *down* to the schedule grain, and returns
    the square train (E, t1, t2, n_pulses).  Stopping the drive at the dip
    is the whole design rule: past the dip the drive starts heating.
    """
    if not E > 0:
        raise ValidationError(f"design requires E > 0, got {E!r}")
    duration = grid.t_end - grid.t_start
    dip, _ = _dip_for_amplitude(params, E, duration, grid)
    if not dip.found:
        raise DipNotFoundError(
            f"no phonon-number dip within the probe horizon {duration:g}; "
            "increase the horizon or the drive amplitude"
        )
    t1 = math.floor(dip.t_dip / DESIGN_GRAIN + 1e-9) * DESIGN_GRAIN
    t1 = round(t1, 10)
    if t1 <= 0:
        raise DipNotFoundError(
            f"dip at t={dip.t_dip:g} is below the schedule grain {DESIGN_GRAIN}"
        )
    return DriveEnvelope.train(E=E, t1=t1, t2=t2, n_pulses=n_pulses)


def heating_between_pulses(gamma_m: float, n_th: float, delta_t: float) -> float:
    """Thermal phonons regained during a drive-off interval of length delta_t."""
    if delta_t < 0:
        raise ValidationError(f"delta_t must be >= 0, got {delta_t!r}")
    return 2.0 * gamma_m * n_th * delta_t


def cw_cooling_limit(params: SystemParams) -> float:
    """Steady phonon number reachable with a continuous drive."""
    return params.gamma_m * params.n_th / params.kappa
