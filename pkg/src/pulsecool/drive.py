"""Pulse envelopes and the accumulated-field kernel F(t).

The drive enters the linearized dynamics only through

    F(t) = integral_0^t E(tau) e^{i delta tau} d tau,

evaluated in closed form for square pulses and trains, and by incremental
Simpson quadrature for Gaussian or caller-supplied envelopes.  Square kinds
reset F to zero outside active windows (the kernel is re-derived per pulse,
not carried as a running integral); the quadrature kinds accumulate from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureError, ValidationError

KINDS = ("square_single", "square_train", "gaussian", "custom")

# Richardson tolerance for the quadrature path: the half-step and full-step
# Simpson accumulations must agree to this, relative to the kernel magnitude
QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class DriveEnvelope:
    """A drive profile E(t) >= 0 of one of four kinds.

    Square kinds are strictly zero outside their active windows, which are
    half-open: (0, t1] for the single pulse and, for trains, the analogous
    window inside each repetition period t1 + t2.
    """

    kind: str
    E: float = 0.0
    t1: float = 0.0
    t2: float = 0.0
    n_pulses: int | None = None
    sigma: float = 0.0
    j0: float = 0.0
    custom_sampler: Callable[[float], complex] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown envelope kind {self.kind!r}; expected one of {KINDS}")
        if self.kind != "custom":
            if not (math.isfinite(self.E) and self.E >= 0):
                raise ValidationError(f"E must be >= 0, got {self.E!r}")
        if self.kind in ("square_single", "square_train"):
            if not (math.isfinite(self.t1) and self.t1 > 0):
                raise ValidationError(f"t1 must be > 0, got {self.t1!r}")
        if self.kind == "square_train":
            if not (math.isfinite(self.t2) and self.t2 >= 0):
                raise ValidationError(f"t2 must be >= 0, got {self.t2!r}")
            if self.n_pulses is not None and self.n_pulses < 1:
                raise ValidationError(f"n_pulses must be >= 1 or None, got {self.n_pulses!r}")
        if self.kind == "gaussian" and not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"sigma must be > 0, got {self.sigma!r}")
        if self.kind == "custom" and self.custom_sampler is None:
            raise ValidationError("custom envelope requires custom_sampler")

    @classmethod
    def square(cls, E: float, t1: float) -> "DriveEnvelope":
        return cls(kind="square_single", E=E, t1=t1)

    @classmethod
    def train(cls, E: float, t1: float, t2: float, n_pulses: int | None = None) -> "DriveEnvelope":
        return cls(kind="square_train", E=E, t1=t1, t2=t2, n_pulses=n_pulses)

    @classmethod
    def gaussian(cls, E: float, sigma: float, j0: float) -> "DriveEnvelope":
        return cls(kind="gaussian", E=E, sigma=sigma, j0=j0)

    @classmethod
    def custom(cls, sampler: Callable[[float], complex]) -> "DriveEnvelope":
        return cls(kind="custom", custom_sampler=sampler)

    @property
    def period(self) -> float:
        """Repetition period of a train; meaningless for other kinds."""
        return self.t1 + self.t2


@dataclass(frozen=True)
class FieldKernel:
    """Kernel value F(t) plus whether the envelope is active at t."""

    value: complex
    pulse_on: bool


def _train_tau(env: DriveEnvelope, t: float) -> tuple[float, int]:
    """Time within the current repetition period, and the pulse index j."""
    period = env.t1 + env.t2
    j = int(math.floor(t / period))
    return t - j * period, j


def envelope_at(env: DriveEnvelope, t: float) -> complex:
    """E(t) for any kind; square windows are half-open (0, t1]."""
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t!r}")
    if env.kind == "square_single":
        return env.E if 0 < t <= env.t1 else 0.0
    if env.kind == "square_train":
        tau, j = _train_tau(env, t)
        if env.n_pulses is not None and j >= env.n_pulses:
            return 0.0
        return env.E if 0 < tau <= env.t1 else 0.0
    if env.kind == "gaussian":
        return env.E * math.exp(-(env.sigma * (t - env.j0)) ** 2)
    return complex(env.custom_sampler(t))


def pulse_active(env: DriveEnvelope, t: float) -> bool:
    """Whether t falls in a drive window, with *closed* boundaries.

    Trajectory samples flag the pulse state per row; using closed windows
    here makes the t=0 row of a pulse that starts at 0 read as "on", which
    is what a plot of the schedule should show.  envelope_at itself keeps
    the half-open convention.
    """
    if env.kind == "square_single":
        return 0 <= t <= env.t1
    if env.kind == "square_train":
        tau, j = _train_tau(env, t)
        if env.n_pulses is not None and j >= env.n_pulses:
            return False
        return 0 <= tau <= env.t1
    if env.kind == "gaussian":
        return True
    return envelope_at(env, t) != 0


def _square_kernel(E: float, delta: float, tau) -> complex:
    # iE/delta * (1 - e^{i delta tau}); tau may be scalar or ndarray
    return 1j * E / delta * (1.0 - np.exp(1j * delta * tau))


def kernel_at(env: DriveEnvelope, delta: float, t: float, *, quad_step: float = 5e-5) -> FieldKernel:
    """F(t) for a single time point.

    Closed form for square kinds; for gaussian/custom kinds this integrates
    from scratch, so prefer :func:`kernel_table` inside loops.
    """
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t!r}")
    on = envelope_at(env, t) != 0
    if env.kind in ("square_single", "square_train"):
        if delta == 0:
            raise ValidationError("closed-form square kernel requires delta != 0")
        if env.kind == "square_single":
            value = _square_kernel(env.E, delta, t) if t <= env.t1 else 0.0
        else:
            tau, j = _train_tau(env, t)
            done = env.n_pulses is not None and j >= env.n_pulses
            value = _square_kernel(env.E, delta, tau) if (tau <= env.t1 and not done) else 0.0
        return FieldKernel(value=complex(value), pulse_on=on)
    n = max(1, int(math.ceil(t / quad_step)))
    nodes, mid = _quadrature_kernel(env, delta, 0.0, t / n, n)
    return FieldKernel(value=complex(nodes[-1]), pulse_on=on)


def _sample_envelope(env: DriveEnvelope, times: np.ndarray) -> np.ndarray:
    """Envelope values times the e^{i delta t} phase, vectorized when possible."""
    if env.kind == "gaussian":
        amp = env.E * np.exp(-(env.sigma * (times - env.j0)) ** 2)
    else:
        amp = np.array([complex(env.custom_sampler(float(t))) for t in times])
    return amp


def _simpson_cumulative(fvals: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral over panels of width h.

    fvals holds integrand samples at spacing h/2 (node, midpoint, node, ...);
    returns the running integral at the panel nodes, length (len-1)//2 + 1.
    """
    ends = fvals[0:-1:2] + 4.0 * fvals[1::2] + fvals[2::2]
    out = np.empty(len(ends) + 1, dtype=complex)
    out[0] = 0.0
    np.cumsum(ends * (h / 6.0), out=out[1:])
    return out


def _quadrature_kernel(
    env: DriveEnvelope, delta: float, t0: float, h: float, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """F at t0 + k*h for k=0..n, plus panel midpoints, by Simpson quadrature.

    Integrates E(tau) e^{i delta tau} from 0.  Each h-panel uses two Simpson
    sub-panels (samples every h/4); a parallel single-panel accumulation at
    the same nodes provides the Richardson consistency check.
    """
    if t0 != 0.0:
        raise ValidationError("quadrature kernel accumulates from t=0")
    times = t0 + np.arange(4 * n + 1) * (h / 4.0)
    f = _sample_envelope(env, times) * np.exp(1j * delta * times)
    fine = _simpson_cumulative(f, h / 2.0)          # values at spacing h/2
    coarse = _simpson_cumulative(f[::2], h)         # values at spacing h
    scale = 1.0 + np.abs(fine[::2])
    err = np.abs(fine[::2] - coarse)
    bad = np.nonzero(err > QUAD_RTOL * scale)[0]
    if bad.size:
        k = int(bad[0])
        raise QuadratureError(
            f"kernel quadrature failed its consistency check (error {err[k]:.3g} "
            f"vs allowed {QUAD_RTOL * scale[k]:.3g}); refine the step or smooth the envelope",
            t=float(times[4 * k]),
        )
    return fine[::2], fine[1::2]


def kernel_table(
    env: DriveEnvelope, delta: float, t0: float, dt: float, n_steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """F on an integration grid: values at the n_steps+1 nodes and at midpoints.

    The integrator needs F at t, t+dt/2, and t+dt for every step; computing
    the whole table up front keeps the stepper free of envelope logic.
    """
    if env.kind in ("square_single", "square_train"):
        if delta == 0:
            raise ValidationError("closed-form square kernel requires delta != 0")
        nodes_t = t0 + np.arange(n_steps + 1) * dt
        mid_t = nodes_t[:-1] + dt / 2.0
        return _square_table(env, delta, nodes_t), _square_table(env, delta, mid_t)
    return _quadrature_kernel(env, delta, t0, dt, n_steps)


def _square_table(
    env: DriveEnvelope, delta: float, times: np.ndarray, *, edge: float = 0.0
) -> np.ndarray:
    """Vectorized closed-form F over an array of times.

    ``edge`` shifts the active-window test by a fraction of a step: F jumps to
    zero at a pulse end, and the stage value an integrator needs at the jump
    node depends on which side of it the step lives.  edge < 0 selects the
    right limit (node treated as already past the pulse).
    """
    if env.kind == "square_single":
        active = times <= env.t1 + edge
        return np.where(active, _square_kernel(env.E, delta, times), 0.0).astype(complex)
    period = env.t1 + env.t2
    j = np.floor(times / period)
    tau = times - j * period
    active = tau <= env.t1 + edge
    if env.n_pulses is not None:
        active &= j < env.n_pulses
    return np.where(active, _square_kernel(env.E, delta, tau), 0.0).astype(complex)


def stepper_tables(
    env: DriveEnvelope, delta: float, grid
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-step kernel stage values (starts, midpoints, ends) for RK4.

    F is continuous except at square pulse ends, where Eq-of-motion stages
    falling on the jump must take the value from inside their own step:
    the k1 stage of the step after a pulse sees F=0, while the k4 stage of
    the step ending at the pulse end sees the full kernel.  When boundaries
    align with grid nodes (the supported configuration) this makes every
    step see an analytic F and keeps the integrator at full order.
    """
    t0, dt, n = grid.t_start, grid.dt, grid.n_steps
    if env.kind in ("square_single", "square_train"):
        if delta == 0:
            raise ValidationError("closed-form square kernel requires delta != 0")
        starts_t = t0 + np.arange(n) * dt
        mid_t = starts_t + dt / 2.0
        ends_t = t0 + np.arange(1, n + 1) * dt
        starts = _square_table(env, delta, starts_t, edge=-dt / 4.0)
        mids = _square_table(env, delta, mid_t)
        ends = _square_table(env, delta, ends_t, edge=dt / 4.0)
        return starts, mids, ends
    nodes, mids = _quadrature_kernel(env, delta, t0, dt, n)
    return nodes[:-1], mids, nodes[1:]


def envelope_tables(env: DriveEnvelope, grid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-step envelope stage values (starts, midpoints, ends) for RK4.

    Square envelopes are piecewise constant, so all three stages of a step
    take the value from the step interior (exact when pulse boundaries align
    with grid nodes); smooth envelopes are sampled at the stage times.
    """
    t0, dt, n = grid.t_start, grid.dt, grid.n_steps
    mid_t = t0 + np.arange(n) * dt + dt / 2.0
    if env.kind in ("square_single", "square_train"):
        if env.kind == "square_single":
            active = (mid_t > 0) & (mid_t <= env.t1)
        else:
            period = env.t1 + env.t2
            j = np.floor(mid_t / period)
            tau = mid_t - j * period
            active = (tau > 0) & (tau <= env.t1)
            if env.n_pulses is not None:
                active &= j < env.n_pulses
        mids = np.where(active, env.E, 0.0).astype(complex)
        return mids, mids, mids
    nodes_t = t0 + np.arange(n + 1) * dt
    nodes = _sample_envelope(env, nodes_t).astype(complex)
    mids = _sample_envelope(env, mid_t).astype(complex)
    return nodes[:-1], mids, nodes[1:]
