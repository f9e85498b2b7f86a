"""Linearized moment dynamics of the pulsed optomechanical system.

The state is the pair of complex means (<a>, <b>) plus the 4x4 correlation
matrix C_ij = <v_i v_j> over v = (da, da+, db, db+), where d denotes the
fluctuation around the mean.  C evolves by a time-dependent Lyapunov flow

    dC/dt = M(t) C + C M^T(t) + D,

with M^T the *plain* transpose: C is an operator-ordered correlation matrix,
not a symmetrized covariance, and conjugate-transposing here is the single
easiest way to wreck every result while keeping plausible-looking curves.

The physical outputs are the thermal phonon number n_m = Re C_43 and the
mechanical displacement X_m = sqrt(2) Re<b>.  The commutator combinations
C_12 - C_21 and C_34 - C_43 are exact constants of the flow, so their drift
is a free integration-error monitor and is checked after every run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _stepper
from .drive import DriveEnvelope, pulse_active, stepper_tables
from .errors import NonFiniteStateError, NumericalError
from .numerics import Grid, relative_deviation, rk4_step
from .params import SystemParams

# permitted drift of the commutator invariants over a full run
COMM_TOL = 1e-6
# floor for n_m and occupation positivity checks
NEG_TOL = 1e-9


@dataclass(frozen=True)
class MomentState:
    """Means and correlation matrix at one instant."""

    mean_a: complex
    mean_b: complex
    C: np.ndarray

    @property
    def n_m(self) -> float:
        return float(self.C[3, 2].real)


@dataclass(frozen=True)
class Trajectory:
    """Decimated time series of a moment simulation.

    Arrays are aligned: t[k] goes with n_m[k], X_m[k], mean_a[k], mean_b[k],
    pulse_on[k], and the full correlation snapshot C[k].
    """

    t: np.ndarray
    n_m: np.ndarray
    X_m: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray
    pulse_on: np.ndarray
    C: np.ndarray
    params: SystemParams
    envelope: DriveEnvelope
    grid: Grid

    def __len__(self) -> int:
        return len(self.t)

    @property
    def n_a(self) -> np.ndarray:
        """Cavity fluctuation occupancy <da+ da> = Re C_21."""
        return self.C[:, 1, 0].real

    @property
    def sample_spacing(self) -> float:
        return self.grid.dt * self.grid.sample_stride

    def commutator_defects(self) -> tuple[float, float]:
        """Max drift of (C_12 - C_21) - 1 and (C_34 - C_43) - 1."""
        da = np.abs(self.C[:, 0, 1] - self.C[:, 1, 0] - 1.0)
        db = np.abs(self.C[:, 2, 3] - self.C[:, 3, 2] - 1.0)
        return float(da.max()), float(db.max())

    def final_state(self) -> np.ndarray:
        """Flattened complex state of the last sample (means then C)."""
        return np.concatenate(
            ([self.mean_a[-1], self.mean_b[-1]], self.C[-1].ravel())
        )


def drift_matrix(params: SystemParams, F: complex, t: float) -> np.ndarray:
    """The 4x4 drift M(t) for kernel value F at time t.

    Rows 2 and 4 are the conjugates of rows 1 and 3 with the mode/adjoint
    column swap; the off-diagonal blocks carry the swap (cooling) and
    two-mode-squeezing (heating) channels.
    """
    if not (np.isfinite(F.real) and np.isfinite(F.imag)):
        raise NumericalError("drift matrix requires finite F", t=t)
    G = params.g_m * F
    Gc = np.conj(G)
    ep = np.exp(1j * params.omega_m * t)
    em = np.conj(ep)
    k, g = params.kappa, params.gamma_m
    return np.array(
        [
            [-k, 0.0, 1j * G * em, 1j * G * ep],
            [0.0, -k, -1j * Gc * em, -1j * Gc * ep],
            [1j * Gc * ep, 1j * G * ep, -g, 0.0],
            [-1j * Gc * em, -1j * G * em, 0.0, -g],
        ],
        dtype=complex,
    )


def diffusion_matrix(params: SystemParams) -> np.ndarray:
    """Constant diffusion D from the cavity and mechanical baths.

    The bath phases attached to the cavity noise cancel in the only nonzero
    second-order products, so D carries no time dependence.
    """
    D = np.zeros((4, 4), dtype=complex)
    D[0, 1] = 2.0 * params.kappa * (params.n_c + 1.0)
    D[1, 0] = 2.0 * params.kappa * params.n_c
    D[2, 3] = 2.0 * params.gamma_m * (params.n_th + 1.0)
    D[3, 2] = 2.0 * params.gamma_m * params.n_th
    return D


def initial_state(params: SystemParams) -> MomentState:
    """Thermal mechanical mode, cavity vacuum (plus n_c), zero means."""
    C = np.zeros((4, 4), dtype=complex)
    C[0, 1] = params.n_c + 1.0
    C[1, 0] = params.n_c
    C[2, 3] = params.n_th + 1.0
    C[3, 2] = params.n_th
    return MomentState(mean_a=0.0 + 0.0j, mean_b=0.0 + 0.0j, C=C)


def simulate(params: SystemParams, env: DriveEnvelope, grid: Grid) -> Trajectory:
    """Integrate means and correlations across the grid.

    The correlation flow is independent of the means (the fluctuation system
    is homogeneous); means are carried for X_m and for comparison against the
    nonlinear model.  Raises on non-finite states and on commutator drift
    beyond COMM_TOL, both of which indicate the step cannot resolve the run.
    """
    F_starts, F_mid, F_ends = stepper_tables(env, params.delta, grid)
    state0 = initial_state(params)
    C_out, ma_out, mb_out, bad = _stepper.run_moments(
        state0.C,
        state0.mean_a,
        state0.mean_b,
        F_starts,
        F_mid,
        F_ends,
        grid.t_start,
        grid.dt,
        grid.n_steps,
        grid.sample_stride,
        params.kappa,
        params.gamma_m,
        params.g_m,
        params.omega_m,
        diffusion_matrix(params),
    )
    t = grid.sample_times()
    if bad >= 0:
        raise NonFiniteStateError("moment state became non-finite", t=float(t[bad]))

    traj = Trajectory(
        t=t,
        n_m=C_out[:, 3, 2].real.copy(),
        X_m=math.sqrt(2.0) * mb_out.real,
        mean_a=ma_out,
        mean_b=mb_out,
        pulse_on=np.array([pulse_active(env, float(tk)) for tk in t], dtype=bool),
        C=C_out,
        params=params,
        envelope=env,
        grid=grid,
    )
    da, db = traj.commutator_defects()
    if max(da, db) > COMM_TOL:
        raise NumericalError(
            f"commutator invariants drifted by {max(da, db):.3g} (> {COMM_TOL:g}); "
            "the step size does not resolve this run"
        )
    floor = -NEG_TOL * max(1.0, params.n_th)
    if traj.n_m.min() < floor:
        raise NumericalError(
            f"n_m reached {traj.n_m.min():.3g}, below the roundoff floor {floor:.3g}"
        )
    return traj


def convergence_deviation(params: SystemParams, env: DriveEnvelope, grid: Grid) -> float:
    """Relative final-state deviation between runs at dt and dt/2."""
    coarse = simulate(params, env, grid)
    fine = simulate(params, env, grid.halved())
    return relative_deviation(coarse.final_state(), fine.final_state())


def reference_simulate(params: SystemParams, env: DriveEnvelope, grid: Grid) -> Trajectory:
    """Pure-numpy twin of :func:`simulate`, for cross-checking the compiled path.

    Same equations assembled through :func:`drift_matrix` instead of the
    stepper's inlined arithmetic; roughly a thousand times slower.
    """
    F_starts, F_mid, F_ends = stepper_tables(env, params.delta, grid)
    D = diffusion_matrix(params)
    state0 = initial_state(params)

    def unpack(y):
        return y[0], y[1], y[2:].reshape(4, 4)

    def rhs_at(t, y, F):
        ma, mb, C = unpack(y)
        M = drift_matrix(params, complex(F), t)
        G = params.g_m * complex(F)
        ep = np.exp(1j * params.omega_m * t)
        em = np.conj(ep)
        dC = M @ C + C @ M.T + D
        dma = -params.kappa * ma + 1j * (G * em * mb + G * ep * np.conj(mb)) - params.kappa * F
        dmb = (
            -params.gamma_m * mb
            + 1j * ep * (G * np.conj(ma) + np.conj(G) * ma)
            + 1j * params.g_m * ep * abs(complex(F)) ** 2
        )
        out = np.empty(18, dtype=complex)
        out[0], out[1] = dma, dmb
        out[2:] = dC.ravel()
        return out

    y = np.empty(18, dtype=complex)
    y[0], y[1] = state0.mean_a, state0.mean_b
    y[2:] = state0.C.ravel()

    n_samples = grid.sample_count()
    C_out = np.empty((n_samples, 4, 4), dtype=complex)
    ma_out = np.empty(n_samples, dtype=complex)
    mb_out = np.empty(n_samples, dtype=complex)
    C_out[0], ma_out[0], mb_out[0] = state0.C, y[0], y[1]
    s = 1
    for i in range(grid.n_steps):
        t = grid.t_start + i * grid.dt
        # the three kernel values an RK4 step consumes
        F1, Fm, F2 = F_starts[i], F_mid[i], F_ends[i]

        def f(tt, yy):
            if tt == t:
                return rhs_at(tt, yy, F1)
            if tt == t + grid.dt:
                return rhs_at(tt, yy, F2)
            return rhs_at(tt, yy, Fm)

        y = rk4_step(f, y, t, grid.dt)
        if (i + 1) % grid.sample_stride == 0:
            ma_out[s], mb_out[s] = y[0], y[1]
            C_out[s] = y[2:].reshape(4, 4)
            s += 1

    t_samples = grid.sample_times()
    return Trajectory(
        t=t_samples,
        n_m=C_out[:, 3, 2].real.copy(),
        X_m=math.sqrt(2.0) * mb_out.real,
        mean_a=ma_out,
        mean_b=mb_out,
        pulse_on=np.array([pulse_active(env, float(tk)) for tk in t_samples], dtype=bool),
        C=C_out,
        params=params,
        envelope=env,
        grid=grid,
    )


def conjugation_defect(C: np.ndarray) -> float:
    """Max violation of the conjugation structure a healthy C must carry.

    Checks C_22 = conj(C_11), C_44 = conj(C_33), C_24 = conj(C_13),
    C_23 = conj(C_14), realness of C_21 and C_43, and the commuting-pair
    symmetries C_13=C_31, C_14=C_41, C_23=C_32, C_24=C_42.  Accepts a single
    4x4 matrix or a stack.
    """
    C = np.asarray(C)
    if C.ndim == 2:
        C = C[None, :, :]
    pairs = [((1, 1), (0, 0)), ((3, 3), (2, 2)), ((1, 3), (0, 2)), ((1, 2), (0, 3))]
    worst = 0.0
    for (r1, c1), (r2, c2) in pairs:
        worst = max(worst, float(np.abs(C[:, r1, c1] - np.conj(C[:, r2, c2])).max()))
    for r, c in [(0, 2), (0, 3), (1, 2), (1, 3)]:
        worst = max(worst, float(np.abs(C[:, r, c] - C[:, c, r]).max()))
    worst = max(worst, float(np.abs(C[:, 1, 0].imag).max()))
    worst = max(worst, float(np.abs(C[:, 3, 2].imag).max()))
    return worst
