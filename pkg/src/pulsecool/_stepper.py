"""Compiled RK4 marches for the moment system and the nonlinear means.

Kept free of envelope logic: callers precompute kernel/envelope tables at the
step nodes and midpoints.  No fastmath: the moment flow preserves the
commutator combinations through exact cancellation, and reassociation would
turn that structural zero into visible drift.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _moment_deriv(C, ma, mb, t, F, kappa, gamma_m, g_m, omega_m, D):
    G = g_m * F
    Gc = np.conj(G)
    ep = np.exp(1j * omega_m * t)
    em = np.conj(ep)

    M = np.zeros((4, 4), dtype=np.complex128)
    M[0, 0] = -kappa
    M[0, 2] = 1j * G * em
    M[0, 3] = 1j * G * ep
    M[1, 1] = -kappa
    M[1, 2] = -1j * Gc * em
    M[1, 3] = -1j * Gc * ep
    M[2, 0] = 1j * Gc * ep
    M[2, 1] = 1j * G * ep
    M[2, 2] = -gamma_m
    M[3, 0] = -1j * Gc * em
    M[3, 1] = -1j * G * em
    M[3, 3] = -gamma_m

    dC = np.empty((4, 4), dtype=np.complex128)
    for i in range(4):
        for j in range(4):
            acc = D[i, j]
            for k in range(4):
                acc += M[i, k] * C[k, j] + C[i, k] * M[j, k]
            dC[i, j] = acc

    dma = -kappa * ma + 1j * (G * em * mb + G * ep * np.conj(mb)) - kappa * F
    dmb = (
        -gamma_m * mb
        + 1j * ep * (G * np.conj(ma) + Gc * ma)
        + 1j * g_m * ep * (F.real * F.real + F.imag * F.imag)
    )
    return dC, dma, dmb


@njit(cache=True)
def run_moments(
    C0,
    ma0,
    mb0,
    F_starts,
    F_mid,
    F_ends,
    t0,
    dt,
    n_steps,
    stride,
    kappa,
    gamma_m,
    g_m,
    omega_m,
    D,
):
    """March (C, <a>, <b>) across the grid, sampling every ``stride`` steps.

    Returns sampled C (n_samples,4,4), means (n_samples each), and the index
    of the first non-finite sample (-1 if none; the march stops there).
    """
    n_samples = n_steps // stride + 1
    C_out = np.empty((n_samples, 4, 4), dtype=np.complex128)
    ma_out = np.empty(n_samples, dtype=np.complex128)
    mb_out = np.empty(n_samples, dtype=np.complex128)

    C = C0.copy()
    ma = ma0
    mb = mb0
    C_out[0] = C
    ma_out[0] = ma
    mb_out[0] = mb

    s = 1
    for i in range(n_steps):
        t = t0 + i * dt
        F1 = F_starts[i]
        Fm = F_mid[i]
        F2 = F_ends[i]

        k1C, k1a, k1b = _moment_deriv(C, ma, mb, t, F1, kappa, gamma_m, g_m, omega_m, D)
        k2C, k2a, k2b = _moment_deriv(
            C + (dt / 2.0) * k1C, ma + (dt / 2.0) * k1a, mb + (dt / 2.0) * k1b,
            t + dt / 2.0, Fm, kappa, gamma_m, g_m, omega_m, D,
        )
        k3C, k3a, k3b = _moment_deriv(
            C + (dt / 2.0) * k2C, ma + (dt / 2.0) * k2a, mb + (dt / 2.0) * k2b,
            t + dt / 2.0, Fm, kappa, gamma_m, g_m, omega_m, D,
        )
        k4C, k4a, k4b = _moment_deriv(
            C + dt * k3C, ma + dt * k3a, mb + dt * k3b,
            t + dt, F2, kappa, gamma_m, g_m, omega_m, D,
        )
        C = C + (dt / 6.0) * (k1C + 2.0 * k2C + 2.0 * k3C + k4C)
        ma = ma + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        mb = mb + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)

        if (i + 1) % stride == 0:
            finite = np.isfinite(ma.real) and np.isfinite(ma.imag)
            finite = finite and np.isfinite(mb.real) and np.isfinite(mb.imag)
            for r in range(4):
                for c in range(4):
                    finite = (
                        finite
                        and np.isfinite(C[r, c].real)
                        and np.isfinite(C[r, c].imag)
                    )
            C_out[s] = C
            ma_out[s] = ma
            mb_out[s] = mb
            if not finite:
                return C_out, ma_out, mb_out, s
            s += 1

    return C_out, ma_out, mb_out, -1


@njit(cache=True)
def run_means_nonlinear(
    a0,
    b0,
    E_starts,
    E_mid,
    E_ends,
    t0,
    dt,
    n_steps,
    stride,
    kappa,
    gamma_m,
    g_m,
    omega_m,
    delta,
):
    """March the factorized nonlinear means, sampling every ``stride`` steps."""
    n_samples = n_steps // stride + 1
    a_out = np.empty(n_samples, dtype=np.complex128)
    b_out = np.empty(n_samples, dtype=np.complex128)
    a = a0
    b = b0
    a_out[0] = a
    b_out[0] = b

    s = 1
    for i in range(n_steps):
        t = t0 + i * dt
        k1a, k1b = _mean_deriv(a, b, t, E_starts[i], kappa, gamma_m, g_m, omega_m, delta)
        k2a, k2b = _mean_deriv(
            a + (dt / 2.0) * k1a, b + (dt / 2.0) * k1b, t + dt / 2.0, E_mid[i],
            kappa, gamma_m, g_m, omega_m, delta,
        )
        k3a, k3b = _mean_deriv(
            a + (dt / 2.0) * k2a, b + (dt / 2.0) * k2b, t + dt / 2.0, E_mid[i],
            kappa, gamma_m, g_m, omega_m, delta,
        )
        k4a, k4b = _mean_deriv(
            a + dt * k3a, b + dt * k3b, t + dt, E_ends[i],
            kappa, gamma_m, g_m, omega_m, delta,
        )
        a = a + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        b = b + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)

        if (i + 1) % stride == 0:
            finite = (
                np.isfinite(a.real)
                and np.isfinite(a.imag)
                and np.isfinite(b.real)
                and np.isfinite(b.imag)
            )
            a_out[s] = a
            b_out[s] = b
            if not finite:
                return a_out, b_out, s
            s += 1

    return a_out, b_out, -1


@njit(cache=True)
def _mean_deriv(a, b, t, E, kappa, gamma_m, g_m, omega_m, delta):
    ep = np.exp(1j * omega_m * t)
    em = np.conj(ep)
    da = (
        -kappa * a
        + 1j * g_m * (em * b + ep * np.conj(b)) * a
        + E * np.exp(1j * delta * t)
    )
    db = -gamma_m * b + 1j * g_m * ep * (a.real * a.real + a.imag * a.imag)
    return da, db
