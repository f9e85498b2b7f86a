"""Named reproduction runs for the published figures.

Each preset bundles parameters, drive, grid, an output writer, and a
one-line summary with embedded sanity assertions, so `pulsecool preset
fig2c` regenerates a figure's data unattended and fails loudly if the
physics drifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .analysis import cw_cooling_limit, first_dip, j_sweep, period_average
from .drive import DriveEnvelope
from .dynamics import simulate
from .errors import ValidationError
from .numerics import Grid
from .oracle import compare_displacement, simulate_nonlinear
from .params import SystemParams

# parameters shared by every preset
BASE_PARAMS = SystemParams(omega_m=100.0, g_m=1e-4, gamma_m=1e-3, n_th=100.0)

FIG4_J_GRID = [0.25, 0.5, 1.0, 1.5, 2.5, 3.5, 5.0]


@dataclass(frozen=True)
class PresetResult:
    name: str
    files: list[Path]
    summary: str


def _simulate_presets() -> dict[str, tuple[DriveEnvelope, Grid]]:
    single = {
        "fig2a": (1.67e6, 6.0),
        "fig2b": (2.5e6, 4.0),
        "fig2c": (5e6, 2.0),
        "fig2d": (1e7, 1.0),
    }
    out: dict[str, tuple[DriveEnvelope, Grid]] = {}
    for name, (E, t1) in single.items():
        out[name] = (DriveEnvelope.square(E, t1), Grid(0.0, t1))
    out["fig2gauss"] = (
        DriveEnvelope.gaussian(E=1.67e7, sigma=1.0 / 3.0, j0=4.5),
        Grid(0.0, 9.0),
    )
    trains = {
        "fig3a": (5e5, 10.0, 10.0),
        "fig3b": (8e5, 5.0, 5.0),
        "fig3c": (1e6, 2.0, 2.0),
    }
    for name, (E, t1, t2) in trains.items():
        out[name] = (DriveEnvelope.train(E, t1, t2), Grid(0.0, 60.0))
    for name, t2 in zip("abcdef", (0.34, 1.0, 1.5, 2.0, 2.5, 3.0)):
        out["fig5" + name] = (DriveEnvelope.train(5e6, 0.34, t2), Grid(0.0, 60.0))
    return out


SIMULATE_PRESETS = _simulate_presets()
PRESET_NAMES = tuple(sorted(SIMULATE_PRESETS)) + ("fig4", "fig6")


def ground_state_pulse(traj, threshold: float = 1.0) -> int | None:
    """First pulse k whose end finds the averaged phonon number below threshold."""
    env = traj.envelope
    if env.kind != "square_train":
        raise ValidationError("ground_state_pulse expects a pulse-train run")
    smoothed = period_average(traj)
    k = 1
    while True:
        t_end = k * env.t1 + (k - 1) * env.t2
        if t_end > traj.t[-1]:
            return None
        idx = int(np.searchsorted(traj.t, t_end - 1e-12))
        if smoothed[min(idx, len(smoothed) - 1)] < threshold:
            return k
        k += 1


def _dip_summary(name: str, traj) -> str:
    dip = first_dip(traj)
    if not dip.found:
        return f"{name}: no phonon-number dip found over t in [0, {traj.t[-1]:g}]"
    assert 0.0 < dip.t_dip <= traj.t[-1]
    assert dip.n_dip <= traj.params.n_th
    return (
        f"{name}: first dip n_m={dip.n_dip:.4g} at t={dip.t_dip:.4g} "
        f"(averaging window {dip.window:.4g})"
    )


def _train_summary(name: str, traj) -> str:
    env = traj.envelope
    if name.startswith("fig3"):
        k = ground_state_pulse(traj)
        if k is None:
            return f"{name}: ground state not reached within t={traj.t[-1]:g}"
        assert k >= 1
        return f"{name}: ground state (averaged n_m < 1) reached by pulse {k}"
    # fig5 family: preservation band after the schedule settles
    settle = 5.0 * (env.t1 + env.t2)
    smoothed = period_average(traj)
    tail = traj.t >= settle
    lo, hi = float(smoothed[tail].min()), float(smoothed[tail].max())
    limit = cw_cooling_limit(traj.params)
    below = int((traj.n_m[tail] < limit).sum())
    assert below > 0, "instantaneous n_m never dropped below the CW limit"
    assert hi < traj.params.n_th / 10.0, "train failed to hold the cooled state"
    return (
        f"{name}: averaged n_m in [{lo:.3g}, {hi:.3g}] after the 5th pulse; "
        f"instantaneous n_m below the CW limit {limit:g} at {below} samples"
    )


def run_preset(name: str, out_dir=".", amplitude: float | None = None) -> PresetResult:
    """Run one named preset, write its CSV files, and return the summary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if name in SIMULATE_PRESETS:
        env, grid = SIMULATE_PRESETS[name]
        if amplitude is not None:
            env = DriveEnvelope(
                kind=env.kind,
                E=float(amplitude),
                t1=env.t1,
                t2=env.t2,
                n_pulses=env.n_pulses,
                sigma=env.sigma,
                j0=env.j0,
            )
        traj = simulate(BASE_PARAMS, env, grid)
        path = io.write_trajectory(traj, out_dir / f"{name}.csv")
        if env.kind == "square_train":
            summary = _train_summary(name, traj)
        else:
            summary = _dip_summary(name, traj)
        return PresetResult(name=name, files=[path], summary=summary)

    if name == "fig4":
        if amplitude is not None:
            raise ValidationError("fig4 is a J sweep; amplitude is set per row")
        rows = j_sweep(BASE_PARAMS, FIG4_J_GRID)
        path = io.write_sweep(rows, out_dir / "fig4.csv")
        found = [r for r in rows if r.found]
        assert found, "no sweep row produced a dip"
        t_dips = [r.t_dip for r in found]
        assert t_dips == sorted(t_dips, reverse=True), "dip time should fall with J"
        summary = (
            f"fig4: {len(rows)} J values, dip found for {len(found)}; "
            f"t_dip {t_dips[0]:.3g} -> {t_dips[-1]:.3g} as J grows"
        )
        return PresetResult(name=name, files=[path], summary=summary)

    if name == "fig6":
        env, grid = SIMULATE_PRESETS["fig2a"]
        if amplitude is not None:
            env = DriveEnvelope.square(float(amplitude), env.t1)
        linear = simulate(BASE_PARAMS, env, grid)
        nonlinear = simulate_nonlinear(BASE_PARAMS, env, grid)
        report = compare_displacement(linear, nonlinear)
        path = io.write_compare(linear, nonlinear, out_dir / "fig6.csv")
        assert math.isfinite(report.nrms)
        summary = (
            f"fig6: linear vs nonlinear X_m, nrms deviation {report.nrms:.3g} "
            f"(max abs {report.max_abs:.3g})"
        )
        return PresetResult(name=name, files=[path], summary=summary)

    raise ValidationError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
