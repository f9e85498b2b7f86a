"""CSV serialization for trajectories, sweeps, and model comparisons.

Plain CSV with full-precision scientific notation: files stay tool-agnostic
and round-trip bit-exactly (17 significant digits suffice for a double).
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .analysis import SweepRow
from .errors import ValidationError

TRAJECTORY_HEADER = ["t", "n_m", "X_m", "re_a", "im_a", "re_b", "im_b", "pulse_on"]
SWEEP_HEADER = ["J", "E", "t_dip", "n_dip", "found"]
COMPARE_HEADER = ["t", "X_m_linear", "X_m_nonlinear", "abs_dev"]


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def write_trajectory(traj, path) -> Path:
    """Write one row per retained sample under the documented header."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_HEADER)
        for k in range(len(traj)):
            w.writerow(
                [
                    _fmt(traj.t[k]),
                    _fmt(traj.n_m[k]),
                    _fmt(traj.X_m[k]),
                    _fmt(traj.mean_a[k].real),
                    _fmt(traj.mean_a[k].imag),
                    _fmt(traj.mean_b[k].real),
                    _fmt(traj.mean_b[k].imag),
                    int(traj.pulse_on[k]),
                ]
            )
    return path


def read_trajectory(path) -> dict[str, np.ndarray]:
    """Read a trajectory CSV back into column arrays (named as in the header)."""
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != TRAJECTORY_HEADER:
            raise ValidationError(f"unexpected trajectory header {header!r}")
        rows = [[float(v) for v in row] for row in r]
    cols = np.array(rows, dtype=float).reshape(-1, len(TRAJECTORY_HEADER))
    return {name: cols[:, i] for i, name in enumerate(TRAJECTORY_HEADER)}


def write_sweep(rows: list[SweepRow], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_HEADER)
        for row in rows:
            w.writerow([_fmt(row.J), _fmt(row.E), _fmt(row.t_dip), _fmt(row.n_dip), int(row.found)])
    return path


def read_sweep(path) -> list[SweepRow]:
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != SWEEP_HEADER:
            raise ValidationError(f"unexpected sweep header {header!r}")
        return [
            SweepRow(
                J=float(a), E=float(b), t_dip=float(c), n_dip=float(d), found=bool(int(e))
            )
            for a, b, c, d, e in r
        ]


def write_compare(linear, nonlinear, path) -> Path:
    """Side-by-side displacement columns for the two models."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COMPARE_HEADER)
        for k in range(len(linear)):
            dx = abs(linear.X_m[k] - nonlinear.X_m[k])
            w.writerow([_fmt(linear.t[k]), _fmt(linear.X_m[k]), _fmt(nonlinear.X_m[k]), _fmt(dx)])
    return path
