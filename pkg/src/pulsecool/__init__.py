"""Pulsed-drive cooling of a mechanical resonator.

Second-moment dynamics of a linearized optomechanical system under square
and Gaussian pulse drives, with dip detection, schedule design, intensity
sweeps, and a nonlinear mean-field cross-check.
"""

__version__ = "0.1.0"

from .analysis import (
    DipReport,
    SweepRow,
    cw_cooling_limit,
    design_schedule,
    first_dip,
    heating_between_pulses,
    j_sweep,
    period_average,
)
from .drive import DriveEnvelope, FieldKernel, envelope_at, kernel_at, kernel_table
from .dynamics import (
    MomentState,
    Trajectory,
    convergence_deviation,
    diffusion_matrix,
    drift_matrix,
    simulate,
)
from .errors import (
    DipNotFoundError,
    NonFiniteStateError,
    NumericalError,
    PulsecoolError,
    QuadratureError,
    ValidationError,
)
from .numerics import Grid, convergence_check, rk4_step
from .oracle import MeanTrajectory, compare_displacement, simulate_nonlinear
from .params import EffectiveIntensity, SystemParams, amplitude_for_intensity, effective_intensity

__all__ = [
    "DipNotFoundError",
    "DipReport",
    "DriveEnvelope",
    "EffectiveIntensity",
    "FieldKernel",
    "Grid",
    "MeanTrajectory",
    "MomentState",
    "NonFiniteStateError",
    "NumericalError",
    "PulsecoolError",
    "QuadratureError",
    "SweepRow",
    "SystemParams",
    "Trajectory",
    "ValidationError",
    "amplitude_for_intensity",
    "compare_displacement",
    "convergence_check",
    "convergence_deviation",
    "cw_cooling_limit",
    "design_schedule",
    "diffusion_matrix",
    "drift_matrix",
    "effective_intensity",
    "envelope_at",
    "first_dip",
    "heating_between_pulses",
    "j_sweep",
    "kernel_at",
    "kernel_table",
    "period_average",
    "rk4_step",
    "simulate",
    "simulate_nonlinear",
]
