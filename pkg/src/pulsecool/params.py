"""Physical parameters of the driven optomechanical system.

Every quantity is expressed in units of the cavity decay rate kappa: rates
and frequencies carry units of kappa, times carry 1/kappa.  ``kappa`` itself
is kept as a field so formulas read like the physics, but it is pinned to
exactly 1.0; configs supply normalized values only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import ValidationError

# beyond this ratio the dropped cubic interaction term is no longer negligible
# and the linearized model is suspect
VALIDITY_RATIO = 0.01


@dataclass(frozen=True)
class SystemParams:
    """Rates, frequencies, and bath occupations, all kappa-normalized.

    Attributes
    ----------
    omega_m : float
        Mechanical frequency.
    g_m : float
        Single-photon optomechanical coupling.  Zero is allowed (decoupled
        modes; used by closed-form checks).
    delta : float
        Drive detuning omega_c - omega_L.  Defaults to omega_m (red-detuned
        at the mechanical sideband, the cooling configuration).
    gamma_m : float
        Mechanical damping rate.
    n_th : float
        Initial and bath thermal occupation of the mechanical mode.
    n_c : float
        Cavity bath occupation, essentially zero at optical frequencies.
    kappa : float
        Cavity decay rate; the normalization unit, fixed at 1.0.
    """

    omega_m: float
    g_m: float
    gamma_m: float
    n_th: float
    delta: float | None = None
    n_c: float = 0.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", self.omega_m)
        for name in ("omega_m", "gamma_m", "kappa"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be strictly positive, got {v!r}")
        if self.kappa != 1.0:
            raise ValidationError(
                f"kappa is the normalization unit and must be exactly 1.0, got {self.kappa!r}"
            )
        for name in ("n_th", "n_c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValidationError(f"{name} must be >= 0, got {v!r}")
        if not (math.isfinite(self.g_m) and self.g_m >= 0):
            raise ValidationError(f"g_m must be >= 0, got {self.g_m!r}")
        if not (math.isfinite(self.delta) and self.delta != 0):
            raise ValidationError(f"delta must be finite and nonzero, got {self.delta!r}")
        if self.g_m / self.omega_m >= VALIDITY_RATIO:
            warnings.warn(
                f"g_m/omega_m = {self.g_m / self.omega_m:.3g} is not small; the "
                "linearized model drops a cubic term that only vanishes for "
                "g_m/omega_m << 1",
                stacklevel=2,
            )


@dataclass(frozen=True)
class EffectiveIntensity:
    """Dimensionless drive strength J = (g_m/omega_m) * (E/kappa)."""

    J: float
    g_m: float = field(repr=False, default=0.0)
    omega_m: float = field(repr=False, default=1.0)
    E: float = field(repr=False, default=0.0)


def effective_intensity(params: SystemParams, E: float) -> EffectiveIntensity:
    """Return J for drive amplitude ``E``.

    J collapses the three knobs that matter for cooling speed into one
    number; J ~ 1 marks the crossover from overdamped relaxation to
    swap oscillations.
    """
    if not (math.isfinite(E) and E >= 0):
        raise ValidationError(f"drive amplitude must be >= 0, got {E!r}")
    J = (params.g_m / params.omega_m) * (E / params.kappa)
    return EffectiveIntensity(J=J, g_m=params.g_m, omega_m=params.omega_m, E=E)


def amplitude_for_intensity(params: SystemParams, J: float) -> float:
    """Invert J = (g_m/omega_m)(E/kappa) for E; used by sweeps."""
    if params.g_m == 0:
        raise ValidationError("cannot solve for E when g_m = 0")
    if not (math.isfinite(J) and J >= 0):
        raise ValidationError(f"J must be >= 0, got {J!r}")
    return J * params.omega_m * params.kappa / params.g_m
