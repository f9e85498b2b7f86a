"""JSON experiment configuration: schema, defaults, validation.

All quantities are kappa-normalized, matching the rest of the package.  The
loader is strict about unknown keys (silent typos in physics configs cost
hours) and logs every default it fills in, so a run's effective inputs are
always reconstructible from its log.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .analysis import DEFAULT_HYSTERESIS
from .drive import KINDS, DriveEnvelope
from .errors import ValidationError
from .numerics import DEFAULT_DT, DEFAULT_STRIDE, Grid
from .params import SystemParams

log = logging.getLogger(__name__)

_PARAM_KEYS = {"omega_m", "g_m", "gamma_m", "n_th", "delta", "n_c", "kappa"}
_PARAM_REQUIRED = {"omega_m", "g_m", "gamma_m", "n_th"}
_ENVELOPE_KEYS = {"kind", "E", "t1", "t2", "n_pulses", "sigma", "j0"}
_GRID_KEYS = {"t_start", "t_end", "dt", "sample_stride"}
_ANALYSIS_KEYS = {"window", "hysteresis"}
_SWEEP_KEYS = {"J_values", "pulse_duration"}
_DESIGN_KEYS = {"E", "t2", "n_pulses"}
_OUTPUT_KEYS = {"path"}
_TOP_KEYS = {"params", "envelope", "grid", "analysis", "sweep", "design", "output"}


@dataclass(frozen=True)
class SweepSpec:
    J_values: list[float]
    pulse_duration: float | None = None


@dataclass(frozen=True)
class DesignSpec:
    E: float
    t2: float
    n_pulses: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated configuration; sections not present in the file are None."""

    params: SystemParams
    envelope: DriveEnvelope | None = None
    grid: Grid | None = None
    window: float | None = None
    hysteresis: float = DEFAULT_HYSTERESIS
    sweep: SweepSpec | None = None
    design: DesignSpec | None = None
    output_path: str | None = None

    def require(self, section: str):
        value = getattr(self, "envelope" if section == "envelope" else section)
        if value is None:
            raise ValidationError(f"this command requires a {section!r} section in the config")
        return value

    def to_dict(self) -> dict:
        """Serializable form; inverse of load_config up to defaulted values."""
        out: dict = {
            "params": {
                "omega_m": self.params.omega_m,
                "g_m": self.params.g_m,
                "gamma_m": self.params.gamma_m,
                "n_th": self.params.n_th,
                "delta": self.params.delta,
                "n_c": self.params.n_c,
                "kappa": self.params.kappa,
            },
            "analysis": {"window": self.window, "hysteresis": self.hysteresis},
        }
        if self.envelope is not None:
            env = self.envelope
            if env.kind == "custom":
                raise ValidationError("custom envelopes cannot be serialized to config")
            section = {"kind": env.kind, "E": env.E}
            if env.kind in ("square_single", "square_train"):
                section["t1"] = env.t1
            if env.kind == "square_train":
                section["t2"] = env.t2
                section["n_pulses"] = env.n_pulses
            if env.kind == "gaussian":
                section["sigma"] = env.sigma
                section["j0"] = env.j0
            out["envelope"] = section
        if self.grid is not None:
            out["grid"] = {
                "t_start": self.grid.t_start,
                "t_end": self.grid.t_end,
                "dt": self.grid.dt,
                "sample_stride": self.grid.sample_stride,
            }
        if self.sweep is not None:
            out["sweep"] = {
                "J_values": list(self.sweep.J_values),
                "pulse_duration": self.sweep.pulse_duration,
            }
        if self.design is not None:
            out["design"] = {
                "E": self.design.E,
                "t2": self.design.t2,
                "n_pulses": self.design.n_pulses,
            }
        if self.output_path is not None:
            out["output"] = {"path": self.output_path}
        return out


def _reject_unknown(section: dict, allowed: set, where: str):
    unknown = set(section) - allowed
    if unknown:
        names = ", ".join(sorted(repr(k) for k in unknown))
        raise ValidationError(f"unknown key(s) {names} in {where}")


def _default(section: dict, key: str, value, where: str):
    if key not in section or section[key] is None:
        log.info("config default applied: %s.%s = %r", where, key, value)
        return value
    return section[key]


def _number(section: dict, key: str, where: str):
    v = section[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ValidationError(f"{where}.{key} must be a number, got {v!r}")
    return float(v)


def parse_config(doc: dict, source: str = "<config>") -> ExperimentConfig:
    """Validate a parsed JSON document into an ExperimentConfig."""
    if not isinstance(doc, dict):
        raise ValidationError(f"{source}: top level must be an object")
    _reject_unknown(doc, _TOP_KEYS, source)
    if "params" not in doc:
        raise ValidationError(f"{source}: missing required section 'params'")

    psec = doc["params"]
    _reject_unknown(psec, _PARAM_KEYS, "params")
    missing = _PARAM_REQUIRED - set(psec)
    if missing:
        raise ValidationError(f"params is missing required key(s): {', '.join(sorted(missing))}")
    for key in set(psec):
        _number(psec, key, "params")
    kwargs = {k: float(psec[k]) for k in psec}
    if "delta" not in kwargs:
        log.info("config default applied: params.delta = omega_m = %r", kwargs["omega_m"])
    if "n_c" not in kwargs:
        log.info("config default applied: params.n_c = 0.0")
    params = SystemParams(**kwargs)

    envelope = None
    if "envelope" in doc:
        esec = dict(doc["envelope"])
        _reject_unknown(esec, _ENVELOPE_KEYS, "envelope")
        kind = esec.get("kind")
        if kind not in KINDS or kind == "custom":
            raise ValidationError(
                f"envelope.kind must be one of {[k for k in KINDS if k != 'custom']}, got {kind!r}"
            )
        fields = {"kind": kind, "E": _number(esec, "E", "envelope") if "E" in esec else 0.0}
        if kind in ("square_single", "square_train"):
            if "t1" not in esec:
                raise ValidationError("envelope.t1 is required for square kinds")
            fields["t1"] = _number(esec, "t1", "envelope")
        if kind == "square_train":
            if "t2" not in esec:
                raise ValidationError("envelope.t2 is required for square_train")
            fields["t2"] = _number(esec, "t2", "envelope")
            n_p = esec.get("n_pulses")
            if n_p is not None and (not isinstance(n_p, int) or isinstance(n_p, bool)):
                raise ValidationError(f"envelope.n_pulses must be an integer or null, got {n_p!r}")
            fields["n_pulses"] = n_p
        if kind == "gaussian":
            if "sigma" not in esec:
                raise ValidationError("envelope.sigma is required for gaussian")
            fields["sigma"] = _number(esec, "sigma", "envelope")
            fields["j0"] = (
                _number(esec, "j0", "envelope")
                if "j0" in esec
                else _default(esec, "j0", 4.5, "envelope")
            )
        envelope = DriveEnvelope(**fields)

    grid = None
    if "grid" in doc:
        gsec = dict(doc["grid"])
        _reject_unknown(gsec, _GRID_KEYS, "grid")
        if "t_end" not in gsec:
            raise ValidationError("grid.t_end is required")
        t_start = _number(gsec, "t_start", "grid") if "t_start" in gsec else _default(gsec, "t_start", 0.0, "grid")
        dt = _number(gsec, "dt", "grid") if "dt" in gsec else _default(gsec, "dt", DEFAULT_DT, "grid")
        stride = gsec.get("sample_stride")
        if stride is None:
            stride = _default(gsec, "sample_stride", DEFAULT_STRIDE, "grid")
        elif not isinstance(stride, int) or isinstance(stride, bool):
            raise ValidationError(f"grid.sample_stride must be an integer, got {stride!r}")
        grid = Grid(
            t_start=float(t_start),
            t_end=_number(gsec, "t_end", "grid"),
            dt=float(dt),
            sample_stride=stride,
        )

    window = None
    hysteresis = DEFAULT_HYSTERESIS
    if "analysis" in doc:
        asec = dict(doc["analysis"])
        _reject_unknown(asec, _ANALYSIS_KEYS, "analysis")
        if asec.get("window") is not None:
            window = _number(asec, "window", "analysis")
        if asec.get("hysteresis") is not None:
            hysteresis = _number(asec, "hysteresis", "analysis")
        else:
            hysteresis = _default(asec, "hysteresis", DEFAULT_HYSTERESIS, "analysis")
    else:
        log.info("config default applied: analysis.window = one mechanical period")
        log.info("config default applied: analysis.hysteresis = %r", DEFAULT_HYSTERESIS)

    sweep = None
    if "sweep" in doc:
        ssec = dict(doc["sweep"])
        _reject_unknown(ssec, _SWEEP_KEYS, "sweep")
        if "J_values" not in ssec or not isinstance(ssec["J_values"], list):
            raise ValidationError("sweep.J_values must be a list of numbers")
        J_values = [float(v) for v in ssec["J_values"]]
        duration = None
        if ssec.get("pulse_duration") is not None:
            duration = _number(ssec, "pulse_duration", "sweep")
        sweep = SweepSpec(J_values=J_values, pulse_duration=duration)

    design = None
    if "design" in doc:
        dsec = dict(doc["design"])
        _reject_unknown(dsec, _DESIGN_KEYS, "design")
        for key in ("E", "t2"):
            if key not in dsec:
                raise ValidationError(f"design.{key} is required")
        n_p = dsec.get("n_pulses")
        if n_p is not None and (not isinstance(n_p, int) or isinstance(n_p, bool)):
            raise ValidationError(f"design.n_pulses must be an integer or null, got {n_p!r}")
        design = DesignSpec(
            E=_number(dsec, "E", "design"), t2=_number(dsec, "t2", "design"), n_pulses=n_p
        )

    output_path = None
    if "output" in doc:
        osec = dict(doc["output"])
        _reject_unknown(osec, _OUTPUT_KEYS, "output")
        if "path" in osec and osec["path"] is not None:
            if not isinstance(osec["path"], str):
                raise ValidationError(f"output.path must be a string, got {osec['path']!r}")
            output_path = osec["path"]

    return ExperimentConfig(
        params=params,
        envelope=envelope,
        grid=grid,
        window=window,
        hysteresis=hysteresis,
        sweep=sweep,
        design=design,
        output_path=output_path,
    )


def load_config(path) -> ExperimentConfig:
    """Read, parse, and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_config(doc, source=str(path))
