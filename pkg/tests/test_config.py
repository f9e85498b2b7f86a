import logging
from pathlib import Path

import pytest

from pulsecool import ValidationError
from pulsecool.analysis import DEFAULT_HYSTERESIS
from pulsecool.config import ExperimentConfig, load_config, parse_config
from pulsecool.numerics import DEFAULT_DT, DEFAULT_STRIDE
from pulsecool.presets import BASE_PARAMS, SIMULATE_PRESETS

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

PARAMS_DOC = {"omega_m": 100.0, "g_m": 1e-4, "gamma_m": 1e-3, "n_th": 100.0}


def doc(**sections):
    d = {"params": dict(PARAMS_DOC)}
    d.update(sections)
    return d


class TestShippedConfigs:
    def test_fig2c_file_matches_preset(self):
        cfg = load_config(CONFIG_DIR / "fig2c.json")
        env, grid = SIMULATE_PRESETS["fig2c"]
        assert cfg.params == BASE_PARAMS
        assert cfg.envelope == env
        assert cfg.grid == grid

    def test_all_samples_parse(self):
        for name in ("fig2c", "sweep", "design", "compare"):
            cfg = load_config(CONFIG_DIR / f"{name}.json")
            assert isinstance(cfg, ExperimentConfig)


class TestDefaults:
    def test_minimal_config(self):
        cfg = parse_config(doc())
        assert cfg.params == BASE_PARAMS
        assert cfg.envelope is None and cfg.grid is None
        assert cfg.window is None
        assert cfg.hysteresis == DEFAULT_HYSTERESIS
        assert cfg.sweep is None and cfg.design is None and cfg.output_path is None

    def test_grid_defaults(self):
        cfg = parse_config(doc(grid={"t_end": 1.0}))
        assert cfg.grid.t_start == 0.0
        assert cfg.grid.dt == DEFAULT_DT
        assert cfg.grid.sample_stride == DEFAULT_STRIDE

    def test_gaussian_center_default(self):
        cfg = parse_config(doc(envelope={"kind": "gaussian", "E": 1e6, "sigma": 0.5}))
        assert cfg.envelope.j0 == 4.5

    def test_defaults_are_logged(self, caplog):
        with caplog.at_level(logging.INFO, logger="pulsecool.config"):
            parse_config(doc(grid={"t_end": 1.0}))
        applied = [r.message for r in caplog.records if "default applied" in r.message]
        assert any("grid.dt" in m for m in applied)
        assert any("sample_stride" in m for m in applied)


class TestValidation:
    def test_unknown_top_level_key(self):
        with pytest.raises(ValidationError, match="gird"):
            parse_config(doc(gird={"t_end": 1.0}))

    def test_unknown_section_keys(self):
        with pytest.raises(ValidationError, match="omega"):
            parse_config({"params": {**PARAMS_DOC, "omega": 1.0}})
        with pytest.raises(ValidationError, match="width"):
            parse_config(doc(envelope={"kind": "gaussian", "E": 1.0, "width": 0.5}))

    def test_physical_validation_propagates(self):
        with pytest.raises(ValidationError, match="gamma_m"):
            parse_config({"params": {**PARAMS_DOC, "gamma_m": -1e-3}})

    def test_missing_required_param(self):
        bad = dict(PARAMS_DOC)
        del bad["n_th"]
        with pytest.raises(ValidationError, match="n_th"):
            parse_config({"params": bad})

    def test_missing_params_section(self):
        with pytest.raises(ValidationError):
            parse_config({"grid": {"t_end": 1.0}})

    @pytest.mark.parametrize(
        "env",
        [
            {"kind": "square_single", "E": 1.0},  # no t1
            {"kind": "square_train", "E": 1.0, "t1": 1.0},  # no t2
            {"kind": "gaussian", "E": 1.0},  # no sigma
            {"kind": "custom"},
            {"kind": "triangle", "E": 1.0},
            {"kind": "square_train", "E": 1.0, "t1": 1.0, "t2": 1.0, "n_pulses": 2.5},
            {"kind": "square_train", "E": 1.0, "t1": 1.0, "t2": 1.0, "n_pulses": True},
        ],
    )
    def test_bad_envelopes_rejected(self, env):
        with pytest.raises(ValidationError):
            parse_config(doc(envelope=env))

    def test_grid_requires_t_end(self):
        with pytest.raises(ValidationError, match="t_end"):
            parse_config(doc(grid={"t_start": 0.0}))

    def test_numbers_must_be_numbers(self):
        with pytest.raises(ValidationError):
            parse_config({"params": {**PARAMS_DOC, "omega_m": "100"}})
        with pytest.raises(ValidationError):
            parse_config({"params": {**PARAMS_DOC, "omega_m": True}})
        with pytest.raises(ValidationError):
            parse_config(doc(grid={"t_end": 1.0, "sample_stride": 2.0}))

    def test_sweep_requires_list(self):
        with pytest.raises(ValidationError, match="J_values"):
            parse_config(doc(sweep={"J_values": 5.0}))

    def test_design_requires_amplitude_and_gap(self):
        with pytest.raises(ValidationError, match="design.t2"):
            parse_config(doc(design={"E": 1e6}))

    def test_output_path_must_be_string(self):
        with pytest.raises(ValidationError, match="output.path"):
            parse_config(doc(output={"path": 7}))


class TestRoundTrip:
    def test_full_config_survives_serialization(self):
        full = doc(
            envelope={"kind": "square_train", "E": 5e6, "t1": 0.34, "t2": 0.34, "n_pulses": 12},
            grid={"t_start": 0.0, "t_end": 8.16, "dt": 1e-4, "sample_stride": 20},
            analysis={"window": 0.0628, "hysteresis": 0.02},
            sweep={"J_values": [1.0, 2.0], "pulse_duration": 3.0},
            design={"E": 5e6, "t2": 0.34, "n_pulses": None},
            output={"path": "out.csv"},
        )
        cfg = parse_config(full)
        again = parse_config(cfg.to_dict())
        assert again == cfg

    def test_custom_envelope_not_serializable(self):
        from pulsecool import DriveEnvelope

        cfg = ExperimentConfig(
            params=BASE_PARAMS, envelope=DriveEnvelope.custom(lambda t: 0.0)
        )
        with pytest.raises(ValidationError, match="custom"):
            cfg.to_dict()


class TestLoadConfig:
    def test_malformed_json_reports_position(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text('{"params": {,}\n')
        with pytest.raises(ValidationError, match="line 1"):
            load_config(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            load_config(tmp_path / "nope.json")

    def test_require_names_missing_section(self):
        cfg = parse_config(doc())
        with pytest.raises(ValidationError, match="envelope"):
            cfg.require("envelope")
