import numpy as np
import pytest

from pulsecool import ValidationError
from pulsecool.io import read_sweep, read_trajectory
from pulsecool.presets import (
    BASE_PARAMS,
    PRESET_NAMES,
    SIMULATE_PRESETS,
    ground_state_pulse,
    run_preset,
)


def test_registry_names():
    assert set(PRESET_NAMES) == {
        "fig2a",
        "fig2b",
        "fig2c",
        "fig2d",
        "fig2gauss",
        "fig3a",
        "fig3b",
        "fig3c",
        "fig4",
        "fig5a",
        "fig5b",
        "fig5c",
        "fig5d",
        "fig5e",
        "fig5f",
        "fig6",
    }
    assert all(name in PRESET_NAMES for name in SIMULATE_PRESETS)


def test_shared_parameters():
    assert BASE_PARAMS.omega_m == 100.0
    assert BASE_PARAMS.delta == 100.0
    assert BASE_PARAMS.n_th == 100.0
    assert BASE_PARAMS.kappa == 1.0


def test_unknown_preset_lists_names():
    with pytest.raises(ValidationError, match="fig2a"):
        run_preset("fig7")


class TestSinglePulsePresets:
    def test_deep_pulse(self, tmp_path):
        res = run_preset("fig2c", tmp_path)
        assert res.files[0].name == "fig2c.csv"
        data = read_trajectory(res.files[0])
        assert data["n_m"][0] == pytest.approx(100.0)
        assert "first dip n_m=0.5058 at t=0.344" in res.summary

    def test_strong_pulse_bottoms_out_early(self, tmp_path):
        res = run_preset("fig2d", tmp_path)
        assert "t=0.158" in res.summary

    def test_moderate_pulse(self, tmp_path):
        res = run_preset("fig2b", tmp_path)
        assert "t=0.722" in res.summary

    def test_amplitude_override_shifts_the_dip(self, tmp_path):
        base = run_preset("fig2c", tmp_path / "a")
        weaker = run_preset("fig2c", tmp_path / "b", amplitude=2.5e6)
        t_base = float(base.summary.split("t=")[1].split()[0])
        t_weak = float(weaker.summary.split("t=")[1].split()[0])
        assert t_weak > t_base

    def test_gaussian_pulse_cools_deeply(self, tmp_path):
        res = run_preset("fig2gauss", tmp_path)
        assert "first dip n_m=0.09163 at t=0.72" in res.summary


class TestTrainPresets:
    def test_slow_trains_reach_ground_state(self, tmp_path):
        for name in ("fig3a", "fig3c"):
            res = run_preset(name, tmp_path)
            assert "ground state (averaged n_m < 1) reached by pulse" in res.summary
            k = int(res.summary.rsplit("pulse", 1)[1])
            assert 1 <= k <= 3

    def test_weak_train_fails_to_reach_ground_state(self, tmp_path):
        res = run_preset("fig3c", tmp_path, amplitude=5e5)
        assert "ground state not reached within t=60" in res.summary

    def test_tight_train_preserves_cooling(self, tmp_path):
        res = run_preset("fig5a", tmp_path)
        assert "below the CW limit 0.1" in res.summary

    def test_sparse_train_still_holds_band(self, tmp_path):
        res = run_preset("fig5f", tmp_path)
        assert "after the 5th pulse" in res.summary

    def test_ground_state_pulse_requires_train(self, fig2c_traj):
        with pytest.raises(ValidationError):
            ground_state_pulse(fig2c_traj)


class TestSweepPreset:
    def test_rows_and_summary(self, tmp_path):
        res = run_preset("fig4", tmp_path)
        rows = read_sweep(res.files[0])
        assert [r.J for r in rows] == [0.25, 0.5, 1.0, 1.5, 2.5, 3.5, 5.0]
        assert "7 J values, dip found for 5" in res.summary
        found = [r.t_dip for r in rows if r.found]
        assert found == sorted(found, reverse=True)

    def test_amplitude_override_rejected(self, tmp_path):
        with pytest.raises(ValidationError):
            run_preset("fig4", tmp_path, amplitude=1e6)


class TestComparePreset:
    def test_compare_output(self, tmp_path):
        res = run_preset("fig6", tmp_path)
        assert res.files[0].name == "fig6.csv"
        assert "nrms deviation" in res.summary
        body = np.loadtxt(res.files[0], delimiter=",", skiprows=1)
        assert body.shape[1] == 4
        np.testing.assert_array_equal(body[:, 3], np.abs(body[:, 1] - body[:, 2]))
