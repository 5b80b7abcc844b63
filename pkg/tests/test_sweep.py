"""Sweep configuration, execution, CSV emission, presets."""

from __future__ import annotations

import dataclasses
import json

import numpy as np
import pytest

from lqubound import (
    DegenerateSpectrum,
    GAConfig,
    LquError,
    ParamOutOfRange,
    SoundnessError,
    StateSpec,
    SweepAborted,
    SweepConfig,
    SweepRow,
    default_spectrum,
    load_config,
    lower_bound,
    optimize_lqu,
    parse_spectrum,
    preset_configs,
    run_sweep,
    werner,
    write_csv,
    write_marker_csv,
)

CHEAP_GA = GAConfig(population_size=16, generations=40, polish_steps=20, seed=3)


def tiny_config(**overrides) -> SweepConfig:
    base = dict(
        state=StateSpec(family="werner"),
        parameter="p",
        start=0.0,
        stop=1.0,
        steps=3,
        mode="bound",
        ga=CHEAP_GA,
    )
    base.update(overrides)
    return SweepConfig(**base)


class TestSpectrumHelpers:
    def test_presets(self):
        assert parse_spectrum("qubit") == (1.0, -1.0)
        assert parse_spectrum("qutrit") == (1.0, -1.0, 0.0)
        assert parse_spectrum("qudit4") == (3.0, 1.0, -1.0, -3.0)

    def test_raw_list(self):
        assert parse_spectrum("2,0,-2") == (2.0, 0.0, -2.0)

    def test_rejects_garbage(self):
        with pytest.raises((ParamOutOfRange, ValueError)):
            parse_spectrum("qubitt")

    def test_default_spectrum(self):
        assert default_spectrum(2) == (1.0, -1.0)
        assert default_spectrum(3) == (1.0, -1.0, 0.0)
        assert default_spectrum(4) == (3.0, 1.0, -1.0, -3.0)
        # descending ladder fallback beyond the named presets
        assert default_spectrum(5) == (4.0, 2.0, 0.0, -2.0, -4.0)


class TestSweepConfig:
    def test_grid_endpoints(self):
        grid = tiny_config(steps=5).grid()
        assert grid[0] == 0.0 and grid[-1] == 1.0
        assert len(grid) == 5

    @pytest.mark.parametrize(
        "overrides",
        [
            {"parameter": "q"},
            {"steps": 1},
            {"start": 1.0, "stop": 0.0},
            {"mode": "fast"},
            {"fmt": "png"},
        ],
    )
    def test_rejects_bad_fields(self, overrides):
        with pytest.raises(ParamOutOfRange):
            tiny_config(**overrides)

    def test_spectrum_matrix_default_and_explicit(self):
        cfg = tiny_config()
        np.testing.assert_allclose(cfg.spectrum_matrix(3), np.diag([1.0, -1.0, 0.0]))
        cfg2 = tiny_config(spectrum=(2.0, 1.0, 0.0))
        np.testing.assert_allclose(cfg2.spectrum_matrix(3), np.diag([2.0, 1.0, 0.0]))
        with pytest.raises(ParamOutOfRange):
            cfg2.spectrum_matrix(4)


class TestRunSweep:
    def test_bound_mode_matches_direct_evaluation(self):
        rows = run_sweep(tiny_config())
        assert len(rows) == 3
        spec = np.diag([1.0, -1.0, 0.0])
        for row in rows:
            rep = lower_bound(werner(row.param_value), spec)
            assert row.bound == pytest.approx(rep.bound, abs=1e-14)
            assert row.alpha == pytest.approx(rep.alpha, abs=1e-14)
            assert row.lambda_max == pytest.approx(rep.lambda_max, abs=1e-14)
            assert row.optimized is None

    def test_both_mode_per_point_seeds(self):
        cfg = tiny_config(mode="both")
        rows = run_sweep(cfg)
        spec = np.diag([1.0, -1.0, 0.0])
        for index, row in enumerate(rows):
            point_cfg = dataclasses.replace(CHEAP_GA, seed=CHEAP_GA.seed + index)
            expected = optimize_lqu(werner(row.param_value), spec, point_cfg).value
            assert row.optimized == expected

    def test_progress_lines(self):
        lines = []
        run_sweep(tiny_config(), progress=lines.append)
        assert len(lines) == 3
        assert lines[0].startswith("p=0 ")

    def test_degenerate_spectrum_fails_fast_in_optimize_mode(self):
        cfg = tiny_config(mode="optimize", spectrum=(1.0, 1.0, 0.0))
        with pytest.raises(DegenerateSpectrum):
            run_sweep(cfg)

    def test_degenerate_spectrum_allowed_in_bound_mode(self):
        rows = run_sweep(tiny_config(spectrum=(1.0, 1.0, -2.0)))
        assert len(rows) == 3

    def test_mid_sweep_failure_raises_aborted(self, monkeypatch):
        import lqubound.sweep as sweep_mod

        real = sweep_mod.optimize_lqu

        def flaky(state, spectrum, config):
            if config.seed - CHEAP_GA.seed >= 2:
                raise RuntimeError("synthetic optimizer crash")
            return real(state, spectrum, config)

        monkeypatch.setattr(sweep_mod, "optimize_lqu", flaky)
        with pytest.raises(SweepAborted) as excinfo:
            run_sweep(tiny_config(mode="both"))
        aborted = excinfo.value
        assert len(aborted.rows) == 2
        assert aborted.param_value == pytest.approx(1.0)
        assert "synthetic optimizer crash" in str(aborted)


class TestCsvOutput:
    def test_header_and_shape(self, tmp_path):
        rows = run_sweep(tiny_config())
        out = tmp_path / "s.csv"
        write_csv(rows, out)
        lines = out.read_text().splitlines()
        assert lines[0] == "param,bound,optimized,alpha,lambda_max,wall_time_ms"
        assert len(lines) == 4
        # bound mode leaves the optimized column empty, timing is constant 0
        first = lines[1].split(",")
        assert first[2] == ""
        assert first[5] == "0"

    def test_twelve_significant_digits(self, tmp_path):
        rows = [SweepRow(param_value=1.0 / 3.0, bound=0.123456789012345,
                         optimized=None, alpha=1.0, lambda_max=0.5, wall_time_ms=17)]
        out = tmp_path / "fmt.csv"
        write_csv(rows, out)
        line = out.read_text().splitlines()[1]
        assert line == "0.333333333333,0.123456789012,,1,0.5,0"

    def test_byte_identical_across_runs(self, tmp_path):
        cfg = tiny_config(mode="both")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(run_sweep(cfg), a)
        write_csv(run_sweep(cfg), b)
        assert a.read_bytes() == b.read_bytes()

    def test_soundness_enforced_before_writing(self, tmp_path):
        rows = [SweepRow(param_value=0.5, bound=0.4, optimized=0.2,
                         alpha=1.0, lambda_max=0.1, wall_time_ms=3)]
        out = tmp_path / "bad.csv"
        with pytest.raises(SoundnessError):
            write_csv(rows, out)
        assert not out.exists()

    def test_marker_file(self, tmp_path):
        rows = run_sweep(tiny_config())
        out = tmp_path / "partial.csv"
        write_marker_csv(rows, out, "optimizer failed at p=1")
        lines = out.read_text().splitlines()
        assert lines[-1] == "# aborted: optimizer failed at p=1"
        assert len(lines) == 5


class TestLoadConfig:
    def test_full_document(self, tmp_path):
        doc = {
            "state": {"family": "dephased_bell33", "rate_a": 2.0, "rate_b": 1.0},
            "parameter": "t",
            "range": [0.0, 5.0, 21],
            "mode": "both",
            "spectrum": "qutrit",
            "ga": {"seed": 11, "generations": 200},
            "output": "out.csv",
            "format": "csv+svg",
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        cfg = load_config(path)
        assert cfg.state.family == "dephased_bell33"
        assert cfg.state.rate_a == 2.0
        assert (cfg.start, cfg.stop, cfg.steps) == (0.0, 5.0, 21)
        assert cfg.spectrum == (1.0, -1.0, 0.0)
        assert cfg.ga.seed == 11 and cfg.ga.generations == 200
        assert cfg.ga.population_size == 64
        assert cfg.fmt == "csv+svg"

    def test_spectrum_as_list(self, tmp_path):
        doc = {"state": {"family": "werner"}, "parameter": "p",
               "range": [0.0, 1.0, 5], "spectrum": [2.0, 0.0, -2.0]}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        assert load_config(path).spectrum == (2.0, 0.0, -2.0)

    def test_overrides_win(self, tmp_path):
        doc = {"state": {"family": "werner"}, "parameter": "p", "range": [0.0, 1.0, 5]}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        cfg = load_config(path, mode="bound", output="elsewhere.csv")
        assert cfg.mode == "bound"
        assert cfg.output == "elsewhere.csv"

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"state": {"family": "werner"}, "parameter": "p",
                                    "range": [0, 1, 5], "stride": 2}))
        with pytest.raises(LquError, match="unknown keys"):
            load_config(path)

    def test_bad_range_rejected(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"state": {"family": "werner"}, "parameter": "p",
                                    "range": [0, 1]}))
        with pytest.raises(LquError, match="range"):
            load_config(path)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("{not json")
        with pytest.raises(LquError, match="JSON"):
            load_config(path)


class TestPresets:
    def test_fig1(self):
        (cfg,) = preset_configs("fig1")
        assert cfg.state.family == "werner"
        assert cfg.parameter == "p"
        assert (cfg.start, cfg.stop, cfg.steps) == (0.0, 1.0, 51)
        assert cfg.mode == "both"
        assert cfg.ga.seed == 42
        assert cfg.output == "fig1.csv"

    def test_fig2(self):
        (cfg,) = preset_configs("fig2", seed=7)
        assert cfg.state.family == "horodecki33"
        assert cfg.parameter == "h"
        assert cfg.steps == 51
        assert cfg.ga.seed == 7

    def test_fig3_two_rate_pairs(self):
        configs = preset_configs("fig3", output="decay.csv")
        assert len(configs) == 2
        assert [c.output for c in configs] == ["decay_a.csv", "decay_b.csv"]
        assert (configs[0].state.rate_a, configs[0].state.rate_b) == (0.5, 0.5)
        assert (configs[1].state.rate_a, configs[1].state.rate_b) == (2.0, 1.0)
        assert all(c.parameter == "t" and c.steps == 21 for c in configs)
        assert all(c.start == 0.0 and c.stop == 5.0 for c in configs)

    def test_fig4(self):
        (cfg,) = preset_configs("fig4", svg=True)
        assert cfg.state.family == "horodecki42"
        assert (cfg.start, cfg.stop, cfg.steps) == (0.02, 1.0, 50)
        assert cfg.fmt == "csv+svg"

    def test_unknown_preset(self):
        with pytest.raises(ParamOutOfRange):
            preset_configs("fig9")
