"""Config parsing, case-series schema enforcement, CLI subcommands end to end."""

import csv
import json

import numpy as np
import pytest
import yaml

from seiar import ObservedSeries, peak
from seiar.cli import main
from seiar.config import load_config, parse_config
from seiar.errors import ConfigError, DataError
from seiar.io import read_case_series, write_case_series
from seiar.presets import VARIANT_614G
from seiar.simulate import IncidenceSeries

P = VARIANT_614G


def base_config(**overrides):
    cfg = {
        "parameters": P.as_dict(),
        "initial": {"E1": 100.0},
        "integrator": {"t0": 0.0, "t_end": 40.0, "sample_per_day": 2},
    }
    cfg.update(overrides)
    return cfg


def write_config(path, cfg):
    path.write_text(yaml.safe_dump(cfg), encoding="utf-8")
    return str(path)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def stability_rows(path):
    return {row[0]: row[1] for row in read_rows(path)[1:]}


class TestCaseSeriesIO:
    def test_round_trip(self, tmp_path):
        series = ObservedSeries(counts=np.array([3.0, 1.5, 0.0, 7.25]))
        target = tmp_path / "cases.csv"
        write_case_series(target, series)
        back = read_case_series(target)
        assert np.array_equal(back.counts, series.counts)

    def test_header_must_match(self, tmp_path):
        f = tmp_path / "cases.csv"
        f.write_text("day,count\n2020-01-01,5\n")
        with pytest.raises(DataError, match="line 1"):
            read_case_series(f)

    def test_impossible_calendar_date_names_line(self, tmp_path):
        f = tmp_path / "cases.csv"
        f.write_text("date,new_confirmed\n2021-06-30,5\n2021-06-31,6\n")
        with pytest.raises(DataError, match="line 3"):
            read_case_series(f)

    def test_gap_in_dates_names_line(self, tmp_path):
        f = tmp_path / "cases.csv"
        f.write_text("date,new_confirmed\n2020-01-01,5\n2020-01-03,6\n")
        with pytest.raises(DataError, match="line 3"):
            read_case_series(f)

    def test_negative_count_rejected(self, tmp_path):
        f = tmp_path / "cases.csv"
        f.write_text("date,new_confirmed\n2020-01-01,-5\n")
        with pytest.raises(DataError, match="nonnegative"):
            read_case_series(f)

    def test_non_numeric_count_rejected(self, tmp_path):
        f = tmp_path / "cases.csv"
        f.write_text("date,new_confirmed\n2020-01-01,many\n")
        with pytest.raises(DataError, match="number"):
            read_case_series(f)

    def test_empty_file_rejected(self, tmp_path):
        f = tmp_path / "cases.csv"
        f.write_text("")
        with pytest.raises(DataError, match="empty"):
            read_case_series(f)


class TestConfigParsing:
    def test_minimal_config_parses(self):
        config = parse_config(base_config())
        assert config.integrator.t_end == 40.0
        assert config.spec.free_names == ()

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="simulation"):
            parse_config(base_config(simulation={}))

    def test_unknown_parameter_name(self):
        cfg = base_config()
        cfg["parameters"]["gama1"] = 0.1
        del cfg["parameters"]["gamma1"]
        with pytest.raises(ConfigError, match="gama1"):
            parse_config(cfg)

    def test_unknown_integrator_key(self):
        cfg = base_config()
        cfg["integrator"]["dt"] = 0.1
        with pytest.raises(ConfigError, match="dt"):
            parse_config(cfg)

    def test_booleans_are_not_numbers(self):
        cfg = base_config()
        cfg["parameters"]["beta"] = True
        with pytest.raises(ConfigError, match="number"):
            parse_config(cfg)

    def test_free_block_requires_all_fields(self):
        cfg = base_config()
        cfg["parameters"]["beta"] = {"free": {"lo": 0.0, "hi": 1e-8}}
        with pytest.raises(ConfigError, match="guess"):
            parse_config(cfg)

    def test_free_entry_parses(self):
        cfg = base_config()
        cfg["parameters"]["beta"] = {
            "free": {"lo": 1e-10, "hi": 1e-8, "guess": 5e-9}}
        config = parse_config(cfg)
        assert config.spec.free_names == ("beta",)

    def test_missing_parameters_block(self):
        with pytest.raises(ConfigError, match="parameters"):
            parse_config({"initial": {}})

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "missing.yaml")

    def test_invalid_yaml(self, tmp_path):
        f = tmp_path / "bad.yaml"
        f.write_text("parameters: [unclosed")
        with pytest.raises(ConfigError, match="YAML"):
            load_config(f)


class TestSimulateCommand:
    def test_writes_trajectory_and_incidence(self, tmp_path):
        cfg_path = write_config(tmp_path / "run.yaml", base_config())
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 0
        rows = read_rows(out / "trajectory.csv")
        assert rows[0] == ["t", "S", "E1", "E2", "I1", "I2", "A", "R",
                           "cum_I1", "cum_I2", "cum_A"]
        assert len(rows) == 1 + 40 * 2 + 1
        inc = read_rows(out / "incidence.csv")
        assert inc[0] == ["day", "new_confirmed"]
        assert len(inc) == 41

    def test_dfe_initial_gives_zero_incidence(self, tmp_path):
        cfg = base_config(initial={})
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 0
        values = [float(r[1]) for r in read_rows(out / "incidence.csv")[1:]]
        assert all(v == 0.0 for v in values)

    def test_serialized_floats_round_trip_exactly(self, tmp_path):
        from seiar import IntegratorConfig, daily_incidence, integrate
        cfg_path = write_config(tmp_path / "run.yaml", base_config())
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 0
        y0 = np.array([P.S0 - 100.0, 100.0, 0, 0, 0, 0, 0])
        window = IntegratorConfig(t0=0.0, t_end=40.0, sample_per_day=2)
        expected = daily_incidence(integrate(P, y0, window)).values
        written = np.array([float(r[1]) for r in read_rows(out / "incidence.csv")[1:]])
        assert np.array_equal(written, expected)

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg_path = write_config(tmp_path / "run.yaml", base_config())
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", cfg_path, "--out", str(out_a)]) == 0
        assert main(["simulate", "--config", cfg_path, "--out", str(out_b)]) == 0
        for name in ("trajectory.csv", "incidence.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_peak_row_matches_library_peak(self, tmp_path):
        cfg = base_config()
        cfg["integrator"]["t_end"] = 200.0
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 0
        rows = read_rows(out / "incidence.csv")[1:]
        days = np.array([int(r[0]) for r in rows])
        values = np.array([float(r[1]) for r in rows])
        day, value = peak(IncidenceSeries(days=days, values=values))
        best = max(rows, key=lambda r: float(r[1]))
        assert int(best[0]) == day
        assert float(best[1]) == value

    def test_free_parameters_are_a_config_error(self, tmp_path, capsys):
        cfg = base_config()
        cfg["parameters"]["beta"] = {
            "free": {"lo": 1e-10, "hi": 1e-8, "guess": 5e-9}}
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 2
        assert "beta" in capsys.readouterr().err
        assert not (out / "trajectory.csv").exists()

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert main(["simulate", "--config", str(tmp_path / "nope.yaml"),
                     "--out", str(tmp_path)]) == 2


class TestStabilityCommand:
    def test_zero_transmission(self, tmp_path):
        cfg = base_config()
        cfg["parameters"]["beta"] = 0.0
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["stability", "--config", cfg_path, "--out", str(out)]) == 0
        rows = stability_rows(out / "stability.csv")
        assert float(rows["R_c"]) == 0.0
        assert rows["dfe_verdict"] == "stable"
        assert rows["endemic_present"] == "0"
        assert rows["positive_root_exists"] == "0"

    def test_614g_report(self, tmp_path):
        cfg_path = write_config(tmp_path / "run.yaml", base_config())
        out = tmp_path / "out"
        assert main(["stability", "--config", cfg_path, "--out", str(out)]) == 0
        rows = stability_rows(out / "stability.csv")
        assert float(rows["R_c"]) == pytest.approx(1.66, abs=0.01)
        assert rows["dfe_verdict"] == "unstable"
        assert rows["endemic_present"] == "1"
        assert rows["endemic_verdict"] == "stable"
        assert rows["positive_root_exists"] == "1"
        assert rows["lyapunov_audit"].startswith("skipped")

    def test_subcritical_runs_lyapunov_audit(self, tmp_path):
        cfg = base_config()
        cfg["parameters"]["beta"] = P.beta * 0.45  # R_c ~ 0.75
        cfg["stability"] = {"audit_seeds": 3, "audit_horizon": 2000.0, "seed": 1}
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["stability", "--config", cfg_path, "--out", str(out)]) == 0
        rows = stability_rows(out / "stability.csv")
        assert rows["lyapunov_audit"] == "pass"
        assert float(rows["lyapunov_max_violation"]) <= 1e-9


class TestFitCommand:
    def make_synthetic(self, tmp_path, days=25):
        cfg = base_config()
        cfg["integrator"]["t_end"] = float(days)
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        sim_out = tmp_path / "sim"
        assert main(["simulate", "--config", cfg_path, "--out", str(sim_out)]) == 0
        rows = read_rows(sim_out / "incidence.csv")[1:]
        counts = np.array([float(r[1]) for r in rows])
        data_path = tmp_path / "cases.csv"
        write_case_series(data_path, ObservedSeries(counts=counts))
        return cfg, cfg_path, str(data_path)

    def test_fit_to_own_output_is_exact(self, tmp_path):
        _, cfg_path, data_path = self.make_synthetic(tmp_path)
        out = tmp_path / "fit"
        assert main(["fit", "--config", cfg_path, "--data", data_path,
                     "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["objective"] == 0.0
        assert summary["iterations"] == 0
        residuals = read_rows(out / "residuals.csv")[1:]
        assert all(float(r[3]) == 0.0 for r in residuals)
        fit_rows = read_rows(out / "fit.csv")[1:]
        statuses = {r[0]: r[1] for r in fit_rows}
        assert statuses["beta"] == "fixed"
        assert statuses["S(0)"] == "derived"

    def test_recovers_free_parameter(self, tmp_path):
        cfg, _, data_path = self.make_synthetic(tmp_path, days=30)
        cfg["parameters"]["beta"] = {
            "free": {"lo": P.beta / 4, "hi": P.beta * 4, "guess": P.beta * 1.5}}
        cfg["fit"] = {"restarts": 1, "max_evals": 120, "seed": 0}
        cfg_path = write_config(tmp_path / "run2.yaml", cfg)
        out = tmp_path / "fit"
        assert main(["fit", "--config", cfg_path, "--data", data_path,
                     "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        fit_rows = {r[0]: r for r in read_rows(out / "fit.csv")[1:]}
        assert fit_rows["beta"][1] == "fitted"
        assert float(fit_rows["beta"][2]) == pytest.approx(P.beta, rel=1e-3)
        assert summary["r_c"] == pytest.approx(1.6634, rel=1e-3)

    def test_malformed_data_exits_3_naming_line(self, tmp_path, capsys):
        _, cfg_path, _ = self.make_synthetic(tmp_path)
        bad = tmp_path / "bad.csv"
        bad.write_text("date,new_confirmed\n2020-01-01,5\nnot-a-date,6\n")
        assert main(["fit", "--config", cfg_path, "--data", str(bad),
                     "--out", str(tmp_path / "x")]) == 3
        assert "line 3" in capsys.readouterr().err


class TestSweepCommand:
    def test_default_grid_ascending_and_declines(self, tmp_path):
        cfg = base_config()
        cfg["scenario"] = {"horizon": 120.0}
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["sweep", "--config", cfg_path, "--out", str(out)]) == 0
        rows = read_rows(out / "sweep.csv")
        assert rows[0][0] == "rho"
        rhos = [float(r[0]) for r in rows[1:]]
        assert rhos == [0.2, 0.4, 0.6, 0.8]
        totals = [float(r[1]) for r in rows[1:]]
        assert all(a > b for a, b in zip(totals, totals[1:]))
        decline = {r[0]: float(r[1]) for r in read_rows(out / "decline.csv")[1:]}
        assert decline["total"] > 0.0
        assert decline["asymptomatic"] > 0.0

    def test_single_rho_is_config_error(self, tmp_path):
        cfg = base_config()
        cfg["scenario"] = {"rho_values": [0.5], "horizon": 30.0}
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        assert main(["sweep", "--config", cfg_path,
                     "--out", str(tmp_path / "o")]) == 2


class TestPredictCommand:
    def test_forecast_matches_generator_extension(self, tmp_path):
        days, horizon = 30, 50
        cfg = base_config()
        cfg["integrator"]["t_end"] = float(days + horizon)
        cfg_path_long = write_config(tmp_path / "long.yaml", cfg)
        sim_out = tmp_path / "sim"
        assert main(["simulate", "--config", cfg_path_long,
                     "--out", str(sim_out)]) == 0
        rows = read_rows(sim_out / "incidence.csv")[1:]
        counts = np.array([float(r[1]) for r in rows])
        data_path = tmp_path / "cases.csv"
        write_case_series(data_path, ObservedSeries(counts=counts[:days]))

        cfg["integrator"]["t_end"] = float(days)
        cfg["forecast"] = {"horizon": horizon}
        cfg_path = write_config(tmp_path / "run.yaml", cfg)
        out = tmp_path / "out"
        assert main(["predict", "--config", cfg_path, "--data", str(data_path),
                     "--out", str(out)]) == 0
        forecast_rows = read_rows(out / "forecast.csv")[1:]
        assert [int(r[0]) for r in forecast_rows] == list(range(days, days + horizon))
        predicted = np.array([float(r[1]) for r in forecast_rows])
        np.testing.assert_allclose(predicted, counts[days:], rtol=1e-6)
        summary = json.loads((out / "forecast_summary.json").read_text())
        assert summary["horizon"] == horizon
        assert summary["objective"] == 0.0
