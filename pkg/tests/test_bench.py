"""Tests for experiment configs, long-format results, and the table runners."""

import csv
import io
import json
import math

import numpy as np
import pytest

from pinvreg.bench import (
    TABLE1_SWEEP,
    ExperimentConfig,
    ExperimentResult,
    run_lfr_sim,
    run_table1,
    run_table2,
    run_table3,
    run_table4,
    run_timeseries,
    timing_comparison,
)
from pinvreg.errors import ValidationError
from pinvreg.lfr import ineq47_bound


def write_series_csv(path, m=60, location="X"):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["date", "location", "new_cases"])
        for d in range(m):
            day = f"2020-{3 + d // 30:02d}-{1 + d % 30:02d}"
            value = 50.0 + 30.0 * math.sin(2 * math.pi * d / m) + d
            w.writerow([day, location, f"{value:.2f}"])
    return path


class TestExperimentConfig:
    def test_round_trip(self):
        cfg = ExperimentConfig(experiment="table1", alpha=-0.5, N=5, n=25,
                               trials=3, seed=7)
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg

    def test_rejects_unknown_keys(self):
        with pytest.raises(ValidationError, match="unknown config key"):
            ExperimentConfig.from_dict({"experiment": "table1", "gamma": 2})

    def test_requires_experiment(self):
        with pytest.raises(ValidationError, match="experiment"):
            ExperimentConfig.from_dict({"N": 5})

    def test_rejects_unknown_experiment(self):
        with pytest.raises(ValidationError, match="unknown experiment"):
            ExperimentConfig(experiment="table9")

    def test_rejects_bad_format(self):
        with pytest.raises(ValidationError, match="format"):
            ExperimentConfig(experiment="table1", format="yaml")

    def test_rejects_bad_trials(self):
        with pytest.raises(ValidationError, match="trials"):
            ExperimentConfig(experiment="table1", trials=0)

    def test_lambda_grid_validated_and_cast(self):
        cfg = ExperimentConfig(experiment="table3", lambda_grid=[1, 0.1])
        assert cfg.lambda_grid == [1.0, 0.1]
        with pytest.raises(ValidationError, match="lambda_grid"):
            ExperimentConfig(experiment="table3", lambda_grid=[0.0])

    def test_merged_skips_none(self):
        cfg = ExperimentConfig(experiment="table1", N=5, seed=3)
        out = cfg.merged({"N": 10, "n": None, "trials": 2})
        assert out.N == 10 and out.n is None and out.trials == 2 and out.seed == 3

    def test_merged_validates(self):
        cfg = ExperimentConfig(experiment="table1")
        with pytest.raises(ValidationError, match="format"):
            cfg.merged({"format": "xml"})


class TestExperimentResult:
    def make(self):
        rows = [
            {"experiment": "table1", "alpha": -0.5, "N": 5, "n": 25,
             "metric": "mean_kappa2_direct", "value": 7.25, "seed": "0/table1"},
        ]
        return ExperimentResult(config={"experiment": "table1", "seed": 0},
                                rows=rows)

    def test_csv_config_line(self):
        text = self.make().to_csv_text()
        first = text.split("\r\n", 1)[0]
        assert first.startswith("# config ")
        assert json.loads(first[len("# config "):]) == {
            "experiment": "table1", "seed": 0}

    def test_csv_body_parses(self):
        text = self.make().to_csv_text()
        body = text.split("\r\n", 1)[1]
        reader = csv.reader(io.StringIO(body))
        header = next(reader)
        assert header[:2] == ["experiment", "alpha"]
        row = next(reader)
        row_map = dict(zip(header, row))
        assert row_map["value"] == repr(7.25)
        assert row_map["beta"] == ""          # absent fields render empty

    def test_json_structure(self):
        doc = json.loads(self.make().to_json_text())
        assert set(doc) == {"config", "rows"}
        assert doc["rows"][0]["metric"] == "mean_kappa2_direct"
        assert "beta" not in doc["rows"][0]   # None values dropped

    def test_render_validates_format(self):
        with pytest.raises(ValidationError, match="format"):
            self.make().render("parquet")

    def test_write_matches_render(self, tmp_path):
        res = self.make()
        path = tmp_path / "out.csv"
        res.write(path, "csv")
        assert path.read_bytes() == res.to_csv_text().encode()


class TestRunTable1:
    def test_degenerate_degree_gives_unit_kappa(self):
        res = run_table1(ExperimentConfig(experiment="table1", N=0, n=20, trials=1))
        vals = {r["metric"]: r["value"] for r in res.rows}
        assert vals["mean_kappa2_direct"] == pytest.approx(1.0)
        assert vals["mean_kappa2_transformed"] == pytest.approx(1.0)
        assert vals["singular_trials_direct"] == 0.0

    def test_sweep_covers_grid(self):
        res = run_table1(ExperimentConfig(experiment="table1", trials=1))
        assert len(res.rows) == 4 * len(TABLE1_SWEEP)
        cells = {(r["alpha"], r["N"], r["n"]) for r in res.rows}
        assert cells == set(TABLE1_SWEEP)

    def test_seed_lineage_strings(self):
        res = run_table1(ExperimentConfig(experiment="table1", N=3, n=20,
                                          trials=1, seed=5))
        seeds = {r["seed"] for r in res.rows}
        assert any(s.startswith("5/table1/direct") for s in seeds)
        assert any(s.startswith("5/table1/transformed") for s in seeds)

    def test_echo_resolves_defaults_and_drops_out(self):
        res = run_table1(ExperimentConfig(experiment="table1", N=3, n=20,
                                          trials=1, out="/tmp/somewhere.csv"))
        assert res.config["trials"] == 1
        assert "out" not in res.config

    def test_wrong_experiment_rejected(self):
        with pytest.raises(ValidationError, match="runner expects"):
            run_table1(ExperimentConfig(experiment="table2"))

    def test_byte_determinism_across_threads(self):
        cfg = ExperimentConfig(experiment="table1", trials=2, seed=3)
        a = run_table1(cfg, threads=1).to_csv_text()
        b = run_table1(cfg, threads=3).to_csv_text()
        assert a == b

    def test_rerun_byte_identical(self):
        cfg = ExperimentConfig(experiment="table1", N=4, n=30, trials=2, seed=1)
        assert run_table1(cfg).to_json_text() == run_table1(cfg).to_json_text()


class TestRunTable2:
    def test_single_cell_metrics(self):
        res = run_table2(ExperimentConfig(experiment="table2", s=2.0, N=8,
                                          n=100, trials=2, seed=0))
        vals = {r["metric"]: r["value"] for r in res.rows}
        assert vals["ineq47_bound"] == pytest.approx(ineq47_bound(2.0, 8))
        assert vals["bound_exceeded"] in (0.0, 1.0)
        assert vals["singular_trials"] == 0.0
        assert 1.0 < vals["cumulative_kappa"] < vals["ineq47_bound"]

    def test_deterministic(self):
        cfg = ExperimentConfig(experiment="table2", s=1.5, N=8, n=80, trials=2)
        assert run_table2(cfg).to_csv_text() == run_table2(cfg).to_csv_text()


class TestRunTable3:
    def test_noiseless_fit_is_tight(self):
        # sigma = 0 leaves only the polynomial approximation floor
        res = run_table3(ExperimentConfig(experiment="table3", sigma=0.0,
                                          s=2.0, N=30, trials=1))
        vals = {r["metric"]: r["value"] for r in res.rows}
        assert vals["mse_npreg"] < 2e-4
        assert vals["singular_trials"] == 0.0

    def test_bandwidth_defaults_to_degree(self):
        res = run_table3(ExperimentConfig(experiment="table3", sigma=0.1,
                                          s=1.0, N=10, trials=1))
        assert all(r["c"] == 10.0 for r in res.rows)

    def test_bandwidth_override(self):
        res = run_table3(ExperimentConfig(experiment="table3", sigma=0.1,
                                          s=1.0, N=10, trials=1, bandwidth=25.0))
        assert all(r["c"] == 25.0 for r in res.rows)

    def test_echo_includes_lambda_grid(self):
        res = run_table3(ExperimentConfig(experiment="table3", sigma=0.1,
                                          s=1.0, N=10, trials=1,
                                          lambda_grid=[1e-6, 1e-3]))
        assert res.config["lambda_grid"] == [1e-6, 1e-3]


class TestRunTable4:
    def test_noiseless_estimation_error_vanishes(self):
        res = run_table4(ExperimentConfig(experiment="table4", sigma=0.0,
                                          s=2.0, n=100, trials=1))
        vals = {r["metric"]: r["value"] for r in res.rows}
        assert vals["e2"] <= 1e-10
        assert vals["e0"] <= 1e-10
        assert vals["singular_trials"] == 0.0

    def test_row_structure(self):
        res = run_table4(ExperimentConfig(experiment="table4", s=1.5, n=100,
                                          trials=2, seed=4))
        metrics = [r["metric"] for r in res.rows]
        assert metrics == ["e0", "e2", "cumulative_kappa", "singular_trials"]
        assert all(r["N"] == 50 and r["sigma"] == 0.5 for r in res.rows)


class TestRunLfrSim:
    def test_per_trial_rows(self):
        res = run_lfr_sim(ExperimentConfig(experiment="custom", trials=2,
                                           n=150, N=20))
        assert [r["metric"] for r in res.rows] == [
            "e0", "e2", "cumulative_kappa"] * 2
        assert all(np.isfinite(r["value"]) for r in res.rows)

    def test_deterministic(self):
        cfg = ExperimentConfig(experiment="custom", trials=2, n=150, N=20, seed=8)
        assert run_lfr_sim(cfg).to_csv_text() == run_lfr_sim(cfg).to_csv_text()


class TestRunTimeseries:
    def test_plot_rows_and_diagnostics(self, tmp_path):
        path = write_series_csv(tmp_path / "series.csv")
        cfg = ExperimentConfig(experiment="covid", csv=str(path), n=50, N=8,
                               seed=1)
        res, fit_result = run_timeseries(cfg)
        assert res.columns == ("day", "observed", "fitted")
        assert len(res.rows) == 60
        diag = res.config["diagnostics"]
        assert diag["m"] == 60
        assert math.isfinite(diag["kappa2"])
        assert fit_result.dataset.m == 60

    def test_requires_csv(self):
        with pytest.raises(ValidationError, match="csv"):
            run_timeseries(ExperimentConfig(experiment="covid"))


class TestTimingComparison:
    def test_reports_positive_times(self):
        t = timing_comparison(n=100, repeats=2)
        assert set(t) == {"npreg_seconds", "krr_seconds"}
        assert t["npreg_seconds"] > 0 and t["krr_seconds"] > 0
