"""End-to-end tests for the causal-reg command line."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from causal_reg.config import AppConfig
from causal_reg.errors import ConfigError
from causal_reg.estimation import compute_moments
from causal_reg.experiments.context import RunContext
from causal_reg.experiments.drivers import Compare
from causal_reg.experiments.ingest import ingest_csv
from causal_reg.experiments.registry import EXPERIMENT_REGISTRY, get_experiment
from causal_reg.experiments.results import ALL_REPLICATIONS, ResultTable, summarize
from causal_reg.experiments.runner import build_parser, main


def _last_json(text: str) -> dict:
    return json.loads(text.strip().splitlines()[-1])


def _identical_envs_csv(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(10, 2))
    y = x @ [1.0, -1.0] + rng.normal(size=10)
    rows = [f"{a:.17g},{b:.17g},{t:.17g}" for (a, b), t in zip(x, y)]
    lines = ["x1,x2,y,env"] + [f"{r},{label}" for label in ("obs", "shift") for r in rows]
    p = tmp_path / "same.csv"
    p.write_text("\n".join(lines) + "\n")
    return p


class TestParser:
    def test_subcommands(self):
        parser = build_parser()
        for command in ("simulate", "fit", "path", "select", "bootstrap", "bound", "experiment"):
            args = parser.parse_args([command])
            assert args.command == command

    def test_experiment_name_is_positional(self):
        args = build_parser().parse_args(["experiment", "coverage", "--replications", "12"])
        assert (args.name, args.replications) == ("coverage", 12)


class TestCommands:
    def test_path_on_worked_example(self, tmp_path, capsys):
        data = tmp_path / "worked.csv"
        data.write_text("x1,y,env\n1,1,obs\n2,4,shift\n")
        config = tmp_path / "config.yaml"
        config.write_text("run_id: worked\ngrid:\n  values: [0, 1, inf]\n")
        code = main(["path", "--config", str(config), "--data", str(data), "--out", str(tmp_path)])
        assert code == 0
        assert _last_json(capsys.readouterr().out)["command"] == "path"

        table = ResultTable.read_csv(tmp_path / "worked_path.csv")
        assert table.value("coef_1", lam="0") == pytest.approx(1.8)
        assert table.value("coef_1", lam="1") == pytest.approx(2.0)
        assert table.value("coef_1", lam="inf") == pytest.approx(7.0 / 3.0)

    def test_fit_with_infinite_lambda_flag(self, tmp_path):
        data = tmp_path / "worked.csv"
        data.write_text("x1,y,env\n1,1,obs\n2,4,shift\n")
        assert main(["fit", "--data", str(data), "--lam", "inf", "--out", str(tmp_path)]) == 0
        table = ResultTable.read_csv(tmp_path / "run_fit.csv")
        assert table.value("coef_1", lam="inf") == pytest.approx(7.0 / 3.0)

    def test_select_on_identical_environments(self, tmp_path):
        data = _identical_envs_csv(tmp_path)
        args = ["select", "--data", str(data), "--out", str(tmp_path), "--paired", "--folds", "2"]
        assert main(args) == 0
        table = ResultTable.read_csv(tmp_path / "run_select.csv")
        assert table.value("chosen_lambda") == math.inf

    def test_simulate_is_deterministic(self, tmp_path):
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["simulate", "--seed", "7", "--n", "100", "--out", str(out)]) == 0
            outputs.append(
                ((out / "run_simulate_data.csv").read_bytes(), (out / "run_simulate.csv").read_bytes())
            )
        assert outputs[0] == outputs[1]

    def test_simulate_round_trips_through_ingest(self, tmp_path):
        assert main(["simulate", "--seed", "7", "--n", "150", "--n-obs", "120", "--out", str(tmp_path)]) == 0
        back = ingest_csv(tmp_path / "run_simulate_data.csv")

        config = AppConfig.model_validate({"seed": 7, "simulation": {"n": 150, "n_obs": 120}})
        original = RunContext.from_config(config).simulate(150, 120)
        m, m_back = compute_moments(original), compute_moments(back)
        np.testing.assert_allclose(m_back.g_diff.entries, m.g_diff.entries, rtol=0, atol=1e-12)
        np.testing.assert_allclose(m_back.z_diff, m.z_diff, rtol=0, atol=1e-12)
        assert abs(m_back.yy_e - m.yy_e) < 1e-12

    def test_threads_do_not_change_output(self, tmp_path):
        outputs = []
        for threads in ("1", "8"):
            out = tmp_path / threads
            args = ["select", "--seed", "3", "--n", "200", "--threads", threads, "--out", str(out)]
            assert main(args) == 0
            outputs.append((out / "run_select.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_bootstrap_and_bound_run(self, tmp_path):
        common = ["--seed", "4", "--n", "300", "--out", str(tmp_path)]
        assert main(["bootstrap", *common, "--b", "20", "--lam", "0.3"]) == 0
        assert main(["bound", *common, "--lam", "0.2", "--tau", "10"]) == 0
        bound = ResultTable.read_csv(tmp_path / "run_bound.csv")
        lam = "0.20000000000000001"
        assert bound.value("worst_risk_bound", lam=lam) >= bound.value("bound_core", lam=lam)
        assert bound.value("plug_in", lam=lam) == 1.0
        boot = ResultTable.read_csv(tmp_path / "run_bootstrap.csv")
        assert len(boot.metric("draw")) == 20


class TestErrors:
    def test_missing_config(self, tmp_path, capsys):
        code = main(["fit", "--config", str(tmp_path / "absent.yaml")])
        assert code == 2
        record = _last_json(capsys.readouterr().out)
        assert record["error"] == "ConfigError"
        assert record["exit_code"] == 2

    def test_unknown_label(self, tmp_path, capsys):
        data = tmp_path / "bad.csv"
        data.write_text("x1,y,env\n1,1,obs\n2,4,test\n")
        code = main(["fit", "--data", str(data), "--out", str(tmp_path)])
        assert code == 3
        assert _last_json(capsys.readouterr().out)["error"] == "UnknownLabel"

    def test_unknown_experiment(self, tmp_path):
        assert main(["experiment", "nope", "--out", str(tmp_path)]) == 2

    def test_registry_lookup(self):
        with pytest.raises(ConfigError):
            get_experiment("nope")
        get_experiment("convergence")
        assert {"convergence", "coverage", "compare", "shifts"} <= set(EXPERIMENT_REGISTRY)


class TestExperiments:
    def test_convergence_smoke(self, tmp_path):
        config = tmp_path / "config.yaml"
        config.write_text("experiment:\n  sample_sizes: [100, 1000]\n")
        args = ["experiment", "convergence", "--config", str(config), "--replications", "5", "--out", str(tmp_path)]
        assert main(args) == 0
        table = ResultTable.read_csv(tmp_path / "run_experiment.csv")
        per_replication = table.frame[table.frame["replication"] != ALL_REPLICATIONS]
        assert len(per_replication) == 2 * 5 * 3
        assert len(table) - len(per_replication) == 2 * 3
        means = table.metric("mean_abs_normalized_excess_risk").sort_values("n")
        expected = summarize(table, "abs_normalized_excess_risk", "mean")
        np.testing.assert_allclose(means["value"].to_numpy(), expected["value"].to_numpy(), rtol=1e-15)
        assert (tmp_path / "run_experiment.svg").exists()

    def test_compare_summaries(self):
        config = AppConfig.model_validate({
            "seed": 8,
            "experiment": {
                "name": "compare",
                "replications": 3,
                "sample_sizes": [200],
                "oos_shift_scales": [100.0],
                "test_n": 2000,
            },
        })
        table = Compare().run(RunContext.from_config(config))
        ratios = table.metric("oos_ratio@100")["value"].to_numpy()
        assert table.value("median_oos_ratio@100", replication=ALL_REPLICATIONS) == float(np.median(ratios))
        cv = table.metric("oos_risk_cv@100")["value"].to_numpy()
        np.testing.assert_allclose(table.metric("normalized_oos_risk_cv@100")["value"].to_numpy(), cv / 100.0)
        dantzig = table.value("median_normalized_oos_risk_dantzig@100", replication=ALL_REPLICATIONS)
        assert dantzig == pytest.approx(float(np.median(table.metric("oos_risk_dantzig@100")["value"])) / 100.0)
        assert set(table.metric("chosen_index")["value"]) <= set(map(float, range(22)))

    @pytest.mark.slow
    def test_cross_validation_beats_dantzig_at_small_n(self):
        config = AppConfig.model_validate({
            "seed": 21,
            "threads": 4,
            "experiment": {
                "name": "compare",
                "replications": 20,
                "sample_sizes": [100],
                "oos_shift_scales": [100.0],
                "test_n": 100_000,
            },
        })
        table = Compare().run(RunContext.from_config(config))
        ratios = table.metric("oos_ratio@100")["value"]
        assert len(ratios) == 20
        assert (ratios <= 1.0).sum() >= 16

    @pytest.mark.slow
    def test_ratio_rises_from_small_to_large_n(self):
        config = AppConfig.model_validate({
            "seed": 23,
            "threads": 4,
            "experiment": {
                "name": "compare",
                "replications": 20,
                "sample_sizes": [100, 10_000],
                "oos_shift_scales": [100.0],
                "test_n": 100_000,
            },
        })
        table = Compare().run(RunContext.from_config(config))
        medians = table.metric("median_oos_ratio@100").sort_values("n")
        assert list(medians["n"]) == [100, 10_000]
        small, large = medians["value"]
        assert small <= 1.0
        assert large > small
