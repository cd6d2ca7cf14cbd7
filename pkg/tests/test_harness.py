import json

import numpy as np
import pytest

from sibre.agents import CurvePoint, RunResult, SeedRun, load_checkpoint
from sibre.errors import ConfigError
from sibre.harness import (
    PRESETS,
    RunStatistics,
    config_for_value,
    expand_config,
    load_config,
    load_settings,
    parse_seeds,
    plot_aggregate,
    run_experiment,
    run_sweep,
    run_transfer,
    trailing_mean,
)
from sibre.harness.cli import build_parser, main
from sibre.harness.curves import AGGREGATE_COLUMNS, compare_arms, read_csv, write_csv


def tiny_frozenlake(seeds=(0, 1), budget=30):
    return expand_config(
        {"preset": "frozenlake", "seeds": list(seeds), "final_window": 10, "agent": {"config": {"budget": budget}}}
    )


def tiny_chain_transfer(stage_two_budget):
    return expand_config(
        {
            "environment": {"id": "chain", "params": {}},
            "agent": {
                "id": "a2c",
                "config": {"budget_kind": "frames", "budget": 60, "hidden_dims": [8], "learning_rate": 1e-3},
            },
            "shaper": {"enabled": True, "schedule": {"kind": "constant", "value": 0.5}},
            "seeds": [0, 1],
            "transfer": {"environment": {"id": "chain", "params": {"turn_limit": 50}}, "budget": stage_two_budget},
        }
    )


class TestConfig:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_expansion_is_a_fixed_point(self, name):
        config = expand_config({"preset": name})
        again = expand_config(config.to_dict())
        assert again == config
        assert again.config_hash == config.config_hash

    def test_alias(self):
        assert expand_config({"preset": "frozenlake_q"}).preset == "frozenlake"

    def test_hash_tracks_content(self):
        assert tiny_frozenlake(seeds=(0,)).config_hash != tiny_frozenlake(seeds=(1,)).config_hash
        assert tiny_frozenlake().config_hash == tiny_frozenlake().config_hash

    def test_overrides_merge_into_preset(self):
        config = tiny_frozenlake()
        assert config.agent_config.budget == 30
        assert config.agent_config.learning_rate == 0.1
        assert config.shaper.schedule.kind == "linear_staircase"

    def test_full_scale(self):
        config = expand_config({"preset": "transfer_doorkey"}, full_scale=True)
        assert config.agent_config.budget == 800_000
        assert config.transfer.budget == 2_400_000

    @pytest.mark.parametrize(
        "data",
        [
            {"preset": "atari"},
            {"preset": "frozenlake", "sweep": {"axis": "gamma"}},
            {"preset": "frozenlake", "seeds": []},
            {"preset": "frozenlake", "seeds": [1, 1]},
            {"preset": "frozenlake", "agent": {"config": {"gamma": 2.0}}},
            {"preset": "frozenlake", "shaper": {"schedule": {"kind": "constant", "value": 1.5}}},
            {"preset": "frozenlake", "transfer": {"environment": {"id": "frozenlake"}, "budget": 5}},
            {"environment": {"id": "pong"}, "agent": {"id": "dqn"}},
            {"agent": {"id": "dqn"}},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(ConfigError):
            expand_config(data)

    def test_load_config_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"preset": "cartpole_cont", "agent": {"config": {"budget": 500}}}))
        config = load_config(path, seeds=[3, 4], output_dir="elsewhere")
        assert config.is_continuing and config.seeds == (3, 4)
        assert config.agent_config.budget == 500 and config.output_dir == "elsewhere"
        assert config.shaper.mode == "continuing" and config.shaper.update_period == 500

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    def test_parse_seeds(self):
        assert parse_seeds("0-2,7") == [0, 1, 2, 7]
        with pytest.raises(ConfigError):
            parse_seeds("a-b")

    def test_sweep_value_config(self):
        config = config_for_value(tiny_frozenlake(), "beta_values", 0.05)
        assert config.shaper.schedule.kind == "constant" and config.shaper.schedule.value == 0.05
        kept = config_for_value(tiny_frozenlake(), "beta_values", "schedule")
        assert kept.shaper.schedule.kind == "linear_staircase"


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("SIBRE_WORKERS", "SIBRE_OUTPUT_DIR", "SIBRE_LOG_LEVEL"):
            monkeypatch.delenv(name, raising=False)
        settings = load_settings()
        assert settings.workers == 1 and settings.output_dir == "results"

    @pytest.mark.parametrize("workers", ["many", "0"])
    def test_bad_workers(self, monkeypatch, workers):
        monkeypatch.setenv("SIBRE_WORKERS", workers)
        with pytest.raises(ConfigError):
            load_settings()


class TestExperiment:
    def test_outputs_repeat_byte_for_byte(self, tmp_path, settings):
        config = tiny_frozenlake()
        first = run_experiment(config, tmp_path / "a", settings)
        second = run_experiment(config, tmp_path / "b", settings)
        names = ["sibre/seed_0.csv", "sibre/seed_1.csv", "baseline/seed_0.csv", "aggregate.csv", "config.json"]
        for name in names:
            assert (first.output_dir / name).read_bytes() == (second.output_dir / name).read_bytes()
        assert (first.output_dir / "report.md").exists()

    def test_aggregate_matches_seed_files(self, tmp_path, settings):
        outcome = run_experiment(tiny_frozenlake(seeds=(0, 1, 2)), tmp_path, settings)
        aggregate = [r for r in read_csv(outcome.aggregate_path, AGGREGATE_COLUMNS) if r["arm"] == "sibre"]
        curves = [read_csv(p) for p in outcome.seed_paths["sibre"]]
        assert len(aggregate) == 30
        for i, row in enumerate(aggregate):
            returns = np.array([float(c[i]["return"]) for c in curves])
            rhos = np.array([float(c[i]["rho"]) for c in curves])
            assert float(row["mean_return"]) == pytest.approx(returns.mean(), abs=1e-12)
            assert float(row["stderr_return"]) == pytest.approx(returns.std(ddof=1) / np.sqrt(3), abs=1e-12)
            assert float(row["mean_rho"]) == pytest.approx(rhos.mean(), abs=1e-12)
            assert row["num_seeds"] == "3"

    def test_baseline_rows_have_no_threshold(self, tmp_path, settings):
        outcome = run_experiment(tiny_frozenlake(seeds=(0,)), tmp_path, settings)
        rows = read_csv(outcome.seed_paths["baseline"][0])
        assert all(r["rho"] == "" and r["beta"] == "" for r in rows)
        assert all(r["epsilon"] != "" for r in rows)

    def test_single_seed_has_zero_width_band(self, tmp_path, settings):
        outcome = run_experiment(tiny_frozenlake(seeds=(4,)), tmp_path, settings)
        rows = read_csv(outcome.aggregate_path, AGGREGATE_COLUMNS)
        assert all(float(r["stderr_return"]) == 0.0 for r in rows)

    def test_statistics(self, tmp_path, settings):
        outcome = run_experiment(tiny_frozenlake(), tmp_path, settings)
        stats = outcome.statistics["sibre"]
        assert stats.seeds == 2 and stats.episodes == 60
        assert stats.updates == 60


class TestStatistics:
    def test_add(self):
        total = RunStatistics(label="a", frames=10, episodes=2, wall_clock=1.0, seeds=1)
        total.add(RunStatistics(label="b", frames=5, episodes=1, wall_clock=1.5, seeds=1))
        assert (total.frames, total.episodes, total.seeds) == (15, 3, 2)
        assert total.get_frames_per_second() == pytest.approx(6.0)
        with pytest.raises(TypeError):
            total.add("b")

    def test_markdown(self):
        assert "| Frames | 7 |" in str(RunStatistics(label="x", frames=7))


def arm(name, per_seed_returns):
    runs = [
        SeedRun(seed=i, points=[CurvePoint(j, r, None, None, None, 1) for j, r in enumerate(returns)])
        for i, returns in enumerate(per_seed_returns)
    ]
    return RunResult(agent="tabular_q", arm=name, runs=runs)


class TestArmComparison:
    def test_clear_improvement_is_significant(self):
        treatment = arm("sibre", [[0.0, 1.0], [0.0, 0.9]])
        control = arm("baseline", [[0.0, 0.0], [0.0, 0.1]])
        difference, p_value = compare_arms(treatment, control, final_window=1)
        assert difference == pytest.approx(0.9)
        assert p_value < 0.05
        _, reversed_p = compare_arms(control, treatment, final_window=1)
        assert reversed_p > 0.5

    def test_undetermined_p_value(self):
        flat = arm("sibre", [[1.0], [1.0]])
        assert compare_arms(flat, arm("baseline", [[0.0], [0.0]]), None) == (1.0, None)
        assert compare_arms(arm("sibre", [[2.0]]), arm("baseline", [[1.0]]), None) == (1.0, None)

    def test_empty_arm(self):
        with pytest.raises(ConfigError):
            compare_arms(arm("sibre", [[]]), arm("baseline", [[1.0]]), None)

    def test_report_mentions_comparison(self, tmp_path, settings):
        outcome = run_experiment(tiny_frozenlake(), tmp_path, settings)
        assert "one-sided Welch p =" in (outcome.output_dir / "report.md").read_text()


class TestSweep:
    def test_beta_sweep_shares_baseline(self, tmp_path, settings):
        outcome = run_sweep(tiny_frozenlake(seeds=(0,), budget=20), "beta_values", [0.05, 0.1], tmp_path, settings)
        rows = read_csv(outcome.summary_path)
        assert [(r["value"], r["arm"]) for r in rows] == [
            ("0.05", "sibre"),
            ("0.05", "baseline"),
            ("0.1", "sibre"),
            ("0.1", "baseline"),
        ]
        assert rows[1]["mean_return"] == rows[3]["mean_return"]
        assert not (tmp_path / "beta_values_0.1" / "baseline").exists()

    def test_learning_rate_sweep(self, tmp_path, settings):
        outcome = run_sweep(tiny_frozenlake(seeds=(0,), budget=10), "learning_rates", [0.1, 0.5], tmp_path, settings)
        assert len(outcome.outcomes) == 2
        assert outcome.outcomes[1].config.agent_config.learning_rate == 0.5

    @pytest.mark.parametrize("axis,values", [("transfer_stage", [1]), ("beta_values", [])])
    def test_invalid(self, tmp_path, settings, axis, values):
        with pytest.raises(ConfigError):
            run_sweep(tiny_frozenlake(), axis, values, tmp_path, settings)


class TestTransfer:
    def test_zero_second_stage_budget(self, tmp_path, settings):
        outcome = run_transfer(tiny_chain_transfer(0), tmp_path, settings)
        assert outcome.stage2 is None
        assert outcome.combined is outcome.stage1

    def test_curves_and_threshold_continue(self, tmp_path, settings):
        outcome = run_transfer(tiny_chain_transfer(40), tmp_path, settings)
        for first, second in zip(outcome.stage1.results["sibre"].runs, outcome.stage2.results["sibre"].runs):
            assert second.start_rho == first.threshold.rho
            assert second.checkpoint.frames == 100
        for path in outcome.combined.seed_paths["sibre"]:
            indices = [int(r["episode_or_window"]) for r in read_csv(path)]
            assert indices == list(range(len(indices)))
        assert (tmp_path / "stage1" / "aggregate.csv").exists()
        assert (tmp_path / "stage2" / "aggregate.csv").exists()
        assert outcome.combined.statistics["sibre"].frames == 2 * 100

    def test_stage_one_checkpoints_load_back(self, tmp_path, settings):
        outcome = run_transfer(tiny_chain_transfer(40), tmp_path, settings)
        for arm, result in outcome.stage1.results.items():
            for run in result.runs:
                directory = tmp_path / "stage1" / "checkpoints" / arm / f"seed_{run.seed}"
                assert sorted(p.name for p in directory.iterdir()) == ["policy.csv", "state.json", "value.csv"]
                networks, state = load_checkpoint(directory)
                for name, net in run.checkpoint.networks.items():
                    for saved, loaded in zip(net.parameters(), networks[name].parameters()):
                        np.testing.assert_array_equal(saved, loaded)
                assert state["frames"] == 60
                if arm == "sibre":
                    assert state["rho"] == run.threshold.rho
                else:
                    assert state["rho"] is None

    def test_requires_transfer_section(self, tmp_path, settings):
        with pytest.raises(ConfigError):
            run_transfer(tiny_frozenlake(), tmp_path, settings)


class TestPlots:
    def test_trailing_mean(self):
        np.testing.assert_allclose(trailing_mean(np.array([1.0, 3.0, 5.0, 7.0]), 2), [1.0, 2.0, 4.0, 6.0])

    def test_writes_svg(self, tmp_path, settings):
        outcome = run_experiment(tiny_frozenlake(), tmp_path, settings)
        figure = plot_aggregate(outcome.aggregate_path, smoothing_window=5)
        text = figure.read_text()
        assert figure.suffix == ".svg"
        assert "smoothing: trailing mean over 5 points" in text

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path / "aggregate.csv", ["arm", "index", "mean_return"], [{"arm": "sibre", "index": 0, "mean_return": 1.0}])
        with pytest.raises(ConfigError):
            plot_aggregate(path)


class TestCli:
    def test_run(self, tmp_path, capsys):
        config = tmp_path / "tiny.json"
        config.write_text(json.dumps({"preset": "frozenlake", "agent": {"config": {"budget": 15}}}))
        code = main(["run", "--config", str(config), "--seeds", "0", "--out", str(tmp_path / "out"), "--no-plots"])
        assert code == 0
        printed = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert len(printed["config_hash"]) == 16
        assert (tmp_path / "out" / "aggregate.csv").exists()

    def test_error_is_reported_as_json(self, tmp_path, capsys):
        code = main(["run", "--preset", "atari", "--out", str(tmp_path)])
        assert code == 2
        error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert error["error"] == "ConfigError"

    def test_verify_theorem_writes_case_files(self, tmp_path, capsys):
        code = main(["verify-theorem", "--trials", "500", "--updates", "10", "--out", str(tmp_path)])
        assert code in (0, 1)
        for case in (1, 2, 3):
            assert (tmp_path / "theorem" / f"dynamics_case{case}.csv").exists()
        verdicts = json.loads(capsys.readouterr().out.strip().splitlines()[-1])["verdicts"]
        assert set(verdicts) == {"below", "above", "at"}

    @pytest.mark.parametrize("flag", ["--paper-scale", "--full-scale"])
    def test_full_budget_flag_spellings(self, flag):
        args = build_parser().parse_args(["run", "--preset", "frozenlake", flag])
        assert args.full_scale

    @pytest.mark.parametrize(
        "argv",
        [
            ["run", "--preset", "frozenlake", "--bogus"],
            ["run", "--preset", "frozenlake", "--seeds", "zero"],
            ["verify-theorem", "--trials", "many"],
            ["launch"],
        ],
    )
    def test_usage_errors_are_reported_as_json(self, argv, capsys):
        assert main(argv) == 2
        error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert error["error"] == "ConfigError"
        assert error["message"].startswith("sibre")
