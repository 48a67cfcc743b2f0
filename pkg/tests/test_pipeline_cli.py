import json
import os
import subprocess
import sys

import pytest
from click.testing import CliRunner

from syndarin import pipeline
from syndarin.assembly import verify_dataset
from syndarin.cli import cli
from syndarin.errors import (
    ConfigInvalidError,
    MissingUpstreamError,
    StaleUpstreamError,
)

from conftest import FIXTURES

ALL_DATA_STAGES = ("mine", "generate", "translate", "validate", "assemble", "report")


def run_all_stages(cfg):
    providers = pipeline.build_providers(cfg)
    return {
        stage: pipeline.run_stage(stage, cfg, providers=providers)
        for stage in ALL_DATA_STAGES
    }


class TestPipelineStages:
    def test_full_run_and_funnel(self, run_config):
        results = run_all_stages(run_config)
        assert results["mine"]["accepted"] == 8
        manifest = json.loads(run_config.path("manifest.json").read_text())
        counts = manifest["counts"]
        chain = [counts[k] for k in ("generated", "deduped", "verbatim_kept",
                                     "translated", "validated")]
        assert all(a >= b for a, b in zip(chain, chain[1:]))
        assert verify_dataset(run_config.workspace_dir) == []

    def test_missing_upstream(self, run_config):
        with pytest.raises(MissingUpstreamError):
            pipeline.run_stage("validate", run_config)

    def test_stale_upstream_detected(self, run_config):
        run_all_stages(run_config)
        # regenerate an upstream stage only; downstream consumers must refuse
        pipeline.run_stage("mine", run_config)
        paragraphs = run_config.path("paragraphs.jsonl")
        paragraphs.write_text(
            paragraphs.read_text(encoding="utf-8") + "\n", encoding="utf-8"
        )
        with pytest.raises(StaleUpstreamError):
            pipeline.run_stage("generate", run_config)
        # --force overrides
        pipeline.run_stage("generate", run_config, force=True)

    def test_transitive_staleness(self, run_config):
        run_all_stages(run_config)
        generated = run_config.path("generated.jsonl")
        generated.write_text(
            generated.read_text(encoding="utf-8") + "\n", encoding="utf-8"
        )
        # translated.jsonl itself is untouched, but its producer consumed an
        # older generated.jsonl
        with pytest.raises(StaleUpstreamError):
            pipeline.run_stage("validate", run_config)

    def test_rerun_is_byte_identical(self, run_config):
        run_all_stages(run_config)
        files = ["paragraphs.jsonl", "generated.jsonl", "translated.jsonl",
                 "validated.jsonl", "train.jsonl", "test.jsonl", "manifest.json"]
        first = {f: run_config.path(f).read_bytes() for f in files}
        run_all_stages(run_config)
        second = {f: run_config.path(f).read_bytes() for f in files}
        assert first == second

    def test_bench_run_and_probes(self, run_config):
        run_all_stages(run_config)
        run = pipeline.run_bench(run_config, "hash-chooser", 2, seed=33)
        assert run_config.path("eval_hash-chooser_2.json").exists()
        assert len(run.predictions) == len(
            list(run_config.path("test.jsonl").read_text().splitlines())
        )
        names = pipeline.write_probe_files(run_config)
        assert len(names) == 6
        full_train = run_config.path("probe_full_train.jsonl").read_bytes()
        assert full_train == run_config.path("train.jsonl").read_bytes()
        question_only = [
            json.loads(l)
            for l in run_config.path("probe_question_only_test.jsonl")
            .read_text()
            .splitlines()
        ]
        assert all(r["paragraph"] == "" for r in question_only)

    def test_unknown_stage(self, run_config):
        with pytest.raises(ConfigInvalidError):
            pipeline.run_stage("remix", run_config)


class TestConfigLoading:
    def test_missing_seed_rejected(self, tmp_path):
        from syndarin.config import load_config

        doc = {
            "workspace_dir": str(tmp_path),
            "seeds": {"balance": 1, "split": 2},
            "providers": {"mode": "mock",
                          "mock_articles": str(FIXTURES / "mock_articles.json")},
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ConfigInvalidError):
            load_config(path)

    def test_missing_mock_articles_rejected(self, tmp_path):
        from syndarin.config import load_config

        doc = {
            "workspace_dir": str(tmp_path),
            "seeds": {"balance": 1, "split": 2, "bench": 3, "annotation": 4},
            "providers": {"mode": "mock", "mock_articles": "absent.json"},
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ConfigInvalidError):
            load_config(path)

    def test_no_config_at_all(self, monkeypatch):
        from syndarin.config import ENV_CONFIG, load_config

        monkeypatch.delenv(ENV_CONFIG, raising=False)
        with pytest.raises(ConfigInvalidError):
            load_config(None)


def _write_cli_config(tmp_path):
    ws = tmp_path / "ws"
    ws.mkdir(exist_ok=True)
    (ws / "titles.txt").write_text(
        (FIXTURES / "titles_10.txt").read_text(encoding="utf-8"), encoding="utf-8"
    )
    doc = {
        "workspace_dir": str(ws),
        "titles_file": "titles.txt",
        "seeds": {"balance": 11, "split": 22, "bench": 33, "annotation": 44},
        "validation": {"k_fuzz": 0.8, "k_sim": 0.02},
        "providers": {
            "mode": "mock",
            "mock_articles": str((FIXTURES / "mock_articles.json").resolve()),
        },
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path, ws


class TestCli:
    def test_stage_sequence_and_verify(self, tmp_path):
        config_path, ws = _write_cli_config(tmp_path)
        runner = CliRunner()
        for stage in ("mine", "generate", "translate", "validate", "assemble"):
            result = runner.invoke(cli, ["--config", str(config_path), stage])
            assert result.exit_code == 0, result.output
        result = runner.invoke(cli, ["--config", str(config_path), "dataset", "verify"])
        assert result.exit_code == 0
        assert "dataset ok" in result.output

    def test_report_diversity(self, tmp_path):
        config_path, ws = _write_cli_config(tmp_path)
        runner = CliRunner()
        runner.invoke(cli, ["--config", str(config_path), "mine"])
        runner.invoke(cli, ["--config", str(config_path), "generate"])
        result = runner.invoke(cli, ["--config", str(config_path), "report", "diversity"])
        assert result.exit_code == 0
        assert "Which" in result.output
        assert (ws / "diversity_report.json").exists()

    def test_bench_subcommands(self, tmp_path):
        config_path, ws = _write_cli_config(tmp_path)
        runner = CliRunner()
        for stage in ("mine", "generate", "translate", "validate", "assemble"):
            runner.invoke(cli, ["--config", str(config_path), stage])
        result = runner.invoke(
            cli,
            ["--config", str(config_path), "bench", "run",
             "--model", "hash-chooser", "--shots", "2", "--seed", "33"],
        )
        assert result.exit_code == 0, result.output
        assert "accuracy" in result.output
        result = runner.invoke(cli, ["--config", str(config_path), "bench", "probes"])
        assert result.exit_code == 0
        # score an externally-produced prediction file
        gold = [json.loads(l) for l in (ws / "test.jsonl").read_text().splitlines()]
        preds_path = tmp_path / "preds.jsonl"
        preds_path.write_text(
            "\n".join(
                json.dumps({"item_id": r["item_id"], "chosen_index": r["correct_index"]})
                for r in gold
            )
        )
        result = runner.invoke(
            cli,
            ["--config", str(config_path), "bench", "score",
             "--predictions", str(preds_path)],
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["accuracy"] == 1.0

    def test_annotation_batch_creation(self, tmp_path):
        config_path, ws = _write_cli_config(tmp_path)
        runner = CliRunner()
        for stage in ("mine", "generate", "translate", "validate", "assemble"):
            runner.invoke(cli, ["--config", str(config_path), stage])
        result = runner.invoke(
            cli,
            ["--config", str(config_path), "annotate-serve",
             "--batch-id", "b1", "--n-flagged", "3", "--create-only"],
        )
        assert result.exit_code == 0, result.output
        tasks_file = ws / "annotation" / "batches" / "b1" / "tasks.jsonl"
        tasks = [json.loads(l) for l in tasks_file.read_text().splitlines()]
        test_count = len((ws / "test.jsonl").read_text().splitlines())
        assert len(tasks) == test_count + 3
        assert sum(t["hidden_flag"] == "flagged" for t in tasks) == 3

    def test_annotate_seed_demo(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            cli,
            ["annotate-seed-demo", "--data-dir", str(tmp_path / "demo"),
             "--batch-id", "demo", "--n-tasks", "5"],
        )
        assert result.exit_code == 0
        tasks_file = tmp_path / "demo" / "batches" / "demo" / "tasks.jsonl"
        assert len(tasks_file.read_text().splitlines()) == 5

    def test_titles_from_category(self, tmp_path):
        config_path, ws = _write_cli_config(tmp_path)
        runner = CliRunner()
        result = runner.invoke(
            cli,
            ["--config", str(config_path), "titles-from-category",
             "--category", "Anything", "--limit", "4"],
        )
        assert result.exit_code == 0, result.output
        titles = (ws / "titles.txt").read_text(encoding="utf-8").splitlines()
        assert len(titles) == 4

    def test_kept_items_satisfy_gate_post_hoc(self, run_config):
        run_all_stages(run_config)
        kept_ids = {
            json.loads(l)["item_id"]
            for l in run_config.path("validated.jsonl").read_text().splitlines()
        }
        cfg = run_config.validation
        for line in run_config.path("validation_report.jsonl").read_text().splitlines():
            report = json.loads(line)
            kept = report["item_id"] in kept_ids
            passes = (
                report["fuzzy_score"] > cfg.k_fuzz
                and report["similarity"] > cfg.k_sim
            )
            assert kept == passes, report
            assert (report["verdict"] == "kept") == kept


class TestExitCodes:
    def _main(self, args, env=None):
        environment = {**os.environ, "PYTHONPATH": ""}
        environment.pop("SYNDARIN_CONFIG", None)
        if env:
            environment.update(env)
        return subprocess.run(
            [sys.executable, "-m", "syndarin.cli", *args],
            capture_output=True,
            text=True,
            env=environment,
        )

    def test_config_invalid_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        proc = self._main(["--config", str(bad), "mine"])
        assert proc.returncode == 2

    def test_missing_upstream_exit_3(self, tmp_path):
        config_path, _ = _write_cli_config(tmp_path)
        proc = self._main(["--config", str(config_path), "validate"])
        assert proc.returncode == 3

    def test_env_var_config(self, tmp_path):
        config_path, _ = _write_cli_config(tmp_path)
        proc = self._main(["mine"], env={"SYNDARIN_CONFIG": str(config_path)})
        assert proc.returncode == 0, proc.stderr

    def test_stale_upstream_exit_4(self, tmp_path):
        config_path, ws = _write_cli_config(tmp_path)
        for stage in ("mine", "generate"):
            assert self._main(["--config", str(config_path), stage]).returncode == 0
        paragraphs = ws / "paragraphs.jsonl"
        paragraphs.write_text(paragraphs.read_text() + "\n")
        proc = self._main(["--config", str(config_path), "generate"])
        assert proc.returncode == 4
