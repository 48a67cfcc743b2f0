"""Command-line entry points for the pipeline, benchmark and annotation tools.

Exit codes: 0 success, 2 invalid config, 3 missing upstream, 4 stale
upstream, 5 data error, 6 provider error, 1 anything unexpected.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import assembly, benchmark, pipeline
from .annotation.demo import seed_demo_batch
from .annotation.models import create_annotation_batch
from .annotation.store import AnnotationStore
from .config import ENV_CONFIG, load_config
from .errors import DataError, SyndarinError
from .records import read_jsonl


@click.group()
@click.option(
    "--config",
    "config_path",
    envvar=ENV_CONFIG,
    type=click.Path(path_type=Path),
    default=None,
    help=f"Run config JSON (or set {ENV_CONFIG}).",
)
@click.pass_context
def cli(ctx, config_path):
    ctx.obj = config_path


def _cfg(ctx):
    return load_config(ctx.obj)


def _stage_command(name):
    @click.option("--force", is_flag=True, help="Skip upstream freshness checks.")
    @click.pass_context
    def command(ctx, force):
        result = pipeline.run_stage(name, _cfg(ctx), force=force)
        click.echo(json.dumps(result, ensure_ascii=False, sort_keys=True))

    command.__name__ = name.replace("-", "_")
    return cli.command(name)(command)


mine = _stage_command("mine")
generate = _stage_command("generate")
translate = _stage_command("translate")
validate = _stage_command("validate")
assemble = _stage_command("assemble")


@cli.group()
def report():
    """Dataset analysis reports."""


@report.command("diversity")
@click.pass_context
def report_diversity(ctx):
    from .diversity import render_table

    counts = pipeline.run_stage("report", _cfg(ctx))
    click.echo(render_table(counts))


@cli.group()
def bench():
    """Few-shot benchmarking over the assembled dataset."""


@bench.command("run")
@click.option("--model", "model_id", required=True)
@click.option("--shots", type=click.Choice(["0", "2", "4", "6"]), required=True)
@click.option("--seed", type=int, required=True)
@click.pass_context
def bench_run(ctx, model_id, shots, seed):
    run = pipeline.run_bench(_cfg(ctx), model_id, int(shots), seed)
    click.echo(
        json.dumps(
            {
                "model_id": run.model_id,
                "k_shots": run.k_shots,
                "accuracy": round(run.accuracy, 4),
                "unparseable": run.unparseable_count,
            },
            sort_keys=True,
        )
    )


@bench.command("probes")
@click.pass_context
def bench_probes(ctx):
    written = pipeline.write_probe_files(_cfg(ctx))
    for name in written:
        click.echo(name)


@bench.command("score")
@click.option(
    "--predictions",
    type=click.Path(exists=True, path_type=Path),
    required=True,
    help="JSONL of {item_id, chosen_index} lines.",
)
@click.pass_context
def bench_score(ctx, predictions):
    cfg = _cfg(ctx)
    gold = list(read_jsonl(cfg.path("test.jsonl")))
    preds = [(r["item_id"], r.get("chosen_index")) for r in read_jsonl(predictions)]
    accuracy, unparseable = benchmark.score_accuracy(preds, gold)
    click.echo(
        json.dumps({"accuracy": round(accuracy, 4), "unparseable": unparseable})
    )


@cli.group()
def dataset():
    """Operations on emitted dataset files."""


@dataset.command("verify")
@click.option("--dir", "directory", type=click.Path(path_type=Path), default=None)
@click.pass_context
def dataset_verify(ctx, directory):
    if directory is None:
        directory = _cfg(ctx).workspace_dir
    problems = assembly.verify_dataset(directory)
    if problems:
        for problem in problems:
            click.echo(f"violation: {problem}", err=True)
        raise DataError(f"{len(problems)} dataset invariant violations")
    click.echo("dataset ok")


@cli.command("titles-from-category")
@click.option("--category", required=True)
@click.option("--limit", type=int, default=300)
@click.pass_context
def titles_from_category(ctx, category, limit):
    cfg = _cfg(ctx)
    providers = pipeline.build_providers(cfg)
    titles = providers.wiki.list_category(category, cfg.source_lang, limit)
    out = cfg.path(cfg.titles_file)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(titles) + "\n", encoding="utf-8")
    click.echo(f"wrote {len(titles)} titles to {out}")


@cli.command("annotate-serve")
@click.option("--data-dir", type=click.Path(path_type=Path), default=None)
@click.option("--batch-id", default="batch-1")
@click.option("--n-flagged", type=int, default=100)
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8712)
@click.option("--create-only", is_flag=True, help="Build the batch and exit.")
@click.pass_context
def annotate_serve(ctx, data_dir, batch_id, n_flagged, host, port, create_only):
    """Build the annotation batch (test set + flagged rejects) and serve it.

    A config is only needed when the batch must still be built from the
    workspace; serving an existing --data-dir works without one.
    """
    if data_dir is None:
        data_dir = _cfg(ctx).path("annotation")
    store = AnnotationStore(data_dir)
    if batch_id not in store.list_batches():
        tasks = _build_batch_from_workspace(_cfg(ctx), batch_id, n_flagged)
        store.save_batch(tasks)
        click.echo(f"created batch {batch_id} with {len(tasks)} tasks")
    if create_only:
        return
    from .annotation.service import serve

    click.echo(f"serving batches from {data_dir} on http://{host}:{port}")
    serve(data_dir, host=host, port=port)


def _build_batch_from_workspace(cfg, batch_id, n_flagged):
    from .errors import MissingUpstreamError
    from .records import dataset_record, item_from_record

    for name in ("test.jsonl", "translated.jsonl", "validation_report.jsonl",
                 "paragraphs.jsonl"):
        if not cfg.path(name).exists():
            raise MissingUpstreamError(f"annotation batch needs {name}")
    test_records = list(read_jsonl(cfg.path("test.jsonl")))
    verdicts = {
        r["item_id"]: r["verdict"] for r in read_jsonl(cfg.path("validation_report.jsonl"))
    }
    paragraphs = {
        r["pair_id"]: r["target_text"] for r in read_jsonl(cfg.path("paragraphs.jsonl"))
    }
    rejects = []
    for rec in read_jsonl(cfg.path("translated.jsonl")):
        item = item_from_record(rec)
        if verdicts.get(item.item_id, "kept") != "kept":
            rejects.append(dataset_record(item, paragraphs[item.pair_id]))
    return create_annotation_batch(
        test_records,
        rejects,
        batch_id,
        n_flagged=n_flagged,
        seed=cfg.seed("annotation"),
    )


@cli.command("annotate-seed-demo")
@click.option("--data-dir", type=click.Path(path_type=Path), required=True)
@click.option("--batch-id", default="demo")
@click.option("--n-tasks", type=int, default=5)
@click.option("--seed", type=int, default=7)
def annotate_seed_demo(data_dir, batch_id, n_tasks, seed):
    """Create a small self-contained demo batch (no pipeline required)."""
    tasks = seed_demo_batch(data_dir, batch_id, n_tasks=n_tasks, seed=seed)
    click.echo(f"created batch {batch_id} with {len(tasks)} tasks in {data_dir}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except SyndarinError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    return 0


if __name__ == "__main__":
    main()
