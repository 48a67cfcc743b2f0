"""Stage orchestration, the reproducibility manifest and provider wiring.

Stages hand off through JSONL files in the workspace; the manifest records
config, per-stage input/output hashes and the corpus funnel counts, and is
rewritten atomically after every successful stage.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from . import assembly, benchmark, generation, mining, validation
from .assembly import file_sha256
from .config import (
    ENV_EMBED_API_KEY,
    ENV_LLM_API_KEY,
    ENV_TRANSLATE_API_KEY,
    ENV_WIKI_API_URL,
    RunConfig,
)
from .errors import ConfigInvalidError, MissingUpstreamError, StaleUpstreamError
from .providers import (
    DecodingParams,
    DiskCache,
    HashChooserLlm,
    HashingEmbedder,
    HttpEmbed,
    HttpLlm,
    HttpTransport,
    HttpTranslate,
    HttpWiki,
    MockWiki,
    ProviderConfig,
    ProvenanceLog,
    PseudoTranslator,
    RequestRunner,
    SyntheticQaLlm,
)
from .records import (
    item_from_record,
    item_to_record,
    pair_from_record,
    pair_to_record,
    read_jsonl,
    write_jsonl,
)

MANIFEST_NAME = "manifest.json"

STAGE_FILES = {
    "mine": "paragraphs.jsonl",
    "generate": "generated.jsonl",
    "translate": "translated.jsonl",
    "validate": "validated.jsonl",
}

DATA_STAGES = ("mine", "generate", "translate", "validate", "assemble", "report")
ALL_STAGES = DATA_STAGES + ("bench", "annotate-serve")

# upstream files each stage reads, relative to the workspace
STAGE_INPUTS = {
    "mine": (),
    "generate": ("paragraphs.jsonl",),
    "translate": ("generated.jsonl",),
    "validate": ("translated.jsonl", "paragraphs.jsonl"),
    "assemble": ("validated.jsonl", "paragraphs.jsonl"),
    "report": ("generated.jsonl",),
    "bench": ("train.jsonl", "test.jsonl"),
}


class Manifest:
    def __init__(self, path: Path):
        self.path = path
        if path.exists():
            self.doc = json.loads(path.read_text(encoding="utf-8"))
        else:
            self.doc = {"config": None, "stages": {}, "counts": {}}

    def save(self) -> None:
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text(
            json.dumps(self.doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        tmp.replace(self.path)

    def record_stage(self, stage: str, inputs: dict, outputs: dict, count: int) -> None:
        self.doc.setdefault("stages", {})[stage] = {
            "inputs": inputs,
            "outputs": outputs,
            "count": count,
        }

    def set_counts(self, **counts) -> None:
        self.doc.setdefault("counts", {}).update(counts)

    def recorded_hash(self, filename: str) -> str | None:
        for entry in self.doc.get("stages", {}).values():
            if filename in entry.get("outputs", {}):
                return entry["outputs"][filename]
        return None


@dataclass
class Providers:
    wiki: object
    llm: object
    eval_llm: object
    translator: object
    embedder: object
    model_ids: dict


def build_providers(cfg: RunConfig) -> Providers:
    p = cfg.providers
    if p.mode == "mock":
        articles = json.loads(Path(p.mock_articles).read_text(encoding="utf-8"))
        translator = PseudoTranslator()
        for rec in articles:
            if rec.get("target_text") is None and not rec.get("no_target"):
                rec["target_text"] = translator.translate(
                    rec["source_text"], cfg.source_lang, cfg.target_lang
                )
            elif rec.get("no_target"):
                rec["target_text"] = None
        return Providers(
            wiki=MockWiki.from_records(articles),
            llm=SyntheticQaLlm(),
            eval_llm=HashChooserLlm(),
            translator=translator,
            embedder=HashingEmbedder(dim=p.embed_dim),
            model_ids={
                "llm": cfg.generation.model_id,
                "eval_llm": cfg.bench_model_id,
                "translator": "pseudo",
                "embedder": f"hashing-{p.embed_dim}",
            },
        )

    cache = DiskCache(p.cache_dir) if p.cache_dir else None
    provenance = ProvenanceLog(p.provenance_log) if p.provenance_log else None
    provider_config = ProviderConfig(
        cache_dir=Path(p.cache_dir) if p.cache_dir else None,
        max_concurrent_requests=p.max_concurrent_requests,
        requests_per_second=p.requests_per_second,
        retry_limit=p.retry_limit,
    )
    runner = RequestRunner(HttpTransport(), provider_config, provenance=provenance)
    wiki = HttpWiki(
        provider_config,
        runner,
        api_template=os.environ.get(ENV_WIKI_API_URL, p.wiki_api_template),
        metrics_url=p.metrics_url,
        window_days=p.window_days,
        as_of=p.as_of_date(),
        cache=cache,
    )
    llm_config = ProviderConfig(
        endpoint=p.llm_endpoint,
        max_concurrent_requests=p.max_concurrent_requests,
        requests_per_second=p.requests_per_second,
        retry_limit=p.retry_limit,
    )
    llm = HttpLlm(
        llm_config, runner, api_key=os.environ.get(ENV_LLM_API_KEY, ""), cache=cache
    )
    translate_config = ProviderConfig(
        endpoint=p.translate_endpoint,
        max_concurrent_requests=p.max_concurrent_requests,
        requests_per_second=p.requests_per_second,
        retry_limit=p.retry_limit,
    )
    translator = HttpTranslate(
        translate_config,
        runner,
        api_key=os.environ.get(ENV_TRANSLATE_API_KEY, ""),
        cache=cache,
    )
    embed_config = ProviderConfig(
        endpoint=p.embed_endpoint,
        max_concurrent_requests=p.max_concurrent_requests,
        requests_per_second=p.requests_per_second,
        retry_limit=p.retry_limit,
    )
    embedder = HttpEmbed(
        embed_config,
        runner,
        model_id=p.embed_model_id,
        api_key=os.environ.get(ENV_EMBED_API_KEY, ""),
        cache=cache,
    )
    return Providers(
        wiki=wiki,
        llm=llm,
        eval_llm=llm,
        translator=translator,
        embedder=embedder,
        model_ids={
            "llm": cfg.generation.model_id,
            "eval_llm": cfg.bench_model_id,
            "translator": "http",
            "embedder": p.embed_model_id,
        },
    )


def _check_upstream(cfg: RunConfig, manifest: Manifest, stage: str, force: bool):
    """Upstream files must exist and their whole producer chain must be fresh.

    Walks back through the manifest: each input must match the hash its
    producing stage emitted, and each producer's own inputs must still match
    what it consumed. Any mismatch means some stage in between was rerun or a
    file was edited out of band.
    """
    inputs = {}
    for name in STAGE_INPUTS.get(stage, ()):
        path = cfg.path(name)
        if not path.exists():
            raise MissingUpstreamError(f"stage {stage!r} needs {name}; run upstream first")
        inputs[name] = file_sha256(path)
    if force:
        return inputs

    stages = manifest.doc.get("stages", {})
    producer_of = {}
    for stage_name, entry in stages.items():
        for filename in entry.get("outputs", {}):
            producer_of[filename] = stage_name

    queue = list(inputs.items())
    seen: set[str] = set()
    while queue:
        name, current = queue.pop()
        if name in seen:
            continue
        seen.add(name)
        producer = producer_of.get(name)
        if producer is None:
            continue
        entry = stages[producer]
        if entry["outputs"].get(name) != current:
            raise StaleUpstreamError(
                f"{name} changed since stage {producer!r} produced it; "
                "rerun upstream or use --force"
            )
        for up_name, up_hash in entry.get("inputs", {}).items():
            up_path = cfg.path(up_name)
            if not up_path.exists() or file_sha256(up_path) != up_hash:
                raise StaleUpstreamError(
                    f"{up_name} changed after stage {producer!r} consumed it; "
                    f"rerun {producer!r} or use --force"
                )
            queue.append((up_name, up_hash))
    return inputs


def _write_report(path: Path, payload: dict) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    tmp.replace(path)


def stage_mine(cfg: RunConfig, providers: Providers, manifest: Manifest, inputs):
    titles_path = cfg.path(cfg.titles_file)
    if not titles_path.exists():
        raise MissingUpstreamError(f"titles file not found: {titles_path}")
    titles = [t.strip() for t in titles_path.read_text(encoding="utf-8").splitlines()]
    titles = [t for t in titles if t and not t.startswith("#")]
    pairs, report = mining.mine(
        titles,
        cfg.mining,
        providers.wiki,
        source_lang=cfg.source_lang,
        target_lang=cfg.target_lang,
        max_workers=cfg.providers.max_concurrent_requests,
    )
    out = cfg.path(STAGE_FILES["mine"])
    write_jsonl(out, (pair_to_record(p) for p in pairs))
    _write_report(cfg.path("mining_report.json"), report.to_dict())
    inputs[cfg.titles_file] = file_sha256(titles_path)
    manifest.record_stage(
        "mine", inputs, {out.name: file_sha256(out)}, len(pairs)
    )
    manifest.set_counts(mined=len(pairs))
    return {"accepted": len(pairs), "rejected": dict(report.rejected)}


def stage_generate(cfg: RunConfig, providers: Providers, manifest: Manifest, inputs):
    pairs = [pair_from_record(r) for r in read_jsonl(cfg.path("paragraphs.jsonl"))]
    spec = generation.load_prompt_pack(cfg.generation.prompt_pack)
    if spec.questions_per_paragraph != cfg.generation.questions_per_paragraph:
        spec = generation.PromptSpec(
            instructions=spec.instructions,
            demonstrations=spec.demonstrations,
            questions_per_paragraph=cfg.generation.questions_per_paragraph,
            version=spec.version,
        )
    transcripts_dir = cfg.path("transcripts")
    transcripts_dir.mkdir(parents=True, exist_ok=True)

    def sink(pair_id: str, raw: str):
        (transcripts_dir / f"{pair_id}.txt").write_text(raw, encoding="utf-8")

    params = DecodingParams(
        model_id=cfg.generation.model_id, temperature=cfg.generation.temperature
    )
    items, report = generation.generate_items(
        pairs,
        spec,
        providers.llm,
        params,
        language=cfg.source_lang,
        max_workers=cfg.providers.max_concurrent_requests,
        transcript_sink=sink,
    )
    out = cfg.path(STAGE_FILES["generate"])
    write_jsonl(out, (item_to_record(it) for it in items))
    _write_report(cfg.path("generation_report.json"), report.to_dict())
    manifest.record_stage("generate", inputs, {out.name: file_sha256(out)}, len(items))
    manifest.set_counts(
        generated=report.parsed,
        deduped=report.after_dedup,
        verbatim_kept=report.after_verbatim,
    )
    manifest.doc["prompt_pack_version"] = spec.version
    manifest.doc["provider_model_ids"] = providers.model_ids
    return {"kept": len(items), "parsed": report.parsed}


def stage_translate(cfg: RunConfig, providers: Providers, manifest: Manifest, inputs):
    items = [item_from_record(r) for r in read_jsonl(cfg.path("generated.jsonl"))]
    translated, failures = validation.translate_items(
        items,
        cfg.target_lang,
        providers.translator,
        source=cfg.source_lang,
        max_workers=cfg.providers.max_concurrent_requests,
    )
    translated.sort(key=lambda it: it.item_id)
    out = cfg.path(STAGE_FILES["translate"])
    write_jsonl(out, (item_to_record(it) for it in translated))
    _write_report(
        cfg.path("translate_report.json"),
        {"translated": len(translated), "provider_failed": failures},
    )
    manifest.record_stage(
        "translate", inputs, {out.name: file_sha256(out)}, len(translated)
    )
    manifest.set_counts(translated=len(translated))
    return {"translated": len(translated), "failed": len(failures)}


def stage_validate(cfg: RunConfig, providers: Providers, manifest: Manifest, inputs):
    items = [item_from_record(r) for r in read_jsonl(cfg.path("translated.jsonl"))]
    paragraphs = {
        r["pair_id"]: r["target_text"] for r in read_jsonl(cfg.path("paragraphs.jsonl"))
    }
    kept, reports = validation.validate_items(
        items, paragraphs, cfg.validation, providers.embedder
    )
    out = cfg.path(STAGE_FILES["validate"])
    write_jsonl(out, (item_to_record(it) for it in kept))
    write_jsonl(cfg.path("validation_report.jsonl"), (r.to_dict() for r in reports))
    outputs = {
        out.name: file_sha256(out),
        "validation_report.jsonl": file_sha256(cfg.path("validation_report.jsonl")),
    }
    manifest.record_stage("validate", inputs, outputs, len(kept))
    manifest.set_counts(validated=len(kept))
    return {"kept": len(kept), "total": len(reports)}


def stage_assemble(cfg: RunConfig, providers: Providers, manifest: Manifest, inputs):
    items = [item_from_record(r) for r in read_jsonl(cfg.path("validated.jsonl"))]
    paragraphs = {
        r["pair_id"]: r["target_text"] for r in read_jsonl(cfg.path("paragraphs.jsonl"))
    }
    balanced = assembly.balance_answer_positions(items, cfg.seed("balance"))
    split = assembly.split_train_test(
        balanced, test_fraction=cfg.test_fraction, seed=cfg.seed("split")
    )
    assembly.write_dataset(split, cfg.workspace_dir, paragraphs, manifest.doc)
    outputs = {
        "train.jsonl": file_sha256(cfg.path("train.jsonl")),
        "test.jsonl": file_sha256(cfg.path("test.jsonl")),
    }
    manifest.record_stage(
        "assemble", inputs, outputs, len(split.train) + len(split.test)
    )
    return {"train": len(split.train), "test": len(split.test)}


def stage_report(cfg: RunConfig, providers: Providers, manifest: Manifest, inputs):
    from . import diversity

    items = [item_from_record(r) for r in read_jsonl(cfg.path("generated.jsonl"))]
    counts = diversity.type_frequency(items)
    _write_report(cfg.path("diversity_report.json"), counts)
    manifest.record_stage(
        "report",
        inputs,
        {"diversity_report.json": file_sha256(cfg.path("diversity_report.json"))},
        len(items),
    )
    return counts


STAGE_RUNNERS = {
    "mine": stage_mine,
    "generate": stage_generate,
    "translate": stage_translate,
    "validate": stage_validate,
    "assemble": stage_assemble,
    "report": stage_report,
}


def run_stage(stage: str, cfg: RunConfig, force: bool = False, providers=None):
    """Run exactly one stage; refuses stale or missing upstream inputs."""
    if stage not in STAGE_RUNNERS:
        raise ConfigInvalidError(f"unknown stage: {stage}")
    cfg.workspace_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(cfg.path(MANIFEST_NAME))
    inputs = _check_upstream(cfg, manifest, stage, force)
    if providers is None:
        providers = build_providers(cfg)
    manifest.doc["config"] = cfg.raw
    result = STAGE_RUNNERS[stage](cfg, providers, manifest, inputs)
    manifest.save()
    return result


def run_bench(cfg: RunConfig, model_id: str, k_shots: int, seed: int, providers=None):
    manifest = Manifest(cfg.path(MANIFEST_NAME))
    inputs = _check_upstream(cfg, manifest, "bench", force=False)
    if providers is None:
        providers = build_providers(cfg)
    train = list(read_jsonl(cfg.path("train.jsonl")))
    test = list(read_jsonl(cfg.path("test.jsonl")))
    run = benchmark.run_eval(
        test,
        train,
        providers.eval_llm,
        model_id,
        k_shots,
        seed,
        max_workers=cfg.providers.max_concurrent_requests,
    )
    out = cfg.path(f"eval_{model_id}_{k_shots}.json")
    _write_report(out, run.to_dict())
    return run


def write_probe_files(cfg: RunConfig) -> list[str]:
    manifest = Manifest(cfg.path(MANIFEST_NAME))
    _check_upstream(cfg, manifest, "bench", force=False)
    train = list(read_jsonl(cfg.path("train.jsonl")))
    test = list(read_jsonl(cfg.path("test.jsonl")))
    probes = benchmark.build_bias_probes(train, test)
    written = []
    for variant, splits in probes.items():
        for split_name, records in splits.items():
            name = f"probe_{variant}_{split_name}.jsonl"
            write_jsonl(cfg.path(name), records)
            written.append(name)
    return written
