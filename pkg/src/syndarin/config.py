"""Declarative run configuration.

One JSON file owns every threshold, seed and provider setting, so a run is
reproducible from (config, fixtures) alone. All seeds must be explicit; the
pipeline never draws entropy implicitly.
"""

from __future__ import annotations

import datetime as dt
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigInvalidError
from .mining import MiningConfig
from .validation import ValidationConfig

REQUIRED_SEEDS = ("balance", "split", "bench", "annotation")

ENV_CONFIG = "SYNDARIN_CONFIG"
ENV_WIKI_API_URL = "WIKI_API_URL"
ENV_LLM_API_KEY = "LLM_API_KEY"
ENV_TRANSLATE_API_KEY = "TRANSLATE_API_KEY"
ENV_EMBED_API_KEY = "EMBED_API_KEY"


@dataclass
class GenerationSettings:
    prompt_pack: str | None = None  # None selects the packaged default
    questions_per_paragraph: int = 10
    temperature: float = 0.7
    model_id: str = "mock-generator"


@dataclass
class ProviderSettings:
    mode: str = "mock"  # mock | http
    mock_articles: str | None = None
    cache_dir: str | None = None
    provenance_log: str | None = None
    requests_per_second: float = 8.0
    max_concurrent_requests: int = 4
    retry_limit: int = 2
    window_days: int = 365
    stats_as_of: str | None = None  # YYYY-MM-DD; pins the view-count window
    wiki_api_template: str = "https://{lang}.wikipedia.org/w/api.php"
    metrics_url: str = "https://wikimedia.org/api/rest_v1/metrics/pageviews/per-article"
    llm_endpoint: str = ""
    translate_endpoint: str = ""
    embed_endpoint: str = ""
    embed_model_id: str = "default-embed"
    embed_dim: int = 64

    def as_of_date(self) -> dt.date | None:
        if self.stats_as_of is None:
            return None
        return dt.date.fromisoformat(self.stats_as_of)


@dataclass
class RunConfig:
    workspace_dir: Path
    source_lang: str = "en"
    target_lang: str = "hy"
    titles_file: str = "titles.txt"
    seeds: dict = field(default_factory=dict)
    mining: MiningConfig = field(default_factory=MiningConfig)
    generation: GenerationSettings = field(default_factory=GenerationSettings)
    validation: ValidationConfig = field(default_factory=ValidationConfig)
    test_fraction: float = 0.2
    bench_model_id: str = "hash-chooser"
    providers: ProviderSettings = field(default_factory=ProviderSettings)
    raw: dict = field(default_factory=dict)

    def seed(self, name: str) -> int:
        return self.seeds[name]

    def path(self, name: str) -> Path:
        return self.workspace_dir / name


def _require(data: dict, key: str, context: str) -> object:
    if key not in data:
        raise ConfigInvalidError(f"missing {context} key: {key}")
    return data[key]


def load_config(path: Path | str | None = None) -> RunConfig:
    """Load and validate a config file; path may come from SYNDARIN_CONFIG."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        raise ConfigInvalidError(
            f"no config given: pass --config or set {ENV_CONFIG}"
        )
    path = Path(path)
    if not path.exists():
        raise ConfigInvalidError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigInvalidError(f"config is not valid JSON: {exc}")

    seeds = _require(data, "seeds", "config")
    missing = [name for name in REQUIRED_SEEDS if name not in seeds]
    if missing:
        raise ConfigInvalidError(f"seeds must be explicit; missing: {missing}")
    for name, value in seeds.items():
        if not isinstance(value, int):
            raise ConfigInvalidError(f"seed {name!r} must be an integer")

    workspace = Path(data.get("workspace_dir", path.parent)).expanduser()
    if not workspace.is_absolute():
        workspace = (path.parent / workspace).resolve()

    try:
        mining = MiningConfig(**data.get("mining", {}))
        validation = ValidationConfig(**data.get("validation", {}))
        generation = GenerationSettings(**data.get("generation", {}))
        providers = ProviderSettings(**data.get("providers", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigInvalidError(f"bad config section: {exc}")

    if providers.mode not in ("mock", "http"):
        raise ConfigInvalidError(f"providers.mode must be mock or http")
    if providers.mode == "mock":
        if not providers.mock_articles:
            raise ConfigInvalidError("mock providers need providers.mock_articles")
        articles = Path(providers.mock_articles)
        if not articles.is_absolute():
            articles = (path.parent / articles).resolve()
        if not articles.exists():
            raise ConfigInvalidError(f"mock_articles file not found: {articles}")
        providers.mock_articles = str(articles)
    if generation.prompt_pack:
        pack = Path(generation.prompt_pack)
        if not pack.is_absolute():
            pack = (path.parent / pack).resolve()
        if not pack.exists():
            raise ConfigInvalidError(f"prompt pack not found: {pack}")
        generation.prompt_pack = str(pack)

    fraction = data.get("test_fraction", 0.2)
    if not 0.0 < fraction < 1.0:
        raise ConfigInvalidError("test_fraction must be in (0, 1)")

    return RunConfig(
        workspace_dir=workspace,
        source_lang=data.get("source_lang", "en"),
        target_lang=data.get("target_lang", "hy"),
        titles_file=data.get("titles_file", "titles.txt"),
        seeds=dict(seeds),
        mining=mining,
        generation=generation,
        validation=validation,
        test_fraction=fraction,
        bench_model_id=data.get("bench_model_id", "hash-chooser"),
        providers=providers,
        raw=data,
    )
