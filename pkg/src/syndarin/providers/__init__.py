from .base import (
    CountingTransport,
    HttpTransport,
    NetworkError,
    NotParallelError,
    PageMissingError,
    ProviderConfig,
    ProviderRefusalError,
    RecordedTransport,
    RecordingTransport,
    RequestRunner,
)
from .cache import DiskCache
from .embed import HashingEmbedder, HttpEmbed, TableEmbedder
from .llm import (
    DecodingParams,
    HashChooserLlm,
    HttpLlm,
    ScriptedLlm,
    SyntheticQaLlm,
)
from .provenance import ProvenanceLog
from .ratelimit import RateLimiter
from .translate import (
    FailingTranslator,
    HttpTranslate,
    IdentityTranslator,
    PseudoTranslator,
    TableTranslator,
)
from .wiki import HttpWiki, MockArticle, MockWiki, RawIntroPair, first_paragraph

__all__ = [
    "CountingTransport",
    "DecodingParams",
    "DiskCache",
    "FailingTranslator",
    "HashChooserLlm",
    "HashingEmbedder",
    "HttpEmbed",
    "HttpLlm",
    "HttpTransport",
    "HttpTranslate",
    "HttpWiki",
    "IdentityTranslator",
    "MockArticle",
    "MockWiki",
    "NetworkError",
    "NotParallelError",
    "PageMissingError",
    "ProviderConfig",
    "ProviderRefusalError",
    "ProvenanceLog",
    "PseudoTranslator",
    "RateLimiter",
    "RawIntroPair",
    "RecordedTransport",
    "RecordingTransport",
    "RequestRunner",
    "ScriptedLlm",
    "SyntheticQaLlm",
    "TableEmbedder",
    "TableTranslator",
    "first_paragraph",
]
