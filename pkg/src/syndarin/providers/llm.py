"""LLM completion clients and the deterministic mocks used offline."""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass

from .base import ProviderConfig, ProviderRefusalError, RequestRunner
from .cache import DiskCache


@dataclass(frozen=True)
class DecodingParams:
    model_id: str = "default"
    temperature: float = 0.7
    max_tokens: int = 2048


def _prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class HttpLlm:
    """Chat-completions style client (OpenAI-compatible wire format)."""

    def __init__(
        self,
        config: ProviderConfig,
        runner: RequestRunner,
        api_key: str = "",
        cache: DiskCache | None = None,
    ):
        self._config = config
        self._runner = runner
        self._api_key = api_key
        self._cache = cache

    def complete(self, prompt: str, params: DecodingParams) -> str:
        if not prompt:
            raise ValueError("prompt must be nonempty")
        request = {
            "method": "POST",
            "url": f"{self._config.endpoint.rstrip('/')}/chat/completions",
            "json": {
                "model": params.model_id,
                "temperature": params.temperature,
                "max_tokens": params.max_tokens,
                "messages": [{"role": "user", "content": prompt}],
            },
        }
        if self._api_key:
            request["headers"] = {"Authorization": f"Bearer {self._api_key}"}

        def compute():
            return self._runner.send("llm", "complete", request)

        if self._cache is not None:
            cache_request = {k: v for k, v in request.items() if k != "headers"}
            response = self._cache.get_or_compute(cache_request, compute)
        else:
            response = compute()
        choices = response.get("choices", [])
        text = choices[0].get("message", {}).get("content", "") if choices else ""
        if not text:
            raise ProviderRefusalError("model returned empty or blocked output")
        return text


class ScriptedLlm:
    """Maps SHA-256 prompt hashes to canned outputs; errors on unknown prompts."""

    def __init__(self, outputs_by_hash: dict[str, str]):
        self._outputs = outputs_by_hash
        self.calls = 0

    @classmethod
    def for_prompts(cls, script: dict[str, str]) -> "ScriptedLlm":
        return cls({_prompt_hash(p): out for p, out in script.items()})

    def complete(self, prompt: str, params: DecodingParams) -> str:
        if not prompt:
            raise ValueError("prompt must be nonempty")
        self.calls += 1
        key = _prompt_hash(prompt)
        if key not in self._outputs:
            raise ProviderRefusalError(f"no scripted output for prompt hash {key[:12]}")
        return self._outputs[key]


_PARAGRAPH_LABEL = "Paragraph:"
_COUNT_DIRECTIVE = re.compile(r"exactly (\d+)")

_QUESTION_TEMPLATES = (
    "Who is referred to immediately after '{cue}'?",
    "Where in the passage does '{cue}' lead?",
    "What does the passage state right after '{cue}'?",
    "When reading past '{cue}', which phrase appears?",
    "Which phrase follows '{cue}' in the passage?",
    "How does the passage continue after '{cue}'?",
    "Why does '{cue}' precede the key phrase here?",
    "Identify the phrase following '{cue}'.",
)


class SyntheticQaLlm:
    """Deterministic question generator driven only by the prompt contents.

    Emits the Q/A1..A4/Answer block format. A slice of the output is
    intentionally imperfect (one duplicated question, one answer absent from
    the paragraph, occasionally a malformed block) so downstream filters have
    real work to do; everything is a pure function of the paragraph text.
    """

    def __init__(self, flaw_rate: float = 1.0):
        self.calls = 0
        self._flaw_rate = flaw_rate

    def complete(self, prompt: str, params: DecodingParams) -> str:
        if not prompt:
            raise ValueError("prompt must be nonempty")
        self.calls += 1
        paragraph = prompt.rsplit(_PARAGRAPH_LABEL, 1)[-1].split("\n")[0].strip()
        match = _COUNT_DIRECTIVE.search(prompt)
        n_questions = int(match.group(1)) if match else 10
        return self.generate_blocks(paragraph, n_questions)

    def generate_blocks(self, paragraph: str, n_questions: int) -> str:
        tokens = [t.strip(".,;:()") for t in paragraph.split()]
        tokens = [t for t in tokens if t]
        rng = random.Random(int(hashlib.sha256(paragraph.encode()).hexdigest(), 16))
        flawed = rng.random() < self._flaw_rate
        blocks = []
        seen_questions = []
        for i in range(n_questions):
            start = rng.randrange(max(1, len(tokens) - 3))
            span = 1 + rng.randrange(2)
            answer = " ".join(tokens[start : start + span])
            cue = tokens[max(0, start - 1)]
            question = _QUESTION_TEMPLATES[i % len(_QUESTION_TEMPLATES)].format(cue=cue)
            if flawed and i == n_questions - 1 and seen_questions:
                question = seen_questions[0]  # exact repeat, caught by dedup
            if flawed and i == n_questions - 2:
                answer = "krzxqv baffle"  # not present in the paragraph
            options = [answer]
            while len(options) < 4:
                alt_start = rng.randrange(max(1, len(tokens) - 2))
                alt = " ".join(tokens[alt_start : alt_start + span]) or "blank"
                if alt not in options:
                    options.append(alt)
                else:
                    options.append(f"not {alt} {len(options)}")
            correct = rng.randrange(4)
            options[0], options[correct] = options[correct], options[0]
            lines = [f"{i + 1}.", f"Q: {question}"]
            for j, opt in enumerate(options):
                if flawed and i == n_questions - 3 and j == 3:
                    continue  # malformed block: missing fourth option
                lines.append(f"A{j + 1}: {opt}")
            lines.append(f"Answer: A{correct + 1}")
            blocks.append("\n".join(lines))
            seen_questions.append(question)
        return "\n\n".join(blocks)


class HashChooserLlm:
    """Benchmark stand-in: answers a fixed letter derived from the prompt."""

    def __init__(self, salt: str = ""):
        self._salt = salt
        self.calls = 0

    def complete(self, prompt: str, params: DecodingParams) -> str:
        if not prompt:
            raise ValueError("prompt must be nonempty")
        self.calls += 1
        digest = hashlib.sha256((self._salt + prompt).encode("utf-8")).digest()
        return f"Answer: {'ABCD'[digest[0] % 4]}"
