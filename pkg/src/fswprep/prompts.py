"""Chat prompts and response parsing for the clean and expand functions.

A clean call sends the sign count as a length indicator, the language
code, and the raw candidate terms; the model answers with a JSON array of
parallel terms. An expand call sends a language code and terms; the model
answers with an object holding native and English equivalents. Prompt
construction is deterministic: identical request, strategy, and gold pool
yield a byte-identical message list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from functools import cache
from importlib.resources import files
from typing import Iterable, Mapping, Sequence


class UnparseableResponse(ValueError):
    """Model output from which no well-formed payload could be extracted."""


@dataclass(frozen=True, slots=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"role {self.role!r}")
        if not self.content:
            raise ValueError("content must be non-empty")

    def to_dict(self) -> dict[str, str]:
        return {"role": self.role, "content": self.content}


@dataclass(frozen=True, slots=True)
class CleanRequest:
    num_signs: int
    language: str | None
    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.num_signs < 0:
            raise ValueError("num_signs must be non-negative")
        if not self.terms:
            raise ValueError("terms must be non-empty")


@dataclass(frozen=True, slots=True)
class ExpandRequest:
    language: str
    terms: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class ExpansionResult:
    """Expansion outputs per language, deduplicated preserving first occurrence."""

    native: tuple[str, ...] = ()
    english: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class FewShotPair:
    user: str
    assistant: str


@dataclass(frozen=True, slots=True)
class GoldExample:
    """A manually corrected entry usable as a same-puddle few-shot example."""

    puddle_id: int
    entry_id: int
    request: CleanRequest
    terms: tuple[str, ...]

    @property
    def key(self) -> tuple[int, int]:
        return (self.puddle_id, self.entry_id)


class StrategyLevel(Enum):
    E1_RULES_ONLY = "e1"
    E2_FIXED = "e2"
    E3_SAME_PUDDLE = "e3"
    E4_COMBINED = "e4"


_MAX_PUDDLE_EXAMPLES = 5


@dataclass(frozen=True)
class FewShotStrategy:
    """Few-shot selection: E2 uses the four fixed pairs, E3 up to five
    same-puddle gold pairs in pool order, E4 fixed then same-puddle."""

    level: StrategyLevel
    fixed_examples: tuple[FewShotPair, ...] = dataclass_field(default_factory=lambda: clean_few_shots())
    puddle_pool: Mapping[int, Sequence[GoldExample]] = dataclass_field(default_factory=dict)
    k_puddle: int = _MAX_PUDDLE_EXAMPLES

    def __post_init__(self) -> None:
        if not 0 <= self.k_puddle <= _MAX_PUDDLE_EXAMPLES:
            raise ValueError(f"k_puddle must be in [0, {_MAX_PUDDLE_EXAMPLES}]")


def _read_resource(name: str) -> str:
    return files("fswprep").joinpath(f"resources/{name}").read_text(encoding="utf-8")


@cache
def clean_system_prompt() -> str:
    return _read_resource("clean_system_prompt.txt").removesuffix("\n")


@cache
def expand_system_prompt() -> str:
    return _read_resource("expand_system_prompt.txt").removesuffix("\n")


@cache
def clean_few_shots() -> tuple[FewShotPair, ...]:
    data = json.loads(_read_resource("clean_few_shots.json"))
    return tuple(FewShotPair(p["user"], p["assistant"]) for p in data)


@cache
def expand_few_shots() -> tuple[FewShotPair, ...]:
    data = json.loads(_read_resource("expand_few_shots.json"))
    return tuple(FewShotPair(p["user"], p["assistant"]) for p in data)


def format_terms_array(terms: Iterable[str]) -> str:
    return json.dumps(list(terms), ensure_ascii=False)


def format_clean_call(request: CleanRequest) -> str:
    language = json.dumps(request.language, ensure_ascii=False)
    return f"clean({request.num_signs}, {language}, {format_terms_array(request.terms)})"


def format_expand_call(request: ExpandRequest) -> str:
    language = json.dumps(request.language, ensure_ascii=False)
    return f"expand({language}, {format_terms_array(request.terms)})"


def build_clean_prompt(
    request: CleanRequest,
    strategy: FewShotStrategy,
    *,
    puddle_id: int | None = None,
    exclude_entry: tuple[int, int] | None = None,
) -> list[ChatMessage]:
    """System prompt, few-shot pairs per the strategy, then the request.

    ``exclude_entry`` keeps the entry being cleaned out of its own few-shot
    examples; pass the key of the entry when cleaning gold-annotated data.
    """
    messages = [ChatMessage("system", clean_system_prompt())]
    pairs: list[FewShotPair] = []
    if strategy.level in (StrategyLevel.E2_FIXED, StrategyLevel.E4_COMBINED):
        pairs.extend(strategy.fixed_examples)
    if strategy.level in (StrategyLevel.E3_SAME_PUDDLE, StrategyLevel.E4_COMBINED) and puddle_id is not None:
        pool = strategy.puddle_pool.get(puddle_id, ())
        chosen = [g for g in pool if g.key != exclude_entry][: strategy.k_puddle]
        pairs.extend(
            FewShotPair(format_clean_call(g.request), format_terms_array(g.terms)) for g in chosen
        )
    for pair in pairs:
        messages.append(ChatMessage("user", pair.user))
        messages.append(ChatMessage("assistant", pair.assistant))
    messages.append(ChatMessage("user", format_clean_call(request)))
    return messages


def build_expand_prompt(request: ExpandRequest) -> list[ChatMessage]:
    """System prompt, the nine fixed few-shot pairs, then the request."""
    messages = [ChatMessage("system", expand_system_prompt())]
    for pair in expand_few_shots():
        messages.append(ChatMessage("user", pair.user))
        messages.append(ChatMessage("assistant", pair.assistant))
    messages.append(ChatMessage("user", format_expand_call(request)))
    return messages


def _dedupe_trimmed(values: Iterable[str]) -> list[str]:
    seen: dict[str, None] = {}
    for value in values:
        trimmed = value.strip()
        if trimmed:
            seen.setdefault(trimmed, None)
    return list(seen)


def _iter_json_values(text: str, opener: str):
    decoder = json.JSONDecoder()
    start = 0
    while True:
        index = text.find(opener, start)
        if index < 0:
            return
        try:
            value, _ = decoder.raw_decode(text, index)
        except json.JSONDecodeError:
            start = index + 1
            continue
        yield value
        start = index + 1


def parse_clean_response(text: str) -> list[str]:
    """First well-formed JSON array of strings in the response, trimmed and
    deduplicated preserving order. Surrounding prose is tolerated."""
    for value in _iter_json_values(text, "["):
        if isinstance(value, list) and all(isinstance(v, str) for v in value):
            return _dedupe_trimmed(value)
    raise UnparseableResponse(f"no JSON string array found in response: {text[:200]!r}")


def parse_expand_response(text: str, request_language: str) -> ExpansionResult:
    """First well-formed JSON object of string lists; missing keys are empty
    lists. For English requests the native list carries everything."""
    for value in _iter_json_values(text, "{"):
        if isinstance(value, dict) and all(
            isinstance(v, list) and all(isinstance(item, str) for item in v) for v in value.values()
        ):
            native = _dedupe_trimmed(value.get(request_language, []))
            english = [] if request_language == "en" else _dedupe_trimmed(value.get("en", []))
            return ExpansionResult(tuple(native), tuple(english))
    raise UnparseableResponse(f"no JSON object of string lists found in response: {text[:200]!r}")
