"""Chat-model backends behind one small interface.

A backend sends a message list and returns the assistant text; it holds no
pipeline state, and failures surface as BackendError rather than being
swallowed. The HTTPS backend speaks the common chat-completions JSON shape
and reads its credential from the CHAT_API_KEY environment variable.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import requests

from .prompts import ChatMessage

API_KEY_ENV = "CHAT_API_KEY"

DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"

# Price per 1K tokens by model-name prefix.
MODEL_PRICES = {
    "gpt-3.5-turbo": 0.0015,
    "gpt-4": 0.03,
}


class BackendError(RuntimeError):
    """A chat request that could not be completed."""


def price_for_model(model_name: str) -> float | None:
    best: str | None = None
    for prefix in MODEL_PRICES:
        if model_name.startswith(prefix) and (best is None or len(prefix) > len(best)):
            best = prefix
    return MODEL_PRICES[best] if best is not None else None


class ModelBackend(Protocol):
    model_name: str
    price_per_1k_tokens: float | None

    def send(self, messages: Sequence[ChatMessage]) -> str: ...


@dataclass
class OpenAIChatBackend:
    """Chat-completions endpoint client; one attempt per send, retries are
    the batch runner's job."""

    model_name: str
    endpoint: str = DEFAULT_ENDPOINT
    api_key: str | None = None
    temperature: float = 0.0
    timeout: float = 60.0
    price_per_1k_tokens: float | None = field(default=None)

    def __post_init__(self) -> None:
        if self.api_key is None:
            self.api_key = os.environ.get(API_KEY_ENV)
        if not self.api_key:
            raise ValueError(f"no API credential: set {API_KEY_ENV} or pass api_key")
        if self.price_per_1k_tokens is None:
            self.price_per_1k_tokens = price_for_model(self.model_name)

    def send(self, messages: Sequence[ChatMessage]) -> str:
        body = {
            "model": self.model_name,
            "messages": [m.to_dict() for m in messages],
            "temperature": self.temperature,
        }
        headers = {"Authorization": f"Bearer {self.api_key}", "Content-Type": "application/json"}
        try:
            response = requests.post(self.endpoint, json=body, headers=headers, timeout=self.timeout)
            response.raise_for_status()
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
            raise BackendError(f"chat request failed: {exc}") from exc


_CALL = re.compile(r"(?P<fn>clean|expand)\((?P<args>.*)\)\s*", re.DOTALL)


def _call_parts(text: str) -> tuple[str, str, list[str]] | None:
    match = _CALL.fullmatch(text.strip())
    if match is None:
        return None
    args = match.group("args")
    bracket = args.find("[")
    if bracket < 0:
        return None
    try:
        terms, _ = json.JSONDecoder().raw_decode(args, bracket)
    except json.JSONDecodeError:
        return None
    head = [p.strip() for p in args[:bracket].split(",") if p.strip()]
    language = head[-1] if head else "null"
    try:
        language_value = json.loads(language)
    except json.JSONDecodeError:
        return None
    return match.group("fn"), language_value, terms


@dataclass
class EchoBackend:
    """Deterministic offline backend: clean calls echo their terms, expand
    calls echo the terms under both the request language and ``en``."""

    model_name: str = "echo"
    price_per_1k_tokens: float | None = 0.0

    def send(self, messages: Sequence[ChatMessage]) -> str:
        last_user = next((m for m in reversed(messages) if m.role == "user"), None)
        if last_user is None:
            raise BackendError("no user message to answer")
        parts = _call_parts(last_user.content)
        if parts is None:
            raise BackendError(f"echo backend cannot parse call: {last_user.content[:120]!r}")
        fn, language, terms = parts
        if fn == "clean":
            return json.dumps(terms, ensure_ascii=False)
        if language == "en":
            return json.dumps({"en": terms}, ensure_ascii=False)
        return json.dumps({language: terms, "en": terms}, ensure_ascii=False)


def make_backend(name: str, *, temperature: float = 0.0, api_key: str | None = None) -> ModelBackend:
    """``echo`` for the offline backend, anything else as a hosted model id."""
    if name == "echo":
        return EchoBackend()
    return OpenAIChatBackend(model_name=name, temperature=temperature, api_key=api_key)
