"""Ordered, resumable batch dispatch of chat requests, plus cost estimates.

At most ``max_in_flight`` requests run concurrently; results merge back in
input order regardless of completion order. The checkpoint is JSON-lines
of ``{entry_id, status, result}`` flushed in input order, so a restart
re-issues exactly the unprocessed suffix and two identical runs write
identical bytes. Per-entry failures are recorded, never fatal.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from .backends import ModelBackend
from .prompts import ChatMessage


@dataclass(frozen=True, slots=True)
class BatchLimits:
    max_in_flight: int = 1
    retries: int = 0
    backoff_seconds: float = 0.0

    def __post_init__(self) -> None:
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.retries < 0 or self.backoff_seconds < 0:
            raise ValueError("retries and backoff_seconds must be >= 0")


@dataclass(frozen=True)
class BatchItem:
    key: str
    messages: Sequence[ChatMessage]
    parse: Callable[[str], Any] = field(default=lambda text: text)


@dataclass(frozen=True, slots=True)
class BatchOutcome:
    key: str
    status: str
    result: Any = None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "success"

    def to_json(self) -> str:
        record: dict[str, Any] = {"entry_id": self.key, "status": self.status, "result": self.result}
        if self.reason is not None:
            record["reason"] = self.reason
        return json.dumps(record, ensure_ascii=False, sort_keys=True)


def load_checkpoint(path: str | Path) -> dict[str, BatchOutcome]:
    """Previously processed outcomes keyed by entry; missing file is empty."""
    path = Path(path)
    if not path.exists():
        return {}
    done: dict[str, BatchOutcome] = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                done[record["entry_id"]] = BatchOutcome(
                    record["entry_id"], record["status"], record.get("result"), record.get("reason")
                )
            except (json.JSONDecodeError, KeyError):
                raise ValueError(f"{path}:{number}: bad checkpoint line") from None
    return done


def run_batch(
    items: Sequence[BatchItem],
    backend: ModelBackend,
    limits: BatchLimits = BatchLimits(),
    *,
    checkpoint_path: str | Path | None = None,
    failure_log_path: str | Path | None = None,
) -> list[BatchOutcome]:
    """Send every item not already checkpointed; returns outcomes in input
    order. A failed send or parse retries up to ``limits.retries`` times."""
    done = load_checkpoint(checkpoint_path) if checkpoint_path else {}

    def work(item: BatchItem) -> BatchOutcome:
        last_error: Exception | None = None
        for attempt in range(limits.retries + 1):
            try:
                return BatchOutcome(item.key, "success", item.parse(backend.send(item.messages)))
            except Exception as exc:
                last_error = exc
                if attempt < limits.retries and limits.backoff_seconds:
                    time.sleep(limits.backoff_seconds * (attempt + 1))
        return BatchOutcome(item.key, "failure", None, str(last_error))

    pending = [item for item in items if item.key not in done]
    fresh: dict[str, BatchOutcome] = {}
    if pending:
        checkpoint = open(checkpoint_path, "a", encoding="utf-8", newline="\n") if checkpoint_path else None
        try:
            with ThreadPoolExecutor(max_workers=min(limits.max_in_flight, len(pending))) as pool:
                futures = [pool.submit(work, item) for item in pending]
                for future in futures:
                    outcome = future.result()
                    fresh[outcome.key] = outcome
                    if checkpoint is not None:
                        checkpoint.write(outcome.to_json() + "\n")
                        checkpoint.flush()
        finally:
            if checkpoint is not None:
                checkpoint.close()

    outcomes = [done.get(item.key) or fresh[item.key] for item in items]
    if failure_log_path is not None:
        with open(failure_log_path, "w", encoding="utf-8", newline="\n") as handle:
            for outcome in outcomes:
                if not outcome.ok:
                    handle.write(
                        json.dumps(
                            {"entry_id": outcome.key, "reason": outcome.reason},
                            ensure_ascii=False,
                            sort_keys=True,
                        )
                        + "\n"
                    )
    return outcomes


def estimate_tokens(messages: Sequence[ChatMessage], *, chars_per_token: float = 4.0) -> int:
    """Crude but stable request size estimate: total content chars / 4."""
    return math.ceil(sum(len(m.content) for m in messages) / chars_per_token)


def estimate_cost(token_counts: Iterable[int], price_per_1k: float) -> float:
    """sum(tokens) / 1000 x price."""
    return sum(token_counts) / 1000.0 * price_per_1k
