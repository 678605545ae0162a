"""Intersection-over-union scoring of predicted term sets against gold.

Terms compare case-sensitively after trimming; two empty sets agree
perfectly (1.0), so entries correctly annotated as having no parallel
text do not poison the mean.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import AbstractSet, Iterable, Mapping

from .corpus import EntryKey, split_terms


class KeyMismatch(ValueError):
    """Prediction and gold maps cover different entries."""

    def __init__(self, missing: Iterable[EntryKey], extra: Iterable[EntryKey]):
        self.missing = tuple(sorted(missing))
        self.extra = tuple(sorted(extra))
        super().__init__(
            f"prediction keys do not match gold keys: missing {list(self.missing)}, extra {list(self.extra)}"
        )


def term_set(terms: Iterable[str]) -> frozenset[str]:
    """Normalized comparison set: trimmed, case preserved, no empties."""
    return frozenset(t.strip() for t in terms if t.strip())


def iou(pred: AbstractSet[str], gold: AbstractSet[str]) -> float:
    if not pred and not gold:
        return 1.0
    return len(pred & gold) / len(pred | gold)


@dataclass(frozen=True)
class IoUReport:
    per_entry: tuple[tuple[EntryKey, float], ...]
    mean: float
    per_puddle: dict[int, float]

    def to_json_dict(self) -> dict:
        return {
            "entries": len(self.per_entry),
            "mean": self.mean,
            "per_puddle": {str(pid): value for pid, value in sorted(self.per_puddle.items())},
            "per_entry": [
                {"puddle_id": key[0], "entry_id": key[1], "iou": value}
                for key, value in self.per_entry
            ],
        }

    def format_table(self) -> str:
        lines = [f"{'puddle':>8}  {'entries':>8}  {'mean IoU':>9}"]
        counts: dict[int, int] = {}
        for (pid, _), _ in self.per_entry:
            counts[pid] = counts.get(pid, 0) + 1
        for pid in sorted(self.per_puddle):
            lines.append(f"{pid:>8}  {counts[pid]:>8}  {self.per_puddle[pid]:>9.4f}")
        lines.append(f"{'all':>8}  {len(self.per_entry):>8}  {self.mean:>9.4f}")
        return "\n".join(lines)


def mean_iou(
    predictions: Mapping[EntryKey, AbstractSet[str]],
    gold: Mapping[EntryKey, AbstractSet[str]],
) -> IoUReport:
    """Per-entry IoU plus unweighted arithmetic means, overall and per puddle.

    The two maps must cover exactly the same entries; a mismatch raises
    KeyMismatch rather than silently scoring the intersection.
    """
    pred_keys = set(predictions)
    gold_keys = set(gold)
    if pred_keys != gold_keys:
        raise KeyMismatch(missing=gold_keys - pred_keys, extra=pred_keys - gold_keys)
    per_entry = tuple((key, iou(predictions[key], gold[key])) for key in sorted(pred_keys))
    by_puddle: dict[int, list[float]] = {}
    for (pid, _), value in per_entry:
        by_puddle.setdefault(pid, []).append(value)
    per_puddle = {pid: math.fsum(values) / len(values) for pid, values in by_puddle.items()}
    mean = math.fsum(value for _, value in per_entry) / len(per_entry) if per_entry else 0.0
    return IoUReport(per_entry, mean, per_puddle)


def load_term_file(path: str | Path) -> dict[EntryKey, frozenset[str]]:
    """Read ``puddle_id<TAB>entry_id<TAB>term1||term2||...`` rows; an empty
    term field is the empty set."""
    out: dict[EntryKey, frozenset[str]] = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(f"{path}:{number}: expected 3 tab-separated fields, got {len(fields)}")
            try:
                key = (int(fields[0]), int(fields[1]))
            except ValueError:
                raise ValueError(f"{path}:{number}: ids must be integers") from None
            if key in out:
                raise ValueError(f"{path}:{number}: duplicate entry {key}")
            out[key] = term_set(split_terms(fields[2]))
    return out


def write_report(report: IoUReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report.to_json_dict(), handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")
