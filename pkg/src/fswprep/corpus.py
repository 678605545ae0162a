"""Puddle corpora: ingestion, splitting, pairing, and parallel-text export.

A corpus row is ``puddle_id<TAB>entry_id<TAB>language<TAB>fsw<TAB>terms``
with terms joined by ``||`` (a literal ``||`` inside a term is escaped as
``\\|\\|``). Expanded corpora carry a sixth column with English-tagged
terms produced by expansion. All files are UTF-8 with LF line endings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from typing import TYPE_CHECKING

from .fsw import MalformedSign, parse_sequence
from .tokenizer import tokenize, tokens_to_line

if TYPE_CHECKING:
    from .prompts import ExpansionResult

TERM_SEPARATOR = "||"
_ESCAPED_SEPARATOR = "\\|\\|"

DIRECTIONS = ("signed_to_spoken", "spoken_to_signed")

EntryKey = tuple[int, int]


class DevTooLarge(ValueError):
    """Requested dev split exceeds the entries left after the test holdout."""


def join_terms(terms: Iterable[str]) -> str:
    return TERM_SEPARATOR.join(t.replace(TERM_SEPARATOR, _ESCAPED_SEPARATOR) for t in terms)


def split_terms(field: str) -> list[str]:
    if field == "":
        return []
    return [p.replace(_ESCAPED_SEPARATOR, TERM_SEPARATOR) for p in field.split(TERM_SEPARATOR)]


def _dedupe(items: Iterable[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for item in items:
        seen.setdefault(item, None)
    return tuple(seen)


@dataclass(frozen=True, slots=True)
class Entry:
    """One SignPuddle record. ``en_terms`` holds English expansion terms
    attached to entries whose own language is not English."""

    puddle_id: int
    entry_id: int
    language: str
    fsw: str
    terms: tuple[str, ...]
    en_terms: tuple[str, ...] = ()

    @property
    def key(self) -> EntryKey:
        return (self.puddle_id, self.entry_id)


@dataclass(frozen=True)
class Corpus:
    entries: tuple[Entry, ...]
    provenance: str = "original"

    def __post_init__(self) -> None:
        if self.provenance not in ("original", "cleaned", "expanded"):
            raise ValueError(f"provenance {self.provenance!r}")
        keys = [e.key for e in self.entries]
        if keys != sorted(keys):
            raise ValueError("entries must be ordered by (puddle_id, entry_id)")
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (puddle_id, entry_id)")

    @classmethod
    def from_entries(cls, entries: Iterable[Entry], provenance: str = "original") -> "Corpus":
        return cls(tuple(sorted(entries, key=lambda e: e.key)), provenance)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True, slots=True)
class RejectedRow:
    line_number: int
    reason: str
    raw: str


def _parse_row(line: str, number: int, strict: bool) -> Entry:
    fields = line.split("\t")
    if len(fields) not in (5, 6):
        raise ValueError(f"expected 5 or 6 tab-separated fields, got {len(fields)}")
    try:
        puddle_id = int(fields[0])
        entry_id = int(fields[1])
    except ValueError:
        raise ValueError("puddle and entry ids must be integers") from None
    if puddle_id < 0 or entry_id < 0:
        raise ValueError("puddle and entry ids must be non-negative")
    language = fields[2]
    if not language:
        raise ValueError("missing language code")
    fsw = fields[3]
    try:
        parse_sequence(fsw, strict=strict)
    except MalformedSign as exc:
        raise ValueError(f"bad FSW: {exc}") from None
    terms = tuple(split_terms(fields[4]))
    en_terms = tuple(split_terms(fields[5])) if len(fields) == 6 else ()
    return Entry(puddle_id, entry_id, language, fsw, terms, en_terms)


def ingest(
    path: str | Path,
    *,
    provenance: str = "original",
    strict: bool = False,
) -> tuple[Corpus, list[RejectedRow]]:
    """Read a corpus TSV; malformed rows become rejects, never entries."""
    entries: dict[EntryKey, Entry] = {}
    rejects: list[RejectedRow] = []
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                entry = _parse_row(line, number, strict)
            except ValueError as exc:
                rejects.append(RejectedRow(number, str(exc), line))
                continue
            if entry.key in entries:
                rejects.append(RejectedRow(number, f"duplicate (puddle_id, entry_id) {entry.key}", line))
                continue
            entries[entry.key] = entry
    return Corpus.from_entries(entries.values(), provenance), rejects


def write_rejects(rejects: Iterable[RejectedRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for reject in rejects:
            record = {"line": reject.line_number, "reason": reject.reason, "raw": reject.raw}
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    six_columns = corpus.provenance == "expanded" or any(e.en_terms for e in corpus.entries)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for entry in corpus.entries:
            fields = [
                str(entry.puddle_id),
                str(entry.entry_id),
                entry.language,
                entry.fsw,
                join_terms(entry.terms),
            ]
            if six_columns:
                fields.append(join_terms(entry.en_terms))
            handle.write("\t".join(fields) + "\n")


@dataclass(frozen=True, slots=True)
class Split:
    train: Corpus
    dev: Corpus
    test: Corpus


def split(corpus: Corpus, dev_size: int, test_ids: Iterable[EntryKey] = ()) -> Split:
    """Hold out the test ids first, then take the first ``dev_size`` of the
    rest (stable corpus order) as dev; the remainder trains."""
    held_out = frozenset(test_ids)
    test = [e for e in corpus.entries if e.key in held_out]
    rest = [e for e in corpus.entries if e.key not in held_out]
    if dev_size < 0:
        raise ValueError("dev_size must be non-negative")
    if dev_size > len(rest):
        raise DevTooLarge(f"dev size {dev_size} exceeds {len(rest)} entries after test holdout")
    provenance = corpus.provenance
    return Split(
        train=Corpus(tuple(rest[dev_size:]), provenance),
        dev=Corpus(tuple(rest[:dev_size]), provenance),
        test=Corpus(tuple(test), provenance),
    )


@dataclass(frozen=True)
class TagTable:
    """Signed-language code per puddle, used for source-side language tags."""

    puddles: Mapping[int, str]
    default: str = "sgn"

    def signed_code(self, puddle_id: int) -> str:
        return self.puddles.get(puddle_id, self.default)

    @classmethod
    def from_file(cls, path: str | Path) -> "TagTable":
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        puddles = {int(k): str(v) for k, v in data.get("puddles", {}).items()}
        return cls(puddles, str(data.get("default", "sgn")))


def default_tag_table() -> TagTable:
    from importlib.resources import files

    path = files("fswprep").joinpath("resources/puddle_languages.json")
    with path.open(encoding="utf-8") as handle:
        data = json.load(handle)
    return TagTable({int(k): str(v) for k, v in data["puddles"].items()}, str(data["default"]))


@dataclass(frozen=True, slots=True)
class ParallelPair:
    source: str
    target: str
    signed_language: str
    spoken_language: str


def make_pairs(entry: Entry, direction: str, tags: TagTable) -> list[ParallelPair]:
    """One pair per term; the source line opens with ``$signed $spoken``."""
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    signed = tags.signed_code(entry.puddle_id)
    token_line = tokens_to_line(tokenize(parse_sequence(entry.fsw)))
    pairs: list[ParallelPair] = []
    for term, spoken in [(t, entry.language) for t in entry.terms] + [(t, "en") for t in entry.en_terms]:
        tag_prefix = f"${signed} ${spoken}"
        if direction == "signed_to_spoken":
            source, target = " ".join(filter(None, [tag_prefix, token_line])), term
        else:
            source, target = " ".join(filter(None, [tag_prefix, term])), token_line
        pairs.append(ParallelPair(source, target, signed, spoken))
    return pairs


def corpus_pairs(corpus: Corpus, direction: str, tags: TagTable) -> list[ParallelPair]:
    return [pair for entry in corpus.entries for pair in make_pairs(entry, direction, tags)]


def export(
    corpus: Corpus,
    direction: str,
    out_dir: str | Path,
    *,
    name: str,
    tags: TagTable,
    config_hash: str = "",
) -> dict:
    """Write ``{name}.source.txt`` / ``{name}.target.txt`` (line-aligned) and
    ``{name}.manifest.json``; identical inputs yield identical bytes."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pairs = corpus_pairs(corpus, direction, tags)
    with open(out / f"{name}.source.txt", "w", encoding="utf-8", newline="\n") as handle:
        for pair in pairs:
            handle.write(pair.source + "\n")
    with open(out / f"{name}.target.txt", "w", encoding="utf-8", newline="\n") as handle:
        for pair in pairs:
            handle.write(pair.target + "\n")
    manifest = {
        "name": name,
        "entries": len(corpus.entries),
        "pairs": len(pairs),
        "provenance": corpus.provenance,
        "direction": direction,
        "config_hash": config_hash,
    }
    with open(out / f"{name}.manifest.json", "w", encoding="utf-8", newline="\n") as handle:
        json.dump(manifest, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")
    return manifest


def apply_expansion(corpus: Corpus, results: Mapping[EntryKey, "ExpansionResult"]) -> Corpus:
    """Replace entry terms with their expansions; English expansions go to
    ``en_terms`` so they pair under the spoken tag ``en``. Entries without a
    result, or with an empty one, keep their terms."""
    entries = []
    for entry in corpus.entries:
        result = results.get(entry.key)
        if result is None or (not result.native and not result.english):
            entries.append(entry)
            continue
        native = _dedupe(result.native)
        english = () if entry.language == "en" else _dedupe(result.english)
        entries.append(replace(entry, terms=native, en_terms=english))
    return Corpus(tuple(entries), "expanded")
