"""Deterministic annotation and term-filtering rules for puddle corpora.

Annotation rules either produce a complete annotation (or drop the entry)
or leave it untouched; filtering then removes junk terms, keyed by puddle
id. Filter patterns are configuration data: the shipped default can be
replaced per puddle without code changes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .bible import VerseStore, parse_bible_reference
from .corpus import Corpus, Entry
from .fsw import parse_sequence, serialize

# The movement symbol occasionally written as a question mark; entries that
# are exactly this sign carry nothing translatable.
QUESTION_MARK_FSW = "M510x517S29f0c491x484"

KOREAN_PUDDLE = 78
SLOVENE_PUDDLE = 52
BIBLE_PUDDLES = (151, 152)

_URL = re.compile(r"https?://|www\.", re.IGNORECASE)
_TRAILING_NUMBER = re.compile(r"(?P<word>.*\S)\s+\d+", re.DOTALL)
# One word, optionally a single uppercase variation letter, optionally a
# parenthesized source.
_SLOVENE_SHAPE = re.compile(r"(?P<word>\S+)(?: [A-Z])?(?: \([^()]*\))?")


@dataclass(frozen=True, slots=True)
class RuleOutcome:
    """Exactly one action per entry per pass."""

    action: str
    terms: tuple[str, ...] | None = None
    rule_id: str | None = None

    def __post_init__(self) -> None:
        if self.action not in ("annotate", "drop_entry", "keep", "unchanged"):
            raise ValueError(f"action {self.action!r}")
        if self.action != "unchanged" and not self.rule_id:
            raise ValueError("rule_id required when the entry changes")
        if self.action in ("annotate", "keep") and self.terms is None:
            raise ValueError(f"{self.action} requires terms")

    @classmethod
    def annotate(cls, terms: Iterable[str], rule_id: str) -> "RuleOutcome":
        return cls("annotate", tuple(terms), rule_id)

    @classmethod
    def drop(cls, rule_id: str) -> "RuleOutcome":
        return cls("drop_entry", None, rule_id)

    @classmethod
    def keep(cls, terms: Iterable[str], rule_id: str) -> "RuleOutcome":
        return cls("keep", tuple(terms), rule_id)

    @classmethod
    def unchanged(cls) -> "RuleOutcome":
        return cls("unchanged")


def rule_question_mark(entry: Entry) -> RuleOutcome:
    """Drop entries whose signing is exactly the question-mark symbol."""
    if serialize(parse_sequence(entry.fsw)) == QUESTION_MARK_FSW:
        return RuleOutcome.drop("question_mark")
    return RuleOutcome.unchanged()


def rule_korean(entry: Entry) -> RuleOutcome:
    """Annotate the standardized four-term Korean entries with the second
    term, stripped of its trailing number."""
    if entry.puddle_id != KOREAN_PUDDLE or len(entry.terms) != 4:
        return RuleOutcome.unchanged()
    match = _TRAILING_NUMBER.fullmatch(entry.terms[1])
    if match is None or entry.terms[3].strip() != ".":
        return RuleOutcome.unchanged()
    return RuleOutcome.annotate([match.group("word").strip()], "korean_second_term")


def _strip_variation_and_source(term: str) -> str:
    match = _SLOVENE_SHAPE.fullmatch(term)
    return match.group("word") if match else term


def rule_slovene(entry: Entry) -> RuleOutcome:
    """Annotate single-term entries shaped as word + optional variation
    letter + optional parenthesized source with the bare word."""
    if entry.puddle_id != SLOVENE_PUDDLE or len(entry.terms) != 1:
        return RuleOutcome.unchanged()
    match = _SLOVENE_SHAPE.fullmatch(entry.terms[0])
    if match is None:
        return RuleOutcome.unchanged()
    return RuleOutcome.annotate([match.group("word")], "slovene_strip")


def rule_bible(
    entry: Entry,
    store: VerseStore,
    verse_prefixes: Iterable[str] = (),
) -> RuleOutcome:
    """Annotate Bible entries with the stored verse text of the first term
    that names a single verse; a recognized verse-indicator signing prefix
    prepends ``Verse {n}: ``. Ranges, verse parts, and store misses leave
    the entry unchanged."""
    if entry.puddle_id not in BIBLE_PUDDLES:
        return RuleOutcome.unchanged()
    for term in entry.terms:
        ref = parse_bible_reference(term)
        if ref is None:
            continue
        text = store.get(ref)
        if text is None:
            continue
        if any(prefix and entry.fsw.startswith(prefix) for prefix in verse_prefixes):
            text = f"Verse {ref.verse}: {text}"
        return RuleOutcome.annotate([text], "bible_verse")
    return RuleOutcome.unchanged()


@dataclass
class PuddleFilter:
    """Term filters for one puddle, applied in field order."""

    remove_contains_regex: tuple[str, ...] = ()
    remove_prefix: tuple[str, ...] = ()
    remove_contains: tuple[str, ...] = ()
    remove_exact: tuple[str, ...] = ()
    remove_fullmatch_regex: tuple[str, ...] = ()
    strip_suffix: bool = False
    drop_last_term_if_in: tuple[str, ...] = ()
    _search: list[re.Pattern] = field(default_factory=list, repr=False)
    _full: list[re.Pattern] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self._search = [re.compile(p) for p in self.remove_contains_regex]
        self._full = [re.compile(p) for p in self.remove_fullmatch_regex]

    def apply(self, terms: list[str]) -> tuple[list[str], list[str]]:
        fired: list[str] = []

        def drop(label: str, predicate) -> None:
            nonlocal terms
            kept = [t for t in terms if not predicate(t)]
            if len(kept) != len(terms):
                fired.append(label)
                terms = kept

        if self._search:
            drop("contains_regex", lambda t: any(p.search(t) for p in self._search))
        if self.remove_prefix:
            drop("prefix", lambda t: t.startswith(self.remove_prefix))
        if self.remove_contains:
            drop("contains", lambda t: any(s in t for s in self.remove_contains))
        if self.remove_exact:
            drop("exact", lambda t: t in self.remove_exact)
        if self._full:
            drop("fullmatch_regex", lambda t: any(p.fullmatch(t) for p in self._full))
        if self.strip_suffix:
            stripped = [_strip_variation_and_source(t) for t in terms]
            if stripped != terms:
                fired.append("strip_suffix")
                terms = stripped
        if self.drop_last_term_if_in and terms and terms[-1] in self.drop_last_term_if_in:
            fired.append("pos_last_term")
            terms = terms[:-1]
        return terms, fired


@dataclass
class RulesConfig:
    remove_url_terms: bool = True
    verse_prefixes: tuple[str, ...] = ()
    puddles: dict[int, PuddleFilter] = field(default_factory=dict)


def _config_from_dict(data: dict) -> RulesConfig:
    puddles = {
        int(pid): PuddleFilter(
            remove_contains_regex=tuple(section.get("remove_contains_regex", ())),
            remove_prefix=tuple(section.get("remove_prefix", ())),
            remove_contains=tuple(section.get("remove_contains", ())),
            remove_exact=tuple(section.get("remove_exact", ())),
            remove_fullmatch_regex=tuple(section.get("remove_fullmatch_regex", ())),
            strip_suffix=bool(section.get("strip_suffix", False)),
            drop_last_term_if_in=tuple(section.get("drop_last_term_if_in", ())),
        )
        for pid, section in data.get("puddles", {}).items()
    }
    return RulesConfig(
        remove_url_terms=bool(data.get("remove_url_terms", True)),
        verse_prefixes=tuple(data.get("verse_prefixes", ())),
        puddles=puddles,
    )


def load_rules_config(path: str | Path) -> RulesConfig:
    with open(path, encoding="utf-8") as handle:
        return _config_from_dict(json.load(handle))


def default_rules_config() -> RulesConfig:
    from importlib.resources import files

    resource = files("fswprep").joinpath("resources/filter_rules.json")
    with resource.open(encoding="utf-8") as handle:
        return _config_from_dict(json.load(handle))


def filter_terms(entry: Entry, config: RulesConfig) -> RuleOutcome:
    """URL terms go first, then the entry's puddle filters; never adds terms."""
    terms = list(entry.terms)
    fired: list[str] = []
    if config.remove_url_terms:
        kept = [t for t in terms if not _URL.search(t)]
        if len(kept) != len(terms):
            fired.append("url")
            terms = kept
    puddle_filter = config.puddles.get(entry.puddle_id)
    if puddle_filter is not None:
        terms, puddle_fired = puddle_filter.apply(terms)
        fired.extend(f"p{entry.puddle_id}.{label}" for label in puddle_fired)
    if not fired:
        return RuleOutcome.unchanged()
    return RuleOutcome.keep(terms, "+".join(fired))


def apply_annotation_rules(
    entry: Entry,
    store: VerseStore | None = None,
    verse_prefixes: Iterable[str] = (),
) -> RuleOutcome:
    outcome = rule_question_mark(entry)
    if outcome.action != "unchanged":
        return outcome
    if entry.puddle_id == KOREAN_PUDDLE:
        return rule_korean(entry)
    if entry.puddle_id == SLOVENE_PUDDLE:
        return rule_slovene(entry)
    if entry.puddle_id in BIBLE_PUDDLES and store is not None:
        return rule_bible(entry, store, verse_prefixes)
    return RuleOutcome.unchanged()


def apply_rules(
    entry: Entry,
    config: RulesConfig,
    store: VerseStore | None = None,
) -> RuleOutcome:
    """One outcome per entry: annotation wins; otherwise the filter pass."""
    outcome = apply_annotation_rules(entry, store, config.verse_prefixes)
    if outcome.action != "unchanged":
        return outcome
    return filter_terms(entry, config)


@dataclass(frozen=True, slots=True)
class OutcomeRecord:
    puddle_id: int
    entry_id: int
    action: str
    rule_id: str | None

    def to_json(self) -> str:
        record = {
            "puddle_id": self.puddle_id,
            "entry_id": self.entry_id,
            "action": self.action,
            "rule_id": self.rule_id,
        }
        return json.dumps(record, ensure_ascii=False, sort_keys=True)


def run_rules(
    corpus: Corpus,
    config: RulesConfig,
    store: VerseStore | None = None,
) -> tuple[Corpus, list[OutcomeRecord]]:
    """Apply annotation then filtering to every entry; dropped entries leave
    the corpus. Deterministic: same corpus and config, same outcomes."""
    entries: list[Entry] = []
    records: list[OutcomeRecord] = []
    for entry in corpus.entries:
        outcome = apply_rules(entry, config, store)
        records.append(OutcomeRecord(entry.puddle_id, entry.entry_id, outcome.action, outcome.rule_id))
        if outcome.action == "drop_entry":
            continue
        if outcome.action in ("annotate", "keep"):
            entries.append(replace(entry, terms=outcome.terms))
        else:
            entries.append(entry)
    return Corpus(tuple(entries), "cleaned"), records
