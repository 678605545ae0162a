"""Bible verse references and verse text lookup for the Bible puddles.

Entries there name their verse as ``<Book><chapter>v<verse>`` with
zero-padded numbers, optionally followed by annotations ("Matthew15v07
NLT"). References spanning ranges or verse parts do not parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

_REFERENCE = re.compile(r"(?P<book>\d?[A-Za-z]+)(?P<chapter>\d{1,3})v(?P<verse>\d{1,3})(?:\s.*)?", re.DOTALL)


@dataclass(frozen=True, slots=True)
class BibleRef:
    book: str
    chapter: int
    verse: int

    def __post_init__(self) -> None:
        if not self.book:
            raise ValueError("book must be non-empty")
        if self.chapter < 1 or self.verse < 1:
            raise ValueError("chapter and verse must be >= 1")


def parse_bible_reference(term: str) -> BibleRef | None:
    """Parse a verse identifier; None for ranges, parts, and non-references."""
    match = _REFERENCE.fullmatch(term.strip())
    if match is None:
        return None
    chapter = int(match.group("chapter"))
    verse = int(match.group("verse"))
    if chapter < 1 or verse < 1:
        return None
    return BibleRef(match.group("book"), chapter, verse)


class VerseStore:
    """(book, chapter, verse) -> verse text; lookups report absence, never ''."""

    def __init__(self, verses: dict[tuple[str, int, int], str] | None = None):
        self._verses = dict(verses or {})

    @classmethod
    def from_tsv(cls, path: str | Path) -> "VerseStore":
        """Load ``book<TAB>chapter<TAB>verse<TAB>text`` rows, UTF-8."""
        verses: dict[tuple[str, int, int], str] = {}
        with open(path, encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                fields = line.split("\t")
                if len(fields) != 4:
                    raise ValueError(f"{path}:{number}: expected 4 tab-separated fields, got {len(fields)}")
                book, chapter, verse, text = fields
                if not text:
                    raise ValueError(f"{path}:{number}: empty verse text")
                try:
                    key = (book, int(chapter), int(verse))
                except ValueError:
                    raise ValueError(f"{path}:{number}: chapter and verse must be integers") from None
                verses[key] = text
        return cls(verses)

    def get(self, ref: BibleRef) -> str | None:
        return self._verses.get((ref.book, ref.chapter, ref.verse))

    def __contains__(self, ref: BibleRef) -> bool:
        return (ref.book, ref.chapter, ref.verse) in self._verses

    def __len__(self) -> int:
        return len(self._verses)
