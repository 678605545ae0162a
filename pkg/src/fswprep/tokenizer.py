"""Discrete tokenization of FSW sequences over a fixed 1182-token vocabulary.

Every sign component becomes its own token: box markers ``B L M R``,
symbol bases ``S100``..``S38f``, fills ``c0``..``c5``, rotations
``r0``..``rf``, and grid positions ``p250``..``p749``. A boxed sign emits
box, max position pair, then five tokens per symbol; the temporal sort
prefix is dropped as redundant. Standalone punctuation emits its five
symbol tokens with no box.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .fsw import (
    BASE_MAX,
    BASE_MIN,
    BOX_MARKERS,
    COORD_MAX,
    COORD_MIN,
    FILL_MAX,
    PUNCTUATION_BASE_MAX,
    PUNCTUATION_BASE_MIN,
    Coordinate,
    FswSequence,
    FswSign,
    PlacedSymbol,
    SymbolId,
)

VOCABULARY_SIZE = 1182


class MalformedTokenStream(ValueError):
    """Token stream whose shape cannot be decoded back into signs."""


class UnknownToken(KeyError):
    """Token text or id missing from the vocabulary."""


class TokenKind(Enum):
    BOX = "box"
    SYMBOL_BASE = "symbol_base"
    FILL = "fill"
    ROTATION = "rotation"
    POSITION = "position"


def token_kind(token: str) -> TokenKind | None:
    """Classify a surface form; None if it is not a legal token."""
    if token in BOX_MARKERS and len(token) == 1:
        return TokenKind.BOX
    if len(token) == 4 and token[0] == "S":
        try:
            base = int(token[1:], 16)
        except ValueError:
            return None
        if token[1:] == f"{base:03x}" and BASE_MIN <= base <= BASE_MAX:
            return TokenKind.SYMBOL_BASE
        return None
    if len(token) == 2 and token[0] == "c" and token[1].isdigit():
        return TokenKind.FILL if int(token[1]) <= FILL_MAX else None
    if len(token) == 2 and token[0] == "r" and token[1] in "0123456789abcdef":
        return TokenKind.ROTATION
    if len(token) == 4 and token[0] == "p" and token[1:].isdigit():
        return TokenKind.POSITION if COORD_MIN <= int(token[1:]) <= COORD_MAX else None
    return None


@dataclass(frozen=True)
class TokenVocabulary:
    """Closed token inventory with a dense, 0-based text<->id bijection."""

    tokens: tuple[str, ...]
    index: dict[str, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def token_to_id(self, token: str) -> int:
        try:
            return self.index[token]
        except KeyError:
            raise UnknownToken(token) from None

    def id_to_token(self, token_id: int) -> str:
        if 0 <= token_id < len(self.tokens):
            return self.tokens[token_id]
        raise UnknownToken(token_id)


def build_vocabulary() -> TokenVocabulary:
    """All 1182 tokens: boxes, then bases, fills, rotations, positions."""
    tokens = [*BOX_MARKERS]
    tokens.extend(f"S{base:03x}" for base in range(BASE_MIN, BASE_MAX + 1))
    tokens.extend(f"c{fill}" for fill in range(FILL_MAX + 1))
    tokens.extend(f"r{rotation:x}" for rotation in range(16))
    tokens.extend(f"p{position}" for position in range(COORD_MIN, COORD_MAX + 1))
    return TokenVocabulary(tuple(tokens), {t: i for i, t in enumerate(tokens)})


def _symbol_tokens(placed: PlacedSymbol) -> list[str]:
    s = placed.id
    return [
        f"S{s.base:03x}",
        f"c{s.fill}",
        f"r{s.rotation:x}",
        f"p{placed.at.x}",
        f"p{placed.at.y}",
    ]


def tokenize(sequence: FswSequence) -> list[str]:
    """Token stream for a sequence; the sort prefix is not emitted."""
    out: list[str] = []
    for item in sequence.items:
        if isinstance(item, FswSign):
            out.append(item.box)
            out.append(f"p{item.max.x}")
            out.append(f"p{item.max.y}")
            for placed in item.symbols:
                out.extend(_symbol_tokens(placed))
        else:
            out.extend(_symbol_tokens(item))
    return out


def _expect(tokens: list[str], pos: int, kind: TokenKind, context: str) -> str:
    if pos >= len(tokens):
        raise MalformedTokenStream(f"stream ends where {kind.value} was required ({context})")
    token = tokens[pos]
    actual = token_kind(token)
    if actual is None:
        raise MalformedTokenStream(f"unknown token {token!r} at index {pos}")
    if actual is not kind:
        raise MalformedTokenStream(
            f"{actual.value} token {token!r} at index {pos} where {kind.value} was required ({context})"
        )
    return token


def _take_symbol(tokens: list[str], pos: int) -> tuple[PlacedSymbol, int]:
    base = int(_expect(tokens, pos, TokenKind.SYMBOL_BASE, "symbol")[1:], 16)
    fill = int(_expect(tokens, pos + 1, TokenKind.FILL, "after symbol base")[1:])
    rotation = int(_expect(tokens, pos + 2, TokenKind.ROTATION, "after fill")[1:], 16)
    x = int(_expect(tokens, pos + 3, TokenKind.POSITION, "symbol x")[1:])
    y = int(_expect(tokens, pos + 4, TokenKind.POSITION, "symbol y")[1:])
    return PlacedSymbol(SymbolId(base, fill, rotation), Coordinate(x, y)), pos + 5


def _is_punctuation_base(token: str) -> bool:
    return PUNCTUATION_BASE_MIN <= int(token[1:], 16) <= PUNCTUATION_BASE_MAX


def detokenize(tokens: list[str]) -> FswSequence:
    """Rebuild the sequence; inverse of tokenize on streams whose sign and
    punctuation boundaries are deducible from token kinds.

    A symbol-base token at a symbol boundary ends the open sign when its
    base is punctuation (punctuation carries no box of its own).
    """
    items: list[FswSign | PlacedSymbol] = []
    pos = 0
    while pos < len(tokens):
        token = tokens[pos]
        kind = token_kind(token)
        if kind is TokenKind.BOX:
            box = token
            x = int(_expect(tokens, pos + 1, TokenKind.POSITION, "box max x")[1:])
            y = int(_expect(tokens, pos + 2, TokenKind.POSITION, "box max y")[1:])
            pos += 3
            symbols: list[PlacedSymbol] = []
            while (
                pos < len(tokens)
                and token_kind(tokens[pos]) is TokenKind.SYMBOL_BASE
                and not _is_punctuation_base(tokens[pos])
            ):
                placed, pos = _take_symbol(tokens, pos)
                symbols.append(placed)
            items.append(FswSign(box, Coordinate(x, y), tuple(symbols)))
        elif kind is TokenKind.SYMBOL_BASE and _is_punctuation_base(token):
            placed, pos = _take_symbol(tokens, pos)
            items.append(placed)
        elif kind is None:
            raise MalformedTokenStream(f"unknown token {token!r} at index {pos}")
        else:
            raise MalformedTokenStream(
                f"{kind.value} token {token!r} at index {pos} where a box or punctuation symbol was required"
            )
    return FswSequence(tuple(items))


def encode_ids(tokens: list[str], vocabulary: TokenVocabulary) -> list[int]:
    return [vocabulary.token_to_id(t) for t in tokens]


def decode_ids(ids: list[int], vocabulary: TokenVocabulary) -> list[str]:
    return [vocabulary.id_to_token(i) for i in ids]


def tokens_to_line(tokens: list[str]) -> str:
    """Single-line file form: tokens joined by single spaces."""
    return " ".join(tokens)


def pretty_format(tokens: list[str]) -> str:
    """Multi-line display form: one line per box header or symbol group."""
    lines: list[str] = []
    pos = 0
    while pos < len(tokens):
        if token_kind(tokens[pos]) is TokenKind.BOX:
            lines.append(" ".join(tokens[pos : pos + 3]))
            pos += 3
        else:
            lines.append(" ".join(tokens[pos : pos + 5]))
            pos += 5
    return "\n".join(lines)
