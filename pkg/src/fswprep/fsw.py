"""Formal SignWriting in ASCII (FSW): parsing, validation, serialization.

FSW writes a sign as an optional temporal prefix (``A`` followed by bare
symbol ids), a box marker (``B``, ``L``, ``M`` or ``R``), a max coordinate
``<x>x<y>``, and zero or more positioned symbols. A symbol id is ``S``
plus a three-hex-digit base, one fill digit and one rotation digit
(``S14c20``). Coordinates live on the grid [250, 749] for both axes.
Punctuation symbols (bases 0x387..0x38b) may also stand alone, written as
a positioned symbol with no box.

All values here are immutable and safe to share across threads; parsing
has no global state.
"""

from __future__ import annotations

from dataclasses import dataclass

BOX_MARKERS = "BLMR"

BASE_MIN = 0x100
BASE_MAX = 0x38F
# ISWA symbols end at 0x38b; 0x38c..0x38f are reserved vocabulary slots,
# rejected only under strict validation.
STRICT_BASE_MAX = 0x38B

PUNCTUATION_BASE_MIN = 0x387
PUNCTUATION_BASE_MAX = 0x38B

COORD_MIN = 250
COORD_MAX = 749

FILL_MAX = 5
ROTATION_MAX = 0xF

_HEX_DIGITS = "0123456789abcdefABCDEF"


class MalformedSign(ValueError):
    """FSW text that violates the sign grammar, with its byte offset."""

    def __init__(self, message: str, offset: int, fragment: int | None = None):
        self.offset = offset
        self.fragment = fragment
        if fragment is None:
            where = f"offset {offset}"
        else:
            where = f"fragment {fragment}, offset {offset}"
        super().__init__(f"{message} ({where})")


@dataclass(frozen=True, slots=True)
class SymbolId:
    """One ISWA symbol identifier: base code point, fill and rotation."""

    base: int
    fill: int
    rotation: int

    def __post_init__(self) -> None:
        if not BASE_MIN <= self.base <= BASE_MAX:
            raise ValueError(f"symbol base {self.base:#x} outside [{BASE_MIN:#x}, {BASE_MAX:#x}]")
        if not 0 <= self.fill <= FILL_MAX:
            raise ValueError(f"fill {self.fill} outside [0, {FILL_MAX}]")
        if not 0 <= self.rotation <= ROTATION_MAX:
            raise ValueError(f"rotation {self.rotation} outside [0, {ROTATION_MAX}]")

    @property
    def is_punctuation(self) -> bool:
        return PUNCTUATION_BASE_MIN <= self.base <= PUNCTUATION_BASE_MAX

    def text(self) -> str:
        """Canonical six-character form, lowercase hex."""
        return f"S{self.base:03x}{self.fill:x}{self.rotation:x}"


@dataclass(frozen=True, slots=True)
class Coordinate:
    x: int
    y: int

    def __post_init__(self) -> None:
        for axis, value in (("x", self.x), ("y", self.y)):
            if not COORD_MIN <= value <= COORD_MAX:
                raise ValueError(f"{axis}={value} outside [{COORD_MIN}, {COORD_MAX}]")

    def text(self) -> str:
        return f"{self.x}x{self.y}"


@dataclass(frozen=True, slots=True)
class PlacedSymbol:
    id: SymbolId
    at: Coordinate

    def text(self) -> str:
        return self.id.text() + self.at.text()


@dataclass(frozen=True, slots=True)
class FswSign:
    """One boxed sign; symbol order is preserved exactly as parsed."""

    box: str
    max: Coordinate
    symbols: tuple[PlacedSymbol, ...]
    sort_prefix: tuple[SymbolId, ...] = ()

    def __post_init__(self) -> None:
        if self.box not in BOX_MARKERS or len(self.box) != 1:
            raise ValueError(f"box marker {self.box!r} not one of {BOX_MARKERS}")

    def text(self) -> str:
        prefix = ""
        if self.sort_prefix:
            prefix = "A" + "".join(s.text() for s in self.sort_prefix)
        body = "".join(s.text() for s in self.symbols)
        return f"{prefix}{self.box}{self.max.text()}{body}"


@dataclass(frozen=True, slots=True)
class FswSequence:
    """Signs and standalone punctuation marks, in writing order."""

    items: tuple[FswSign | PlacedSymbol, ...] = ()

    @property
    def signs(self) -> tuple[FswSign, ...]:
        return tuple(i for i in self.items if isinstance(i, FswSign))

    @property
    def standalone_punctuation(self) -> tuple[PlacedSymbol, ...]:
        return tuple(i for i in self.items if isinstance(i, PlacedSymbol))


def _parse_hex(text: str, pos: int, count: int, what: str, fragment: int | None) -> tuple[int, int]:
    end = pos + count
    if end > len(text):
        raise MalformedSign(f"truncated {what}", pos, fragment)
    chunk = text[pos:end]
    for i, ch in enumerate(chunk):
        if ch not in _HEX_DIGITS:
            raise MalformedSign(f"bad hex digit {ch!r} in {what}", pos + i, fragment)
    return int(chunk, 16), end


def _parse_symbol_id(text: str, pos: int, strict: bool, fragment: int | None) -> tuple[SymbolId, int]:
    start = pos
    if pos >= len(text) or text[pos] != "S":
        raise MalformedSign("expected symbol id", pos, fragment)
    base, pos = _parse_hex(text, pos + 1, 3, "symbol base", fragment)
    if not BASE_MIN <= base <= BASE_MAX:
        raise MalformedSign(f"symbol base {base:#05x} outside [{BASE_MIN:#x}, {BASE_MAX:#x}]", start + 1, fragment)
    if strict and base > STRICT_BASE_MAX:
        raise MalformedSign(f"symbol base {base:#05x} above strict maximum {STRICT_BASE_MAX:#x}", start + 1, fragment)
    fill, pos = _parse_hex(text, pos, 1, "fill", fragment)
    if fill > FILL_MAX:
        raise MalformedSign(f"fill {fill:x} outside [0, {FILL_MAX}]", pos - 1, fragment)
    rotation, pos = _parse_hex(text, pos, 1, "rotation", fragment)
    return SymbolId(base, fill, rotation), pos


def _parse_number(text: str, pos: int, fragment: int | None) -> tuple[int, int]:
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start:
        raise MalformedSign("expected coordinate digits", start, fragment)
    value = int(text[start:pos])
    if not COORD_MIN <= value <= COORD_MAX:
        raise MalformedSign(f"coordinate {value} outside [{COORD_MIN}, {COORD_MAX}]", start, fragment)
    return value, pos


def _parse_coordinate(text: str, pos: int, fragment: int | None) -> tuple[Coordinate, int]:
    x, pos = _parse_number(text, pos, fragment)
    if pos >= len(text) or text[pos] != "x":
        raise MalformedSign("expected 'x' between coordinates", pos, fragment)
    y, pos = _parse_number(text, pos + 1, fragment)
    return Coordinate(x, y), pos


def _parse_sign_at(text: str, pos: int, strict: bool, fragment: int | None) -> tuple[FswSign, int]:
    prefix: list[SymbolId] = []
    if pos < len(text) and text[pos] == "A":
        pos += 1
        while pos < len(text) and text[pos] == "S":
            symbol, pos = _parse_symbol_id(text, pos, strict, fragment)
            prefix.append(symbol)
        if not prefix:
            raise MalformedSign("temporal prefix without symbols", pos, fragment)
    if pos >= len(text) or text[pos] not in BOX_MARKERS:
        raise MalformedSign(f"expected box marker, one of {BOX_MARKERS}", pos, fragment)
    box = text[pos]
    max_coord, pos = _parse_coordinate(text, pos + 1, fragment)
    symbols: list[PlacedSymbol] = []
    while pos < len(text):
        symbol, pos = _parse_symbol_id(text, pos, strict, fragment)
        at, pos = _parse_coordinate(text, pos, fragment)
        symbols.append(PlacedSymbol(symbol, at))
    return FswSign(box, max_coord, tuple(symbols), tuple(prefix)), pos


def _parse_punctuation_at(text: str, pos: int, strict: bool, fragment: int | None) -> tuple[PlacedSymbol, int]:
    start = pos
    symbol, pos = _parse_symbol_id(text, pos, strict, fragment)
    if not symbol.is_punctuation:
        raise MalformedSign(
            f"standalone symbol base {symbol.base:#05x} is not punctuation "
            f"[{PUNCTUATION_BASE_MIN:#x}, {PUNCTUATION_BASE_MAX:#x}]",
            start + 1,
            fragment,
        )
    at, pos = _parse_coordinate(text, pos, fragment)
    return PlacedSymbol(symbol, at), pos


def parse_sign(text: str, *, strict: bool = False) -> FswSign:
    """Parse one FSW sign. Raises MalformedSign with the byte offset."""
    if not text:
        raise MalformedSign("empty sign", 0)
    sign, end = _parse_sign_at(text, 0, strict, None)
    if end != len(text):
        raise MalformedSign("trailing characters after sign", end)
    return sign


def _parse_fragment(text: str, strict: bool, fragment: int | None) -> FswSign | PlacedSymbol:
    if not text:
        raise MalformedSign("empty fragment", 0, fragment)
    if text[0] == "S":
        item, end = _parse_punctuation_at(text, 0, strict, fragment)
    else:
        item, end = _parse_sign_at(text, 0, strict, fragment)
    if end != len(text):
        raise MalformedSign("trailing characters after sign", end, fragment)
    return item


def parse_sequence(text: str, *, strict: bool = False) -> FswSequence:
    """Parse space-separated signs and standalone punctuation marks."""
    if text == "":
        return FswSequence(())
    items = tuple(
        _parse_fragment(fragment, strict, index)
        for index, fragment in enumerate(text.split(" "))
    )
    return FswSequence(items)


def serialize(sequence: FswSequence) -> str:
    """Canonical text: lowercase hex, 3-digit coordinates, single spaces."""
    return " ".join(item.text() for item in sequence.items)


def count_signs(text: str, *, strict: bool = False) -> int:
    """Number of visual units in an FSW string; standalone punctuation counts as one."""
    return len(parse_sequence(text, strict=strict).items)
