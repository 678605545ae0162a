"""Seeded generators for canonical FSW fixtures used across the test suite."""

from __future__ import annotations

import random

from fswprep.fsw import (
    BASE_MAX,
    BASE_MIN,
    BOX_MARKERS,
    COORD_MAX,
    COORD_MIN,
    PUNCTUATION_BASE_MAX,
    PUNCTUATION_BASE_MIN,
    Coordinate,
    FswSequence,
    FswSign,
    PlacedSymbol,
    SymbolId,
)

# Bases legal inside a sign for token round-trips: punctuation bases are
# reserved for standalone marks because the token stream carries no box
# boundary that could disambiguate them.
SIGN_BASES = [
    b for b in range(BASE_MIN, BASE_MAX + 1) if not PUNCTUATION_BASE_MIN <= b <= PUNCTUATION_BASE_MAX
]
PUNCTUATION_BASES = list(range(PUNCTUATION_BASE_MIN, PUNCTUATION_BASE_MAX + 1))


def random_coordinate(rng: random.Random) -> Coordinate:
    return Coordinate(rng.randint(COORD_MIN, COORD_MAX), rng.randint(COORD_MIN, COORD_MAX))


def random_symbol(rng: random.Random, bases: list[int]) -> SymbolId:
    return SymbolId(rng.choice(bases), rng.randint(0, 5), rng.randint(0, 15))


def random_sign(rng: random.Random, *, max_symbols: int = 4, allow_prefix: bool = False) -> FswSign:
    symbols = tuple(
        PlacedSymbol(random_symbol(rng, SIGN_BASES), random_coordinate(rng))
        for _ in range(rng.randint(0, max_symbols))
    )
    prefix: tuple[SymbolId, ...] = ()
    if allow_prefix and rng.random() < 0.3:
        prefix = tuple(random_symbol(rng, SIGN_BASES) for _ in range(rng.randint(1, 3)))
    return FswSign(rng.choice(BOX_MARKERS), random_coordinate(rng), symbols, prefix)


def random_punctuation(rng: random.Random) -> PlacedSymbol:
    return PlacedSymbol(random_symbol(rng, PUNCTUATION_BASES), random_coordinate(rng))


def random_sequence(
    rng: random.Random,
    *,
    max_items: int = 3,
    allow_prefix: bool = False,
    allow_punctuation: bool = True,
) -> FswSequence:
    items: list[FswSign | PlacedSymbol] = []
    for _ in range(rng.randint(1, max_items)):
        if allow_punctuation and rng.random() < 0.2:
            items.append(random_punctuation(rng))
        else:
            items.append(random_sign(rng, allow_prefix=allow_prefix))
    return FswSequence(tuple(items))
