"""Corpus preparation toolkit for Formal SignWriting (FSW).

Parses and tokenizes FSW, applies rule-based and chat-model cleaning and
expansion to SignPuddle-style corpora, scores cleaning quality by mean
intersection-over-union, and exports tagged parallel text for machine
translation.
"""

from .fsw import (
    Coordinate,
    FswSequence,
    FswSign,
    MalformedSign,
    PlacedSymbol,
    SymbolId,
    count_signs,
    parse_sequence,
    parse_sign,
    serialize,
)
from .tokenizer import (
    MalformedTokenStream,
    TokenVocabulary,
    UnknownToken,
    build_vocabulary,
    decode_ids,
    detokenize,
    encode_ids,
    tokenize,
    tokens_to_line,
)

__version__ = "0.1.0"

__all__ = [
    "Coordinate",
    "FswSequence",
    "FswSign",
    "MalformedSign",
    "MalformedTokenStream",
    "PlacedSymbol",
    "SymbolId",
    "TokenVocabulary",
    "UnknownToken",
    "build_vocabulary",
    "count_signs",
    "decode_ids",
    "detokenize",
    "encode_ids",
    "parse_sequence",
    "parse_sign",
    "serialize",
    "tokenize",
    "tokens_to_line",
    "__version__",
]
