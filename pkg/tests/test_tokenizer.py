import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fswprep.fsw import parse_sequence, serialize
from fswprep.tokenizer import (
    VOCABULARY_SIZE,
    MalformedTokenStream,
    TokenKind,
    UnknownToken,
    build_vocabulary,
    decode_ids,
    detokenize,
    encode_ids,
    pretty_format,
    token_kind,
    tokenize,
    tokens_to_line,
)

import fswgen
from conftest import HELLO_FSW, HELLO_TOKENS


class TestVocabulary:
    def test_size(self):
        assert len(build_vocabulary()) == VOCABULARY_SIZE == 1182

    def test_partition_counts(self):
        vocab = build_vocabulary()
        by_kind = {}
        for token in vocab.tokens:
            by_kind.setdefault(token_kind(token), 0)
            by_kind[token_kind(token)] += 1
        assert by_kind == {
            TokenKind.BOX: 4,
            TokenKind.SYMBOL_BASE: 656,
            TokenKind.FILL: 6,
            TokenKind.ROTATION: 16,
            TokenKind.POSITION: 500,
        }

    def test_contains_expected_surfaces(self):
        vocab = build_vocabulary()
        for token in ("S14c", "c2", "r6", "p518"):
            assert token in vocab

    def test_ordering(self):
        vocab = build_vocabulary()
        assert vocab.token_to_id("B") == 0
        assert vocab.tokens[:4] == ("B", "L", "M", "R")
        assert vocab.tokens[4] == "S100"
        assert vocab.tokens[-1] == "p749"

    def test_ids_dense_and_bijective(self):
        vocab = build_vocabulary()
        assert sorted(vocab.index.values()) == list(range(1182))
        for token_id, token in enumerate(vocab.tokens):
            assert vocab.token_to_id(token) == token_id
            assert vocab.id_to_token(token_id) == token

    def test_unknown_token(self):
        vocab = build_vocabulary()
        with pytest.raises(UnknownToken):
            vocab.token_to_id("p999")
        with pytest.raises(UnknownToken):
            vocab.id_to_token(1182)


class TestTokenize:
    def test_hello_golden(self):
        assert tokenize(parse_sequence(HELLO_FSW)) == HELLO_TOKENS

    def test_zero_symbol_sign(self):
        assert tokenize(parse_sequence("M500x500")) == ["M", "p500", "p500"]

    def test_sort_prefix_dropped(self):
        plain = tokenize(parse_sequence(HELLO_FSW))
        prefixed = tokenize(parse_sequence("AS14c20S27106" + HELLO_FSW))
        assert prefixed == plain

    def test_standalone_punctuation_has_no_box(self):
        tokens = tokenize(parse_sequence("S38800464x496"))
        assert tokens == ["S388", "c0", "r0", "p464", "p496"]

    def test_all_tokens_in_vocabulary(self):
        vocab = build_vocabulary()
        rng = random.Random(7)
        for _ in range(200):
            for token in tokenize(fswgen.random_sequence(rng, allow_prefix=True)):
                assert token in vocab

    def test_token_count_identity(self):
        rng = random.Random(11)
        for _ in range(200):
            sign = fswgen.random_sign(rng)
            tokens = tokenize(parse_sequence(sign.text()))
            assert len(tokens) == 3 + 5 * len(sign.symbols)


class TestDetokenize:
    def test_hello_inverse(self):
        assert detokenize(list(HELLO_TOKENS)) == parse_sequence(HELLO_FSW)

    def test_empty(self):
        assert detokenize([]) == parse_sequence("")

    def test_missing_y_position(self):
        with pytest.raises(MalformedTokenStream):
            detokenize(["M", "p518"])

    @pytest.mark.parametrize(
        "tokens",
        [
            ["p518"],
            ["c2"],
            ["S14c", "c2", "r0", "p481", "p471"],
            ["M", "p500", "p500", "S14c", "c2"],
            ["M", "p500", "p500", "S14c", "r0", "c2", "p481", "p471"],
            ["M", "p500", "p500", "bogus"],
        ],
    )
    def test_malformed_streams(self, tokens):
        with pytest.raises(MalformedTokenStream):
            detokenize(tokens)

    def test_punctuation_after_sign(self):
        text = "M500x500 S38800464x496"
        seq = parse_sequence(text)
        assert detokenize(tokenize(seq)) == seq

    def test_seeded_round_trip(self):
        rng = random.Random(4177)
        for _ in range(500):
            seq = fswgen.random_sequence(rng)
            assert detokenize(tokenize(seq)) == seq


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_tokenize_detokenize_identity(seed):
    seq = fswgen.random_sequence(random.Random(seed))
    assert detokenize(tokenize(seq)) == seq


class TestIds:
    def test_hello_ids_round_trip(self):
        vocab = build_vocabulary()
        tokens = list(HELLO_TOKENS)
        assert decode_ids(encode_ids(tokens, vocab), vocab) == tokens

    def test_empty(self):
        vocab = build_vocabulary()
        assert encode_ids([], vocab) == []

    def test_exhaustive_round_trip(self):
        vocab = build_vocabulary()
        tokens = list(vocab.tokens)
        assert decode_ids(encode_ids(tokens, vocab), vocab) == tokens

    def test_unknown(self):
        vocab = build_vocabulary()
        with pytest.raises(UnknownToken):
            encode_ids(["S14c", "nope"], vocab)


def test_tokens_to_line(hello_tokens):
    line = tokens_to_line(hello_tokens)
    assert line == "M p518 p529 S14c c2 r0 p481 p471 S271 c0 r6 p503 p489"


def test_pretty_format(hello_tokens):
    assert pretty_format(hello_tokens) == (
        "M p518 p529\nS14c c2 r0 p481 p471\nS271 c0 r6 p503 p489"
    )


def test_serialize_of_detokenized_matches_canonical():
    rng = random.Random(99)
    for _ in range(100):
        seq = fswgen.random_sequence(rng)
        assert serialize(detokenize(tokenize(seq))) == serialize(seq)
