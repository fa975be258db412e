"""Tests for languages.py - acceptor builders, encodings and runs."""
import dataclasses
import itertools
import pytest
import sys
import os

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import Config
from src.engine import evolve, region_probability, step
from src.errors import (
    CapacityError,
    EmptyInputError,
    EncodeError,
    InvalidRegionError,
    NoTargetError,
    NormalizationError,
    NotInvertibleError,
    UnsupportedLanguageError,
)
from src.languages import (
    LAB,
    LEQ,
    LanguageId,
    LanguageKind,
    Mode,
    QuantumWord,
    acceptance_batch,
    acceptance_pattern,
    acceptance_probability,
    build_sequential,
    build_sequential_word,
    build_spatial,
    build_walk,
    complement,
    decode,
    encode,
    encode_batch,
    encode_sequential,
    encode_spatial,
    specific_word,
    superpose_words,
    target_word,
    walk_for_length,
)


def all_words(n):
    return ["".join(p) for p in itertools.product("ab", repeat=n)]


def mismatches(word, target):
    return sum(s != t for s, t in zip(word, target))


def merge_arrival(walk, position, symbol):
    """First step at which a lone symbol placed at ``position`` sits on the merge node."""
    psi = np.zeros(walk.graph.dimension, dtype=np.complex128)
    vertex, port = walk.input_map[position - 1]["ab".index(symbol)]
    psi[walk.graph.slot(vertex, port)] = 1.0
    for t in range(1, walk.steps + 1):
        psi = step(walk.graph, walk.coins, psi)
        if region_probability(walk.graph, psi, {"merge"}) > 0.5:
            return t
    return None


class TestLanguageIds:
    """Parsing and target words."""

    def test_parse(self):
        assert LanguageId.parse("eq") == LEQ
        assert LanguageId.parse("ab") == LAB
        assert LanguageId.parse("word:abba") == specific_word("abba")

    def test_str_round_trip(self):
        for text in ("eq", "ab", "word:aab"):
            assert str(LanguageId.parse(text)) == text

    def test_unknown_language(self):
        with pytest.raises(UnsupportedLanguageError):
            LanguageId.parse("palindromes")

    def test_word_language_needs_word(self):
        with pytest.raises(EncodeError):
            LanguageId(LanguageKind.WORD, "")
        with pytest.raises(EncodeError):
            LanguageId(LanguageKind.WORD, "abc")

    def test_target_words(self):
        assert target_word(LEQ, 4) == "aabb"
        assert target_word(LAB, 6) == "ababab"
        assert target_word(LEQ, 5) is None
        assert target_word(specific_word("aba"), 3) == "aba"
        assert target_word(specific_word("aba"), 2) is None

    def test_acceptance_patterns(self):
        assert acceptance_pattern(LEQ, 4) == "aabb"
        assert acceptance_pattern(LEQ, 5) == "aa?bb"
        assert acceptance_pattern(LAB, 5) == "abab?"
        assert acceptance_pattern(specific_word("ab"), 3) == "ab?"
        assert acceptance_pattern(specific_word("ab"), 1) == "?"


class TestSpatial:
    """Star-funnel acceptors."""

    @pytest.mark.parametrize("language", [LEQ, LAB])
    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
    def test_in_language_certainty(self, language, n):
        walk = build_spatial(language, n)
        assert walk.steps == 3
        assert acceptance_probability(walk, target_word(language, n)) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
    def test_closed_form_all_inputs(self, n):
        walk = build_spatial(LEQ, n)
        words = all_words(n)
        target = target_word(LEQ, n)
        expected = np.array([(n - mismatches(w, target)) ** 2 / n ** 2 for w in words])
        assert np.max(np.abs(acceptance_batch(walk, words) - expected)) < 1e-9

    def test_abbb(self):
        walk = build_spatial(LEQ, 4)
        final = evolve(walk, encode(walk, "abbb"), 3)
        assert region_probability(walk.graph, final, walk.accept_region) == pytest.approx(9 / 16, abs=1e-12)
        assert region_probability(walk.graph, final, walk.reject_region) == pytest.approx(1 / 16, abs=1e-12)

    def test_node_count(self):
        walk = build_spatial(LEQ, 4)
        assert walk.node_count == 20
        assert walk.gadget_node_count == 20

    def test_coin_dimensions(self):
        walk = build_spatial(LAB, 6)
        assert walk.graph.degree("hub:accept") == 12
        assert walk.graph.degree("accept") == 6
        assert walk.graph.degree("in:1:a") == 1
        assert walk.coins.as_dict()["col:accept:1"].perm == (1, 0)

    def test_word_language(self):
        walk = build_spatial(specific_word("abba"), 4)
        assert acceptance_probability(walk, "abba") == pytest.approx(1.0, abs=1e-9)
        assert acceptance_probability(walk, "abbb") == pytest.approx(9 / 16, abs=1e-9)

    def test_odd_length_rejected(self):
        with pytest.raises(NoTargetError):
            build_spatial(LEQ, 3)

    def test_empty_rejected(self):
        with pytest.raises(EmptyInputError):
            build_spatial(LEQ, 0)

    def test_odd_walk_never_certain(self):
        walk = walk_for_length(LEQ, Mode.SPATIAL, 5)
        assert walk.pattern == "aa?bb"
        assert np.max(acceptance_batch(walk, all_words(5))) < 1 - 1e-9

    def test_encoding_places_amplitudes(self):
        walk = build_spatial(LEQ, 4)
        psi = encode_spatial(walk, "aabb")
        for vertex in ("in:1:a", "in:2:a", "in:3:b", "in:4:b"):
            assert psi[walk.graph.slot(vertex, 0)] == pytest.approx(0.5)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    def test_quantum_position_splits(self):
        walk = build_spatial(LEQ, 2)
        alpha = 1 / np.sqrt(2)
        word = QuantumWord([[alpha / np.sqrt(2), alpha / np.sqrt(2)], [0, alpha]], alpha)
        psi = encode_spatial(walk, word)
        assert psi[walk.graph.slot("in:1:a", 0)] == pytest.approx(alpha / np.sqrt(2))
        assert psi[walk.graph.slot("in:1:b", 0)] == pytest.approx(alpha / np.sqrt(2))

    def test_length_mismatch(self):
        with pytest.raises(EncodeError):
            encode_spatial(build_spatial(LEQ, 4), "ab")


class TestSequential:
    """Rail-splitter-merge and lane acceptors."""

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_ab_certainty(self, m):
        walk = build_sequential(LAB, 2 * m)
        assert acceptance_probability(walk, "ab" * m) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_eq_certainty(self, m):
        walk = build_sequential(LEQ, 2 * m)
        assert acceptance_probability(walk, "a" * m + "b" * m) == pytest.approx(1.0, abs=1e-9)

    def test_short_word_on_long_rail(self):
        assert acceptance_probability(build_sequential(LAB, 8), "abab") == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("word,expected", [("bb", 0.5), ("ba", 0.5), ("aaab", 0.75), ("abba", 0.75)])
    def test_partial_acceptance(self, word, expected):
        walk = build_sequential(LAB, 4)
        assert acceptance_probability(walk, word) == pytest.approx(expected, abs=1e-9)

    def test_step_count(self):
        assert build_sequential(LAB, 4).steps == 7
        assert build_sequential(LEQ, 6).steps == 6 + 3 + 2

    def test_regions_hold_all_amplitude(self):
        walk = build_sequential(LEQ, 4)
        words = all_words(4)
        final = evolve(walk, np.stack([encode(walk, w) for w in words], axis=1), walk.steps)
        accept = region_probability(walk.graph, final, walk.accept_region)
        reject = region_probability(walk.graph, final, walk.reject_region)
        assert np.allclose(accept + reject, 1.0, atol=1e-12)

    def test_word_walk_lanes(self):
        walk = build_sequential_word("abab")
        assert walk.gadget_node_count == 8
        assert walk.steps == 4
        assert acceptance_probability(walk, "abab") == pytest.approx(1.0, abs=1e-9)
        assert acceptance_probability(walk, "abba") == pytest.approx(0.5, abs=1e-9)
        kinds = {coin.kind.value for vertex, coin in walk.coins.as_dict().items() if not vertex.startswith("rail")}
        assert kinds <= {"permutation", "grover"}

    def test_singleton_path(self):
        walk = build_sequential_word("a")
        assert walk.node_count == 3
        assert acceptance_probability(walk, "a") == pytest.approx(1.0, abs=1e-9)
        assert acceptance_probability(walk, "b") == pytest.approx(0.0, abs=1e-9)

    def test_word_needs_lane_builder(self):
        with pytest.raises(UnsupportedLanguageError):
            build_sequential(specific_word("ab"), 2)

    def test_encoding_on_rail(self):
        walk = build_sequential(LAB, 2)
        psi = encode_sequential(walk, "ab")
        alpha = 1 / np.sqrt(2)
        assert psi[walk.graph.slot("rail:1", 0)] == pytest.approx(alpha)
        assert psi[walk.graph.slot("rail:2", 1)] == pytest.approx(alpha)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            encode_sequential(build_sequential(LAB, 2), "abab")

    def test_mode_mismatch(self):
        with pytest.raises(EncodeError):
            encode_sequential(build_spatial(LAB, 2), "ab")


class TestEncoding:
    """QuantumWord, superposition and decoding."""

    def test_decode_inverts_encode(self):
        for walk, word in ((build_spatial(LEQ, 4), "abab"), (build_sequential(LAB, 4), "abb")):
            assert decode(walk, encode(walk, word)) == QuantumWord.from_word(word)

    def test_normalization_checked(self):
        with pytest.raises(NormalizationError):
            QuantumWord([[1, 1]], 1.0)

    def test_wrong_alpha_rejected(self):
        word = QuantumWord([[1, 0], [0, 1]], 1.0)
        with pytest.raises(NormalizationError):
            encode_spatial(build_spatial(LEQ, 2), word)

    def test_superpose_endpoints(self):
        assert superpose_words("aabb", "bbaa", 0.0) == QuantumWord.from_word("aabb")
        end = superpose_words("aabb", "bbaa", np.pi / 2)
        assert np.allclose(end.amplitudes, QuantumWord.from_word("bbaa").amplitudes, atol=1e-15)
        assert end != QuantumWord.from_word("bbaa")

    def test_superpose_keeps_matches(self):
        word = superpose_words("aabb", "abbb", 0.3)
        assert word.amplitudes[0, 0] == 0.5
        assert word.amplitudes[1, 0] == pytest.approx(0.5 * np.cos(0.3))
        assert word.amplitudes[1, 1] == pytest.approx(0.5 * np.sin(0.3))

    def test_superpose_length_mismatch(self):
        with pytest.raises(EncodeError):
            superpose_words("ab", "abb", 0.1)

    def test_invalid_symbol(self):
        with pytest.raises(EncodeError):
            QuantumWord.from_word("abc")


class TestComplement:
    """Accept/reject swap."""

    def test_abbb_complement(self):
        walk = complement(build_spatial(LEQ, 4))
        assert acceptance_probability(walk, "abbb") == pytest.approx(1 / 16, abs=1e-9)
        assert acceptance_probability(walk, "aabb") == pytest.approx(0.0, abs=1e-9)

    def test_involution(self):
        walk = build_spatial(LAB, 4)
        assert complement(complement(walk)) == walk

    def test_needs_reject_region(self):
        walk = dataclasses.replace(build_spatial(LEQ, 2), reject_region=frozenset())
        with pytest.raises(NotInvertibleError):
            complement(walk)

    def test_overlapping_regions(self):
        walk = build_spatial(LEQ, 2)
        with pytest.raises(InvalidRegionError):
            dataclasses.replace(walk, reject_region=walk.accept_region)


class TestRuns:
    """Batching and the empty word."""

    def test_empty_word_accepted(self):
        assert acceptance_probability(build_spatial(LEQ, 2), "") == 1.0

    def test_no_walk_for_empty(self):
        with pytest.raises(EmptyInputError):
            walk_for_length(LEQ, Mode.SPATIAL, 0)

    def test_batches_match_single_runs(self, monkeypatch):
        walk = build_sequential(LAB, 4)
        words = all_words(4)
        whole = acceptance_batch(walk, words)
        monkeypatch.setattr(Config, "BATCH_SIZE", 3)
        chunked = acceptance_batch(walk, words)
        single = np.array([acceptance_probability(walk, w) for w in words])
        assert np.allclose(whole, chunked, atol=1e-15)
        assert np.allclose(whole, single, atol=1e-12)


class TestBuildWalk:
    """Strict reference acceptors per mode."""

    def test_dispatch(self):
        assert build_walk(LEQ, Mode.SPATIAL, 4) == build_spatial(LEQ, 4)
        assert build_walk(LAB, Mode.SEQUENTIAL, 4) == build_sequential(LAB, 4)
        assert build_walk(specific_word("aba"), Mode.SEQUENTIAL, 3) == build_sequential_word("aba")

    def test_no_word_of_that_length(self):
        with pytest.raises(NoTargetError):
            build_walk(specific_word("aba"), Mode.SEQUENTIAL, 4)
        with pytest.raises(NoTargetError):
            build_walk(LAB, Mode.SPATIAL, 5)


class TestMergeTiming:
    """Lone symbols traced through the rail, splitter and delay line."""

    @pytest.mark.parametrize("language,n,delta", [
        (LAB, 4, 1), (LAB, 6, 1), (LEQ, 4, 2), (LEQ, 6, 3), (LEQ, 8, 4),
    ])
    def test_a_meets_b_delta_later(self, language, n, delta):
        walk = build_sequential(language, n)
        for p in range(1, n - delta + 1):
            arrival = merge_arrival(walk, p, "a")
            assert arrival == p + delta + 1
            assert merge_arrival(walk, p + delta, "b") == arrival

    def test_same_position_arrives_apart(self):
        walk = build_sequential(LEQ, 6)
        for p in range(1, 7):
            assert merge_arrival(walk, p, "a") - merge_arrival(walk, p, "b") == 3


class TestEqRailLength:
    """An a^m b^m rail reads inputs of exactly its own length."""

    @pytest.mark.parametrize("word", ["ab", "aabb", "aaabbb"])
    def test_shorter_input_refused(self, word):
        walk = build_sequential(LEQ, 8)
        with pytest.raises(EncodeError):
            acceptance_probability(walk, word)
        with pytest.raises(EncodeError):
            acceptance_batch(walk, [word])

    def test_full_length_accepted(self):
        assert acceptance_probability(build_sequential(LEQ, 8), "aaaabbbb") == pytest.approx(1.0, abs=1e-9)

    def test_ab_rail_still_reads_prefixes(self):
        walk = build_sequential(LAB, 8)
        for word in ("ab", "abab", "ababab"):
            assert acceptance_probability(walk, word) == pytest.approx(1.0, abs=1e-9)


BUILT_WALKS = (
    [pytest.param(lambda lang=lang, n=n: build_spatial(lang, n), id=f"spatial-{lang}-{n}")
     for lang in (LEQ, LAB) for n in range(2, 13, 2)]
    + [pytest.param(lambda lang=lang, n=n: build_sequential(lang, n), id=f"sequential-{lang}-{n}")
       for lang in (LEQ, LAB) for n in range(1, 9)]
    + [pytest.param(lambda w=w: build_sequential_word(w), id=f"word-{w}")
       for w in ("a", "ab", "aba", "abba", "ababa", "abbaab")]
)


class TestStepwiseConservation:
    """Every built walk keeps unit norm and a full accept/reject/elsewhere split at each step."""

    @pytest.mark.parametrize("make_walk", BUILT_WALKS)
    def test_every_step(self, make_walk):
        walk = make_walk()
        psi = encode_batch(walk, all_words(walk.input_length))
        elsewhere = set(walk.graph.vertices) - walk.accept_region - walk.reject_region
        for t in range(walk.steps + 1):
            drift = np.abs(np.linalg.norm(psi, axis=0) - 1.0)
            assert np.max(drift) < 1e-12, f"norm drift {np.max(drift):.3e} at step {t}"
            total = (
                region_probability(walk.graph, psi, walk.accept_region)
                + region_probability(walk.graph, psi, walk.reject_region)
                + region_probability(walk.graph, psi, elsewhere)
            )
            assert np.max(np.abs(total - 1.0)) < 1e-12
            if t < walk.steps:
                psi = step(walk.graph, walk.coins, psi)
