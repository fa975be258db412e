"""Scalar metrics and classical oracles for walk results."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from rapidfuzz.distance import Jaro

from .engine import region_probability
from .errors import StateShapeError, UndefinedMarginError
from .languages import (
    ArcStateVector,
    LanguageId,
    LanguageKind,
    Mode,
    acceptance_batch,
    accepting_state,
    run_batch,
    target_word,
    validate_word,
    walk_for_length,
)

PROBABILITY_SLACK = 1e-12


@dataclass(frozen=True)
class AcceptanceRecord:
    string: str
    in_language: bool
    acceptance_probability: float
    fidelity: float
    jaro: float

    def __post_init__(self):
        for name in ("acceptance_probability", "fidelity", "jaro"):
            value = getattr(self, name)
            if not -PROBABILITY_SLACK <= value <= 1 + PROBABILITY_SLACK:
                raise ValueError(f"{name}={value!r} for {self.string!r} is outside [0, 1]")


def fidelity(psi: ArcStateVector, phi: ArcStateVector):
    """|<phi|psi>|^2; psi may be a (dim, batch) stack, giving one value per column."""
    psi = np.asarray(psi)
    phi = np.asarray(phi)
    if phi.ndim != 1 or psi.shape[0] != phi.shape[0]:
        raise StateShapeError(f"cannot compare states of shapes {psi.shape} and {phi.shape}")
    overlap = np.abs(phi.conj() @ psi) ** 2
    return float(overlap) if psi.ndim == 1 else overlap


def jaro(w1: str, w2: str) -> float:
    """Jaro similarity: 0 without matches, 1 for equal words (the empty word included)."""
    if w1 == w2:
        return 1.0
    if not w1 or not w2:
        return 0.0
    return float(Jaro.similarity(w1, w2))


def enumerate_strings(count: int) -> list[str]:
    """First ``count`` nonempty words over {a, b}, by length then lexicographically."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    words = (
        "".join(symbols)
        for length in itertools.count(1)
        for symbols in itertools.product("ab", repeat=length)
    )
    return list(itertools.islice(words, count))


def all_strings(n: int) -> list[str]:
    """Every word of length n, in lexicographic order."""
    return ["".join(symbols) for symbols in itertools.product("ab", repeat=n)]


def membership(language: LanguageId, word: str) -> bool:
    """Classical recognizer used as the oracle for every walk result."""
    validate_word(word)
    if language.kind is LanguageKind.WORD:
        return word == language.word
    if language.kind is LanguageKind.AB:
        return word == "ab" * (len(word) // 2) and len(word) % 2 == 0
    m = word.count("a")
    return word == "a" * m + "b" * m


def reference_word(language: LanguageId, n: int) -> str | None:
    """The in-language word of length n, else of length n-1, else None."""
    word = target_word(language, n)
    if word is None and n >= 1:
        word = target_word(language, n - 1)
    return word


def cutpoint_margin(records: Sequence[AcceptanceRecord]) -> tuple[float, float, bool]:
    """(lambda, epsilon, bounded) separating in-language from other acceptance values."""
    return cutpoint_from_values(
        [r.acceptance_probability for r in records if r.in_language],
        [r.acceptance_probability for r in records if not r.in_language],
    )


def cutpoint_from_values(inside: Sequence[float], outside: Sequence[float]) -> tuple[float, float, bool]:
    if not inside or not outside:
        raise UndefinedMarginError(
            f"cut-point needs both classes, got {len(inside)} in-language and {len(outside)} other records"
        )
    low, high = max(outside), min(inside)
    cutpoint = (low + high) / 2
    epsilon = max(0.0, (high - low) / 2)
    return cutpoint, epsilon, epsilon > 0


def discrimination_success(p_a: float, p_b: float) -> float:
    """Best success probability telling two equally likely inputs apart from accept/reject."""
    for p in (p_a, p_b):
        if not -PROBABILITY_SLACK <= p <= 1 + PROBABILITY_SLACK:
            raise ValueError(f"acceptance probabilities must lie in [0, 1], got {p!r}")
    return 0.5 * (1.0 + abs(p_a - p_b))


def evaluate_words(language: LanguageId, mode: Mode, words: Sequence[str]):
    """Acceptance probabilities and fidelities for classical words, in input order.

    Words are grouped by length and each group runs as one batch on its
    length's walk. The empty word counts as accepted with fidelity 1.
    """
    acceptance = np.ones(len(words))
    fidelities = np.ones(len(words))
    by_length: dict[int, list[int]] = {}
    for i, word in enumerate(words):
        by_length.setdefault(len(validate_word(word)), []).append(i)
    for n, positions in sorted(by_length.items()):
        if n == 0:
            continue
        walk = walk_for_length(language, mode, n)
        group = [words[i] for i in positions]
        final = run_batch(walk, group)
        acceptance[positions] = region_probability(walk.graph, final, walk.accept_region)
        fidelities[positions] = fidelity(final, accepting_state(walk))
    return acceptance, fidelities


def acceptance_records(language: LanguageId, mode: Mode, words: Sequence[str]) -> list[AcceptanceRecord]:
    acceptance, fidelities = evaluate_words(language, mode, words)
    records = []
    for word, p, f in zip(words, acceptance, fidelities):
        reference = reference_word(language, len(word))
        records.append(AcceptanceRecord(
            string=word,
            in_language=membership(language, word),
            acceptance_probability=float(min(p, 1.0)),
            fidelity=float(min(f, 1.0)),
            jaro=jaro(word, reference) if reference is not None else 0.0,
        ))
    return records


def max_nonword_acceptance(language: LanguageId, mode: Mode, n: int) -> tuple[int, float, str | None]:
    """(non-word count, worst acceptance, first word reaching it) over all words of length n."""
    words = all_strings(n)
    walk = walk_for_length(language, mode, n)
    probs = acceptance_batch(walk, words)
    nonwords = [i for i, word in enumerate(words) if not membership(language, word)]
    if not nonwords:
        return 0, 0.0, None
    worst = max(nonwords, key=lambda i: probs[i])
    return len(nonwords), float(probs[worst]), words[worst]
