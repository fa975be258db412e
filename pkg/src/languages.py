"""Acceptor walks for the binary languages a^m b^m, (ab)^m and single words.

Two input styles are built here:

* spatial: every symbol position owns an a-node and a b-node; the node matching
  the checked word feeds a Grover accept hub, the other one a reject hub. Three
  steps carry all amplitude of the checked word to the accept node.
* sequential: the word sits on a double-linked rail of conveyor nodes and is
  fed one symbol per step into a processing gadget (splitter, delay line and a
  Hadamard merge, or per-position lane cells for a single word).

Port conventions are fixed and relied on by the coins:

* hub: input ports first, collector ports second
* rail, splitter: (prev-a, prev-b, next-a, next-b)
* merge: (in-a, in-b, out-accept, out-reject)
* wire cells (collectors, delay, chains, lanes): (arriving, leaving)
"""
from __future__ import annotations

import dataclasses
import enum
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray

from .config import Config
from .engine import (
    ArcStateVector,
    CoinSpec,
    CoinTable,
    GraphBuilder,
    PortedGraph,
    ensure_unitary,
    evolve,
    port_index,
    region_probability,
    region_slots,
)
from .errors import (
    CapacityError,
    EmptyInputError,
    EncodeError,
    InvalidRegionError,
    NoTargetError,
    NormalizationError,
    NotInvertibleError,
    UnsupportedLanguageError,
)
from .logger import setup_logger

LOGGER = setup_logger(__name__)

ALPHABET = "ab"
WILDCARD = "?"
SPATIAL_STEPS = 3

_WORD_RE = re.compile(r"^[ab]*$")


def validate_word(word: str) -> str:
    """Return word if it is a string over {a, b}."""
    if not isinstance(word, str) or not _WORD_RE.match(word):
        raise EncodeError(f"Words are strings over {{a, b}}, got {word!r}")
    return word


# =============================================================================
# TYPES
# =============================================================================

class Mode(enum.Enum):
    SPATIAL = "spatial"
    SEQUENTIAL = "sequential"


class LanguageKind(enum.Enum):
    EQ = "eq"
    AB = "ab"
    WORD = "word"


@dataclass(frozen=True)
class LanguageId:
    kind: LanguageKind
    word: str = ""

    def __post_init__(self):
        if self.kind is LanguageKind.WORD:
            if not self.word:
                raise EncodeError("A single-word language needs a nonempty word")
            validate_word(self.word)
        elif self.word:
            raise EncodeError(f"{self.kind.value} does not take a word")

    @classmethod
    def parse(cls, text: str) -> "LanguageId":
        """Parse 'eq', 'ab' or 'word:<w>'."""
        text = text.strip()
        if text.startswith("word:"):
            return cls(LanguageKind.WORD, text[len("word:"):])
        try:
            return cls(LanguageKind(text))
        except ValueError:
            raise UnsupportedLanguageError(f"Unknown language {text!r}; use eq, ab or word:<w>") from None

    def __str__(self) -> str:
        if self.kind is LanguageKind.WORD:
            return f"word:{self.word}"
        return self.kind.value


LEQ = LanguageId(LanguageKind.EQ)
LAB = LanguageId(LanguageKind.AB)


def specific_word(word: str) -> LanguageId:
    return LanguageId(LanguageKind.WORD, word)


@dataclass(frozen=True, eq=False)
class QuantumWord:
    """Per-position superposition x a + y b with |x|^2 + |y|^2 = alpha^2.

    ``amplitudes`` has shape (n, 2): column 0 weighs a, column 1 weighs b.
    """

    amplitudes: NDArray[np.complex128]
    alpha: float

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1, 2)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if not self.alpha > 0:
            raise NormalizationError(f"alpha must be positive, got {self.alpha}")
        weights = np.sum(np.abs(amps) ** 2, axis=1)
        bad = np.flatnonzero(np.abs(weights - self.alpha ** 2) > 1e-12)
        if bad.size:
            j = int(bad[0])
            raise NormalizationError(
                f"position {j + 1} carries weight {weights[j]:.15g}, expected alpha^2 = {self.alpha ** 2:.15g}"
            )

    @classmethod
    def from_word(cls, word: str) -> "QuantumWord":
        """Classical encoding: (alpha, 0) for a, (0, alpha) for b, alpha = 1/sqrt(n)."""
        validate_word(word)
        n = len(word)
        alpha = 1.0 / np.sqrt(n) if n else 1.0
        amps = np.zeros((n, 2), dtype=np.complex128)
        for j, symbol in enumerate(word):
            amps[j, ALPHABET.index(symbol)] = alpha
        return cls(amps, alpha)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantumWord):
            return NotImplemented
        return self.alpha == other.alpha and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


Input = Union[str, QuantumWord]


def as_quantum_word(word: Input) -> QuantumWord:
    return word if isinstance(word, QuantumWord) else QuantumWord.from_word(word)


@dataclass(frozen=True)
class BuiltWalk:
    """Graph, coins, input slots, accept/reject regions and step count of an acceptor."""

    graph: PortedGraph
    coins: CoinTable
    input_map: tuple[tuple[tuple[str, int], tuple[str, int]], ...]
    accept_region: frozenset[str]
    reject_region: frozenset[str]
    steps: int
    mode: Mode
    language: LanguageId
    input_length: int
    pattern: str
    complemented: bool = False

    def __post_init__(self):
        if self.accept_region & self.reject_region:
            raise InvalidRegionError(
                f"accept and reject regions overlap on {sorted(self.accept_region & self.reject_region)[:5]}"
            )
        unknown = (self.accept_region | self.reject_region) - set(self.graph.vertices)
        if unknown:
            raise InvalidRegionError(f"regions name unknown vertices {sorted(unknown)[:5]}")
        if len(self.input_map) != self.input_length:
            raise EncodeError(f"input map covers {len(self.input_map)} positions, expected {self.input_length}")
        slots = [self.graph.slot(v, p) for pair in self.input_map for v, p in pair]
        if len(set(slots)) != len(slots):
            raise EncodeError("input map reuses a (vertex, port) slot")
        if len(self.pattern) != self.input_length:
            raise EncodeError(f"pattern {self.pattern!r} does not have length {self.input_length}")
        if self.steps < 0:
            raise ValueError(f"step count must be non-negative, got {self.steps}")
        ensure_unitary(self.graph, self.coins)

    @cached_property
    def slot_table(self) -> NDArray[np.intp]:
        """(input_length, 2) array of state slots for each position's a and b."""
        table = np.array(
            [[port_index(self.graph, v, p) for v, p in pair] for pair in self.input_map], dtype=np.intp
        ).reshape(-1, 2)
        table.setflags(write=False)
        return table

    @property
    def node_count(self) -> int:
        return len(self.graph.vertices)

    @property
    def gadget_node_count(self) -> int:
        """Vertices outside the sequential input rail (all of them for spatial walks)."""
        if self.mode is Mode.SEQUENTIAL:
            return self.node_count - self.input_length
        return self.node_count


# =============================================================================
# LANGUAGES
# =============================================================================

def target_word(language: LanguageId, n: int) -> str | None:
    """The single word of length n in the language, or None."""
    if n < 0:
        raise ValueError(f"length must be non-negative, got {n}")
    if language.kind is LanguageKind.WORD:
        return language.word if n == len(language.word) else None
    if n % 2:
        return None
    m = n // 2
    if language.kind is LanguageKind.EQ:
        return "a" * m + "b" * m
    return "ab" * m


def acceptance_pattern(language: LanguageId, n: int) -> str:
    """The word a length-n walk checks, with '?' for positions nothing accepts."""
    target = target_word(language, n)
    if target is not None:
        return target
    if language.kind is LanguageKind.EQ and n % 2:
        m = n // 2
        return "a" * m + WILDCARD + "b" * m
    previous = target_word(language, n - 1) if n >= 1 else None
    if previous is not None:
        return previous + WILDCARD
    return WILDCARD * n


def _validate_pattern(pattern: str) -> None:
    if not pattern:
        raise EmptyInputError("the empty word is accepted by convention; no walk is built for it")
    if set(pattern) - set(ALPHABET + WILDCARD):
        raise EncodeError(f"pattern {pattern!r} must be over a, b and '?'")


# =============================================================================
# SPATIAL BUILDERS
# =============================================================================

def _funnel(builder: GraphBuilder, coins: dict, side: str, feeders: list[str]) -> None:
    """Hub with Grover(2k), k collectors and the sink node ``side``."""
    k = len(feeders)
    if k == 0:
        # nothing can reach this side; keep the sink as an isolated node
        builder.add_vertex(side, 2)
        builder.connect(side, 0, side, 1)
        coins[side] = CoinSpec.identity(2)
        return
    hub = builder.add_vertex(f"hub:{side}", 2 * k)
    coins[hub] = CoinSpec.grover(2 * k)
    builder.add_vertex(side, k)
    coins[side] = CoinSpec.grover(k)
    for port, feeder in enumerate(feeders):
        builder.connect(feeder, 0, hub, port)
    for i in range(k):
        collector = builder.add_vertex(f"col:{side}:{i + 1}", 2)
        coins[collector] = CoinSpec.swap()
        builder.connect(hub, k + i, collector, 0)
        builder.connect(collector, 1, side, i)


def build_spatial_pattern(pattern: str, language: LanguageId) -> BuiltWalk:
    """Star-funnel walk accepting the symbols of ``pattern`` ('?' accepts neither)."""
    _validate_pattern(pattern)
    builder = GraphBuilder()
    coins: dict[str, CoinSpec] = {}
    accept_feeders: list[str] = []
    reject_feeders: list[str] = []
    input_map = []
    for j, expected in enumerate(pattern, start=1):
        pair = []
        for symbol in ALPHABET:
            node = builder.add_vertex(f"in:{j}:{symbol}", 1)
            coins[node] = CoinSpec.grover(1)
            (accept_feeders if symbol == expected else reject_feeders).append(node)
            pair.append((node, 0))
        input_map.append(tuple(pair))
    _funnel(builder, coins, "accept", accept_feeders)
    _funnel(builder, coins, "reject", reject_feeders)

    graph = builder.build()
    walk = BuiltWalk(
        graph=graph,
        coins=CoinTable.for_graph(graph, coins),
        input_map=tuple(input_map),
        accept_region=frozenset({"accept"}),
        reject_region=frozenset({"reject"}),
        steps=SPATIAL_STEPS,
        mode=Mode.SPATIAL,
        language=language,
        input_length=len(pattern),
        pattern=pattern,
    )
    LOGGER.debug(f"Built spatial walk for {pattern!r}: {walk.node_count} vertices, {walk.steps} steps")
    return walk


def build_spatial(language: LanguageId, n: int) -> BuiltWalk:
    """Spatial acceptor for the length-n word of the language (n even, n >= 2)."""
    if n == 0:
        raise EmptyInputError("the empty word is accepted by convention; no walk is built for it")
    if n < 2 or n % 2:
        raise NoTargetError(f"spatial walks are built for even lengths n >= 2, got {n}")
    target = target_word(language, n)
    if target is None:
        raise NoTargetError(f"{language} has no word of length {n}")
    return build_spatial_pattern(target, language)


# =============================================================================
# SEQUENTIAL BUILDERS
# =============================================================================

def _rail(builder: GraphBuilder, coins: dict, length: int) -> tuple:
    """Conveyor rail R_length ... R_1 joined by (a-lane, b-lane) edge pairs.

    Position j is held on rail:j, so the first symbol is nearest the gadget.
    """
    for j in range(1, length + 1):
        builder.add_vertex(f"rail:{j}", 4)
        coins[f"rail:{j}"] = CoinSpec.conveyor()
    for j in range(1, length):
        builder.connect(f"rail:{j + 1}", 2, f"rail:{j}", 0)
        builder.connect(f"rail:{j + 1}", 3, f"rail:{j}", 1)
    tail = f"rail:{length}"
    builder.connect(tail, 0, tail, 1)
    return tuple(((f"rail:{j}", 0), (f"rail:{j}", 1)) for j in range(1, length + 1))


def _wire(builder: GraphBuilder, coins: dict, prefix: str, length: int, end_degree: int = 1) -> list[str]:
    """Path of swap cells prefix:1 .. prefix:length; the last cell has ``end_degree`` ports."""
    cells = []
    for i in range(1, length + 1):
        degree = 2 if i < length else end_degree
        cell = builder.add_vertex(f"{prefix}:{i}", degree)
        coins[cell] = CoinSpec.swap() if degree == 2 else CoinSpec.grover(degree)
        if cells:
            builder.connect(cells[-1], 1, cell, 0)
        cells.append(cell)
    return cells


def merge_delay(language: LanguageId, n: int) -> int:
    """Extra steps on the a-lane so that each a meets its b at the merge."""
    if language.kind is LanguageKind.AB:
        return 1
    if language.kind is LanguageKind.EQ:
        return max(1, n // 2)
    raise UnsupportedLanguageError(f"no sequential rail gadget for {language}; use build_sequential_word")


def build_sequential(language: LanguageId, n: int) -> BuiltWalk:
    """Rail-splitter-merge walk for (ab)^m or a^m b^m with an input rail of length n.

    The splitter sends the a-lane through a delay of delta cells and the b-lane
    straight to the merge, so an a at position p meets the b at p + delta.
    After T = n + delta + 2 steps all amplitude sits in the accept or reject chain.
    """
    if n < 1:
        raise EmptyInputError(f"sequential walks need a rail of length >= 1, got {n}")
    delta = merge_delay(language, n)
    chain = n + delta

    builder = GraphBuilder()
    coins: dict[str, CoinSpec] = {}
    input_map = _rail(builder, coins, n)

    builder.add_vertex("split", 4)
    coins["split"] = CoinSpec.conveyor()
    builder.connect("rail:1", 2, "split", 0)
    builder.connect("rail:1", 3, "split", 1)

    builder.add_vertex("merge", 4)
    coins["merge"] = CoinSpec.hadamard_merge()

    delay = _wire(builder, coins, "delay", delta, end_degree=2)
    builder.connect("split", 2, delay[0], 0)
    builder.connect(delay[-1], 1, "merge", 0)
    builder.connect("split", 3, "merge", 1)

    accept = _wire(builder, coins, "acc", chain)
    reject = _wire(builder, coins, "rej", chain)
    builder.connect("merge", 2, accept[0], 0)
    builder.connect("merge", 3, reject[0], 0)

    graph = builder.build()
    walk = BuiltWalk(
        graph=graph,
        coins=CoinTable.for_graph(graph, coins),
        input_map=input_map,
        accept_region=frozenset(accept),
        reject_region=frozenset(reject),
        steps=n + delta + 2,
        mode=Mode.SEQUENTIAL,
        language=language,
        input_length=n,
        pattern=acceptance_pattern(language, n),
    )
    LOGGER.debug(
        f"Built sequential walk for {language} n={n}: delta={delta}, "
        f"{walk.gadget_node_count} gadget vertices, {walk.steps} steps"
    )
    return walk


def build_sequential_lanes(pattern: str, language: LanguageId) -> BuiltWalk:
    """Swap-only walk checking ``pattern`` position by position.

    Rail head feeds an a-lane and a b-lane of len(pattern) cells. After
    T = len(pattern) steps the symbol from position j sits in cell
    len(pattern) - j + 1 of its lane; the cell is accepting when its lane
    matches the pattern there.
    """
    _validate_pattern(pattern)
    length = len(pattern)
    builder = GraphBuilder()
    coins: dict[str, CoinSpec] = {}
    input_map = _rail(builder, coins, length)

    accept, reject = set(), set()
    for lane, symbol in enumerate(ALPHABET):
        cells = _wire(builder, coins, f"lane:{symbol}", length)
        builder.connect("rail:1", 2 + lane, cells[0], 0)
        for k, cell in enumerate(cells, start=1):
            position = length - k + 1
            (accept if pattern[position - 1] == symbol else reject).add(cell)

    graph = builder.build()
    return BuiltWalk(
        graph=graph,
        coins=CoinTable.for_graph(graph, coins),
        input_map=input_map,
        accept_region=frozenset(accept),
        reject_region=frozenset(reject),
        steps=length,
        mode=Mode.SEQUENTIAL,
        language=language,
        input_length=length,
        pattern=pattern,
    )


def build_sequential_word(word: str) -> BuiltWalk:
    """Sequential acceptor for exactly ``word`` using only swap coins."""
    validate_word(word)
    if not word:
        raise EmptyInputError("the empty word is accepted by convention; no walk is built for it")
    walk = build_sequential_lanes(word, specific_word(word))
    LOGGER.debug(f"Built lane walk for {word!r}: {walk.gadget_node_count} gadget vertices, {walk.steps} steps")
    return walk


def build_walk(language: LanguageId, mode: Mode, n: int) -> BuiltWalk:
    """The reference acceptor for the length-n word of the language.

    Unlike walk_for_length this refuses lengths the language has no word for.
    """
    if mode is Mode.SPATIAL:
        return build_spatial(language, n)
    if language.kind is LanguageKind.WORD:
        if n != len(language.word):
            raise NoTargetError(f"{language} has no word of length {n}")
        return build_sequential_word(language.word)
    return build_sequential(language, n)


@lru_cache(maxsize=256)
def walk_for_length(language: LanguageId, mode: Mode, n: int) -> BuiltWalk:
    """The walk a sweep runs for inputs of length n."""
    if n < 1:
        raise EmptyInputError("the empty word is accepted by convention; no walk is built for it")
    if mode is Mode.SPATIAL:
        return build_spatial_pattern(acceptance_pattern(language, n), language)
    if language.kind is LanguageKind.WORD:
        return build_sequential_lanes(acceptance_pattern(language, n), language)
    return build_sequential(language, n)


def complement(walk: BuiltWalk) -> BuiltWalk:
    """Same walk with accept and reject regions swapped."""
    if not walk.reject_region:
        raise NotInvertibleError("walk has no reject region to accept with")
    return dataclasses.replace(
        walk,
        accept_region=walk.reject_region,
        reject_region=walk.accept_region,
        complemented=not walk.complemented,
    )


# =============================================================================
# ENCODING
# =============================================================================

def superpose_words(w1: str, w2: str, theta: float) -> QuantumWord:
    """cos(theta) w1 + sin(theta) w2, position by position.

    Matching positions keep the full weight alpha on their symbol.
    """
    validate_word(w1)
    validate_word(w2)
    if len(w1) != len(w2):
        raise EncodeError(f"words differ in length: {len(w1)} vs {len(w2)}")
    n = len(w1)
    alpha = 1.0 / np.sqrt(n) if n else 1.0
    amps = np.zeros((n, 2), dtype=np.complex128)
    for j, (s1, s2) in enumerate(zip(w1, w2)):
        if s1 == s2:
            amps[j, ALPHABET.index(s1)] = alpha
        else:
            amps[j, ALPHABET.index(s1)] = alpha * np.cos(theta)
            amps[j, ALPHABET.index(s2)] = alpha * np.sin(theta)
    return QuantumWord(amps, alpha)


def _place(walk: BuiltWalk, amplitudes: NDArray[np.complex128]) -> ArcStateVector:
    psi = np.zeros(walk.graph.dimension, dtype=np.complex128)
    m = amplitudes.shape[0]
    psi[walk.slot_table[:m].ravel()] = amplitudes.ravel()
    return psi


def _check_alpha(word: QuantumWord) -> None:
    expected = 1.0 / np.sqrt(word.n)
    if abs(word.alpha - expected) > 1e-12:
        raise NormalizationError(f"alpha must be 1/sqrt({word.n}) = {expected:.15g}, got {word.alpha:.15g}")


def encode_spatial(walk: BuiltWalk, word: Input) -> ArcStateVector:
    """Initial state with position j's (x, y) on its a-node and b-node."""
    if walk.mode is not Mode.SPATIAL:
        raise EncodeError(f"encode_spatial needs a spatial walk, got {walk.mode.value}")
    word = as_quantum_word(word)
    if word.n != walk.input_length:
        raise EncodeError(f"walk reads {walk.input_length} symbols, input has {word.n}")
    _check_alpha(word)
    return _place(walk, word.amplitudes)


def _check_rail(walk: BuiltWalk, n: int) -> None:
    if n > walk.input_length:
        raise CapacityError(f"rail holds {walk.input_length} symbols, input has {n}")
    # the delay line is sized for one length: a at p meets b at p + n/2
    if walk.language.kind is LanguageKind.EQ and n != walk.input_length:
        raise EncodeError(f"a^m b^m rail of length {walk.input_length} reads only inputs of that length, got {n}")


def encode_sequential(walk: BuiltWalk, word: Input) -> ArcStateVector:
    """Initial state with position j's (x, y) on the arriving ports of rail:j."""
    if walk.mode is not Mode.SEQUENTIAL:
        raise EncodeError(f"encode_sequential needs a sequential walk, got {walk.mode.value}")
    word = as_quantum_word(word)
    if word.n == 0:
        raise EmptyInputError("the empty word is accepted by convention; nothing to encode")
    _check_rail(walk, word.n)
    _check_alpha(word)
    return _place(walk, word.amplitudes)


def encode(walk: BuiltWalk, word: Input) -> ArcStateVector:
    if walk.mode is Mode.SPATIAL:
        return encode_spatial(walk, word)
    return encode_sequential(walk, word)


def decode(walk: BuiltWalk, psi: ArcStateVector) -> QuantumWord:
    """Read the per-position vectors back off an initial state."""
    amps = np.asarray(psi)[walk.slot_table]
    if walk.mode is Mode.SEQUENTIAL:
        occupied = np.flatnonzero(np.any(amps != 0, axis=1))
        amps = amps[: occupied[-1] + 1] if occupied.size else amps[:0]
    n = amps.shape[0]
    return QuantumWord(amps, 1.0 / np.sqrt(n) if n else 1.0)


def encode_batch(walk: BuiltWalk, words: Sequence[str]) -> ArcStateVector:
    """(dim, len(words)) stack of classical encodings."""
    psi = np.zeros((walk.graph.dimension, len(words)), dtype=np.complex128)
    for column, word in enumerate(words):
        n = len(word)
        if n == 0:
            raise EmptyInputError("the empty word is accepted by convention; nothing to encode")
        if walk.mode is Mode.SPATIAL and n != walk.input_length:
            raise EncodeError(f"walk reads {walk.input_length} symbols, {word!r} has {n}")
        if walk.mode is Mode.SEQUENTIAL:
            _check_rail(walk, n)
        symbols = [ALPHABET.index(s) for s in validate_word(word)]
        psi[walk.slot_table[np.arange(n), symbols], column] = 1.0 / np.sqrt(n)
    return psi


# =============================================================================
# RUNNING
# =============================================================================

def run(walk: BuiltWalk, word: Input) -> ArcStateVector:
    """Encode, then evolve for the walk's prescribed step count."""
    return evolve(walk, encode(walk, word), walk.steps)


def acceptance_probability(walk: BuiltWalk, word: Input) -> float:
    """Probability in the accept region after walk.steps; 1 for the empty word."""
    if len(as_quantum_word(word)) == 0:
        return 1.0
    return region_probability(walk.graph, run(walk, word), walk.accept_region)


def run_batch(walk: BuiltWalk, words: Sequence[str]) -> ArcStateVector:
    """Final states of classical words as columns; evolves in chunks of Config.BATCH_SIZE."""
    chunks = [
        evolve(walk, encode_batch(walk, words[i:i + Config.BATCH_SIZE]), walk.steps)
        for i in range(0, len(words), Config.BATCH_SIZE)
    ]
    if not chunks:
        return np.zeros((walk.graph.dimension, 0), dtype=np.complex128)
    return np.concatenate(chunks, axis=1)


def acceptance_batch(walk: BuiltWalk, words: Sequence[str]) -> NDArray[np.float64]:
    probs = np.empty(len(words), dtype=np.float64)
    for i in range(0, len(words), Config.BATCH_SIZE):
        chunk = words[i:i + Config.BATCH_SIZE]
        final = evolve(walk, encode_batch(walk, chunk), walk.steps)
        probs[i:i + len(chunk)] = region_probability(walk.graph, final, walk.accept_region)
    return probs


@lru_cache(maxsize=256)
def accepting_state(walk: BuiltWalk) -> ArcStateVector:
    """Normalized accept-region part of the state the walk's pattern evolves to.

    Pattern symbols get unit weight, '?' positions none. The zero vector is
    returned when no amplitude of the pattern reaches the accept region.
    """
    amps = np.zeros((walk.input_length, 2), dtype=np.complex128)
    for j, symbol in enumerate(walk.pattern):
        if symbol != WILDCARD:
            amps[j, ALPHABET.index(symbol)] = 1.0
    final = evolve(walk, _place(walk, amps), walk.steps)
    state = np.zeros_like(final)
    slots = region_slots(walk.graph, walk.accept_region)
    state[slots] = final[slots]
    norm = np.linalg.norm(state)
    if norm > 1e-12:
        state = state / norm
    else:
        state[:] = 0
    state.setflags(write=False)
    return state
