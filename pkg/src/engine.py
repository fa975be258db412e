"""Coined discrete-time quantum walk engine.

The walker lives on (vertex, port) coin states. Ports of a vertex occupy a
contiguous block of slots, vertices in insertion order, so a state vector is a
flat complex array of length 2 * |edges|. One step is U = S C: each vertex's
coin acts on its own port block, then the flip-flop shift carries amplitude
from one end of every edge to the other.

States may also be 2-D arrays of shape (dim, batch); every column evolves
independently, which is how input sweeps run many words at once.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np
from numpy.typing import NDArray

from .config import Config
from .errors import (
    GraphStructureError,
    InvalidDimensionError,
    InvalidRegionError,
    NonUnitaryError,
    StateShapeError,
)
from .logger import setup_logger

LOGGER = setup_logger(__name__)

ArcStateVector = NDArray[np.complex128]

SQRT_HALF = 1.0 / np.sqrt(2.0)


# =============================================================================
# COINS
# =============================================================================

def grover_coin(d: int) -> NDArray[np.complex128]:
    """Return the d-dimensional Grover coin: (2-d)/d on the diagonal, 2/d elsewhere."""
    if d < 1:
        raise InvalidDimensionError(f"Grover coin needs d >= 1, got {d}")
    return np.full((d, d), 2.0 / d, dtype=np.complex128) - np.eye(d, dtype=np.complex128)


def hadamard_merge_coin() -> NDArray[np.complex128]:
    """Return the 4x4 merge coin for port order (in-a, in-b, out-accept, out-reject).

    A pair (x, y) on the input ports leaves as ((x+y)/sqrt2, (x-y)/sqrt2) on the
    output ports, and the output block is mapped back the same way.
    """
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) * SQRT_HALF
    coin = np.zeros((4, 4), dtype=np.complex128)
    coin[2:, :2] = h
    coin[:2, 2:] = h
    return coin


def conveyor_coin() -> NDArray[np.complex128]:
    """Return sigma_x (x) I_2 for port order (prev-a, prev-b, next-a, next-b)."""
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    return np.kron(sigma_x, np.eye(2, dtype=np.complex128))


def permutation_coin(perm: Sequence[int], phases: Sequence[complex] | None = None) -> NDArray[np.complex128]:
    """Return the coin sending port i to port perm[i] with phase phases[i]."""
    d = len(perm)
    if d < 1:
        raise InvalidDimensionError("Permutation coin needs at least one port")
    if sorted(perm) != list(range(d)):
        raise InvalidDimensionError(f"{list(perm)} is not a permutation of 0..{d - 1}")
    if phases is None:
        phases = [1.0] * d
    if len(phases) != d:
        raise InvalidDimensionError(f"Expected {d} phases, got {len(phases)}")
    coin = np.zeros((d, d), dtype=np.complex128)
    for port, (target, phase) in enumerate(zip(perm, phases)):
        coin[target, port] = phase
    return coin


class CoinKind(enum.Enum):
    GROVER = "grover"
    HADAMARD_MERGE = "hadamard_merge"
    CONVEYOR = "conveyor"
    PERMUTATION = "permutation"
    IDENTITY = "identity"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CoinSpec:
    """Declarative coin; ``matrix`` realizes it as a d x d complex array."""

    kind: CoinKind
    dimension: int
    perm: tuple[int, ...] = ()
    phases: tuple[complex, ...] = ()
    entries: tuple[tuple[complex, ...], ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidDimensionError(f"Coin dimension must be positive, got {self.dimension}")
        if self.kind in (CoinKind.HADAMARD_MERGE, CoinKind.CONVEYOR) and self.dimension != 4:
            raise InvalidDimensionError(f"{self.kind.value} coin is 4-dimensional, got {self.dimension}")
        if self.kind is CoinKind.PERMUTATION:
            if len(self.perm) != self.dimension or sorted(self.perm) != list(range(self.dimension)):
                raise InvalidDimensionError(f"Bad permutation {self.perm} for dimension {self.dimension}")
            if len(self.phases) != self.dimension:
                raise InvalidDimensionError(f"Expected {self.dimension} phases, got {len(self.phases)}")
            if any(abs(abs(p) - 1.0) > 1e-12 for p in self.phases):
                raise NonUnitaryError(f"Permutation phases must have unit modulus: {self.phases}")
        if self.kind is CoinKind.CUSTOM:
            if len(self.entries) != self.dimension or any(len(row) != self.dimension for row in self.entries):
                raise InvalidDimensionError(f"Custom coin must be {self.dimension}x{self.dimension}")

    @classmethod
    def grover(cls, d: int) -> "CoinSpec":
        return cls(CoinKind.GROVER, d)

    @classmethod
    def hadamard_merge(cls) -> "CoinSpec":
        return cls(CoinKind.HADAMARD_MERGE, 4)

    @classmethod
    def conveyor(cls) -> "CoinSpec":
        return cls(CoinKind.CONVEYOR, 4)

    @classmethod
    def permutation(cls, perm: Sequence[int], phases: Sequence[complex] | None = None) -> "CoinSpec":
        perm = tuple(int(p) for p in perm)
        phases = tuple(complex(p) for p in phases) if phases is not None else (1 + 0j,) * len(perm)
        return cls(CoinKind.PERMUTATION, len(perm), perm=perm, phases=phases)

    @classmethod
    def swap(cls) -> "CoinSpec":
        """Two-port swap, the coin of every wire cell."""
        return cls.permutation((1, 0))

    @classmethod
    def identity(cls, d: int) -> "CoinSpec":
        return cls(CoinKind.IDENTITY, d)

    @classmethod
    def custom(cls, matrix) -> "CoinSpec":
        arr = np.asarray(matrix, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidDimensionError(f"Custom coin must be square, got shape {arr.shape}")
        entries = tuple(tuple(complex(x) for x in row) for row in arr)
        return cls(CoinKind.CUSTOM, arr.shape[0], entries=entries)

    @cached_property
    def matrix(self) -> NDArray[np.complex128]:
        if self.kind is CoinKind.GROVER:
            m = grover_coin(self.dimension)
        elif self.kind is CoinKind.HADAMARD_MERGE:
            m = hadamard_merge_coin()
        elif self.kind is CoinKind.CONVEYOR:
            m = conveyor_coin()
        elif self.kind is CoinKind.PERMUTATION:
            m = permutation_coin(self.perm, self.phases)
        elif self.kind is CoinKind.IDENTITY:
            m = np.eye(self.dimension, dtype=np.complex128)
        else:
            m = np.array(self.entries, dtype=np.complex128)
        m.setflags(write=False)
        return m

    def residual(self) -> float:
        """max |C^dagger C - I|."""
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dimension))))


# =============================================================================
# GRAPH
# =============================================================================

@dataclass(frozen=True)
class PortedGraph:
    """Undirected multigraph with ordered ports.

    ``edges`` holds (v, a, u, b) vertex-index/port quadruples: port a of v and
    port b of u are the two ends of one edge. Every port-end is used exactly once.
    """

    vertices: tuple[str, ...]
    degrees: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.degrees):
            raise GraphStructureError("vertices and degrees differ in length")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphStructureError("vertex names must be unique")
        for name, degree in zip(self.vertices, self.degrees):
            if degree < 1:
                raise GraphStructureError(f"vertex {name!r} has degree {degree}; every vertex needs a port")
        seen: set[tuple[int, int]] = set()
        for v, a, u, b in self.edges:
            for w, p in ((v, a), (u, b)):
                if not 0 <= w < len(self.vertices):
                    raise GraphStructureError(f"edge references unknown vertex index {w}")
                if not 0 <= p < self.degrees[w]:
                    raise GraphStructureError(f"port {p} out of range at {self.vertices[w]!r}")
                if (w, p) in seen:
                    raise GraphStructureError(f"port {p} of {self.vertices[w]!r} is bound twice")
                seen.add((w, p))
            if (v, a) == (u, b):
                raise GraphStructureError(f"edge joins port {a} of {self.vertices[v]!r} to itself")
        if len(seen) != sum(self.degrees):
            unbound = [
                (self.vertices[w], p)
                for w, d in enumerate(self.degrees) for p in range(d) if (w, p) not in seen
            ]
            raise GraphStructureError(f"unbound ports: {unbound[:5]}")

    @cached_property
    def offsets(self) -> NDArray[np.intp]:
        return np.concatenate(([0], np.cumsum(self.degrees)[:-1])).astype(np.intp)

    @cached_property
    def dimension(self) -> int:
        return int(sum(self.degrees))

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.vertices)}

    @cached_property
    def partner(self) -> NDArray[np.intp]:
        """partner[s] is the slot at the other end of slot s's edge."""
        partner = np.empty(self.dimension, dtype=np.intp)
        for v, a, u, b in self.edges:
            s, t = self.offsets[v] + a, self.offsets[u] + b
            partner[s] = t
            partner[t] = s
        partner.setflags(write=False)
        return partner

    def vertex_index(self, vertex: str) -> int:
        try:
            return self.index[vertex]
        except KeyError:
            raise InvalidRegionError(f"unknown vertex {vertex!r}") from None

    def degree(self, vertex: str) -> int:
        return self.degrees[self.vertex_index(vertex)]

    def slot(self, vertex: str, port: int) -> int:
        """Flat state index of (vertex, port)."""
        i = self.vertex_index(vertex)
        if not 0 <= port < self.degrees[i]:
            raise InvalidRegionError(f"{vertex!r} has no port {port}")
        return int(self.offsets[i] + port)

    def vertex_slots(self, vertex: str) -> range:
        i = self.vertex_index(vertex)
        start = int(self.offsets[i])
        return range(start, start + self.degrees[i])


class GraphBuilder:
    """Mutable helper collecting vertices and port bindings for a PortedGraph."""

    def __init__(self):
        self._names: list[str] = []
        self._degrees: list[int] = []
        self._index: dict[str, int] = {}
        self._edges: list[tuple[int, int, int, int]] = []

    def add_vertex(self, name: str, degree: int) -> str:
        if name in self._index:
            raise GraphStructureError(f"duplicate vertex {name!r}")
        self._index[name] = len(self._names)
        self._names.append(name)
        self._degrees.append(degree)
        return name

    def connect(self, v: str, a: int, u: str, b: int) -> None:
        """Bind port a of v and port b of u as the two ends of one edge."""
        try:
            self._edges.append((self._index[v], a, self._index[u], b))
        except KeyError as e:
            raise GraphStructureError(f"unknown vertex {e.args[0]!r}") from None

    def build(self) -> PortedGraph:
        return PortedGraph(tuple(self._names), tuple(self._degrees), tuple(self._edges))


def port_index(graph: PortedGraph, vertex: str, port: int) -> int:
    """Flat state index of (vertex, port) in graph's states."""
    return graph.slot(vertex, port)


@dataclass(frozen=True)
class CoinTable:
    """Coin per vertex, aligned with ``vertices``."""

    vertices: tuple[str, ...]
    coins: tuple[CoinSpec, ...]

    @classmethod
    def for_graph(cls, graph: PortedGraph, assignment: Mapping[str, CoinSpec]) -> "CoinTable":
        missing = [v for v in graph.vertices if v not in assignment]
        if missing:
            raise InvalidDimensionError(f"no coin assigned to {missing[:5]}")
        extra = set(assignment) - set(graph.vertices)
        if extra:
            raise InvalidRegionError(f"coins assigned to unknown vertices {sorted(extra)[:5]}")
        table = cls(graph.vertices, tuple(assignment[v] for v in graph.vertices))
        table.check(graph)
        return table

    def check(self, graph: PortedGraph) -> None:
        if self.vertices != graph.vertices:
            raise InvalidDimensionError("coin table does not cover the graph's vertices")
        for name, degree, coin in zip(graph.vertices, graph.degrees, self.coins):
            if coin.dimension != degree:
                raise InvalidDimensionError(
                    f"coin at {name!r} has dimension {coin.dimension}, vertex degree is {degree}"
                )

    def as_dict(self) -> dict[str, CoinSpec]:
        return dict(zip(self.vertices, self.coins))


# =============================================================================
# EVOLUTION
# =============================================================================

class WalkOperator:
    """U = S C compiled for one graph and coin table.

    Vertices sharing a coin are applied together with one einsum over their
    gathered port blocks; identity coins are skipped.
    """

    def __init__(self, graph: PortedGraph, coins: CoinTable):
        coins.check(graph)
        self.graph = graph
        groups: dict[CoinSpec, list[int]] = {}
        for i, coin in enumerate(coins.coins):
            groups.setdefault(coin, []).append(i)
        self._groups = []
        for coin, members in groups.items():
            matrix = coin.matrix
            if np.array_equal(matrix, np.eye(coin.dimension)):
                continue
            idx = graph.offsets[members][:, None] + np.arange(coin.dimension)[None, :]
            self._groups.append((matrix, matrix.conj().T.copy(), idx))
        self._partner = graph.partner

    def _check(self, psi: ArcStateVector) -> None:
        if psi.ndim not in (1, 2) or psi.shape[0] != self.graph.dimension:
            raise StateShapeError(
                f"state has shape {psi.shape}, graph has {self.graph.dimension} port-ends"
            )

    def coin(self, psi: ArcStateVector, adjoint: bool = False) -> ArcStateVector:
        out = np.array(psi, dtype=np.complex128, copy=True)
        for matrix, matrix_h, idx in self._groups:
            out[idx] = np.einsum("ij,kj...->ki...", matrix_h if adjoint else matrix, psi[idx])
        return out

    def shift(self, psi: ArcStateVector) -> ArcStateVector:
        return psi[self._partner]

    def step(self, psi: ArcStateVector) -> ArcStateVector:
        psi = np.asarray(psi, dtype=np.complex128)
        self._check(psi)
        return self.shift(self.coin(psi))

    def adjoint_step(self, psi: ArcStateVector) -> ArcStateVector:
        psi = np.asarray(psi, dtype=np.complex128)
        self._check(psi)
        # S is an involution, so (S C)^dagger = C^dagger S
        return self.coin(self.shift(psi), adjoint=True)


@lru_cache(maxsize=128)
def compile_walk(graph: PortedGraph, coins: CoinTable) -> WalkOperator:
    return WalkOperator(graph, coins)


class WalkLike(Protocol):
    graph: PortedGraph
    coins: CoinTable


def step(graph: PortedGraph, coins: CoinTable, psi: ArcStateVector) -> ArcStateVector:
    """Apply one step S C to psi."""
    return compile_walk(graph, coins).step(psi)


def adjoint_step(graph: PortedGraph, coins: CoinTable, psi: ArcStateVector) -> ArcStateVector:
    """Apply (S C)^dagger = C^dagger S to psi."""
    return compile_walk(graph, coins).adjoint_step(psi)


def evolve(walk: WalkLike, psi: ArcStateVector, steps: int) -> ArcStateVector:
    """Apply ``steps`` walk steps; zero steps returns psi unchanged."""
    if steps < 0:
        raise ValueError(f"step count must be non-negative, got {steps}")
    op = compile_walk(walk.graph, walk.coins)
    for _ in range(steps):
        psi = op.step(psi)
    return psi


def region_slots(graph: PortedGraph, region: Iterable[str]) -> NDArray[np.intp]:
    slots = [s for vertex in sorted(set(region)) for s in graph.vertex_slots(vertex)]
    return np.asarray(slots, dtype=np.intp)


def region_probability(graph: PortedGraph, psi: ArcStateVector, region: Iterable[str]):
    """Sum of |amplitude|^2 over every port of every vertex in region.

    Returns a float for a single state and an array for a (dim, batch) stack.
    """
    psi = np.asarray(psi)
    if psi.shape[0] != graph.dimension:
        raise StateShapeError(f"state has {psi.shape[0]} slots, graph has {graph.dimension}")
    slots = region_slots(graph, region)
    prob = np.sum(np.abs(psi[slots]) ** 2, axis=0)
    return float(prob) if psi.ndim == 1 else prob


def verify_unitarity(graph: PortedGraph, coins: CoinTable) -> float:
    """Max coin residual |C^dagger C - I|; inf when the shift is not an involution."""
    coins.check(graph)
    partner = graph.partner
    slots = np.arange(graph.dimension)
    if not np.array_equal(partner[partner], slots) or np.any(partner == slots):
        return float("inf")
    return max((coin.residual() for coin in set(coins.coins)), default=0.0)


def ensure_unitary(graph: PortedGraph, coins: CoinTable, tol: float | None = None) -> float:
    """Build-time gate: raise NonUnitaryError when the residual reaches tol."""
    tol = Config.UNITARY_TOL if tol is None else tol
    residual = verify_unitarity(graph, coins)
    if not residual < tol:
        raise NonUnitaryError(f"walk is not unitary: residual {residual:.3e} >= {tol:.0e}")
    LOGGER.debug(f"Unitarity gate passed: residual={residual:.3e}, vertices={len(graph.vertices)}")
    return residual
