"""JSON documents for built walks.

Layout::

    {"version": 1,
     "vertices": [{"id": "hub:accept", "degree": 8, "coin": {"kind": "grover"}}, ...],
     "edges": [[v, a, u, b], ...],          # vertex ids and port numbers
     "accept": [...], "reject": [...],
     "input_map": [[[a_vertex, a_port], [b_vertex, b_port]], ...],
     "steps": 3, "mode": "spatial", "language": "eq",
     "pattern": "aabb", "complemented": false}

Complex numbers are written as [re, im]; floats keep their repr, so a
document loads back into an equal walk.
"""
import json
import logging
from pathlib import Path
from typing import Optional, Union

from .engine import CoinKind, CoinSpec, CoinTable, PortedGraph
from .errors import WalkError
from .languages import BuiltWalk, LanguageId, Mode

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAX_DOCUMENT_SIZE = 16 * 1024 * 1024  # 16 MB


def _complex_out(z: complex) -> list:
    return [z.real, z.imag]


def _complex_in(pair) -> complex:
    re, im = pair
    return complex(float(re), float(im))


def coin_to_dict(coin: CoinSpec) -> dict:
    doc = {"kind": coin.kind.value}
    if coin.kind is CoinKind.PERMUTATION:
        doc["perm"] = list(coin.perm)
        doc["phases"] = [_complex_out(p) for p in coin.phases]
    elif coin.kind is CoinKind.CUSTOM:
        doc["matrix"] = [[_complex_out(z) for z in row] for row in coin.entries]
    return doc


def coin_from_dict(doc: dict, degree: int) -> CoinSpec:
    try:
        kind = CoinKind(doc["kind"])
    except (KeyError, ValueError):
        raise WalkError(f"Unknown coin kind in {doc!r}") from None
    if kind is CoinKind.PERMUTATION:
        return CoinSpec.permutation(doc["perm"], [_complex_in(p) for p in doc["phases"]])
    if kind is CoinKind.CUSTOM:
        return CoinSpec.custom([[_complex_in(z) for z in row] for row in doc["matrix"]])
    if kind is CoinKind.HADAMARD_MERGE:
        return CoinSpec.hadamard_merge()
    if kind is CoinKind.CONVEYOR:
        return CoinSpec.conveyor()
    return CoinSpec(kind, degree)


def walk_to_dict(walk: BuiltWalk) -> dict:
    graph = walk.graph
    coins = walk.coins.as_dict()
    return {
        "version": FORMAT_VERSION,
        "vertices": [
            {"id": name, "degree": graph.degree(name), "coin": coin_to_dict(coins[name])}
            for name in graph.vertices
        ],
        "edges": [[graph.vertices[v], a, graph.vertices[u], b] for v, a, u, b in graph.edges],
        "accept": sorted(walk.accept_region),
        "reject": sorted(walk.reject_region),
        "input_map": [[list(slot) for slot in pair] for pair in walk.input_map],
        "steps": walk.steps,
        "mode": walk.mode.value,
        "language": str(walk.language),
        "pattern": walk.pattern,
        "complemented": walk.complemented,
    }


def walk_from_dict(doc: dict) -> BuiltWalk:
    """Rebuild a walk; the unitarity gate runs again on load."""
    if doc.get("version") != FORMAT_VERSION:
        raise WalkError(f"Unsupported walk document version {doc.get('version')!r}")
    try:
        names = tuple(v["id"] for v in doc["vertices"])
        degrees = tuple(int(v["degree"]) for v in doc["vertices"])
        index = {name: i for i, name in enumerate(names)}
        edges = tuple((index[v], int(a), index[u], int(b)) for v, a, u, b in doc["edges"])
        graph = PortedGraph(names, degrees, edges)
        coins = CoinTable(names, tuple(coin_from_dict(v["coin"], int(v["degree"])) for v in doc["vertices"]))
        coins.check(graph)
        input_map = tuple(
            tuple((str(vertex), int(port)) for vertex, port in pair) for pair in doc["input_map"]
        )
        return BuiltWalk(
            graph=graph,
            coins=coins,
            input_map=input_map,
            accept_region=frozenset(doc["accept"]),
            reject_region=frozenset(doc["reject"]),
            steps=int(doc["steps"]),
            mode=Mode(doc["mode"]),
            language=LanguageId.parse(doc["language"]),
            input_length=len(input_map),
            pattern=doc.get("pattern", "?" * len(input_map)),
            complemented=bool(doc.get("complemented", False)),
        )
    except (KeyError, TypeError) as e:
        raise WalkError(f"Malformed walk document: missing or invalid {e}") from None


def dumps_walk(walk: BuiltWalk) -> str:
    return json.dumps(walk_to_dict(walk), indent=2) + "\n"


def save_walk(walk: BuiltWalk, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_walk(walk), encoding="utf-8")
    logger.info(f"Wrote walk ({walk.node_count} vertices) to {path}")
    return path


def load_walk(path: Union[str, Path], text: Optional[str] = None) -> BuiltWalk:
    """Load a walk document from ``path`` (or from ``text`` when given)."""
    if text is None:
        path = Path(path)
        if path.stat().st_size > MAX_DOCUMENT_SIZE:
            raise WalkError(
                f"Walk document too large: {path.stat().st_size / 1024 / 1024:.1f} MB. "
                f"Maximum size is {MAX_DOCUMENT_SIZE / 1024 / 1024:.0f} MB."
            )
        text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise WalkError(f"Walk document is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise WalkError("Walk document must be a JSON object")
    return walk_from_dict(doc)
