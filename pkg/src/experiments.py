"""Experiment runners behind the lab CLI.

Each runner returns (header, rows) in a fixed, deterministic order; CSV
output goes through ``write_csv`` so every table carries the same version
comment and number formatting.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .analysis import (
    acceptance_records,
    all_strings,
    cutpoint_from_values,
    discrimination_success,
    enumerate_strings,
    fidelity,
    max_nonword_acceptance,
    membership,
)
from .config import Config
from .engine import evolve
from .errors import CsvFormatError, NoTargetError, SweepBudgetError
from .languages import (
    LAB,
    LEQ,
    LanguageId,
    Mode,
    acceptance_batch,
    acceptance_probability,
    accepting_state,
    build_sequential,
    build_sequential_word,
    build_spatial,
    encode_spatial,
    specific_word,
    superpose_words,
    target_word,
    validate_word,
    walk_for_length,
)
from .logger import setup_logger

LOGGER = setup_logger(__name__)

CSV_TAG = "# lingwalk v1"

FIDELITY_HEADER = ("index", "string", "length", "fidelity", "jaro", "acceptance", "in_language")
QUANTUM_HEADER = ("theta", "other_string", "match_count", "fidelity")
BOUNDS_HEADER = ("n", "target", "nonword_count", "max_accept", "argmax_string", "paper_claim", "claim_met")
RESOURCES_HEADER = ("n", "mode", "nodes", "steps", "paper_nodes", "paper_steps")
DISCRIMINATE_HEADER = ("theta", "p_accept_1", "p_accept_2", "success")
COMPARE_HEADER = ("index", "string", "in_language", "p_accept_general", "p_accept_swap", "same")

EXPERIMENTS = ("fig2", "fig4", "fig5", "bounds", "resources", "discriminate", "compare")

# Published resource figures for the (ab)^2 walks, keyed by mode
PUBLISHED_ABAB = {"sequential": (None, 5), "sequential-word": (8, 6)}

Rows = list[tuple]


@dataclass
class ExperimentConfig:
    """Parameters of one experiment run; every experiment is seed-free."""

    experiment: str
    language: LanguageId = LEQ
    mode: Mode = Mode.SPATIAL
    count: int = field(default_factory=lambda: Config.COUNT)
    length: int = 10
    grid: int = field(default_factory=lambda: Config.GRID)
    base: str = "aabb"
    other: str = "bbaa"


def validate_experiment(config: ExperimentConfig) -> tuple[bool, str]:
    """
    Check experiment parameters against builder preconditions before running.

    Returns:
        Tuple of (is_valid, error_message)
    """
    if config.experiment not in EXPERIMENTS:
        return False, f"Unknown experiment {config.experiment!r}. Choose one of: {', '.join(EXPERIMENTS)}."

    if config.experiment in ("fig2", "fig4"):
        if config.count < 1:
            return False, "Count must be at least 1."

    if config.experiment in ("fig5", "discriminate"):
        if config.grid < 2:
            return False, f"Theta grid needs at least 2 points, got {config.grid}."
        for word in (config.base, config.other):
            if not word or set(word) - set("ab"):
                return False, f"Words must be nonempty strings over a and b, got {word!r}."

    if config.experiment == "fig5" and len(config.base) % 2:
        return False, f"Base word must have even length, got {config.base!r} ({len(config.base)} symbols)."

    if config.experiment == "discriminate" and len(config.base) != len(config.other):
        return False, f"Words must have equal length: {config.base!r} vs {config.other!r}."

    if config.experiment == "bounds":
        if config.length > Config.MAX_SWEEP:
            return False, (
                f"Exhaustive sweep of length {config.length} exceeds the budget: "
                f"at most {Config.MAX_SWEEP} ({2 ** Config.MAX_SWEEP:,} strings per length)."
            )
        minimum = 2 if config.mode is Mode.SPATIAL else 1
        if config.length < minimum:
            return False, f"Sweep length must be at least {minimum} in {config.mode.value} mode."

    if config.experiment == "resources" and config.length < 2:
        return False, "Resource table needs a maximum length of at least 2."

    if config.experiment == "compare":
        word = config.base
        if not word or set(word) - set("ab") or not membership(LAB, word):
            return False, f"Compared word must be a nonempty word of (ab)^m, got {word!r}."
        if len(word) > Config.MAX_SWEEP:
            return False, f"Compared word is longer than the sweep budget of {Config.MAX_SWEEP}."

    return True, ""


# =============================================================================
# RUNNERS
# =============================================================================

def exp_fidelity_curve(language: LanguageId, mode: Mode, count: int) -> tuple[tuple, Rows]:
    """Fidelity, Jaro and acceptance for the first ``count`` strings."""
    words = enumerate_strings(count)
    try:
        records = acceptance_records(language, mode, words)
    except ValueError as e:
        raise type(e)(f"{e} (while evaluating {language} in {mode.value} mode)") from e
    rows = [
        (i, r.string, len(r.string), r.fidelity, r.jaro, r.acceptance_probability, r.in_language)
        for i, r in enumerate(records, start=1)
    ]
    outside = [r for r in records if not r.in_language]
    below = sum(r.fidelity < r.jaro for r in outside)
    LOGGER.info(
        f"{language} {mode.value}: fidelity below Jaro similarity on {below} of {len(outside)} inputs outside the language"
    )
    return FIDELITY_HEADER, rows


def theta_grid(points: int) -> np.ndarray:
    return np.linspace(0.0, np.pi / 2, points)


def exp_quantum_input(base: str, grid: int) -> tuple[tuple, Rows]:
    """Fidelity of superpositions of ``base`` with every other word of its length."""
    validate_word(base)
    if not base or len(base) % 2:
        raise NoTargetError(f"base word must have even length, got {base!r}")
    walk = build_spatial(specific_word(base), len(base))
    target = accepting_state(walk)
    thetas = theta_grid(grid)
    rows = []
    for other in all_strings(len(base)):
        if other == base:
            continue
        matches = sum(s == t for s, t in zip(base, other))
        initial = np.stack([encode_spatial(walk, superpose_words(base, other, t)) for t in thetas], axis=1)
        fidelities = fidelity(evolve(walk, initial, walk.steps), target)
        rows.extend((float(t), other, matches, float(f)) for t, f in zip(thetas, fidelities))
    return QUANTUM_HEADER, rows


def published_bound(mode: Mode, n: int) -> float:
    """Published worst-case non-word acceptance: 2/n^2 spatially, 1/2 sequentially."""
    return 2.0 / n ** 2 if mode is Mode.SPATIAL else 0.5


def exp_bound_sweep(language: LanguageId, mode: Mode, max_len: int) -> tuple[tuple, Rows]:
    """Exhaustive worst-case non-word acceptance per length, beside the published claim."""
    if max_len > Config.MAX_SWEEP:
        raise SweepBudgetError(
            f"sweep length {max_len} exceeds the budget of {Config.MAX_SWEEP} "
            f"({2 ** Config.MAX_SWEEP:,} strings per length)"
        )
    start = 2 if mode is Mode.SPATIAL else 1
    rows = []
    inside, outside = [], []
    for n in range(start, max_len + 1):
        count, worst, argmax = max_nonword_acceptance(language, mode, n)
        claim = published_bound(mode, n)
        target = target_word(language, n)
        rows.append((n, target, count, worst, argmax, claim, worst <= claim + 1e-9))
        LOGGER.debug(f"bounds n={n}: worst={worst:.6f} at {argmax!r}, claim={claim:.6f}")
        if count:
            outside.append(worst)
        if target is not None:
            inside.append(acceptance_probability(walk_for_length(language, mode, n), target))
    if inside and outside:
        cutpoint, epsilon, bounded = cutpoint_from_values(inside, outside)
        LOGGER.info(
            f"{language} {mode.value} n<={max_len}: cut-point {cutpoint:.6f}, "
            f"epsilon {epsilon:.6f}, bounded={bounded}"
        )
    return BOUNDS_HEADER, rows


def exp_resources(max_len: int) -> tuple[tuple, Rows]:
    """Vertex and step counts of the reference walks beside the published ones.

    Sequential node counts leave out the input rail.
    """
    rows = []
    for n in range(2, max_len + 1, 2):
        spatial = build_spatial(LEQ, n)
        rows.append((n, "spatial", spatial.node_count, spatial.steps, 4 * n + 3, 3))
        for mode, walk in (
            ("sequential", build_sequential(LAB, n)),
            ("sequential-word", build_sequential_word(target_word(LAB, n))),
        ):
            published_nodes, published_steps = PUBLISHED_ABAB[mode] if n == 4 else (None, None)
            rows.append((n, mode, walk.gadget_node_count, walk.steps, published_nodes, published_steps))
    return RESOURCES_HEADER, rows


def exp_discriminate(
    w1: str, w2: str, grid: int, language: LanguageId = LEQ, mode: Mode = Mode.SPATIAL
) -> tuple[tuple, Rows]:
    """Tell cos(t) w1 + sin(t) w2 from its mirror sin(t) w1 + cos(t) w2 by acceptance."""
    validate_word(w1)
    validate_word(w2)
    if len(w1) != len(w2):
        raise ValueError(f"words must have equal length: {w1!r} vs {w2!r}")
    walk = walk_for_length(language, mode, len(w1))
    rows = []
    for t in theta_grid(grid):
        p1 = acceptance_probability(walk, superpose_words(w1, w2, t))
        p2 = acceptance_probability(walk, superpose_words(w1, w2, np.pi / 2 - t))
        rows.append((float(t), p1, p2, discrimination_success(min(p1, 1.0), min(p2, 1.0))))
    return DISCRIMINATE_HEADER, rows


def exp_compare(word: str) -> tuple[tuple, Rows]:
    """Acceptance of every input of |word| on the (ab)^m rail and on the swap-only walk for word.

    Both walks accept word with certainty; ``same`` marks inputs the two
    graphs score alike.
    """
    validate_word(word)
    if not word or not membership(LAB, word):
        raise NoTargetError(f"{word!r} is not a word of (ab)^m")
    general = build_sequential(LAB, len(word))
    swap = build_sequential_word(word)
    inputs = all_strings(len(word))
    p_general = acceptance_batch(general, inputs)
    p_swap = acceptance_batch(swap, inputs)
    rows = [
        (i, other, membership(LAB, other), float(g), float(s), bool(abs(g - s) <= 1e-9))
        for i, (other, g, s) in enumerate(zip(inputs, p_general, p_swap), start=1)
    ]
    LOGGER.info(f"compare {word}: acceptance agrees on {sum(r[-1] for r in rows)} of {len(rows)} inputs")
    return COMPARE_HEADER, rows


def run_experiment(config: ExperimentConfig) -> tuple[tuple, Rows]:
    """Validate ``config`` and dispatch to its runner."""
    is_valid, error = validate_experiment(config)
    if not is_valid:
        raise ValueError(error)
    if config.experiment in ("fig2", "fig4"):
        return exp_fidelity_curve(config.language, config.mode, config.count)
    if config.experiment == "fig5":
        return exp_quantum_input(config.base, config.grid)
    if config.experiment == "bounds":
        return exp_bound_sweep(config.language, config.mode, config.length)
    if config.experiment == "resources":
        return exp_resources(config.length)
    if config.experiment == "compare":
        return exp_compare(config.base)
    return exp_discriminate(config.base, config.other, config.grid, config.language, config.mode)


# =============================================================================
# CSV
# =============================================================================

def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def format_csv(experiment: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    buffer.write(f"{CSV_TAG} {experiment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def write_csv(path: Union[str, Path], experiment: str, header: Sequence[str], rows: Rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(experiment, header, rows), encoding="utf-8")
    LOGGER.info(f"Wrote {len(rows)} rows of {experiment} to {path}")
    return path


def parse_csv(text: str) -> tuple[str, list[str], list[dict[str, str]]]:
    """Return (experiment, header, rows) from a lab CSV."""
    lines = text.splitlines()
    experiment = ""
    if lines and lines[0].startswith(CSV_TAG):
        experiment = lines[0][len(CSV_TAG):].strip()
    body = [line for line in lines if line and not line.startswith("#")]
    if not body:
        raise CsvFormatError("CSV has no header row")
    reader = csv.reader(body)
    header = next(reader)
    rows = []
    for number, values in enumerate(reader, start=2):
        if len(values) != len(header):
            raise CsvFormatError(f"row {number} has {len(values)} cells, header has {len(header)}")
        rows.append(dict(zip(header, values)))
    if not rows:
        raise CsvFormatError("CSV has a header but no rows")
    return experiment, header, rows


def read_csv(path: Union[str, Path]) -> tuple[str, list[str], list[dict[str, str]]]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def language_for_figure(experiment: str, language: Optional[LanguageId]) -> LanguageId:
    """fig2 defaults to a^m b^m, fig4 to (ab)^m."""
    if language is not None:
        return language
    return LAB if experiment == "fig4" else LEQ


def mode_for_figure(experiment: str, mode: Optional[Mode]) -> Mode:
    """fig2 defaults to spatial input, fig4 to sequential."""
    if mode is not None:
        return mode
    return Mode.SEQUENTIAL if experiment == "fig4" else Mode.SPATIAL


__all__ = [
    "ExperimentConfig",
    "exp_bound_sweep",
    "exp_compare",
    "exp_discriminate",
    "exp_fidelity_curve",
    "exp_quantum_input",
    "exp_resources",
    "format_csv",
    "language_for_figure",
    "mode_for_figure",
    "parse_csv",
    "read_csv",
    "run_experiment",
    "validate_experiment",
    "write_csv",
]
