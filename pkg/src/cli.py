"""
Command-line interface for the lingwalk lab.

Subcommands:
- build: build an acceptor walk and write it as JSON
- run: run one word through a built or loaded walk
- fig2, fig4: fidelity and Jaro similarity over the first K strings
- fig5: fidelity of superposed inputs against a base word
- bounds: exhaustive worst-case non-word acceptance per length
- resources: vertex and step counts of the reference walks
- discriminate: telling two superposed inputs apart by acceptance
- compare: one (ab)^m word on the general rail walk and on its swap-only walk
- plot: render an experiment CSV as SVG

Exit codes: 0 on success, 2 on invalid input, 1 on anything else.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analysis import fidelity, membership
from .config import Config
from .experiments import (
    ExperimentConfig,
    language_for_figure,
    mode_for_figure,
    run_experiment,
    write_csv,
)
from .languages import (
    LanguageId,
    Mode,
    acceptance_probability,
    accepting_state,
    build_walk,
    complement,
    run,
    walk_for_length,
)
from .logger import setup_logger
from .plotting import plot_csv
from .serialization import dumps_walk, load_walk, save_walk

LOGGER = setup_logger(__name__)


def _add_common(
    parser: argparse.ArgumentParser, *, language_default: Optional[str] = "eq", mode_default: Optional[str] = "spatial",
) -> None:
    parser.add_argument(
        "--language", type=LanguageId.parse, default=LanguageId.parse(language_default) if language_default else None,
        help="eq (a^m b^m), ab ((ab)^m) or word:<w>",
    )
    parser.add_argument("--mode", choices=[m.value for m in Mode], default=mode_default, help="input encoding")


def _add_outputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help=f"CSV path (default {Config.OUTPUT_DIR}/<experiment>.csv)")
    parser.add_argument("--svg", type=Path, help="also render the CSV as SVG here")


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lingwalk",
        description="Coined quantum walks accepting binary languages",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  lingwalk build --language eq --length 4 --emit walk.json
  lingwalk run --graph walk.json --word aabb
  lingwalk fig2 --count 200 --svg out/fig2.svg
  lingwalk bounds --language ab --mode sequential --length 10
        """,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    cmd_build = subparsers.add_parser("build", help="Build an acceptor and write it as JSON")
    _add_common(cmd_build)
    cmd_build.add_argument("--length", type=int, required=True, help="input length")
    cmd_build.add_argument("--complement", action="store_true", help="swap accept and reject regions")
    cmd_build.add_argument("--emit", type=Path, help="output path (stdout when omitted)")

    cmd_run = subparsers.add_parser("run", help="Run one word through an acceptor")
    _add_common(cmd_run)
    cmd_run.add_argument("--word", required=True, help="input word over a and b")
    cmd_run.add_argument("--length", type=int, help="walk length (default: the word's length)")
    cmd_run.add_argument("--graph", type=Path, help="load a walk written by build instead")
    cmd_run.add_argument("--complement", action="store_true", help="swap accept and reject regions")

    for name, help_text in (("fig2", "Fidelity/Jaro curve for a^m b^m"), ("fig4", "Fidelity/Jaro curve for (ab)^m")):
        cmd = subparsers.add_parser(name, help=help_text)
        _add_common(cmd, language_default=None, mode_default=None)
        cmd.add_argument("--count", type=int, default=Config.COUNT, help="number of strings")
        _add_outputs(cmd)

    cmd_fig5 = subparsers.add_parser("fig5", help="Fidelity of superposed inputs")
    cmd_fig5.add_argument("--base", default="aabb", help="even-length base word")
    cmd_fig5.add_argument("--grid", type=int, default=Config.GRID, help="theta grid points on [0, pi/2]")
    _add_outputs(cmd_fig5)

    cmd_bounds = subparsers.add_parser("bounds", help="Worst-case non-word acceptance sweep")
    _add_common(cmd_bounds)
    cmd_bounds.add_argument("--length", type=int, default=10, help=f"largest length (at most {Config.MAX_SWEEP})")
    _add_outputs(cmd_bounds)

    cmd_resources = subparsers.add_parser("resources", help="Vertex and step counts")
    cmd_resources.add_argument("--length", type=int, default=10, help="largest (even) length")
    _add_outputs(cmd_resources)

    cmd_disc = subparsers.add_parser("discriminate", help="Discriminate two superposed inputs")
    _add_common(cmd_disc)
    cmd_disc.add_argument("--w1", default="aabb", help="first word")
    cmd_disc.add_argument("--w2", default="bbaa", help="second word")
    cmd_disc.add_argument("--grid", type=int, default=Config.GRID, help="theta grid points on [0, pi/2]")
    _add_outputs(cmd_disc)

    cmd_compare = subparsers.add_parser("compare", help="Compare the (ab)^m rail with the swap-only walk")
    cmd_compare.add_argument("--word", default="abab", help="word of (ab)^m accepted by both walks")
    _add_outputs(cmd_compare)

    cmd_plot = subparsers.add_parser("plot", help="Render an experiment CSV as SVG")
    cmd_plot.add_argument("--csv", type=Path, required=True, help="experiment CSV")
    cmd_plot.add_argument("--svg", type=Path, help="output path (default: CSV path with .svg)")

    return parser


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_build(args) -> int:
    walk = build_walk(args.language, Mode(args.mode), args.length)
    if args.complement:
        walk = complement(walk)
    if args.emit:
        save_walk(walk, args.emit)
        print(args.emit)
    else:
        sys.stdout.write(dumps_walk(walk))
    return 0


def cmd_run(args) -> int:
    word = args.word
    if args.graph:
        walk = load_walk(args.graph)
    else:
        walk = walk_for_length(args.language, Mode(args.mode), args.length or len(word) or 1)
    if args.complement:
        walk = complement(walk)

    if word:
        accept = acceptance_probability(walk, word)
        fid = fidelity(run(walk, word), accepting_state(walk))
    else:
        accept = fid = 1.0
    print(f"word: {word}")
    print(f"walk: {walk.language} {walk.mode.value} n={walk.input_length} steps={walk.steps}")
    print(f"in_language: {'true' if membership(walk.language, word) else 'false'}")
    print(f"acceptance: {accept:.17g}")
    print(f"fidelity: {fid:.17g}")
    return 0


def _experiment(args, config: ExperimentConfig) -> int:
    header, rows = run_experiment(config)
    out = args.out or Path(Config.OUTPUT_DIR) / f"{config.experiment}.csv"
    write_csv(out, config.experiment, header, rows)
    print(out)
    if args.svg:
        plot_csv(out, args.svg)
        print(args.svg)
    return 0


def cmd_figure(args) -> int:
    return _experiment(args, ExperimentConfig(
        experiment=args.command,
        language=language_for_figure(args.command, args.language),
        mode=mode_for_figure(args.command, Mode(args.mode) if args.mode else None),
        count=args.count,
    ))


def cmd_fig5(args) -> int:
    return _experiment(args, ExperimentConfig(experiment="fig5", base=args.base, grid=args.grid))


def cmd_bounds(args) -> int:
    return _experiment(args, ExperimentConfig(
        experiment="bounds", language=args.language, mode=Mode(args.mode), length=args.length,
    ))


def cmd_resources(args) -> int:
    return _experiment(args, ExperimentConfig(experiment="resources", length=args.length))


def cmd_discriminate(args) -> int:
    return _experiment(args, ExperimentConfig(
        experiment="discriminate", language=args.language, mode=Mode(args.mode),
        base=args.w1, other=args.w2, grid=args.grid,
    ))


def cmd_compare(args) -> int:
    return _experiment(args, ExperimentConfig(experiment="compare", base=args.word))


def cmd_plot(args) -> int:
    print(plot_csv(args.csv, args.svg))
    return 0


COMMANDS = {
    "build": cmd_build,
    "run": cmd_run,
    "fig2": cmd_figure,
    "fig4": cmd_figure,
    "fig5": cmd_fig5,
    "bounds": cmd_bounds,
    "resources": cmd_resources,
    "discriminate": cmd_discriminate,
    "compare": cmd_compare,
    "plot": cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entry point; returns the process exit code."""
    try:
        Config.validate()
    except ValueError as e:
        LOGGER.warning(f"Configuration Warning: {e}")

    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        return COMMANDS[args.command](args)
    except ValueError as e:
        LOGGER.warning(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        LOGGER.error(f"{args.command} failed: {e}", exc_info=True)
        return 1
