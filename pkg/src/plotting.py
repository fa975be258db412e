"""Line charts of experiment CSVs as byte-stable SVG documents."""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import CsvFormatError  # noqa: E402
from .experiments import parse_csv  # noqa: E402
from .logger import setup_logger  # noqa: E402

LOGGER = setup_logger(__name__)

WIDTH_PX = 800
HEIGHT_PX = 600
DPI = 72

# Pinned so reruns give byte-identical SVG
RC_PARAMS = {
    "svg.hashsalt": "lingwalk",
    "svg.fonttype": "none",
    "path.simplify": False,
    "font.family": "DejaVu Sans",
    "axes.unicode_minus": False,
}

CLASS_COLORS = ("blue", "green", "black", "red", "orange", "purple", "brown", "gray")


@dataclass(frozen=True)
class Series:
    column: str
    label: str
    color: str


@dataclass(frozen=True)
class PlotSpec:
    """What to draw from a CSV.

    Either ``series`` lists value columns plotted against ``x``, or
    ``group_by`` splits the rows into one polyline per distinct value and
    plots ``y`` for each; ``color_by`` then picks the colour class, with one
    legend entry per class.
    """

    x: str
    series: tuple[Series, ...] = ()
    group_by: Optional[str] = None
    y: Optional[str] = None
    color_by: Optional[str] = None
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    ylim: Optional[tuple[float, float]] = (0.0, 1.05)


FIDELITY_SERIES = (Series("fidelity", "fidelity", "black"), Series("jaro", "Jaro similarity", "red"))

PRESETS = {
    "fig2": PlotSpec(
        x="index", series=FIDELITY_SERIES,
        title="a^m b^m: fidelity and Jaro similarity", xlabel="string index", ylabel="value",
    ),
    "fig4": PlotSpec(
        x="index", series=FIDELITY_SERIES,
        title="(ab)^m: fidelity and Jaro similarity", xlabel="string index", ylabel="value",
    ),
    "fig5": PlotSpec(
        x="theta", group_by="other_string", y="fidelity", color_by="match_count",
        title="Quantum input fidelity", xlabel="theta", ylabel="fidelity",
    ),
    "bounds": PlotSpec(
        x="n",
        series=(Series("max_accept", "worst non-word acceptance", "black"),
                Series("paper_claim", "published bound", "red")),
        title="Worst-case non-word acceptance", xlabel="input length", ylabel="probability",
    ),
    "resources": PlotSpec(
        x="n", group_by="mode", y="nodes", color_by="mode",
        title="Walk size", xlabel="input length", ylabel="vertices", ylim=None,
    ),
    "discriminate": PlotSpec(
        x="theta",
        series=(Series("p_accept_1", "acceptance, input 1", "black"),
                Series("p_accept_2", "acceptance, input 2", "red"),
                Series("success", "discrimination success", "blue")),
        title="Discriminating superposed inputs", xlabel="theta", ylabel="probability",
    ),
    "compare": PlotSpec(
        x="index",
        series=(Series("p_accept_general", "(ab)^m rail", "black"),
                Series("p_accept_swap", "swap-only walk", "red")),
        title="Acceptance on two walks for one word", xlabel="input index", ylabel="acceptance",
    ),
}


def _number(value: str) -> float:
    return float(value) if value != "" else np.nan


def _polylines(header: list[str], rows: list[dict[str, str]], spec: PlotSpec):
    """Yield (gid, label, color, xs, ys); label is None past a class's first line."""
    needed = [spec.x] + [s.column for s in spec.series] + [c for c in (spec.group_by, spec.y, spec.color_by) if c]
    missing = [c for c in needed if c not in header]
    if missing:
        raise CsvFormatError(f"CSV lacks columns {missing} needed for this plot")

    if spec.group_by is None:
        xs = np.array([_number(r[spec.x]) for r in rows])
        for s in spec.series:
            yield f"series-{s.column}", s.label, s.color, xs, np.array([_number(r[s.column]) for r in rows])
        return

    groups: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        groups.setdefault(row[spec.group_by], []).append(row)
    classes: dict[str, str] = {}
    for name, members in groups.items():
        key = members[0][spec.color_by] if spec.color_by else name
        first = key not in classes
        if first:
            index = int(key) if key.isdigit() else len(classes)
            classes[key] = CLASS_COLORS[index % len(CLASS_COLORS)]
        label = f"{spec.color_by or spec.group_by} = {key}" if first else None
        xs = np.array([_number(r[spec.x]) for r in members])
        ys = np.array([_number(r[spec.y]) for r in members])
        yield f"series-{name}", label, classes[key], xs, ys


def render_svg(csv_text: str, spec: Optional[PlotSpec] = None) -> str:
    """Render a lab CSV as an 800x600 SVG; the preset follows the CSV's experiment tag."""
    experiment, header, rows = parse_csv(csv_text)
    if spec is None:
        if experiment not in PRESETS:
            raise CsvFormatError(f"no plot preset for experiment {experiment!r}")
        spec = PRESETS[experiment]

    with matplotlib.rc_context(RC_PARAMS):
        fig, ax = plt.subplots(figsize=(WIDTH_PX / DPI, HEIGHT_PX / DPI), dpi=DPI)
        try:
            drawn = 0
            for gid, label, color, xs, ys in _polylines(header, rows, spec):
                (line,) = ax.plot(xs, ys, color=color, linewidth=1.0, label=label or "_nolegend_")
                line.set_gid(gid)
                drawn += 1
            if not drawn:
                raise CsvFormatError("plot has no series")
            ax.set_title(spec.title)
            ax.set_xlabel(spec.xlabel or spec.x)
            ax.set_ylabel(spec.ylabel)
            if spec.ylim is not None:
                ax.set_ylim(*spec.ylim)
            ax.grid(True, alpha=0.3)
            ax.legend(loc="lower right", fontsize=9)
            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()


def plot_csv(csv_path: Union[str, Path], svg_path: Union[str, Path, None] = None,
             spec: Optional[PlotSpec] = None) -> Path:
    """Write the SVG for ``csv_path`` next to it, or to ``svg_path``."""
    csv_path = Path(csv_path)
    svg_path = Path(svg_path) if svg_path is not None else csv_path.with_suffix(".svg")
    svg = render_svg(csv_path.read_text(encoding="utf-8"), spec)
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    svg_path.write_text(svg, encoding="utf-8")
    LOGGER.info(f"Wrote plot of {csv_path.name} to {svg_path}")
    return svg_path
