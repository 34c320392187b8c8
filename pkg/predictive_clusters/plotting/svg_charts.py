"""
SVG line charts (objective trajectories over generations) and box plots
(final-population objective distributions per model), drawn with matplotlib.

Each drawn artist gets a gid, which the SVG backend writes as the id of the
artist's <g> element. After saving, those groups are looked up again and the
plotted values are attached verbatim as data-* attributes (repr() of every
float), so the series can be read back from the file without loss.
"""
import io
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
from xml.etree import ElementTree as ET

import matplotlib
import numpy as np
from matplotlib import cbook
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
XLINK_NS = "http://www.w3.org/1999/xlink"
PANEL_SIZE = (8.0, 4.5)  # inches per stacked panel

# Text stays text, and the fixed salt keeps generated ids (clip paths etc.)
# identical between runs, so the same results give the same file.
SVG_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "predictive-clusters",
    "font.size": 9,
}

ET.register_namespace("", SVG_NS)
ET.register_namespace("xlink", XLINK_NS)


def exact(value: float) -> str:
    """Lossless text form of a number (ints stay ints)."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def exact_list(values: Sequence[float]) -> str:
    return " ".join(exact(v) for v in values)


@dataclass
class Series:
    name: str
    x: Sequence[float]
    y: Sequence[float]
    dashed: bool = False
    color: Optional[str] = None


@dataclass
class LinePanel:
    title: str
    x_label: str
    y_label: str
    series: List[Series] = field(default_factory=list)


BoxPanel = Tuple[str, str, Sequence[Tuple[str, Sequence[float]]]]


# --- Figure handling ---

def _stacked_figure(count: int, title: str) -> Tuple[Figure, list]:
    fig = Figure(figsize=(PANEL_SIZE[0], PANEL_SIZE[1] * count), layout="constrained")
    axes = list(fig.subplots(count, 1, squeeze=False)[:, 0])
    if title:
        fig.suptitle(title)
    return fig, axes


def _render(fig: Figure, attributes: Dict[str, Dict[str, str]]) -> ET.Element:
    """
    Saves the figure as SVG in memory and attaches the data attributes to the
    groups whose ids match the gids set while drawing.
    """
    buffer = io.BytesIO()
    fig.savefig(buffer, format="svg", metadata={"Date": None})
    root, ids = ET.XMLID(buffer.getvalue())
    for gid, attrs in attributes.items():
        element = ids.get(gid)
        if element is None:
            logger.error(f"SVG output has no element with id '{gid}'")
            raise ValueError(f"Artist '{gid}' was not written to the SVG output")
        element.attrib.update(attrs)
    return root


# --- Line charts ---

def _draw_line_panel(ax, panel: LinePanel, index: int, attributes: Dict[str, Dict[str, str]]) -> None:
    ax.set_gid(f"pc-panel-{index}")
    attributes[f"pc-panel-{index}"] = {"class": "panel", "data-title": panel.title}
    for j, series in enumerate(panel.series):
        (line,) = ax.plot(
            np.asarray(series.x, dtype=np.float64),
            np.asarray(series.y, dtype=np.float64),
            linestyle="--" if series.dashed else "-",
            marker="o",
            markersize=2,
            linewidth=1.2,
            color=series.color,
            label=series.name,
        )
        gid = f"pc-line-{index}-{j}"
        line.set_gid(gid)
        attributes[gid] = {
            "class": "series",
            "data-series": series.name,
            "data-dashed": "true" if series.dashed else "false",
            "data-x": exact_list(series.x),
            "data-y": exact_list(series.y),
        }
    ax.set_title(panel.title)
    ax.set_xlabel(panel.x_label)
    ax.set_ylabel(panel.y_label)
    ax.grid(True, color="#dddddd", linewidth=0.6)
    if panel.series:
        ax.legend(fontsize="small", loc="upper right")


def line_chart_svg(panels: Sequence[LinePanel], title: str = "") -> ET.Element:
    """One line-chart panel per entry, stacked vertically."""
    if not panels:
        raise ValueError("At least one panel is required")
    attributes: Dict[str, Dict[str, str]] = {}
    with matplotlib.rc_context(SVG_RC):
        fig, axes = _stacked_figure(len(panels), title)
        for i, (ax, panel) in enumerate(zip(axes, panels)):
            _draw_line_panel(ax, panel, i, attributes)
        root = _render(fig, attributes)
    logger.debug(f"Built line chart with {len(panels)} panels")
    return root


# --- Box plots ---

def _draw_box_panel(ax, panel: BoxPanel, index: int, attributes: Dict[str, Dict[str, str]]) -> None:
    panel_title, y_label, groups = panel
    labels = [label for label, _ in groups]
    samples = [np.asarray(values, dtype=np.float64) for _, values in groups]
    for label, sample in zip(labels, samples):
        if sample.size == 0:
            logger.error(f"Box plot group '{label}' has no values")
            raise ValueError(f"Cannot draw a box for the empty group '{label}'")

    ax.set_gid(f"pc-panel-{index}")
    attributes[f"pc-panel-{index}"] = {"class": "panel", "data-title": panel_title}
    drawn = ax.boxplot(samples, patch_artist=True, showmeans=True)
    # Same whisker rule as ax.boxplot (1.5 IQR), recorded on each box.
    stats = cbook.boxplot_stats(samples)
    for j, (box, s, label, sample) in enumerate(zip(drawn["boxes"], stats, labels, samples)):
        box.set_facecolor(f"C{j % 10}")
        box.set_alpha(0.4)
        gid = f"pc-box-{index}-{j}"
        box.set_gid(gid)
        attributes[gid] = {
            "class": "box",
            "data-group": label,
            "data-q1": exact(s["q1"]),
            "data-median": exact(s["med"]),
            "data-q3": exact(s["q3"]),
            "data-whisker-low": exact(s["whislo"]),
            "data-whisker-high": exact(s["whishi"]),
            "data-mean": exact(s["mean"]),
            "data-outliers": exact_list(np.sort(s["fliers"])),
            "data-values": exact_list(sample),
        }
    ax.set_xticks(range(1, len(labels) + 1), labels=labels)
    ax.set_title(panel_title)
    ax.set_xlabel("Model")
    ax.set_ylabel(y_label)
    ax.grid(True, axis="y", color="#dddddd", linewidth=0.6)


def box_plot_svg(panels: Sequence[BoxPanel], title: str = "") -> ET.Element:
    """
    Box plots side by side per group, one panel per (title, y_label, groups)
    entry, stacked vertically.
    """
    if not panels:
        raise ValueError("At least one panel is required")
    attributes: Dict[str, Dict[str, str]] = {}
    with matplotlib.rc_context(SVG_RC):
        fig, axes = _stacked_figure(len(panels), title)
        for i, (ax, panel) in enumerate(zip(axes, panels)):
            _draw_box_panel(ax, panel, i, attributes)
        root = _render(fig, attributes)
    return root


def write_svg(root: ET.Element, path: str) -> None:
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    logger.info(f"Wrote {path}")
