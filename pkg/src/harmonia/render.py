"""Static SVG barcode plots with byte-stable output."""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib as mpl
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure
from matplotlib.patches import FancyArrowPatch

from .persistence import Bar, Barcode
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("render")

FIGURE_SIZE = (6.4, 4.0)
AXES_RECT = (0.08, 0.12, 0.88, 0.78)
BAR_COLOR = "#1f4e79"

_SVG_RC = {
    "svg.hashsalt": "harmonia",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
}


def _x_range(bars: list[Bar]) -> tuple[float, float]:
    finite = [float(bar.birth) for bar in bars]
    finite += [float(bar.death) for bar in bars if not bar.is_infinite]  # type: ignore[arg-type]
    if not finite:
        return 0.0, 1.0
    low, high = min(finite), max(finite)
    return low, high if high > low else low + 1.0


def barcode_figure(barcode: Barcode, *, title: str | None = None) -> Figure:
    """Bars as horizontal segments, one per row in (birth, death) order.

    Infinite bars run to the right margin and end in an arrow.
    """

    bars = sorted(barcode.bars, key=Bar.sort_key)
    low, high = _x_range(bars)
    margin = (high - low) * 0.1
    right = high + margin

    figure = Figure(figsize=FIGURE_SIZE)
    FigureCanvasSVG(figure)
    axes = figure.add_axes(AXES_RECT)
    for k, bar in enumerate(bars):
        end = right if bar.is_infinite else float(bar.death)  # type: ignore[arg-type]
        (line,) = axes.plot([float(bar.birth), end], [k, k], color=BAR_COLOR, linewidth=2)
        line.set_gid(f"bar-{k}")
        if bar.is_infinite:
            arrow = FancyArrowPatch(
                (right - margin / 2, k),
                (right + margin / 2, k),
                arrowstyle="-|>",
                mutation_scale=10,
                color=BAR_COLOR,
            )
            arrow.set_gid(f"arrow-{k}")
            axes.add_patch(arrow)

    axes.set_xlim(low - margin, right + margin)
    axes.set_ylim(-1, max(len(bars), 1))
    axes.set_yticks([])
    axes.set_xlabel("t")
    axes.set_title(title or f"H{barcode.dimension}")
    return figure


def render_svg(barcode: Barcode, *, title: str | None = None) -> bytes:
    buffer = io.BytesIO()
    with mpl.rc_context(_SVG_RC):
        figure = barcode_figure(barcode, title=title)
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def write_svg(barcode: Barcode, path: str | Path, *, title: str | None = None) -> None:
    data = render_svg(barcode, title=title)
    Path(path).write_bytes(data)
    LOGGER.info("SVG geschrieben: %s (%s Balken)", path, len(barcode))


__all__ = ["barcode_figure", "render_svg", "write_svg"]
