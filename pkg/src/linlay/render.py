"""SVG drawings of layouts: arc diagrams and grid matrices.

Output is byte-stable: the SVG id salt is fixed, the date stamp is dropped
and text stays as text rather than embedded glyphs.
"""

from __future__ import annotations

import io as _io
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Arc  # noqa: E402

from .core import STACK, LayoutError, LinearLayout, is_separated, to_grid, validate_layout  # noqa: E402

STYLES = ("arc-diagram", "grid-matrix")

_RC = {
    "svg.hashsalt": "linlay",
    "svg.fonttype": "none",
    "path.simplify": False,
    "font.family": "DejaVu Sans",
}


@dataclass(frozen=True)
class RenderSpec:
    style: str = "arc-diagram"
    width: float = 8.0  # inches
    height: float = 4.0
    palette: str = "tab10"
    labels: bool = True
    force: bool = False  # draw invalid layouts with conflicting edges highlighted

    def __post_init__(self):
        if self.style not in STYLES:
            raise LayoutError(f"unknown render style {self.style!r}; pick one of {STYLES}")
        if self.width <= 0 or self.height <= 0:
            raise LayoutError("render dimensions must be positive")

    def page_color(self, index: int):
        cmap = plt.get_cmap(self.palette)
        n = getattr(cmap, "N", 10)
        return cmap(index % n)


def _conflicting_edges(layout: LinearLayout, spec: RenderSpec) -> set:
    report = validate_layout(layout)
    if report.ok:
        return set()
    if not spec.force:
        raise LayoutError(f"layout is invalid ({len(report)} defects); pass force to draw it anyway")
    bad = set()
    for v in report.violations:
        bad.add(v.e1)
        bad.add(v.e2)
    return bad


def _arc_diagram(ax, layout: LinearLayout, spec: RenderSpec, bad: set) -> None:
    n = layout.graph.n
    pos = layout.order.pos
    tallest = 0.5
    for i, page in enumerate(layout.pages):
        color = spec.page_color(i)
        upper = page.kind == STACK
        for e in page.edges:
            a, b = sorted((pos(e[0]), pos(e[1])))
            w = b - a
            tallest = max(tallest, w / 2)
            arc = Arc(
                ((a + b) / 2, 0.0),
                w,
                w,
                theta1=0 if upper else 180,
                theta2=180 if upper else 360,
                color="black" if e in bad else color,
                lw=2.2 if e in bad else 1.2,
                ls="--" if e in bad else "-",
            )
            ax.add_patch(arc)
    ax.plot(range(n), [0] * n, "o", color="black", ms=4, zorder=3)
    if spec.labels:
        for i, v in enumerate(layout.order):
            ax.annotate(str(v), (i, 0), textcoords="offset points", xytext=(0, -12), ha="center", fontsize=7)
    ax.set_xlim(-1, max(n, 2))
    ax.set_ylim(-tallest - 0.5, tallest + 0.5)
    ax.set_aspect("equal", adjustable="box")
    ax.axis("off")


def _grid_matrix(ax, layout: LinearLayout, spec: RenderSpec, bad: set) -> None:
    if layout.graph.bipartition is None or not is_separated(layout):
        raise LayoutError("grid-matrix rendering needs a separated layout")
    grid = to_grid(layout)
    point_of = grid.point_of()
    for i, page in enumerate(layout.pages):
        pts = sorted(point_of[e] for e in page.edges)
        if not pts:
            continue
        xs, ys = zip(*pts)
        marker = "s" if page.kind == STACK else "o"
        ax.scatter(xs, ys, color=spec.page_color(i), marker=marker, s=30, label=f"{page.kind} {i}", zorder=2)
    for e in sorted(bad):
        x, y = point_of[e]
        ax.scatter([x], [y], facecolors="none", edgecolors="black", s=90, zorder=3)
    ax.set_xticks(range(len(grid.cols)))
    ax.set_yticks(range(len(grid.rows)))
    if spec.labels:
        ax.set_xticklabels([str(v) for v in grid.cols], fontsize=6)
        ax.set_yticklabels([str(v) for v in grid.rows], fontsize=6)
    ax.set_xlim(-0.5, len(grid.cols) - 0.5)
    ax.set_ylim(-0.5, len(grid.rows) - 0.5)
    ax.grid(True, lw=0.3)
    ax.set_xlabel("A (columns)")
    ax.set_ylabel("B (rows)")
    if layout.pages:
        ax.legend(fontsize=6, loc="upper left", bbox_to_anchor=(1.01, 1.0))


def figure_to_svg(fig) -> str:
    buf = _io.StringIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def render(layout: LinearLayout, spec: RenderSpec = RenderSpec()) -> str:
    """Draw ``layout`` and return the SVG document as text."""
    bad = _conflicting_edges(layout, spec)
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(spec.width, spec.height))
        if spec.style == "arc-diagram":
            _arc_diagram(ax, layout, spec, bad)
        else:
            _grid_matrix(ax, layout, spec, bad)
        fig.tight_layout()
    return figure_to_svg(fig)
