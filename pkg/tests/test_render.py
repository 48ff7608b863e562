import subprocess
import sys

import pytest

from linlay.core import QUEUE, STACK, Graph, LayoutError, LinearLayout, Page
from linlay.generators import challenge_graph, complete_graph
from linlay.render import RenderSpec, render
from linlay.solver import PageBudget, feasible


def _edge():
    g = Graph(2, [(0, 1)], ([0], [1]))
    return LinearLayout(g, [0, 1], [Page(STACK, g.edges)])


def test_single_edge_arc_diagram():
    svg = render(_edge())
    assert svg.startswith("<?xml") and "</svg>" in svg
    assert svg == render(_edge())


def test_rendering_is_identical_across_processes():
    code = (
        "from linlay.core import *\n"
        "from linlay.render import render\n"
        "g = Graph(2, [(0, 1)], ([0], [1]))\n"
        "import sys; sys.stdout.write(render(LinearLayout(g, [0, 1], [Page(STACK, g.edges)])))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout
    assert out == render(_edge())


def test_k6_witness_and_challenge_grid():
    w = feasible(complete_graph(6), PageBudget(1, 1)).witness
    assert "<svg" in render(w)
    assert "<svg" in render(challenge_graph(4).mixed_layout, RenderSpec("grid-matrix"))


def test_grid_matrix_needs_separated_layout():
    g = Graph(4, [(0, 2), (1, 3)], ([0, 1], [2, 3]))
    lay = LinearLayout(g, [0, 2, 1, 3], [Page(QUEUE, g.edges)])
    with pytest.raises(LayoutError, match="separated"):
        render(lay, RenderSpec("grid-matrix"))


def test_invalid_layout_needs_force():
    g = Graph(4, [(0, 2), (1, 3)])
    lay = LinearLayout(g, range(4), [Page(STACK, g.edges)])
    with pytest.raises(LayoutError, match="force"):
        render(lay)
    assert "<svg" in render(lay, RenderSpec(force=True))


def test_render_spec_checks():
    with pytest.raises(LayoutError):
        RenderSpec("pie-chart")
    with pytest.raises(LayoutError):
        RenderSpec(width=0)
