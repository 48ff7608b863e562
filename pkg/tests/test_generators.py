import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linlay.core import LayoutError, is_separated, monotone_class, side_orders, to_grid, validate_layout
from linlay.generators import (
    challenge_graph,
    challenge_permutation,
    challenge_queue_layout,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    diagonal_grid_instance,
    path_graph,
    random_layout_instance,
)


def test_small_families():
    assert complete_graph(6).m == 15
    k33 = complete_bipartite(3, 3)
    assert k33.m == 9 and sorted(k33.side_a()) == [0, 1, 2]
    assert path_graph(4).edges == ((0, 1), (1, 2), (2, 3))
    assert cycle_graph(5).m == 5
    with pytest.raises(LayoutError):
        cycle_graph(2)


@pytest.mark.parametrize("k", range(1, 7))
def test_challenge_graph_shape(k):
    inst = challenge_graph(k)
    n = 2**k
    g = inst.graph
    assert g.n == 2 * n and inst.edges_before_dedup == 3 * n
    assert max(g.degrees()) <= 3
    assert validate_layout(inst.mixed_layout).ok and is_separated(inst.mixed_layout)
    assert inst.mixed_layout.signature == (1, 2)
    assert all(inst.classes[(i, n + i)] == "red" for i in range(n))


def test_challenge_graph_g16_raw_edge_count():
    assert challenge_graph(4).edges_before_dedup == 48


def test_challenge_graph_merges_coinciding_edges():
    inst = challenge_graph(1)
    # v_0 u_0 is both red and brown, v_1 u_1 both red and blue
    assert inst.graph.m == 4 and inst.classes[(0, 2)] == "red"


def test_challenge_permutation_small_values():
    assert challenge_permutation(1) == [0, 1]
    assert challenge_permutation(2) == [0, 1, 2, 3]
    # blocks 1..4 use keep, neighbour swap, half swap, reverse
    assert challenge_permutation(4)[:16] == [0, 1, 2, 3, 5, 4, 7, 6, 10, 11, 8, 9, 15, 14, 13, 12]


@pytest.mark.parametrize("k", range(1, 9))
def test_challenge_permutation_is_a_permutation(k):
    assert sorted(challenge_permutation(k)) == list(range(2**k))


@pytest.mark.parametrize("k", range(1, 7))
def test_challenge_queue_layout(k):
    lay = challenge_queue_layout(k)
    assert validate_layout(lay).ok and is_separated(lay)
    assert lay.signature[0] == 0 and len(lay.pages) <= 4
    c, r = side_orders(lay)
    n = 2**k
    assert [v for v in c] == [u - n for u in r]


@pytest.mark.parametrize("pattern", ["alternating", "increasing", "decreasing", "random"])
def test_diagonal_grid_cells_hold_one_diagonal(pattern):
    g, lay, blocks = diagonal_grid_instance(3, 2, pattern, seed=5, cell=3)
    assert validate_layout(lay).ok and is_separated(lay)
    cells = {}
    for p in to_grid(lay).points:
        cells.setdefault(blocks.cell_of(p), []).append(p)
    assert len(cells) == 6
    assert all(len(pts) == 3 and monotone_class(pts) in ("increasing", "decreasing") for pts in cells.values())


def test_diagonal_grid_rejects_bad_pattern():
    with pytest.raises(LayoutError):
        diagonal_grid_instance(2, 2, "zigzag")
    with pytest.raises(LayoutError):
        diagonal_grid_instance(2, 2, [["increasing"]])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(1, 6), st.integers(1, 6), st.booleans(), st.integers(0, 10_000))
def test_random_instances_are_valid(s, q, n_a, n_b, separated, seed):
    if s + q == 0:
        q = 1
    lay = random_layout_instance(s, q, n_a, n_b, separated=separated, seed=seed)
    assert validate_layout(lay).ok and lay.graph.m >= 1
    assert lay.signature[0] <= s and lay.signature[1] <= q
    if separated:
        assert is_separated(lay)


def test_random_instances_are_reproducible():
    a = random_layout_instance(2, 2, 5, 5, seed=17)
    assert a == random_layout_instance(2, 2, 5, 5, seed=17)
    assert a != random_layout_instance(2, 2, 5, 5, seed=18)


def test_random_instance_argument_checks():
    with pytest.raises(LayoutError):
        random_layout_instance(0, 0, 3, 3)
    with pytest.raises(LayoutError):
        random_layout_instance(1, 1, 3, 3, separated=True, bipartite=False)
    with pytest.raises(LayoutError):
        random_layout_instance(1, 1, 3, 3, density=0)
