import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linlay.core import Graph, LayoutError, VertexOrder, is_separated, validate_layout
from linlay.generators import complete_bipartite, complete_graph, cycle_graph
from linlay.solver import (
    PageBudget,
    SolverRefusal,
    feasible,
    fixed_order_layout,
    max_rainbow,
    max_twist,
    mixed_number,
    optimal_layout,
    queue_number,
    separated_queue_number,
    separated_stack_number,
    stack_number,
    vertex_cap,
)
from oracles import bipartition_of, naive_feasible


def test_k6_feasibility_boundaries():
    k6 = complete_graph(6)
    assert not feasible(k6, PageBudget(2, 0)).feasible
    assert not feasible(k6, PageBudget(0, 2)).feasible
    res = feasible(k6, PageBudget(1, 1))
    assert res.feasible and validate_layout(res.witness).ok
    assert res.witness.signature[0] <= 1 and res.witness.signature[1] <= 1


def test_k6_layout_numbers():
    k6 = complete_graph(6)
    assert (stack_number(k6), queue_number(k6), mixed_number(k6)) == (3, 3, 2)


def test_k33_separated_numbers():
    k33 = complete_bipartite(3, 3)
    assert feasible(k33, PageBudget(1, 1, separated=True)).feasible
    assert not feasible(k33, PageBudget(0, 2, separated=True)).feasible
    assert separated_queue_number(k33) == separated_stack_number(k33) == 3


def test_c6_is_one_page_either_way():
    c6 = cycle_graph(6)
    assert stack_number(c6) == 1
    assert queue_number(c6) == 1


def test_separated_witness_is_separated():
    res = feasible(complete_bipartite(2, 3), PageBudget(1, 1, separated=True))
    assert res.feasible and is_separated(res.witness) and validate_layout(res.witness).ok


def test_separated_budget_needs_bipartition():
    with pytest.raises(LayoutError):
        feasible(complete_graph(4), PageBudget(1, 0, separated=True))


def test_budget_needs_a_page():
    with pytest.raises(LayoutError):
        PageBudget(0, 0)


def test_size_guard_refuses(monkeypatch):
    big = cycle_graph(17)
    with pytest.raises(SolverRefusal):
        feasible(big, PageBudget(1, 0))
    monkeypatch.setenv("LINLAY_MAX_VERTICES", "4")
    assert vertex_cap() == 4
    with pytest.raises(SolverRefusal):
        feasible(cycle_graph(5), PageBudget(1, 0))
    assert feasible(cycle_graph(5), PageBudget(1, 0), max_vertices=5).feasible


def test_optimal_layout_witness_signatures():
    k6 = complete_graph(6)
    for measure, sig in (("sn", (3, 0)), ("qn", (0, 3)), ("mn", None)):
        value, w = optimal_layout(k6, measure)
        assert validate_layout(w).ok
        assert sum(w.signature) == value
        if sig:
            assert w.signature == sig
    value, w = optimal_layout(complete_bipartite(3, 3), "ssn")
    assert value == 3 and w.signature == (3, 0) and is_separated(w)


def test_unknown_measure():
    with pytest.raises(LayoutError):
        optimal_layout(complete_graph(4), "xyz")


def test_twist_and_rainbow_examples():
    k6 = complete_graph(6)
    for seed in range(5):
        order = list(range(6))
        random.Random(seed).shuffle(order)
        assert max_twist(k6, VertexOrder(order)) >= 3
        assert max_rainbow(k6, VertexOrder(order)) >= 3
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert max_rainbow(star, VertexOrder([1, 2, 0, 3, 4])) == 1
    nested = Graph(4, [(0, 3), (1, 2)])
    order = VertexOrder(range(4))
    assert (max_rainbow(nested, order), max_twist(nested, order)) == (2, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_fixed_order_stacks_bound_twist(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 8)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    g = Graph(n, rng.sample(pairs, rng.randint(1, min(12, len(pairs)))))
    order = list(range(n))
    rng.shuffle(order)
    for s in range(1, 4):
        lay = fixed_order_layout(g, order, s, 0)
        if lay is not None:
            assert validate_layout(lay).ok
            assert max_twist(g, VertexOrder(order)) <= s


def _random_graph(rng, n, m):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, rng.sample(pairs, min(m, len(pairs))))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_feasible_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    g = _random_graph(rng, rng.randint(3, 6), rng.randint(2, 8))
    for s, q in ((1, 0), (0, 1), (1, 1), (2, 0), (0, 2)):
        assert feasible(g, PageBudget(s, q)).feasible == naive_feasible(g.n, g.edges, s, q)
    bip = bipartition_of(g.n, g.edges)
    if bip is not None:
        gb = Graph(g.n, g.edges, bip)
        for s, q in ((1, 0), (0, 1), (1, 1)):
            assert feasible(gb, PageBudget(s, q, True)).feasible == naive_feasible(g.n, g.edges, s, q, side_a=bip[0])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_feasibility_is_monotone_in_budget(seed):
    rng = random.Random(seed)
    g = _random_graph(rng, 6, rng.randint(5, 12))
    for s in range(3):
        for q in range(3):
            if s + q == 0:
                continue
            if feasible(g, PageBudget(s, q)).feasible:
                assert feasible(g, PageBudget(s + 1, q)).feasible
                assert feasible(g, PageBudget(s, q + 1)).feasible


def test_witnesses_are_deterministic():
    a = feasible(complete_graph(6), PageBudget(1, 1)).witness
    b = feasible(complete_graph(6), PageBudget(1, 1)).witness
    assert a == b
