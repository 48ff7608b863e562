"""Exact decision and optimisation of stack, queue and mixed layout numbers.

The search places vertices left to right. When a vertex is placed, every edge
to an already placed neighbour closes and is given a page. Each still-open edge
carries a bitmask of pages it can no longer use; whether a closed edge conflicts
with an open one depends only on their left endpoints, so the masks are exact
and a wiped-out mask prunes the branch immediately.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    QUEUE,
    STACK,
    Edge,
    Graph,
    LayoutError,
    LinearLayout,
    Page,
    VertexOrder,
    conflict_pairs,
    separated_flip,
)

DEFAULT_MAX_VERTICES = 16
MAX_CLIQUE_EDGES = 400


class SolverRefusal(LayoutError):
    """The instance exceeds the configured size guard."""


@dataclass(frozen=True)
class PageBudget:
    stacks: int
    queues: int
    separated: bool = False

    def __post_init__(self):
        if self.stacks < 0 or self.queues < 0 or self.stacks + self.queues < 1:
            raise LayoutError("a budget needs stacks, queues >= 0 and at least one page")

    @property
    def total(self) -> int:
        return self.stacks + self.queues


@dataclass
class SolveResult:
    feasible: bool
    witness: Optional[LinearLayout]
    nodes_explored: int

    def __bool__(self) -> bool:
        return self.feasible


def vertex_cap(max_vertices: Optional[int] = None) -> int:
    if max_vertices is not None:
        return int(max_vertices)
    env = os.environ.get("LINLAY_MAX_VERTICES")
    return int(env) if env else DEFAULT_MAX_VERTICES


def _guard(graph: Graph, max_vertices: Optional[int]) -> None:
    cap = vertex_cap(max_vertices)
    if graph.n > cap:
        raise SolverRefusal(
            f"graph has {graph.n} vertices, exact search is capped at {cap} "
            "(raise with --max-vertices or LINLAY_MAX_VERTICES)"
        )


class _Search:
    def __init__(self, graph: Graph, budget: PageBudget):
        self.graph = graph
        self.budget = budget
        self.kinds = [STACK] * budget.stacks + [QUEUE] * budget.queues
        self.P = len(self.kinds)
        self.full = (1 << self.P) - 1
        self.stack_bits = (1 << budget.stacks) - 1
        self.queue_bits = self.full ^ self.stack_bits
        self.edges = list(graph.edges)
        m = len(self.edges)
        self.inc: list[list[tuple[int, int]]] = [[] for _ in range(graph.n)]
        for k, (u, v) in enumerate(self.edges):
            self.inc[u].append((k, v))
            self.inc[v].append((k, u))
        for lst in self.inc:
            lst.sort(key=lambda t: t[1])
        self.active = [v for v in range(graph.n) if self.inc[v]]
        self.isolated = [v for v in range(graph.n) if not self.inc[v]]
        self.pos = [-1] * graph.n
        self.forbid = [0] * m
        self.assign = [-1] * m
        self.left = [-1] * m  # position of the placed endpoint of an open edge
        self.page_used = [0] * self.P
        self.nodes = 0
        self.order: list[int] = []
        self.open_edges: set[int] = set()
        self._setup_symmetry()

    def _setup_symmetry(self) -> None:
        g, b = self.graph, self.budget
        act = self.active
        self.first_vertex = None
        self.before: list[tuple[int, int]] = []  # (x, y): x must precede y
        self.slots: Optional[list[frozenset]] = None
        if b.separated:
            a = g.side_a()
            a_act = [v for v in act if v in a]
            b_act = [v for v in act if v not in a]
            self.slots = [frozenset(a_act)] * len(a_act) + [frozenset(b_act)] * len(b_act)
            # reversing both sides internally rotates the grid by 180 degrees
            if len(a_act) >= 2:
                self.before.append((a_act[0], a_act[1]))
            elif len(b_act) >= 2:
                self.before.append((b_act[0], b_act[1]))
        elif b.queues == 0:
            # stack layouts are invariant under rotation and reflection
            if act:
                self.first_vertex = act[0]
            if len(act) >= 3:
                self.before.append((act[1], act[2]))
        elif len(act) >= 2:
            self.before.append((act[0], act[1]))
        self.must_follow = {y: x for x, y in self.before}

    def candidates(self, t: int) -> list[int]:
        if t == 0 and self.first_vertex is not None:
            return [self.first_vertex]
        allowed = self.slots[t] if self.slots is not None else None
        out = []
        for v in self.active:
            if self.pos[v] != -1:
                continue
            if allowed is not None and v not in allowed:
                continue
            x = self.must_follow.get(v)
            if x is not None and self.pos[x] == -1:
                continue
            out.append(v)
        return out

    def run(self) -> bool:
        return self._place(0)

    def _place(self, t: int) -> bool:
        if t == len(self.active):
            return True
        for v in self.candidates(t):
            self.nodes += 1
            self.pos[v] = t
            self.order.append(v)
            closing = [(self.pos[w], k) for k, w in self.inc[v] if self.pos[w] != -1]
            closing.sort()
            opening = [k for k, w in self.inc[v] if self.pos[w] == -1]
            for k in opening:
                self.left[k] = t
            for k in closing:
                self.open_edges.discard(k[1])
            self.open_edges.update(opening)
            if self._assign(closing, 0, t):
                return True
            self.open_edges.difference_update(opening)
            for _, k in closing:
                self.open_edges.add(k)
            self.order.pop()
            self.pos[v] = -1
        return False

    def _assign(self, closing: list[tuple[int, int]], i: int, t: int) -> bool:
        if i == len(closing):
            return self._place(t + 1)
        lpos, k = closing[i]
        mask = self.forbid[k]
        seen_empty_stack = seen_empty_queue = False
        for p in range(self.P):
            if mask >> p & 1:
                continue
            is_stack = p < self.budget.stacks
            if not self.page_used[p]:
                # empty pages of one kind are interchangeable
                if is_stack:
                    if seen_empty_stack:
                        continue
                    seen_empty_stack = True
                else:
                    if seen_empty_queue:
                        continue
                    seen_empty_queue = True
            trail = []
            bit = 1 << p
            dead = False
            for o in self.open_edges:
                lo = self.left[o]
                if lo == t:
                    continue
                hit = (lpos < lo) if is_stack else (lo < lpos)
                if hit and not self.forbid[o] & bit:
                    trail.append((o, self.forbid[o]))
                    self.forbid[o] |= bit
                    if self.forbid[o] == self.full:
                        dead = True
            if not dead:
                self.assign[k] = p
                self.page_used[p] += 1
                if self._assign(closing, i + 1, t):
                    return True
                self.page_used[p] -= 1
                self.assign[k] = -1
            for o, old in trail:
                self.forbid[o] = old
        return False

    def witness(self) -> LinearLayout:
        g = self.graph
        if self.budget.separated:
            a = g.side_a()
            order = [v for v in self.order if v in a] + [v for v in self.isolated if v in a]
            order += [v for v in self.order if v not in a] + [v for v in self.isolated if v not in a]
        else:
            order = self.order + self.isolated
        pages = [[] for _ in range(self.P)]
        for k, p in enumerate(self.assign):
            pages[p].append(self.edges[k])
        return LinearLayout(g, order, [Page(kind, es) for kind, es in zip(self.kinds, pages)])


def feasible(graph: Graph, budget: PageBudget, max_vertices: Optional[int] = None) -> SolveResult:
    """Decide whether ``graph`` has a layout within ``budget``; return a witness if so."""
    if budget.separated and graph.bipartition is None:
        raise LayoutError("separated search needs a bipartite graph with a bipartition")
    _guard(graph, max_vertices)
    search = _Search(graph, budget)
    ok = search.run()
    return SolveResult(ok, search.witness() if ok else None, search.nodes)


def _minimize(graph: Graph, budgets, max_vertices) -> tuple[int, Optional[LinearLayout]]:
    if graph.m == 0:
        return 0, None
    for total, options in budgets():
        for budget in options:
            res = feasible(graph, budget, max_vertices)
            if res.feasible:
                return total, res.witness
    raise AssertionError("unreachable: some budget always suffices")


def _pure(kind: str, separated: bool, graph: Graph):
    def gen():
        for t in range(1, graph.m + 1):
            if kind == STACK:
                yield t, [PageBudget(t, 0, separated)]
            else:
                yield t, [PageBudget(0, t, separated)]

    return gen


def _mixed(separated: bool, graph: Graph):
    def gen():
        for t in range(1, graph.m + 1):
            yield t, [PageBudget(s, t - s, separated) for s in range(t, -1, -1)]

    return gen


def stack_number(graph: Graph, max_vertices: Optional[int] = None) -> int:
    return _minimize(graph, _pure(STACK, False, graph), max_vertices)[0]


def queue_number(graph: Graph, max_vertices: Optional[int] = None) -> int:
    return _minimize(graph, _pure(QUEUE, False, graph), max_vertices)[0]


def mixed_number(graph: Graph, max_vertices: Optional[int] = None) -> int:
    return _minimize(graph, _mixed(False, graph), max_vertices)[0]


def separated_queue_number(graph: Graph, max_vertices: Optional[int] = None) -> int:
    return _minimize(graph, _pure(QUEUE, True, graph), max_vertices)[0]


def separated_stack_number(graph: Graph, max_vertices: Optional[int] = None) -> int:
    # ssn = sqn: reversing one side turns every separated queue into a stack
    return separated_queue_number(graph, max_vertices)


def separated_mixed_number(graph: Graph, max_vertices: Optional[int] = None) -> int:
    return _minimize(graph, _mixed(True, graph), max_vertices)[0]


def optimal_layout(graph: Graph, measure: str, max_vertices: Optional[int] = None):
    """Return ``(value, witness)`` for one of sn, qn, mn, sqn, ssn, smn."""
    gens = {
        "sn": _pure(STACK, False, graph),
        "qn": _pure(QUEUE, False, graph),
        "mn": _mixed(False, graph),
        "sqn": _pure(QUEUE, True, graph),
        "ssn": _pure(QUEUE, True, graph),
        "smn": _mixed(True, graph),
    }
    if measure not in gens:
        raise LayoutError(f"unknown measure {measure!r}")
    if measure in ("sqn", "ssn", "smn") and graph.bipartition is None:
        raise LayoutError(f"{measure} needs a bipartite graph")
    _guard(graph, max_vertices)
    value, witness = _minimize(graph, gens[measure], max_vertices)
    if measure == "ssn" and witness is not None:
        witness = separated_flip(witness)
    return value, witness


# --- fixed-order quantities ------------------------------------------------------


def _spans(order: VertexOrder, edges: Sequence[Edge]) -> list[tuple[int, int]]:
    return [order.span(e) for e in edges]


def _max_clique(m: int, pairs: list[tuple[int, int]]) -> int:
    if m > MAX_CLIQUE_EDGES:
        raise SolverRefusal(f"{m} edges exceed the clique guard of {MAX_CLIQUE_EDGES}")
    if m == 0:
        return 0
    nbr = [0] * m
    for i, j in pairs:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    best = 1

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & nbr[v])

    expand(0, (1 << m) - 1)
    return best


def max_twist(graph: Graph, order: VertexOrder) -> int:
    """Largest set of pairwise crossing edges under ``order``."""
    edges = list(graph.edges)
    return _max_clique(len(edges), conflict_pairs(order, edges, STACK))


def max_rainbow(graph: Graph, order: VertexOrder) -> int:
    """Largest set of pairwise nesting edges under ``order``."""
    edges = list(graph.edges)
    return _max_clique(len(edges), conflict_pairs(order, edges, QUEUE))


def rainbow_levels(order: VertexOrder, edges: Sequence[Edge]) -> list[int]:
    """Depth of each edge in the strict-containment order (1 = innermost).

    Edges of equal depth never nest, so the levels form an optimal queue
    assignment for the fixed order.
    """
    spans = _spans(order, edges)
    idx = sorted(range(len(edges)), key=lambda k: spans[k][1] - spans[k][0])
    level = [0] * len(edges)
    for a, k in enumerate(idx):
        lk, rk = spans[k]
        best = 0
        for j in idx[:a]:
            lj, rj = spans[j]
            if lk < lj and rj < rk:
                best = max(best, level[j])
        level[k] = best + 1
    return level


def fixed_order_layout(graph: Graph, order, stacks: int, queues: int) -> Optional[LinearLayout]:
    """Best-effort exact page assignment for a fixed vertex order.

    Returns a valid layout using at most the given numbers of stacks and
    queues, or ``None`` if none exists.
    """
    if not isinstance(order, VertexOrder):
        order = VertexOrder(order)
    edges = list(graph.edges)
    if queues == 0 and stacks > 0 and edges and max_twist(graph, order) > stacks:
        return None
    if stacks == 0 and queues > 0 and edges and max_rainbow(graph, order) > queues:
        return None
    kinds = [STACK] * stacks + [QUEUE] * queues
    m = len(edges)
    cross = [set() for _ in range(m)]
    nest = [set() for _ in range(m)]
    for i, j in conflict_pairs(order, edges, STACK):
        cross[i].add(j)
        cross[j].add(i)
    for i, j in conflict_pairs(order, edges, QUEUE):
        nest[i].add(j)
        nest[j].add(i)
    # most constrained edges first
    seq = sorted(range(m), key=lambda k: -(len(cross[k]) + len(nest[k])))
    assign = [-1] * m
    used = [0] * len(kinds)

    def rec(i: int) -> bool:
        if i == m:
            return True
        k = seq[i]
        empty_seen = set()
        for p, kind in enumerate(kinds):
            if not used[p]:
                if kind in empty_seen:
                    continue
                empty_seen.add(kind)
            clash = cross[k] if kind == STACK else nest[k]
            if any(assign[j] == p for j in clash):
                continue
            assign[k] = p
            used[p] += 1
            if rec(i + 1):
                return True
            used[p] -= 1
            assign[k] = -1
        return False

    if not rec(0):
        return None
    pages = [[] for _ in kinds]
    for k, p in enumerate(assign):
        pages[p].append(edges[k])
    return LinearLayout(graph, order, [Page(kd, es) for kd, es in zip(kinds, pages)])


def fixed_order_page_number(order: VertexOrder, edges: Sequence[Edge], kind: str, n: int) -> int:
    """Minimum pages of one kind for ``edges`` under a fixed order."""
    if not edges:
        return 0
    if kind == QUEUE:
        return max(rainbow_levels(order, edges))
    g = Graph(n, edges)
    s = max_twist(g, order)
    while fixed_order_layout(g, order, s, 0) is None:
        s += 1
    return s
