"""Graphs, vertex orders, typed linear layouts and their grid view.

Vertices are dense integer ids ``0..n-1``. Edges are stored normalised as
``(min, max)`` tuples in sorted order so iteration is deterministic.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

STACK = "stack"
QUEUE = "queue"
KINDS = (STACK, QUEUE)

Edge = tuple[int, int]


class LayoutError(ValueError):
    """Raised when an operation's domain precondition does not hold."""


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    bipartition: Optional[tuple[frozenset, frozenset]] = None

    def __init__(self, n: int, edges: Iterable[Sequence[int]], bipartition=None):
        n = int(n)
        if n < 0:
            raise LayoutError("vertex count must be non-negative")
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise LayoutError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise LayoutError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            ne = norm_edge(u, v)
            if ne in seen:
                raise LayoutError(f"duplicate edge {ne}")
            seen.add(ne)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if bipartition is not None:
            a, b = (frozenset(int(x) for x in part) for part in bipartition)
            if a & b:
                raise LayoutError("bipartition sides overlap")
            if a | b != frozenset(range(n)):
                raise LayoutError("bipartition does not cover the vertex set")
            for u, v in self.edges:
                if (u in a) == (v in a):
                    raise LayoutError(f"edge ({u}, {v}) lies inside one side of the bipartition")
            bipartition = (a, b)
        object.__setattr__(self, "bipartition", bipartition)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def side_a(self) -> frozenset:
        if self.bipartition is None:
            raise LayoutError("graph has no bipartition")
        return self.bipartition[0]

    def side_b(self) -> frozenset:
        if self.bipartition is None:
            raise LayoutError("graph has no bipartition")
        return self.bipartition[1]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def with_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        """Same vertex set and bipartition, different edges."""
        return Graph(self.n, edges, self.bipartition)


@dataclass(frozen=True)
class VertexOrder:
    order: tuple[int, ...]
    positions: tuple[int, ...] = field(repr=False, compare=False)

    def __init__(self, order: Iterable[int]):
        order = tuple(int(v) for v in order)
        n = len(order)
        positions = [-1] * n
        for i, v in enumerate(order):
            if not 0 <= v < n or positions[v] != -1:
                raise LayoutError("vertex order is not a permutation of 0..n-1")
            positions[v] = i
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "positions", tuple(positions))

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def pos(self, v: int) -> int:
        if not 0 <= v < len(self.positions):
            raise LayoutError(f"vertex {v} not in order")
        return self.positions[v]

    def span(self, e: Edge) -> tuple[int, int]:
        a, b = self.pos(e[0]), self.pos(e[1])
        return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Page:
    kind: str
    edges: tuple[Edge, ...]

    def __init__(self, kind: str, edges: Iterable[Sequence[int]]):
        if kind not in KINDS:
            raise LayoutError(f"unknown page kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "edges", tuple(sorted(norm_edge(int(e[0]), int(e[1])) for e in edges)))


@dataclass(frozen=True)
class LinearLayout:
    graph: Graph
    order: VertexOrder
    pages: tuple[Page, ...]

    def __init__(self, graph: Graph, order, pages: Iterable[Page]):
        if not isinstance(order, VertexOrder):
            order = VertexOrder(order)
        if len(order) != graph.n:
            raise LayoutError(f"order has {len(order)} vertices, graph has {graph.n}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "pages", tuple(pages))

    @property
    def signature(self) -> tuple[int, int]:
        s = sum(1 for p in self.pages if p.kind == STACK)
        return s, len(self.pages) - s

    def stacks(self) -> list[Page]:
        return [p for p in self.pages if p.kind == STACK]

    def queues(self) -> list[Page]:
        return [p for p in self.pages if p.kind == QUEUE]

    def page_of(self) -> dict[Edge, int]:
        return {e: i for i, p in enumerate(self.pages) for e in p.edges}

    def without_empty_pages(self) -> "LinearLayout":
        return LinearLayout(self.graph, self.order, [p for p in self.pages if p.edges])


@dataclass(frozen=True)
class GridRepresentation:
    cols: tuple[int, ...]
    rows: tuple[int, ...]
    points: frozenset

    def edge_at(self, point: tuple[int, int]) -> Edge:
        return norm_edge(self.cols[point[0]], self.rows[point[1]])

    def point_of(self) -> dict[Edge, tuple[int, int]]:
        return {self.edge_at(p): p for p in self.points}


@dataclass
class Violation:
    page: int
    e1: Edge
    e2: Edge
    kind: str  # "cross" | "nest"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    duplicated: list = field(default_factory=list)
    foreign: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.violations or self.missing or self.duplicated or self.foreign)

    def __len__(self) -> int:
        # an empty report is a valid layout
        return len(self.violations) + len(self.missing) + len(self.duplicated) + len(self.foreign)

    def to_dict(self, limit: Optional[int] = None) -> dict:
        viol = self.violations if limit is None else self.violations[:limit]
        return {
            "valid": self.ok,
            "violation_count": len(self.violations),
            "violations": [
                {"page": v.page, "edges": [list(v.e1), list(v.e2)], "kind": v.kind} for v in viol
            ],
            "missing": [list(e) for e in self.missing],
            "duplicated": [list(e) for e in self.duplicated],
            "foreign": [list(e) for e in self.foreign],
        }


# --- pairwise predicates -------------------------------------------------------


def edges_cross(order: VertexOrder, e1: Edge, e2: Edge) -> bool:
    a, b = order.span(e1)
    c, d = order.span(e2)
    return a < c < b < d or c < a < d < b


def edges_nest(order: VertexOrder, e1: Edge, e2: Edge) -> bool:
    a, b = order.span(e1)
    c, d = order.span(e2)
    return a < c < d < b or c < a < b < d


def _spans(order: VertexOrder, edges: Sequence[Edge]) -> tuple[np.ndarray, np.ndarray]:
    pos = np.asarray(order.positions, dtype=np.int64)
    if not edges:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = np.asarray(edges, dtype=np.int64)
    pu, pv = pos[arr[:, 0]], pos[arr[:, 1]]
    return np.minimum(pu, pv), np.maximum(pu, pv)


def conflict_pairs(order: VertexOrder, edges: Sequence[Edge], kind: str) -> list[tuple[int, int]]:
    """Index pairs ``i < j`` of edges that may not share a page of ``kind``."""
    m = len(edges)
    if m < 2:
        return []
    left, right = _spans(order, edges)
    out: list[tuple[int, int]] = []
    # chunk rows to keep memory bounded on large pages
    step = max(1, 4_000_000 // m)
    for lo in range(0, m, step):
        l1 = left[lo : lo + step, None]
        r1 = right[lo : lo + step, None]
        if kind == STACK:
            bad = ((l1 < left) & (left < r1) & (r1 < right)) | ((left < l1) & (l1 < right) & (right < r1))
        else:
            bad = ((l1 < left) & (right < r1)) | ((left < l1) & (r1 < right))
        ii, jj = np.nonzero(bad)
        ii = ii + lo
        keep = ii < jj
        out.extend(zip(ii[keep].tolist(), jj[keep].tolist()))
    return out


def page_is_valid(order: VertexOrder, kind: str, edges: Sequence[Edge]) -> bool:
    """Fast check of one page: stacks by a bracket scan, queues by a sorted sweep."""
    if len(edges) < 2:
        return True
    left, right = _spans(order, edges)
    if kind == QUEUE:
        # nesting exists iff, sorted by left asc then right desc, some later
        # interval with strictly larger left ends strictly before an earlier right
        idx = np.lexsort((-right, left))
        best_right = -1
        prev_left = None
        group_max = -1
        for i in idx.tolist():
            lft, rgt = int(left[i]), int(right[i])
            if lft != prev_left:
                best_right = max(best_right, group_max)
                group_max = -1
                prev_left = lft
            if rgt < best_right:
                return False
            group_max = max(group_max, rgt)
        return True
    # stack: events sorted by position; closings before openings at one position
    events = []
    for k, (lft, rgt) in enumerate(zip(left.tolist(), right.tolist())):
        events.append((lft, 1, -rgt, k))
        events.append((rgt, 0, -lft, k))
    events.sort()
    open_stack: list[int] = []
    for _, typ, _, k in events:
        if typ == 1:
            open_stack.append(k)
        else:
            if not open_stack or open_stack[-1] != k:
                return False
            open_stack.pop()
    return True


def validate_layout(layout: LinearLayout) -> ValidationReport:
    report = ValidationReport()
    graph_edges = layout.graph.edge_set
    seen: dict[Edge, int] = {}
    for pi, page in enumerate(layout.pages):
        for e in page.edges:
            if e not in graph_edges:
                report.foreign.append(e)
            elif e in seen:
                report.duplicated.append(e)
            else:
                seen[e] = pi
    report.missing = [e for e in layout.graph.edges if e not in seen]
    for pi, page in enumerate(layout.pages):
        if page_is_valid(layout.order, page.kind, page.edges):
            continue
        kind = "cross" if page.kind == STACK else "nest"
        for i, j in conflict_pairs(layout.order, page.edges, page.kind):
            report.violations.append(Violation(pi, page.edges[i], page.edges[j], kind))
    return report


def is_valid(layout: LinearLayout) -> bool:
    return validate_layout(layout).ok


# --- separated layouts and grids ----------------------------------------------


def is_separated(layout: LinearLayout) -> bool:
    a = layout.graph.side_a()
    n_a = len(a)
    head = layout.order.order[:n_a]
    tail = layout.order.order[len(layout.order) - n_a :]
    return all(v in a for v in head) or all(v in a for v in tail)


def side_orders(layout: LinearLayout) -> tuple[list[int], list[int]]:
    """A-vertices and B-vertices, each in layout order."""
    a = layout.graph.side_a()
    cols = [v for v in layout.order.order if v in a]
    rows = [v for v in layout.order.order if v not in a]
    return cols, rows


def a_first(layout: LinearLayout) -> bool:
    a = layout.graph.side_a()
    return not layout.order.order or layout.order.order[0] in a or len(a) == len(layout.order)


def to_grid(layout: LinearLayout) -> GridRepresentation:
    if not is_separated(layout):
        raise LayoutError("grid view requires a separated layout")
    cols, rows = side_orders(layout)
    ci = {v: i for i, v in enumerate(cols)}
    ri = {v: j for j, v in enumerate(rows)}
    pts = set()
    for u, v in layout.graph.edges:
        if u in ci:
            pts.add((ci[u], ri[v]))
        else:
            pts.add((ci[v], ri[u]))
    return GridRepresentation(tuple(cols), tuple(rows), frozenset(pts))


def from_grid(grid: GridRepresentation, a_first: bool = True) -> tuple[Graph, VertexOrder]:
    """Rebuild the bipartite graph and its separated order from a grid."""
    n = len(grid.cols) + len(grid.rows)
    g = Graph(n, [grid.edge_at(p) for p in sorted(grid.points)], (grid.cols, grid.rows))
    order = list(grid.cols) + list(grid.rows) if a_first else list(grid.rows) + list(grid.cols)
    return g, VertexOrder(order)


def grid_points(layout: LinearLayout, edges: Iterable[Edge]) -> list[tuple[int, int]]:
    cols, rows = side_orders(layout)
    ci = {v: i for i, v in enumerate(cols)}
    ri = {v: j for j, v in enumerate(rows)}
    out = []
    for u, v in edges:
        out.append((ci[u], ri[v]) if u in ci else (ci[v], ri[u]))
    return out


def monotone_class(points: Iterable[tuple[int, int]]) -> str:
    pts = sorted(set(points))
    inc = dec = True
    for i in range(len(pts)):
        c1, r1 = pts[i]
        for j in range(i + 1, len(pts)):
            prod = (pts[j][0] - c1) * (pts[j][1] - r1)
            if prod < 0:
                inc = False
            elif prod > 0:
                dec = False
        if not (inc or dec):
            return "neither"
    if inc and dec:
        return "both"
    return "increasing" if inc else "decreasing"


def min_chain_cover(points: Sequence[tuple[int, int]], decreasing: bool = False) -> list[list[int]]:
    """Partition points into the fewest weakly monotone chains.

    Greedy patience assignment over points sorted by column; optimal by
    Dilworth (the count equals the longest strictly opposite-monotone subsequence).
    Returns chains as lists of indices into ``points``.
    """
    if decreasing:
        points = [(c, -r) for c, r in points]
    idx = sorted(range(len(points)), key=lambda k: (points[k][0], points[k][1]))
    tails: list[int] = []  # sorted ascending
    owners: list[int] = []
    chains: list[list[int]] = []
    for k in idx:
        r = points[k][1]
        # chain whose tail is the largest value <= r
        t = bisect.bisect_right(tails, r) - 1
        if t < 0:
            chains.append([k])
            tails.insert(0, r)
            owners.insert(0, len(chains) - 1)
        else:
            c = owners[t]
            chains[c].append(k)
            del tails[t]
            del owners[t]
            pos = bisect.bisect_right(tails, r)
            tails.insert(pos, r)
            owners.insert(pos, c)
    return chains


# --- order manipulations -------------------------------------------------------


def reverse_segment(layout: LinearLayout, start: int, stop: int) -> LinearLayout:
    """Reverse the vertex order on positions ``start..stop`` inclusive."""
    n = len(layout.order)
    if not 0 <= start <= stop < n:
        raise LayoutError(f"segment [{start}, {stop}] outside 0..{n - 1}")
    order = list(layout.order.order)
    order[start : stop + 1] = order[start : stop + 1][::-1]
    return LinearLayout(layout.graph, order, layout.pages)


def separated_flip(layout: LinearLayout) -> LinearLayout:
    """Reverse the A-block of a separated layout, swapping stacks and queues."""
    if not is_separated(layout):
        raise LayoutError("separated_flip needs a separated layout")
    report = validate_layout(layout)
    if not report.ok:
        raise LayoutError("separated_flip needs a valid layout")
    n_a = len(layout.graph.side_a())
    if n_a == 0:
        flipped = layout
    elif a_first(layout):
        flipped = reverse_segment(layout, 0, n_a - 1)
    else:
        n = len(layout.order)
        flipped = reverse_segment(layout, n - n_a, n - 1)
    pages = [Page(QUEUE if p.kind == STACK else STACK, p.edges) for p in layout.pages]
    return LinearLayout(layout.graph, flipped.order, pages)


def induced_layout(layout: LinearLayout, keep_edges: Iterable[Edge]) -> LinearLayout:
    """Restrict a layout to a subset of its edges, same vertex set."""
    keep = set(keep_edges)
    g = layout.graph.with_edges(sorted(keep))
    pages = [Page(p.kind, [e for e in p.edges if e in keep]) for p in layout.pages]
    return LinearLayout(g, layout.order, pages)
