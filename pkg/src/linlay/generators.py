"""Deterministic instance families, each paired with a known layout."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .core import (
    QUEUE,
    STACK,
    Edge,
    Graph,
    LayoutError,
    LinearLayout,
    Page,
    VertexOrder,
    grid_points,
    min_chain_cover,
    norm_edge,
)
from .transforms import BlockGrid


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise LayoutError("complete_graph needs n >= 2")
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n} with side A = 0..m-1 and side B = m..m+n-1."""
    if m < 1 or n < 1:
        raise LayoutError("complete_bipartite needs both sides non-empty")
    a, b = range(m), range(m, m + n)
    return Graph(m + n, [(u, v) for u in a for v in b], (a, b))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise LayoutError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


# --- the challenge family ---------------------------------------------------------


@dataclass
class ChallengeInstance:
    k: int
    graph: Graph
    mixed_layout: LinearLayout
    classes: dict = field(default_factory=dict)  # edge -> "red" | "brown" | "blue"
    edges_before_dedup: int = 0

    @property
    def n(self) -> int:
        return 2**self.k

    def v(self, i: int) -> int:
        return i

    def u(self, i: int) -> int:
        return self.n + i


def challenge_graph(k: int) -> ChallengeInstance:
    """Subcubic bipartite graph on ``v_0..v_{n-1}`` (ids 0..n-1) and ``u_0..u_{n-1}`` (ids n..2n-1).

    Red edges ``(v_i, u_i)``; brown ``(v_i, u_2i), (v_i, u_2i+1)`` for i < n/2;
    blue ``(v_i, u_{2n-2i-2}), (v_i, u_{2n-2i-1})`` for i >= n/2. Coinciding
    edges are merged, keeping red over brown over blue.
    """
    if k < 1:
        raise LayoutError("challenge_graph needs k >= 1")
    n = 2**k
    raw: list[tuple[Edge, str]] = []
    for i in range(n):
        raw.append(((i, n + i), "red"))
    for i in range(n // 2):
        raw += [((i, n + 2 * i), "brown"), ((i, n + 2 * i + 1), "brown")]
    for i in range(n // 2, n):
        raw += [((i, n + 2 * n - 2 * i - 2), "blue"), ((i, n + 2 * n - 2 * i - 1), "blue")]
    classes: dict[Edge, str] = {}
    for e, c in raw:
        classes.setdefault(norm_edge(*e), c)
    g = Graph(2 * n, sorted(classes), (range(n), range(n, 2 * n)))
    by = {c: [e for e, cc in classes.items() if cc == c] for c in ("red", "brown", "blue")}
    pages = [Page(STACK, by["blue"]), Page(QUEUE, by["red"]), Page(QUEUE, by["brown"])]
    layout = LinearLayout(g, list(range(2 * n)), [p for p in pages if p.edges])
    return ChallengeInstance(k, g, layout, classes, len(raw))


_BLOCK_PERMS = {1: (0, 1, 2, 3), 2: (1, 0, 3, 2), 3: (2, 3, 0, 1), 0: (3, 2, 1, 0)}


def challenge_permutation(k: int) -> list[int]:
    """Recursive block permutation of ``0..2^k-1``: position ``p`` receives index ``seq[p]``.

    Units start as single indices. Consecutive groups of four units form
    blocks; block ``i`` (counted from 1) is rearranged by ``f_{i mod 4}``
    where f1 keeps, f2 swaps neighbours, f3 swaps halves and f4 (i mod 4 = 0)
    reverses. Blocks then become the units of the next level, as long as
    four of them fit into ``n``.
    """
    if k < 1:
        raise LayoutError("challenge_permutation needs k >= 1")
    n = 2**k
    seq = list(range(n))
    unit = 1
    while 4 * unit <= n:
        units = [seq[i : i + unit] for i in range(0, n, unit)]
        out = []
        for b in range(len(units) // 4):
            f = _BLOCK_PERMS[(b + 1) % 4]
            group = units[4 * b : 4 * b + 4]
            for t in f:
                out.extend(group[t])
        seq = out
        unit *= 4
    return seq


def challenge_queue_layout(k: int) -> LinearLayout:
    """The challenge graph with one permutation applied to both sides, paged into fewest queues.

    Raises if more than four queues are needed, since the permutation's
    top-level stopping rule is a reading that the page count has to confirm.
    """
    inst = challenge_graph(k)
    n = inst.n
    seq = challenge_permutation(k)
    order = list(seq) + [n + i for i in seq]
    bare = LinearLayout(inst.graph, order, [])
    edges = list(inst.graph.edges)
    chains = min_chain_cover(grid_points(bare, edges))
    if len(chains) > 4:
        raise LayoutError(f"shared permutation needs {len(chains)} queues for k={k}, expected at most 4")
    return LinearLayout(inst.graph, order, [Page(QUEUE, [edges[c] for c in ch]) for ch in chains])


# --- diagonal grids --------------------------------------------------------------


Pattern = Union[str, Sequence[Sequence[str]]]


def _resolve_pattern(pattern: Pattern, block_rows: int, block_cols: int, rng: random.Random) -> list[list[str]]:
    if isinstance(pattern, str):
        if pattern == "alternating":
            return [["increasing" if (bi + bj) % 2 == 0 else "decreasing" for bj in range(block_rows)] for bi in range(block_cols)]
        if pattern == "random":
            return [[rng.choice(("increasing", "decreasing")) for _ in range(block_rows)] for _ in range(block_cols)]
        if pattern in ("increasing", "decreasing"):
            return [[pattern] * block_rows for _ in range(block_cols)]
        raise LayoutError(f"unknown diagonal pattern {pattern!r}")
    grid = [list(col) for col in pattern]
    if len(grid) != block_cols or any(len(col) != block_rows for col in grid):
        raise LayoutError("explicit pattern must be indexed [block column][block row]")
    return grid


def diagonal_grid_instance(
    block_rows: int, block_cols: int, pattern: Pattern = "alternating", seed: int = 0, cell: int = 4
) -> tuple[Graph, LinearLayout, BlockGrid]:
    """Grid of ``cell x cell`` blocks, each holding one full increasing or decreasing diagonal.

    A-vertices (columns) are ``0..block_cols*cell-1`` and B-vertices follow.
    Increasing diagonals are packed into queues, decreasing into stacks.
    """
    if block_rows < 1 or block_cols < 1 or cell < 1:
        raise LayoutError("diagonal grids need positive block counts and cell size")
    rng = random.Random(seed)
    pat = _resolve_pattern(pattern, block_rows, block_cols, rng)
    n_a, n_b = block_cols * cell, block_rows * cell
    inc_pts, dec_pts = [], []
    for bi in range(block_cols):
        for bj in range(block_rows):
            for t in range(cell):
                c = bi * cell + t
                if pat[bi][bj] == "increasing":
                    inc_pts.append((c, bj * cell + t))
                else:
                    dec_pts.append((c, bj * cell + cell - 1 - t))

    def edge(p):
        return (p[0], n_a + p[1])

    g = Graph(n_a + n_b, [edge(p) for p in inc_pts + dec_pts], (range(n_a), range(n_a, n_a + n_b)))
    pages = [Page(STACK, [edge(dec_pts[i]) for i in ch]) for ch in min_chain_cover(dec_pts, decreasing=True)]
    pages += [Page(QUEUE, [edge(inc_pts[i]) for i in ch]) for ch in min_chain_cover(inc_pts)]
    layout = LinearLayout(g, list(range(n_a + n_b)), pages)
    blocks = BlockGrid(tuple(range(0, n_a + 1, cell)), tuple(range(0, n_b + 1, cell)))
    return g, layout, blocks


# --- random layouts ----------------------------------------------------------------


def _random_staircase(rng: random.Random, nc: int, nr: int, decreasing: bool) -> list[tuple[int, int]]:
    c, r = 0, (nr - 1 if decreasing else 0)
    pts = [(c, r)]
    while c < nc - 1 or (r > 0 if decreasing else r < nr - 1):
        can_c = c < nc - 1
        can_r = r > 0 if decreasing else r < nr - 1
        if can_c and (not can_r or rng.random() < nc / (nc + nr)):
            c += 1
        else:
            r += -1 if decreasing else 1
        pts.append((c, r))
    return pts


def _fits(page_spans, kind, lo, hi) -> bool:
    for a, b in page_spans:
        if kind == STACK:
            if a < lo < b < hi or lo < a < hi < b:
                return False
        elif a < lo < hi < b or lo < a < b < hi:
            return False
    return True


def random_layout_instance(
    s: int,
    q: int,
    n_a: int,
    n_b: int,
    density: float = 0.5,
    separated: bool = False,
    seed: int = 0,
    bipartite: Optional[bool] = None,
) -> LinearLayout:
    """Random valid layout built page by page; the graph is read off afterwards.

    Separated instances draw a random monotone staircase per page over the
    ``n_a x n_b`` grid and keep each point with probability ``density``.
    Other instances draw random vertex pairs and keep those that fit their
    page. Vertex ids are shuffled, so ids carry no order information.
    Empty pages are dropped, so the signature is at most ``(s, q)``.
    """
    if s < 0 or q < 0 or s + q < 1:
        raise LayoutError("need s, q >= 0 with s + q >= 1")
    if not 0 < density <= 1:
        raise LayoutError("density must lie in (0, 1]")
    if bipartite is None:
        bipartite = separated
    if separated and not bipartite:
        raise LayoutError("separated instances are bipartite")
    n = n_a + n_b
    if n < 2 or (bipartite and (n_a < 1 or n_b < 1)):
        raise LayoutError("too few vertices for an edge")
    rng = random.Random(seed)
    ids = list(range(n))
    rng.shuffle(ids)
    a_ids, b_ids = sorted(ids[:n_a]), sorted(ids[n_a:])
    kinds = [STACK] * s + [QUEUE] * q
    used: set[Edge] = set()
    pages: list[Page] = []
    if separated:
        cols = a_ids[:]
        rows = b_ids[:]
        rng.shuffle(cols)
        rng.shuffle(rows)
        order = cols + rows if rng.random() < 0.5 else rows + cols
        for kind in kinds:
            es = []
            for c, r in _random_staircase(rng, n_a, n_b, kind == STACK):
                e = norm_edge(cols[c], rows[r])
                if e not in used and rng.random() < density:
                    used.add(e)
                    es.append(e)
            pages.append(Page(kind, es))
    else:
        order = ids[:]
        rng.shuffle(order)
        pos = {v: i for i, v in enumerate(order)}
        a_set = set(a_ids)
        spans: list[list[tuple[int, int]]] = [[] for _ in kinds]
        members: list[list[Edge]] = [[] for _ in kinds]
        tries = int(density * n * len(kinds) * 3) + 1
        for _ in range(tries):
            u, v = rng.sample(range(n), 2)
            if bipartite and (u in a_set) == (v in a_set):
                continue
            e = norm_edge(u, v)
            if e in used:
                continue
            lo, hi = sorted((pos[u], pos[v]))
            p = rng.randrange(len(kinds))
            if _fits(spans[p], kinds[p], lo, hi):
                spans[p].append((lo, hi))
                members[p].append(e)
                used.add(e)
        pages = [Page(kind, es) for kind, es in zip(kinds, members)]
    if not used:
        # guarantee at least one edge
        if bipartite:
            e = norm_edge(a_ids[0], b_ids[0])
        else:
            e = norm_edge(order[0], order[1])
        used.add(e)
        pages[0] = Page(pages[0].kind, list(pages[0].edges) + [e])
    bip = (a_ids, b_ids) if bipartite else None
    g = Graph(n, sorted(used), bip)
    return LinearLayout(g, VertexOrder(order), [p for p in pages if p.edges])
