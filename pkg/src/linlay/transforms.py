"""Layout-to-layout transformations.

Riffle splits, separation of bipartite queue layouts, the prefix-reversal
4-queue transform for separated 1-stack 1-queue layouts, checkerboard block
reversal, same-permutation reordering, and the shallow-minor host graph
construction with its contraction map.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .core import (
    QUEUE,
    STACK,
    Edge,
    Graph,
    LayoutError,
    LinearLayout,
    Page,
    VertexOrder,
    a_first,
    grid_points,
    is_separated,
    min_chain_cover,
    monotone_class,
    norm_edge,
    side_orders,
    validate_layout,
)


def _require_valid(layout: LinearLayout, what: str) -> None:
    report = validate_layout(layout)
    if not report.ok:
        raise LayoutError(f"{what}: input layout is invalid ({len(report)} defects)")


def _separated_order(cols: Sequence[int], rows: Sequence[int], cols_first: bool) -> list[int]:
    return list(cols) + list(rows) if cols_first else list(rows) + list(cols)


# --- riffle splits ---------------------------------------------------------------


@dataclass(frozen=True)
class RiffleSpec:
    parts: tuple[tuple[int, ...], ...]
    target_order: VertexOrder

    def __init__(self, parts: Iterable[Iterable[int]], target_order):
        if not isinstance(target_order, VertexOrder):
            target_order = VertexOrder(target_order)
        object.__setattr__(self, "parts", tuple(tuple(int(v) for v in p) for p in parts))
        object.__setattr__(self, "target_order", target_order)

    def part_index(self, n: int) -> list[int]:
        owner = [-1] * n
        for i, part in enumerate(self.parts):
            for v in part:
                if not 0 <= v < n:
                    raise LayoutError(f"riffle part {i} names vertex {v} outside 0..{n - 1}")
                if owner[v] != -1:
                    raise LayoutError(f"vertex {v} appears in riffle parts {owner[v]} and {i}")
                owner[v] = i
        missing = [v for v in range(n) if owner[v] == -1]
        if missing:
            raise LayoutError(f"riffle parts do not cover vertices {missing[:10]}")
        return owner

    def check_against(self, order: VertexOrder) -> list[int]:
        """Check this riffle against an input order; return the part index of each vertex."""
        n = len(order)
        if len(self.target_order) != n:
            raise LayoutError("riffle target order has the wrong length")
        owner = self.part_index(n)
        for i, part in enumerate(self.parts):
            before = sorted(part, key=order.pos)
            after = sorted(part, key=self.target_order.pos)
            if before != after:
                raise LayoutError(f"riffle target reorders vertices inside part {i}")
        return owner


def _riffle_pages(layout: LinearLayout, owner: list[int], k: int, allowed=None) -> list[Page]:
    order = layout.order
    pages = []
    for page in layout.pages:
        buckets: dict[tuple[int, int], list[Edge]] = {}
        for e in page.edges:
            u, v = e if order.pos(e[0]) < order.pos(e[1]) else (e[1], e[0])
            key = (owner[u], owner[v])
            buckets.setdefault(key, []).append(e)
        for i in range(k):
            for j in range(k):
                if (i, j) in buckets:
                    if allowed is not None and (i, j) not in allowed:
                        raise LayoutError(f"edge between parts {i} and {j} contradicts the bipartite split")
                    pages.append(Page(QUEUE, buckets[(i, j)]))
    return pages


def riffle_split(layout: LinearLayout, spec: RiffleSpec) -> LinearLayout:
    """Re-page a queue layout for a riffled order: one queue per (page, left part, right part)."""
    if any(p.kind != QUEUE for p in layout.pages):
        raise LayoutError("riffle_split needs a pure queue layout")
    owner = spec.check_against(layout.order)
    _require_valid(layout, "riffle_split")
    pages = _riffle_pages(layout, owner, len(spec.parts))
    return LinearLayout(layout.graph, spec.target_order, pages)


def riffle_split_bipartite(layout: LinearLayout, spec: RiffleSpec, ell: int) -> LinearLayout:
    """Riffle split when parts ``0..ell-1`` cover A and the rest cover B.

    Only part pairs across the bipartition can carry edges, so at most
    ``2*ell*(k-ell)`` queues are produced per input queue.
    """
    if any(p.kind != QUEUE for p in layout.pages):
        raise LayoutError("riffle_split_bipartite needs a pure queue layout")
    a = layout.graph.side_a()
    k = len(spec.parts)
    if not 0 <= ell <= k:
        raise LayoutError("ell must lie between 0 and the number of parts")
    for i, part in enumerate(spec.parts):
        on_a = i < ell
        if any((v in a) != on_a for v in part):
            raise LayoutError(f"riffle part {i} does not lie on side {'A' if on_a else 'B'}")
    owner = spec.check_against(layout.order)
    _require_valid(layout, "riffle_split_bipartite")
    allowed = {(i, j) for i in range(k) for j in range(k) if (i < ell) != (j < ell)}
    pages = _riffle_pages(layout, owner, k, allowed)
    return LinearLayout(layout.graph, spec.target_order, pages)


def separate(layout: LinearLayout, a_side_first: bool = True) -> LinearLayout:
    """Turn a bipartite queue layout into a separated one with at most twice the queues."""
    if layout.graph.bipartition is None:
        raise LayoutError("separate needs a bipartite graph")
    cols, rows = side_orders(layout)
    target = _separated_order(cols, rows, a_side_first)
    parts = [cols, rows] if cols else [rows]
    ell = 1 if cols else 0
    return riffle_split_bipartite(layout, RiffleSpec(parts, target), ell)


# --- separated 1-stack 1-queue to 4 queues --------------------------------------


def _staircase(points: Sequence[tuple[int, int]], start, end, decreasing: bool) -> list[tuple[int, int]]:
    """Unit-step lattice path from ``start`` to ``end`` through all ``points``.

    Such a path visits one point per step on every column and row it crosses,
    so it is an inclusion-maximal monotone chain.
    """
    sign = -1 if decreasing else 1
    stops = sorted(set(points), key=lambda p: (p[0], sign * p[1]))
    path = [start]
    for target in stops + [end]:
        c, r = path[-1]
        while c < target[0]:
            c += 1
            path.append((c, r))
        while r != target[1]:
            r += 1 if target[1] > r else -1
            path.append((c, r))
    return path


@dataclass
class PrefixReversalPlan:
    """Intermediate data of the 4-queue transform, exposed for inspection."""

    pivot: tuple[int, int]
    queue_path: list
    stack_path: list
    families: dict = field(default_factory=dict)  # label -> list of edges


def prefix_reversal_plan(layout: LinearLayout) -> PrefixReversalPlan:
    if not is_separated(layout):
        raise LayoutError("the 4-queue transform needs a separated layout")
    stacks, queues = layout.stacks(), layout.queues()
    if len(stacks) != 1 or len(queues) != 1:
        raise LayoutError(f"the 4-queue transform needs signature (1, 1), got {layout.signature}")
    _require_valid(layout, "theorem5_transform")
    cols, rows = side_orders(layout)
    nc, nr = len(cols), len(rows)
    s_edges, q_edges = list(stacks[0].edges), list(queues[0].edges)
    s_pts = grid_points(layout, s_edges)
    q_pts = grid_points(layout, q_edges)
    if nc == 0 or nr == 0:
        return PrefixReversalPlan((0, 0), [], [], {"Q1": q_edges, "Q3": s_edges})
    q_path = _staircase(q_pts, (0, 0), (nc - 1, nr - 1), decreasing=False)
    s_path = _staircase(s_pts, (0, nr - 1), (nc - 1, 0), decreasing=True)
    common = set(q_path) & set(s_path)
    # two unit-step staircases joining opposite corners always meet
    pivot = min(common)
    q_cut = q_path.index(pivot)
    s_cut = s_path.index(pivot)
    q_rank = {p: i for i, p in enumerate(q_path)}
    s_rank = {p: i for i, p in enumerate(s_path)}
    fam = {"Q1": [], "Q2": [], "Q3": [], "Q4": []}
    for e, p in zip(q_edges, q_pts):
        fam["Q1" if q_rank[p] <= q_cut else "Q2"].append(e)
    for e, p in zip(s_edges, s_pts):
        fam["Q3" if s_rank[p] <= s_cut else "Q4"].append(e)
    return PrefixReversalPlan(pivot, q_path, s_path, fam)


def theorem5_transform(layout: LinearLayout) -> LinearLayout:
    """Separated 1-stack 1-queue layout to a separated layout with at most 4 queues.

    The first ``i+1`` A-vertices and the first ``j+1`` B-vertices are reversed,
    where ``(i, j)`` is where a maximal increasing staircase through the queue
    meets a maximal decreasing staircase through the stack. Each staircase is
    cut at that point into two queues.
    """
    plan = prefix_reversal_plan(layout)
    cols, rows = side_orders(layout)
    ci, rj = plan.pivot
    if cols and rows:
        cols = cols[: ci + 1][::-1] + cols[ci + 1 :]
        rows = rows[: rj + 1][::-1] + rows[rj + 1 :]
    order = _separated_order(cols, rows, a_first(layout))
    pages = [Page(QUEUE, plan.families[k]) for k in ("Q1", "Q2", "Q3", "Q4") if plan.families.get(k)]
    return LinearLayout(layout.graph, order, pages)


# --- checkerboard ---------------------------------------------------------------


def _block_of(cuts: Sequence[int], x: int) -> int:
    # cuts are boundaries [0, ..., size]; empty blocks are allowed
    for b in range(len(cuts) - 1):
        if cuts[b] <= x < cuts[b + 1]:
            return b
    raise LayoutError(f"index {x} outside the block boundaries {list(cuts)}")


@dataclass(frozen=True)
class BlockGrid:
    """Column and row block boundaries over a grid, each ``[0, ..., size]``."""

    col_cuts: tuple[int, ...]
    row_cuts: tuple[int, ...]

    def __post_init__(self):
        for name, cuts in (("col_cuts", self.col_cuts), ("row_cuts", self.row_cuts)):
            if len(cuts) < 2 or cuts[0] != 0 or any(b < a for a, b in zip(cuts, cuts[1:])):
                raise LayoutError(f"{name} must be non-decreasing boundaries starting at 0")

    def cell_of(self, point: tuple[int, int]) -> tuple[int, int]:
        return _block_of(self.col_cuts, point[0]), _block_of(self.row_cuts, point[1])


@dataclass(frozen=True)
class CheckerboardGrid(BlockGrid):
    """Blocks with a parity: cell ``(bi, bj)`` is odd iff ``bi + bj + offset`` is odd.

    Odd cells may hold only queue points, even cells only stack points.
    """

    offset: int = 0

    def is_odd(self, cell: tuple[int, int]) -> bool:
        return (cell[0] + cell[1] + self.offset) % 2 == 1

    def reversed_col_block(self, bi: int) -> bool:
        return bi % 2 == 1

    def reversed_row_block(self, bj: int) -> bool:
        return (bj + self.offset) % 2 == 0


def parity_violations(layout: LinearLayout, grid: CheckerboardGrid) -> list[tuple[tuple[int, int], str, Edge]]:
    """Cells holding points of the wrong page kind."""
    bad = []
    for page in layout.pages:
        for e, p in zip(page.edges, grid_points(layout, page.edges)):
            cell = grid.cell_of(p)
            odd = grid.is_odd(cell)
            if odd and page.kind == STACK:
                bad.append((cell, STACK, e))
            elif not odd and page.kind == QUEUE:
                bad.append((cell, QUEUE, e))
    return bad


def _check_grid_fits(layout: LinearLayout, grid: BlockGrid) -> tuple[list[int], list[int]]:
    if not is_separated(layout):
        raise LayoutError("checkerboard operations need a separated layout")
    cols, rows = side_orders(layout)
    if grid.col_cuts[-1] != len(cols) or grid.row_cuts[-1] != len(rows):
        raise LayoutError(
            f"grid spans {grid.col_cuts[-1]}x{grid.row_cuts[-1]} but the layout has {len(cols)}x{len(rows)}"
        )
    return cols, rows


def checkerboard_transform(layout: LinearLayout, grid: CheckerboardGrid, repack: bool = False) -> LinearLayout:
    """Reverse alternating column and row blocks to turn every stack point into a queue point.

    Each input page is split per grid cell, which is always valid. With
    ``repack`` the points are instead regrouped into the fewest queues
    possible for the new order.
    """
    cols, rows = _check_grid_fits(layout, grid)
    _require_valid(layout, "checkerboard_transform")
    bad = parity_violations(layout, grid)
    if bad:
        cell, kind, e = bad[0]
        where = "odd" if kind == STACK else "even"
        raise LayoutError(f"{where} cell {cell} holds {kind} edge {e}; parity property violated")
    new_cols = []
    for bi in range(len(grid.col_cuts) - 1):
        block = cols[grid.col_cuts[bi] : grid.col_cuts[bi + 1]]
        new_cols += block[::-1] if grid.reversed_col_block(bi) else block
    new_rows = []
    for bj in range(len(grid.row_cuts) - 1):
        block = rows[grid.row_cuts[bj] : grid.row_cuts[bj + 1]]
        new_rows += block[::-1] if grid.reversed_row_block(bj) else block
    order = _separated_order(new_cols, new_rows, a_first(layout))
    if repack:
        out = LinearLayout(layout.graph, order, [])
        edges = list(layout.graph.edges)
        pts = grid_points(out, edges)
        pages = [Page(QUEUE, [edges[k] for k in chain]) for chain in min_chain_cover(pts)]
        return LinearLayout(layout.graph, order, pages)
    pages = []
    for page in layout.pages:
        cells: dict[tuple[int, int], list[Edge]] = {}
        for e, p in zip(page.edges, grid_points(layout, page.edges)):
            cells.setdefault(grid.cell_of(p), []).append(e)
        for cell in sorted(cells):
            pages.append(Page(QUEUE, cells[cell]))
    return LinearLayout(layout.graph, order, pages)


def halve_diagonal_grid(layout: LinearLayout, blocks: BlockGrid) -> CheckerboardGrid:
    """Split every block in two so that diagonals fall into checkerboard cells.

    An increasing diagonal occupies the two sub-cells on the main diagonal of
    its cell and a decreasing one the two off-diagonal sub-cells; offset 1
    makes the former odd and the latter even. Blocks are halved at their
    midpoints when that works, otherwise split off-centre (see _split_blocks).
    """
    _check_grid_fits(layout, blocks)
    cells: dict[tuple[int, int], list[tuple[int, int]]] = {}
    has_stack = False
    for page in layout.pages:
        has_stack |= page.kind == STACK and bool(page.edges)
        for p in grid_points(layout, page.edges):
            cells.setdefault(blocks.cell_of(p), []).append(p)
    for cell, pts in sorted(cells.items()):
        if monotone_class(pts) == "neither":
            raise LayoutError(f"cell {cell} does not hold a single monotone diagonal")
    if not has_stack:
        # nothing to flip: one odd cell
        return CheckerboardGrid((0, blocks.col_cuts[-1]), (0, blocks.row_cuts[-1]), 1)

    cuts = _split_blocks(layout, blocks)
    if cuts is None:
        raise LayoutError("no split of the blocks puts every diagonal into cells of the right parity")
    return CheckerboardGrid(cuts[0], cuts[1], 1)


def _split_blocks(layout: LinearLayout, blocks: BlockGrid):
    """Choose one split position inside every block column and block row.

    Queue points must land in sub-cells on the block's main diagonal and stack
    points off it. Midpoints are tried first, so even-sized blocks with
    centred diagonals are simply halved. Each cell ties its column split to its
    row split; the search assigns splits in breadth-first order over that
    constraint graph and backtracks on conflicts.
    """
    cell_pts: dict[tuple[int, int], list[tuple[int, int, bool]]] = {}
    for page in layout.pages:
        for c, r in grid_points(layout, page.edges):
            cell_pts.setdefault(blocks.cell_of((c, r)), []).append((c, r, page.kind == QUEUE))

    def domain(cuts, i):
        a, b = cuts[i], cuts[i + 1]
        mid = a + (b - a) // 2
        return sorted(range(a, b + 1), key=lambda m: (abs(m - mid), m))

    def fits(cell, mc, mr):
        return all(((c < mc) == (r < mr)) == queue for c, r, queue in cell_pts[cell])

    ncol, nrow = len(blocks.col_cuts) - 1, len(blocks.row_cuts) - 1
    nbrs: dict[tuple[str, int], list[tuple[str, int]]] = {("c", i): [] for i in range(ncol)}
    nbrs.update({("r", j): [] for j in range(nrow)})
    for bi, bj in cell_pts:
        nbrs[("c", bi)].append(("r", bj))
        nbrs[("r", bj)].append(("c", bi))
    order, seen = [], set()
    for start in sorted(nbrs):
        if start in seen:
            continue
        seen.add(start)
        queue_ = [start]
        while queue_:
            x = queue_.pop(0)
            order.append(x)
            for y in sorted(nbrs[x]):
                if y not in seen:
                    seen.add(y)
                    queue_.append(y)
    doms = {("c", i): domain(blocks.col_cuts, i) for i in range(ncol)}
    doms.update({("r", j): domain(blocks.row_cuts, j) for j in range(nrow)})
    val: dict[tuple[str, int], int] = {}

    def consistent(x, m):
        for y in nbrs[x]:
            if y in val:
                mc, mr = (m, val[y]) if x[0] == "c" else (val[y], m)
                cell = (x[1], y[1]) if x[0] == "c" else (y[1], x[1])
                if not fits(cell, mc, mr):
                    return False
        return True

    def search(k):
        if k == len(order):
            return True
        x = order[k]
        for m in doms[x]:
            if consistent(x, m):
                val[x] = m
                if search(k + 1):
                    return True
                del val[x]
        return False

    if not search(0):
        return None

    def merged(cuts, kind):
        out = [0]
        for i in range(len(cuts) - 1):
            out += [val[(kind, i)], cuts[i + 1]]
        return tuple(out)

    return merged(blocks.col_cuts, "c"), merged(blocks.row_cuts, "r")


# --- same permutation on both sides ---------------------------------------------


@dataclass
class SamePermutationResult:
    layout: LinearLayout
    oracle_pages: int
    permutation: list  # new rank -> old rank, shared by both sides
    padded: int = 0


def pad_to_balanced(layout: LinearLayout) -> tuple[LinearLayout, int]:
    """Append isolated vertices to the smaller side, at the end of its block."""
    cols, rows = side_orders(layout)
    d = len(cols) - len(rows)
    if d == 0:
        return layout, 0
    g = layout.graph
    extra = list(range(g.n, g.n + abs(d)))
    a = set(g.side_a())
    b = set(g.side_b())
    if d < 0:
        cols = cols + extra
        a.update(extra)
    else:
        rows = rows + extra
        b.update(extra)
    g2 = Graph(g.n + len(extra), g.edges, (a, b))
    order = _separated_order(cols, rows, a_first(layout))
    return LinearLayout(g2, order, layout.pages), len(extra)


def exact_oracle(graph: Graph) -> LinearLayout:
    """Optimal separated queue layout from the exact search."""
    from .solver import optimal_layout

    _, witness = optimal_layout(graph, "sqn")
    return witness


def same_permutation_detail(
    layout: LinearLayout, oracle: Callable[[Graph], LinearLayout], pad: bool = False
) -> SamePermutationResult:
    if not is_separated(layout):
        raise LayoutError("same_permutation_transform needs a separated layout")
    _require_valid(layout, "same_permutation_transform")
    cols, rows = side_orders(layout)
    padded = 0
    if len(cols) != len(rows):
        if not pad:
            raise LayoutError(f"|A| = {len(cols)} differs from |B| = {len(rows)}; pass pad=True to balance")
        layout, padded = pad_to_balanced(layout)
        cols, rows = side_orders(layout)
    g = layout.graph
    identity = [norm_edge(u, v) for u, v in zip(cols, rows)]
    g_aug = g.with_edges(sorted(set(g.edges) | set(identity)))
    sigma0 = oracle(g_aug)
    if sigma0.graph.edge_set != g_aug.edge_set or sigma0.graph.n != g_aug.n:
        raise LayoutError("oracle returned a layout of a different graph")
    if any(p.kind != QUEUE for p in sigma0.pages) or not is_separated(sigma0):
        raise LayoutError("oracle must return a separated pure queue layout")
    report = validate_layout(sigma0)
    if not report.ok:
        raise LayoutError("oracle returned an invalid layout")
    sigma0 = LinearLayout(g_aug, sigma0.order, sigma0.pages)
    page_of = sigma0.page_of()
    partner = dict(zip(cols, rows))
    _, rows0 = side_orders(sigma0)
    rank = {v: i for i, v in enumerate(rows0)}
    new_cols = sorted(cols, key=lambda u: rank[partner[u]])
    groups: dict[int, list[int]] = {}
    for u in new_cols:
        groups.setdefault(page_of[norm_edge(u, partner[u])], []).append(u)
    parts = [groups[p] for p in sorted(groups)] + [rows0]
    target = _separated_order(new_cols, rows0, a_first(layout))
    riffled = riffle_split_bipartite(sigma0, RiffleSpec(parts, target), len(parts) - 1)
    real = g.edge_set
    pages = [Page(QUEUE, [e for e in p.edges if e in real]) for p in riffled.pages]
    out = LinearLayout(g, target, [p for p in pages if p.edges])
    old_rank = {v: i for i, v in enumerate(rows)}
    perm = [old_rank[v] for v in rows0]
    return SamePermutationResult(out, len([p for p in sigma0.pages if p.edges]), perm, padded)


def same_permutation_transform(
    layout: LinearLayout, oracle: Callable[[Graph], LinearLayout] = exact_oracle, pad: bool = False
) -> LinearLayout:
    """Separated pure queue layout obtained by permuting A and B identically.

    The identity matching between the i-th A-vertex and i-th B-vertex is added,
    the oracle lays out the augmented graph, and columns are re-sorted so the
    matching is diagonal again. With ``pad`` the smaller side first receives
    isolated vertices and the returned layout is over the padded graph.
    """
    return same_permutation_detail(layout, oracle, pad).layout


# --- shallow minors ---------------------------------------------------------------


@dataclass(frozen=True)
class MinorMap:
    branch_sets: dict  # minor vertex -> frozenset of host vertices
    radius: int
    legend: Optional[dict] = None  # host vertex -> description, when host ids were invented

    def owner(self) -> dict[int, int]:
        out = {}
        for g, hs in self.branch_sets.items():
            for h in hs:
                if h in out:
                    raise LayoutError(f"host vertex {h} lies in branch sets {out[h]} and {g}")
                out[h] = g
        return out


def identity_map(graph: Graph) -> MinorMap:
    return MinorMap({v: frozenset([v]) for v in range(graph.n)}, 0)


def _radius(adj: list[list[int]], members: frozenset) -> int:
    """Radius of the subgraph induced by ``members``; raises if disconnected."""
    best = None
    for c in sorted(members):
        dist = {c: 0}
        dq = deque([c])
        while dq:
            x = dq.popleft()
            for y in adj[x]:
                if y in members and y not in dist:
                    dist[y] = dist[x] + 1
                    dq.append(y)
        if len(dist) != len(members):
            raise LayoutError(f"branch set {sorted(members)[:8]} is not connected")
        ecc = max(dist.values())
        best = ecc if best is None else min(best, ecc)
    return best or 0


def check_minor_map(host: Graph, mm: MinorMap) -> int:
    """Validate branch sets and return the largest branch-set radius."""
    mm.owner()
    adj = host.adjacency()
    worst = 0
    for g, hs in mm.branch_sets.items():
        if not hs:
            raise LayoutError(f"branch set of {g} is empty")
        if any(not 0 <= h < host.n for h in hs):
            raise LayoutError(f"branch set of {g} names vertices outside the host")
        worst = max(worst, _radius(adj, hs))
    if worst > mm.radius:
        raise LayoutError(f"branch set radius {worst} exceeds the declared radius {mm.radius}")
    return worst


def contract(host: Graph, mm: MinorMap, n: Optional[int] = None, bipartition=None) -> Graph:
    """Contract every branch set to one vertex; host vertices outside all sets are deleted."""
    check_minor_map(host, mm)
    owner = mm.owner()
    if n is None:
        n = max(mm.branch_sets, default=-1) + 1
    edges = set()
    for u, v in host.edges:
        gu, gv = owner.get(u), owner.get(v)
        if gu is None or gv is None or gu == gv:
            continue
        edges.add(norm_edge(gu, gv))
    return Graph(n, sorted(edges), bipartition)


@dataclass
class ShallowHost:
    graph: Graph
    layout: LinearLayout
    minor_map: MinorMap

    def __iter__(self):
        return iter((self.graph, self.layout, self.minor_map))


def build_shallow_graph_H(layout: LinearLayout) -> ShallowHost:
    """Host graph with a separated 1-stack (s+q-1)-queue layout having the input graph as 1-shallow minor.

    Stacks 1..s-1 move to fresh copies ``V^k x U^k`` (columns ``V^k`` join A,
    rows ``U^k`` join B), each linked back through one queue of matching edges
    ``(a_i, u^k_i)`` and ``(v^k_j, b_j)``. The last stack and all queues stay.
    """
    if not is_separated(layout):
        raise LayoutError("build_shallow_graph_H needs a separated layout")
    _require_valid(layout, "build_shallow_graph_H")
    stacks, queues = layout.stacks(), layout.queues()
    s = len(stacks)
    if s == 0:
        raise LayoutError("layout has no stack page; it is already a queue layout and needs no host graph")
    g = layout.graph
    if s == 1:
        return ShallowHost(g, layout, identity_map(g))
    cols, rows = side_orders(layout)
    a = g.side_a()
    nxt = g.n
    legend: dict[int, str] = {}
    u_copy: list[dict[int, int]] = []  # per k: a_i -> u^k_i
    v_copy: list[dict[int, int]] = []  # per k: b_j -> v^k_j
    for k, page in enumerate(stacks[:-1], start=1):
        touched_a = {x for e in page.edges for x in e if x in a}
        touched_b = {x for e in page.edges for x in e if x not in a}
        uk, vk = {}, {}
        for x in cols:
            if x in touched_a:
                uk[x] = nxt
                legend[nxt] = f"u{k}[{x}]"
                nxt += 1
        for y in rows:
            if y in touched_b:
                vk[y] = nxt
                legend[nxt] = f"v{k}[{y}]"
                nxt += 1
        u_copy.append(uk)
        v_copy.append(vk)
    stack_edges = list(stacks[-1].edges)
    link_pages = []
    for page, uk, vk in zip(stacks[:-1], u_copy, v_copy):
        link = set()
        for e in page.edges:
            x, y = (e[0], e[1]) if e[0] in a else (e[1], e[0])
            stack_edges.append(norm_edge(uk[x], vk[y]))
            link.add(norm_edge(x, uk[x]))
            link.add(norm_edge(vk[y], y))
        link_pages.append(sorted(link))
    new_a = set(a) | {v for vk in v_copy for v in vk.values()}
    new_b = set(g.side_b()) | {u for uk in u_copy for u in uk.values()}
    all_edges = set(stack_edges) | {e for p in link_pages for e in p} | {e for p in queues for e in p.edges}
    h = Graph(nxt, sorted(all_edges), (new_a, new_b))
    h_cols = list(cols)
    for vk in v_copy:
        h_cols += list(vk.values())
    h_rows = []
    for uk in reversed(u_copy):
        h_rows += list(uk.values())
    h_rows += rows
    order = _separated_order(h_cols, h_rows, a_first(layout))
    pages = [Page(STACK, stack_edges)] + [Page(QUEUE, p) for p in link_pages] + [Page(QUEUE, p.edges) for p in queues]
    branch = {v: {v} for v in range(g.n)}
    for uk in u_copy:
        for x, u in uk.items():
            branch[x].add(u)
    for vk in v_copy:
        for y, v in vk.items():
            branch[y].add(v)
    mm = MinorMap({v: frozenset(hs) for v, hs in branch.items()}, 1, legend)
    return ShallowHost(h, LinearLayout(h, order, pages), mm)


@dataclass
class ContractionBound:
    holds: bool
    qn_minor: int
    qn_host: int
    host_exact: bool
    radius: int
    bound: int

    def __bool__(self) -> bool:
        return self.holds


def queue_number_lower_bound(graph: Graph) -> int:
    """Cheap certified lower bound: a 1-queue graph on n vertices has at most 2n-3 edges."""
    if graph.m == 0:
        return 0
    active = sum(1 for d in graph.degrees() if d)
    return max(1, math.ceil(graph.m / max(1, 2 * active - 3)))


def check_contraction_bound(
    minor: Graph, host: Graph, mm: MinorMap, max_vertices: Optional[int] = None, host_exact_limit: Optional[int] = None
) -> ContractionBound:
    """Check ``qn(minor) <= (2r+1) * (2 qn(host))^(2r+1)``.

    Both queue numbers are exact by default. When ``host_exact_limit`` is set
    and the host has more vertices, the host side uses a certified lower
    bound instead: the right-hand side grows with ``qn(host)``, so the
    inequality still holds for the true value whenever it holds for the bound.
    """
    from .solver import queue_number

    check_minor_map(host, mm)
    r = mm.radius
    qg = queue_number(minor, max_vertices)
    if host_exact_limit is not None and host.n > host_exact_limit:
        qh, exact = queue_number_lower_bound(host), False
    else:
        qh, exact = queue_number(host, max_vertices), True
    bound = (2 * r + 1) * (2 * qh) ** (2 * r + 1)
    return ContractionBound(qg <= bound, qg, qh, exact, r, bound)
