"""Tree-partitions with ordered bags, and subdivisions built from them.

A tree-layout assigns every vertex of a host graph to a bag at a node of a
rooted tree, each bag carrying its own vertex order. Host edges either stay
inside a bag or join bags of adjacent tree nodes. Colouring tree edges blue
(stack) or red (queue) and ordering the tree nodes turns the tree-layout
into a mixed linear layout of the host.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

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
    is_separated,
    min_chain_cover,
    norm_edge,
    side_orders,
    validate_layout,
)
from .solver import fixed_order_layout, rainbow_levels
from .transforms import MinorMap, separate

BLUE = "blue"
RED = "red"


# --- trees ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tree:
    """Rooted ordered tree on nodes ``0..N-1`` with root 0."""

    children: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...] = field(repr=False, compare=False)

    def __init__(self, children: Sequence[Iterable[int]]):
        kids = tuple(tuple(int(c) for c in cs) for cs in children)
        parent = [-1] * len(kids)
        for p, cs in enumerate(kids):
            for c in cs:
                if not 0 < c < len(kids) or parent[c] != -1:
                    raise LayoutError(f"node {c} has several parents or is out of range")
                parent[c] = p
        if len(kids) == 0:
            raise LayoutError("a tree needs at least one node")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "parent", tuple(parent))
        if len(self.bfs_order()) != len(kids):
            raise LayoutError("tree is not connected from the root")

    @property
    def size(self) -> int:
        return len(self.children)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for p in range(self.size) for c in self.children[p]]

    def is_leaf(self, x: int) -> bool:
        return not self.children[x]

    def depth(self, x: int) -> int:
        d = 0
        while self.parent[x] != -1:
            x = self.parent[x]
            d += 1
        return d

    def height(self) -> int:
        return max(self.depth(x) for x in range(self.size))

    def path_from_root(self, x: int) -> list[int]:
        out = [x]
        while self.parent[x] != -1:
            x = self.parent[x]
            out.append(x)
        return out[::-1]

    def dfs_preorder(self) -> list[int]:
        out, stack = [], [0]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(self.children[x]))
        return out

    def bfs_order(self) -> list[int]:
        out, dq = [], deque([0])
        while dq:
            x = dq.popleft()
            out.append(x)
            dq.extend(self.children[x])
        return out

    def leaves(self) -> list[int]:
        """Leaves from left to right."""
        return [x for x in self.dfs_preorder() if self.is_leaf(x)]

    def is_binary(self) -> bool:
        return all(len(cs) <= 2 for cs in self.children)


class _TreeBuilder:
    def __init__(self):
        self.children: list[list[int]] = [[]]

    def add(self, parent: int) -> int:
        self.children.append([])
        self.children[parent].append(len(self.children) - 1)
        return len(self.children) - 1

    def build(self) -> Tree:
        return Tree(self.children)


def complete_binary_tree(height: int) -> Tree:
    b = _TreeBuilder()
    frontier = [0]
    for _ in range(height):
        frontier = [b.add(x) for x in frontier for _ in range(2)]
    return b.build()


def _graft(b: _TreeBuilder, at: int, tree: Tree) -> dict[int, int]:
    """Copy ``tree`` below node ``at`` (its root becomes ``at``); return the id map."""
    ids = {0: at}
    for x in tree.bfs_order():
        for c in tree.children[x]:
            ids[c] = b.add(ids[x])
    return ids


def single_child_root_tree(height: int) -> Tree:
    """Root with one child that roots a complete binary tree of height ``height - 1``."""
    if height < 1:
        raise LayoutError("a single-child root needs height >= 1")
    b = _TreeBuilder()
    child = b.add(0)
    _graft(b, child, complete_binary_tree(height - 1))
    return b.build()


def subdivide_tree(tree: Tree) -> Tree:
    """Insert one node into every tree edge."""
    b = _TreeBuilder()
    ids = {0: 0}
    for x in tree.bfs_order():
        for c in tree.children[x]:
            mid = b.add(ids[x])
            ids[c] = b.add(mid)
    return b.build()


def append_leaf_children(tree: Tree) -> Tree:
    b = _TreeBuilder()
    ids = _graft(b, 0, tree)
    for x in tree.leaves():
        b.add(ids[x])
    return b.build()


def merge_roots(trees: Sequence[Tree]) -> tuple[Tree, list[dict[int, int]]]:
    """Identify the roots of several trees; return the merged tree and per-tree id maps."""
    b = _TreeBuilder()
    maps = [_graft(b, 0, t) for t in trees]
    return b.build(), maps


# --- tree-layouts -----------------------------------------------------------------------


@dataclass
class TreeLayout:
    tree: Tree
    bags: dict  # node -> tuple of host vertices in bag order
    s_of: dict = field(default_factory=dict)
    q_of: dict = field(default_factory=dict)
    k_of: dict = field(default_factory=dict)  # (parent, child) -> count
    coloring: Optional[dict] = None  # (parent, child) -> "blue" | "red"

    def bag(self, x: int) -> tuple:
        return tuple(self.bags.get(x, ()))

    def S(self, x: int) -> int:
        return self.s_of.get(x, 0)

    def Q(self, x: int) -> int:
        return self.q_of.get(x, 0)

    def K(self, e: tuple[int, int]) -> int:
        return self.k_of.get(e, 0)


@dataclass
class TreeValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __len__(self) -> int:
        return len(self.issues)

    def to_dict(self, limit: Optional[int] = None) -> dict:
        shown = self.issues if limit is None else self.issues[:limit]
        return {"valid": self.ok, "issue_count": len(self.issues), "issues": list(shown)}


def _owner_and_rank(host: Graph, tl: TreeLayout, report: Optional[TreeValidationReport] = None):
    owner = [-1] * host.n
    rank = [-1] * host.n
    for x in range(tl.tree.size):
        for i, v in enumerate(tl.bag(x)):
            if not 0 <= v < host.n:
                if report is not None:
                    report.issues.append(f"bag {x} holds vertex {v} outside the host")
                continue
            if owner[v] != -1:
                if report is not None:
                    report.issues.append(f"vertex {v} lies in bags {owner[v]} and {x}")
                continue
            owner[v] = x
            rank[v] = i
    return owner, rank


def _split_edges(host: Graph, tl: TreeLayout, owner, report=None):
    """Intra-bag edges per node and inter-bag edges per tree edge ``(parent, child)``."""
    parent = tl.tree.parent
    intra: dict[int, list[Edge]] = {}
    inter: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u, v in host.edges:
        x, y = owner[u], owner[v]
        if x == -1 or y == -1:
            continue
        if x == y:
            intra.setdefault(x, []).append((u, v))
        elif parent[y] == x:
            inter.setdefault((x, y), []).append((u, v))
        elif parent[x] == y:
            inter.setdefault((y, x), []).append((v, u))
        elif report is not None:
            report.issues.append(f"edge ({u}, {v}) joins bags {x} and {y}, which are not adjacent in the tree")
    return intra, inter


def _intra_count(bag: Sequence[int], edges: list[Edge], kind: str) -> int:
    """Fewest pages of ``kind`` for intra-bag edges under the bag order."""
    local = {v: i for i, v in enumerate(bag)}
    les = [norm_edge(local[u], local[v]) for u, v in edges]
    order = VertexOrder(range(len(bag)))
    if kind == QUEUE:
        return max(rainbow_levels(order, les), default=0)
    g = Graph(len(bag), les)
    s = 1
    while fixed_order_layout(g, order, s, 0) is None:
        s += 1
    return s


def _inter_chains(pairs: list[tuple[int, int]], rank) -> list[list[int]]:
    pts = [(rank[a], rank[b]) for a, b in pairs]
    return min_chain_cover(pts)


def validate_tree_layout(host: Graph, tl: TreeLayout, simple: bool = False) -> TreeValidationReport:
    """Check the partition property and that declared S, Q, K budgets suffice for the bag orders.

    Declared values are upper bounds: a defect is reported when the actual
    requirement under the given bag orders exceeds them. With ``simple`` the
    extra rules for simple tree-layouts are checked too.
    """
    report = TreeValidationReport()
    tree = tl.tree
    owner, rank = _owner_and_rank(host, tl, report)
    missing = [v for v in range(host.n) if owner[v] == -1]
    if missing:
        report.issues.append(f"vertices {missing[:10]} lie in no bag")
    intra, inter = _split_edges(host, tl, owner, report)
    for x in range(tree.size):
        s, q = tl.S(x), tl.Q(x)
        if s > 0 and q > 0:
            report.issues.append(f"bag {x} declares both stacks and queues")
        es = intra.get(x, [])
        if es:
            if s > 0:
                need = _intra_count(tl.bag(x), es, STACK)
                if need > s:
                    report.issues.append(f"bag {x} needs {need} stacks, declares S = {s}")
            elif q > 0:
                need = _intra_count(tl.bag(x), es, QUEUE)
                if need > q:
                    report.issues.append(f"bag {x} needs {need} queues, declares Q = {q}")
            else:
                report.issues.append(f"bag {x} has intra-bag edges but S = Q = 0")
        if simple:
            if not tree.is_leaf(x) and (es or s or q):
                report.issues.append(f"non-leaf bag {x} is not independent with S = Q = 0")
            if tree.is_leaf(x) and (s, q) not in ((1, 0), (0, 1)):
                report.issues.append(f"leaf bag {x} declares S = {s}, Q = {q} instead of a single page")
    for e in tree.edges():
        pairs = inter.get(e, [])
        k = tl.K(e)
        if pairs:
            need = len(_inter_chains(pairs, rank))
            if need > k:
                report.issues.append(f"tree edge {e} needs K = {need}, declares {k}")
        if simple and k != 1:
            report.issues.append(f"tree edge {e} declares K = {k}, simple layouts need 1")
    return report


# --- assembly into a mixed layout --------------------------------------------------------


def _check_node_order(tl: TreeLayout, node_order: Sequence[int]) -> dict[int, int]:
    tree = tl.tree
    if sorted(node_order) != list(range(tree.size)):
        raise LayoutError("node order is not a permutation of the tree nodes")
    npos = {x: i for i, x in enumerate(node_order)}
    if tl.coloring is None or any(e not in tl.coloring for e in tree.edges()):
        raise LayoutError("every tree edge needs a colour")
    blue = [e for e in tree.edges() if tl.coloring[e] == BLUE]
    red = [e for e in tree.edges() if tl.coloring[e] == RED]
    if len(blue) + len(red) != len(tree.edges()):
        raise LayoutError("tree edge colours must be 'blue' or 'red'")
    tg = Graph(tree.size, tree.edges())
    check = LinearLayout(tg, node_order, [Page(STACK, blue), Page(QUEUE, red)])
    if not validate_layout(check).ok:
        raise LayoutError("blue tree edges must form a stack and red ones a queue under the node order")
    return npos


def lambda_values(tl: TreeLayout, node_order: Sequence[int]) -> tuple[int, int]:
    """Page counts guaranteed by assembling ``tl`` along ``node_order``.

    lambda_s = max_x S(x) + sum of K over blue tree edges at x.
    lambda_q = max_x Q(x) + max over y <= x of the K-sum of red edges (y, z) with x <= z.
    """
    npos = _check_node_order(tl, node_order)
    tree = tl.tree
    blue_at = [0] * tree.size
    red_out: dict[int, list[tuple[int, int]]] = {}
    for e in tree.edges():
        k = tl.K(e)
        if tl.coloring[e] == BLUE:
            blue_at[e[0]] += k
            blue_at[e[1]] += k
        else:
            y, z = sorted(e, key=npos.get)
            red_out.setdefault(y, []).append((npos[z], k))
    lam_s = max(tl.S(x) + blue_at[x] for x in range(tree.size))
    lam_q = 0
    for x in range(tree.size):
        px = npos[x]
        best = 0
        for y, outs in red_out.items():
            if npos[y] <= px:
                best = max(best, sum(k for pz, k in outs if pz >= px))
        lam_q = max(lam_q, tl.Q(x) + best)
    return lam_s, lam_q


def bag_orientation(tl: TreeLayout, node_order: Sequence[int]) -> dict[int, bool]:
    """Whether each bag is used reversed: flips across every blue tree edge, from the root down."""
    npos = {x: i for i, x in enumerate(node_order)}
    tree = tl.tree
    for x in range(1, tree.size):
        if npos[tree.parent[x]] > npos[x]:
            raise LayoutError("assembly supports node orders in which every parent precedes its children")
    rev = {0: False}
    for x in tree.bfs_order():
        for c in tree.children[x]:
            rev[c] = rev[x] ^ (tl.coloring[(x, c)] == BLUE)
    return rev


def tree_layout_to_mixed(tl: TreeLayout, node_order: Sequence[int], host: Graph) -> LinearLayout:
    """Concatenate oriented bags along ``node_order`` and page the edges.

    Returns a valid layout of ``host`` with at most lambda_s stacks and
    lambda_q queues; the root bag keeps its order.
    """
    lam_s, lam_q = lambda_values(tl, node_order)
    report = validate_tree_layout(host, tl)
    if not report.ok:
        raise LayoutError(f"tree-layout is invalid: {report.issues[0]}")
    tree = tl.tree
    rev = bag_orientation(tl, node_order)
    npos = {x: i for i, x in enumerate(node_order)}
    order: list[int] = []
    for x in node_order:
        bag = list(tl.bag(x))
        order += bag[::-1] if rev[x] else bag
    owner, rank = _owner_and_rank(host, tl)
    intra, inter = _split_edges(host, tl, owner)

    stack_units_at: dict[int, list[list[Edge]]] = {}
    queue_units_at: dict[int, list[list[Edge]]] = {}
    for x, es in intra.items():
        bag = tl.bag(x)
        local = {v: i for i, v in enumerate(bag)}
        les = [norm_edge(local[u], local[v]) for u, v in es]
        back = {norm_edge(local[u], local[v]): norm_edge(u, v) for u, v in es}
        if tl.S(x) > 0:
            lay = fixed_order_layout(Graph(len(bag), les), range(len(bag)), tl.S(x), 0)
            stack_units_at[x] = [[back[e] for e in p.edges] for p in lay.pages if p.edges]
        else:
            levels = rainbow_levels(VertexOrder(range(len(bag))), les)
            units: dict[int, list[Edge]] = {}
            for e, lv in zip(les, levels):
                units.setdefault(lv, []).append(back[e])
            queue_units_at[x] = [units[k] for k in sorted(units)]
    edge_units: dict[tuple[int, int], list[list[Edge]]] = {}
    for e, pairs in inter.items():
        chains = _inter_chains(pairs, rank)
        edge_units[e] = [[norm_edge(*pairs[i]) for i in ch] for ch in chains]

    # stacks: colours at a node must differ; greedy from the root down
    stack_pages: dict[int, list[Edge]] = {}
    taken_by_parent: dict[int, set] = {0: set()}
    for x in node_order:
        used = set(taken_by_parent.get(x, set()))
        todo = list(stack_units_at.get(x, []))
        child_slots = []
        for c in tree.children[x]:
            if tl.coloring[(x, c)] == BLUE:
                for unit in edge_units.get((x, c), []):
                    todo.append(unit)
                    child_slots.append(c)
        n_intra = len(stack_units_at.get(x, []))
        colour = 0
        for i, unit in enumerate(todo):
            while colour in used:
                colour += 1
            used.add(colour)
            stack_pages.setdefault(colour, []).extend(unit)
            if i >= n_intra:
                taken_by_parent.setdefault(child_slots[i - n_intra], set()).add(colour)
        for c in tree.children[x]:
            taken_by_parent.setdefault(c, set())

    # queues: each node's red out-units take colours 0.. by farthest child first;
    # intra queues start above every colour spanning the node
    queue_pages: dict[int, list[Edge]] = {}
    span: list[tuple[int, int, int]] = []  # (pos y, pos z, colours used by units reaching z or further)
    for y in node_order:
        outs = [c for c in tree.children[y] if tl.coloring[(y, c)] == RED]
        outs.sort(key=lambda c: -npos[c])
        colour = 0
        for z in outs:
            for unit in edge_units.get((y, z), []):
                queue_pages.setdefault(colour, []).extend(unit)
                colour += 1
            span.append((npos[y], npos[z], colour))
    for x, units in queue_units_at.items():
        px = npos[x]
        base = max((c for py, pz, c in span if py <= px <= pz), default=0)
        for i, unit in enumerate(units):
            queue_pages.setdefault(base + i, []).extend(unit)

    pages = [Page(STACK, stack_pages[c]) for c in sorted(stack_pages)]
    pages += [Page(QUEUE, queue_pages[c]) for c in sorted(queue_pages)]
    out = LinearLayout(host, order, pages)
    if len(stack_pages) > lam_s or len(queue_pages) > lam_q:
        raise LayoutError(
            f"assembly used ({len(stack_pages)}, {len(queue_pages)}) pages, above lambda = ({lam_s}, {lam_q})"
        )
    rep = validate_layout(out)
    if not rep.ok:
        raise LayoutError(f"assembled layout is invalid ({len(rep)} defects)")
    return out


# --- subdivisions ------------------------------------------------------------------------


@dataclass
class SubdivisionRecord:
    host: Graph
    original: Graph
    paths: dict  # original edge -> tuple path from edge[0] to edge[1]

    def division_count(self, e: Edge) -> int:
        return len(self.paths[norm_edge(*e)]) - 2

    def division_counts(self) -> dict:
        return {e: len(p) - 2 for e, p in self.paths.items()}

    def check(self) -> None:
        if set(self.paths) != set(self.original.edges):
            raise LayoutError("subdivision paths do not match the original edge set")
        if self.host.n < self.original.n:
            raise LayoutError("host has fewer vertices than the original graph")
        seen: dict[int, Edge] = {}
        path_edges = set()
        for e, p in self.paths.items():
            if len(p) < 2 or p[0] != e[0] or p[-1] != e[1]:
                raise LayoutError(f"path of {e} does not run between its endpoints")
            for w in p[1:-1]:
                if w < self.original.n:
                    raise LayoutError(f"path of {e} passes through original vertex {w}")
                if w in seen:
                    raise LayoutError(f"division vertex {w} is shared by {seen[w]} and {e}")
                seen[w] = e
            for a, b in zip(p, p[1:]):
                path_edges.add(norm_edge(a, b))
        if path_edges != self.host.edge_set:
            raise LayoutError("host edges differ from the union of the paths")

    def minor_map(self) -> MinorMap:
        """Split every path so the first endpoint takes the larger half of its division vertices."""
        branch = {v: {v} for v in range(self.original.n)}
        radius = 0
        for e, p in self.paths.items():
            inner = list(p[1:-1])
            take = (len(inner) + 1) // 2
            branch[e[0]].update(inner[:take])
            branch[e[1]].update(inner[take:])
            radius = max(radius, take)
        return MinorMap({v: frozenset(s) for v, s in branch.items()}, radius)


def contract_subdivision(rec: SubdivisionRecord) -> Graph:
    """Recover the original graph by walking every replacement path."""
    rec.check()
    edges = [norm_edge(p[0], p[-1]) for p in rec.paths.values()]
    return Graph(rec.original.n, edges, rec.original.bipartition)


class _Routing:
    """Accumulates division vertices, bag entries and paths while routing edges down a tree."""

    def __init__(self, layout: LinearLayout, tree: Tree):
        self.layout = layout
        self.tree = tree
        self.next_id = layout.graph.n
        self.bag_keys: dict[int, list[tuple[tuple, int]]] = {}
        self.host_edges: set[Edge] = set()
        self.paths: dict[Edge, list[int]] = {}
        self.leaf_pairs: dict[int, list[tuple[int, int, Edge]]] = {}  # leaf -> (u copy, v copy, edge)

    def new_vertex(self) -> int:
        self.next_id += 1
        return self.next_id - 1

    def route(self, page: Page, leaf: int) -> None:
        pos = self.layout.order.pos
        nodes = self.tree.path_from_root(leaf)[1:]
        sign = -1 if page.kind == STACK else 1
        for e in page.edges:
            u, v = e if pos(e[0]) < pos(e[1]) else (e[1], e[0])
            pu, pv = pos(u), pos(v)
            ucs, vcs = [], []
            for x in nodes:
                cu, cv = self.new_vertex(), self.new_vertex()
                # right-endpoint copies first, then left-endpoint copies
                self.bag_keys.setdefault(x, []).append(((pu, 1, sign * pv), cu))
                self.bag_keys.setdefault(x, []).append(((pv, 0, sign * pu), cv))
                ucs.append(cu)
                vcs.append(cv)
            path = [u] + ucs + vcs[::-1] + [v]
            for a, b in zip(path, path[1:]):
                self.host_edges.add(norm_edge(a, b))
            self.paths[e] = path
            if nodes:
                self.leaf_pairs.setdefault(leaf, []).append((ucs[-1], vcs[-1], e))

    def bags(self) -> dict[int, tuple[int, ...]]:
        out = {0: tuple(self.layout.order.order)}
        for x, items in self.bag_keys.items():
            out[x] = tuple(v for _, v in sorted(items))
        return out

    def record(self) -> SubdivisionRecord:
        g = self.layout.graph
        host = Graph(self.next_id, sorted(self.host_edges))
        paths = {}
        for e, p in self.paths.items():
            paths[e] = tuple(p if p[0] == e[0] else p[::-1])
        return SubdivisionRecord(host, g, paths)


def _ordered_pages(layout: LinearLayout, kind: str) -> list[Page]:
    return [p for p in layout.pages if p.kind == kind]


def subdivide_into_tree_layout(layout: LinearLayout, tree: Tree) -> tuple[SubdivisionRecord, TreeLayout]:
    """Subdivide a pure layout along a binary tree so that every page ends up inside one leaf bag.

    Page ``i`` goes to the ``i``-th leaf from the left. An edge routed to a
    leaf at depth ``d`` becomes a path of ``2d`` division vertices, one copy
    of each endpoint per bag on the way down; the two copies in the leaf are
    joined by an intra-bag edge. All bags share one sort key (endpoint
    position, right-endpoint copies first, then the other endpoint), which
    keeps every tree edge a single non-crossing set and every leaf a single
    page of the input kind.
    """
    kinds = {p.kind for p in layout.pages}
    if len(kinds) > 1:
        raise LayoutError("subdivide_into_tree_layout needs a pure stack or pure queue layout")
    if not tree.is_binary():
        raise LayoutError("tree must be binary")
    leaves = tree.leaves()
    if len(leaves) < len(layout.pages):
        raise LayoutError(f"tree has {len(leaves)} leaves for {len(layout.pages)} pages")
    if not validate_layout(layout).ok:
        raise LayoutError("input layout is invalid")
    kind = kinds.pop() if kinds else QUEUE
    r = _Routing(layout, tree)
    for page, leaf in zip(layout.pages, leaves):
        r.route(page, leaf)
    rec = r.record()
    s_of = {x: 1 for x in leaves} if kind == STACK else {}
    q_of = {x: 1 for x in leaves} if kind == QUEUE else {}
    tl = TreeLayout(tree, r.bags(), s_of, q_of, {e: 1 for e in tree.edges()})
    return rec, tl


def _subdivide_leaf_matchings(r: _Routing, leaf_to_child: dict[int, int]) -> dict[int, tuple[int, ...]]:
    """Subdivide every intra-bag edge of the given leaves once, into a new child bag.

    Division vertices are ordered by the positions of their two neighbours,
    so the left halves and the right halves each form a non-crossing set.
    """
    bags = r.bags()
    extra: dict[int, tuple[int, ...]] = {}
    for leaf, child in leaf_to_child.items():
        rank = {v: i for i, v in enumerate(bags.get(leaf, ()))}
        items = []
        for cu, cv, e in r.leaf_pairs.get(leaf, []):
            a, b = sorted((cu, cv), key=rank.get)
            w = r.new_vertex()
            items.append(((rank[a], rank[b]), w))
            r.host_edges.discard(norm_edge(cu, cv))
            r.host_edges.add(norm_edge(a, w))
            r.host_edges.add(norm_edge(w, b))
            path = r.paths[e]
            i = path.index(cu)
            j = path.index(cv)
            path.insert(max(i, j), w)
        extra[child] = tuple(w for _, w in sorted(items))
    return extra


def _page_counts(layout: LinearLayout) -> tuple[int, int, int]:
    s, q = layout.signature
    top = max(s, q)
    h = math.ceil(math.log2(top)) if top > 1 else 0
    return s, q, h


@dataclass
class PipelineResult:
    record: SubdivisionRecord
    layout: LinearLayout
    tree_layout: TreeLayout
    node_order: list
    h: int

    def __iter__(self):
        return iter((self.record, self.layout))


def mixed_to_3stack_detail(layout: LinearLayout) -> PipelineResult:
    if not validate_layout(layout).ok:
        raise LayoutError("input layout is invalid")
    s, q, h = _page_counts(layout)
    shape = single_child_root_tree(h + 1)
    parts = []
    if s:
        parts.append(("s", shape))
    if q:
        parts.append(("q", append_leaf_children(shape)))
    tree, maps = merge_roots([t for _, t in parts])
    r = _Routing(layout, tree)
    s_of, q_of, k_of = {}, {}, {e: 1 for e in tree.edges()}
    leaf_to_child = {}
    for (tag, _), ids in zip(parts, maps):
        leaves = [ids[x] for x in shape.leaves()]
        pages = _ordered_pages(layout, STACK if tag == "s" else QUEUE)
        for page, leaf in zip(pages, leaves):
            r.route(page, leaf)
        if tag == "s":
            s_of.update({x: 1 for x in leaves})
        else:
            for leaf in leaves:
                child = tree.children[leaf][0]
                leaf_to_child[leaf] = child
                k_of[(leaf, child)] = 2
    extra = _subdivide_leaf_matchings(r, leaf_to_child)
    bags = r.bags()
    bags.update(extra)
    tl = TreeLayout(tree, bags, s_of, q_of, k_of, {e: BLUE for e in tree.edges()})
    rec = r.record()
    order = tree.dfs_preorder()
    out = tree_layout_to_mixed(tl, order, rec.host)
    return PipelineResult(rec, out, tl, order, h)


def mixed_to_3stack_subdivision(layout: LinearLayout) -> tuple[SubdivisionRecord, LinearLayout]:
    """Subdivide an s-stack q-queue layout into a 3-stack layout.

    With ``h = ceil(log2 max(s, q))`` stack edges receive exactly ``2h+2``
    and queue edges exactly ``2h+3`` division vertices.
    """
    res = mixed_to_3stack_detail(layout)
    return res.record, res.layout


def level_order(tree: Tree, coloring: dict) -> list[int]:
    """Level by level: children with a blue parent edge in reversed parent order, then red ones in parent order."""
    out = [0]
    level = [0]
    while level:
        blue = [c for x in reversed(level) for c in tree.children[x] if coloring[(x, c)] == BLUE]
        red = [c for x in level for c in tree.children[x] if coloring[(x, c)] == RED]
        level = blue + red
        out += level
    return out


def mixed_to_1s1q_detail(layout: LinearLayout) -> PipelineResult:
    if not validate_layout(layout).ok:
        raise LayoutError("input layout is invalid")
    s, q, h = _page_counts(layout)
    shape = subdivide_tree(single_child_root_tree(h + 1))
    parts = []
    if s:
        parts.append(("s", shape))
    if q:
        parts.append(("q", append_leaf_children(shape)))
    tree, maps = merge_roots([t for _, t in parts])
    r = _Routing(layout, tree)
    s_of, q_of = {}, {}
    for (tag, t), ids in zip(parts, maps):
        leaves = [ids[x] for x in t.leaves()]
        pages = _ordered_pages(layout, STACK if tag == "s" else QUEUE)
        for page, leaf in zip(pages, leaves):
            r.route(page, leaf)
        (s_of if tag == "s" else q_of).update({x: 1 for x in leaves})
    coloring = {}
    for x in range(tree.size):
        kids = tree.children[x]
        if len(kids) == 2:
            coloring[(x, kids[0])] = BLUE
            coloring[(x, kids[1])] = RED
        elif len(kids) == 1:
            coloring[(x, kids[0])] = RED if tree.depth(x) <= 2 * h + 1 else BLUE
    tl = TreeLayout(tree, r.bags(), s_of, q_of, {e: 1 for e in tree.edges()}, coloring)
    rec = r.record()
    order = level_order(tree, coloring)
    out = tree_layout_to_mixed(tl, order, rec.host)
    return PipelineResult(rec, out, tl, order, h)


def mixed_to_1s1q_subdivision(layout: LinearLayout) -> tuple[SubdivisionRecord, LinearLayout]:
    """Subdivide an s-stack q-queue layout into a 1-stack 1-queue layout.

    Stack edges receive exactly ``4h+4`` and queue edges ``4h+6`` division vertices.
    """
    res = mixed_to_1s1q_detail(layout)
    return res.record, res.layout


def separated_1sq_detail(layout: LinearLayout) -> PipelineResult:
    g = layout.graph
    if g.bipartition is None or not is_separated(layout):
        raise LayoutError("input must be a separated layout of a bipartite graph")
    s, q = layout.signature
    if s != 1 or q < 1:
        raise LayoutError(f"input must have one stack and at least one queue, got {layout.signature}")
    if not validate_layout(layout).ok:
        raise LayoutError("input layout is invalid")
    h = math.ceil(math.log2(q)) if q > 1 else 0
    tree = complete_binary_tree(h)
    queue_pages = layout.queues()
    stack_edges = list(layout.stacks()[0].edges)
    q_graph = g.with_edges([e for p in queue_pages for e in p.edges])
    q_layout = LinearLayout(q_graph, layout.order, queue_pages)
    r = _Routing(q_layout, tree)
    for page, leaf in zip(queue_pages, tree.leaves()):
        r.route(page, leaf)
    coloring = {e: RED for e in tree.edges()}
    leaves = tree.leaves()
    tl = TreeLayout(tree, r.bags(), {}, {x: 1 for x in leaves}, {e: 1 for e in tree.edges()}, coloring)
    q_rec = r.record()
    # division vertices alternate sides along each path
    side_a = set(g.side_a())
    for p in q_rec.paths.values():
        start_a = p[0] in side_a
        for t, w in enumerate(p[1:-1], start=1):
            if (t % 2 == 0) == start_a:
                side_a.add(w)
    host_n = q_rec.host.n
    bip = (side_a, set(range(host_n)) - side_a)
    dq_host = Graph(host_n, q_rec.host.edges, bip)
    order = tree.bfs_order()
    dq_layout = tree_layout_to_mixed(tl, order, dq_host)
    sep = separate(dq_layout, a_side_first=a_first(layout))
    d_host = Graph(host_n, list(dq_host.edges) + stack_edges, bip)
    out = LinearLayout(d_host, sep.order, [Page(STACK, stack_edges)] + list(sep.pages))
    paths = dict(q_rec.paths)
    for e in stack_edges:
        paths[e] = (e[0], e[1])
    rec = SubdivisionRecord(d_host, g, paths)
    return PipelineResult(rec, out, tl, order, h)


def separated_1sq_to_1s6q_subdivision(layout: LinearLayout) -> tuple[SubdivisionRecord, LinearLayout]:
    """Subdivide queue edges of a separated 1-stack q-queue layout ``2*ceil(log2 q)`` times.

    The result is a separated layout with one stack and at most six queues;
    stack edges are not subdivided.
    """
    res = separated_1sq_detail(layout)
    return res.record, res.layout


# --- one division vertex per edge ---------------------------------------------------------


def subdivide_once(layout: LinearLayout) -> tuple[SubdivisionRecord, LinearLayout]:
    """Subdivide each edge once; originals keep their order and are followed by the division vertices.

    Division vertex ``w`` of edge ``(u, v)``, ``u`` left of ``v``, is placed by
    ``(pos u, pos v)``. All halves ``(u, w)`` share one queue and the halves
    ``(w, v)`` of input queue ``i`` form queue ``i + 1``.
    """
    if any(p.kind != QUEUE for p in layout.pages):
        raise LayoutError("subdivide_once needs a pure queue layout")
    if not validate_layout(layout).ok:
        raise LayoutError("input layout is invalid")
    g = layout.graph
    pos = layout.order.pos
    items = []
    for i, page in enumerate(layout.pages):
        for e in page.edges:
            u, v = e if pos(e[0]) < pos(e[1]) else (e[1], e[0])
            items.append(((pos(u), pos(v)), u, v, e, i))
    items.sort()
    nxt = g.n
    left, right = [], [[] for _ in layout.pages]
    paths = {}
    division = []
    for _, u, v, e, i in items:
        w = nxt
        nxt += 1
        division.append(w)
        left.append(norm_edge(u, w))
        right[i].append(norm_edge(w, v))
        paths[e] = (e[0], w, e[1])
    edges = left + [e for r in right for e in r]
    host = Graph(nxt, edges, (range(g.n), range(g.n, nxt)))
    order = list(layout.order.order) + division
    pages = [Page(QUEUE, left)] + [Page(QUEUE, r) for r in right]
    out = LinearLayout(host, order, [p for p in pages if p.edges])
    return SubdivisionRecord(host, g, paths), out


def subdivide_once_separated(layout: LinearLayout) -> LinearLayout:
    """Separated layout (originals, then division vertices) with at most q+1 queues."""
    return subdivide_once(layout)[1]
