"""JSON encoding of graphs, layouts, subdivision records and tree-layouts.

Written documents carry a ``"type"`` field; readers guess it from the keys
when it is missing. Output uses sorted keys and a fixed indent so equal
objects always serialise to equal bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .core import Edge, Graph, LayoutError, LinearLayout, Page, norm_edge
from .treelayout import SubdivisionRecord, Tree, TreeLayout


class FormatError(LayoutError):
    """Malformed or inconsistent JSON input."""


def _edge_key(e: Edge) -> str:
    return f"{e[0]},{e[1]}"


def _parse_edge_key(key: str) -> Edge:
    try:
        u, v = (int(t) for t in key.split(","))
    except ValueError:
        raise FormatError(f"edge key {key!r} is not of the form 'u,v'") from None
    return norm_edge(u, v)


def _pair_list(raw, what: str) -> list[Edge]:
    if not isinstance(raw, list):
        raise FormatError(f"{what} must be a list of [u, v] pairs")
    out = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) for x in item)):
            raise FormatError(f"{what} entry {item!r} is not an integer pair")
        out.append((item[0], item[1]))
    return out


def _require(doc: dict, key: str, what: str):
    if not isinstance(doc, dict):
        raise FormatError(f"{what} must be a JSON object")
    if key not in doc:
        raise FormatError(f"{what} lacks field {key!r}")
    return doc[key]


# --- graphs ----------------------------------------------------------------------------


def graph_to_dict(g: Graph) -> dict:
    doc: dict[str, Any] = {"type": "graph", "n": g.n, "edges": [list(e) for e in g.edges]}
    if g.bipartition is not None:
        doc["bipartition"] = {"A": sorted(g.bipartition[0]), "B": sorted(g.bipartition[1])}
    return doc


def graph_from_dict(doc: dict, allow_empty: bool = False) -> Graph:
    n = _require(doc, "n", "graph")
    if not isinstance(n, int):
        raise FormatError("graph field 'n' must be an integer")
    edges = _pair_list(_require(doc, "edges", "graph"), "graph edges")
    normed = [norm_edge(*e) for e in edges]
    if len(set(normed)) != len(normed):
        dup = sorted({e for e in normed if normed.count(e) > 1})
        raise FormatError(f"duplicate edges {dup[:5]}")
    if not edges and not allow_empty:
        raise FormatError("a graph needs at least one edge")
    bip = doc.get("bipartition")
    if isinstance(bip, dict):
        if set(bip) != {"A", "B"}:
            raise FormatError("bipartition object needs exactly the keys 'A' and 'B'")
        bip = (bip["A"], bip["B"])
    elif bip is not None:
        if not (isinstance(bip, list) and len(bip) == 2):
            raise FormatError("bipartition must be {'A': [...], 'B': [...]} or a pair of vertex lists")
        bip = (bip[0], bip[1])
    try:
        return Graph(n, edges, bip)
    except LayoutError as ex:
        raise FormatError(str(ex)) from None


# --- layouts ---------------------------------------------------------------------------


def layout_to_dict(layout: LinearLayout) -> dict:
    return {
        "type": "layout",
        "graph": graph_to_dict(layout.graph),
        "order": list(layout.order.order),
        "pages": [{"kind": p.kind, "edges": [list(e) for e in p.edges]} for p in layout.pages],
    }


def layout_from_dict(doc: dict, graph: Graph | None = None) -> LinearLayout:
    """Read a layout; the graph comes from the document unless given explicitly."""
    if graph is None:
        graph = graph_from_dict(_require(doc, "graph", "layout"))
    order = _require(doc, "order", "layout")
    if not (isinstance(order, list) and all(isinstance(v, int) for v in order)):
        raise FormatError("layout order must be a list of vertex ids")
    pages = []
    for i, raw in enumerate(_require(doc, "pages", "layout")):
        kind = _require(raw, "kind", f"page {i}")
        edges = _pair_list(_require(raw, "edges", f"page {i}"), f"page {i} edges")
        try:
            pages.append(Page(kind, edges))
        except LayoutError as ex:
            raise FormatError(f"page {i}: {ex}") from None
    try:
        return LinearLayout(graph, order, pages)
    except LayoutError as ex:
        raise FormatError(str(ex)) from None


# --- subdivision records ---------------------------------------------------------------


def record_to_dict(rec: SubdivisionRecord) -> dict:
    return {
        "type": "subdivision",
        "original": graph_to_dict(rec.original),
        "host": graph_to_dict(rec.host),
        "paths": {_edge_key(e): list(p) for e, p in sorted(rec.paths.items())},
    }


def record_from_dict(doc: dict) -> SubdivisionRecord:
    original = graph_from_dict(_require(doc, "original", "subdivision record"))
    host = graph_from_dict(_require(doc, "host", "subdivision record"))
    raw = _require(doc, "paths", "subdivision record")
    if not isinstance(raw, dict):
        raise FormatError("paths must map 'u,v' keys to vertex lists")
    paths = {}
    for key, p in raw.items():
        e = _parse_edge_key(key)
        if e in paths:
            raise FormatError(f"edge {e} listed twice in paths")
        if not (isinstance(p, list) and all(isinstance(v, int) for v in p)):
            raise FormatError(f"path of {key} must be a list of vertex ids")
        paths[e] = tuple(p)
    rec = SubdivisionRecord(host, original, paths)
    try:
        rec.check()
    except LayoutError as ex:
        raise FormatError(str(ex)) from None
    return rec


# --- tree-layouts ----------------------------------------------------------------------


def tree_layout_to_dict(tl: TreeLayout) -> dict:
    doc: dict[str, Any] = {
        "type": "tree-layout",
        "children": [list(c) for c in tl.tree.children],
        "bags": {str(x): list(b) for x, b in sorted(tl.bags.items())},
        "S": {str(x): v for x, v in sorted(tl.s_of.items())},
        "Q": {str(x): v for x, v in sorted(tl.q_of.items())},
        "K": {_edge_key(e): v for e, v in sorted(tl.k_of.items())},
    }
    if tl.coloring is not None:
        doc["coloring"] = {_edge_key(e): c for e, c in sorted(tl.coloring.items())}
    return doc


def _int_keyed(raw, what: str) -> dict:
    if not isinstance(raw, dict):
        raise FormatError(f"{what} must be an object keyed by node id")
    try:
        return {int(k): v for k, v in raw.items()}
    except ValueError:
        raise FormatError(f"{what} has a non-integer key") from None


def _tree_edge_keyed(raw, what: str) -> dict:
    if not isinstance(raw, dict):
        raise FormatError(f"{what} must be an object keyed by 'parent,child'")
    out = {}
    for key, v in raw.items():
        try:
            p, c = (int(t) for t in key.split(","))
        except ValueError:
            raise FormatError(f"{what} key {key!r} is not 'parent,child'") from None
        out[(p, c)] = v
    return out


def tree_layout_from_dict(doc: dict) -> TreeLayout:
    children = _require(doc, "children", "tree-layout")
    try:
        tree = Tree([tuple(c) for c in children])
    except (LayoutError, TypeError) as ex:
        raise FormatError(f"bad tree: {ex}") from None
    bags = {x: tuple(b) for x, b in _int_keyed(_require(doc, "bags", "tree-layout"), "bags").items()}
    coloring = doc.get("coloring")
    return TreeLayout(
        tree,
        bags,
        _int_keyed(doc.get("S", {}), "S"),
        _int_keyed(doc.get("Q", {}), "Q"),
        _tree_edge_keyed(doc.get("K", {}), "K"),
        None if coloring is None else _tree_edge_keyed(coloring, "coloring"),
    )


# --- files -----------------------------------------------------------------------------

_DECODERS = {
    "graph": graph_from_dict,
    "layout": layout_from_dict,
    "subdivision": record_from_dict,
    "tree-layout": tree_layout_from_dict,
}

_ENCODERS = [
    (Graph, graph_to_dict),
    (LinearLayout, layout_to_dict),
    (SubdivisionRecord, record_to_dict),
    (TreeLayout, tree_layout_to_dict),
]


def to_dict(obj) -> dict:
    for cls, enc in _ENCODERS:
        if isinstance(obj, cls):
            return enc(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _guess_type(doc: dict) -> str:
    for key, kind in (("paths", "subdivision"), ("children", "tree-layout"), ("pages", "layout"), ("edges", "graph")):
        if key in doc:
            return kind
    raise FormatError("cannot tell what kind of document this is")


def from_dict(doc: dict):
    """Decode any document; the ``type`` field is optional and guessed from the keys when absent."""
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    kind = doc.get("type") or _guess_type(doc)
    if kind not in _DECODERS:
        raise FormatError(f"unknown document type {kind!r}")
    return _DECODERS[kind](doc)


def dumps(obj) -> str:
    return json.dumps(to_dict(obj), sort_keys=True, indent=2) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as ex:
        raise FormatError(f"invalid JSON: {ex}") from None
    return from_dict(doc)


def save(obj, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def load_layout(path: Union[str, Path], graph: Graph | None = None) -> LinearLayout:
    """Read a layout file; ``graph`` is required when the file does not embed one."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as ex:
        raise FormatError(f"invalid JSON: {ex}") from None
    if not isinstance(doc, dict) or "pages" not in doc:
        raise FormatError(f"{path} is not a layout document")
    if graph is None and "graph" not in doc:
        raise FormatError(f"{path} does not embed its graph; supply the graph separately")
    if graph is not None and "graph" in doc and graph_from_dict(doc["graph"]) != graph:
        raise FormatError(f"{path} embeds a graph that differs from the one supplied")
    return layout_from_dict(doc, graph)


def load(path: Union[str, Path]):
    return loads(Path(path).read_text(encoding="utf-8"))
