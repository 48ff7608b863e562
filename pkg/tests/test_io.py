import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linlay import io as lio
from linlay.core import Graph
from linlay.generators import complete_bipartite, random_layout_instance
from linlay.treelayout import complete_binary_tree, mixed_to_1s1q_detail, subdivide_into_tree_layout


def test_graph_document_shape():
    doc = json.loads(lio.dumps(complete_bipartite(1, 2)))
    assert doc == {"type": "graph", "n": 3, "edges": [[0, 1], [0, 2]], "bipartition": {"A": [0], "B": [1, 2]}}


def test_graph_reader_accepts_untyped_and_pair_bipartition():
    g = lio.loads('{"n": 3, "edges": [[2, 0], [1, 2]], "bipartition": [[2], [0, 1]]}')
    assert g == Graph(3, [(0, 2), (1, 2)], ([2], [0, 1]))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"n": 3, "edges": []}', "at least one edge"),
        ('{"n": 3, "edges": [[0, 1], [1, 0]]}', "duplicate"),
        ('{"n": 3, "edges": [[0, 0]]}', "loop"),
        ('{"n": 3, "edges": [[0, 5]]}', "range"),
        ('{"n": 3, "edges": [[0, 1]], "bipartition": {"A": [0, 1], "B": [2]}}', "side"),
        ('{"edges": [[0, 1]]}', "'n'"),
        ('{"n": 2, "edges": [[0, 1, 2]]}', "pair"),
        ("[1, 2]", "object"),
        ("{nope", "invalid JSON"),
        ('{"type": "mystery"}', "unknown"),
    ],
)
def test_malformed_graphs(text, fragment):
    with pytest.raises(lio.FormatError, match=fragment):
        lio.loads(text)


def test_layout_needs_a_graph(tmp_path):
    lay = random_layout_instance(1, 1, 3, 3, seed=1)
    doc = lio.layout_to_dict(lay)
    bare = {k: doc[k] for k in ("order", "pages")}
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(bare))
    with pytest.raises(lio.FormatError, match="embed"):
        lio.load_layout(path)
    assert lio.load_layout(path, lay.graph) == lay
    other = random_layout_instance(1, 1, 3, 3, seed=2).graph
    full = tmp_path / "full.json"
    lio.save(lay, full)
    with pytest.raises(lio.FormatError, match="differs"):
        lio.load_layout(full, other)


def test_layout_with_bad_page_kind():
    doc = lio.layout_to_dict(random_layout_instance(1, 1, 3, 3, seed=1))
    doc["pages"][0]["kind"] = "deque"
    with pytest.raises(lio.FormatError, match="page 0"):
        lio.from_dict(doc)


def test_record_reader_runs_checks():
    lay = random_layout_instance(1, 1, 3, 3, seed=4)
    rec = mixed_to_1s1q_detail(lay).record
    doc = lio.record_to_dict(rec)
    assert lio.from_dict(doc) == rec
    key = next(iter(doc["paths"]))
    doc["paths"][key] = doc["paths"][key][::-1]
    with pytest.raises(lio.FormatError):
        lio.from_dict(doc)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.booleans(), st.integers(0, 10_000))
def test_round_trips(s, q, separated, seed):
    if s + q == 0:
        s = 1
    lay = random_layout_instance(s, q, 4, 4, separated=separated, seed=seed)
    assert lio.loads(lio.dumps(lay.graph)) == lay.graph
    assert lio.loads(lio.dumps(lay)) == lay
    res = mixed_to_1s1q_detail(lay)
    assert lio.loads(lio.dumps(res.record)) == res.record
    assert lio.loads(lio.dumps(res.tree_layout)) == res.tree_layout
    assert lio.dumps(lio.loads(lio.dumps(lay))) == lio.dumps(lay)


def test_tree_layout_round_trip_without_colouring(tmp_path):
    lay = random_layout_instance(0, 4, 4, 4, density=0.8, seed=3)
    _, tl = subdivide_into_tree_layout(lay, complete_binary_tree(2))
    tl.coloring = None
    path = tmp_path / "tl.json"
    lio.save(tl, path)
    assert lio.load(path) == tl


def test_unknown_object():
    with pytest.raises(TypeError):
        lio.dumps(42)
