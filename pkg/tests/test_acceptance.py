"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import os
import random
import subprocess
import sys
import time
from pathlib import Path

from linlay.core import Graph, is_separated, side_orders, validate_layout
from linlay.generators import (
    challenge_graph,
    challenge_permutation,
    challenge_queue_layout,
    complete_bipartite,
    complete_graph,
    random_layout_instance,
)
from linlay.solver import PageBudget, feasible, mixed_number, queue_number, separated_queue_number, stack_number
from linlay.transforms import (
    MinorMap,
    RiffleSpec,
    build_shallow_graph_H,
    check_contraction_bound,
    contract,
    riffle_split,
    riffle_split_bipartite,
    separate,
    theorem5_transform,
)
from linlay.treelayout import (
    contract_subdivision,
    mixed_to_1s1q_subdivision,
    mixed_to_3stack_subdivision,
    separated_1sq_to_1s6q_subdivision,
)
from oracles import bipartition_of, corpus, naive_feasible


def ceil_log2(x):
    return math.ceil(math.log2(x)) if x > 1 else 0


def instance_with_signature(s, q, seed, separated=False, sizes=((4, 7),), tries=400):
    """Random layout whose signature is exactly (s, q); side sizes are drawn from the given ranges in turn."""
    rng = random.Random(seed)
    for t in range(tries):
        lo, hi = sizes[min(t * len(sizes) // tries, len(sizes) - 1)]
        n_a, n_b = rng.randint(lo, hi), rng.randint(lo, hi)
        lay = random_layout_instance(s, q, n_a, n_b, density=0.6, separated=separated,
                                     seed=rng.randrange(2**31), bipartite=separated or None)
        if lay.signature == (s, q):
            return lay
    raise AssertionError(f"no ({s}, {q}) instance for seed {seed}")


def test_k6_layout_numbers(criterion):
    with criterion(1, "K6: sn=3, qn=3, mn=2; (1,1) feasible, (2,0) and (0,2) infeasible") as c:
        start = time.perf_counter()
        k6 = complete_graph(6)
        one_one = feasible(k6, PageBudget(1, 1))
        assert one_one.feasible and validate_layout(one_one.witness).ok
        assert not feasible(k6, PageBudget(2, 0)).feasible
        assert not feasible(k6, PageBudget(0, 2)).feasible
        values = (stack_number(k6), queue_number(k6), mixed_number(k6))
        assert values == (3, 3, 2), values
        took = time.perf_counter() - start
        assert took < 60
        c.detail = f"sn, qn, mn = {values}"


def test_k33_separated_facts(criterion):
    with criterion(2, "K3,3 separated: (1,1) feasible, (0,2) and (2,0) infeasible, sqn=3") as c:
        start = time.perf_counter()
        k33 = complete_bipartite(3, 3)
        w = feasible(k33, PageBudget(1, 1, separated=True))
        assert w.feasible and is_separated(w.witness) and validate_layout(w.witness).ok
        assert not feasible(k33, PageBudget(0, 2, separated=True)).feasible
        assert not feasible(k33, PageBudget(2, 0, separated=True)).feasible
        sqn = separated_queue_number(k33)
        assert sqn == 3
        assert time.perf_counter() - start < 30
        c.detail = f"sqn = {sqn}"


BUDGETS = ((1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2))


def test_solver_matches_enumerator(criterion):
    with criterion(3, "200-graph corpus: solver agrees with the naive enumerator") as c:
        graphs = corpus()
        assert len(graphs) == 200 and all(n <= 7 for n, _ in graphs)
        mismatches = []
        checks = 0
        for n, edges in graphs:
            g = Graph(n, edges)
            for s, q in BUDGETS:
                checks += 1
                if feasible(g, PageBudget(s, q)).feasible != naive_feasible(n, edges, s, q):
                    mismatches.append((n, edges, s, q))
            bip = bipartition_of(n, edges)
            if bip is not None and bip[0] and bip[1]:
                gb = Graph(n, edges, bip)
                for s, q in ((1, 0), (0, 1), (1, 1), (0, 2)):
                    checks += 1
                    if feasible(gb, PageBudget(s, q, True)).feasible != naive_feasible(n, edges, s, q, side_a=bip[0]):
                        mismatches.append((n, edges, s, q, "separated"))
        assert not mismatches, mismatches[:3]
        c.detail = f"{checks} decisions compared"


def test_prefix_reversal_suite(criterion):
    with criterion(4, "200 separated 1s1q instances: prefix reversal gives valid separated <=4 queues") as c:
        failures = []
        for seed in range(200):
            lay = instance_with_signature(1, 1, 40_000 + seed, separated=True, sizes=((1, 30),))
            out = theorem5_transform(lay)
            ok = (validate_layout(out).ok and is_separated(out) and out.signature[0] == 0
                  and len(out.pages) <= 4 and out.graph == lay.graph)
            if not ok:
                failures.append(seed)
        assert not failures, failures
        c.detail = "0 failures"


def _riffle_parts(seq, k, rng):
    owner = [rng.randrange(k) for _ in seq]
    return [p for p in ([v for v, o in zip(seq, owner) if o == i] for i in range(k)) if p]


def _interleave(parts, rng):
    queues = [list(p) for p in parts]
    out = []
    while any(queues):
        i = rng.choice([j for j, q in enumerate(queues) if q])
        out.append(queues[i].pop(0))
    return out


def test_riffle_bounds(criterion):
    with criterion(5, "200 riffle instances: <= k^2 q pages, bipartite variant <= 2l(k-l) q") as c:
        failures = []
        for seed in range(200):
            rng = random.Random(50_000 + seed)
            q = rng.randint(1, 3)
            lay = random_layout_instance(0, q, rng.randint(2, 8), rng.randint(2, 8), density=0.8,
                                         seed=rng.randrange(2**31))
            parts = _riffle_parts(list(lay.order), rng.randint(1, 4), rng)
            out = riffle_split(lay, RiffleSpec(parts, _interleave(parts, rng)))
            k = len(parts)
            if not (validate_layout(out).ok and len(out.pages) <= k * k * len(lay.pages) and out.graph == lay.graph):
                failures.append(("plain", seed))

            blay = random_layout_instance(0, q, rng.randint(2, 8), rng.randint(2, 8), density=0.8,
                                          seed=rng.randrange(2**31), bipartite=True)
            a = blay.graph.side_a()
            k_a = rng.randint(1, 3)
            k_b = rng.randint(1, 4 - k_a) if k_a < 4 else 1
            a_parts = _riffle_parts([v for v in blay.order if v in a], k_a, rng)
            b_parts = _riffle_parts([v for v in blay.order if v not in a], k_b, rng)
            ell, k = len(a_parts), len(a_parts) + len(b_parts)
            target = _interleave(a_parts, rng) + _interleave(b_parts, rng)
            out = riffle_split_bipartite(blay, RiffleSpec(a_parts + b_parts, target), ell)
            if not (validate_layout(out).ok and len(out.pages) <= 2 * ell * (k - ell) * len(blay.pages)):
                failures.append(("bipartite", seed))
        assert not failures, failures
        c.detail = "400 transforms, 0 failures"


def _division_failures(lay, rec, out, stack_count, queue_count):
    stack_edges = {e for p in lay.stacks() for e in p.edges}
    bad = [e for e, n in rec.division_counts().items() if n != (stack_count if e in stack_edges else queue_count)]
    if bad:
        return f"division counts off on {bad[:3]}"
    if contract_subdivision(rec) != lay.graph:
        return "contraction does not recover the input"
    if not validate_layout(out).ok:
        return "output invalid"
    return None


def test_three_stack_pipeline(criterion):
    with criterion(6, "mixed to 3-stack subdivision over (s,q) in {1..4}^2, 20 each") as c:
        failures = []
        for s in range(1, 5):
            for q in range(1, 5):
                h = ceil_log2(max(s, q))
                for i in range(20):
                    lay = instance_with_signature(s, q, 60_000 + 100 * (4 * s + q) + i)
                    rec, out = mixed_to_3stack_subdivision(lay)
                    why = _division_failures(lay, rec, out, 2 * h + 2, 2 * h + 3)
                    if why is None and (out.signature[1] != 0 or len(out.pages) > 3):
                        why = f"signature {out.signature}"
                    if why:
                        failures.append((s, q, i, why))
        assert not failures, failures[:5]
        c.detail = "320 instances, 0 failures"


def test_one_stack_one_queue_pipeline(criterion):
    with criterion(7, "mixed to 1-stack 1-queue subdivision over (s,q) in {1..4}^2, 20 each") as c:
        failures = []
        for s in range(1, 5):
            for q in range(1, 5):
                h = ceil_log2(max(s, q))
                for i in range(20):
                    lay = instance_with_signature(s, q, 70_000 + 100 * (4 * s + q) + i)
                    rec, out = mixed_to_1s1q_subdivision(lay)
                    why = _division_failures(lay, rec, out, 4 * h + 4, 4 * h + 6)
                    if why is None and (out.signature[0] > 1 or out.signature[1] > 1):
                        why = f"signature {out.signature}"
                    if why:
                        failures.append((s, q, i, why))
        assert not failures, failures[:5]
        c.detail = "320 instances, 0 failures"


def test_separated_queue_reduction(criterion):
    with criterion(8, "separated (1,q) to separated (1,<=6) subdivision for q in 1..8, 20 each") as c:
        failures = []
        for q in range(1, 9):
            for i in range(20):
                lay = instance_with_signature(1, q, 80_000 + 100 * q + i, separated=True, sizes=((4, 8),))
                rec, out = separated_1sq_to_1s6q_subdivision(lay)
                why = _division_failures(lay, rec, out, 0, 2 * ceil_log2(q))
                if why is None and not (is_separated(out) and out.signature[0] == 1 and out.signature[1] <= 6):
                    why = f"signature {out.signature}"
                if why:
                    failures.append((q, i, why))
        assert not failures, failures[:5]
        c.detail = "160 instances, 0 failures"


def test_shallow_host(criterion):
    with criterion(9, "(s,q) in {1..3}^2: host layout (1, s+q-1), contraction exact, queue bound holds") as c:
        failures = []
        bound_checks = 0
        for s in range(1, 4):
            for q in range(1, 4):
                for i in range(20):
                    lay = instance_with_signature(s, q, 90_000 + 100 * (3 * s + q) + i, separated=True,
                                                  sizes=((3, 4), (4, 6)))
                    host = build_shallow_graph_H(lay)
                    hl = host.layout
                    if not (validate_layout(hl).ok and is_separated(hl) and hl.signature == (1, s + q - 1)):
                        failures.append((s, q, i, f"host signature {hl.signature}"))
                        continue
                    if contract(host.graph, host.minor_map, lay.graph.n).edge_set != lay.graph.edge_set:
                        failures.append((s, q, i, "contraction"))
                        continue
                    if lay.graph.n <= 8:
                        mm = host.minor_map
                        bound = check_contraction_bound(lay.graph, host.graph, MinorMap(mm.branch_sets, 1, mm.legend),
                                                        host_exact_limit=12)
                        bound_checks += 1
                        if not (bound.holds and bound.radius == 1):
                            failures.append((s, q, i, f"bound {bound}"))
        assert not failures, failures[:5]
        assert bound_checks > 0
        c.detail = f"180 instances, {bound_checks} bound checks, 0 failures"


def test_challenge_family(criterion):
    with criterion(10, "challenge family k=1..6: (1,2) layout, shared permutation gives <=4 separated queues") as c:
        for k in range(1, 7):
            inst = challenge_graph(k)
            assert validate_layout(inst.mixed_layout).ok and inst.mixed_layout.signature == (1, 2)
            lay = challenge_queue_layout(k)
            cols, rows = side_orders(lay)
            n = 2**k
            seq = challenge_permutation(k)
            assert cols == list(seq) and rows == [n + i for i in seq]
            assert validate_layout(lay).ok and is_separated(lay)
            assert lay.signature[0] == 0 and len(lay.pages) <= 4 and lay.graph == inst.graph
        raw = challenge_graph(4).edges_before_dedup
        assert raw == 48
        c.detail = f"G_16 raw edges = {raw}"


def test_separation(criterion):
    with criterion(11, "100 bipartite queue layouts: separate() gives <= 2q separated queues, side orders kept") as c:
        failures = []
        for seed in range(100):
            rng = random.Random(110_000 + seed)
            q = rng.randint(1, 4)
            lay = random_layout_instance(0, q, rng.randint(2, 9), rng.randint(2, 9), density=0.8,
                                         seed=rng.randrange(2**31), bipartite=True)
            out = separate(lay)
            a = lay.graph.side_a()
            keep = ([v for v in out.order if v in a] == [v for v in lay.order if v in a]
                    and [v for v in out.order if v not in a] == [v for v in lay.order if v not in a])
            if not (is_separated(out) and validate_layout(out).ok and out.signature[0] == 0
                    and len(out.pages) <= 2 * len(lay.pages) and keep and out.graph == lay.graph):
                failures.append(seed)
        assert not failures, failures
        c.detail = "0 failures"


CLI_SCRIPT = [
    ["generate", "--family", "k6", "--out", "k6.json", "--layout-out", "k6-lay.json"],
    ["generate", "--family", "kmn", "--m", "3", "--n-b", "3", "--out", "k33.json"],
    ["generate", "--family", "challenge", "--k", "4", "--out", "g16.json", "--layout-out", "g16-lay.json"],
    ["generate", "--family", "challenge", "--k", "2", "--out", "g4.json", "--layout-out", "g4-lay.json"],
    ["generate", "--family", "diag-grid", "--rows", "2", "--cols", "2", "--pattern", "random",
     "--out", "grid.json", "--layout-out", "grid-lay.json"],
    ["generate", "--family", "random", "--stacks", "2", "--queues", "2", "--out", "r.json", "--layout-out", "r-lay.json"],
    ["generate", "--family", "random", "--stacks", "0", "--queues", "3", "--n-a", "5", "--n-b", "5", "--bipartite",
     "--out", "rq.json", "--layout-out", "rq-lay.json"],
    ["solve", "--graph", "k6.json", "--minimize", "mn", "--witness", "k6-mn.json", "--json"],
    ["solve", "--graph", "k33.json", "--stacks", "1", "--queues", "1", "--separated", "--witness", "k33-11.json"],
    ["transform", "--op", "thm5", "--layout", "k33-11.json", "--out", "k33-thm5.json", "--json"],
    ["transform", "--op", "separate", "--layout", "rq-lay.json", "--out", "rq-sep.json"],
    ["transform", "--op", "same-perm", "--layout", "g4-lay.json", "--out", "g4-same.json", "--json"],
    ["transform", "--op", "build-h", "--layout", "k33-11.json", "--out", "k33-h.json", "--out-map", "k33-map.json"],
    ["subdivide", "--pipeline", "3stack", "--layout", "r-lay.json", "--out-layout", "r-3s.json", "--out-record", "r-3s-rec.json"],
    ["subdivide", "--pipeline", "1s1q", "--layout", "r-lay.json", "--out-layout", "r-11.json", "--json"],
    ["validate", "--layout", "r-11.json", "--json"],
    ["validate", "--record", "r-3s-rec.json"],
    ["render", "--layout", "k6-mn.json", "--out", "k6.svg"],
    ["render", "--layout", "g16-lay.json", "--style", "grid-matrix", "--out", "g16.svg"],
    ["report", "--out-dir", "report", "--instances", "2"],
]


def _run_script(workdir: Path, seed: int) -> dict:
    outputs = {}
    env = dict(os.environ)
    for i, argv in enumerate(CLI_SCRIPT):
        proc = subprocess.run([sys.executable, "-m", "linlay.cli", *argv, "--seed", str(seed)],
                              cwd=workdir, capture_output=True, env=env)
        assert proc.returncode == 0, (argv, proc.stderr.decode())
        outputs[f"stdout {i}"] = proc.stdout
    for path in sorted(workdir.rglob("*")):
        if path.is_file():
            outputs[str(path.relative_to(workdir))] = path.read_bytes()
    return outputs


def test_cli_determinism(criterion, tmp_path):
    with criterion(12, "CLI runs with fixed seed and inputs are byte-identical") as c:
        first, second = tmp_path / "one", tmp_path / "two"
        first.mkdir()
        second.mkdir()
        a = _run_script(first, 7)
        b = _run_script(second, 7)
        assert a.keys() == b.keys()
        differing = [k for k in a if a[k] != b[k]]
        assert not differing, differing
        c.detail = f"{len(CLI_SCRIPT)} invocations, {len(a) - len(CLI_SCRIPT)} files compared"
