"""``linlay`` command line: generate, solve, transform, subdivide, validate, render, report.

Exit codes: 0 success, 1 validation failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import io as lio
from .core import LayoutError, LinearLayout, is_separated, validate_layout
from .generators import (
    challenge_graph,
    challenge_permutation,
    challenge_queue_layout,
    complete_bipartite,
    complete_graph,
    diagonal_grid_instance,
    random_layout_instance,
)
from .solver import PageBudget, SolverRefusal, feasible, optimal_layout
from .transforms import (
    BlockGrid,
    CheckerboardGrid,
    RiffleSpec,
    build_shallow_graph_H,
    checkerboard_transform,
    exact_oracle,
    halve_diagonal_grid,
    riffle_split,
    riffle_split_bipartite,
    same_permutation_detail,
    separate,
    theorem5_transform,
)
from .treelayout import (
    mixed_to_1s1q_subdivision,
    mixed_to_3stack_subdivision,
    separated_1sq_to_1s6q_subdivision,
    subdivide_once,
    validate_tree_layout,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2
VIOLATION_LIMIT = 100
# provisional reading of where the block recursion stops; reported alongside the permutation
PERMUTATION_RULE = "blocks of four units while 4 * unit <= n; block b (from 0) uses f_((b + 1) mod 4)"


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _load_layout(args, attr: str = "layout") -> LinearLayout:
    graph = _load_graph(args.graph) if getattr(args, "graph", None) else None
    return lio.load_layout(getattr(args, attr), graph)


def _load(path: str, kind: type):
    obj = lio.load(path)
    if not isinstance(obj, kind):
        raise UsageError(f"{path} holds a {type(obj).__name__}, expected {kind.__name__}")
    return obj


def _load_graph(path: str):
    from .core import Graph

    obj = lio.load(path)
    if isinstance(obj, LinearLayout):
        return obj.graph
    if not isinstance(obj, Graph):
        raise UsageError(f"{path} holds neither a graph nor a layout")
    return obj


def _write_json(path: str, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


# --- generate ------------------------------------------------------------------------


def cmd_generate(args) -> int:
    fam = args.family
    layout = None
    if fam == "k6":
        g = complete_graph(args.n)
        if args.layout_out:
            layout = optimal_layout(g, "mn", args.max_vertices)[1]
    elif fam == "kmn":
        g = complete_bipartite(args.m, args.n_b)
        if args.layout_out:
            layout = optimal_layout(g, "smn", args.max_vertices)[1]
    elif fam == "challenge":
        if args.k > 12:
            raise UsageError("challenge family supports k <= 12")
        if args.layout_kind == "queues":
            layout = challenge_queue_layout(args.k)
        else:
            layout = challenge_graph(args.k).mixed_layout
        g = layout.graph
    elif fam == "diag-grid":
        g, layout, _ = diagonal_grid_instance(args.rows, args.cols, args.pattern, args.seed, args.cell)
    else:
        layout = random_layout_instance(
            args.stacks, args.queues, args.n_a, args.n_b, args.density, args.separated, args.seed,
            bipartite=True if args.bipartite else None,
        )
        g = layout.graph
    lio.save(g, args.out)
    if args.layout_out:
        lio.save(layout, args.layout_out)
    payload = {"family": fam, "n": g.n, "m": g.m}
    if fam == "challenge" and args.layout_kind == "queues":
        payload["permutation"] = challenge_permutation(args.k)
        payload["permutation_rule"] = PERMUTATION_RULE
    if layout is not None:
        payload["signature"] = list(layout.signature)
    _emit(args, payload, f"{fam}: n={g.n} m={g.m}" + (f" signature={layout.signature}" if layout else ""))
    return EXIT_OK


# --- solve ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    if args.minimize:
        value, witness = optimal_layout(g, args.minimize, args.max_vertices)
        if args.witness and witness is not None:
            lio.save(witness, args.witness)
        _emit(args, {"measure": args.minimize, "value": value}, str(value))
        return EXIT_OK
    if args.stacks is None and args.queues is None:
        raise UsageError("give --minimize or a page budget via --stacks/--queues")
    budget = PageBudget(args.stacks or 0, args.queues or 0, args.separated)
    res = feasible(g, budget, args.max_vertices)
    if args.witness and res.witness is not None:
        lio.save(res.witness, args.witness)
    payload = {
        "stacks": budget.stacks,
        "queues": budget.queues,
        "separated": budget.separated,
        "feasible": res.feasible,
        "nodes_explored": res.nodes_explored,
    }
    _emit(args, payload, "feasible" if res.feasible else "infeasible")
    return EXIT_OK


# --- transform -----------------------------------------------------------------------


def _spec_doc(args) -> dict:
    if not args.spec:
        raise UsageError(f"--op {args.op} needs --spec")
    try:
        return json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except json.JSONDecodeError as ex:
        raise UsageError(f"spec is not valid JSON: {ex}") from None


def _cuts(doc: dict) -> tuple[tuple, tuple]:
    try:
        return tuple(doc["col_cuts"]), tuple(doc["row_cuts"])
    except KeyError as ex:
        raise UsageError(f"checkerboard spec lacks {ex}") from None


def cmd_transform(args) -> int:
    layout = _load_layout(args)
    op = args.op
    extra: dict = {}
    if op == "riffle":
        doc = _spec_doc(args)
        if "parts" not in doc or "target_order" not in doc:
            raise UsageError("riffle spec needs 'parts' and 'target_order'")
        spec = RiffleSpec(doc["parts"], doc["target_order"])
        if doc.get("ell") is not None:
            out = riffle_split_bipartite(layout, spec, int(doc["ell"]))
        else:
            out = riffle_split(layout, spec)
    elif op == "separate":
        out = separate(layout, not args.b_first)
    elif op == "thm5":
        out = theorem5_transform(layout)
    elif op == "checkerboard":
        if args.spec:
            doc = _spec_doc(args)
            cols, rows = _cuts(doc)
            if doc.get("halve"):
                grid = halve_diagonal_grid(layout, BlockGrid(cols, rows))
            else:
                grid = CheckerboardGrid(cols, rows, int(doc.get("offset", 0)))
        else:
            raise UsageError("--op checkerboard needs --spec with col_cuts and row_cuts")
        out = checkerboard_transform(layout, grid, repack=args.repack)
        extra["grid"] = {"col_cuts": list(grid.col_cuts), "row_cuts": list(grid.row_cuts), "offset": grid.offset}
    elif op == "same-perm":
        if args.oracle != "exact":
            raise UsageError("same-perm supports --oracle exact only")
        res = same_permutation_detail(layout, exact_oracle, pad=args.pad)
        out = res.layout
        extra.update(oracle_pages=res.oracle_pages, padded=res.padded, permutation=list(res.permutation))
    else:
        host = build_shallow_graph_H(layout)
        out = host.layout
        if args.out_map:
            mm = host.minor_map
            _write_json(
                args.out_map,
                {
                    "type": "minor-map",
                    "radius": mm.radius,
                    "branch_sets": {str(v): sorted(s) for v, s in sorted(mm.branch_sets.items())},
                    "legend": {str(v): t for v, t in sorted((mm.legend or {}).items())},
                },
            )
    lio.save(out, args.out)
    report = validate_layout(out)
    payload = {
        "op": op,
        "signature": list(out.signature),
        "pages": len(out.pages),
        "separated": out.graph.bipartition is not None and is_separated(out),
        "valid": report.ok,
        **extra,
    }
    _emit(args, payload, f"{op}: signature={out.signature} valid={report.ok}")
    return EXIT_OK if report.ok else EXIT_INVALID


# --- subdivide -----------------------------------------------------------------------

_PIPELINES = {
    "3stack": mixed_to_3stack_subdivision,
    "1s1q": mixed_to_1s1q_subdivision,
    "sep-1s6q": separated_1sq_to_1s6q_subdivision,
    "once": subdivide_once,
}


def cmd_subdivide(args) -> int:
    layout = _load_layout(args)
    rec, out = _PIPELINES[args.pipeline](layout)
    lio.save(out, args.out_layout)
    if args.out_record:
        lio.save(rec, args.out_record)
    counts = sorted({rec.division_count(e) for e in rec.original.edges})
    ok = validate_layout(out).ok
    payload = {
        "pipeline": args.pipeline,
        "signature": list(out.signature),
        "division_counts": counts,
        "host_vertices": rec.host.n,
        "valid": ok,
    }
    _emit(args, payload, f"{args.pipeline}: signature={out.signature} division counts={counts} valid={ok}")
    return EXIT_OK if ok else EXIT_INVALID


# --- validate ------------------------------------------------------------------------


def cmd_validate(args) -> int:
    from .treelayout import SubdivisionRecord, TreeLayout

    if args.layout:
        layout = _load_layout(args)
        report = validate_layout(layout)
        doc = report.to_dict(VIOLATION_LIMIT)
        doc["signature"] = list(layout.signature)
        if layout.graph.bipartition is not None:
            doc["separated"] = is_separated(layout)
        if args.require_separated and not doc.get("separated", False):
            doc["valid"] = False
            doc["separated_required"] = True
        text = f"valid signature={layout.signature}" if doc["valid"] else f"INVALID: {len(report)} defects"
        _emit(args, doc, text)
        return EXIT_OK if doc["valid"] else EXIT_INVALID
    if args.record:
        rec = _load(args.record, SubdivisionRecord)  # loading runs the record checks
        doc = {"valid": True, "division_counts": sorted({rec.division_count(e) for e in rec.original.edges})}
        _emit(args, doc, "valid subdivision record")
        return EXIT_OK
    if args.tree_layout:
        if not args.graph:
            raise UsageError("--tree-layout needs --graph for the host graph")
        tl = _load(args.tree_layout, TreeLayout)
        report = validate_tree_layout(_load_graph(args.graph), tl, simple=args.simple)
        doc = report.to_dict(VIOLATION_LIMIT)
        _emit(args, doc, "valid tree-layout" if report.ok else f"INVALID: {len(report)} issues")
        return EXIT_OK if report.ok else EXIT_INVALID
    raise UsageError("give --layout, --record or --tree-layout")


# --- render / report -----------------------------------------------------------------


def cmd_render(args) -> int:
    from .render import RenderSpec, render

    layout = _load_layout(args)
    svg = render(layout, RenderSpec(args.style, args.width, args.height, labels=not args.no_labels, force=args.force))
    Path(args.out).write_text(svg, encoding="utf-8")
    _emit(args, {"style": args.style, "out": args.out, "bytes": len(svg.encode())}, f"wrote {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report

    res = write_report(args.out_dir, args.seed, args.instances, solver=not args.no_solver,
                       max_vertices=args.max_vertices)
    _emit(args, {"files": res.files, "failures": res.failures},
          "\n".join(res.files) + f"\nfailures: {res.failures}")
    return EXIT_OK if res.failures == 0 else EXIT_INVALID


# --- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--max-vertices", type=int, default=None,
                        help="exact-solver size guard (default: LINLAY_MAX_VERTICES or 16)")

    p = argparse.ArgumentParser(prog="linlay", description="Stack, queue and mixed linear layouts.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a graph (and optionally a layout)")
    g.add_argument("--family", required=True, choices=["k6", "kmn", "challenge", "diag-grid", "random"])
    g.add_argument("--out", required=True)
    g.add_argument("--layout-out")
    g.add_argument("--n", type=int, default=6, help="k6: vertex count")
    g.add_argument("--m", type=int, default=3, help="kmn: size of side A")
    g.add_argument("--n-b", type=int, default=3, help="kmn/random: size of side B")
    g.add_argument("--k", type=int, default=4, help="challenge: n = 2^k")
    g.add_argument("--layout-kind", choices=["mixed", "queues"], default="mixed")
    g.add_argument("--rows", type=int, default=2)
    g.add_argument("--cols", type=int, default=2)
    g.add_argument("--cell", type=int, default=4)
    g.add_argument("--pattern", default="alternating", choices=["alternating", "random", "increasing", "decreasing"])
    g.add_argument("--stacks", type=int, default=1)
    g.add_argument("--queues", type=int, default=1)
    g.add_argument("--n-a", type=int, default=6)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--separated", action="store_true")
    g.add_argument("--bipartite", action="store_true", help="random: only edges between side A and side B")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", parents=[common], help="exact feasibility or layout numbers")
    s.add_argument("--graph", required=True)
    s.add_argument("--stacks", type=int)
    s.add_argument("--queues", type=int)
    s.add_argument("--separated", action="store_true")
    s.add_argument("--minimize", choices=["sn", "qn", "mn", "sqn", "ssn", "smn"])
    s.add_argument("--witness")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("transform", parents=[common], help="layout-to-layout transformations")
    t.add_argument("--op", required=True, choices=["riffle", "separate", "thm5", "checkerboard", "same-perm", "build-h"])
    t.add_argument("--layout", required=True)
    t.add_argument("--graph", help="graph file, when the layout does not embed one")
    t.add_argument("--spec")
    t.add_argument("--out", required=True)
    t.add_argument("--oracle", default="exact")
    t.add_argument("--pad", action="store_true", help="same-perm: pad the smaller side")
    t.add_argument("--repack", action="store_true", help="checkerboard: merge pages by chain cover")
    t.add_argument("--b-first", action="store_true", help="separate: put side B first")
    t.add_argument("--out-map", help="build-h: write the contraction map")
    t.set_defaults(func=cmd_transform)

    d = sub.add_parser("subdivide", parents=[common], help="subdivision pipelines")
    d.add_argument("--pipeline", required=True, choices=sorted(_PIPELINES))
    d.add_argument("--layout", required=True)
    d.add_argument("--graph", help="graph file, when the layout does not embed one")
    d.add_argument("--out-layout", required=True)
    d.add_argument("--out-record")
    d.set_defaults(func=cmd_subdivide)

    v = sub.add_parser("validate", parents=[common], help="check a layout, record or tree-layout")
    v.add_argument("--layout")
    v.add_argument("--graph")
    v.add_argument("--record")
    v.add_argument("--tree-layout")
    v.add_argument("--simple", action="store_true")
    v.add_argument("--require-separated", action="store_true")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("render", parents=[common], help="draw a layout as SVG")
    r.add_argument("--layout", required=True)
    r.add_argument("--graph", help="graph file, when the layout does not embed one")
    r.add_argument("--style", choices=["arc-diagram", "grid-matrix"], default="arc-diagram")
    r.add_argument("--out", required=True)
    r.add_argument("--width", type=float, default=8.0)
    r.add_argument("--height", type=float, default=4.0)
    r.add_argument("--no-labels", action="store_true")
    r.add_argument("--force", action="store_true", help="draw invalid layouts with conflicts highlighted")
    r.set_defaults(func=cmd_render)

    rp = sub.add_parser("report", parents=[common], help="seeded sweeps as CSV plus SVG figures")
    rp.add_argument("--out-dir", required=True)
    rp.add_argument("--instances", type=int, default=3)
    rp.add_argument("--no-solver", action="store_true")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    try:
        return args.func(args)
    except (UsageError, SolverRefusal, LayoutError, OSError) as ex:
        print(f"linlay: error: {ex}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
