"""Seeded experiment sweeps written as CSV tables plus SVG figures."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .core import LayoutError, LinearLayout, is_separated, validate_layout  # noqa: E402
from .generators import (  # noqa: E402
    challenge_graph,
    challenge_queue_layout,
    complete_bipartite,
    complete_graph,
    random_layout_instance,
)
from .render import RenderSpec, figure_to_svg, render  # noqa: E402
from .transforms import separate, theorem5_transform  # noqa: E402
from .treelayout import (  # noqa: E402
    contract_subdivision,
    mixed_to_1s1q_subdivision,
    mixed_to_3stack_subdivision,
    separated_1sq_to_1s6q_subdivision,
)


def exact_signature_instance(s: int, q: int, seed: int, separated: bool = False, tries: int = 200) -> LinearLayout:
    """A random valid layout whose signature is exactly ``(s, q)``."""
    for t in range(tries):
        n_a = 4 + (seed + t) % 4
        n_b = 4 + (seed // 2 + t) % 4
        lay = random_layout_instance(
            s, q, n_a, n_b, density=0.6, separated=separated, seed=seed * 7919 + t, bipartite=separated or None
        )
        if lay.signature == (s, q):
            return lay
    raise LayoutError(f"no instance with signature ({s}, {q}) after {tries} tries")


def ceil_log2(x: int) -> int:
    return math.ceil(math.log2(x)) if x > 1 else 0


@dataclass
class PipelineRow:
    pipeline: str
    s: int
    q: int
    instance: int
    n: int
    m: int
    h: int
    stack_divisions: str
    queue_divisions: str
    expected_stack: int
    expected_queue: int
    out_stacks: int
    out_queues: int
    valid: bool
    contraction_ok: bool

    @property
    def ok(self) -> bool:
        exact = self.stack_divisions in ("", str(self.expected_stack)) and self.queue_divisions in (
            "",
            str(self.expected_queue),
        )
        return self.valid and self.contraction_ok and exact


_PIPELINES = {
    "3stack": (mixed_to_3stack_subdivision, lambda h: (2 * h + 2, 2 * h + 3)),
    "1s1q": (mixed_to_1s1q_subdivision, lambda h: (4 * h + 4, 4 * h + 6)),
}


def _division_summary(rec, edges) -> str:
    counts = sorted({rec.division_count(e) for e in edges})
    return "/".join(str(c) for c in counts)


def pipeline_rows(seed: int, instances: int, max_pages: int = 4) -> list[PipelineRow]:
    rows = []
    for name, (fn, expected) in _PIPELINES.items():
        for s in range(1, max_pages + 1):
            for q in range(1, max_pages + 1):
                h = ceil_log2(max(s, q))
                es, eq = expected(h)
                for i in range(instances):
                    lay = exact_signature_instance(s, q, seed + 1000 * i + 37 * s + q)
                    rec, out = fn(lay)
                    stack_e = [e for p in lay.stacks() for e in p.edges]
                    queue_e = [e for p in lay.queues() for e in p.edges]
                    rows.append(
                        PipelineRow(
                            name, s, q, i, lay.graph.n, lay.graph.m, h,
                            _division_summary(rec, stack_e), _division_summary(rec, queue_e), es, eq,
                            *out.signature, validate_layout(out).ok,
                            contract_subdivision(rec).edge_set == lay.graph.edge_set,
                        )
                    )
    for q in range(1, 9):
        h = ceil_log2(q)
        for i in range(instances):
            lay = exact_signature_instance(1, q, seed + 1000 * i + q, separated=True)
            rec, out = separated_1sq_to_1s6q_subdivision(lay)
            stack_e = [e for p in lay.stacks() for e in p.edges]
            queue_e = [e for p in lay.queues() for e in p.edges]
            rows.append(
                PipelineRow(
                    "sep-1s6q", 1, q, i, lay.graph.n, lay.graph.m, h,
                    _division_summary(rec, stack_e), _division_summary(rec, queue_e), 0, 2 * h,
                    *out.signature, validate_layout(out).ok and is_separated(out),
                    contract_subdivision(rec).edge_set == lay.graph.edge_set,
                )
            )
    return rows


@dataclass
class TransformRow:
    op: str
    instance: int
    n: int
    m: int
    in_pages: int
    out_pages: int
    page_bound: int
    valid: bool

    @property
    def ok(self) -> bool:
        return self.valid and self.out_pages <= self.page_bound


def transform_rows(seed: int, instances: int) -> list[TransformRow]:
    rows = []
    for i in range(instances):
        lay = exact_signature_instance(1, 1, seed + 31 * i, separated=True)
        out = theorem5_transform(lay)
        ok = validate_layout(out).ok and is_separated(out) and out.graph == lay.graph
        rows.append(TransformRow("thm5", i, lay.graph.n, lay.graph.m, 2, len(out.pages), 4, ok))
    for i in range(instances):
        q = 1 + i % 3
        lay = random_layout_instance(0, q, 5, 5, density=0.6, seed=seed + 53 * i, bipartite=True)
        out = separate(lay)
        ok = validate_layout(out).ok and is_separated(out)
        rows.append(TransformRow("separate", i, lay.graph.n, lay.graph.m, len(lay.pages), len(out.pages), 2 * len(lay.pages), ok))
    return rows


def _write_csv(path: Path, rows: list, fields: list[str]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields + ["ok"])
        for r in rows:
            w.writerow([getattr(r, f) for f in fields] + [r.ok])


def division_figure(rows: list[PipelineRow]) -> str:
    """Division vertices per edge against h, measured points over the exact formulas."""
    fig, ax = plt.subplots(figsize=(6, 4))
    hs = sorted({r.h for r in rows}) or [0]
    styles = {"3stack": "tab:blue", "1s1q": "tab:orange", "sep-1s6q": "tab:green"}
    formulas = {
        ("3stack", "stack"): lambda h: 2 * h + 2,
        ("3stack", "queue"): lambda h: 2 * h + 3,
        ("1s1q", "stack"): lambda h: 4 * h + 4,
        ("1s1q", "queue"): lambda h: 4 * h + 6,
        ("sep-1s6q", "queue"): lambda h: 2 * h,
    }
    for (name, part), f in formulas.items():
        ax.plot(hs, [f(h) for h in hs], color=styles[name], ls="-" if part == "stack" else "--", lw=1,
                label=f"{name} {part} edges")
        pts = sorted({(r.h, int(c)) for r in rows if r.pipeline == name
                      for c in getattr(r, f"{part}_divisions").split("/") if c})
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, color=styles[name], marker="o" if part == "stack" else "x", s=25)
    ax.set_xlabel("h = ceil(log2 of the largest page count)")
    ax.set_ylabel("division vertices per edge")
    ax.set_xticks(hs)
    ax.legend(fontsize=7)
    fig.tight_layout()
    return figure_to_svg(fig)


@dataclass
class ReportResult:
    files: list = field(default_factory=list)
    failures: int = 0


def write_report(out_dir, seed: int = 0, instances: int = 3, solver: bool = True,
                 max_vertices: Optional[int] = None) -> ReportResult:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = ReportResult()

    prow = pipeline_rows(seed, instances)
    p_fields = ["pipeline", "s", "q", "instance", "n", "m", "h", "stack_divisions", "queue_divisions",
                "expected_stack", "expected_queue", "out_stacks", "out_queues", "valid", "contraction_ok"]
    _write_csv(out / "pipelines.csv", prow, p_fields)
    trow = transform_rows(seed, instances)
    _write_csv(out / "transforms.csv", trow,
               ["op", "instance", "n", "m", "in_pages", "out_pages", "page_bound", "valid"])
    res.files += ["pipelines.csv", "transforms.csv"]
    res.failures += sum(not r.ok for r in prow) + sum(not r.ok for r in trow)

    figures = {
        "division_counts.svg": division_figure(prow),
        "challenge_g16_mixed.svg": render(challenge_graph(4).mixed_layout, RenderSpec("grid-matrix", 6, 5)),
        "challenge_g16_queues.svg": render(challenge_queue_layout(4), RenderSpec("grid-matrix", 6, 5)),
    }

    if solver:
        from .solver import optimal_layout

        k6 = complete_graph(6)
        k33 = complete_bipartite(3, 3)
        table = []
        for label, g, measures in (("K6", k6, ("sn", "qn", "mn")), ("K3,3", k33, ("sqn", "smn"))):
            for meas in measures:
                value, witness = optimal_layout(g, meas, max_vertices)
                table.append((label, meas, value, list(witness.signature)))
                if label == "K6" and meas == "mn":
                    figures["k6_mixed_witness.svg"] = render(witness, RenderSpec("arc-diagram", 6, 4))
        with (out / "solver.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["graph", "measure", "value", "witness_signature"])
            for label, meas, value, sig in table:
                w.writerow([label, meas, value, f"{sig[0]}s{sig[1]}q"])
        res.files.append("solver.csv")

    for name, svg in figures.items():
        (out / name).write_text(svg, encoding="utf-8")
        res.files.append(name)
    return res
