"""Batch evaluation: run a suite of example queries with ground truth, score
the rankings, write a delimited report, and optionally render summary figures.

Suite format: one JSON object per line with keys
  query: list of example tuples (each a list of entity names)
  truth: list of expected answer tuples
  k:     cutoff (optional, default 10)
  id:    row label (optional)
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from . import metrics
from .pipeline import run_query
from .store import DataGraph


@dataclass
class SuiteRow:
    query_id: str
    p_at_k: float
    avg_p: float
    ndcg: float
    nodes_evaluated: int
    millis: float


def load_suite(path: str) -> list[dict]:
    cases = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                case = json.loads(line)
            except json.JSONDecodeError as err:
                raise ValueError(f"suite line {lineno}: {err}") from None
            if "query" not in case or "truth" not in case:
                raise ValueError(f"suite line {lineno}: needs query and truth")
            case.setdefault("k", 10)
            case.setdefault("id", f"q{len(cases) + 1}")
            cases.append(case)
    if not cases:
        raise ValueError("empty suite")
    return cases


def run_suite(graph: DataGraph, cases: list[dict], d: int = 2,
              r: int = 15, kprime: int = 100) -> list[SuiteRow]:
    rows = []
    for case in cases:
        k = case["k"]
        tuples = [graph.resolve_tuple(t) for t in case["query"]]
        truth = {graph.resolve_tuple(t) for t in case["truth"]}
        outcome = run_query(graph, tuples, k=k, kprime=kprime, d=d, r=r)
        ranked = [a.entities for a in outcome.result.answers]
        rows.append(SuiteRow(
            query_id=str(case["id"]),
            p_at_k=metrics.precision_at_k(ranked, truth, k),
            avg_p=metrics.average_precision(ranked, truth, k),
            ndcg=metrics.ndcg(ranked, truth, k),
            nodes_evaluated=outcome.result.stats.nodes_evaluated,
            millis=outcome.result.stats.millis,
        ))
    return rows


def write_report(rows: list[SuiteRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["query_id", "P@k", "AvgP", "nDCG",
                         "nodes_evaluated", "millis"])
        for row in rows:
            writer.writerow([row.query_id, f"{row.p_at_k:.6f}",
                             f"{row.avg_p:.6f}", f"{row.ndcg:.6f}",
                             row.nodes_evaluated, f"{row.millis:.3f}"])


def render_figures(rows: list[SuiteRow], out_dir: str) -> list[str]:
    """Bar charts of the ranking metrics and evaluation effort, one PNG per
    chart, written next to the report."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import os

    os.makedirs(out_dir, exist_ok=True)
    ids = [r.query_id for r in rows]
    written = []

    def bar(fname, values, title, ylabel):
        fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(ids) + 2), 3.5))
        ax.bar(range(len(ids)), values, color="#4878d0")
        ax.set_xticks(range(len(ids)))
        ax.set_xticklabels(ids, rotation=45, ha="right")
        ax.set_title(title)
        ax.set_ylabel(ylabel)
        fig.tight_layout()
        path = os.path.join(out_dir, fname)
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    bar("quality.png", [r.ndcg for r in rows], "Ranking quality", "nDCG")
    bar("precision.png", [r.p_at_k for r in rows], "Precision at k", "P@k")
    bar("effort.png", [r.nodes_evaluated for r in rows],
        "Evaluation effort", "query graphs evaluated")
    return written
