"""End-to-end query pipeline shared by the CLI, the HTTP service, and the
evaluation harness: neighborhood extraction and reduction, query-graph
discovery (with merging for multi-tuple queries), then best-first search.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import executor, mqg, neighborhood
from .mqg import MaximalQueryGraph
from .store import DataGraph


@dataclass
class QueryOutcome:
    mqg: MaximalQueryGraph
    result: executor.SearchResult
    neighborhoods: list[neighborhood.NeighborhoodGraph]


def build_mqg(graph: DataGraph, tuples: list[tuple[int, ...]], d: int,
              r: int) -> tuple[MaximalQueryGraph,
                               list[neighborhood.NeighborhoodGraph]]:
    per_tuple = []
    hoods = []
    for t in tuples:
        H = neighborhood.extract(graph, t, d)
        classes = neighborhood.classify_edges(H, t, d)
        H = neighborhood.reduce(H, classes, t)
        hoods.append(H)
        weights = mqg.weigh(H, graph)
        per_tuple.append(mqg.discover(H, weights, t, r))
    if len(per_tuple) == 1:
        return per_tuple[0], hoods
    return mqg.merge(per_tuple, tuples, r), hoods


def run_query(graph: DataGraph, tuples: list[tuple[int, ...]], k: int = 10,
              kprime: int = 100, d: int = 2, r: int = 15,
              trace: list[str] | None = None) -> QueryOutcome:
    if not tuples:
        raise ValueError("at least one example tuple required")
    arity = len(tuples[0])
    if any(len(t) != arity for t in tuples):
        raise ValueError("all example tuples must share the same arity")
    M, hoods = build_mqg(graph, tuples, d, r)
    result = executor.best_first(graph, M, k=k, kprime=kprime,
                                 exclude=tuples, trace=trace)
    return QueryOutcome(mqg=M, result=result, neighborhoods=hoods)
