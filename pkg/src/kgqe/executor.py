"""Answer computation over the lattice: hash-join evaluation of individual
query graphs, best-first exploration with pruning, and two-stage top-k ranking
(structure score first, content credit for identical nodes second).
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

from .lattice import LatticeState, QueryLattice
from .mqg import MaximalQueryGraph, is_virtual
from .store import DataGraph

# A row binds every MQG node (in lattice.node_order) to an entity id or None.
Row = tuple

MAX_ROWS = 1_000_000
MAX_WITNESSES = 16


class EvaluationOverflowError(RuntimeError):
    """An intermediate join result exceeded the row budget."""


@dataclass
class Answer:
    entities: tuple[int, ...]
    score: float
    structure_score: float
    content_score: float


@dataclass
class SearchStats:
    nodes_evaluated: int = 0
    nodes_pruned: int = 0
    millis: float = 0.0


@dataclass
class SearchResult:
    answers: list[Answer]
    stats: SearchStats
    state: LatticeState
    evaluator: "Evaluator"
    stage1: dict[tuple, float] = field(default_factory=dict)


class Evaluator:
    """Materializes query-graph answers bottom-up.  A node is joined from any
    already-materialized child by hashing in the one added edge; leaves are
    built edge by edge along a connected order."""

    def __init__(self, graph: DataGraph, lattice: QueryLattice):
        self.graph = graph
        self.lattice = lattice
        self.materialized: dict[int, frozenset[Row]] = {}
        self._scores: dict[int, float] = {}

    def s_score(self, bits: int) -> float:
        got = self._scores.get(bits)
        if got is None:
            edges = self.lattice.mqg.edges
            got = sum(edges[i].weight for i in self.lattice.edge_indices(bits))
            self._scores[bits] = got
        return got

    def rows(self, bits: int) -> frozenset[Row]:
        got = self.materialized.get(bits)
        if got is None:
            got = self._evaluate(bits)
            self.materialized[bits] = got
        return got

    def _evaluate(self, bits: int) -> frozenset[Row]:
        for i in self.lattice.edge_indices(bits):
            base = self.materialized.get(bits & ~(1 << i))
            if base is not None:
                return frozenset(self._extend(base, i))
        return frozenset(self._from_scratch(bits))

    def _from_scratch(self, bits: int) -> list[Row]:
        width = len(self.lattice.node_order)
        if bits == 0:
            # Empty query graph (single-entity tuples): any entity matches.
            pos = self.lattice.node_pos[self.lattice.query_nodes[0]]
            blank = [None] * width
            out = []
            for eid in range(len(self.graph.entity_names)):
                row = list(blank)
                row[pos] = eid
                out.append(tuple(row))
            return out
        edges = self.lattice.mqg.edges
        remaining = self.lattice.edge_indices(bits)
        order = [remaining.pop(0)]
        bound = {edges[order[0]].subj, edges[order[0]].obj}
        while remaining:
            # Connected join order: the graph is connected, so one always exists.
            i = next(j for j in remaining
                     if edges[j].subj in bound or edges[j].obj in bound)
            remaining.remove(i)
            order.append(i)
            bound.update((edges[i].subj, edges[i].obj))
        rows: list[Row] = [tuple([None] * width)]
        for i in order:
            rows = self._extend(rows, i)
        return rows

    def _extend(self, rows, edge_idx: int) -> list[Row]:
        e = self.lattice.mqg.edges[edge_idx]
        pu = self.lattice.node_pos[e.subj]
        pv = self.lattice.node_pos[e.obj]
        l = e.label
        g = self.graph
        out: list[Row] = []
        for row in rows:
            a, b = row[pu], row[pv]
            if a is not None and b is not None:
                if g.has_edge(a, l, b):
                    out.append(row)
            elif a is not None:
                for cand in g.objects(l, a):
                    if cand not in row:  # embeddings stay injective
                        nr = list(row)
                        nr[pv] = cand
                        out.append(tuple(nr))
            elif b is not None:
                for cand in g.subjects(l, b):
                    if cand not in row:
                        nr = list(row)
                        nr[pu] = cand
                        out.append(tuple(nr))
            else:
                for s, o in g.edges_with_label(l):
                    if s not in row and o not in row:
                        nr = list(row)
                        nr[pu] = s
                        nr[pv] = o
                        out.append(tuple(nr))
            if len(out) > MAX_ROWS:
                raise EvaluationOverflowError(
                    f"join result exceeds {MAX_ROWS} rows"
                )
        return out

    def c_score(self, bits: int, row: Row) -> float:
        """Content credit: an edge whose endpoint maps to the very same entity
        contributes its weight scaled down by that endpoint's MQG degree."""
        M = self.lattice.mqg
        pos = self.lattice.node_pos
        total = 0.0
        for i in self.lattice.edge_indices(bits):
            e = M.edges[i]
            same_u = not is_virtual(e.subj) and row[pos[e.subj]] == e.subj
            same_v = not is_virtual(e.obj) and row[pos[e.obj]] == e.obj
            if same_u and same_v:
                total += e.weight / min(M.degree(e.subj), M.degree(e.obj))
            elif same_u:
                total += e.weight / M.degree(e.subj)
            elif same_v:
                total += e.weight / M.degree(e.obj)
        return total


def _row_key(row: Row):
    return tuple(-1 if x is None else x for x in row)


class _Recorder:
    """Stage-1 bookkeeping: per answer tuple, the best structure score and a
    bounded set of witnessing (query graph, embedding) pairs."""

    def __init__(self, excluded: set[tuple]):
        self.excluded = excluded
        self.best: dict[tuple, float] = {}
        self.witnesses: dict[tuple, list] = {}

    def record(self, ans: tuple, s: float, bits: int, row: Row) -> None:
        if ans in self.excluded:
            return
        if s > self.best.get(ans, -1.0):
            self.best[ans] = s
        heap = self.witnesses.setdefault(ans, [])
        item = (s, bits, _row_key(row), row)
        if len(heap) < MAX_WITNESSES:
            heapq.heappush(heap, item)
        else:
            heapq.heappushpop(heap, item)

    def kth_best(self, k: int) -> float | None:
        if len(self.best) < k:
            return None
        return heapq.nlargest(k, self.best.values())[-1]


def _rank(graph: DataGraph, ev: Evaluator, rec: _Recorder,
          k: int, kprime: int) -> list[Answer]:
    """Stage 2: re-rank the top-k' stage-1 candidates by structure score plus
    the best content credit over their witnesses."""

    def name_key(ans):
        return tuple(graph.name(v) for v in ans)

    shortlist = sorted(rec.best.items(),
                       key=lambda kv: (-kv[1], name_key(kv[0])))[:kprime]
    out = []
    for ans, struct in shortlist:
        full = struct
        content = 0.0
        for s, bits, _, row in rec.witnesses[ans]:
            c = ev.c_score(bits, row)
            if s + c > full:
                full = s + c
                content = c
        out.append(Answer(entities=ans, score=full,
                          structure_score=struct, content_score=content))
    out.sort(key=lambda a: (-a.score, -a.structure_score,
                            name_key(a.entities)))
    return out[:k]


def best_first(graph: DataGraph, M: MaximalQueryGraph, k: int = 10,
               kprime: int = 100, exclude=(),
               trace: list[str] | None = None) -> SearchResult:
    """Explore the lattice from the minimal query trees upward, always
    evaluating the node with the highest upper-bound score, pruning ancestors
    of null results, and stopping once no open node can beat the k'-th best
    candidate found so far.
    """
    start = time.perf_counter()
    lattice = QueryLattice(M)
    ev = Evaluator(graph, lattice)
    state = LatticeState(lattice, ev.s_score)
    qpos = [lattice.node_pos[q] for q in M.query_nodes]
    rec = _Recorder({tuple(t) for t in exclude})
    stats = SearchStats()

    while True:
        q = state.best_candidate()
        if q is None:
            break
        rows = ev.rows(q)
        stats.nodes_evaluated += 1
        sq = ev.s_score(q)
        if trace is not None:
            trace.append(f"EVAL {q:x} {sq:.6f}")
        for row in rows:
            rec.record(tuple(row[p] for p in qpos), sq, q, row)
        old_uf = set(state.uf)
        state.on_evaluated(q, bool(rows))
        if not rows:
            stats.nodes_pruned += 1
            if trace is not None:
                trace.append(f"PRUNE {q:x} {sq:.6f}")
                for u in sorted(state.uf - old_uf):
                    trace.append(f"UFADD {u:x} {ev.s_score(u):.6f}")
        if state.lf:
            kth = rec.kth_best(kprime)
            if kth is not None:
                best_open = max(state.upper_bound(c) for c in state.lf)
                if kth >= best_open:
                    break

    answers = _rank(graph, ev, rec, k, kprime)
    stats.millis = (time.perf_counter() - start) * 1000
    return SearchResult(answers=answers, stats=stats, state=state,
                        evaluator=ev, stage1=dict(rec.best))


def breadth_first(graph: DataGraph, M: MaximalQueryGraph, k: int = 10,
                  kprime: int = 100, exclude=()) -> SearchResult:
    """Level-by-level baseline: evaluate every valid query graph bottom-up,
    skipping only ancestors of known nulls.  Exponential in the MQG size; used
    for comparison on small graphs."""
    start = time.perf_counter()
    lattice = QueryLattice(M)
    if lattice.m > 20:
        raise ValueError("baseline enumeration needs a small query graph")
    ev = Evaluator(graph, lattice)
    state = LatticeState(lattice, ev.s_score)
    qpos = [lattice.node_pos[q] for q in M.query_nodes]
    rec = _Recorder({tuple(t) for t in exclude})
    stats = SearchStats()
    nulls: list[int] = []

    for bits in sorted(range(lattice.root + 1), key=lambda b: (b.bit_count(), b)):
        if not lattice.is_valid(bits):
            continue
        if any(bits & n == n for n in nulls):
            continue
        rows = ev.rows(bits)
        stats.nodes_evaluated += 1
        if not rows:
            nulls.append(bits)
            stats.nodes_pruned += 1
            continue
        sq = ev.s_score(bits)
        for row in rows:
            rec.record(tuple(row[p] for p in qpos), sq, bits, row)

    answers = _rank(graph, ev, rec, k, kprime)
    stats.millis = (time.perf_counter() - start) * 1000
    return SearchResult(answers=answers, stats=stats, state=state,
                        evaluator=ev, stage1=dict(rec.best))
