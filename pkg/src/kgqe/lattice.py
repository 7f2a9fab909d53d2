"""Answer-space lattice over the maximal query graph: query graphs are edge
bit-sets, leaves are the minimal query trees, and exploration state tracks the
lower/upper frontiers with upper-boundary recomputation after pruning.
"""

from __future__ import annotations

import itertools
from typing import Callable

from .mqg import MaximalQueryGraph, NodeKey


class QueryLattice:
    """Structural queries over the lattice: validity, children, parents,
    minimal query trees.  Nodes are int bit-sets over MQG edge indices."""

    def __init__(self, M: MaximalQueryGraph):
        self.mqg = M
        self.m = len(M.edges)
        self.root = (1 << self.m) - 1
        self.query_nodes = M.query_nodes
        self._endpoints = [(e.subj, e.obj) for e in M.edges]
        # Edge indices incident on each node.
        self._incident: dict[NodeKey, int] = {}
        for i, (s, o) in enumerate(self._endpoints):
            self._incident[s] = self._incident.get(s, 0) | (1 << i)
            self._incident[o] = self._incident.get(o, 0) | (1 << i)
        self.node_order = sorted(self._incident.keys() | set(M.query_nodes))
        self.node_pos = {v: i for i, v in enumerate(self.node_order)}

    # -- structure ----------------------------------------------------------

    def edge_indices(self, bits: int) -> list[int]:
        return [i for i in range(self.m) if bits >> i & 1]

    def nodes_of(self, bits: int) -> set[NodeKey]:
        out = set(self.query_nodes)
        for i in self.edge_indices(bits):
            out.update(self._endpoints[i])
        return out

    def is_valid(self, bits: int) -> bool:
        """A valid query graph is weakly connected and contains every query
        entity.  The empty graph is valid only for single-entity tuples."""
        idx = self.edge_indices(bits)
        if not idx:
            return len(self.query_nodes) == 1
        adj: dict[NodeKey, list[NodeKey]] = {}
        for i in idx:
            s, o = self._endpoints[i]
            adj.setdefault(s, []).append(o)
            adj.setdefault(o, []).append(s)
        for q in self.query_nodes:
            if q not in adj:
                return False
        start = self._endpoints[idx[0]][0]
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(adj) and all(q in seen for q in self.query_nodes)

    def children(self, bits: int) -> set[int]:
        out = set()
        for i in self.edge_indices(bits):
            child = bits & ~(1 << i)
            if (child or len(self.query_nodes) == 1) and self.is_valid(child):
                out.add(child)
        return out

    def parents(self, bits: int) -> set[int]:
        out = set()
        nodes = self.nodes_of(bits)
        touching = 0
        for v in nodes:
            touching |= self._incident.get(v, 0)
        for i in self.edge_indices(touching & ~bits):
            parent = bits | (1 << i)
            if self.is_valid(parent):
                out.add(parent)
        return out

    def component_containing_query(self, bits: int) -> int:
        """Bit-set of the weakly connected component (within `bits`) holding
        all query entities, or -1 if they are split across components."""
        idx = self.edge_indices(bits)
        if not idx:
            return 0 if len(self.query_nodes) == 1 else -1
        adj: dict[NodeKey, list[tuple[int, NodeKey]]] = {}
        for i in idx:
            s, o = self._endpoints[i]
            adj.setdefault(s, []).append((i, o))
            adj.setdefault(o, []).append((i, s))
        for q in self.query_nodes:
            if q not in adj:
                return -1
        start = self.query_nodes[0]
        seen = {start}
        stack = [start]
        comp = 0
        while stack:
            u = stack.pop()
            for i, w in adj.get(u, []):
                comp |= 1 << i
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if not all(q in seen for q in self.query_nodes):
            return -1
        return comp

    # -- minimal query trees ------------------------------------------------

    def minimal_query_trees(self) -> frozenset[int]:
        """All distinct spanning trees of the core component, trimmed by
        iteratively deleting degree-one non-query nodes."""
        core_idx = self.edge_indices(self.mqg.core_bits)
        if not core_idx:
            # Single-entity tuple: the lone query entity is the only leaf.
            return frozenset({0})
        core_nodes = set()
        for i in core_idx:
            core_nodes.update(self._endpoints[i])
        n_tree = len(core_nodes) - 1
        trees: set[int] = set()
        for combo in itertools.combinations(core_idx, n_tree):
            bits = 0
            for i in combo:
                bits |= 1 << i
            if self._spans(bits, core_nodes):
                trees.add(self._trim(bits))
        return frozenset(trees)

    def _spans(self, bits: int, nodes: set[NodeKey]) -> bool:
        idx = self.edge_indices(bits)
        adj: dict[NodeKey, list[NodeKey]] = {}
        for i in idx:
            s, o = self._endpoints[i]
            adj.setdefault(s, []).append(o)
            adj.setdefault(o, []).append(s)
        if len(adj) != len(nodes):
            return False
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj.get(u, []):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == nodes

    def _trim(self, bits: int) -> int:
        qset = set(self.query_nodes)
        changed = True
        while changed:
            changed = False
            degree: dict[NodeKey, list[int]] = {}
            for i in self.edge_indices(bits):
                s, o = self._endpoints[i]
                degree.setdefault(s, []).append(i)
                degree.setdefault(o, []).append(i)
            for v, incident in degree.items():
                if v not in qset and len(incident) == 1:
                    bits &= ~(1 << incident[0])
                    changed = True
        return bits


class LatticeState:
    """Exploration bookkeeping: evaluated/pruned sets, lower frontier with
    per-node upper boundaries, upper frontier, and upper-bound scores."""

    def __init__(self, lattice: QueryLattice, score_fn: Callable[[int], float]):
        self.lattice = lattice
        self.score = score_fn
        self.evaluated: set[int] = set()
        self.null_minimal: list[int] = []  # pruned set, as minimal null nodes
        self.lf: set[int] = set(lattice.minimal_query_trees())
        self.uf: set[int] = {lattice.root}
        self.ub: dict[int, set[int]] = {q: {lattice.root} for q in self.lf}

    def is_pruned(self, bits: int) -> bool:
        return any(bits & n == n for n in self.null_minimal)

    def upper_bound(self, bits: int) -> float:
        return max(self.score(q) for q in self.ub[bits])

    def best_candidate(self) -> int | None:
        """Lower-frontier node with the highest upper-bound score; ties break
        toward fewer edges, then the smallest bit-set."""
        if not self.lf:
            return None
        return max(self.lf,
                   key=lambda q: (self.upper_bound(q), -q.bit_count(), -q))

    def on_evaluated(self, bits: int, has_answers: bool) -> None:
        self.evaluated.add(bits)
        self.lf.discard(bits)
        self.ub.pop(bits, None)
        if has_answers:
            for p in self.lattice.parents(bits):
                if p in self.evaluated or p in self.lf or self.is_pruned(p):
                    continue
                boundary = {u for u in self.uf if u & p == p}
                if not boundary:
                    raise AssertionError(
                        "unpruned lower-frontier node has no upper boundary"
                    )
                self.lf.add(p)
                self.ub[p] = boundary
        else:
            self._prune_and_recompute(bits)

    def _prune_and_recompute(self, q_best: int) -> None:
        """Prune q_best with its ancestors and rebuild the upper boundaries of
        the dirty lower-frontier nodes."""
        if not self.is_pruned(q_best):
            self.null_minimal.append(q_best)
        for q in [q for q in self.lf if q & q_best == q_best]:
            self.lf.discard(q)
            self.ub.pop(q, None)
        pruned_uf = {u for u in self.uf if u & q_best == q_best}
        self.uf -= pruned_uf

        for q in sorted(self.lf):
            removed = self.ub[q] & pruned_uf
            if not removed:
                continue
            self.ub[q] -= removed
            candidates: set[int] = set()
            delta = self.lattice.edge_indices(q_best & ~q)
            for q_prime in removed:
                for i in delta:
                    q_sub = self.lattice.component_containing_query(
                        q_prime & ~(1 << i))
                    if q_sub >= 0:
                        candidates.add(q_sub)
            for q_sub in sorted(candidates):
                others = (self.uf | candidates) - {q_sub}
                if any(q_sub & o == q_sub for o in others):
                    continue
                self.ub[q].add(q_sub)
                self.uf.add(q_sub)
            if not self.ub[q]:
                raise AssertionError(
                    "dirty node left without an upper boundary"
                )
