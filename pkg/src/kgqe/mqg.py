"""Discovery of the weighted maximal query graph: greedy balanced component
search over the reduced neighborhood, depth assignment, and merging of the
per-tuple graphs for multi-tuple queries.

Nodes are entity ids; merged graphs use negative ids -(j+1) for the virtual
entity standing in for tuple position j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .neighborhood import NeighborhoodGraph
from .store import DataGraph, Edge

# Node key: entity id (>= 0) or virtual entity -(position+1).
NodeKey = int


def is_virtual(node: NodeKey) -> bool:
    return node < 0


def virtual_key(position: int) -> NodeKey:
    return -(position + 1)


def virtual_name(node: NodeKey) -> str:
    return f"w{-node}"


@dataclass
class MqgEdge:
    subj: NodeKey
    label: int
    obj: NodeKey
    base_weight: float       # discovery-time weight (merged: count * max weight)
    weight: float = 0.0      # depth-discounted weight, set by assign_depths
    depth: int = -1
    count: int = 1           # number of per-tuple graphs containing the edge

    @property
    def key(self) -> tuple[NodeKey, int, NodeKey]:
        return (self.subj, self.label, self.obj)


@dataclass
class MaximalQueryGraph:
    edges: list[MqgEdge]
    query_nodes: tuple[NodeKey, ...]
    d: int
    core_bits: int = 0
    _degree: dict[NodeKey, int] = field(default_factory=dict)

    def __post_init__(self):
        self._degree = {v: 0 for v in self.query_nodes}
        for e in self.edges:
            self._degree[e.subj] = self._degree.get(e.subj, 0) + 1
            self._degree[e.obj] = self._degree.get(e.obj, 0) + 1
        self.core_bits = _core_edge_bits(self)

    @property
    def nodes(self) -> set[NodeKey]:
        return set(self._degree)

    def degree(self, node: NodeKey) -> int:
        return self._degree[node]

    def node_name(self, node: NodeKey, graph: DataGraph) -> str:
        return virtual_name(node) if is_virtual(node) else graph.name(node)


def _edge_sort_key(edge: Edge, w: float):
    # Descending weight, then label, then endpoints: deterministic across runs.
    return (-w, edge[1], edge[0], edge[2])


def weigh(H: NeighborhoodGraph, graph: DataGraph) -> dict[Edge, float]:
    """Annotate every neighborhood edge with ief(e)/p(e)."""
    return {e: graph.edge_weight(e) for e in H.edges}


def _component_with(edges: list[Edge], required: set[NodeKey]):
    """Weakly connected component (as an edge list) of the given edge set that
    contains all `required` nodes, or None."""
    adj: dict[NodeKey, list[Edge]] = {}
    for e in edges:
        adj.setdefault(e[0], []).append(e)
        adj.setdefault(e[2], []).append(e)
    start = next(iter(required))
    if start not in adj and len(edges) > 0:
        return None
    seen = {start}
    stack = [start]
    comp_edges: set[Edge] = set()
    while stack:
        u = stack.pop()
        for e in adj.get(u, []):
            comp_edges.add(e)
            for w in (e[0], e[2]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    if not required <= seen:
        return None
    return [e for e in edges if e in comp_edges]


def _greedy_component(edges: list[Edge], weights: dict[Edge, float],
                      required: set[NodeKey], m: int) -> list[Edge]:
    """Scan top-s edges by weight for the smallest s whose connected component
    around `required` has exactly m edges, preferring the largest undershoot,
    else the smallest overshoot."""
    if not edges:
        return []
    ranked = sorted(edges, key=lambda e: _edge_sort_key(e, weights[e]))
    n_edges = len(ranked)
    s = min(m, n_edges)
    step = 1
    s1 = 0
    best_under = None
    best_over = None
    last_seen = None
    while 0 < s <= n_edges:
        comp = _component_with(ranked[:s], required)
        if comp is not None:
            last_seen = comp
            if len(comp) == m:
                return comp
            if len(comp) < m:
                s1 = s
                best_under = comp
                if step == -1:
                    return comp
            else:
                if s1 > 0:
                    return best_under
                best_over = comp
                step = -1
        s += step
    if s == 0 and best_over is not None:
        return best_over
    if best_under is not None:
        return best_under
    if last_seen is not None:
        return last_seen
    # No prefix component ever contained the required nodes: fall back to the
    # whole subgraph's component (guaranteed when the input is connected).
    comp = _component_with(ranked, required)
    return comp if comp is not None else ranked


def _simple_path_edges(adjacency: dict[NodeKey, list[tuple[Edge, NodeKey]]],
                       sources: set[NodeKey], targets: set[NodeKey],
                       max_len: int | None) -> set[Edge]:
    """Edges lying on some simple undirected path (optionally length-bounded)
    from a source to a *different* target node."""
    on_path: set[Edge] = set()

    def dfs(u: NodeKey, origin: NodeKey, visited: set[NodeKey],
            path: list[Edge]):
        if u in targets and u != origin and path:
            on_path.update(path)
        if max_len is not None and len(path) >= max_len:
            return
        for e, w in adjacency.get(u, []):
            if w in visited:
                continue
            visited.add(w)
            path.append(e)
            dfs(w, origin, visited, path)
            path.pop()
            visited.discard(w)

    for src in sources:
        dfs(src, src, {src}, [])
    return on_path


def _connects(edges: set[Edge], required: set[NodeKey]) -> bool:
    comp = _component_with(sorted(edges), required)
    return comp is not None


def _split_subgraphs(edges: set[Edge], weights: dict[Edge, float],
                     query_nodes: tuple[NodeKey, ...], max_len: int | None):
    """Divide into the core graph (edges on paths between query entities) and
    one subgraph per query entity (its private region)."""
    adjacency: dict[NodeKey, list[tuple[Edge, NodeKey]]] = {}
    for e in edges:
        adjacency.setdefault(e[0], []).append((e, e[2]))
        adjacency.setdefault(e[2], []).append((e, e[0]))

    qset = set(query_nodes)
    core: set[Edge] = set()
    if len(qset) > 1:
        # Query entities can sit up to 2d apart in the neighborhood; widen the
        # path bound until the core connects them all.
        for bound in (max_len, None if max_len is None else 2 * max_len, None):
            core = _simple_path_edges(adjacency, qset, qset, bound)
            if _connects(core, qset):
                break

    subgraphs = []  # (edge list, required node set)
    for v in query_nodes:
        # Nodes whose every route to another query entity passes through v:
        # their component, after deleting v, contains no other query entity.
        private: set[Edge] = set()
        comp_of: dict[NodeKey, int] = {}
        comp_has_query: dict[int, bool] = {}
        cid = 0
        for u in adjacency:
            if u == v or u in comp_of:
                continue
            stack = [u]
            comp_of[u] = cid
            has_q = u in qset
            while stack:
                x = stack.pop()
                for _, w in adjacency.get(x, []):
                    if w == v or w in comp_of:
                        continue
                    comp_of[w] = cid
                    stack.append(w)
                    has_q = has_q or w in qset
            comp_has_query[cid] = has_q
            cid += 1
        keep = {v} | {u for u, c in comp_of.items() if not comp_has_query[c]}
        for e in edges:
            if e[0] in keep and e[2] in keep and e not in core:
                private.add(e)
        subgraphs.append((sorted(private), {v}))

    return sorted(core), subgraphs


def _discover_edges(edges: set[Edge], weights: dict[Edge, float],
                    query_nodes: tuple[NodeKey, ...], r: int,
                    max_len: int | None) -> list[Edge]:
    """Greedy balanced discovery: union of one component per subgraph, each of
    target size r/(n+1)."""
    n = len(query_nodes)
    m = max(1, math.ceil(r / (n + 1)))
    core, subgraphs = _split_subgraphs(edges, weights, query_nodes, max_len)

    chosen: set[Edge] = set()
    if core:
        chosen.update(_greedy_component(core, weights, set(query_nodes), m))
    for sub_edges, required in subgraphs:
        if sub_edges:
            chosen.update(_greedy_component(sub_edges, weights, required, m))
    return sorted(chosen, key=lambda e: _edge_sort_key(e, weights[e]))


def discover(H: NeighborhoodGraph, weights: dict[Edge, float],
             t: tuple[int, ...], r: int) -> MaximalQueryGraph:
    """Build the maximal query graph from the (reduced) weighted neighborhood."""
    if r < len(t) + 1:
        raise ValueError("r must be at least arity + 1")
    picked = _discover_edges(set(H.edges), weights, tuple(t), r, H.d)
    if len(picked) > 2 * r:
        # Hard cap: re-trim the union as a single graph with target r.
        sub_weights = {e: weights[e] for e in picked}
        picked = _discover_edges(set(picked), sub_weights, tuple(t), r, H.d)
    mqg_edges = [MqgEdge(subj=e[0], label=e[1], obj=e[2], base_weight=weights[e])
                 for e in picked]
    M = MaximalQueryGraph(edges=mqg_edges, query_nodes=tuple(t), d=H.d)
    return assign_depths(M, tuple(t))


def _core_edge_bits(M: MaximalQueryGraph) -> int:
    if len(M.query_nodes) < 2:
        return 0
    adjacency: dict[NodeKey, list[tuple[Edge, NodeKey]]] = {}
    keys = {}
    for i, e in enumerate(M.edges):
        keys[e.key] = i
        adjacency.setdefault(e.subj, []).append((e.key, e.obj))
        adjacency.setdefault(e.obj, []).append((e.key, e.subj))
    qset = set(M.query_nodes)
    core = _simple_path_edges(adjacency, qset, qset, None)
    bits = 0
    for e in core:
        bits |= 1 << keys[e]
    return bits


def assign_depths(M: MaximalQueryGraph, t: tuple[NodeKey, ...]) -> MaximalQueryGraph:
    """Set each edge's depth to its smallest undirected distance from a query
    entity within the graph, and discount its weight by depth squared."""
    adj: dict[NodeKey, list[NodeKey]] = {}
    for e in M.edges:
        adj.setdefault(e.subj, []).append(e.obj)
        adj.setdefault(e.obj, []).append(e.subj)
    dist = {v: 0 for v in t}
    frontier = list(t)
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj.get(u, []):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    for e in M.edges:
        e.depth = min(dist[e.subj], dist[e.obj])
        e.weight = e.base_weight / max(e.depth, 1) ** 2
    return M


def merge(mqgs: list[MaximalQueryGraph], tuples: list[tuple[int, ...]],
          r: int) -> MaximalQueryGraph:
    """Merge per-tuple graphs after substituting query entities with virtual
    entities; identical edges are merged with weight count * max weight.

    Oversized results are trimmed with the same greedy discovery, treating
    virtual entities as query entities.
    """
    if len(mqgs) != len(tuples) or not mqgs:
        raise ValueError("one query tuple per graph required")
    arity = len(tuples[0])
    if any(len(t) != arity for t in tuples):
        raise ValueError("all query tuples must share the same arity")

    merged: dict[tuple[NodeKey, int, NodeKey], list[float]] = {}
    for M, t in zip(mqgs, tuples):
        sub = {v: virtual_key(j) for j, v in enumerate(t)}
        for e in M.edges:
            key = (sub.get(e.subj, e.subj), e.label, sub.get(e.obj, e.obj))
            merged.setdefault(key, []).append(e.base_weight)

    query_nodes = tuple(virtual_key(j) for j in range(arity))
    weights = {key: len(ws) * max(ws) for key, ws in merged.items()}
    counts = {key: len(ws) for key, ws in merged.items()}
    d = max(M.d for M in mqgs)

    keys = set(weights)
    if len(keys) > r:
        keys = set(_discover_edges(keys, weights, query_nodes, r, d))

    edges = [MqgEdge(subj=k[0], label=k[1], obj=k[2], base_weight=weights[k],
                     count=counts[k])
             for k in sorted(keys, key=lambda k: _edge_sort_key(k, weights[k]))]
    M = MaximalQueryGraph(edges=edges, query_nodes=query_nodes, d=d)
    return assign_depths(M, query_nodes)
