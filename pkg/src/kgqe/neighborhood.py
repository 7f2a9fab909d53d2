"""Distance-bounded neighborhood extraction around a query tuple, plus the
unimportant-edge reduction that shrinks it before query-graph discovery.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .store import DataGraph, Edge


class DisconnectedTupleError(ValueError):
    """The query entities are not mutually reachable within the d-bounded
    region, so no query graph can exist."""


@dataclass
class NeighborhoodGraph:
    nodes: set[int]
    edges: set[Edge]
    dist_to_tuple: dict[int, int]
    d: int
    query_entities: tuple[int, ...]
    _adjacency: dict[int, list[tuple[Edge, int]]] = field(default_factory=dict)

    def __post_init__(self):
        if not self._adjacency:
            for e in self.edges:
                s, _, o = e
                self._adjacency.setdefault(s, []).append((e, o))
                self._adjacency.setdefault(o, []).append((e, s))

    def neighbors(self, node: int) -> list[tuple[Edge, int]]:
        return self._adjacency.get(node, [])


@dataclass
class EdgeClasses:
    """Per (node, incident edge) classification.  Edges absent from both sets
    are neutral from that node's perspective."""

    important: set[tuple[int, Edge]]
    unimportant: set[tuple[int, Edge]]


def extract(graph: DataGraph, t: tuple[int, ...], d: int) -> NeighborhoodGraph:
    """All nodes within undirected distance d of some query entity and all
    edges lying on such paths.

    An edge (u, v) is kept iff min(dist[u], dist[v]) + 1 <= d: it then sits on
    a path of that length ending at a query entity.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    for v in t:
        if not 0 <= v < len(graph.entity_names):
            raise ValueError(f"entity id {v} not in graph")

    # Every pair of query entities must sit within distance d of each other;
    # that is what keeps the later unimportant-edge reduction from splitting
    # them apart.
    if len(t) > 1:
        for v in t[:-1]:
            reach = _bounded_bfs(graph, v, d)
            for u in t:
                if u != v and u not in reach:
                    raise DisconnectedTupleError(
                        "query entities are not connected within distance "
                        f"{d} of each other"
                    )

    dist: dict[int, int] = {v: 0 for v in t}
    queue = deque(t)
    while queue:
        u = queue.popleft()
        if dist[u] == d:
            continue
        for _, w in graph.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)

    edges: set[Edge] = set()
    for u in dist:
        for e, w in graph.neighbors(u):
            if w in dist and min(dist[u], dist[w]) + 1 <= d:
                edges.add(e)
    nodes = {v for e in edges for v in (e[0], e[2])} | set(t)

    return NeighborhoodGraph(nodes=nodes, edges=edges, dist_to_tuple=dist,
                             d=d, query_entities=tuple(t))


def _bounded_bfs(graph: DataGraph, source: int, d: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if dist[u] == d:
            continue
        for _, w in graph.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def classify_edges(H: NeighborhoodGraph, t: tuple[int, ...], d: int) -> EdgeClasses:
    """Partition each node's incident edges into important / unimportant /
    neutral.

    An edge is important from node v if a simple undirected path of length
    <= d through it joins v to a query entity.  It is unimportant from v if
    it is not important and some important edge at v shares its label and
    direction relative to v.
    """
    query = set(t)
    important: set[tuple[int, Edge]] = set()
    unimportant: set[tuple[int, Edge]] = set()

    def reaches_query(u: int, visited: set[int], budget: int) -> bool:
        if u in query:
            return True
        if budget == 0:
            return False
        for _, w in H.neighbors(u):
            if w in visited:
                continue
            visited.add(w)
            if reaches_query(w, visited, budget - 1):
                visited.discard(w)
                return True
            visited.discard(w)
        return False

    for v in H.nodes:
        incident = H.neighbors(v)
        for e, u in incident:
            # Path v -e- u -...- query entity, total length <= d.
            if u in query or reaches_query(u, {v, u}, d - 1):
                important.add((v, e))
        for e, u in incident:
            if (v, e) in important:
                continue
            s, l, o = e
            incoming = o == v
            for e2, _ in incident:
                if e2 == e or (v, e2) not in important or e2[1] != l:
                    continue
                if (e2[2] == v) == incoming:
                    unimportant.add((v, e))
                    break
    return EdgeClasses(important=important, unimportant=unimportant)


def reduce(H: NeighborhoodGraph, classes: EdgeClasses,
           t: tuple[int, ...]) -> NeighborhoodGraph:
    """Delete every edge unimportant from either end and return the weakly
    connected component containing the query entities."""
    kept = {
        e for e in H.edges
        if (e[0], e) not in classes.unimportant
        and (e[2], e) not in classes.unimportant
    }
    adjacency: dict[int, list[tuple[Edge, int]]] = {}
    for e in kept:
        s, _, o = e
        adjacency.setdefault(s, []).append((e, o))
        adjacency.setdefault(o, []).append((e, s))

    # Component containing the query entities; guaranteed to hold all of them.
    seen = {t[0]}
    stack = [t[0]]
    while stack:
        u = stack.pop()
        for _, w in adjacency.get(u, []):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if not all(v in seen for v in t):
        raise AssertionError(
            "reduction separated the query entities; edge classifier is buggy"
        )

    edges = {e for e in kept if e[0] in seen}
    nodes = {v for e in edges for v in (e[0], e[2])} | set(t)
    dist = _bfs_dist(nodes, edges, t)
    return NeighborhoodGraph(nodes=nodes, edges=edges, dist_to_tuple=dist,
                             d=H.d, query_entities=tuple(t))


def _bfs_dist(nodes, edges, sources) -> dict[int, int]:
    adj: dict[int, list[int]] = {}
    for s, _, o in edges:
        adj.setdefault(s, []).append(o)
        adj.setdefault(o, []).append(s)
    dist = {v: 0 for v in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w in adj.get(u, []):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def dump_lines(H: NeighborhoodGraph, graph: DataGraph) -> list[str]:
    """Neighborhood in triple format plus a distance comment per node."""
    out = []
    for s, l, o in sorted(H.edges):
        out.append(f"{graph.name(s)}\t{graph.label_names[l]}\t{graph.name(o)}")
    for v in sorted(H.nodes):
        out.append(f"# dist {graph.name(v)} {H.dist_to_tuple.get(v, 0)}")
    return out


def dump(H: NeighborhoodGraph, graph: DataGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in dump_lines(H, graph):
            fh.write(line + "\n")
