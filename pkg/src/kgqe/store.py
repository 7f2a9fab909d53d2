"""In-memory triple store: vertically partitioned edge tables with dual hash
indexes and precomputed edge statistics (label rarity, participation degree).

The graph is immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

Edge = tuple[int, int, int]  # (subject entity id, label id, object entity id)


class TripleLoadError(ValueError):
    """Raised when the triple source is empty or a row is malformed."""


class UnknownEntityError(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown entity: {self.name!r}"


class UnknownLabelError(KeyError):
    pass


@dataclass
class DataGraph:
    entity_names: list[str] = field(default_factory=list)
    entity_ids: dict[str, int] = field(default_factory=dict)
    label_names: list[str] = field(default_factory=list)
    label_ids: dict[str, int] = field(default_factory=dict)
    # Per-label edge tables and hash indexes (vertical partitioning).
    edges_by_label: list[list[tuple[int, int]]] = field(default_factory=list)
    subj_index: list[dict[int, set[int]]] = field(default_factory=list)
    obj_index: list[dict[int, set[int]]] = field(default_factory=list)
    edge_count: int = 0
    # Undirected adjacency: node -> [(edge, other endpoint)].
    _adjacency: dict[int, list[tuple[Edge, int]]] = field(default_factory=dict)
    _sorted_names: list[tuple[str, str]] = field(default_factory=list)  # (lowercase, name)

    # -- lookups ------------------------------------------------------------

    def entity(self, name: str) -> int:
        try:
            return self.entity_ids[name]
        except KeyError:
            raise UnknownEntityError(name) from None

    def name(self, entity_id: int) -> str:
        return self.entity_names[entity_id]

    def label(self, label_name: str) -> int:
        try:
            return self.label_ids[label_name]
        except KeyError:
            raise UnknownLabelError(label_name) from None

    def resolve_tuple(self, names: Iterable[str]) -> tuple[int, ...]:
        ids = tuple(self.entity(n) for n in names)
        if not ids:
            raise ValueError("empty tuple")
        if len(set(ids)) != len(ids):
            raise ValueError("tuple entities must be pairwise distinct")
        return ids

    def label_count(self, label_id: int) -> int:
        self._check_label(label_id)
        return len(self.edges_by_label[label_id])

    def has_edge(self, subj: int, label_id: int, obj: int) -> bool:
        objs = self.subj_index[label_id].get(subj)
        return objs is not None and obj in objs

    def objects(self, label_id: int, subj: int) -> set[int]:
        return self.subj_index[label_id].get(subj, set())

    def subjects(self, label_id: int, obj: int) -> set[int]:
        return self.obj_index[label_id].get(obj, set())

    def edges_with_label(self, label_id: int) -> list[tuple[int, int]]:
        return self.edges_by_label[label_id]

    def all_edges(self) -> Iterator[Edge]:
        for l, table in enumerate(self.edges_by_label):
            for s, o in table:
                yield (s, l, o)

    def neighbors(self, node: int) -> list[tuple[Edge, int]]:
        return self._adjacency.get(node, [])

    # -- statistics ---------------------------------------------------------

    def ief(self, label_id: int) -> float:
        """Inverse edge label frequency: ln(|E| / #edges with this label)."""
        self._check_label(label_id)
        return math.log(self.edge_count / len(self.edges_by_label[label_id]))

    def participation(self, edge: Edge) -> int:
        """Number of same-label edges sharing an endpoint with `edge`,
        counting the edge itself."""
        s, l, o = edge
        self._check_label(l)
        if not self.has_edge(s, l, o):
            raise KeyError(f"edge does not exist: {edge}")
        shared_subj = len(self.subj_index[l].get(s, ()))
        shared_obj = len(self.obj_index[l].get(o, ()))
        # The edge itself is in both counts; dedup has made (s, l, o) unique.
        return shared_subj + shared_obj - 1

    def edge_weight(self, edge: Edge) -> float:
        return self.ief(edge[1]) / self.participation(edge)

    # -- search -------------------------------------------------------------

    def autocomplete(self, prefix: str, limit: int) -> list[tuple[int, str]]:
        """Case-insensitive prefix matches, sorted by name."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        low = prefix.lower()
        start = bisect.bisect_left(self._sorted_names, (low, ""))
        out = []
        for lowered, name in self._sorted_names[start:]:
            if not lowered.startswith(low):
                break
            out.append((self.entity_ids[name], name))
            if len(out) == limit:
                break
        return out

    def _check_label(self, label_id: int) -> None:
        if not 0 <= label_id < len(self.label_names):
            raise UnknownLabelError(label_id)


def _parse_rows(lines: Iterable[str]) -> Iterator[tuple[int, str, str, str]]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not all(p.strip() for p in parts):
            raise TripleLoadError(
                f"line {lineno}: expected 3 tab-separated fields, got {line!r}"
            )
        yield lineno, parts[0], parts[1], parts[2]


def load_triples(source) -> DataGraph:
    """Build a fully indexed DataGraph from a triple source.

    `source` is a path or an iterable of text lines in the format
    `subject<TAB>label<TAB>object`.  Lines starting with `#` are comments.
    Duplicate triples are stored once; self-loops are rejected.
    """
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return load_triples(list(fh))

    g = DataGraph()
    seen: set[Edge] = set()

    def intern_entity(name: str) -> int:
        eid = g.entity_ids.get(name)
        if eid is None:
            eid = len(g.entity_names)
            g.entity_ids[name] = eid
            g.entity_names.append(name)
        return eid

    for lineno, subj, label, obj in _parse_rows(source):
        if subj == obj:
            raise TripleLoadError(f"line {lineno}: self-loop {subj!r} -> {obj!r}")
        s = intern_entity(subj)
        o = intern_entity(obj)
        l = g.label_ids.get(label)
        if l is None:
            l = len(g.label_names)
            g.label_ids[label] = l
            g.label_names.append(label)
            g.edges_by_label.append([])
            g.subj_index.append({})
            g.obj_index.append({})
        edge = (s, l, o)
        if edge in seen:
            continue
        seen.add(edge)
        g.edges_by_label[l].append((s, o))
        g.subj_index[l].setdefault(s, set()).add(o)
        g.obj_index[l].setdefault(o, set()).add(s)
        g._adjacency.setdefault(s, []).append((edge, o))
        g._adjacency.setdefault(o, []).append((edge, s))
        g.edge_count += 1

    if g.edge_count == 0:
        raise TripleLoadError("empty triple source")

    for table in g.edges_by_label:
        table.sort()
    g._sorted_names = sorted((n.lower(), n) for n in g.entity_names)
    return g
