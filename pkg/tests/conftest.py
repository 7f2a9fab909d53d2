"""Shared fixtures and independent oracles.

The oracles deliberately avoid the library's join/lattice machinery: answers
come from a backtracking subgraph matcher and validity from a plain
connectivity check, so the two implementations can disagree.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from kgqe import mqg as mqg_mod
from kgqe import neighborhood, pipeline
from kgqe.store import DataGraph, load_triples

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def founders() -> DataGraph:
    return load_triples(str(DATA / "founders_excerpt.tsv"))


@pytest.fixture(scope="session")
def languages() -> DataGraph:
    return load_triples(str(DATA / "languages.tsv"))


# -- independent answer oracle ----------------------------------------------

def find_embeddings(graph: DataGraph, edges: list) -> list[dict]:
    """All injective node -> entity maps preserving the labeled edges.
    `edges` are (node, label, node) with abstract node keys."""
    if not edges:
        return [{}]
    # Reorder so each edge after the first touches an already-placed node.
    ordered = [edges[0]]
    rest = list(edges[1:])
    placed = {edges[0][0], edges[0][2]}
    while rest:
        for e in rest:
            if e[0] in placed or e[2] in placed:
                break
        else:
            e = rest[0]  # disconnected input: take anything
        rest.remove(e)
        ordered.append(e)
        placed.update((e[0], e[2]))

    results = []

    def rec(i: int, mapping: dict):
        if i == len(ordered):
            results.append(dict(mapping))
            return
        u, l, v = ordered[i]
        mu, mv = mapping.get(u), mapping.get(v)
        used = set(mapping.values())
        if mu is not None and mv is not None:
            if graph.has_edge(mu, l, mv):
                rec(i + 1, mapping)
        elif mu is not None:
            for b in graph.objects(l, mu):
                if b not in used:
                    mapping[v] = b
                    rec(i + 1, mapping)
                    del mapping[v]
        elif mv is not None:
            for a in graph.subjects(l, mv):
                if a not in used:
                    mapping[u] = a
                    rec(i + 1, mapping)
                    del mapping[u]
        else:
            for a, b in graph.edges_with_label(l):
                if a not in used and b not in used:
                    mapping[u] = a
                    mapping[v] = b
                    rec(i + 1, mapping)
                    del mapping[u]
                    del mapping[v]

    rec(0, {})
    return results


def connected_with_query(edge_list: list, query_nodes) -> bool:
    if not edge_list:
        return len(query_nodes) == 1
    adj = {}
    for u, _, v in edge_list:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    if any(q not in adj for q in query_nodes):
        return False
    start = edge_list[0][0]
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj) and all(q in seen for q in query_nodes)


def valid_subsets(M) -> list[tuple[int, list]]:
    """Every (bits, edge keys) pair forming a valid query graph of M."""
    keys = [e.key for e in M.edges]
    out = []
    for bits in range(1 << len(keys)):
        chosen = [keys[i] for i in range(len(keys)) if bits >> i & 1]
        if connected_with_query(chosen, M.query_nodes):
            out.append((bits, chosen))
    return out


def exhaustive_stage1(graph: DataGraph, M, exclude=()) -> dict[tuple, float]:
    """Answer -> best structure score over every valid query graph, computed
    with the backtracking matcher."""
    weights = {e.key: e.weight for e in M.edges}
    excluded = {tuple(t) for t in exclude}
    best: dict[tuple, float] = {}
    for bits, chosen in valid_subsets(M):
        score = sum(weights[k] for k in chosen)
        if not chosen:
            # Empty graph: every entity is an answer (single-entity only).
            for eid in range(len(graph.entity_names)):
                ans = (eid,)
                if ans not in excluded and score > best.get(ans, -1.0):
                    best[ans] = score
            continue
        for emb in find_embeddings(graph, chosen):
            ans = tuple(emb[q] for q in M.query_nodes)
            if ans in excluded:
                continue
            if score > best.get(ans, -1.0):
                best[ans] = score
    return best


def graph_has_match(graph: DataGraph, edge_keys: list) -> bool:
    return bool(find_embeddings(graph, edge_keys))


# -- random instance generation ---------------------------------------------

def random_store(rng: random.Random, max_edges: int = 60) -> DataGraph:
    n_entities = rng.randint(8, 14)
    n_labels = rng.randint(3, 5)
    n_edges = rng.randint(15, max_edges)
    lines = []
    seen = set()
    for _ in range(n_edges * 3):
        s, o = rng.sample(range(n_entities), 2)
        l = rng.randrange(n_labels)
        if (s, l, o) not in seen:
            seen.add((s, l, o))
            lines.append(f"e{s}\tl{l}\te{o}")
        if len(lines) >= n_edges:
            break
    return load_triples(lines)


def random_instance(seed: int, d: int = 2, r: int = 6, max_mqg_edges: int = 8):
    """(graph, tuples, MQG) for a random store and one or two query tuples,
    or None when the draw is unusable (disconnected tuple, oversized MQG).

    Two-tuple draws merge through virtual entities; those are the instances
    where null nodes and pruning actually occur.
    """
    rng = random.Random(seed)
    graph = random_store(rng)
    arity = rng.choice((1, 1, 2, 2, 3))
    n_tuples = rng.choice((1, 2, 2))
    n = len(graph.entity_names)
    if arity * n_tuples > n:
        return None
    drawn = rng.sample(range(n), arity * n_tuples)
    tuples = [tuple(drawn[i * arity:(i + 1) * arity]) for i in range(n_tuples)]
    try:
        M, _ = pipeline.build_mqg(graph, tuples, d, r)
    except (neighborhood.DisconnectedTupleError, ValueError):
        return None
    if len(M.edges) > max_mqg_edges:
        return None
    return graph, tuples, M


@pytest.fixture(scope="session")
def random_suite():
    """A fixed pool of solvable random instances shared by the property and
    acceptance tests."""
    instances = []
    seed = 0
    while len(instances) < 220 and seed < 5000:
        inst = random_instance(seed)
        if inst is not None:
            instances.append((seed, *inst))
        seed += 1
    assert len(instances) >= 200
    return instances


# -- hand-wired lattice example ---------------------------------------------

@pytest.fixture()
def five_edge_mqg():
    """Five edges F, G, H, L, P over nodes a=0, b=1, c=2, d=3, e=4 with query
    entities a and b; F joins the query entities directly, H and L meet at c,
    G and P dangle."""
    edges = [
        mqg_mod.MqgEdge(subj=0, label=0, obj=1, base_weight=1.0, weight=1.0, depth=0),   # F
        mqg_mod.MqgEdge(subj=0, label=1, obj=3, base_weight=0.9, weight=0.9, depth=0),   # G
        mqg_mod.MqgEdge(subj=1, label=2, obj=2, base_weight=0.8, weight=0.8, depth=0),   # H
        mqg_mod.MqgEdge(subj=0, label=3, obj=2, base_weight=0.7, weight=0.7, depth=0),   # L
        mqg_mod.MqgEdge(subj=1, label=4, obj=4, base_weight=0.6, weight=0.6, depth=0),   # P
    ]
    return mqg_mod.MaximalQueryGraph(edges=edges, query_nodes=(0, 1), d=2)


F, G, H, L, P = 1, 2, 4, 8, 16
