import random

import pytest

from conftest import random_store
from kgqe import neighborhood
from kgqe.neighborhood import DisconnectedTupleError


def founders_tuple(founders):
    return founders.resolve_tuple(["Jerry Yang", "Yahoo!"])


def edge_names(graph, edges):
    return {(graph.name(s), graph.label_names[l], graph.name(o))
            for s, l, o in edges}


def test_extract_respects_distance_bound(founders):
    t = founders_tuple(founders)
    H = neighborhood.extract(founders, t, 2)
    names = {founders.name(v) for v in H.nodes}
    # Google and Apple Inc. are three hops out, so they stay outside.
    assert "Google" not in names
    assert "Apple Inc." not in names
    assert {"Jerry Yang", "Yahoo!", "Stanford University", "San Jose",
            "Sunnyvale", "Sergey Brin", "Larry Page",
            "Steve Wozniak"} <= names
    assert H.dist_to_tuple[founders.entity("Jerry Yang")] == 0
    assert H.dist_to_tuple[founders.entity("Sergey Brin")] == 2
    # Every kept edge sits on a short-enough path to a query entity.
    for s, _, o in H.edges:
        assert min(H.dist_to_tuple[s], H.dist_to_tuple[o]) + 1 <= 2


def test_extract_rejects_bad_inputs(founders):
    t = founders_tuple(founders)
    with pytest.raises(ValueError):
        neighborhood.extract(founders, t, 0)
    with pytest.raises(ValueError):
        neighborhood.extract(founders, (0, 999), 2)


def test_extract_rejects_entities_further_than_d():
    # a - m1 - m2 - b is a distance-3 path; with d=2 no query graph can join
    # a and b, even though both ends have nonempty neighborhoods.
    from kgqe.store import load_triples
    g = load_triples(["a\tp\tm1", "m1\tp\tm2", "m2\tp\tb"])
    t = g.resolve_tuple(["a", "b"])
    with pytest.raises(DisconnectedTupleError):
        neighborhood.extract(g, t, 2)
    neighborhood.extract(g, t, 3)  # fine once the bound covers the path


def test_extract_disconnected_tuple(languages):
    t = languages.resolve_tuple(["C", "Python"])
    with pytest.raises(DisconnectedTupleError):
        neighborhood.extract(languages, t, 2)


def test_classification_on_founders(founders):
    t = founders_tuple(founders)
    H = neighborhood.extract(founders, t, 2)
    classes = neighborhood.classify_edges(H, t, 2)
    jy = founders.entity("Jerry Yang")
    sb = founders.entity("Sergey Brin")
    stanford = founders.entity("Stanford University")
    education = founders.label("education")
    e1 = (jy, education, stanford)
    e2 = (sb, education, stanford)
    # e1 leads straight to a query entity; e2 only mirrors it.
    assert (stanford, e1) in classes.important
    assert (sb, e2) in classes.important       # Brin can reach Jerry via it
    assert (stanford, e2) in classes.unimportant
    # Neutral from Jerry Yang's side: not important, no important sibling.
    assert (jy, e1) not in classes.important
    assert (jy, e1) not in classes.unimportant


def test_reduce_founders_to_four_edges(founders):
    t = founders_tuple(founders)
    H = neighborhood.extract(founders, t, 2)
    classes = neighborhood.classify_edges(H, t, 2)
    R = neighborhood.reduce(H, classes, t)
    assert edge_names(founders, R.edges) == {
        ("Jerry Yang", "founded", "Yahoo!"),
        ("Jerry Yang", "education", "Stanford University"),
        ("Jerry Yang", "places_lived", "San Jose"),
        ("Yahoo!", "headquartered_in", "Sunnyvale"),
    }
    assert R.edges <= H.edges
    assert R.dist_to_tuple[founders.entity("San Jose")] == 1


def test_reduction_never_disconnects_tuple():
    # Random graphs, random tuples: the kept component must always hold the
    # whole tuple (reduce raises otherwise).
    rng = random.Random(1234)
    runs = 0
    while runs < 120:
        graph = random_store(rng, max_edges=40)
        n = len(graph.entity_names)
        arity = rng.choice((1, 2, 2, 3))
        t = tuple(rng.sample(range(n), min(arity, n)))
        try:
            H = neighborhood.extract(graph, t, 2)
        except DisconnectedTupleError:
            continue
        classes = neighborhood.classify_edges(H, t, 2)
        R = neighborhood.reduce(H, classes, t)
        assert R.edges <= H.edges
        assert set(t) <= R.nodes
        runs += 1


def test_dump_lines_format(founders):
    t = founders_tuple(founders)
    H = neighborhood.extract(founders, t, 1)
    lines = neighborhood.dump_lines(H, founders)
    triples = [l for l in lines if not l.startswith("#")]
    dists = [l for l in lines if l.startswith("# dist ")]
    assert all(len(l.split("\t")) == 3 for l in triples)
    assert "# dist Jerry Yang 0" in dists
    assert "# dist Sunnyvale 1" in dists
