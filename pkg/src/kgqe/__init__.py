"""Query-by-example over labeled knowledge graphs."""

from .executor import Answer, SearchResult, SearchStats, best_first, breadth_first
from .lattice import LatticeState, QueryLattice
from .mqg import MaximalQueryGraph, MqgEdge, discover, merge, weigh
from .neighborhood import DisconnectedTupleError, NeighborhoodGraph, classify_edges, extract
from .pipeline import QueryOutcome, run_query
from .store import (
    DataGraph,
    TripleLoadError,
    UnknownEntityError,
    UnknownLabelError,
    load_triples,
)

__all__ = [
    "Answer",
    "DataGraph",
    "DisconnectedTupleError",
    "LatticeState",
    "MaximalQueryGraph",
    "MqgEdge",
    "NeighborhoodGraph",
    "QueryLattice",
    "QueryOutcome",
    "SearchResult",
    "SearchStats",
    "TripleLoadError",
    "UnknownEntityError",
    "UnknownLabelError",
    "best_first",
    "breadth_first",
    "classify_edges",
    "discover",
    "extract",
    "load_triples",
    "merge",
    "run_query",
    "weigh",
]

__version__ = "0.1.0"
