"""HTTP front end: query execution, entity autocompletion, and a health
probe.  Responses are canonical JSON so they match the CLI's --json output
byte for byte.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Query, Response
from pydantic import BaseModel, Field

from .mqg import MaximalQueryGraph
from .neighborhood import DisconnectedTupleError
from .pipeline import QueryOutcome, run_query
from .store import DataGraph, UnknownEntityError


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def mqg_payload(M: MaximalQueryGraph, graph: DataGraph) -> list[dict]:
    return [
        {
            "idx": i,
            "subj": M.node_name(e.subj, graph),
            "label": graph.label_names[e.label],
            "obj": M.node_name(e.obj, graph),
            "weight": round(e.weight, 9),
            "depth": e.depth,
        }
        for i, e in enumerate(M.edges)
    ]


def query_payload(outcome: QueryOutcome, graph: DataGraph) -> dict:
    answers = [
        {
            "entities": [graph.name(v) for v in a.entities],
            "score": round(a.score, 9),
            "rank": i + 1,
        }
        for i, a in enumerate(outcome.result.answers)
    ]
    stats = outcome.result.stats
    return {
        "answers": answers,
        "mqg": mqg_payload(outcome.mqg, graph),
        "stats": {
            "nodes_evaluated": stats.nodes_evaluated,
            "nodes_pruned": stats.nodes_pruned,
            "millis": round(stats.millis, 3),
        },
    }


class QueryRequest(BaseModel):
    tuples: list[list[str]] = Field(min_length=1)
    k: int = 10
    kprime: int = 100
    d: int = 2
    r: int = 15


def create_app(graph: DataGraph) -> FastAPI:
    app = FastAPI(title="kgqe", docs_url=None, redoc_url=None)

    def canonical(obj, status: int = 200) -> Response:
        return Response(content=canonical_json(obj), status_code=status,
                        media_type="application/json")

    @app.post("/api/query")
    def query(req: QueryRequest) -> Response:
        try:
            tuples = [graph.resolve_tuple(t) for t in req.tuples]
            outcome = run_query(graph, tuples, k=req.k, kprime=req.kprime,
                                d=req.d, r=req.r)
        except UnknownEntityError as err:
            return canonical({"error": f"unknown entity: {err.name}"}, 404)
        except (ValueError, DisconnectedTupleError) as err:
            return canonical({"error": str(err)}, 400)
        return canonical(query_payload(outcome, graph))

    @app.get("/api/autocomplete")
    def autocomplete(q: str = Query(...), limit: int = Query(10)) -> Response:
        if limit < 1:
            return canonical({"error": "limit must be >= 1"}, 400)
        matches = [name for _, name in graph.autocomplete(q, limit)]
        return canonical({"matches": matches})

    @app.get("/api/health")
    def health() -> Response:
        return canonical({
            "status": "ok",
            "entities": len(graph.entity_names),
            "edges": graph.edge_count,
        })

    return app
