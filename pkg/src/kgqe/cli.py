"""Command line front end: load a triple file, run example queries, batch
evaluation with a delimited report and figures, or start the HTTP service.
"""

from __future__ import annotations

import json
import sys

import click

from . import harness, neighborhood
from .neighborhood import DisconnectedTupleError
from .pipeline import run_query
from .service import canonical_json, create_app, query_payload
from .store import TripleLoadError, UnknownEntityError, load_triples

triples_option = click.option(
    "--triples", envvar="GQBE_TRIPLES", required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Triple file (subject<TAB>label<TAB>object); "
         "defaults to $GQBE_TRIPLES.")


@click.group()
def main():
    """Query knowledge graphs by example entity tuples."""


def _load(path: str):
    try:
        return load_triples(path)
    except TripleLoadError as err:
        raise click.ClickException(str(err)) from None


@main.command()
@triples_option
def load(triples):
    """Parse and index a triple file, then print its size."""
    g = _load(triples)
    click.echo(f"entities {len(g.entity_names)} "
               f"labels {len(g.label_names)} edges {g.edge_count}")


@main.command()
@triples_option
@click.option("--tuple", "tuples", multiple=True, required=True,
              help="Example tuple, entities separated by '|'; repeatable.")
@click.option("--k", default=10, show_default=True, help="Answers to return.")
@click.option("--kprime", default=100, show_default=True,
              help="Candidates re-ranked in the second stage.")
@click.option("--d", default=2, show_default=True,
              help="Neighborhood distance bound.")
@click.option("--r", default=15, show_default=True,
              help="Query graph edge budget.")
@click.option("--json", "as_json", is_flag=True,
              help="Print the full result as canonical JSON.")
@click.option("--dump-mqg", type=click.Path(dir_okay=False),
              help="Write the discovered query graph as TSV.")
@click.option("--dump-neighborhood", type=click.Path(dir_okay=False),
              help="Write the reduced neighborhood(s) as TSV.")
@click.option("--trace-lattice", is_flag=True,
              help="Print EVAL/PRUNE/UFADD events during the search.")
def query(triples, tuples, k, kprime, d, r, as_json, dump_mqg,
          dump_neighborhood, trace_lattice):
    """Find the top-k answer tuples for the given example tuple(s)."""
    g = _load(triples)
    try:
        resolved = [g.resolve_tuple(t.split("|")) for t in tuples]
        trace: list[str] | None = [] if trace_lattice else None
        outcome = run_query(g, resolved, k=k, kprime=kprime, d=d, r=r,
                            trace=trace)
    except (UnknownEntityError, ValueError, DisconnectedTupleError) as err:
        raise click.ClickException(str(err)) from None

    if dump_neighborhood:
        with open(dump_neighborhood, "w", encoding="utf-8") as fh:
            for i, H in enumerate(outcome.neighborhoods):
                if len(outcome.neighborhoods) > 1:
                    fh.write(f"# tuple {i + 1}\n")
                for line in neighborhood.dump_lines(H, g):
                    fh.write(line + "\n")
    if dump_mqg:
        with open(dump_mqg, "w", encoding="utf-8") as fh:
            M = outcome.mqg
            for i, e in enumerate(M.edges):
                fh.write(f"{i}\t{M.node_name(e.subj, g)}"
                         f"\t{g.label_names[e.label]}"
                         f"\t{M.node_name(e.obj, g)}"
                         f"\t{json.dumps(round(e.weight, 9))}\t{e.depth}\n")

    if trace is not None:
        for line in trace:
            click.echo(line)
    if as_json:
        click.echo(canonical_json(query_payload(outcome, g)))
        return
    stats = outcome.result.stats
    for i, a in enumerate(outcome.result.answers, start=1):
        names = " | ".join(g.name(v) for v in a.entities)
        click.echo(f"{i}\t{a.score:.6f}\t{names}")
    click.echo(f"# evaluated {stats.nodes_evaluated} "
               f"pruned {stats.nodes_pruned} in {stats.millis:.1f} ms",
               err=False)


@main.command(name="eval")
@triples_option
@click.option("--suite", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSONL file with query/truth/k per line.")
@click.option("--report", required=True, type=click.Path(dir_okay=False),
              help="CSV output path.")
@click.option("--figures-dir", type=click.Path(file_okay=False),
              help="Also render summary charts (PNG) into this directory.")
@click.option("--kprime", default=100, show_default=True)
@click.option("--d", default=2, show_default=True)
@click.option("--r", default=15, show_default=True)
def eval_cmd(triples, suite, report, figures_dir, kprime, d, r):
    """Score a query suite against its ground truth."""
    g = _load(triples)
    try:
        cases = harness.load_suite(suite)
        rows = harness.run_suite(g, cases, d=d, r=r, kprime=kprime)
    except (UnknownEntityError, ValueError, DisconnectedTupleError) as err:
        raise click.ClickException(str(err)) from None
    harness.write_report(rows, report)
    click.echo(f"wrote {report} ({len(rows)} queries)")
    if figures_dir:
        for path in harness.render_figures(rows, figures_dir):
            click.echo(f"wrote {path}")


@main.command()
@triples_option
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(triples, port, host):
    """Start the HTTP API."""
    import uvicorn

    g = _load(triples)
    uvicorn.run(create_app(g), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
