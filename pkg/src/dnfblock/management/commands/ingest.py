"""Load a graph, print its statistics and optionally re-serialize it."""

from argparse import ArgumentParser, Namespace

from christianwhocodes import ExitCode, Text, cprint, status

from ...constants import GraphFormat, Package, SubCommand
from ...core.graph import DataGraph, dump_graph, load_graph
from .helpers.arguments import existing_file, non_negative_int, positive_int
from .helpers.base import DnfBlockCommand


def graph_statistics(g: DataGraph, max_trail_len: int) -> list[tuple[str, str]]:
    """Rows of the statistics table."""
    return [
        ("Nodes", f"{len(g):,}"),
        ("Edges", f"{len(g.edges):,}"),
        ("Node labels", f"{len(g.vocab_nodes):,}"),
        ("Edge labels", f"{len(g.vocab_edges):,}"),
        ("Attributes", f"{len(g.vocab_attrs):,}"),
        ("Attributed nodes", f"{sum(1 for v in g.nodes if g.attributes[v]):,}"),
        ("Attribute order pairs", f"{len(g.attribute_order):,}"),
        (f"Label sequences (<= {max_trail_len})", f"{len(g.observed_sequences(max_trail_len)):,}"),
    ]


class Command(DnfBlockCommand):
    """Ingest a graph file."""

    prog = f"{Package.NAME} {SubCommand.INGEST}"
    help = "Load a graph, print statistics, list trails or write it back in normalized form."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        from ..settings import GRAPH

        parser.add_argument("graph", type=existing_file, help="Graph file.")
        parser.add_argument("--nodes", type=existing_file, help="Node file (tsv-edges format).")
        parser.add_argument("--hierarchy", type=existing_file, help="Attribute hierarchy (child<TAB>parent).")
        parser.add_argument(
            "--format", type=GraphFormat, choices=list(GraphFormat), default=GraphFormat.TSV_EDGES, help="Input format."
        )
        parser.add_argument("--type-predicate", default=GRAPH.type_predicate, help="Triple predicate read as attribute.")
        parser.add_argument(
            "--max-trail-len",
            type=non_negative_int,
            default=GRAPH.max_trail_len,
            help="Longest label sequence counted (default: %(default)s).",
        )
        parser.add_argument(
            "--trail",
            nargs=2,
            metavar=("NODE", "LABELS"),
            help="List the valid trails from NODE along comma-separated edge LABELS.",
        )
        parser.add_argument(
            "--max-trails", type=positive_int, default=GRAPH.max_trails, help="Trail enumeration cap (default: %(default)s)."
        )
        parser.add_argument("--out", help="Write the graph to this path.")
        parser.add_argument("--out-nodes", help="Node file written with --out (tsv-edges format).")
        parser.add_argument("--out-format", type=GraphFormat, choices=list(GraphFormat), help="Output format (default: input).")

    def run(self, args: Namespace) -> ExitCode:
        """Execute the ingest command."""
        with status(f"Loading {args.graph}..."):
            g = load_graph(
                args.graph,
                args.format,
                nodes_path=args.nodes,
                hierarchy_path=args.hierarchy,
                type_predicate=args.type_predicate,
            )
        rows = graph_statistics(g, args.max_trail_len)
        width = max(len(name) for name, _ in rows)
        print("\n".join(f"{name.ljust(width)}  {value}" for name, value in rows))

        if args.trail:
            node, labels = args.trail
            sequence = tuple(label for label in labels.split(",") if label)
            if not sequence:
                cprint("--trail needs at least one edge label", Text.ERROR)
                return ExitCode.ERROR
            trails = sorted(g.valid_trails(g.node_id(node), sequence, args.max_trails), key=lambda t: t.nodes)
            cprint(f"{len(trails)} trail(s) from {node!r} along {'.'.join(sequence)}", Text.INFO)
            for trail in trails:
                print(" -> ".join(g.external_ids[v] for v in trail.nodes))

        if args.out:
            dump_graph(
                g,
                args.out,
                args.out_format or args.format,
                nodes_path=args.out_nodes,
                type_predicate=args.type_predicate,
            )
            cprint(f"Wrote {args.out}", Text.SUCCESS)
        return ExitCode.SUCCESS
