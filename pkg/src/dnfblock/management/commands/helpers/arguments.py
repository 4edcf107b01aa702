"""Typed argument converters and shared argument groups."""

from argparse import ArgumentParser, ArgumentTypeError, Namespace
from pathlib import Path

from ....constants import GraphFormat
from ....core.errors import DnfBlockError
from ....core.extractors import FEO, REGISTRY
from ....core.graph import DataGraph, load_graph

__all__: list[str] = [
    "add_graph_arguments",
    "add_purge_arguments",
    "existing_file",
    "feo",
    "fraction",
    "load_graphs",
    "non_negative_int",
    "positive_int",
    "unit_interval",
]


# ============================================================================
# Converters
# ============================================================================


def _number(value: str, kind: type[int] | type[float]) -> int | float:
    try:
        return kind(value)
    except ValueError as e:
        raise ArgumentTypeError(f"expected {'an integer' if kind is int else 'a number'}, got {value!r}") from e


def fraction(value: str) -> float:
    """A float in (0, 1]."""
    number = float(_number(value, float))
    if not 0 < number <= 1:
        raise ArgumentTypeError(f"must be in (0, 1], got {value}")
    return number


def unit_interval(value: str) -> float:
    """A float in [0, 1]."""
    number = float(_number(value, float))
    if not 0 <= number <= 1:
        raise ArgumentTypeError(f"must be in [0, 1], got {value}")
    return number


def positive_int(value: str) -> int:
    """An integer >= 1."""
    number = int(_number(value, int))
    if number < 1:
        raise ArgumentTypeError(f"must be >= 1, got {value}")
    return number


def non_negative_int(value: str) -> int:
    """An integer >= 0."""
    number = int(_number(value, int))
    if number < 0:
        raise ArgumentTypeError(f"must be >= 0, got {value}")
    return number


def existing_file(value: str) -> Path:
    """Path of an existing file."""
    path = Path(value)
    if not path.is_file():
        raise ArgumentTypeError(f"no such file: {value}")
    return path


def feo(value: str) -> FEO:
    """An FEO in ``Shallow>Deep1>...`` form whose extractors are all registered."""
    try:
        parsed = FEO.parse(value)
        REGISTRY.validate(parsed)
    except (DnfBlockError, ValueError) as e:
        raise ArgumentTypeError(str(e)) from e
    return parsed


# ============================================================================
# Graph inputs
# ============================================================================


def add_graph_arguments(parser: ArgumentParser) -> None:
    """Register the graph inputs; leaving out ``--graph2`` selects the one-graph scenario."""
    from ...settings import GRAPH

    group = parser.add_argument_group("graphs")
    group.add_argument("--graph1", required=True, type=existing_file, help="First (or only) graph file.")
    group.add_argument("--graph2", type=existing_file, help="Second graph file; omit to block one graph against itself.")
    group.add_argument("--nodes1", type=existing_file, help="Node file of --graph1 (tsv-edges format).")
    group.add_argument("--nodes2", type=existing_file, help="Node file of --graph2 (tsv-edges format).")
    group.add_argument("--hierarchy1", type=existing_file, help="Attribute hierarchy of --graph1 (child<TAB>parent).")
    group.add_argument("--hierarchy2", type=existing_file, help="Attribute hierarchy of --graph2 (child<TAB>parent).")
    group.add_argument(
        "--format",
        type=GraphFormat,
        choices=list(GraphFormat),
        default=GraphFormat.TSV_EDGES,
        help="Format of both graph files (default: %(default)s).",
    )
    group.add_argument(
        "--type-predicate",
        default=GRAPH.type_predicate,
        help="Triple predicate read as a node attribute (default: %(default)s).",
    )


def add_purge_arguments(parser: ArgumentParser) -> None:
    """``--purge-cap`` and ``--no-purge``."""
    from ...settings import EXECUTOR

    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--purge-cap",
        type=non_negative_int,
        default=EXECUTOR.purge_cap,
        help="Drop blocks emitting more pairs than this (default: %(default)s).",
    )
    group.add_argument("--no-purge", action="store_true", help="Keep every block.")


def load_graphs(args: Namespace) -> tuple[DataGraph, DataGraph]:
    """Load the graphs named by :func:`add_graph_arguments`; ``g2 is g1`` without ``--graph2``."""
    g1 = load_graph(
        args.graph1,
        args.format,
        nodes_path=args.nodes1,
        hierarchy_path=args.hierarchy1,
        type_predicate=args.type_predicate,
    )
    if args.graph2 is None:
        return g1, g1
    g2 = load_graph(
        args.graph2,
        args.format,
        nodes_path=args.nodes2,
        hierarchy_path=args.hierarchy2,
        type_predicate=args.type_predicate,
    )
    return g1, g2
