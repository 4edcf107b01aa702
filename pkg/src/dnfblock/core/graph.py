"""Labeled, directed, attributed data graphs.

A graph is the 7-tuple (V, E, l_V, A_V, Σ_V, Σ_E, Σ_A): dense integer nodes, a set
of labeled directed edges, a total node-label mapping, a node-attribute mapping with
an optional partial order over attributes, and the three observed vocabularies.
Graphs are immutable once built; every query is a pure read.
"""

import logging
import re
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import TypeAlias

import networkx as nx

from ..constants import Defaults, GraphFormat
from .errors import AttributeOrderError, GraphFormatError, TrailLimitError, UnknownNodeError

__all__: list[str] = [
    "DataGraph",
    "Edge",
    "EdgeLabel",
    "GraphBuilder",
    "LabelSequence",
    "NodeId",
    "Pair",
    "Trail",
    "dump_graph",
    "last_nodes",
    "load_graph",
    "valid_trails",
]

logger = logging.getLogger(__name__)

NodeId: TypeAlias = int
EdgeLabel: TypeAlias = str
LabelSequence: TypeAlias = tuple[EdgeLabel, ...]
Edge: TypeAlias = tuple[NodeId, NodeId, EdgeLabel]
Pair: TypeAlias = tuple[NodeId, NodeId]


@dataclass(frozen=True, slots=True)
class Trail:
    """Alternating node/edge-label walk; nodes may repeat."""

    nodes: tuple[NodeId, ...]
    labels: LabelSequence

    def __post_init__(self) -> None:
        """Check the alternation invariant."""
        if not self.labels or len(self.nodes) != len(self.labels) + 1:
            raise ValueError(f"Malformed trail: {len(self.nodes)} nodes for {len(self.labels)} edge labels")

    @property
    def start(self) -> NodeId:
        """First node of the trail."""
        return self.nodes[0]

    @property
    def last(self) -> NodeId:
        """Terminating node of the trail."""
        return self.nodes[-1]


@dataclass(frozen=True)
class DataGraph:
    """Immutable data graph; node ``i`` is described by position ``i`` of each tuple."""

    external_ids: tuple[str, ...]
    node_labels: tuple[str, ...]
    attributes: tuple[frozenset[str], ...]
    edges: frozenset[Edge]
    attribute_order: frozenset[tuple[str, str]] = frozenset()
    _index: dict[str, NodeId] = field(init=False, repr=False, compare=False)
    _out: dict[NodeId, dict[EdgeLabel, tuple[NodeId, ...]]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Validate the tuple shapes and build the adjacency index."""
        n = len(self.external_ids)
        if len(self.node_labels) != n or len(self.attributes) != n:
            raise ValueError("external_ids, node_labels and attributes must have one entry per node")
        index = {ext: v for v, ext in enumerate(self.external_ids)}
        if len(index) != n:
            raise ValueError("external ids must be unique")
        out: defaultdict[NodeId, defaultdict[EdgeLabel, list[NodeId]]] = defaultdict(lambda: defaultdict(list))
        for source, target, label in sorted(self.edges):
            if not (0 <= source < n and 0 <= target < n):
                raise UnknownNodeError(f"Edge ({source}, {target}, {label!r}) refers to a node outside the graph")
            out[source][label].append(target)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_out", {s: {lab: tuple(ts) for lab, ts in by.items()} for s, by in out.items()})

    # ============================================================================
    # Vocabularies
    # ============================================================================

    @cached_property
    def vocab_nodes(self) -> frozenset[str]:
        """Σ_V: every non-empty node label."""
        return frozenset(label for label in self.node_labels if label)

    @cached_property
    def vocab_edges(self) -> frozenset[str]:
        """Σ_E: every edge label."""
        return frozenset(label for _, _, label in self.edges)

    @cached_property
    def vocab_attrs(self) -> frozenset[str]:
        """Σ_A: every attribute, including those only named by the hierarchy."""
        attrs: set[str] = set().union(*self.attributes) if self.attributes else set()
        for child, ancestor in self.attribute_order:
            attrs.update((child, ancestor))
        return frozenset(attrs)

    # ============================================================================
    # Node access
    # ============================================================================

    @property
    def nodes(self) -> range:
        """All node ids."""
        return range(len(self.external_ids))

    def __len__(self) -> int:
        """Number of nodes."""
        return len(self.external_ids)

    def node_id(self, external_id: str) -> NodeId:
        """Resolve an external id to its node id."""
        try:
            return self._index[external_id]
        except KeyError:
            raise UnknownNodeError(f"Unknown node {external_id!r}") from None

    def check_node(self, v: NodeId) -> None:
        """Raise if ``v`` is not a node of this graph."""
        if not 0 <= v < len(self.external_ids):
            raise UnknownNodeError(f"Node id {v} is not in a graph of {len(self)} nodes")

    def external_id(self, v: NodeId) -> str:
        """External id of node ``v``."""
        self.check_node(v)
        return self.external_ids[v]

    def label(self, v: NodeId) -> str:
        """l_V(v)."""
        self.check_node(v)
        return self.node_labels[v]

    def attrs(self, v: NodeId) -> frozenset[str]:
        """A_V(v)."""
        self.check_node(v)
        return self.attributes[v]

    def successors(self, v: NodeId, label: EdgeLabel) -> tuple[NodeId, ...]:
        """Targets of ``v``'s out-edges carrying ``label``."""
        return self._out.get(v, {}).get(label, ())

    def is_descendant(self, child: str, ancestor: str) -> bool:
        """Whether the stored partial order places ``child`` strictly below ``ancestor``."""
        return (child, ancestor) in self.attribute_order

    # ============================================================================
    # Trails
    # ============================================================================

    def valid_trails(self, v: NodeId, sequence: Sequence[EdgeLabel], limit: int = Defaults.MAX_TRAILS) -> frozenset[Trail]:
        """Every trail starting at ``v`` whose edge labels spell ``sequence``."""
        self.check_node(v)
        labels = tuple(sequence)
        if not labels:
            raise ValueError("A trail needs at least one edge label")
        found: set[Trail] = set()
        stack: list[tuple[NodeId, ...]] = [(v,)]
        while stack:
            prefix = stack.pop()
            depth = len(prefix) - 1
            if depth == len(labels):
                found.add(Trail(prefix, labels))
                if len(found) > limit:
                    raise TrailLimitError(f"More than {limit} trails from node {self.external_ids[v]!r} along {labels}")
                continue
            stack.extend(prefix + (target,) for target in self.successors(prefix[-1], labels[depth]))
        return frozenset(found)

    def endpoints(self, v: NodeId, sequence: Sequence[EdgeLabel]) -> frozenset[NodeId]:
        """``last_nodes(valid_trails(v, sequence))`` computed as a frontier walk."""
        self.check_node(v)
        frontier: set[NodeId] = {v}
        for label in sequence:
            frontier = {target for node in frontier for target in self.successors(node, label)}
            if not frontier:
                break
        return frozenset(frontier)

    def observed_sequences(self, max_len: int) -> list[LabelSequence]:
        """Edge-label sequences of length 1..max_len realized by at least one trail, sorted."""
        if max_len < 1:
            return []
        tier: set[tuple[LabelSequence, NodeId]] = {((label,), target) for _, target, label in self.edges}
        observed: set[LabelSequence] = {sequence for sequence, _ in tier}
        for _ in range(max_len - 1):
            tier = {
                (sequence + (label,), target)
                for sequence, node in tier
                for label, targets in self._out.get(node, {}).items()
                for target in targets
            }
            if not tier:
                break
            observed.update(sequence for sequence, _ in tier)
        return sorted(observed, key=lambda s: (len(s), s))


def valid_trails(g: DataGraph, v: NodeId, sequence: Sequence[EdgeLabel], limit: int = Defaults.MAX_TRAILS) -> frozenset[Trail]:
    """Set of valid trails for node ``v`` and label sequence ``sequence``."""
    return g.valid_trails(v, sequence, limit)


def last_nodes(trails: Iterable[Trail]) -> frozenset[NodeId]:
    """Terminating nodes of ``trails``, as a set."""
    return frozenset(trail.last for trail in trails)


class GraphBuilder:
    """Accumulates nodes, edges and attributes, then freezes them into a :class:`DataGraph`."""

    def __init__(self) -> None:
        """Start from an empty graph."""
        self._ids: dict[str, NodeId] = {}
        self._labels: list[str] = []
        self._attrs: list[set[str]] = []
        self._edges: set[Edge] = set()
        self._order: set[tuple[str, str]] = set()

    def node(self, external_id: str, label: str | None = None) -> NodeId:
        """Return the id of ``external_id``, creating it on first appearance."""
        v = self._ids.get(external_id)
        if v is None:
            v = len(self._labels)
            self._ids[external_id] = v
            self._labels.append("")
            self._attrs.append(set())
        if label is not None:
            self._labels[v] = label
        return v

    def add_attributes(self, v: NodeId, attrs: Iterable[str]) -> None:
        """Extend A_V(v)."""
        self._attrs[v].update(a for a in attrs if a)

    def add_edge(self, source: NodeId, target: NodeId, label: EdgeLabel) -> None:
        """Add a labeled edge; duplicates collapse."""
        self._edges.add((source, target, label))

    def add_order(self, child: str, parent: str) -> None:
        """Declare ``child`` below ``parent`` in the attribute hierarchy."""
        self._order.add((child, parent))

    def build(self) -> DataGraph:
        """Freeze into a graph, closing the attribute hierarchy transitively."""
        hierarchy = nx.DiGraph()
        hierarchy.add_edges_from(self._order)
        if self._order and not nx.is_directed_acyclic_graph(hierarchy):
            cycle = nx.find_cycle(hierarchy)
            raise AttributeOrderError(f"Attribute hierarchy has a cycle: {' -> '.join(a for a, _ in cycle)}")
        closure = nx.transitive_closure_dag(hierarchy) if self._order else hierarchy
        return DataGraph(
            external_ids=tuple(self._ids),
            node_labels=tuple(self._labels),
            attributes=tuple(frozenset(a) for a in self._attrs),
            edges=frozenset(self._edges),
            attribute_order=frozenset(closure.edges()),
        )


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

_TRIPLE = re.compile(r'^(?P<s>[^\s"]+)\s+(?P<p>[^\s"]+)\s+(?P<o>"(?:[^"\\]|\\.)*"|[^\s"]+)\s*(?:\.)?\s*$')


def _lines(path: Path) -> list[tuple[int, str]]:
    """Numbered, non-blank, non-comment lines."""
    return [
        (number, line.rstrip("\r\n"))
        for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1)
        if line.strip() and not line.lstrip().startswith("#")
    ]


def _unquote(token: str) -> str:
    return re.sub(r"\\(.)", r"\1", token[1:-1])


def _read_tsv_nodes(builder: GraphBuilder, path: Path) -> None:
    for number, line in _lines(path):
        fields = line.split("\t")
        if len(fields) > 3 or not fields[0]:
            raise GraphFormatError(path, number, "expected 'node<TAB>label<TAB>attr1,attr2,...'")
        v = builder.node(fields[0], fields[1] if len(fields) > 1 else "")
        if len(fields) == 3:
            builder.add_attributes(v, (a.strip() for a in fields[2].split(",")))


def _read_tsv_edges(builder: GraphBuilder, path: Path) -> None:
    for number, line in _lines(path):
        fields = line.split("\t")
        if len(fields) != 3 or not all(fields):
            raise GraphFormatError(path, number, "expected 'source<TAB>label<TAB>target'")
        source, label, target = fields
        builder.add_edge(builder.node(source), builder.node(target), label)


def _read_triples(builder: GraphBuilder, path: Path, type_predicate: str) -> None:
    for number, line in _lines(path):
        match = _TRIPLE.match(line.strip())
        if match is None:
            raise GraphFormatError(path, number, "expected 'subject predicate object .'")
        subject, predicate, obj = match.group("s", "p", "o")
        v = builder.node(subject, subject)
        literal = obj.startswith('"')
        if predicate == type_predicate:
            builder.add_attributes(v, [_unquote(obj) if literal else obj])
        elif literal:
            builder.add_edge(v, builder.node(obj, _unquote(obj)), predicate)
        else:
            builder.add_edge(v, builder.node(obj, obj), predicate)


def _read_hierarchy(builder: GraphBuilder, path: Path) -> None:
    for number, line in _lines(path):
        fields = line.split("\t")
        if len(fields) != 2 or not all(fields):
            raise GraphFormatError(path, number, "expected 'child_attr<TAB>parent_attr'")
        if fields[0] == fields[1]:
            raise AttributeOrderError(f"{path}:{number}: attribute {fields[0]!r} declared as its own parent")
        builder.add_order(fields[0], fields[1])


def load_graph(
    path: Path | str,
    format: GraphFormat = GraphFormat.TSV_EDGES,
    *,
    nodes_path: Path | str | None = None,
    hierarchy_path: Path | str | None = None,
    type_predicate: str = Defaults.TYPE_PREDICATE,
) -> DataGraph:
    """Load a graph; node ids follow first appearance (node metadata file first, then edges)."""
    builder = GraphBuilder()
    match GraphFormat(format):
        case GraphFormat.TSV_EDGES:
            if nodes_path is not None:
                _read_tsv_nodes(builder, Path(nodes_path))
            _read_tsv_edges(builder, Path(path))
        case GraphFormat.TRIPLES:
            _read_triples(builder, Path(path), type_predicate)
    if hierarchy_path is not None:
        _read_hierarchy(builder, Path(hierarchy_path))
    graph = builder.build()
    logger.info("Loaded %s: %d nodes, %d edges, %d edge labels", path, len(graph), len(graph.edges), len(graph.vocab_edges))
    return graph


def dump_graph(
    g: DataGraph,
    path: Path | str,
    format: GraphFormat = GraphFormat.TSV_EDGES,
    *,
    nodes_path: Path | str | None = None,
    hierarchy_path: Path | str | None = None,
    type_predicate: str = Defaults.TYPE_PREDICATE,
) -> None:
    """Write ``g`` so that :func:`load_graph` with the same arguments rebuilds it.

    The tsv-edges format needs ``nodes_path`` to preserve labels, attributes, isolated
    nodes and id order. The triples format keeps structure, attributes and literal
    labels; a non-literal node is relabeled with its external id.
    """
    edges = sorted(g.edges)
    match GraphFormat(format):
        case GraphFormat.TSV_EDGES:
            Path(path).write_text("".join(f"{g.external_ids[s]}\t{lab}\t{g.external_ids[t]}\n" for s, t, lab in edges), "utf-8")
            if nodes_path is not None:
                Path(nodes_path).write_text(
                    "".join(
                        f"{g.external_ids[v]}\t{g.node_labels[v]}\t{','.join(sorted(g.attributes[v]))}\n" for v in g.nodes
                    ),
                    "utf-8",
                )
        case GraphFormat.TRIPLES:
            lines: list[str] = []
            for v in g.nodes:
                lines.extend(f"{g.external_ids[v]} {type_predicate} {attr} ." for attr in sorted(g.attributes[v]))
            lines.extend(f"{g.external_ids[s]} {lab} {g.external_ids[t]} ." for s, t, lab in edges)
            Path(path).write_text("".join(line + "\n" for line in lines), "utf-8")
    if hierarchy_path is not None:
        Path(hierarchy_path).write_text("".join(f"{c}\t{p}\n" for c, p in sorted(g.attribute_order)), "utf-8")
