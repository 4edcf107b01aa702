"""Attribute Clustering: the non-adaptive token blocking baseline.

Edge labels of the two graphs are clustered by the cosine similarity of the token bags
their targets carry; nodes then share a block when they reach a common token through
edges of one cluster. The same candidate set is reproduced by a single DNF scheme, see
:func:`ac_as_dnf`.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass

import networkx as nx
import numpy as np

from ..constants import Defaults, Mode
from .errors import DegenerateSchemeError
from .executor import BlockIndex, BlockKey, CandidateSet, join_indexes
from .extractors import FEO, TFEO, apply_feo
from .graph import DataGraph, NodeId
from .predicates import Predicate, SetRelation
from .scheme import AttributeAwareScheme, CompositeScheme, Term

__all__: list[str] = ["EdgeLabelCluster", "ac_as_dnf", "ac_candidates", "cluster_edge_labels"]

logger = logging.getLogger(__name__)

BAG_FEO = FEO("TokenizeAlnum", ("LowercaseSet",))
KEY_FEO = FEO("TokenizeString")


@dataclass(frozen=True, slots=True)
class EdgeLabelCluster:
    """Edge labels of each graph assigned to one cluster."""

    cluster_id: int
    labels1: frozenset[str]
    labels2: frozenset[str]

    @property
    def spans_both(self) -> bool:
        """Whether both graphs contribute labels."""
        return bool(self.labels1) and bool(self.labels2)


def _token_bags(g: DataGraph) -> dict[str, Counter[str]]:
    bags: defaultdict[str, Counter[str]] = defaultdict(Counter)
    for _, target, label in g.edges:
        bags[label].update(apply_feo(BAG_FEO, g.node_labels[target]))
    return bags


def cluster_edge_labels(
    g1: DataGraph, g2: DataGraph, sim_threshold: float = Defaults.SIM_THRESHOLD, *, glue: bool = False
) -> list[EdgeLabelCluster]:
    """Link labels across graphs whose token bags reach ``sim_threshold`` cosine; clusters are the components.

    Unlinked labels stay singletons, or with ``glue`` all go to one catch-all cluster.
    """
    if not 0 < sim_threshold <= 1:
        raise ValueError(f"sim_threshold must be in (0, 1], got {sim_threshold}")
    bags1, bags2 = _token_bags(g1), _token_bags(g2)
    labels1, labels2 = sorted(bags1), sorted(bags2)
    vocabulary = sorted(set().union(*bags1.values(), *bags2.values()))
    column = {token: i for i, token in enumerate(vocabulary)}

    def vectors(labels: list[str], bags: dict[str, Counter[str]]) -> np.ndarray:
        matrix = np.zeros((len(labels), len(vocabulary)))
        for row, label in enumerate(labels):
            for token, count in bags[label].items():
                matrix[row, column[token]] = count
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)

    linked = nx.Graph()
    linked.add_nodes_from((1, label) for label in labels1)
    linked.add_nodes_from((2, label) for label in labels2)
    if labels1 and labels2 and vocabulary:
        similarity = vectors(labels1, bags1) @ vectors(labels2, bags2).T
        for i, j in zip(*np.nonzero(similarity >= sim_threshold - 1e-12), strict=True):
            linked.add_edge((1, labels1[i]), (2, labels2[j]))

    groups: list[tuple[frozenset[str], frozenset[str]]] = []
    unlinked: list[tuple[int, str]] = []
    for component in nx.connected_components(linked):
        if glue and len(component) == 1:
            unlinked.extend(component)
            continue
        groups.append(
            (frozenset(lab for side, lab in component if side == 1), frozenset(lab for side, lab in component if side == 2))
        )
    if unlinked:
        groups.append(
            (frozenset(lab for side, lab in unlinked if side == 1), frozenset(lab for side, lab in unlinked if side == 2))
        )
    groups.sort(key=lambda group: (sorted(group[0]), sorted(group[1])))
    clusters = [EdgeLabelCluster(i, l1, l2) for i, (l1, l2) in enumerate(groups)]
    logger.info(
        "Clustered %d + %d edge labels into %d clusters (%d spanning both graphs)",
        len(labels1),
        len(labels2),
        len(clusters),
        sum(c.spans_both for c in clusters),
    )
    return clusters


def _ac_index(g: DataGraph, clusters: list[EdgeLabelCluster], side: int) -> BlockIndex:
    cluster_of = {label: c.cluster_id for c in clusters for label in (c.labels1 if side == 1 else c.labels2)}
    postings: defaultdict[BlockKey, set[NodeId]] = defaultdict(set)
    for source, target, label in g.edges:
        cluster = cluster_of.get(label)
        if cluster is None:
            continue
        for token in apply_feo(KEY_FEO, g.node_labels[target]):
            postings[(0, cluster, (token,))].add(source)
    return BlockIndex(side, {key: tuple(sorted(nodes)) for key, nodes in postings.items()})


def ac_candidates(
    g1: DataGraph,
    g2: DataGraph,
    clusters: list[EdgeLabelCluster],
    purge_cap: int | None = Defaults.PURGE_CAP,
    *,
    threads: int = 0,
) -> CandidateSet:
    """Pairs sharing a (cluster, token) key after purging; AC applies no attribution gate."""
    mode = Mode.ONE_GRAPH if g1 is g2 else Mode.TWO_GRAPH
    return join_indexes(_ac_index(g1, clusters, 1), _ac_index(g2, clusters, 2), g1, g2, mode, purge_cap, threads=threads)


def ac_as_dnf(clusters: list[EdgeLabelCluster], g1: DataGraph, g2: DataGraph) -> CompositeScheme:
    """Single-member scheme equivalent to AC: one size-1 term per cluster spanning both graphs."""
    universe: dict[str, Predicate] = {}
    for cluster in clusters:
        if not cluster.spans_both:
            continue
        p = Predicate(
            SetRelation(),
            TFEO(KEY_FEO),
            TFEO(KEY_FEO),
            frozenset((label,) for label in cluster.labels1),
            frozenset((label,) for label in cluster.labels2),
        )
        universe[p.pid] = p
    if not universe:
        raise DegenerateSchemeError("No edge-label cluster spans both graphs")
    scheme = AttributeAwareScheme(tuple(Term((pid,)) for pid in universe))
    mode = Mode.ONE_GRAPH if g1 is g2 else Mode.TWO_GRAPH
    return CompositeScheme((scheme,), mode, universe)
