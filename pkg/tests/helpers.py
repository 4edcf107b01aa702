"""Graph builders and hypothesis strategies shared by the test modules."""

from collections.abc import Iterable, Sequence

import numpy as np
from hypothesis import strategies as st

from dnfblock.constants import Mode
from dnfblock.core.extractors import FEO
from dnfblock.core.graph import DataGraph, GraphBuilder
from dnfblock.core.predicates import AttributionRelation, Predicate
from dnfblock.core.scheme import AttributeAwareScheme, CompositeScheme, Term

LABEL_POOL = ["p", "q", "r"]
WORD_POOL = ["", "alpha", "beta", "gamma 1980", "alpha-beta", "03-01-1980", "Delta_4"]
LABELS = st.sampled_from(LABEL_POOL)
WORDS = st.sampled_from(WORD_POOL)

UNIVERSE_FEOS = [FEO("TokenizeString"), FEO("TokenizeString", ("First1Chars",)), FEO("ExactLabel")]
GATES = [
    AttributionRelation(),
    AttributionRelation(frozenset({("A", "B")})),
    AttributionRelation(frozenset({("A", "A"), ("B", "A")})),
]


def build_graph(
    nodes: dict[str, tuple[str, tuple[str, ...]]], edges: Iterable[tuple[str, str, str]] = ()
) -> DataGraph:
    """Graph from ``{ext: (label, attrs)}`` and ``(source, label, target)`` edges."""
    builder = GraphBuilder()
    for ext, (label, attrs) in nodes.items():
        builder.add_attributes(builder.node(ext, label), attrs)
    for source, label, target in edges:
        builder.add_edge(builder.node(source), builder.node(target), label)
    return builder.build()


@st.composite
def random_graphs(draw: st.DrawFn, max_nodes: int = 8) -> DataGraph:
    """Small random graphs with labeled edges and a few attributes."""
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    builder = GraphBuilder()
    for i in range(n):
        v = builder.node(f"n{i}", draw(WORDS))
        builder.add_attributes(v, draw(st.sets(st.sampled_from(["A", "B"]), max_size=2)))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), LABELS, st.integers(0, n - 1)), max_size=3 * n))
    for source, label, target in edges:
        builder.add_edge(source, target, label)
    return builder.build()


@st.composite
def seeded_graphs(draw: st.DrawFn, max_nodes: int = 200) -> DataGraph:
    """Random graphs of up to ``max_nodes`` nodes, grown from a drawn seed."""
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    builder = GraphBuilder()
    for i in range(n):
        v = builder.node(f"n{i}", WORD_POOL[rng.integers(len(WORD_POOL))])
        builder.add_attributes(v, [attr for attr in ("A", "B") if rng.random() < 0.4])
    for _ in range(int(rng.integers(0, 2 * n + 1))):
        builder.add_edge(int(rng.integers(n)), int(rng.integers(n)), LABEL_POOL[rng.integers(len(LABEL_POOL))])
    return builder.build()


@st.composite
def random_schemes(
    draw: st.DrawFn, universe: Sequence[Predicate], mode: Mode, max_terms: int = 3, max_term_size: int = 2
) -> CompositeScheme:
    """Composite schemes of one or two members drawn from ``universe`` within the size bounds."""
    pids = sorted(p.pid for p in universe)
    term = st.lists(st.sampled_from(pids), min_size=1, max_size=max_term_size, unique=True).map(lambda ids: Term(tuple(ids)))
    member = st.builds(
        AttributeAwareScheme,
        st.lists(term, min_size=1, max_size=max_terms).map(tuple),
        st.sampled_from(GATES),
    )
    members = draw(st.lists(member, min_size=1, max_size=2))
    return CompositeScheme(tuple(members), mode, {p.pid: p for p in universe})
