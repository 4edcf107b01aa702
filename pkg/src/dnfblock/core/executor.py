"""Scheme execution by inverted indexing with block purging."""

import logging
import math
import time
from collections import defaultdict
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import TypeAlias

from ..constants import Defaults, Mode
from .concurrency import chunks, worker_count
from .errors import GraphFormatError, KeyExplosionError
from .extractors import REGISTRY, ExtractorRegistry
from .graph import DataGraph, NodeId, Pair
from .predicates import AttributionRelation, FeatureCache
from .scheme import CompositeScheme, check_mode, eval_scheme

__all__: list[str] = [
    "BlockIndex",
    "BlockKey",
    "CandidateSet",
    "block",
    "generate_candidates",
    "index_graph",
    "join_indexes",
    "oracle_candidates",
    "read_pairs",
    "write_pairs",
]

logger = logging.getLogger(__name__)

BlockKey: TypeAlias = tuple[int, int, tuple[str, ...]]
"""(member index, term index, one feature per predicate of the term)."""

_NO_GATE = AttributionRelation()


@dataclass(frozen=True)
class BlockIndex:
    """Posting lists of one side, sorted by node id."""

    side: int
    postings: dict[BlockKey, tuple[NodeId, ...]]

    def __len__(self) -> int:
        """Number of keys."""
        return len(self.postings)


@dataclass(frozen=True)
class CandidateSet:
    """Candidate pairs; within one graph every pair is stored once as (min, max)."""

    pairs: frozenset[Pair]
    mode: Mode
    purged_keys: int = field(default=0, compare=False)
    timings_ms: dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        """Canonicalize one-graph pairs and reject self-pairs."""
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is Mode.ONE_GRAPH:
            if any(a == b for a, b in self.pairs):
                raise ValueError("A one-graph candidate set cannot contain self-pairs")
            object.__setattr__(self, "pairs", frozenset((min(a, b), max(a, b)) for a, b in self.pairs))
        else:
            object.__setattr__(self, "pairs", frozenset(self.pairs))

    def __len__(self) -> int:
        """Number of pairs."""
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        """Membership, orientation-free within one graph."""
        if self.mode is Mode.ONE_GRAPH and isinstance(pair, tuple) and len(pair) == 2:
            pair = (min(pair), max(pair))
        return pair in self.pairs

    def __iter__(self) -> Iterator[Pair]:
        """Pairs in sorted order."""
        return iter(sorted(self.pairs))


def _node_keys(c: CompositeScheme, cache: FeatureCache, v: NodeId, side: int, key_cap: int) -> Iterator[BlockKey]:
    for m, member in enumerate(c.schemes):
        for t, term in enumerate(member.dnf):
            feature_sets = [sorted(cache.features(p, v, side)) for p in c.term_predicates(term)]
            if not all(feature_sets):
                continue
            count = math.prod(len(features) for features in feature_sets)
            if count > key_cap:
                raise KeyExplosionError(
                    f"Node {cache.graph(side).external_ids[v]!r} generates {count} keys for member {m} term {t} (cap {key_cap})"
                )
            for combo in product(*feature_sets):
                yield (m, t, combo)


def index_graph(
    g: DataGraph,
    c: CompositeScheme,
    side: int,
    registry: ExtractorRegistry = REGISTRY,
    *,
    key_cap: int = Defaults.KEY_CAP,
    threads: int = 0,
    output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
) -> BlockIndex:
    """Attach every node to the keys its per-term feature cross-products generate."""
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side}")
    cache = FeatureCache(g, g, registry, output_cap=output_cap)

    def index_chunk(nodes: Sequence[NodeId]) -> dict[BlockKey, list[NodeId]]:
        partial: defaultdict[BlockKey, list[NodeId]] = defaultdict(list)
        for v in nodes:
            for key in _node_keys(c, cache, v, side, key_cap):
                partial[key].append(v)
        return partial

    merged: defaultdict[BlockKey, list[NodeId]] = defaultdict(list)
    with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
        for partial in pool.map(index_chunk, chunks(g.nodes)):
            for key, nodes in partial.items():
                merged[key].extend(nodes)
    index = BlockIndex(side, {key: tuple(sorted(set(nodes))) for key, nodes in merged.items()})
    logger.debug("Indexed side %d: %d nodes, %d keys", side, len(g), len(index))
    return index


def join_indexes(
    idx1: BlockIndex,
    idx2: BlockIndex,
    g1: DataGraph,
    g2: DataGraph,
    mode: Mode,
    purge_cap: int | None,
    gates: Sequence[AttributionRelation] = (),
    *,
    threads: int = 0,
) -> CandidateSet:
    """Emit the cross pairs of every shared key whose block survives purging.

    ``gates[m]`` filters pairs joined on keys of member ``m``; with no gates every pair passes.
    """
    one_graph = Mode(mode) is Mode.ONE_GRAPH
    shared = sorted(idx1.postings.keys() & idx2.postings.keys())

    def join_chunk(keys: Sequence[BlockKey]) -> tuple[set[Pair], int]:
        pairs: set[Pair] = set()
        purged = 0
        for key in keys:
            left, right = idx1.postings[key], idx2.postings[key]
            if one_graph and left == right:
                size = len(left) * (len(left) - 1) // 2
            else:
                size = len(left) * len(right)
            if purge_cap is not None and size > purge_cap:
                purged += 1
                continue
            gate = gates[key[0]] if gates else _NO_GATE
            for a in left:
                attrs1 = g1.attributes[a]
                for b in right:
                    if one_graph and a == b:
                        continue
                    if not gate.is_empty and not gate.holds(attrs1, g2.attributes[b]):
                        continue
                    pairs.add((min(a, b), max(a, b)) if one_graph else (a, b))
        return pairs, purged

    pairs: set[Pair] = set()
    purged = 0
    with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
        for chunk_pairs, chunk_purged in pool.map(join_chunk, chunks(shared)):
            pairs |= chunk_pairs
            purged += chunk_purged
    if purged:
        logger.warning("Purged %d of %d shared keys above purge cap %s", purged, len(shared), purge_cap)
    return CandidateSet(frozenset(pairs), Mode(mode), purged_keys=purged)


def generate_candidates(
    idx1: BlockIndex,
    idx2: BlockIndex,
    g1: DataGraph,
    g2: DataGraph,
    c: CompositeScheme,
    purge_cap: int | None = Defaults.PURGE_CAP,
    *,
    threads: int = 0,
) -> CandidateSet:
    """Join the two indexes on shared keys, purge oversized blocks and apply the attribution gates.

    ``purge_cap=None`` disables purging.
    """
    check_mode(c, g1, g2)
    gates = [member.attribution for member in c.schemes]
    return join_indexes(idx1, idx2, g1, g2, c.mode, purge_cap, gates, threads=threads)


def block(
    g1: DataGraph,
    g2: DataGraph,
    c: CompositeScheme,
    registry: ExtractorRegistry = REGISTRY,
    *,
    purge_cap: int | None = Defaults.PURGE_CAP,
    key_cap: int = Defaults.KEY_CAP,
    threads: int = 0,
    output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
) -> CandidateSet:
    """Index both sides and generate candidates, recording per-stage timings."""
    check_mode(c, g1, g2)
    started = time.perf_counter()
    idx1 = index_graph(g1, c, 1, registry, key_cap=key_cap, threads=threads, output_cap=output_cap)
    if c.mode is Mode.ONE_GRAPH and c.all_symmetric:
        idx2 = BlockIndex(2, idx1.postings)
    else:
        idx2 = index_graph(g2, c, 2, registry, key_cap=key_cap, threads=threads, output_cap=output_cap)
    indexed = time.perf_counter()
    candidates = generate_candidates(idx1, idx2, g1, g2, c, purge_cap, threads=threads)
    finished = time.perf_counter()
    candidates.timings_ms.update(index=(indexed - started) * 1e3, generate=(finished - indexed) * 1e3)
    logger.info("Blocked %d candidate pairs in %.1f ms", len(candidates), (finished - started) * 1e3)
    return candidates


def oracle_candidates(
    g1: DataGraph,
    g2: DataGraph,
    c: CompositeScheme,
    registry: ExtractorRegistry = REGISTRY,
    *,
    output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
) -> CandidateSet:
    """Brute-force candidate set: every distinct pair the scheme accepts (quadratic)."""
    check_mode(c, g1, g2)
    cache = FeatureCache(g1, g2, registry, output_cap=output_cap)
    started = time.perf_counter()
    if c.mode is Mode.ONE_GRAPH:
        pairs = {
            (a, b)
            for a in g1.nodes
            for b in range(a + 1, len(g1))
            if eval_scheme(c, g1, g2, a, b, registry, cache=cache) or eval_scheme(c, g1, g2, b, a, registry, cache=cache)
        }
    else:
        pairs = {(a, b) for a in g1.nodes for b in g2.nodes if eval_scheme(c, g1, g2, a, b, registry, cache=cache)}
    return CandidateSet(frozenset(pairs), c.mode, timings_ms={"oracle": (time.perf_counter() - started) * 1e3})


def write_pairs(pairs: Iterable[Pair], g1: DataGraph, g2: DataGraph, path: Path | str) -> None:
    """Write ``id1<TAB>id2`` lines with external ids."""
    Path(path).write_text("".join(f"{g1.external_ids[a]}\t{g2.external_ids[b]}\n" for a, b in sorted(pairs)), "utf-8")


def read_pairs(path: Path | str, g1: DataGraph, g2: DataGraph, mode: Mode | None = None) -> frozenset[Pair]:
    """Read ``id1<TAB>id2`` lines; one-graph pairs come back as (min, max)."""
    path = Path(path)
    one_graph = (mode or (Mode.ONE_GRAPH if g1 is g2 else Mode.TWO_GRAPH)) is Mode.ONE_GRAPH
    pairs: set[Pair] = set()
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise GraphFormatError(path, number, "expected 'id1<TAB>id2'")
        a, b = g1.node_id(fields[0]), g2.node_id(fields[1])
        pairs.add((min(a, b), max(a, b)) if one_graph else (a, b))
    return frozenset(pairs)
