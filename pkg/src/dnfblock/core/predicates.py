"""Trail-sensitive predicates, the predicate universe and attribution relations."""

import hashlib
import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Self

from ..constants import Defaults, RelationKind
from .errors import SameNodeError, UniverseSizeError, UnsupportedRelationError
from .extractors import FEO, REGISTRY, TFEO, ExtractorRegistry, apply_tfeo
from .graph import DataGraph, LabelSequence, NodeId

__all__: list[str] = [
    "AttributionRelation",
    "FeatureCache",
    "Predicate",
    "SetRelation",
    "build_universe",
    "eval_attribution",
    "eval_predicate",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SetRelation:
    """Thresholded Jaccard; only the overlap case (threshold zero) is supported."""

    kind: RelationKind = RelationKind.OVERLAP
    threshold: float = 0.0

    def __post_init__(self) -> None:
        """Reject anything but plain overlap."""
        try:
            object.__setattr__(self, "kind", RelationKind(self.kind))
        except ValueError:
            raise UnsupportedRelationError(f"Unknown set relation {self.kind!r}") from None
        if self.threshold != 0:
            raise UnsupportedRelationError(f"Only threshold 0 is supported, got {self.threshold}")

    def __call__(self, z1: frozenset[str], z2: frozenset[str]) -> bool:
        """True iff the two sets share an element; empty sets never overlap."""
        return not z1.isdisjoint(z2)


def _sequences(seqs: Iterable[Sequence[str]]) -> frozenset[LabelSequence]:
    return frozenset(tuple(seq) for seq in seqs)


def _sorted_sequences(seqs: frozenset[LabelSequence]) -> list[list[str]]:
    return [list(seq) for seq in sorted(seqs, key=lambda s: (len(s), s))]


@dataclass(frozen=True)
class Predicate:
    """The 5-tuple (R, f1, f2, S1, S2) evaluated on a node pair.

    ``Z_i`` is the union of ``tfeo_i`` over every sequence of ``seqs_i``; the predicate
    holds iff ``R(Z_1, Z_2)``.
    """

    relation: SetRelation
    tfeo1: TFEO
    tfeo2: TFEO
    seqs1: frozenset[LabelSequence]
    seqs2: frozenset[LabelSequence]

    def __post_init__(self) -> None:
        """Normalize the sequence sets and require both to be non-empty."""
        object.__setattr__(self, "seqs1", _sequences(self.seqs1))
        object.__setattr__(self, "seqs2", _sequences(self.seqs2))
        if not self.seqs1 or not self.seqs2:
            raise ValueError("A predicate needs at least one label sequence per side")

    @classmethod
    def symmetric(cls, feo: FEO, sequence: Sequence[str] = ()) -> Self:
        """Predicate using the same FEO and the single sequence ``sequence`` on both sides."""
        seqs = frozenset({tuple(sequence)})
        return cls(SetRelation(), TFEO(feo), TFEO(feo), seqs, seqs)

    @property
    def is_symmetric(self) -> bool:
        """Whether both sides use the same t-FEO and sequence set."""
        return self.tfeo1 == self.tfeo2 and self.seqs1 == self.seqs2

    def side(self, side: int) -> tuple[TFEO, frozenset[LabelSequence]]:
        """(t-FEO, sequence set) used on side 1 or 2."""
        return (self.tfeo1, self.seqs1) if side == 1 else (self.tfeo2, self.seqs2)

    def to_dict(self) -> dict[str, Any]:
        """JSON form; ``feo`` is shared when both sides use the same FEO."""
        data: dict[str, Any] = {
            "relation": str(self.relation.kind),
            "seqs1": _sorted_sequences(self.seqs1),
            "seqs2": _sorted_sequences(self.seqs2),
        }
        if self.tfeo1 == self.tfeo2:
            data["feo"] = self.tfeo1.feo.to_dict()
        else:
            data["feo1"] = self.tfeo1.feo.to_dict()
            data["feo2"] = self.tfeo2.feo.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Self:
        """Inverse of :meth:`to_dict`; non-zero thresholds are rejected here."""
        relation = SetRelation(data.get("relation", RelationKind.OVERLAP), float(data.get("threshold", 0.0)))
        if "feo" in data:
            feo1 = feo2 = FEO.from_dict(data["feo"])
        else:
            feo1, feo2 = FEO.from_dict(data["feo1"]), FEO.from_dict(data["feo2"])
        return cls(relation, TFEO(feo1), TFEO(feo2), _sequences(data["seqs1"]), _sequences(data["seqs2"]))

    @cached_property
    def pid(self) -> str:
        """Content hash of the canonical JSON form."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:12]

    def __str__(self) -> str:
        """Compact human-readable form."""
        if self.is_symmetric:
            return f"{self.relation.kind}({self.tfeo1}, {_sorted_sequences(self.seqs1)})"
        return f"{self.relation.kind}({self.tfeo1} {_sorted_sequences(self.seqs1)}, {self.tfeo2} {_sorted_sequences(self.seqs2)})"


@dataclass(frozen=True, slots=True)
class AttributionRelation:
    """Set of (attribute, attribute) pairs gating a scheme; may be empty."""

    pairs: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self) -> None:
        """Normalize to a frozenset of string pairs."""
        object.__setattr__(self, "pairs", frozenset((str(a), str(b)) for a, b in self.pairs))

    @property
    def is_empty(self) -> bool:
        """Whether the relation has no pairs."""
        return not self.pairs

    def holds(self, attrs1: Iterable[str], attrs2: Iterable[str]) -> bool:
        """True iff some pair of ``attrs1 × attrs2`` is in the relation."""
        right = frozenset(attrs2)
        return any((a, b) in self.pairs for a in attrs1 for b in right)

    def to_list(self) -> list[list[str]]:
        """Sorted JSON form."""
        return [list(pair) for pair in sorted(self.pairs)]

    def sort_key(self) -> tuple[int, tuple[tuple[str, str], ...]]:
        """Deterministic ordering key; the empty relation sorts last."""
        return (0 if self.pairs else 1, tuple(sorted(self.pairs)))


class FeatureCache:
    """Memoized t-FEO features per (side, t-FEO, sequence, node)."""

    def __init__(
        self,
        g1: DataGraph,
        g2: DataGraph,
        registry: ExtractorRegistry = REGISTRY,
        *,
        output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
    ) -> None:
        """Bind the cache to a pair of graphs."""
        self.g1 = g1
        self.g2 = g2
        self.registry = registry
        self.output_cap = output_cap
        self._cache: dict[tuple[int, TFEO, LabelSequence, NodeId], frozenset[str]] = {}

    def graph(self, side: int) -> DataGraph:
        """Graph of side 1 or 2."""
        return self.g1 if side == 1 else self.g2

    def sequence_features(self, side: int, tfeo: TFEO, sequence: LabelSequence, v: NodeId) -> frozenset[str]:
        """Features of ``v`` along one sequence."""
        key = (side, tfeo, sequence, v)
        found = self._cache.get(key)
        if found is None:
            found = apply_tfeo(
                self.graph(side), tfeo, v, sequence, self.registry, max_trail_len=len(sequence), output_cap=self.output_cap
            )
            self._cache[key] = found
        return found

    def features(self, p: Predicate, v: NodeId, side: int) -> frozenset[str]:
        """``Z_side`` of ``p`` at node ``v``."""
        tfeo, seqs = p.side(side)
        if len(seqs) == 1:
            return self.sequence_features(side, tfeo, next(iter(seqs)), v)
        result: set[str] = set()
        for sequence in seqs:
            result |= self.sequence_features(side, tfeo, sequence, v)
        return frozenset(result)

    def holds(self, p: Predicate, v1: NodeId, v2: NodeId) -> bool:
        """Evaluate ``p`` without node checks."""
        z1 = self.features(p, v1, 1)
        return bool(z1) and p.relation(z1, self.features(p, v2, 2))


def build_universe(
    g1: DataGraph,
    g2: DataGraph,
    feos: Sequence[FEO],
    max_trail_len: int = Defaults.MAX_TRAIL_LEN,
    *,
    cap: int = Defaults.UNIVERSE_CAP,
    registry: ExtractorRegistry = REGISTRY,
) -> list[Predicate]:
    """One symmetric predicate per (FEO, sequence) over the empty sequence and every observed sequence.

    Sequences are those realized in both graphs (all of them when ``g1 is g2``); a
    sequence observed on one side only yields a constant-False predicate and is skipped.
    """
    if max_trail_len < 0:
        raise ValueError(f"max_trail_len must be >= 0, got {max_trail_len}")
    if not feos:
        raise ValueError("At least one FEO is required")
    for feo in feos:
        registry.validate(feo)
    observed = set(g1.observed_sequences(max_trail_len))
    if g2 is not g1:
        observed &= set(g2.observed_sequences(max_trail_len))
    sequences: list[LabelSequence] = [(), *sorted(observed, key=lambda s: (len(s), s))]
    universe: dict[str, Predicate] = {}
    for feo in feos:
        for sequence in sequences:
            p = Predicate.symmetric(feo, sequence)
            universe.setdefault(p.pid, p)
            if len(universe) > cap:
                raise UniverseSizeError(f"Predicate universe exceeds {cap} predicates")
    logger.info("Universe: %d predicates from %d FEOs x %d sequences", len(universe), len(feos), len(sequences))
    return list(universe.values())


def eval_predicate(
    g1: DataGraph,
    g2: DataGraph,
    p: Predicate,
    v1: NodeId,
    v2: NodeId,
    registry: ExtractorRegistry = REGISTRY,
    *,
    cache: FeatureCache | None = None,
) -> bool:
    """Whether ``p`` holds on ``(v1, v2)``; a node is never paired with itself within one graph."""
    g1.check_node(v1)
    g2.check_node(v2)
    if g1 is g2 and v1 == v2:
        raise SameNodeError(f"Node {g1.external_ids[v1]!r} cannot be paired with itself")
    return (cache or FeatureCache(g1, g2, registry)).holds(p, v1, v2)


def eval_attribution(rel: AttributionRelation, g1: DataGraph, g2: DataGraph, v1: NodeId, v2: NodeId) -> bool:
    """True iff some pair of ``A(v1) × A(v2)`` is in ``rel``; the empty relation is False."""
    return rel.holds(g1.attrs(v1), g2.attrs(v2))
