"""Attribute-aware and composite DNF blocking schemes."""

import json
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Self

from ..constants import Defaults, Mode, SchemeFormat
from .errors import (
    DegenerateSchemeError,
    DnfBlockError,
    SameNodeError,
    SchemeFormatError,
    SchemeModeError,
    UnknownPredicateError,
)
from .extractors import REGISTRY, ExtractorRegistry
from .graph import DataGraph, NodeId
from .predicates import AttributionRelation, FeatureCache, Predicate

__all__: list[str] = [
    "AttributeAwareScheme",
    "CompositeScheme",
    "Term",
    "check_mode",
    "deserialize_scheme",
    "eval_scheme",
    "load_scheme",
    "save_scheme",
    "serialize_scheme",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, order=True)
class Term:
    """Conjunction of predicate ids, kept sorted and unique."""

    predicate_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        """Canonicalize and require at least one predicate."""
        ids = tuple(sorted(set(self.predicate_ids)))
        if not ids:
            raise DegenerateSchemeError("A term needs at least one predicate")
        object.__setattr__(self, "predicate_ids", ids)

    def __len__(self) -> int:
        """Number of conjuncts."""
        return len(self.predicate_ids)

    def covers(self, other: "Term") -> bool:
        """Whether every pair satisfying ``other`` also satisfies this term."""
        return set(self.predicate_ids) <= set(other.predicate_ids)


def _canonical_dnf(terms: Iterable[Term | Iterable[str]]) -> tuple[Term, ...]:
    unique = sorted({t if isinstance(t, Term) else Term(tuple(t)) for t in terms})
    # A term that is a strict superset of another adds nothing to a positive DNF.
    return tuple(t for t in unique if not any(u != t and u.covers(t) for u in unique))


@dataclass(frozen=True)
class AttributeAwareScheme:
    """Positive DNF gated by an attribution relation; an empty relation always passes the gate."""

    dnf: tuple[Term, ...]
    attribution: AttributionRelation = field(default_factory=AttributionRelation)

    def __post_init__(self) -> None:
        """Sort terms and drop subsumed ones."""
        dnf = _canonical_dnf(self.dnf)
        if not dnf:
            raise DegenerateSchemeError("A scheme needs at least one term")
        object.__setattr__(self, "dnf", dnf)

    @property
    def predicate_ids(self) -> frozenset[str]:
        """Every predicate id referenced by the DNF."""
        return frozenset(pid for term in self.dnf for pid in term.predicate_ids)

    def with_term(self, term: Term) -> Self:
        """Copy with ``term`` added to the disjunction."""
        return type(self)((*self.dnf, term), self.attribution)

    def to_dict(self) -> dict[str, Any]:
        """JSON form."""
        return {"attribution": self.attribution.to_list(), "dnf": [list(t.predicate_ids) for t in self.dnf]}


@dataclass(frozen=True)
class CompositeScheme:
    """Non-empty set of attribute-aware schemes; a pair is blocked together if any member accepts it.

    ``universe`` is restricted to the predicates the members reference.
    """

    schemes: tuple[AttributeAwareScheme, ...]
    mode: Mode
    universe: Mapping[str, Predicate]

    def __post_init__(self) -> None:
        """Check references and prune the universe."""
        if not self.schemes:
            raise DegenerateSchemeError("A composite scheme needs at least one member")
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "mode", Mode(self.mode))
        referenced = frozenset().union(*(s.predicate_ids for s in self.schemes))
        missing = sorted(referenced - self.universe.keys())
        if missing:
            raise UnknownPredicateError(f"Predicate ids not in universe: {', '.join(missing)}")
        object.__setattr__(self, "universe", {pid: self.universe[pid] for pid in sorted(referenced)})

    def predicate(self, pid: str) -> Predicate:
        """Predicate behind ``pid``."""
        try:
            return self.universe[pid]
        except KeyError:
            raise UnknownPredicateError(f"Unknown predicate id {pid!r}") from None

    def term_predicates(self, term: Term) -> list[Predicate]:
        """Predicates of a term, in term order."""
        return [self.predicate(pid) for pid in term.predicate_ids]

    @property
    def all_symmetric(self) -> bool:
        """Whether every predicate reads both sides identically."""
        return all(p.is_symmetric for p in self.universe.values())


def check_mode(c: CompositeScheme, g1: DataGraph, g2: DataGraph) -> None:
    """One-graph schemes need the same graph twice; two-graph schemes need two graphs."""
    if c.mode is Mode.ONE_GRAPH and g1 is not g2:
        raise SchemeModeError("A one-graph scheme must be evaluated on a single graph (g1 is g2)")
    if c.mode is Mode.TWO_GRAPH and g1 is g2:
        raise SchemeModeError("A two-graph scheme must be evaluated on two distinct graphs")


def eval_scheme(
    c: CompositeScheme,
    g1: DataGraph,
    g2: DataGraph,
    v1: NodeId,
    v2: NodeId,
    registry: ExtractorRegistry = REGISTRY,
    *,
    cache: FeatureCache | None = None,
) -> bool:
    """True iff some member's DNF holds on ``(v1, v2)`` and its attribution gate passes."""
    check_mode(c, g1, g2)
    g1.check_node(v1)
    g2.check_node(v2)
    if g1 is g2 and v1 == v2:
        raise SameNodeError(f"Node {g1.external_ids[v1]!r} cannot be paired with itself")
    cache = cache or FeatureCache(g1, g2, registry)
    attrs1, attrs2 = g1.attributes[v1], g2.attributes[v2]
    for member in c.schemes:
        if not member.attribution.is_empty and not member.attribution.holds(attrs1, attrs2):
            continue
        for term in member.dnf:
            if all(cache.holds(p, v1, v2) for p in c.term_predicates(term)):
                return True
    return False


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def serialize_scheme(c: CompositeScheme) -> bytes:
    """Canonical JSON with sorted keys."""
    document = {
        "v": SchemeFormat.SCHEME_VERSION,
        "mode": str(c.mode),
        "schemes": [member.to_dict() for member in c.schemes],
        "universe": {pid: p.to_dict() for pid, p in c.universe.items()},
    }
    return (json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def deserialize_scheme(
    data: bytes | str, *, max_term_size: int = Defaults.MAX_TERM_SIZE, max_terms: int = Defaults.MAX_TERMS
) -> CompositeScheme:
    """Rebuild a scheme, re-verifying every predicate id against its content.

    Members with more than ``max_terms`` terms or terms with more than ``max_term_size``
    predicates are rejected.
    """
    try:
        document = json.loads(data)
    except json.JSONDecodeError as e:
        raise SchemeFormatError(f"Scheme is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise SchemeFormatError("Scheme document must be a JSON object")
    if document.get("v") != SchemeFormat.SCHEME_VERSION:
        raise SchemeFormatError(f"Unsupported scheme version {document.get('v')!r} (expected {SchemeFormat.SCHEME_VERSION})")
    try:
        universe: dict[str, Predicate] = {}
        for pid, raw in document["universe"].items():
            p = Predicate.from_dict(raw)
            if p.pid != pid:
                raise SchemeFormatError(f"Predicate {pid!r} does not match its content (hash {p.pid!r})")
            universe[pid] = p
        members = [
            AttributeAwareScheme(
                tuple(Term(tuple(ids)) for ids in raw["dnf"]),
                AttributionRelation(frozenset((a, b) for a, b in raw.get("attribution", []))),
            )
            for raw in document["schemes"]
        ]
        mode = Mode(document["mode"])
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DnfBlockError):
            raise
        raise SchemeFormatError(f"Malformed scheme: {e!r}") from e
    for i, member in enumerate(members):
        if len(member.dnf) > max_terms:
            raise SchemeFormatError(f"Member {i} has {len(member.dnf)} terms (max_terms {max_terms})")
        oversized = [t for t in member.dnf if len(t) > max_term_size]
        if oversized:
            raise SchemeFormatError(
                f"Member {i} has a term of {len(oversized[0])} predicates (max_term_size {max_term_size})"
            )
    return CompositeScheme(tuple(members), mode, universe)


def save_scheme(c: CompositeScheme, path: Path | str) -> None:
    """Write the canonical JSON form to ``path``."""
    Path(path).write_bytes(serialize_scheme(c))


def load_scheme(
    path: Path | str, *, max_term_size: int = Defaults.MAX_TERM_SIZE, max_terms: int = Defaults.MAX_TERMS
) -> CompositeScheme:
    """Read a scheme written by :func:`save_scheme`."""
    return deserialize_scheme(Path(path).read_bytes(), max_term_size=max_term_size, max_terms=max_terms)
