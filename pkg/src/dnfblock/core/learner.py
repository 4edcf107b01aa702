"""Learning composite schemes from labeled training pairs.

Learning runs in two steps. Attribution relations are derived from the attribute pairs
that training links realize. Then one DNF is learned per relation by greedy set cover
under the minimum expected Pairs Completeness constraint (``epsilon``).
"""

import logging
import math
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import pairwise
from pathlib import Path
from typing import Any, TypeAlias

import networkx as nx
import numpy as np
import numpy.typing as npt

from ..constants import Defaults, Mode
from .concurrency import worker_count
from .errors import DegenerateSchemeError, EmptyUniverseError, GraphFormatError, TrainingSetError, UnknownNodeError
from .extractors import REGISTRY, ExtractorRegistry
from .graph import DataGraph, Pair
from .predicates import AttributionRelation, FeatureCache, Predicate
from .scheme import AttributeAwareScheme, CompositeScheme, Term

__all__: list[str] = [
    "CoverageMatrix",
    "LearnerConfig",
    "LearningResult",
    "MemberReport",
    "TrainingSet",
    "build_coverage",
    "derive_attribution_relations",
    "exhaustive_min_negatives",
    "learn_composite",
    "learn_member",
    "load_training",
    "slice_training",
]

logger = logging.getLogger(__name__)

BoolArray: TypeAlias = npt.NDArray[np.bool_]


# ============================================================================
# Training data
# ============================================================================


@dataclass(frozen=True)
class TrainingSet:
    """Labeled pairs ``P_T`` and ``N_T``, stored sorted."""

    positives: tuple[Pair, ...]
    negatives: tuple[Pair, ...]

    def __post_init__(self) -> None:
        """Sort, deduplicate and check that the two sides are disjoint."""
        positives = tuple(sorted({(int(a), int(b)) for a, b in self.positives}))
        negatives = tuple(sorted({(int(a), int(b)) for a, b in self.negatives}))
        overlap = set(positives) & set(negatives)
        if overlap:
            raise TrainingSetError(f"{len(overlap)} pairs are labeled both positive and negative, e.g. {min(overlap)}")
        object.__setattr__(self, "positives", positives)
        object.__setattr__(self, "negatives", negatives)

    def validate(self, g1: DataGraph, g2: DataGraph) -> None:
        """Check node existence and, within one graph, distinctness."""
        for a, b in (*self.positives, *self.negatives):
            try:
                g1.check_node(a)
                g2.check_node(b)
            except UnknownNodeError as e:
                raise TrainingSetError(str(e)) from e
            if g1 is g2 and a == b:
                raise TrainingSetError(f"Training pair pairs node {g1.external_ids[a]!r} with itself")

    @property
    def rho(self) -> float:
        """Fraction of negatives among all labeled pairs."""
        total = len(self.positives) + len(self.negatives)
        return len(self.negatives) / total if total else 0.0


def load_training(path: Path | str, g1: DataGraph, g2: DataGraph) -> TrainingSet:
    """Read ``id1<TAB>id2<TAB>{1|0}`` lines with external node ids."""
    path = Path(path)
    positives: list[Pair] = []
    negatives: list[Pair] = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3 or fields[2].strip() not in {"0", "1"}:
            raise GraphFormatError(path, number, "expected 'id1<TAB>id2<TAB>{1|0}'")
        try:
            pair = (g1.node_id(fields[0]), g2.node_id(fields[1]))
        except UnknownNodeError as e:
            raise TrainingSetError(f"{path}:{number}: {e}") from e
        (positives if fields[2].strip() == "1" else negatives).append(pair)
    train = TrainingSet(tuple(positives), tuple(negatives))
    train.validate(g1, g2)
    logger.info("Training set %s: %d positives, %d negatives", path, len(train.positives), len(train.negatives))
    return train


@dataclass(frozen=True, slots=True)
class LearnerConfig:
    """Greedy learner parameters; ``eta`` enables the decision report."""

    epsilon: float = Defaults.EPSILON
    max_term_size: int = Defaults.MAX_TERM_SIZE
    max_terms: int = Defaults.MAX_TERMS
    eta: float | None = None
    min_support: int = Defaults.MIN_SUPPORT

    def __post_init__(self) -> None:
        """Range checks."""
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.max_term_size < 1 or self.max_terms < 1:
            raise ValueError("max_term_size and max_terms must be >= 1")
        if self.eta is not None and not 0 <= self.eta <= 1:
            raise ValueError(f"eta must be in [0, 1], got {self.eta}")
        if self.min_support < 1:
            raise ValueError(f"min_support must be >= 1, got {self.min_support}")

    def required(self, positives: int) -> int:
        """``ceil(epsilon * positives)``, robust to float rounding."""
        return max(1, math.ceil(self.epsilon * positives - 1e-9)) if positives else 0


# ============================================================================
# Coverage
# ============================================================================


@dataclass(frozen=True)
class CoverageMatrix:
    """Predicate truth values on training pairs: rows follow ``pids``, columns follow the pairs."""

    pids: tuple[str, ...]
    positives: BoolArray
    negatives: BoolArray

    def restrict(self, positive_idx: Sequence[int], negative_idx: Sequence[int] | None = None) -> "CoverageMatrix":
        """Sub-matrix over a slice of the training pairs."""
        negatives = self.negatives if negative_idx is None else self.negatives[:, list(negative_idx)]
        return CoverageMatrix(self.pids, self.positives[:, list(positive_idx)], negatives)

    def rows(self, pids: Sequence[str]) -> list[int]:
        """Row indices of ``pids``."""
        index = {pid: i for i, pid in enumerate(self.pids)}
        return [index[pid] for pid in pids]

    def term_mask(self, term: Term, negatives: bool = False) -> BoolArray:
        """Pairs satisfying every predicate of ``term``."""
        matrix = self.negatives if negatives else self.positives
        return np.logical_and.reduce(matrix[self.rows(term.predicate_ids)], axis=0)


def build_coverage(
    g1: DataGraph,
    g2: DataGraph,
    universe: Sequence[Predicate],
    train: TrainingSet,
    registry: ExtractorRegistry = REGISTRY,
    *,
    threads: int = 0,
    output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
) -> CoverageMatrix:
    """Evaluate every predicate on every training pair, in parallel over pairs."""
    if not universe:
        raise EmptyUniverseError("Cannot learn over an empty predicate universe")
    cache = FeatureCache(g1, g2, registry, output_cap=output_cap)

    def column(pair: Pair) -> BoolArray:
        return np.fromiter((cache.holds(p, *pair) for p in universe), dtype=np.bool_, count=len(universe))

    def matrix(pairs: Sequence[Pair]) -> BoolArray:
        if not pairs:
            return np.zeros((len(universe), 0), dtype=np.bool_)
        with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
            return np.stack(list(pool.map(column, pairs)), axis=1)

    coverage = CoverageMatrix(tuple(p.pid for p in universe), matrix(train.positives), matrix(train.negatives))
    logger.debug("Coverage matrix: %d predicates x %d+%d pairs", len(universe), len(train.positives), len(train.negatives))
    return coverage


# ============================================================================
# Step 1: attribution relations
# ============================================================================


def derive_attribution_relations(
    g1: DataGraph, g2: DataGraph, train: TrainingSet, min_support: int = Defaults.MIN_SUPPORT
) -> list[AttributionRelation]:
    """Group supported attribute pairs into relations by the positives that co-realize them.

    Positives realizing no supported pair fall under the empty relation, which sorts last.
    """
    realized = [
        frozenset((a, b) for a in g1.attributes[v1] for b in g2.attributes[v2]) for v1, v2 in train.positives
    ]
    support = Counter(pair for pairs in realized for pair in pairs)
    kept = {pair for pair, count in support.items() if count >= min_support}
    linked = nx.Graph()
    linked.add_nodes_from(kept)
    needs_bypass = not train.positives
    for pairs in realized:
        members = sorted(pairs & kept)
        if not members:
            needs_bypass = True
        linked.add_edges_from(pairwise(members))
    relations = sorted(
        (AttributionRelation(frozenset(component)) for component in nx.connected_components(linked)),
        key=AttributionRelation.sort_key,
    )
    if needs_bypass:
        relations.append(AttributionRelation())
    logger.info("Derived %d attribution relations from %d positives", len(relations), len(train.positives))
    return relations


def slice_training(
    g1: DataGraph, g2: DataGraph, train: TrainingSet, relations: Sequence[AttributionRelation]
) -> list[list[int]]:
    """Indices of the positives each relation covers.

    A positive joins every non-empty relation it satisfies; the empty relation gets the
    positives no other relation takes.
    """
    slices = [
        [i for i, (a, b) in enumerate(train.positives) if relation.holds(g1.attributes[a], g2.attributes[b])]
        for relation in relations
    ]
    claimed = {i for members in slices for i in members}
    unclaimed = [i for i in range(len(train.positives)) if i not in claimed]
    return [unclaimed if relation.is_empty else members for relation, members in zip(relations, slices, strict=True)]


# ============================================================================
# Step 2: greedy DNF per relation
# ============================================================================


@dataclass(frozen=True)
class MemberReport:
    """Outcome of learning one member scheme on its training slice."""

    attribution: AttributionRelation
    scheme: AttributeAwareScheme | None
    positives: int
    negatives: int
    required: int
    covered_positives: int
    covered_negatives: int
    epsilon_unmet: bool

    @property
    def pc(self) -> float:
        """Training Pairs Completeness on the slice."""
        return self.covered_positives / self.positives if self.positives else 0.0

    def to_dict(self) -> dict[str, Any]:
        """JSON form."""
        return {
            "attribution": self.attribution.to_list(),
            "dnf": None if self.scheme is None else [list(t.predicate_ids) for t in self.scheme.dnf],
            "positives": self.positives,
            "negatives": self.negatives,
            "required": self.required,
            "covered_positives": self.covered_positives,
            "covered_negatives": self.covered_negatives,
            "pc": self.pc,
            "epsilon_unmet": self.epsilon_unmet,
        }


@dataclass(frozen=True)
class _Candidates:
    terms: list[Term]
    positives: BoolArray
    negatives: BoolArray


def _enumerate_terms(coverage: CoverageMatrix, max_term_size: int, floor: float) -> _Candidates:
    """Conjunctions up to ``max_term_size`` covering at least ``floor`` positives, ordered by id tuple.

    A floor above every term's coverage drops to the best coverage found.
    """
    order = sorted(range(len(coverage.pids)), key=coverage.pids.__getitem__)
    level: list[tuple[tuple[int, ...], BoolArray, BoolArray]] = [
        ((i,), coverage.positives[i], coverage.negatives[i]) for i in order if coverage.positives[i].any()
    ]
    found = list(level)
    rank = {i: r for r, i in enumerate(order)}
    for _ in range(max_term_size - 1):
        level = [
            (rows + (j,), pos & coverage.positives[j], neg & coverage.negatives[j])
            for rows, pos, neg in level
            for j in order[rank[rows[-1]] + 1 :]
            if (pos & coverage.positives[j]).any()
        ]
        found.extend(level)
    floor = min(floor, max((int(c[1].sum()) for c in found), default=0))
    chosen = [c for c in found if c[1].sum() >= floor]
    chosen.sort(key=lambda c: tuple(sorted(coverage.pids[i] for i in c[0])))
    n_pos, n_neg = coverage.positives.shape[1], coverage.negatives.shape[1]
    return _Candidates(
        [Term(tuple(coverage.pids[i] for i in rows)) for rows, _, _ in chosen],
        np.array([c[1] for c in chosen], dtype=np.bool_).reshape(len(chosen), n_pos),
        np.array([c[2] for c in chosen], dtype=np.bool_).reshape(len(chosen), n_neg),
    )


@dataclass(frozen=True)
class _Cover:
    terms: list[Term]
    positives: BoolArray
    negatives: BoolArray

    @property
    def covered(self) -> int:
        return int(self.positives.sum())


def _greedy_cover(candidates: _Candidates, required: int, max_terms: int) -> _Cover:
    covered_pos = np.zeros(candidates.positives.shape[1], dtype=np.bool_)
    covered_neg = np.zeros(candidates.negatives.shape[1], dtype=np.bool_)
    chosen: list[Term] = []
    while covered_pos.sum() < required and len(chosen) < max_terms and candidates.terms:
        gain = (candidates.positives & ~covered_pos).sum(axis=1)
        cost = (candidates.negatives & ~covered_neg).sum(axis=1)
        score = np.where(gain > 0, (gain + 1) / (cost + 1), -np.inf)
        best = int(np.argmax(score))
        if score[best] == -np.inf:
            break
        chosen.append(candidates.terms[best])
        covered_pos |= candidates.positives[best]
        covered_neg |= candidates.negatives[best]
    return _Cover(chosen, covered_pos, covered_neg)


def learn_member(
    coverage: CoverageMatrix, cfg: LearnerConfig, attribution: AttributionRelation | None = None
) -> MemberReport:
    """Greedy set cover over candidate terms, scored by (new positives + 1) / (new negatives + 1).

    Candidates must cover at least ``|P| / max_terms`` positives. A pass stops once
    ``ceil(epsilon * |P|)`` positives are covered, ``max_terms`` terms are chosen or no term
    adds coverage; ties go to the lowest predicate-id tuple. When that pass misses the
    constraint, a second pass over every term covering a positive runs and the cover with
    more positives wins.

    Neither candidate set depends on ``epsilon``, so a higher ``epsilon`` only extends a
    pass and training PC never drops.
    """
    attribution = attribution or AttributionRelation()
    if not coverage.pids:
        raise EmptyUniverseError("Cannot learn over an empty predicate universe")
    n_pos = coverage.positives.shape[1]
    if n_pos == 0:
        raise TrainingSetError("A training slice needs at least one positive")
    required = cfg.required(n_pos)
    cover = _greedy_cover(_enumerate_terms(coverage, cfg.max_term_size, n_pos / cfg.max_terms), required, cfg.max_terms)
    if cover.covered < required:
        fallback = _greedy_cover(_enumerate_terms(coverage, cfg.max_term_size, 0), required, cfg.max_terms)
        if fallback.covered > cover.covered:
            cover = fallback
    report = MemberReport(
        attribution=attribution,
        scheme=AttributeAwareScheme(tuple(cover.terms), attribution) if cover.terms else None,
        positives=n_pos,
        negatives=coverage.negatives.shape[1],
        required=required,
        covered_positives=cover.covered,
        covered_negatives=int(cover.negatives.sum()),
        epsilon_unmet=cover.covered < required,
    )
    if report.epsilon_unmet:
        logger.warning(
            "epsilon unmet for relation %s: covered %d of %d required positives",
            attribution.to_list(),
            cover.covered,
            required,
        )
    return report


def exhaustive_min_negatives(coverage: CoverageMatrix, cfg: LearnerConfig) -> int | None:
    """Fewest negatives any DNF within the size bounds covers while meeting ``epsilon``.

    Exact search over reachable (positive, negative) coverage states; meant for tiny
    instances. Returns ``None`` when no DNF meets the constraint.
    """
    n_pos = coverage.positives.shape[1]
    required = cfg.required(n_pos)
    candidates = _enumerate_terms(coverage, cfg.max_term_size, 0)

    def bits(row: BoolArray) -> int:
        return sum(1 << int(i) for i in np.flatnonzero(row))

    terms = {(bits(p), bits(n)) for p, n in zip(candidates.positives, candidates.negatives, strict=True)}
    states: set[tuple[int, int]] = {(0, 0)}
    for _ in range(cfg.max_terms):
        states |= {(pos | tp, neg | tn) for pos, neg in states for tp, tn in terms}
    feasible = [neg.bit_count() for pos, neg in states if pos.bit_count() >= required]
    return min(feasible) if feasible else None


# ============================================================================
# Composite learning
# ============================================================================


@dataclass(frozen=True)
class LearningResult:
    """Learned composite scheme with its training report."""

    scheme: CompositeScheme
    members: tuple[MemberReport, ...]
    training_pc: float
    negative_fraction: float
    eta: float | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def decision(self) -> bool | None:
        """Decision variant: does the scheme keep the negative fraction within ``eta``."""
        return None if self.eta is None else self.negative_fraction <= self.eta

    @property
    def epsilon_unmet(self) -> bool:
        """Whether any member missed its constraint."""
        return any(m.epsilon_unmet for m in self.members)

    def to_dict(self) -> dict[str, Any]:
        """JSON form."""
        return {
            "members": [m.to_dict() for m in self.members],
            "training_pc": self.training_pc,
            "negative_fraction": self.negative_fraction,
            "eta": self.eta,
            "decision": None if self.decision is None else ("yes" if self.decision else "no"),
            "epsilon_unmet": self.epsilon_unmet,
        }


def _scheme_mask(
    scheme: CompositeScheme, coverage: CoverageMatrix, gates: list[BoolArray], negatives: bool
) -> BoolArray:
    n = (coverage.negatives if negatives else coverage.positives).shape[1]
    mask = np.zeros(n, dtype=np.bool_)
    for member, gate in zip(scheme.schemes, gates, strict=True):
        for term in member.dnf:
            mask |= gate & coverage.term_mask(term, negatives)
    return mask


def _gate(g1: DataGraph, g2: DataGraph, relation: AttributionRelation, pairs: Sequence[Pair]) -> BoolArray:
    if relation.is_empty:
        return np.ones(len(pairs), dtype=np.bool_)
    return np.fromiter(
        (relation.holds(g1.attributes[a], g2.attributes[b]) for a, b in pairs), dtype=np.bool_, count=len(pairs)
    )


def learn_composite(
    g1: DataGraph,
    g2: DataGraph,
    universe: Sequence[Predicate],
    train: TrainingSet,
    cfg: LearnerConfig | None = None,
    registry: ExtractorRegistry = REGISTRY,
    *,
    threads: int = 0,
    output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
) -> LearningResult:
    """Derive relations, slice the positives, learn one member per non-empty slice and assemble."""
    cfg = cfg or LearnerConfig()
    train.validate(g1, g2)
    if not train.positives:
        raise TrainingSetError("Learning needs at least one positive pair")
    relations = derive_attribution_relations(g1, g2, train, cfg.min_support)
    coverage = build_coverage(g1, g2, universe, train, registry, threads=threads, output_cap=output_cap)
    reports: list[MemberReport] = []
    for relation, members in zip(relations, slice_training(g1, g2, train, relations), strict=True):
        if members:
            reports.append(learn_member(coverage.restrict(members), cfg, relation))
    schemes = tuple(r.scheme for r in reports if r.scheme is not None)
    if not schemes:
        raise DegenerateSchemeError("No candidate term covers any training positive")
    mode = Mode.ONE_GRAPH if g1 is g2 else Mode.TWO_GRAPH
    composite = CompositeScheme(schemes, mode, {p.pid: p for p in universe})
    pos_gates = [_gate(g1, g2, m.attribution, train.positives) for m in composite.schemes]
    neg_gates = [_gate(g1, g2, m.attribution, train.negatives) for m in composite.schemes]
    covered_pos = int(_scheme_mask(composite, coverage, pos_gates, negatives=False).sum())
    covered_neg = int(_scheme_mask(composite, coverage, neg_gates, negatives=True).sum())
    result = LearningResult(
        scheme=composite,
        members=tuple(reports),
        training_pc=covered_pos / len(train.positives),
        negative_fraction=covered_neg / len(train.negatives) if train.negatives else 0.0,
        eta=cfg.eta,
    )
    logger.info(
        "Learned %d member schemes: training PC %.4f, negative fraction %.4f",
        len(schemes),
        result.training_pc,
        result.negative_fraction,
    )
    return result
