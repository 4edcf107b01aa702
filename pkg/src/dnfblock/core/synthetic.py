"""Seeded synthetic graph pairs with planted links."""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import NamedTuple, TypeAlias

import numpy as np

from ..constants import GraphFormat
from .errors import SyntheticSpecError
from .executor import write_pairs
from .graph import DataGraph, GraphBuilder, NodeId, Pair, dump_graph
from .learner import TrainingSet

__all__: list[str] = [
    "DEFAULT_PROFILES",
    "SyntheticData",
    "SyntheticSpec",
    "flip_labels",
    "gen_synthetic",
    "write_synthetic",
]

logger = logging.getLogger(__name__)

Profile: TypeAlias = tuple[tuple[str, ...], tuple[str, ...]]

DEFAULT_PROFILES: tuple[Profile, ...] = (
    (("Actor",), ("Director",)),
    (("Guitarist",), ("Guitarist",)),
)

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
_SYLLABLES = [c + v for c, v in product(_CONSONANTS, _VOWELS)]


@dataclass(frozen=True, slots=True)
class SyntheticSpec:
    """Generator parameters; ``train_rho`` is the negative share of the training set."""

    n_nodes: int
    n_links: int
    attr_profiles: tuple[Profile, ...] = DEFAULT_PROFILES
    label_noise: float = 0.0
    seed: int = 0
    train_fraction: float = 0.5
    train_rho: float = 0.9
    one_graph: bool = False

    def __post_init__(self) -> None:
        """Reject inconsistent parameters."""
        if self.n_nodes < 1:
            raise SyntheticSpecError(f"n_nodes must be >= 1, got {self.n_nodes}")
        if not 0 <= self.n_links <= self.n_nodes:
            raise SyntheticSpecError(f"n_links must be in [0, n_nodes], got {self.n_links}")
        if not 0 <= self.label_noise <= 1:
            raise SyntheticSpecError(f"label_noise must be in [0, 1], got {self.label_noise}")
        if not 0 < self.train_fraction <= 1:
            raise SyntheticSpecError(f"train_fraction must be in (0, 1], got {self.train_fraction}")
        if not 0 <= self.train_rho < 1:
            raise SyntheticSpecError(f"train_rho must be in [0, 1), got {self.train_rho}")


class SyntheticData(NamedTuple):
    """Generated graphs, true links and the sampled training set; ``g2 is g1`` within one graph."""

    g1: DataGraph
    g2: DataGraph
    truth: frozenset[Pair]
    train: TrainingSet

    @property
    def held_out(self) -> frozenset[Pair]:
        """True links not used as training positives."""
        return self.truth - frozenset(self.train.positives)


def _words(count: int, rng: np.random.Generator) -> list[str]:
    """``count`` distinct pronounceable pseudo-words in random order."""
    base = len(_SYLLABLES)
    words = []
    for i in range(count):
        syllables = [_SYLLABLES[(i // base**k) % base] for k in range(3)]
        words.append("".join(syllables).capitalize())
    return [words[i] for i in rng.permutation(count)]


def _date(rng: np.random.Generator) -> list[str]:
    return [f"{rng.integers(1, 29):02d}", f"{rng.integers(1, 13):02d}", f"{rng.integers(1900, 2021)}"]


@dataclass
class _Entity:
    name: list[str]
    born: list[str]
    city: str
    profile: int


def _perturb(entity: _Entity, noise: float, vocabulary: list[str], rng: np.random.Generator) -> _Entity:
    name = [vocabulary[rng.integers(len(vocabulary))] if rng.random() < noise else token for token in entity.name]
    fresh = _date(rng)
    born = [fresh[i] if rng.random() < noise else token for i, token in enumerate(entity.born)]
    return _Entity(name, born, entity.city, entity.profile)


def _add_entity(builder: GraphBuilder, ext: str, entity: _Entity, attrs: tuple[str, ...]) -> NodeId:
    v = builder.node(ext, "")
    builder.add_attributes(v, attrs)
    for label, value in (("name", " ".join(entity.name)), ("bornOn", "-".join(entity.born)), ("livesIn", entity.city)):
        builder.add_edge(v, builder.node(f"{ext}/{label}", value), label)
    return v


def gen_synthetic(spec: SyntheticSpec) -> SyntheticData:
    """Deterministic under ``spec.seed``.

    Side one holds ``n_nodes`` entities; the first ``n_links`` of them reappear on side
    two with token edits at ``label_noise`` rate, alongside fresh distractor entities.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_nodes
    vocabulary = _words(4 * n, rng)
    cities = _words(max(5, n // 10), rng)
    profiles = spec.attr_profiles

    def entity(slot: int) -> _Entity:
        city = cities[rng.integers(len(cities))]
        profile = int(rng.integers(len(profiles))) if profiles else -1
        return _Entity([vocabulary[2 * slot], vocabulary[2 * slot + 1]], _date(rng), city, profile)

    def attrs(e: _Entity, side: int) -> tuple[str, ...]:
        return profiles[e.profile][side] if e.profile >= 0 else ()

    originals = [entity(i) for i in range(n)]
    counterparts = [_perturb(e, spec.label_noise, vocabulary, rng) for e in originals[: spec.n_links]]
    counterparts += [entity(n + i) for i in range(n - spec.n_links)]
    order = rng.permutation(n)

    b1 = GraphBuilder()
    b2 = b1 if spec.one_graph else GraphBuilder()
    side1 = [_add_entity(b1, f"a{i}", e, attrs(e, 0)) for i, e in enumerate(originals)]
    side2: dict[int, NodeId] = {}
    for j in order:
        side2[int(j)] = _add_entity(b2, f"b{j}", counterparts[j], attrs(counterparts[j], 1))
    g1 = b1.build()
    g2 = g1 if spec.one_graph else b2.build()

    def canonical(a: NodeId, b: NodeId) -> Pair:
        return (min(a, b), max(a, b)) if spec.one_graph else (a, b)

    truth = frozenset(canonical(side1[i], side2[i]) for i in range(spec.n_links))
    train = _sample_training(spec, rng, sorted(truth), side1, list(side2.values()), truth, canonical)
    logger.info(
        "Synthetic data: %d + %d nodes, %d links, %d/%d training pairs",
        len(g1),
        0 if spec.one_graph else len(g2),
        len(truth),
        len(train.positives),
        len(train.negatives),
    )
    return SyntheticData(g1, g2, truth, train)


def _sample_training(
    spec: SyntheticSpec,
    rng: np.random.Generator,
    links: list[Pair],
    side1: list[NodeId],
    side2: list[NodeId],
    truth: frozenset[Pair],
    canonical: Callable[[NodeId, NodeId], Pair],
) -> TrainingSet:
    if not links:
        return TrainingSet((), ())
    k = max(1, round(spec.train_fraction * len(links)))
    positives = [links[i] for i in sorted(rng.choice(len(links), size=k, replace=False))]
    wanted = round(k * spec.train_rho / (1 - spec.train_rho))
    negatives: set[Pair] = set()
    attempts = 0
    while len(negatives) < wanted and attempts < 50 * wanted + 100:
        attempts += 1
        a, b = side1[rng.integers(len(side1))], side2[rng.integers(len(side2))]
        pair = canonical(a, b)
        if a != b and pair not in truth:
            negatives.add(pair)
    return TrainingSet(tuple(positives), tuple(negatives))


def flip_labels(train: TrainingSet, fraction: float, seed: int = 0) -> TrainingSet:
    """Swap ``fraction`` of the positives with as many negatives."""
    if not 0 <= fraction <= 1:
        raise SyntheticSpecError(f"fraction must be in [0, 1], got {fraction}")
    rng = np.random.default_rng(seed)
    k = min(round(fraction * len(train.positives)), len(train.negatives))
    if k == 0:
        return train
    flip_pos = set(rng.choice(len(train.positives), size=k, replace=False).tolist())
    flip_neg = set(rng.choice(len(train.negatives), size=k, replace=False).tolist())
    positives = [p for i, p in enumerate(train.positives) if i not in flip_pos]
    positives += [n for i, n in enumerate(train.negatives) if i in flip_neg]
    negatives = [n for i, n in enumerate(train.negatives) if i not in flip_neg]
    negatives += [p for i, p in enumerate(train.positives) if i in flip_pos]
    return TrainingSet(tuple(positives), tuple(negatives))


def write_synthetic(data: SyntheticData, directory: Path | str) -> dict[str, Path]:
    """Write graphs (tsv-edges plus node files), truth and training files; returns the paths by role."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "graph1": directory / "g1.tsv",
        "nodes1": directory / "g1.nodes.tsv",
        "truth": directory / "truth.tsv",
        "train": directory / "train.tsv",
    }
    dump_graph(data.g1, paths["graph1"], GraphFormat.TSV_EDGES, nodes_path=paths["nodes1"])
    if data.g2 is not data.g1:
        paths["graph2"] = directory / "g2.tsv"
        paths["nodes2"] = directory / "g2.nodes.tsv"
        dump_graph(data.g2, paths["graph2"], GraphFormat.TSV_EDGES, nodes_path=paths["nodes2"])
    write_pairs(data.truth, data.g1, data.g2, paths["truth"])
    ext1, ext2 = data.g1.external_ids, data.g2.external_ids
    lines = [f"{ext1[a]}\t{ext2[b]}\t1\n" for a, b in data.train.positives]
    lines += [f"{ext1[a]}\t{ext2[b]}\t0\n" for a, b in data.train.negatives]
    paths["train"].write_text("".join(lines), "utf-8")
    return paths
