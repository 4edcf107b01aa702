"""Extractor algebra: shallow and deep primitives, FEOs and trail-sensitive FEOs."""

import logging
import re
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Self, TypeAlias

from nltk.stem.porter import PorterStemmer

from ..constants import Defaults, ExtractorKind
from .errors import (
    DuplicateExtractorError,
    ExtractorOutputError,
    RegistryFrozenError,
    TrailLimitError,
    UnknownExtractorError,
)
from .graph import DataGraph, EdgeLabel, NodeId

__all__: list[str] = [
    "FEO",
    "REGISTRY",
    "STOP_WORDS",
    "TFEO",
    "DeepExtractor",
    "ExtractorRegistry",
    "ShallowExtractor",
    "apply_feo",
    "apply_tfeo",
    "default_registry",
    "register_extractor",
]

logger = logging.getLogger(__name__)

ShallowFn: TypeAlias = Callable[[str], Iterable[str]]
DeepFn: TypeAlias = Callable[[frozenset[str]], Iterable[str]]

STOP_WORDS: frozenset[str] = frozenset(
    {
        "a", "an", "and", "are", "as", "at", "be", "by", "for", "from", "has", "he", "in",
        "is", "it", "its", "of", "on", "that", "the", "to", "was", "were", "will", "with",
    }
)  # fmt: skip


@dataclass(frozen=True, slots=True)
class ShallowExtractor:
    """Maps one node label to a finite string set."""

    name: str
    fn: ShallowFn
    description: str = ""


@dataclass(frozen=True, slots=True)
class DeepExtractor:
    """Maps a finite string set to a finite string set."""

    name: str
    fn: DeepFn
    description: str = ""


class ExtractorRegistry:
    """Named shallow and deep extractors, enumerated in insertion order.

    A registry accepts registrations until :meth:`freeze` is called; afterwards it is
    read-only and safe to share between threads.
    """

    def __init__(self) -> None:
        """Create an empty, writable registry."""
        self._shallow: dict[str, ShallowExtractor] = {}
        self._deep: dict[str, DeepExtractor] = {}
        self._frozen = False

    @property
    def frozen(self) -> bool:
        """Whether registrations are still accepted."""
        return self._frozen

    def register(self, kind: ExtractorKind | str, name: str, fn: ShallowFn | DeepFn, description: str = "") -> Self:
        """Add an extractor under a name unique within its kind."""
        if self._frozen:
            raise RegistryFrozenError(f"Cannot register {name!r}: registry is frozen")
        match ExtractorKind(kind):
            case ExtractorKind.SHALLOW:
                if name in self._shallow:
                    raise DuplicateExtractorError(f"Shallow extractor {name!r} is already registered")
                self._shallow[name] = ShallowExtractor(name, fn, description)  # type: ignore[arg-type]
            case ExtractorKind.DEEP:
                if name in self._deep:
                    raise DuplicateExtractorError(f"Deep extractor {name!r} is already registered")
                self._deep[name] = DeepExtractor(name, fn, description)  # type: ignore[arg-type]
        return self

    def freeze(self) -> Self:
        """Stop accepting registrations."""
        self._frozen = True
        return self

    def copy(self) -> "ExtractorRegistry":
        """Writable copy holding the same extractors."""
        clone = ExtractorRegistry()
        clone._shallow = dict(self._shallow)
        clone._deep = dict(self._deep)
        return clone

    def shallow(self, name: str) -> ShallowExtractor:
        """Look up a shallow extractor."""
        try:
            return self._shallow[name]
        except KeyError:
            raise UnknownExtractorError(f"Unknown shallow extractor {name!r}") from None

    def deep(self, name: str) -> DeepExtractor:
        """Look up a deep extractor."""
        try:
            return self._deep[name]
        except KeyError:
            raise UnknownExtractorError(f"Unknown deep extractor {name!r}") from None

    def names(self, kind: ExtractorKind | str) -> list[str]:
        """Registered names of one kind, in insertion order."""
        return list(self._shallow if ExtractorKind(kind) is ExtractorKind.SHALLOW else self._deep)

    def describe(self) -> list[tuple[ExtractorKind, str, str]]:
        """(kind, name, description) rows for every extractor."""
        return [(ExtractorKind.SHALLOW, e.name, e.description) for e in self._shallow.values()] + [
            (ExtractorKind.DEEP, e.name, e.description) for e in self._deep.values()
        ]

    def validate(self, feo: "FEO") -> None:
        """Raise if ``feo`` names an unregistered extractor."""
        self.shallow(feo.shallow)
        for name in feo.deep_chain:
            self.deep(name)


def register_extractor(registry: ExtractorRegistry, kind: ExtractorKind | str, name: str, fn: ShallowFn | DeepFn) -> ExtractorRegistry:
    """Register ``fn`` on ``registry`` and return the registry."""
    return registry.register(kind, name, fn)


# ---------------------------------------------------------------------------
# Built-in kit
# ---------------------------------------------------------------------------

_DELIMITERS = re.compile(r"[-_,;/\s]+")
_ALNUM = re.compile(r"[^\W_]+")
_DIGITS = re.compile(r"[0-9]+")
_stemmer = PorterStemmer()


@lru_cache(maxsize=65_536)
def _stem(word: str) -> str:
    return _stemmer.stem(word)


def _tokenize_string(label: str) -> Iterable[str]:
    return (token for token in _DELIMITERS.split(label) if token)


def _tokenize_alnum(label: str) -> Iterable[str]:
    return _ALNUM.findall(label)


def _exact_label(label: str) -> Iterable[str]:
    return (label,) if label else ()


def _add_one_to_integers(strings: frozenset[str]) -> Iterable[str]:
    # Non-integer tokens are ignored; originals are kept alongside the increments.
    yield from strings
    for s in strings:
        if _DIGITS.fullmatch(s):
            yield str(int(s) + 1).zfill(len(s))


def _sorted_token_bigrams(strings: frozenset[str]) -> Iterable[str]:
    if len(strings) < 2:
        return strings
    ordered = sorted(strings)
    return (f"{a} {b}" for a, b in zip(ordered, ordered[1:], strict=False))


def _char_trigrams(strings: frozenset[str]) -> Iterable[str]:
    for s in strings:
        if len(s) < 3:
            yield s
        else:
            yield from (s[i : i + 3] for i in range(len(s) - 2))


def default_registry() -> ExtractorRegistry:
    """Fresh, writable registry holding the built-in extractor kit."""
    registry = ExtractorRegistry()
    shallow = ExtractorKind.SHALLOW
    deep = ExtractorKind.DEEP
    registry.register(shallow, "TokenizeString", _tokenize_string, "split on - _ , ; / and whitespace, case kept")
    registry.register(shallow, "TokenizeAlnum", _tokenize_alnum, "maximal runs of letters and digits")
    registry.register(shallow, "ExactLabel", _exact_label, "the whole label as a single feature")
    registry.register(deep, "LowercaseSet", lambda ss: (s.lower() for s in ss), "lowercase every string")
    registry.register(deep, "First1Chars", lambda ss: (s[:1] for s in ss if s), "first character of every string")
    registry.register(deep, "First3Chars", lambda ss: (s[:3] for s in ss if s), "first three characters of every string")
    registry.register(deep, "Last3Chars", lambda ss: (s[-3:] for s in ss if s), "last three characters of every string")
    registry.register(deep, "NumericOnly", lambda ss: (s for s in ss if _DIGITS.fullmatch(s)), "keep only digit strings")
    registry.register(deep, "AddOneToIntegers", _add_one_to_integers, "add n+1 for every integer n, width kept")
    registry.register(
        deep, "RemoveStopWords", lambda ss: (s for s in ss if s.lower() not in STOP_WORDS), "drop 25 English stop words"
    )
    registry.register(deep, "StemWords", lambda ss: (_stem(s) for s in ss), "Porter stem (lowercases)")
    registry.register(deep, "SortedTokenBigrams", _sorted_token_bigrams, "adjacent pairs of the sorted set")
    registry.register(deep, "CharTrigrams", _char_trigrams, "character 3-grams; short strings kept whole")
    return registry


REGISTRY: ExtractorRegistry = default_registry().freeze()


# ---------------------------------------------------------------------------
# FEOs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True, order=True)
class FEO:
    """A shallow extractor followed by a chain of deep extractors, applied left to right.

    The textual form is ``Shallow>Deep1>Deep2``.
    """

    shallow: str
    deep_chain: tuple[str, ...] = ()

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse the ``Shallow>Deep1>...`` form."""
        parts = [part.strip() for part in text.split(">")]
        if not all(parts):
            raise ValueError(f"Malformed FEO {text!r}")
        return cls(parts[0], tuple(parts[1:]))

    def __str__(self) -> str:
        """Textual form."""
        return ">".join((self.shallow, *self.deep_chain))

    def to_dict(self) -> dict[str, Any]:
        """JSON form."""
        return {"shallow": self.shallow, "deep_chain": list(self.deep_chain)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Self:
        """Inverse of :meth:`to_dict`."""
        return cls(str(data["shallow"]), tuple(str(name) for name in data.get("deep_chain", ())))


@dataclass(frozen=True, slots=True, order=True)
class TFEO:
    """Trail-sensitive wrapper of an FEO."""

    feo: FEO

    def __str__(self) -> str:
        """Textual form of the wrapped FEO."""
        return str(self.feo)


def _capped(strings: Iterable[str], stage: str, cap: int) -> frozenset[str]:
    result = frozenset(strings)
    if len(result) > cap:
        raise ExtractorOutputError(f"{stage} produced {len(result)} strings (cap {cap})")
    return result


@lru_cache(maxsize=262_144)
def _apply_cached(registry: ExtractorRegistry, feo: FEO, label: str, cap: int) -> frozenset[str]:
    strings = _capped(registry.shallow(feo.shallow).fn(label), feo.shallow, cap)
    for name in feo.deep_chain:
        strings = _capped(registry.deep(name).fn(strings), name, cap)
    return strings


def apply_feo(
    f: FEO, label: str, registry: ExtractorRegistry = REGISTRY, *, output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP
) -> frozenset[str]:
    """Apply the shallow extractor to ``label``, then each deep extractor in order."""
    return _apply_cached(registry, f, label, output_cap)


def apply_tfeo(
    g: DataGraph,
    t: TFEO,
    v: NodeId,
    s: Sequence[EdgeLabel],
    registry: ExtractorRegistry = REGISTRY,
    *,
    max_trail_len: int = Defaults.MAX_TRAIL_LEN,
    output_cap: int = Defaults.EXTRACTOR_OUTPUT_CAP,
) -> frozenset[str]:
    """Features of ``v`` seen through the label sequence ``s``.

    The empty sequence applies the FEO to ``v``'s own label. Otherwise the result is the
    union of the FEO over the labels of every trail end, and empty when no trail exists.
    """
    if len(s) > max_trail_len:
        raise TrailLimitError(f"Label sequence {tuple(s)} is longer than max_trail_len={max_trail_len}")
    if not s:
        return apply_feo(t.feo, g.label(v), registry, output_cap=output_cap)
    registry.validate(t.feo)
    features: set[str] = set()
    for end in sorted(g.endpoints(v, s)):
        features |= apply_feo(t.feo, g.node_labels[end], registry, output_cap=output_cap)
    return frozenset(features)
