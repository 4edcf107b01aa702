"""Exception hierarchy shared by every core module."""

from pathlib import Path


class DnfBlockError(Exception):
    """Base class for all library errors."""


class GraphFormatError(DnfBlockError, ValueError):
    """A graph file does not parse under its declared format."""

    def __init__(self, path: Path | str, line: int, message: str) -> None:
        """Record where parsing failed."""
        self.path = Path(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class AttributeOrderError(DnfBlockError, ValueError):
    """The declared attribute hierarchy contains a cycle or a self-loop."""


class UnknownNodeError(DnfBlockError, LookupError):
    """A node id or external id is not part of the graph."""


class TrailLimitError(DnfBlockError, ValueError):
    """Trail enumeration exceeded its configured bound."""


class DuplicateExtractorError(DnfBlockError, ValueError):
    """An extractor name is already registered for its kind."""


class UnknownExtractorError(DnfBlockError, LookupError):
    """An FEO refers to an extractor that is not registered."""


class RegistryFrozenError(DnfBlockError, RuntimeError):
    """The extractor registry no longer accepts registrations."""


class ExtractorOutputError(DnfBlockError, ValueError):
    """An extractor produced more strings than the output cap allows."""


class UnsupportedRelationError(DnfBlockError, ValueError):
    """Only the overlap relation (thresholded Jaccard at zero) is supported."""


class UniverseSizeError(DnfBlockError, ValueError):
    """The predicate universe grew beyond its cap."""


class SameNodeError(DnfBlockError, ValueError):
    """A node was paired with itself in the one-graph scenario."""


class UnknownPredicateError(DnfBlockError, LookupError):
    """A scheme term refers to a predicate id missing from its universe."""


class SchemeFormatError(DnfBlockError, ValueError):
    """A serialized scheme is malformed, tampered with or of another version."""


class SchemeModeError(DnfBlockError, ValueError):
    """Graphs passed to a scheme do not match its mode."""


class DegenerateSchemeError(DnfBlockError, ValueError):
    """A scheme would have an empty disjunction."""


class EmptyUniverseError(DnfBlockError, ValueError):
    """Learning was requested over an empty predicate universe."""


class TrainingSetError(DnfBlockError, ValueError):
    """Training pairs violate disjointness, distinctness or node existence."""


class KeyExplosionError(DnfBlockError, ValueError):
    """A node generated more blocking keys for one term than the cap allows."""


class EmptyTruthError(DnfBlockError, ValueError):
    """Pairs Completeness is undefined for an empty ground truth."""


class SyntheticSpecError(DnfBlockError, ValueError):
    """Synthetic generator parameters are inconsistent."""
