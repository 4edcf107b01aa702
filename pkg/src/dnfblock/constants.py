"""Package enumerations and constants."""

from enum import StrEnum
from pathlib import Path
from typing import Final, Literal

from christianwhocodes import Version


class Package:
    """Package metadata and paths as enum for easy access."""

    BASE_DIR: Final[Path] = Path(__file__).parent.resolve()
    NAME: Final[Literal["dnfblock"]] = "dnfblock"
    DISPLAY_NAME: Final[Literal["DnfBlock"]] = "DnfBlock"
    VERSION: Final[str] = Version.get(NAME)[0]


class Defaults:
    """Library defaults; the CLI layers env/TOML configuration on top of these."""

    MAX_TRAIL_LEN: Final[int] = 2
    MAX_TRAILS: Final[int] = 10_000
    TYPE_PREDICATE: Final[str] = "type"
    EXTRACTOR_OUTPUT_CAP: Final[int] = 1_024
    UNIVERSE_CAP: Final[int] = 50_000
    EPSILON: Final[float] = 0.9
    MAX_TERM_SIZE: Final[int] = 2
    MAX_TERMS: Final[int] = 10
    MIN_SUPPORT: Final[int] = 2
    PURGE_CAP: Final[int] = 1_000
    KEY_CAP: Final[int] = 10_000
    SIM_THRESHOLD: Final[float] = 0.5
    FEOS: Final[tuple[str, ...]] = (
        "TokenizeString",
        "TokenizeString>LowercaseSet",
        "TokenizeString>AddOneToIntegers",
        "TokenizeAlnum>LowercaseSet>RemoveStopWords>StemWords",
        "ExactLabel",
    )


class GraphFormat(StrEnum):
    """Supported graph file formats."""

    TSV_EDGES = "tsv-edges"
    TRIPLES = "triples"


class Mode(StrEnum):
    """Blocking scenario: one graph against itself, or two graphs against each other."""

    ONE_GRAPH = "one-graph"
    TWO_GRAPH = "two-graph"


class Denominator(StrEnum):
    """Reduction Ratio denominators."""

    PAPER = "paper"
    EXACT = "exact"


class ExtractorKind(StrEnum):
    """Primitive extractor kinds."""

    SHALLOW = "shallow"
    DEEP = "deep"


class RelationKind(StrEnum):
    """Set-based relations usable inside a predicate."""

    OVERLAP = "overlap"


class SubCommand(StrEnum):
    """CLI subcommands."""

    INGEST = "ingest"
    LEARN = "learn"
    BLOCK = "block"
    AC_BLOCK = "ac-block"
    EVALUATE = "evaluate"
    SYNTH = "synth"
    EXTRACTORS = "extractors"
    CONFIG = "config"


class SchemeFormat:
    """Versioned on-disk formats."""

    SCHEME_VERSION: Final[int] = 1
    REPORT_VERSION: Final[int] = 1
