"""Pairs Completeness, Reduction Ratio, F-score and run reports."""

import json
import logging
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field

from ..constants import Denominator, Mode, SchemeFormat
from .errors import EmptyTruthError
from .executor import CandidateSet
from .graph import DataGraph, Pair

__all__: list[str] = ["MetricsReport", "compute_metrics", "format_report", "pair_space", "report_to_json"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricsReport:
    """Blocking quality of one candidate set; ``rr`` follows the chosen denominator."""

    pc: float
    rr: float
    fscore: float
    rr_paper: float
    rr_exact: float
    denominator: Denominator
    candidate_count: int
    true_positives: int
    truth_count: int
    pair_space: int
    rho: float | None = None
    runtime_ms: dict[str, float] = field(default_factory=dict)


def pair_space(g1: DataGraph, g2: DataGraph, mode: Mode, denominator: Denominator) -> int:
    """|V1|·|V2| across graphs; within one graph |V|² (paper) or |V|(|V|−1)/2 (exact)."""
    if Mode(mode) is Mode.TWO_GRAPH:
        return len(g1) * len(g2)
    n = len(g1)
    return n * n if Denominator(denominator) is Denominator.PAPER else n * (n - 1) // 2


def _reduction(candidates: int, space: int) -> float:
    if space <= 0:
        return 0.0
    return min(1.0, max(0.0, 1.0 - candidates / space))


def compute_metrics(
    c: CandidateSet,
    truth: Iterable[Pair],
    g1: DataGraph,
    g2: DataGraph,
    denominator: Denominator = Denominator.PAPER,
    *,
    runtime_ms: dict[str, float] | None = None,
) -> MetricsReport:
    """Score ``c`` against the true links; ``rho`` is the non-link share of the exact pair space."""
    one_graph = c.mode is Mode.ONE_GRAPH
    links = frozenset((min(a, b), max(a, b)) if one_graph else (a, b) for a, b in truth)
    if not links:
        raise EmptyTruthError("Pairs Completeness is undefined for an empty ground truth")
    denominator = Denominator(denominator)
    true_positives = len(c.pairs & links)
    pc = true_positives / len(links)
    paper_space = pair_space(g1, g2, c.mode, Denominator.PAPER)
    exact_space = pair_space(g1, g2, c.mode, Denominator.EXACT)
    rr_paper = _reduction(len(c), paper_space)
    rr_exact = _reduction(len(c), exact_space)
    rr = rr_paper if denominator is Denominator.PAPER else rr_exact
    report = MetricsReport(
        pc=pc,
        rr=rr,
        fscore=2 * pc * rr / (pc + rr) if pc + rr > 0 else 0.0,
        rr_paper=rr_paper,
        rr_exact=rr_exact,
        denominator=denominator,
        candidate_count=len(c),
        true_positives=true_positives,
        truth_count=len(links),
        pair_space=paper_space if denominator is Denominator.PAPER else exact_space,
        rho=1.0 - len(links) / exact_space if exact_space else None,
        runtime_ms=dict(runtime_ms if runtime_ms is not None else c.timings_ms),
    )
    logger.info("PC %.4f  RR %.4f  F %.4f over %d candidates", report.pc, report.rr, report.fscore, len(c))
    return report


def format_report(report: MetricsReport) -> str:
    """Aligned two-column table."""
    rows: list[tuple[str, str]] = [
        ("Pairs Completeness", f"{report.pc:.4f}"),
        (f"Reduction Ratio ({report.denominator})", f"{report.rr:.4f}"),
        ("F-score", f"{report.fscore:.4f}"),
        ("RR (paper)", f"{report.rr_paper:.4f}"),
        ("RR (exact)", f"{report.rr_exact:.4f}"),
        ("Candidates", f"{report.candidate_count:,}"),
        ("True links retained", f"{report.true_positives:,} / {report.truth_count:,}"),
        ("Pair space", f"{report.pair_space:,}"),
    ]
    if report.rho is not None:
        rows.append(("Sparsity rho", f"{report.rho:.6f}"))
    rows.extend((f"Time {stage} (ms)", f"{ms:.1f}") for stage, ms in sorted(report.runtime_ms.items()))
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)


def report_to_json(report: MetricsReport) -> str:
    """Versioned JSON form."""
    document = {"v": SchemeFormat.REPORT_VERSION, **asdict(report), "denominator": str(report.denominator)}
    return json.dumps(document, sort_keys=True, indent=2) + "\n"
