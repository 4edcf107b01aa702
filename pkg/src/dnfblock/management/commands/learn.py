"""Learn a composite DNF blocking scheme from labeled training pairs."""

import json
from argparse import ArgumentParser, Namespace
from pathlib import Path

from christianwhocodes import ExitCode, Text, cprint, status

from ...constants import Package, SchemeFormat, SubCommand
from ...core.extractors import FEO
from ...core.learner import LearnerConfig, LearningResult, learn_composite, load_training
from ...core.predicates import build_universe
from ...core.scheme import save_scheme
from .helpers.arguments import (
    add_graph_arguments,
    existing_file,
    feo,
    fraction,
    load_graphs,
    non_negative_int,
    positive_int,
    unit_interval,
)
from .helpers.base import DnfBlockCommand


def format_learning(result: LearningResult) -> str:
    """Per-member table followed by the global training figures."""
    header = ("member", "attribution", "terms", "positives", "covered", "negatives hit", "eps")
    rows = [header]
    for i, member in enumerate(result.members):
        relation = ", ".join(f"{a}~{b}" for a, b in member.attribution.to_list()) or "(any)"
        rows.append(
            (
                str(i),
                relation,
                "-" if member.scheme is None else str(len(member.scheme.dnf)),
                str(member.positives),
                f"{member.covered_positives} ({member.pc:.2%})",
                f"{member.covered_negatives}/{member.negatives}",
                "unmet" if member.epsilon_unmet else "ok",
            )
        )
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths, strict=True)).rstrip() for row in rows]
    lines.append(f"Training PC {result.training_pc:.4f}, negative fraction {result.negative_fraction:.4f}")
    if result.decision is not None:
        lines.append(f"Negative fraction within eta={result.eta}: {'yes' if result.decision else 'no'}")
    return "\n".join(lines)


class Command(DnfBlockCommand):
    """Learn a blocking scheme."""

    prog = f"{Package.NAME} {SubCommand.LEARN}"
    help = "Learn a composite DNF blocking scheme from training links and non-links."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        from ..settings import EXTRACTORS, GRAPH, LEARNER

        add_graph_arguments(parser)
        parser.add_argument("--train", required=True, type=existing_file, help="Training pairs: id1<TAB>id2<TAB>{1|0}.")
        parser.add_argument("--out", required=True, type=Path, help="Where to write the scheme JSON.")
        parser.add_argument("--report", type=Path, help="Also write the learning report as JSON.")

        learner = parser.add_argument_group("learner")
        learner.add_argument(
            "--epsilon",
            type=fraction,
            default=LEARNER.epsilon,
            help="Share of positives each member must cover, in (0, 1] (default: %(default)s).",
        )
        learner.add_argument(
            "--max-term-size",
            type=positive_int,
            default=LEARNER.max_term_size,
            help="Most predicates per conjunction (default: %(default)s).",
        )
        learner.add_argument(
            "--max-terms", type=positive_int, default=LEARNER.max_terms, help="Most terms per member (default: %(default)s)."
        )
        learner.add_argument(
            "--min-support",
            type=positive_int,
            default=LEARNER.min_support,
            help="Positives an attribute pair needs to enter a relation (default: %(default)s).",
        )
        learner.add_argument(
            "--eta", type=unit_interval, help="Also decide whether the negative fraction stays within this bound."
        )

        universe = parser.add_argument_group("predicate universe")
        universe.add_argument(
            "--feo",
            dest="feos",
            action="append",
            type=feo,
            help=f"FEO as Shallow>Deep1>...; repeatable (default: {', '.join(EXTRACTORS.feos)}).",
        )
        universe.add_argument(
            "--max-trail-len",
            type=non_negative_int,
            default=GRAPH.max_trail_len,
            help="Longest label sequence in predicates (default: %(default)s).",
        )
        universe.add_argument(
            "--universe-cap",
            type=positive_int,
            default=LEARNER.universe_cap,
            help="Largest predicate universe accepted (default: %(default)s).",
        )
        universe.add_argument(
            "--output-cap",
            type=positive_int,
            default=EXTRACTORS.output_cap,
            help="Most strings an FEO may return (default: %(default)s).",
        )

    def run(self, args: Namespace) -> ExitCode:
        """Execute the learn command."""
        from ..settings import EXTRACTORS

        cfg = LearnerConfig(
            epsilon=args.epsilon,
            max_term_size=args.max_term_size,
            max_terms=args.max_terms,
            eta=args.eta,
            min_support=args.min_support,
        )
        feos = args.feos or [FEO.parse(text) for text in EXTRACTORS.feos]
        with status("Loading graphs..."):
            g1, g2 = load_graphs(args)
            train = load_training(args.train, g1, g2)
        with status("Building predicate universe..."):
            universe = build_universe(g1, g2, feos, args.max_trail_len, cap=args.universe_cap)
        with status(f"Learning over {len(universe)} predicates..."):
            result = learn_composite(g1, g2, universe, train, cfg, threads=args.threads, output_cap=args.output_cap)

        save_scheme(result.scheme, args.out)
        if args.report:
            document = {"v": SchemeFormat.REPORT_VERSION, **result.to_dict()}
            args.report.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n", "utf-8")
        print(format_learning(result))
        if result.epsilon_unmet:
            cprint(f"Some members cover fewer than epsilon={cfg.epsilon} of their positives.", Text.WARNING)
        cprint(f"Wrote scheme to {args.out}", Text.SUCCESS)
        return ExitCode.SUCCESS
