"""Score a candidate set against the true links."""

from argparse import ArgumentParser, Namespace
from pathlib import Path

from christianwhocodes import ExitCode, Text, cprint, status

from ...constants import Denominator, Mode, Package, SubCommand
from ...core.executor import CandidateSet, read_pairs
from ...core.metrics import compute_metrics, format_report, report_to_json
from .helpers.arguments import add_graph_arguments, existing_file, load_graphs
from .helpers.base import DnfBlockCommand


class Command(DnfBlockCommand):
    """Evaluate a candidate set."""

    prog = f"{Package.NAME} {SubCommand.EVALUATE}"
    help = "Report Pairs Completeness, Reduction Ratio and F-score of a candidate set."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        add_graph_arguments(parser)
        parser.add_argument("--candidates", required=True, type=existing_file, help="Candidate pairs (id1<TAB>id2).")
        parser.add_argument("--truth", required=True, type=existing_file, help="True links (id1<TAB>id2).")
        parser.add_argument(
            "--denominator",
            type=Denominator,
            choices=list(Denominator),
            default=Denominator.PAPER,
            help="Reduction Ratio pair space: |V|^2 within one graph (paper) or distinct pairs (exact).",
        )
        parser.add_argument("--json", type=Path, help="Also write the report as JSON.")

    def run(self, args: Namespace) -> ExitCode:
        """Execute the evaluate command."""
        with status("Loading graphs..."):
            g1, g2 = load_graphs(args)
        mode = Mode.ONE_GRAPH if g1 is g2 else Mode.TWO_GRAPH
        candidates = CandidateSet(read_pairs(args.candidates, g1, g2, mode), mode)
        truth = read_pairs(args.truth, g1, g2, mode)
        report = compute_metrics(candidates, truth, g1, g2, args.denominator)
        print(format_report(report))
        if args.json:
            args.json.write_text(report_to_json(report), "utf-8")
            cprint(f"Wrote report to {args.json}", Text.SUCCESS)
        return ExitCode.SUCCESS
