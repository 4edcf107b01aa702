"""Execute a learned scheme over one or two graphs."""

from argparse import ArgumentParser, Namespace
from pathlib import Path

from christianwhocodes import ExitCode, Text, cprint, status

from ...constants import Package, SubCommand
from ...core.executor import block, oracle_candidates, write_pairs
from ...core.scheme import load_scheme
from .helpers.arguments import add_graph_arguments, add_purge_arguments, existing_file, load_graphs, positive_int
from .helpers.base import DnfBlockCommand


class Command(DnfBlockCommand):
    """Block with a learned scheme."""

    prog = f"{Package.NAME} {SubCommand.BLOCK}"
    help = "Index the graphs with a learned scheme and write the candidate pairs."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        from ..settings import EXECUTOR, EXTRACTORS, LEARNER

        add_graph_arguments(parser)
        parser.add_argument("--scheme", required=True, type=existing_file, help="Scheme JSON written by learn.")
        parser.add_argument(
            "--max-term-size",
            type=positive_int,
            default=LEARNER.max_term_size,
            help="Reject schemes with longer conjunctions (default: %(default)s).",
        )
        parser.add_argument(
            "--max-terms",
            type=positive_int,
            default=LEARNER.max_terms,
            help="Reject schemes with more terms per member (default: %(default)s).",
        )
        parser.add_argument("--out", required=True, type=Path, help="Where to write the candidate pairs (id1<TAB>id2).")
        add_purge_arguments(parser)
        parser.add_argument(
            "--key-cap",
            type=positive_int,
            default=EXECUTOR.key_cap,
            help="Most keys one node may generate per term (default: %(default)s).",
        )
        parser.add_argument(
            "--output-cap",
            type=positive_int,
            default=EXTRACTORS.output_cap,
            help="Most strings an FEO may return (default: %(default)s).",
        )
        parser.add_argument(
            "--oracle",
            action="store_true",
            help="Evaluate the scheme on every pair instead of indexing (quadratic, for verification only).",
        )

    def run(self, args: Namespace) -> ExitCode:
        """Execute the block command."""
        scheme = load_scheme(args.scheme, max_term_size=args.max_term_size, max_terms=args.max_terms)
        with status("Loading graphs..."):
            g1, g2 = load_graphs(args)
        if args.oracle:
            with status("Evaluating every pair..."):
                candidates = oracle_candidates(g1, g2, scheme, output_cap=args.output_cap)
        else:
            with status("Blocking..."):
                candidates = block(
                    g1,
                    g2,
                    scheme,
                    purge_cap=None if args.no_purge else args.purge_cap,
                    key_cap=args.key_cap,
                    threads=args.threads,
                    output_cap=args.output_cap,
                )
        write_pairs(candidates, g1, g2, args.out)
        if candidates.purged_keys:
            cprint(f"Purged {candidates.purged_keys} oversized blocks.", Text.WARNING)
        timings = ", ".join(f"{stage} {ms:.1f} ms" for stage, ms in sorted(candidates.timings_ms.items()))
        cprint(f"Wrote {len(candidates):,} candidate pairs to {args.out} ({timings})", Text.SUCCESS)
        return ExitCode.SUCCESS
