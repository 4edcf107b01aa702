"""Attribute Clustering baseline."""

import time
from argparse import ArgumentParser, Namespace
from pathlib import Path

from christianwhocodes import ExitCode, Text, cprint, status

from ...constants import Package, SubCommand
from ...core.baseline import ac_as_dnf, ac_candidates, cluster_edge_labels
from ...core.executor import write_pairs
from ...core.scheme import save_scheme
from .helpers.arguments import add_graph_arguments, add_purge_arguments, fraction, load_graphs
from .helpers.base import DnfBlockCommand


class Command(DnfBlockCommand):
    """Block with Attribute Clustering."""

    prog = f"{Package.NAME} {SubCommand.AC_BLOCK}"
    help = "Cluster edge labels by token similarity and block on shared tokens within a cluster."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        from ..settings import BASELINE

        add_graph_arguments(parser)
        parser.add_argument("--out", required=True, type=Path, help="Where to write the candidate pairs (id1<TAB>id2).")
        parser.add_argument(
            "--sim-threshold",
            type=fraction,
            default=BASELINE.sim_threshold,
            help="Cosine similarity linking two edge labels, in (0, 1] (default: %(default)s).",
        )
        add_purge_arguments(parser)
        parser.add_argument("--glue", action="store_true", help="Put every unlinked edge label into one catch-all cluster.")
        parser.add_argument("--scheme-out", type=Path, help="Also write the equivalent single-member DNF scheme.")

    def run(self, args: Namespace) -> ExitCode:
        """Execute the ac-block command."""
        with status("Loading graphs..."):
            g1, g2 = load_graphs(args)
        started = time.perf_counter()
        with status("Clustering edge labels..."):
            clusters = cluster_edge_labels(g1, g2, args.sim_threshold, glue=args.glue)
        clustered = time.perf_counter()
        with status("Blocking..."):
            candidates = ac_candidates(g1, g2, clusters, None if args.no_purge else args.purge_cap, threads=args.threads)
        finished = time.perf_counter()
        candidates.timings_ms.update(cluster=(clustered - started) * 1e3, generate=(finished - clustered) * 1e3)

        write_pairs(candidates, g1, g2, args.out)
        spanning = sum(c.spans_both for c in clusters)
        cprint(f"{len(clusters)} clusters, {spanning} spanning both graphs.", Text.INFO)
        if args.scheme_out:
            save_scheme(ac_as_dnf(clusters, g1, g2), args.scheme_out)
            cprint(f"Wrote equivalent scheme to {args.scheme_out}", Text.SUCCESS)
        cprint(f"Wrote {len(candidates):,} candidate pairs to {args.out}", Text.SUCCESS)
        return ExitCode.SUCCESS
