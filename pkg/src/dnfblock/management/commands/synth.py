"""Generate a synthetic graph pair with planted links."""

from argparse import ArgumentParser, ArgumentTypeError, Namespace
from pathlib import Path

from christianwhocodes import ExitCode, Text, cprint, status

from ...constants import Package, SubCommand
from ...core.synthetic import DEFAULT_PROFILES, SyntheticData, SyntheticSpec, flip_labels, gen_synthetic, write_synthetic
from .helpers.arguments import fraction, non_negative_int, positive_int, unit_interval
from .helpers.base import DnfBlockCommand


def training_rho(value: str) -> float:
    """A float in [0, 1)."""
    number = unit_interval(value)
    if number == 1:
        raise ArgumentTypeError("must be below 1")
    return number


class Command(DnfBlockCommand):
    """Generate synthetic data."""

    prog = f"{Package.NAME} {SubCommand.SYNTH}"
    help = "Write a seeded synthetic graph pair, its true links and a sampled training set."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        parser.add_argument("--out", required=True, type=Path, help="Output directory.")
        parser.add_argument("--n-nodes", type=positive_int, default=200, help="Entities per graph (default: %(default)s).")
        parser.add_argument("--n-links", type=non_negative_int, help="Planted links (default: half of --n-nodes).")
        parser.add_argument("--noise", type=unit_interval, default=0.1, help="Token edit rate on linked copies (default: %(default)s).")
        parser.add_argument("--seed", type=int, default=0, help="Random seed (default: %(default)s).")
        parser.add_argument(
            "--train-fraction",
            type=fraction,
            default=0.5,
            help="Share of the true links used as training positives (default: %(default)s).",
        )
        parser.add_argument(
            "--train-rho",
            type=training_rho,
            default=0.9,
            help="Share of negatives in the training set, in [0, 1) (default: %(default)s).",
        )
        parser.add_argument("--one-graph", action="store_true", help="Put both sides into a single graph.")
        parser.add_argument("--no-attributes", action="store_true", help="Generate entities without type attributes.")
        parser.add_argument(
            "--flip", type=unit_interval, default=0.0, help="Swap this share of training positives with negatives (default: 0)."
        )

    def run(self, args: Namespace) -> ExitCode:
        """Execute the synth command."""
        spec = SyntheticSpec(
            n_nodes=args.n_nodes,
            n_links=args.n_nodes // 2 if args.n_links is None else args.n_links,
            attr_profiles=() if args.no_attributes else DEFAULT_PROFILES,
            label_noise=args.noise,
            seed=args.seed,
            train_fraction=args.train_fraction,
            train_rho=args.train_rho,
            one_graph=args.one_graph,
        )
        with status("Generating..."):
            data = gen_synthetic(spec)
            if args.flip:
                data = SyntheticData(data.g1, data.g2, data.truth, flip_labels(data.train, args.flip, args.seed))
            paths = write_synthetic(data, args.out)
        for role, path in paths.items():
            cprint(f"{role:<7} {path}", Text.INFO)
        cprint(
            f"{len(data.truth)} true links, {len(data.train.positives)} positive and "
            f"{len(data.train.negatives)} negative training pairs",
            Text.SUCCESS,
        )
        return ExitCode.SUCCESS
