"""Base class shared by every subcommand."""

import logging
from abc import abstractmethod
from argparse import ArgumentParser, Namespace

from christianwhocodes import BaseCommand, ExitCode, Text, cprint

from ....constants import Package
from ....core.errors import DnfBlockError
from .arguments import non_negative_int


class DnfBlockCommand(BaseCommand):
    """Adds ``--log-level`` and ``--threads``, configures logging and turns library errors into exit code 1."""

    def add_arguments(self, parser: ArgumentParser) -> None:
        """Register the common options, then the command's own."""
        from ...settings import LOG_LEVELS, RUNTIME

        parser.add_argument(
            "--log-level",
            type=str.upper,
            choices=LOG_LEVELS,
            default=RUNTIME.log_level,
            help="Logging level (default: %(default)s).",
        )
        parser.add_argument(
            "--threads",
            type=non_negative_int,
            default=RUNTIME.threads,
            help="Worker threads; 0 uses every core (default: %(default)s).",
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register command-specific arguments."""

    def handle(self, args: Namespace) -> ExitCode:
        """Configure logging and run the command."""
        logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s", force=True)
        try:
            return self.run(args)
        except (DnfBlockError, OSError, ValueError) as e:
            cprint(f"{Package.DISPLAY_NAME} error: {e}", Text.ERROR)
            return ExitCode.ERROR

    @abstractmethod
    def run(self, args: Namespace) -> ExitCode:
        """Execute the command."""
