"""List the registered primitive extractors."""

from argparse import ArgumentParser, Namespace

from christianwhocodes import ExitCode

from ...constants import ExtractorKind, Package, SubCommand
from ...core.extractors import REGISTRY
from .helpers.base import DnfBlockCommand


class Command(DnfBlockCommand):
    """Enumerate the extractor kit."""

    prog = f"{Package.NAME} {SubCommand.EXTRACTORS}"
    help = "List the shallow and deep extractors FEOs can be built from."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        parser.add_argument("action", nargs="?", choices=["list"], default="list", help="What to do (default: list).")
        parser.add_argument("--kind", type=ExtractorKind, choices=list(ExtractorKind), help="Only list this kind.")

    def run(self, args: Namespace) -> ExitCode:
        """Execute the extractors command."""
        rows = [(str(kind), name, text) for kind, name, text in REGISTRY.describe() if args.kind in (None, kind)]
        kind_width = max(len("kind"), *(len(kind) for kind, _, _ in rows))
        name_width = max(len("name"), *(len(name) for _, name, _ in rows))
        print(f"{'kind'.ljust(kind_width)}  {'name'.ljust(name_width)}  description")
        for kind, name, text in rows:
            print(f"{kind.ljust(kind_width)}  {name.ljust(name_width)}  {text}")
        return ExitCode.SUCCESS
