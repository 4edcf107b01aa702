"""CLI entry point."""

import sys
from collections.abc import Sequence

from christianwhocodes import ExitCode, Text, cprint

from ..constants import Package, SubCommand

USAGE_ERROR = 2

_SUMMARIES: dict[SubCommand, str] = {
    SubCommand.INGEST: "load a graph and print statistics",
    SubCommand.LEARN: "learn a DNF blocking scheme from training pairs",
    SubCommand.BLOCK: "execute a scheme and write candidate pairs",
    SubCommand.AC_BLOCK: "Attribute Clustering baseline",
    SubCommand.EVALUATE: "score candidate pairs against true links",
    SubCommand.SYNTH: "generate a synthetic graph pair",
    SubCommand.EXTRACTORS: "list registered extractors",
    SubCommand.CONFIG: "show configuration keys and values",
}


def usage() -> str:
    """Top-level help text."""
    width = max(len(command) for command in SubCommand)
    lines = [f"usage: {Package.NAME} <command> [options]", "", "commands:"]
    lines.extend(f"  {command.value.ljust(width)}  {summary}" for command, summary in _SUMMARIES.items())
    lines.extend(["", f"Run '{Package.NAME} <command> -h' for the options of a command."])
    return "\n".join(lines)


def run(argv: Sequence[str]) -> int:
    """Dispatch ``argv`` (without the program name) and return the exit code."""
    if not argv:
        cprint("No arguments passed.", Text.ERROR)
        print(usage())
        return USAGE_ERROR
    match argv[0]:
        case "-v" | "--version" | "version":
            from christianwhocodes import print_version

            return int(print_version(Package.NAME) or ExitCode.SUCCESS)
        case "-h" | "--help" | "help":
            print(usage())
            return int(ExitCode.SUCCESS)
        case SubCommand.INGEST:
            from .commands.ingest import Command
        case SubCommand.LEARN:
            from .commands.learn import Command
        case SubCommand.BLOCK:
            from .commands.block import Command
        case SubCommand.AC_BLOCK:
            from .commands.acblock import Command
        case SubCommand.EVALUATE:
            from .commands.evaluate import Command
        case SubCommand.SYNTH:
            from .commands.synth import Command
        case SubCommand.EXTRACTORS:
            from .commands.extractors import Command
        case SubCommand.CONFIG:
            from .commands.config import Command
        case unknown:
            cprint(f"Unknown command {unknown!r}.", Text.ERROR)
            print(usage())
            return USAGE_ERROR

    try:
        return int(Command()(list(argv[1:])))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (USAGE_ERROR if e.code else int(ExitCode.SUCCESS))
    except ValueError as e:
        cprint(f"Invalid configuration: {e}", Text.ERROR)
        return int(ExitCode.ERROR)


def main() -> None:
    """Execute the CLI."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
