"""Show every configuration key and its resolved value."""

import builtins
import pathlib
from argparse import ArgumentParser, Namespace
from typing import Any, cast

from christianwhocodes import ExitCode

from ...constants import Package, SubCommand
from .helpers.base import DnfBlockCommand


def _get_type_hint(field_type: type) -> str:
    """Return a human-readable type hint for a field type."""
    match field_type:
        case builtins.bool:
            return "true | false"
        case builtins.int:
            return "integer"
        case builtins.float:
            return "float"
        case builtins.list:
            return "comma-separated values"
        case pathlib.Path:
            return "path"
        case _:
            return "string"


def _format_value(value: Any, field_type: type) -> str:
    """Format a value for a table cell."""
    if value is None:
        return "(none)"
    match field_type:
        case builtins.bool:
            return "true" if value else "false"
        case builtins.list:
            items = cast(list[Any], value) if isinstance(value, list) else [value]
            return ",".join(str(v) for v in items) or "(empty)"
        case pathlib.Path:
            return str(pathlib.PurePosixPath(value))
        case _:
            return str(value)


def config_table(markdown: bool = False) -> str:
    """Configuration keys grouped by section, with their resolved values."""
    from ..settings import CONF_FIELDS

    sections: dict[str, list[dict[str, Any]]] = {}
    for field in CONF_FIELDS:
        sections.setdefault(cast(str, field["class"]), []).append(field)

    header = ("Environment Variable", "TOML Key", "Accepted Values", "Default", "Current")
    lines: list[str] = []
    for section in sorted(sections):
        rows: list[tuple[str, ...]] = [header]
        for field in sections[section]:
            current = getattr(field["conf"](), field["name"])
            rows.append(
                (
                    field["env"],
                    f"tool.{Package.NAME}.{field['toml']}" if field["toml"] else "-",
                    " | ".join(field["choices"]) if field["choices"] else _get_type_hint(field["type"]),
                    _format_value(field["default"], field["type"]),
                    _format_value(current, field["type"]),
                )
            )
        lines.extend([f"### {section}" if markdown else section, ""])
        if markdown:
            lines.extend("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |" for row in rows[:1])
            lines.append("| " + " | ".join("-" * len(cell) for cell in header) + " |")
            lines.extend("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |" for row in rows[1:])
        else:
            widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
            lines.extend("  ".join(cell.ljust(w) for cell, w in zip(row, widths, strict=True)).rstrip() for row in rows)
        lines.append("")
    return "\n".join(lines)


class Command(DnfBlockCommand):
    """List configuration keys."""

    prog = f"{Package.NAME} {SubCommand.CONFIG}"
    help = "Show every setting: environment variable, pyproject.toml key, default and resolved value."

    def add_command_arguments(self, parser: ArgumentParser) -> None:
        """Register arguments onto the parser."""
        parser.add_argument("--markdown", action="store_true", help="Print markdown tables instead of aligned text.")

    def run(self, args: Namespace) -> ExitCode:
        """Execute the config command."""
        print(config_table(args.markdown), end="")
        return ExitCode.SUCCESS
