"""
Safe console output for CLI reports, handling encoding problems of odd terminals.
"""
import logging
import sys
from typing import Any, List, Optional, Sequence, TextIO

logger = logging.getLogger(__name__)


def safe_print(text: str, file: Optional[TextIO] = None) -> None:
    """
    Prints text safely to the specified output stream, handling UnicodeEncodeErrors.

    Falls back to re-encoding with the stream's encoding (replacing bad
    characters) and finally to repr(). Always flushes.

    Args:
        text (str): The string to print.
        file (Optional[TextIO]): Output stream; defaults to sys.stdout.
    """
    output_stream: TextIO = file or sys.stdout
    try:
        print(text, file=output_stream, flush=True)
    except UnicodeEncodeError:
        encoding: str = getattr(output_stream, "encoding", None) or "utf-8"
        try:
            print(
                str(text).encode(encoding, errors="replace").decode(encoding),
                file=output_stream,
                flush=True,
            )
        except Exception as e:
            logger.error(f"safe_print fallback failed: {e}", exc_info=True)
            print(repr(text), file=output_stream, flush=True)


def _format_cell(value: Any, precision: int) -> str:
    if isinstance(value, float):
        if value != value:  # NaN
            return "-"
        return f"{value:.{precision}f}"
    if value is None:
        return "-"
    return str(value)


def format_table(
    headers: Sequence[str], rows: Sequence[Sequence[Any]], precision: int = 4
) -> str:
    """
    Renders rows as a left-aligned plain-text table.

    Args:
        headers (Sequence[str]): Column headers.
        rows (Sequence[Sequence[Any]]): Table body; floats use `precision` decimals.
        precision (int): Decimal places for float cells.

    Returns:
        str: The table, lines joined by newlines.
    """
    text_rows: List[List[str]] = [[str(h) for h in headers]]
    text_rows.extend([_format_cell(v, precision) for v in row] for row in rows)
    widths = [max(len(r[i]) for r in text_rows if i < len(r)) for i in range(len(headers))]
    lines = []
    for n, row in enumerate(text_rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
