"""
SweepTable serialization.

CSV: ``# config:`` and ``# seed:`` comment lines, then a header row in column
order and one line per row with ``repr`` floats. JSON: ``{metadata, columns,
rows}``. Output is a pure function of the table, so repeated emits are
byte-identical.
"""

import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Literal

from cvqkd.core.errors import ParameterError
from cvqkd.core.models import SweepTable

logger = logging.getLogger(__name__)


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(table: SweepTable) -> str:
    buffer = io.StringIO()
    config = table.metadata.get("config", table.metadata)
    buffer.write(f"# config: {json.dumps(config, sort_keys=True, default=str)}\n")
    buffer.write(f"# seed: {table.metadata.get('master_seed', '')}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format(row[name]) for name in table.columns])
    return buffer.getvalue()


def to_json(table: SweepTable) -> str:
    return json.dumps(table.to_dict(), indent=2, default=str) + "\n"


def emit(table: SweepTable, fmt: Literal["csv", "json"] = "csv", path: str = "-") -> None:
    """
    Write a table as CSV or JSON to ``path`` ("-" for stdout).

    Raises:
        ParameterError: Empty table or unknown format
        OSError: Unwritable path
    """
    if not table.rows:
        raise ParameterError("refusing to emit an empty table")
    if fmt == "csv":
        text = to_csv(table)
    elif fmt == "json":
        text = to_json(table)
    else:
        raise ParameterError(f"unknown output format '{fmt}'")
    if path == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(table.rows)} rows to {path}")


def load_json(path: str) -> SweepTable:
    """Read a table written by ``emit(..., 'json')``."""
    return SweepTable.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
