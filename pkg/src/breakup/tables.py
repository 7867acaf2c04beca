"""Deterministic CSV/JSON output for tabular results.

Floats are written with 17 significant digits in scientific notation so
every value round-trips exactly; identical tables give identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence


@dataclass
class Table:
    name: str
    columns: Sequence[str]
    rows: list[tuple] = field(default_factory=list)
    description: str = ""

    def column(self, name):
        k = list(self.columns).index(name)
        return [row[k] for row in self.rows]


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.16e}"
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def _json_value(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        return value if math.isfinite(value) else format_value(value)
    if hasattr(value, "value"):
        return value.value
    return value


def write_csv(table: Table, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])
    return path


def write_json(table: Table, path: str | Path) -> Path:
    path = Path(path)
    payload = {
        "name": table.name,
        "columns": list(table.columns),
        "rows": [[_json_value(v) for v in row] for row in table.rows],
    }
    path.write_text(json.dumps(payload, indent=1) + "\n")
    return path


def write_table(table: Table, directory: str | Path, fmt: str = "csv") -> Path:
    directory = Path(directory)
    if fmt == "csv":
        return write_csv(table, directory / f"{table.name}.csv")
    if fmt == "json":
        return write_json(table, directory / f"{table.name}.json")
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(path: str | Path) -> Table:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [tuple(_parse(v) for v in row) for row in reader]
    return Table(name=path.stem, columns=columns, rows=rows)


def _parse(text: str):
    try:
        return float(text)
    except ValueError:
        return {"true": True, "false": False}.get(text, text)
