"""Reader for the schema=1 experiment metrics CSV.

The file starts with '#key=value' comment lines (schema marker and run
metadata), then a header row and per-trial rows; the trailing row with
trial == "summary" aggregates the trials and is kept separate here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field


class SchemaError(ValueError):
    """The file is not a readable schema=1 metrics CSV."""


@dataclass
class MetricsFrame:
    path: str
    meta: dict[str, str]
    columns: list[str]
    rows: list[dict[str, str]]
    summary: dict[str, str] | None = None
    _floats: dict[str, list[float]] = field(default_factory=dict, repr=False)

    def float_column(self, name: str) -> list[float]:
        """Non-empty values of a column as floats; errors name the column."""
        if name not in self.columns:
            raise SchemaError(f"{self.path}: missing column {name!r}")
        if name not in self._floats:
            vals = [float(r[name]) for r in self.rows if r[name] != ""]
            if not vals:
                raise SchemaError(f"{self.path}: column {name!r} has no values")
            self._floats[name] = vals
        return self._floats[name]

    @property
    def m(self) -> int:
        return int(self.float_column("m")[0])


def read_metrics(path) -> MetricsFrame:
    meta: dict[str, str] = {}
    body: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key] = val
            elif line:
                body.append(line)
    if meta.get("schema") != "1":
        raise SchemaError(f"{path}: expected '#schema=1', got {meta.get('schema')!r}")
    if not body:
        raise SchemaError(f"{path}: no header row")
    reader = csv.DictReader(body)
    columns = reader.fieldnames or []
    rows, summary = [], None
    for row in reader:
        if row["trial"] == "summary":
            summary = row
        else:
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no trial rows")
    return MetricsFrame(str(path), meta, list(columns), rows, summary)
