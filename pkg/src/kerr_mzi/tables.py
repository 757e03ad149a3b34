"""Named-column tables and their CSV / JSON serialisation."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

__all__ = ["FigureTable", "to_csv", "to_json", "write_table", "format_number"]

FORMATS = ("csv", "json")


def format_number(x) -> str:
    """Shortest-safe full precision (17 significant digits), '.' decimal point."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


@dataclass
class FigureTable:
    """Equal-length numeric columns, in emission order, plus where each came from."""

    figure_id: str
    columns: dict[str, np.ndarray]
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.columns = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns of {self.figure_id} have unequal lengths {sorted(lengths)}")
        for name in self.columns:
            if "," in name or "\n" in name:
                raise ValueError(f"column name {name!r} cannot contain ',' or newlines")

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


def to_csv(table: FigureTable) -> str:
    buf = io.StringIO()
    buf.write(f"# kerr-mzi v{__version__}\n")
    names = list(table.columns)
    buf.write(",".join(names) + "\n")
    cols = [table.columns[n] for n in names]
    for i in range(table.n_rows):
        buf.write(",".join(format_number(c[i]) for c in cols) + "\n")
    return buf.getvalue()


def to_json(table: FigureTable) -> str:
    def clean(x):
        x = float(x)
        return x if math.isfinite(x) else None

    doc = {
        "format": "kerr-mzi",
        "version": __version__,
        "figure_id": table.figure_id,
        "columns": list(table.columns),
        "data": {k: [clean(x) for x in v] for k, v in table.columns.items()},
        "provenance": dict(table.provenance),
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def write_table(table: FigureTable, path: str | Path | None, fmt: str = "csv") -> str:
    """Serialise ``table``; write it to ``path`` unless path is None or '-'. Returns the text."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    text = to_csv(table) if fmt == "csv" else to_json(table)
    if path is not None and str(path) != "-":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
