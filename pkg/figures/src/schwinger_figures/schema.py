"""Reader for the frozen CSV schema produced by the simulator CLI.

Two layouts are accepted: the plain run layout whose header is exactly
FROZEN_COLUMNS, and the sweep layout with one extra leading column naming
the swept parameter.  Anything else is a schema mismatch and is rejected
with the missing columns spelled out.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FROZEN_COLUMNS = (
    "step",
    "wt",
    "nu",
    "g2",
    "lambda",
    "negativity",
    "log_negativity",
    "retention",
)


class SchemaError(ValueError):
    """Input CSV does not match the frozen schema."""


@dataclass(frozen=True)
class Table:
    """One parsed CSV: optional sweep axis plus the frozen data columns."""

    axis: str | None
    axis_values: np.ndarray
    columns: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.columns["wt"])

    def blocks(self) -> list[tuple[float, "Table"]]:
        """Split a sweep table into (axis value, sub-table) runs, in file order.

        A plain table yields itself under the value None is not allowed here;
        callers must check `axis` first.
        """
        if self.axis is None:
            raise SchemaError("CSV has no sweep column; a sweep layout is required")
        out: list[tuple[float, Table]] = []
        values = self.axis_values
        start = 0
        for i in range(1, len(values) + 1):
            if i == len(values) or values[i] != values[start]:
                sub = {k: v[start:i] for k, v in self.columns.items()}
                out.append(
                    (float(values[start]), Table(None, np.empty(0), sub))
                )
                start = i
        return out


def read_table(path: str | Path) -> Table:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file, expected header {','.join(FROZEN_COLUMNS)}")
    header = tuple(rows[0])
    if header == FROZEN_COLUMNS:
        axis = None
    elif len(header) == len(FROZEN_COLUMNS) + 1 and header[1:] == FROZEN_COLUMNS:
        axis = header[0]
    else:
        missing = [c for c in FROZEN_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing required columns: {', '.join(missing)}")
        raise SchemaError(
            f"{path}: unexpected header {','.join(header)}; expected "
            f"{','.join(FROZEN_COLUMNS)} with at most one leading sweep column"
        )
    data = rows[1:]
    if not data:
        raise SchemaError(f"{path}: no data rows")
    try:
        matrix = np.array([[float(cell) for cell in row] for row in data])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell ({exc})") from None
    if matrix.shape[1] != len(header):
        raise SchemaError(f"{path}: ragged rows, expected {len(header)} cells per row")
    offset = 0 if axis is None else 1
    axis_values = matrix[:, 0] if axis is not None else np.empty(0)
    columns = {name: matrix[:, offset + k] for k, name in enumerate(FROZEN_COLUMNS)}
    return Table(axis, axis_values, columns)
