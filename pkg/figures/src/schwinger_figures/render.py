"""Figure builders for the four supported kinds.

timeseries   one observable against wt; a sweep input becomes an overlay
heatmap      sweep value vertical, wt horizontal, observable as color
comparison   two observables from one run on twin y axes
finitesize   density and log-negativity overlays stacked, one curve per size

This is a batch tool, so the Agg backend is forced at import.  Every figure
carries the spec path in a small caption line for provenance, and files are
written without a Software tag so re-rendering the same spec reproduces the
output byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import FROZEN_COLUMNS, Table, read_table

KINDS = ("timeseries", "heatmap", "comparison", "finitesize")

# display names; wt is the dimensionless time axis everywhere
COLUMN_LABELS = {
    "step": "step",
    "wt": r"$wt$",
    "nu": r"particle number density $\nu$",
    "g2": r"$|G|^2$",
    "lambda": r"rate function $\lambda$",
    "negativity": r"negativity $\mathcal{N}$",
    "log_negativity": r"logarithmic negativity $E_N$",
    "retention": "retention",
}
AXIS_LABELS = {"m": r"$m/w$", "J": r"$J/w$", "w": r"$w$", "N": r"$N$"}

_SPEC_KEYS = {"kind", "input", "output", "column", "columns", "select", "title", "dpi"}


class FigureError(ValueError):
    """Input parsed against the schema but cannot feed the requested figure."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input: Path
    output: Path
    column: str = "nu"
    columns: tuple[str, str] = ("lambda", "nu")
    select: float | None = None
    title: str | None = None
    dpi: int = 150
    source: str = "<unspecified>"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        for name in (self.column, *self.columns):
            if name not in FROZEN_COLUMNS:
                raise ValueError(f"unknown column {name!r}; schema columns are {', '.join(FROZEN_COLUMNS)}")
        if len(self.columns) != 2:
            raise ValueError("columns must name exactly two observables")

    @classmethod
    def from_mapping(cls, data: dict, spec_path: str | Path) -> "FigureSpec":
        if not isinstance(data, dict):
            raise ValueError("figure spec must be a JSON object")
        unknown = set(data) - _SPEC_KEYS
        if unknown:
            raise ValueError(f"unknown spec keys: {', '.join(sorted(unknown))}")
        for req in ("kind", "input", "output"):
            if req not in data:
                raise ValueError(f"spec is missing required key {req!r}")
        base = Path(spec_path).parent
        kwargs = dict(data)
        kwargs["input"] = base / str(data["input"])
        kwargs["output"] = base / str(data["output"])
        if "columns" in data:
            kwargs["columns"] = tuple(data["columns"])
        if "select" in data and data["select"] is not None:
            kwargs["select"] = float(data["select"])
        if "dpi" in data:
            kwargs["dpi"] = int(data["dpi"])
        return cls(source=str(spec_path), **kwargs)

    @classmethod
    def load(cls, spec_path: str | Path) -> "FigureSpec":
        with open(spec_path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls.from_mapping(data, spec_path)


def _caption(fig, spec: FigureSpec) -> None:
    fig.text(0.005, 0.005, f"spec: {spec.source}", fontsize=6, color="0.45", ha="left")


def _overlay_label(axis: str, value: float) -> str:
    return f"{axis}={value:g}"


def _timeseries(spec: FigureSpec, table: Table, ax) -> None:
    if table.axis is None:
        ax.plot(table.columns["wt"], table.columns[spec.column])
    else:
        for value, block in table.blocks():
            ax.plot(
                block.columns["wt"],
                block.columns[spec.column],
                label=_overlay_label(table.axis, value),
            )
        ax.legend(frameon=False)
    ax.set_xlabel(COLUMN_LABELS["wt"])
    ax.set_ylabel(COLUMN_LABELS[spec.column])


def _heatmap(spec: FigureSpec, table: Table, fig, ax) -> None:
    if table.axis is None:
        raise FigureError("heatmap needs a sweep CSV with a leading axis column")
    blocks = table.blocks()
    wt = blocks[0][1].columns["wt"]
    for _, block in blocks[1:]:
        other = block.columns["wt"]
        if len(other) != len(wt) or not np.allclose(other, wt):
            raise FigureError("heatmap requires a common wt grid across sweep values")
    values = np.array([v for v, _ in blocks])
    grid = np.array([block.columns[spec.column] for _, block in blocks])
    mesh = ax.pcolormesh(wt, values, grid, shading="nearest", rasterized=True)
    fig.colorbar(mesh, ax=ax, label=COLUMN_LABELS[spec.column])
    ax.set_xlabel(COLUMN_LABELS["wt"])
    ax.set_ylabel(AXIS_LABELS.get(table.axis, table.axis))


def _pick_block(spec: FigureSpec, table: Table) -> Table:
    if table.axis is None:
        return table
    blocks = table.blocks()
    if spec.select is None:
        return blocks[0][1]
    for value, block in blocks:
        if np.isclose(value, spec.select):
            return block
    have = ", ".join(f"{v:g}" for v, _ in blocks)
    raise FigureError(f"select={spec.select:g} not among sweep values {have}")


def _comparison(spec: FigureSpec, table: Table, ax) -> None:
    block = _pick_block(spec, table)
    left, right = spec.columns
    twin = ax.twinx()
    (l1,) = ax.plot(block.columns["wt"], block.columns[left], color="C0", label=COLUMN_LABELS[left])
    (l2,) = twin.plot(
        block.columns["wt"], block.columns[right], color="C1", linestyle="--", label=COLUMN_LABELS[right]
    )
    ax.set_xlabel(COLUMN_LABELS["wt"])
    ax.set_ylabel(COLUMN_LABELS[left], color="C0")
    twin.set_ylabel(COLUMN_LABELS[right], color="C1")
    ax.legend(handles=[l1, l2], frameon=False, loc="upper left")


def _finitesize(spec: FigureSpec, table: Table, axes) -> None:
    if table.axis is None:
        raise FigureError("finitesize needs a sweep CSV with a leading axis column")
    top, bottom = axes
    for value, block in table.blocks():
        label = _overlay_label(table.axis, value)
        top.plot(block.columns["wt"], block.columns["nu"], label=label)
        bottom.plot(block.columns["wt"], block.columns["log_negativity"], label=label)
    top.set_ylabel(COLUMN_LABELS["nu"])
    top.legend(frameon=False)
    bottom.set_ylabel(COLUMN_LABELS["log_negativity"])
    bottom.set_xlabel(COLUMN_LABELS["wt"])


def build_figure(spec: FigureSpec):
    """Return the matplotlib Figure for a spec without touching the output path."""
    table = read_table(spec.input)
    if spec.kind == "finitesize":
        fig, axes = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
        _finitesize(spec, table, axes)
        title_ax = axes[0]
    else:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        if spec.kind == "timeseries":
            _timeseries(spec, table, ax)
        elif spec.kind == "heatmap":
            _heatmap(spec, table, fig, ax)
        else:
            _comparison(spec, table, ax)
        title_ax = ax
    if spec.title:
        title_ax.set_title(spec.title)
    fig.subplots_adjust(bottom=0.16)
    _caption(fig, spec)
    return fig


def _metadata_for(path: Path):
    # strip the writer tags that would defeat byte-level reproducibility
    suffix = path.suffix.lower()
    if suffix == ".png":
        return {"Software": None}
    if suffix == ".svg":
        return {"Date": None}
    return None


def render(spec: FigureSpec) -> Path:
    """Render one spec to its output path; returns the path written."""
    fig = build_figure(spec)
    try:
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output, dpi=spec.dpi, metadata=_metadata_for(spec.output))
    finally:
        plt.close(fig)
    return spec.output
