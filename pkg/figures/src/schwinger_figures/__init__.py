"""Figure rendering for the frozen CSV outputs of the simulator CLI."""
from .render import KINDS, FigureError, FigureSpec, build_figure, render
from .schema import FROZEN_COLUMNS, SchemaError, Table, read_table

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "FigureError",
    "FigureSpec",
    "build_figure",
    "render",
    "FROZEN_COLUMNS",
    "SchemaError",
    "Table",
    "read_table",
    "__version__",
]
