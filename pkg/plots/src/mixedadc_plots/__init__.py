"""Figure rendering for the simulator's CSV outputs. No simulation logic
lives here; the package only draws what the tables already contain."""

from .render import main, render
from .schemas import SCHEMAS, EmptyTable, SchemaMismatch, read_table

__version__ = "0.1.0"

__all__ = [
    "render",
    "main",
    "read_table",
    "SCHEMAS",
    "SchemaMismatch",
    "EmptyTable",
]
