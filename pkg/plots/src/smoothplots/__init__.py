"""Figure rendering for smoothlot harness run directories."""

from .figures import KINDS, PlotSpec, ccdf_series, render
from .tables import Table, read_table

__version__ = "0.1.0"

__all__ = ["KINDS", "PlotSpec", "Table", "ccdf_series", "read_table", "render"]
