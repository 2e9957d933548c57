"""Figure scripts for pesim CSV outputs. Reads CSVs only."""

from .io import (EXPECTED_COLUMNS, SchemaError, dump_plotted_data,
                 matrix_cells, read_metrics_csv, tail_mean)
from .matrix import (plot_bgsd_bars, plot_bgsd_time_evolution,
                     plot_fairness_bars, plot_matrix_figures)
from .single_run import plot_single_run

__all__ = [
    "EXPECTED_COLUMNS",
    "SchemaError",
    "read_metrics_csv",
    "matrix_cells",
    "tail_mean",
    "dump_plotted_data",
    "plot_single_run",
    "plot_matrix_figures",
    "plot_bgsd_time_evolution",
    "plot_bgsd_bars",
    "plot_fairness_bars",
]

__version__ = "0.1.0"
