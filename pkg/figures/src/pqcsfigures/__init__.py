"""Figure renderer for the surrogate toolkit's CSV artifacts.

A pure view layer: it reads the scan and Monte-Carlo CSV schemas produced by
the `pqcsurrogate` CLI and draws static images (or markdown tables).  Nothing
here recomputes surrogate mathematics.
"""

from .csvio import (
    MC_HEADER,
    SCAN_HEADER,
    InputError,
    MCRow,
    ScanSeries,
    read_mc_csv,
    read_scan_csv,
)
from .render import (
    PLOT_KINDS,
    PlotJob,
    build_bound_band,
    build_curve_overlay,
    build_error_grid,
    build_error_table,
    error_table_markdown,
    format_sci2,
    render_bound_band,
    render_curve_overlay,
    render_error_table,
    run_plot_job,
)

__version__ = "0.1.0"
