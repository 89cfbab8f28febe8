"""Static figure rendering over the surrogate toolkit's CSV artifacts.

Three plot kinds: curve overlays (truth and surrogate series on a shared t
grid), bound bands (a surrogate line with its guaranteed error envelope), and
error tables (a (k) x (method, order) grid of relative-L2 ratios).  The
renderers only reshape and compare columns that are already in the files;
no quantity is ever recomputed from a model.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import InputError, MCRow, ScanSeries, read_mc_csv, read_scan_csv

PLOT_KINDS = ("curve-overlay", "curve-with-bound", "table-heatmap")

#: Suffixes accepted for image outputs.
IMAGE_SUFFIXES = (".png", ".svg")


@dataclass(frozen=True)
class PlotJob:
    """A single rendering task: input CSVs, plot kind, output path."""

    inputs: tuple[str, ...]
    kind: str
    output: str

    def __post_init__(self) -> None:
        if self.kind not in PLOT_KINDS:
            raise InputError(f"unknown plot kind {self.kind!r}; expected one of {PLOT_KINDS}")
        if not self.inputs:
            raise InputError("a plot job needs at least one input CSV")


def _check_image_path(output) -> str:
    output = str(output)
    if not output.endswith(IMAGE_SUFFIXES):
        raise InputError(
            f"output {output!r} must end in one of {IMAGE_SUFFIXES}"
        )
    return output


def _save(fig, output) -> None:
    fig.savefig(output, dpi=150, bbox_inches="tight")
    plt.close(fig)


# ── Curve overlay ────────────────────────────────────────────────────────────


def build_curve_overlay(series: list[tuple[str, ScanSeries]], title: str | None = None):
    """Figure overlaying the truth curve with every surrogate series.

    The truth line is the f column of the first series that has one fully
    populated; every input contributes its f_tilde column as one line.  All
    inputs must share the t grid exactly.  Returns (figure, summary) where the
    summary records the per-series max pointwise gap |f - f_tilde| taken from
    the columns.
    """
    if not series:
        raise InputError("curve overlay needs at least one scan CSV")
    truth = next((s for _, s in series if s.has_truth), None)
    if truth is None:
        raise InputError(
            "no input has a fully populated f column; the overlay needs the truth curve"
        )
    for label, s in series:
        if not np.array_equal(s.t, truth.t):
            raise InputError(
                f"series {label!r} ({s.path}) does not share the t grid of {truth.path}"
            )

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(truth.t, truth.f, color="black", linewidth=2.0, label="f (truth)")
    max_gaps: dict[str, float] = {}
    for label, s in series:
        ax.plot(s.t, s.f_tilde, linewidth=1.4, linestyle="--", label=label)
        max_gaps[label] = float(np.max(np.abs(truth.f - s.f_tilde)))
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    gap_text = "\n".join(
        f"max |f - f~| ({label}) = {gap:.1e}" for label, gap in max_gaps.items()
    )
    ax.text(
        0.02, 0.02, gap_text, transform=ax.transAxes, fontsize=8,
        verticalalignment="bottom",
        bbox={"boxstyle": "round", "facecolor": "white", "alpha": 0.8},
    )
    summary = {
        "kind": "curve-overlay",
        "rows": int(truth.t.size),
        "series": [label for label, _ in series],
        "max_gap": max_gaps,
    }
    return fig, summary


def render_curve_overlay(inputs, output, labels=None, title=None) -> dict:
    """Read scan CSVs, overlay them, and save the image."""
    output = _check_image_path(output)
    paths = list(inputs)
    if labels is None:
        labels = [_default_label(p) for p in paths]
    if len(labels) != len(paths):
        raise InputError(f"{len(paths)} inputs but {len(labels)} labels")
    series = [(label, read_scan_csv(path)) for label, path in zip(labels, paths)]
    fig, summary = build_curve_overlay(series, title=title)
    _save(fig, output)
    summary["output"] = output
    return summary


def _default_label(path) -> str:
    name = str(path).rsplit("/", 1)[-1]
    return name[:-4] if name.endswith(".csv") else name


# ── Bound band ───────────────────────────────────────────────────────────────


def build_bound_band(series: ScanSeries, title: str | None = None):
    """Figure of the surrogate line with its +-bound envelope shaded.

    Every row must carry a bound.  When the truth column is present it is
    overlaid, and the summary reports in how many rows the truth lies inside
    the band (straight column comparison).
    """
    if not np.all(np.isfinite(series.bound)):
        raise InputError(
            f"{series.path}: bound-band plots need a fully populated bound column"
        )
    if np.any(series.bound < 0):
        raise InputError(f"{series.path}: bounds must be nonnegative")

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    lower = series.f_tilde - series.bound
    upper = series.f_tilde + series.bound
    ax.fill_between(
        series.t, lower, upper, alpha=0.25, color="tab:blue",
        label="f~ +- bound", linewidth=0,
    )
    ax.plot(series.t, series.f_tilde, color="tab:blue", linewidth=1.6, label="f~")
    summary = {
        "kind": "curve-with-bound",
        "rows": int(series.t.size),
        "min_band_width": float(np.min(2.0 * series.bound)),
        "max_band_width": float(np.max(2.0 * series.bound)),
        "with_truth": series.has_truth,
    }
    if series.has_truth:
        ax.plot(series.t, series.f, color="black", linewidth=1.2, label="f (truth)")
        inside = np.abs(series.f - series.f_tilde) <= series.bound + 1e-15
        summary["contained_rows"] = int(np.sum(inside))
        summary["contained_all"] = bool(np.all(inside))
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    return fig, summary


def render_bound_band(input_path, output, title=None) -> dict:
    output = _check_image_path(output)
    fig, summary = build_bound_band(read_scan_csv(input_path), title=title)
    _save(fig, output)
    summary["output"] = output
    return summary


# ── Error table ──────────────────────────────────────────────────────────────


def format_sci2(value: float) -> str:
    """Two-significant-digit scientific notation, e.g. 0.1234 -> '1.2e-01'."""
    return f"{value:.1e}"


def build_error_grid(rows: list[MCRow]):
    """Pivot MC rows into a (k) x (method, order) grid of formatted ratios.

    Rows are keyed by (method, order, k); duplicates are rejected because a
    view cannot choose between conflicting measurements.  Missing cells stay
    blank.  Returns (row_labels, col_labels, ratios array, formatted texts).
    """
    if not rows:
        raise InputError("error table needs at least one data row")
    seen: dict[tuple[str, int, int], float] = {}
    for row in rows:
        key = (row.method, row.order, row.k)
        if key in seen:
            raise InputError(
                f"duplicate measurement for method={row.method} L={row.order} k={row.k}"
            )
        seen[key] = row.ratio
    ks = sorted({k for _, _, k in seen})
    columns = sorted({(method, order) for method, order, _ in seen})
    ratios = np.full((len(ks), len(columns)), np.nan)
    for (method, order, k), ratio in seen.items():
        ratios[ks.index(k), columns.index((method, order))] = ratio
    texts = [
        [
            "" if np.isnan(ratios[i, j]) else format_sci2(ratios[i, j])
            for j in range(len(columns))
        ]
        for i in range(len(ks))
    ]
    row_labels = [f"k={k}" for k in ks]
    col_labels = [f"{method} L={order}" for method, order in columns]
    return row_labels, col_labels, ratios, texts


def build_error_table(rows: list[MCRow], title: str | None = None):
    """Heatmap figure of the pivoted error grid with per-cell annotations."""
    row_labels, col_labels, ratios, texts = build_error_grid(rows)
    fig, ax = plt.subplots(
        figsize=(1.6 + 1.1 * len(col_labels), 1.2 + 0.6 * len(row_labels))
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        shade = np.log10(ratios)
    masked = np.ma.masked_invalid(shade)
    mesh = ax.imshow(masked, aspect="auto", cmap="viridis_r")
    fig.colorbar(mesh, ax=ax, label="log10(relative L2 error)")
    ax.set_xticks(range(len(col_labels)), col_labels, rotation=30, ha="right", fontsize=9)
    ax.set_yticks(range(len(row_labels)), row_labels, fontsize=9)
    for i in range(len(row_labels)):
        for j in range(len(col_labels)):
            if texts[i][j]:
                ax.text(j, i, texts[i][j], ha="center", va="center", fontsize=8,
                        color="white" if masked[i, j] < -1.5 else "black")
    if title:
        ax.set_title(title)
    summary = {
        "kind": "table-heatmap",
        "shape": [len(row_labels), len(col_labels)],
        "filled_cells": int(np.sum(np.isfinite(ratios))),
        "row_labels": row_labels,
        "col_labels": col_labels,
        "cells": texts,
    }
    return fig, summary


def error_table_markdown(rows: list[MCRow]) -> str:
    """The same grid as a plain markdown table."""
    row_labels, col_labels, _, texts = build_error_grid(rows)
    lines = ["| | " + " | ".join(col_labels) + " |"]
    lines.append("|" + "---|" * (len(col_labels) + 1))
    for label, row in zip(row_labels, texts):
        lines.append("| " + label + " | " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_error_table(inputs, output, title=None) -> dict:
    """Concatenate MC CSVs into one grid; save as image or markdown by suffix."""
    rows: list[MCRow] = []
    for path in inputs:
        rows.extend(read_mc_csv(path))
    output = str(output)
    if output.endswith(".md"):
        text = error_table_markdown(rows)
        row_labels, col_labels, ratios, _ = build_error_grid(rows)
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
        summary = {
            "kind": "table-heatmap",
            "shape": [len(row_labels), len(col_labels)],
            "filled_cells": int(np.sum(np.isfinite(ratios))),
            "output": output,
        }
        return summary
    output = _check_image_path(output)
    fig, summary = build_error_table(rows, title=title)
    _save(fig, output)
    summary["output"] = output
    return summary


def run_plot_job(job: PlotJob, labels=None, title=None) -> dict:
    """Dispatch one job to its renderer."""
    if job.kind == "curve-overlay":
        return render_curve_overlay(job.inputs, job.output, labels=labels, title=title)
    if job.kind == "curve-with-bound":
        if len(job.inputs) != 1:
            raise InputError("bound-band plots take exactly one input CSV")
        return render_bound_band(job.inputs[0], job.output, title=title)
    return render_error_table(job.inputs, job.output, title=title)
