"""Schema-validating readers for the surrogate toolkit's CSV artifacts.

Two schemas exist: curve scans (t, f, f_tilde, abs_diff, bound) and
Monte-Carlo error tables (method, L, k, N_f, N_diff, seed, norm_f, sem_f,
norm_diff, sem_diff, ratio).  Empty cells parse to NaN; everything else must
be a float.  These readers are the only ingestion path, so every renderer
inherits the same validation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

SCAN_HEADER = ["t", "f", "f_tilde", "abs_diff", "bound"]
MC_HEADER = [
    "method", "L", "k", "N_f", "N_diff", "seed",
    "norm_f", "sem_f", "norm_diff", "sem_diff", "ratio",
]


class InputError(ValueError):
    """A CSV is missing, malformed, or lacks the columns a plot needs."""


def _parse_cell(text: str, path, lineno: int, column: str) -> float:
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError as exc:
        raise InputError(
            f"{path}: line {lineno}, column {column!r}: not a number: {text!r}"
        ) from exc


@dataclass(frozen=True)
class ScanSeries:
    """One curve scan: aligned arrays over the t grid (NaN where a cell was empty)."""

    path: str
    t: np.ndarray
    f: np.ndarray
    f_tilde: np.ndarray
    abs_diff: np.ndarray
    bound: np.ndarray

    def __len__(self) -> int:
        return self.t.size

    @property
    def has_truth(self) -> bool:
        return bool(np.all(np.isfinite(self.f)))

    @property
    def has_bound(self) -> bool:
        return bool(np.any(np.isfinite(self.bound)))


def read_scan_csv(path) -> ScanSeries:
    rows = _read_rows(path, SCAN_HEADER)
    columns = {name: [] for name in SCAN_HEADER}
    for lineno, row in rows:
        for name, cell in zip(SCAN_HEADER, row):
            columns[name].append(_parse_cell(cell, path, lineno, name))
    series = ScanSeries(
        path=str(path),
        **{name: np.array(values, dtype=float) for name, values in columns.items()},
    )
    if not np.all(np.isfinite(series.t)):
        raise InputError(f"{path}: the t column must be fully populated")
    if not np.all(np.isfinite(series.f_tilde)):
        raise InputError(f"{path}: the f_tilde column must be fully populated")
    return series


@dataclass(frozen=True)
class MCRow:
    """One Monte-Carlo study row."""

    method: str
    order: int
    k: int
    n_f: int
    n_diff: int
    seed: int
    norm_f: float
    sem_f: float
    norm_diff: float
    sem_diff: float
    ratio: float


def read_mc_csv(path) -> list[MCRow]:
    rows = _read_rows(path, MC_HEADER)
    out: list[MCRow] = []
    for lineno, row in rows:
        try:
            order, k, n_f, n_diff, seed = (int(v) for v in row[1:6])
        except ValueError as exc:
            raise InputError(
                f"{path}: line {lineno}: L/k/N_f/N_diff/seed must be integers"
            ) from exc
        floats = [
            _parse_cell(cell, path, lineno, name)
            for name, cell in zip(MC_HEADER[6:], row[6:])
        ]
        out.append(MCRow(row[0], order, k, n_f, n_diff, seed, *floats))
    return out


def _read_rows(path, header: list[str]) -> list[tuple[int, list[str]]]:
    """All data rows of a CSV after validating its header and width."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise InputError(f"{path}: file is empty")
    if raw[0] != header:
        raise InputError(
            f"{path}: expected header {','.join(header)!r}, got {','.join(raw[0])!r}"
        )
    rows = [
        (lineno, row)
        for lineno, row in enumerate(raw[1:], start=2)
        if row  # a trailing blank line is not data
    ]
    if not rows:
        raise InputError(f"{path}: no data rows")
    for lineno, row in rows:
        if len(row) != len(header):
            raise InputError(
                f"{path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
            )
    return rows
