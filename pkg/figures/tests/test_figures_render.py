import math

import numpy as np
import pytest

from pqcsfigures import (
    InputError,
    PlotJob,
    build_bound_band,
    build_curve_overlay,
    build_error_grid,
    build_error_table,
    error_table_markdown,
    format_sci2,
    read_mc_csv,
    read_scan_csv,
    render_bound_band,
    render_curve_overlay,
    render_error_table,
)


def close(fig):
    import matplotlib.pyplot as plt

    plt.close(fig)


class TestPlotJob:
    def test_valid(self):
        PlotJob(("a.csv",), "curve-overlay", "out.png")

    def test_unknown_kind(self):
        with pytest.raises(InputError, match="plot kind"):
            PlotJob(("a.csv",), "pie-chart", "out.png")

    def test_no_inputs(self):
        with pytest.raises(InputError, match="at least one"):
            PlotJob((), "curve-overlay", "out.png")


class TestCurveOverlay:
    def test_two_series(self, fixtures):
        a = read_scan_csv(fixtures / "scan_truth.csv")
        b = read_scan_csv(fixtures / "scan_second.csv")
        fig, summary = build_curve_overlay([("taylor L=2", a), ("kernel L=1", b)])
        assert summary["series"] == ["taylor L=2", "kernel L=1"]
        assert summary["rows"] == 5
        # gaps are column differences, nothing recomputed
        assert summary["max_gap"]["taylor L=2"] == pytest.approx(
            float(np.max(np.abs(a.f - a.f_tilde)))
        )
        # truth line plus one dashed line per series
        assert len(fig.axes[0].lines) == 3
        labels = [line.get_label() for line in fig.axes[0].lines]
        assert labels == ["f (truth)", "taylor L=2", "kernel L=1"]
        close(fig)

    def test_single_series_one_line(self, fixtures):
        s = read_scan_csv(fixtures / "scan_truth.csv")
        fig, summary = build_curve_overlay([("only", s)])
        assert len(summary["series"]) == 1
        assert len(fig.axes[0].lines) == 2  # truth + the one surrogate line
        close(fig)

    def test_coincident_series_annotates_tiny_gap(self, fixtures):
        s = read_scan_csv(fixtures / "scan_exact.csv")
        fig, summary = build_curve_overlay([("exact", s)])
        assert summary["max_gap"]["exact"] <= 1e-8
        annotations = " ".join(t.get_text() for t in fig.axes[0].texts)
        assert "max |f - f~|" in annotations
        assert "0.0e+00" in annotations
        close(fig)

    def test_truth_from_first_populated_input(self, fixtures):
        bare = read_scan_csv(fixtures / "scan_no_truth.csv")
        full = read_scan_csv(fixtures / "scan_truth.csv")
        fig, summary = build_curve_overlay([("bare", bare), ("full", full)])
        assert summary["max_gap"]["full"] == pytest.approx(
            float(np.max(np.abs(full.f - full.f_tilde)))
        )
        close(fig)

    def test_no_truth_anywhere(self, fixtures):
        s = read_scan_csv(fixtures / "scan_no_truth.csv")
        with pytest.raises(InputError, match="truth"):
            build_curve_overlay([("a", s)])

    def test_grid_mismatch(self, fixtures):
        a = read_scan_csv(fixtures / "scan_truth.csv")
        c = read_scan_csv(fixtures / "scan_other_grid.csv")
        with pytest.raises(InputError, match="t grid"):
            build_curve_overlay([("a", a), ("c", c)])

    def test_render_writes_image(self, fixtures, tmp_path):
        out = tmp_path / "overlay.png"
        summary = render_curve_overlay(
            [fixtures / "scan_truth.csv", fixtures / "scan_second.csv"],
            out,
            labels=["taylor L=2", "kernel L=1"],
            title="benchmark",
        )
        assert out.exists() and out.stat().st_size > 1000
        assert summary["output"] == str(out)

    def test_default_labels_from_file_names(self, fixtures, tmp_path):
        out = tmp_path / "overlay.svg"
        summary = render_curve_overlay([fixtures / "scan_truth.csv"], out)
        assert summary["series"] == ["scan_truth"]
        assert out.exists()

    def test_label_count_mismatch(self, fixtures, tmp_path):
        with pytest.raises(InputError, match="labels"):
            render_curve_overlay(
                [fixtures / "scan_truth.csv"], tmp_path / "x.png", labels=["a", "b"]
            )

    def test_bad_output_suffix(self, fixtures, tmp_path):
        with pytest.raises(InputError, match="must end"):
            render_curve_overlay([fixtures / "scan_truth.csv"], tmp_path / "x.pdf")


class TestBoundBand:
    def test_band_and_containment(self, fixtures):
        s = read_scan_csv(fixtures / "scan_truth.csv")
        fig, summary = build_bound_band(s)
        assert summary["rows"] == 5
        assert summary["with_truth"] is True
        assert summary["contained_rows"] == 5
        assert summary["contained_all"] is True
        # the bound is zero at t = 0, so the band pinches to a point there
        assert summary["min_band_width"] == 0.0
        assert summary["max_band_width"] == pytest.approx(2.0 / 3.0)
        close(fig)

    def test_violation_detected(self, tmp_path):
        p = tmp_path / "broken.csv"
        p.write_text(
            "t,f,f_tilde,abs_diff,bound\n"
            "0,1,0.5,0.5,0.1\n"
            "1,0.2,0.25,0.05,0.1\n"
        )
        fig, summary = build_bound_band(read_scan_csv(p))
        assert summary["contained_rows"] == 1
        assert summary["contained_all"] is False
        close(fig)

    def test_without_truth_no_containment(self, tmp_path):
        p = tmp_path / "only.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n0,,1,,0.5\n1,,0.9,,0.5\n")
        fig, summary = build_bound_band(read_scan_csv(p))
        assert summary["with_truth"] is False
        assert "contained_rows" not in summary
        close(fig)

    def test_requires_full_bound_column(self, fixtures):
        with pytest.raises(InputError, match="bound"):
            build_bound_band(read_scan_csv(fixtures / "scan_exact.csv"))

    def test_negative_bound_rejected(self, tmp_path):
        p = tmp_path / "neg.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n0,1,1,0,-0.1\n")
        with pytest.raises(InputError, match="nonnegative"):
            build_bound_band(read_scan_csv(p))

    def test_render_writes_image(self, fixtures, tmp_path):
        out = tmp_path / "band.png"
        summary = render_bound_band(fixtures / "scan_truth.csv", out, title="band")
        assert out.exists() and out.stat().st_size > 1000
        assert summary["contained_all"] is True


class TestErrorTable:
    def test_two_significant_digits(self):
        assert format_sci2(0.123) == "1.2e-01"
        assert format_sci2(0.0082) == "8.2e-03"
        assert format_sci2(1.6e-3) == "1.6e-03"
        assert format_sci2(12.0) == "1.2e+01"

    def test_full_grid_shape(self, fixtures):
        rows = read_mc_csv(fixtures / "mc_full.csv")
        row_labels, col_labels, ratios, texts = build_error_grid(rows)
        assert row_labels == ["k=1", "k=2", "k=4", "k=8"]
        assert col_labels == [
            "kernel L=1", "kernel L=2", "kernel L=3",
            "taylor L=1", "taylor L=2", "taylor L=3",
        ]
        assert ratios.shape == (4, 6)
        assert not np.any(np.isnan(ratios))
        assert texts[3][1] == "8.2e-03"  # k=8, kernel L=2

    def test_partial_grid_blanks(self, fixtures):
        rows = read_mc_csv(fixtures / "mc_partial.csv")
        row_labels, col_labels, ratios, texts = build_error_grid(rows)
        assert row_labels == ["k=4", "k=8"]
        assert col_labels == ["kernel L=2", "taylor L=4"]
        assert texts[0][1] == ""  # no taylor L=4 run at k=4
        assert int(np.sum(np.isfinite(ratios))) == 3

    def test_duplicate_rows_rejected(self, fixtures):
        rows = read_mc_csv(fixtures / "mc_partial.csv")
        with pytest.raises(InputError, match="duplicate"):
            build_error_grid(rows + rows[:1])

    def test_empty_rejected(self):
        with pytest.raises(InputError, match="at least one"):
            build_error_grid([])

    def test_heatmap_figure(self, fixtures):
        rows = read_mc_csv(fixtures / "mc_full.csv")
        fig, summary = build_error_table(rows, title="errors")
        assert summary["shape"] == [4, 6]
        assert summary["filled_cells"] == 24
        close(fig)

    def test_markdown_output(self, fixtures):
        text = error_table_markdown(read_mc_csv(fixtures / "mc_full.csv"))
        lines = text.strip().splitlines()
        assert len(lines) == 6  # header, separator, four k rows
        assert "kernel L=2" in lines[0]
        assert lines[-1].startswith("| k=8 |")
        assert "8.2e-03" in lines[-1]

    def test_render_image_and_markdown(self, fixtures, tmp_path):
        png = tmp_path / "table.png"
        summary = render_error_table([fixtures / "mc_full.csv"], png)
        assert png.exists() and png.stat().st_size > 1000
        assert summary["shape"] == [4, 6]

        md = tmp_path / "table.md"
        summary = render_error_table([fixtures / "mc_partial.csv"], md)
        assert md.exists()
        assert summary["filled_cells"] == 3
        assert "| k=8 |" in md.read_text()

    def test_merging_inputs(self, fixtures, tmp_path):
        out = tmp_path / "merged.md"
        # partial rows do not overlap the full table? they do (kernel L=2 k=8),
        # so merging must fail loudly rather than pick a value
        with pytest.raises(InputError, match="duplicate"):
            render_error_table(
                [fixtures / "mc_full.csv", fixtures / "mc_partial.csv"], out
            )
