import math

import numpy as np
import pytest

from pqcsfigures import InputError, read_mc_csv, read_scan_csv


class TestScanReader:
    def test_full_scan(self, fixtures):
        s = read_scan_csv(fixtures / "scan_truth.csv")
        assert len(s) == 5
        assert s.has_truth and s.has_bound
        np.testing.assert_allclose(s.t, [-1, -0.5, 0, 0.5, 1])
        assert s.f[2] == 1.0
        assert s.f[0] == math.cos(-1.0)  # 17-digit cells reload exactly
        assert s.bound[2] == 0.0

    def test_empty_cells_become_nan(self, fixtures):
        s = read_scan_csv(fixtures / "scan_no_truth.csv")
        assert not s.has_truth and not s.has_bound
        assert np.all(np.isnan(s.f))
        assert np.all(np.isfinite(s.f_tilde))

    def test_partial_bound_column(self, fixtures):
        s = read_scan_csv(fixtures / "scan_exact.csv")
        assert s.has_truth and not s.has_bound

    def test_header_mismatch(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(InputError, match="header"):
            read_scan_csv(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(InputError, match="empty"):
            read_scan_csv(p)

    def test_header_only(self, tmp_path):
        p = tmp_path / "headeronly.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n")
        with pytest.raises(InputError, match="no data rows"):
            read_scan_csv(p)

    def test_non_numeric_cell(self, tmp_path):
        p = tmp_path / "nan.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n0,1,oops,0,\n")
        with pytest.raises(InputError, match="not a number"):
            read_scan_csv(p)

    def test_ragged_row(self, tmp_path):
        p = tmp_path / "ragged.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n0,1,1\n")
        with pytest.raises(InputError, match="cells"):
            read_scan_csv(p)

    def test_missing_t_rejected(self, tmp_path):
        p = tmp_path / "not.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n,1,1,0,\n")
        with pytest.raises(InputError, match="t column"):
            read_scan_csv(p)

    def test_missing_f_tilde_rejected(self, tmp_path):
        p = tmp_path / "noft.csv"
        p.write_text("t,f,f_tilde,abs_diff,bound\n0,1,,0,\n")
        with pytest.raises(InputError, match="f_tilde"):
            read_scan_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="cannot read"):
            read_scan_csv(tmp_path / "does-not-exist.csv")


class TestMcReader:
    def test_full_table(self, fixtures):
        rows = read_mc_csv(fixtures / "mc_full.csv")
        assert len(rows) == 24
        assert {r.method for r in rows} == {"kernel", "taylor"}
        assert {r.k for r in rows} == {1, 2, 4, 8}
        row = next(r for r in rows if r.method == "kernel" and r.order == 2 and r.k == 8)
        assert row.ratio == 0.0082
        assert row.n_f == 60000 and row.seed == 11

    def test_partial_table(self, fixtures):
        assert len(read_mc_csv(fixtures / "mc_partial.csv")) == 3

    def test_bad_integer(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(
            "method,L,k,N_f,N_diff,seed,norm_f,sem_f,norm_diff,sem_diff,ratio\n"
            "kernel,two,8,1,1,0,1,0,1,0,1\n"
        )
        with pytest.raises(InputError, match="integers"):
            read_mc_csv(p)

    def test_wrong_schema(self, fixtures):
        with pytest.raises(InputError, match="header"):
            read_mc_csv(fixtures / "scan_truth.csv")
