import math

import pytest

from superpreamble.cli import EXPERIMENT_COLUMNS, emit_csv, main


def read_lines(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def data_rows(path):
    lines = [l for l in read_lines(path) if not l.startswith("#")]
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestBoundsOnly:
    def test_columns_and_values(self, tmp_path):
        out = tmp_path / "bounds.csv"
        rc = main(["--preset", "bounds-only", "--K", "16", "--L", "2",
                   "--N-max", "10", "--out", str(out)])
        assert rc == 0
        header, rows = data_rows(out)
        assert header == ["N", "single_exact", "single_upper", "single_lower",
                          "all_exact", "all_upper", "all_lower"]
        assert len(rows) == 10
        assert rows[0]["N"] == "1" and rows[0]["single_exact"] == "1"
        # exact column empty once N > 3
        assert rows[3]["single_exact"] == ""
        assert float(rows[2]["single_exact"]) == pytest.approx((1 - 1 / 256) ** 2,
                                                               rel=1e-5)

    def test_requires_parameters(self, tmp_path):
        rc = main(["--preset", "bounds-only", "--out", str(tmp_path / "x.csv")])
        assert rc == 2


class TestCustomRun:
    def test_single_row_and_byte_identical(self, tmp_path):
        args = ["--K", "8", "--L", "2", "--N", "4", "--M", "32", "--snr-db", "0",
                "--channel", "iid", "--trials", "400", "--seed", "7"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        header, rows = data_rows(out1)
        assert list(header) == list(EXPERIMENT_COLUMNS)
        assert len(rows) == 1
        assert rows[0]["K"] == "8" and rows[0]["trials"] == "400"

    def test_threads_do_not_change_bytes(self, tmp_path):
        args = ["--K", "8", "--L", "2", "--N", "5", "--M", "32",
                "--trials", "2100", "--seed", "3"]
        out1, out2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
        assert main(args + ["--threads", "1", "--out", str(out1)]) == 0
        assert main(args + ["--threads", "2", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_arguments(self):
        assert main(["--K", "8", "--L", "2"]) == 2

    def test_out_required(self):
        assert main(["--K", "8", "--L", "2", "--N", "2"]) == 2


class TestPresets:
    def test_dry_run_lists_configs_without_output(self, tmp_path, capsys):
        out = tmp_path / "no.csv"
        rc = main(["--preset", "solvable-budget48", "--dry-run",
                   "--out", str(out)])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 5 * 20  # L in {1,2,3,4,6} x N in 1..20
        assert not out.exists()
        assert any("K=24 L=2" in line for line in lines)
        assert all("detect=0" in line for line in lines)

    def test_unknown_preset_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["--preset", "not-a-preset", "--out", "x.csv"])
        assert exc.value.code == 2

    def test_nmse_preset_dry_run(self, capsys):
        rc = main(["--preset", "nmse-vs-snr", "--dry-run"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3 * 5  # N in {1,4,7} x 5 SNR points
        assert all("channel=correlated" in line for line in lines)

    def test_small_preset_run_with_plot(self, tmp_path):
        out = tmp_path / "nmse.csv"
        rc = main(["--preset", "nmse-vs-snr", "--trials", "60",
                   "--threads", "1", "--out", str(out), "--plot"])
        assert rc == 0
        header, rows = data_rows(out)
        assert len(rows) == 15
        assert (tmp_path / "nmse.png").exists()
        # metadata present, no thread/timestamp contamination
        meta = [l for l in read_lines(out) if l.startswith("#")]
        assert any("preset=nmse-vs-snr" in m for m in meta)
        assert any("seed=1" in m for m in meta)
        assert not any("thread" in m.lower() for m in meta)


class TestEmitCsv:
    def test_empty_rows(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], ("a", "b"), str(path), ["meta line"])
        assert read_lines(path) == ["# meta line", "a,b"]

    def test_none_becomes_empty_field(self, tmp_path):
        path = tmp_path / "none.csv"
        emit_csv([{"a": None, "b": 1.5}], ("a", "b"), str(path), [])
        assert read_lines(path)[-1] == ",1.5"

    def test_round_trip_six_significant_digits(self, tmp_path):
        path = tmp_path / "rt.csv"
        values = [0.9389496445655823, 1 / 3, 2048.12345, 1e-7, math.inf]
        emit_csv([{"x": v} for v in values], ("x",), str(path), [])
        _, rows = data_rows(path)
        for v, row in zip(values, rows):
            assert float(row["x"]) == pytest.approx(v, rel=1e-5)

    def test_io_error_exit_code(self, tmp_path):
        rc = main(["--K", "4", "--L", "2", "--N", "2", "--M", "8",
                   "--trials", "10", "--out",
                   str(tmp_path / "nodir" / "x.csv")])
        assert rc == 3


class TestResourceLimits:
    def test_oversized_tuple_space_exits_3(self, tmp_path):
        rc = main(["--K", "101", "--L", "3", "--N", "1", "--M", "4",
                   "--trials", "1", "--out", str(tmp_path / "big.csv")])
        assert rc == 3
