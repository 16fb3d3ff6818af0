import json

import numpy as np
import pytest

from gsqr import EPS_BINARY64, read_matrix, write_matrix
from gsqr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFactor:
    def test_identity_csv(self, tmp_path, capsys):
        inp = tmp_path / "a.csv"
        write_matrix(inp, np.eye(3))
        out_q = tmp_path / "q.csv"
        out_r = tmp_path / "r.csv"
        report = tmp_path / "report.json"
        code, out, _ = run(
            capsys,
            "factor",
            "--algo",
            "cgs-p",
            "--input",
            str(inp),
            "--output-q",
            str(out_q),
            "--output-r",
            str(out_r),
            "--report",
            str(report),
        )
        assert code == 0
        assert np.array_equal(read_matrix(out_q), np.eye(3))
        assert np.array_equal(read_matrix(out_r), np.eye(3))
        doc = json.loads(report.read_text())
        assert doc["command"] == "factor"
        (rep,) = doc["reports"]
        assert rep["algorithm"] == "cgs-p"
        assert all(row["backward_error"] == 0.0 for row in rep["rows"])

    def test_duplicate_column_exits_2_naming_column(self, tmp_path, capsys):
        inp = tmp_path / "dup.csv"
        write_matrix(inp, np.array([[2.0, 2.0, 1.0], [0.0, 0.0, 1.0], [0.0, 0.0, 3.0]]))
        code, _, err = run(capsys, "factor", "--algo", "cgs-p", "--input", str(inp))
        assert code == 2
        assert "column 2" in err

    def test_parse_error_exits_3(self, tmp_path, capsys):
        inp = tmp_path / "bad.csv"
        inp.write_text("1,2\n3,spam\n")
        code, _, err = run(capsys, "factor", "--input", str(inp))
        assert code == 3
        assert "error" in err

    def test_wide_matrix_exits_3(self, tmp_path, capsys):
        inp = tmp_path / "wide.csv"
        write_matrix(inp, np.ones((2, 4)))
        code, _, _ = run(capsys, "factor", "--input", str(inp))
        assert code == 3

    def test_missing_file_exits_4(self, tmp_path, capsys):
        code, _, err = run(capsys, "factor", "--input", str(tmp_path / "none.csv"))
        assert code == 4

    def test_both_on_example1_file_reports_pair(self, tmp_path, capsys):
        from gsqr import example1_matrix

        inp = tmp_path / "e1.csv"
        write_matrix(inp, example1_matrix())
        code, out, _ = run(
            capsys, "factor", "--algo", "both", "--input", str(inp), "--report", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert [r["algorithm"] for r in doc["reports"]] == ["cgs-s", "cgs-p"]
        res_s = doc["reports"][0]["summary"]
        res_p = doc["reports"][1]["summary"]
        rel_s = res_s["normal_residual"] / res_s["norm_a"] ** 2
        rel_p = res_p["normal_residual"] / res_p["norm_a"] ** 2
        assert rel_s >= 1e-10 and rel_p <= 1e-15

    def test_both_writes_suffixed_outputs(self, tmp_path, capsys):
        inp = tmp_path / "a.mtx"
        write_matrix(inp, np.array([[2.0, 1.0], [0.0, 1.0], [0.0, 1.0]]))
        out_q = tmp_path / "q.mtx"
        code, out, _ = run(
            capsys,
            "factor",
            "--algo",
            "both",
            "--input",
            str(inp),
            "--output-q",
            str(out_q),
        )
        assert code == 0
        assert (tmp_path / "q.cgs-s.mtx").exists()
        assert (tmp_path / "q.cgs-p.mtx").exists()
        assert "cgs-s" in out and "cgs-p" in out


class TestExample1:
    def test_default_prints_both_rows(self, capsys):
        code, out, _ = run(capsys, "example1")
        assert code == 0
        assert "cgs-s" in out and "cgs-p" in out
        assert "NOT satisfied" in out  # this input violates the conditioning check

    def test_json_report_has_all_prefix_rows(self, capsys):
        code, out, _ = run(capsys, "example1", "--report", "json")
        assert code == 0
        doc = json.loads(out)
        assert {rep["algorithm"] for rep in doc["reports"]} == {"cgs-s", "cgs-p"}
        for rep in doc["reports"]:
            assert [row["k"] for row in rep["rows"]] == [1, 2, 3, 4, 5]
            assert rep["version"]

    def test_epsilon_scales_bounds_only(self, capsys):
        code, out1, _ = run(capsys, "example1", "--report", "json")
        code, out2, _ = run(capsys, "example1", "--report", "json", "--epsilon", "1e-8")
        rows1 = json.loads(out1)["reports"][1]["rows"]
        rows2 = json.loads(out2)["reports"][1]["rows"]
        scale = 1e-8 / EPS_BINARY64
        for r1, r2 in zip(rows1, rows2):
            assert r2["normal_residual"] == r1["normal_residual"]
            assert r2["normal_bound"] == pytest.approx(r1["normal_bound"] * scale)


class TestGlued:
    ARGS = [
        "glued",
        "--m",
        "12",
        "--nglued",
        "3",
        "--nbglued",
        "2",
        "--cond-a",
        "1.0",
        "--cond-a-glob",
        "0.5",
        "--seed",
        "9",
        "--report",
        "json",
    ]

    def test_runs_and_reports(self, capsys):
        code, out, _ = run(capsys, *self.ARGS)
        assert code == 0
        doc = json.loads(out)
        assert doc["seed"] == 9
        assert doc["cond2_a"] > 1.0
        assert [r["algorithm"] for r in doc["results"]] == ["cgs-s", "cgs-p"]

    def test_same_seed_bitwise_identical_reports(self, capsys):
        _, out1, _ = run(capsys, *self.ARGS)
        _, out2, _ = run(capsys, *self.ARGS)
        assert out1 == out2

    def test_seed_changes_output(self, capsys):
        args = list(self.ARGS)
        args[args.index("9")] = "10"
        _, out1, _ = run(capsys, *self.ARGS)
        _, out2, _ = run(capsys, *args)
        assert out1 != out2

    def test_orthonormal_limit_near_machine_precision(self, capsys):
        # identity scalings make the glued matrix left orthogonal: both
        # variants then sit at machine-precision error levels
        code, out, _ = run(
            capsys,
            "glued",
            "--m",
            "8",
            "--nglued",
            "8",
            "--nbglued",
            "1",
            "--cond-a",
            "0",
            "--cond-a-glob",
            "0",
            "--seed",
            "4",
            "--report",
            "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["cond2_a"] == pytest.approx(1.0, abs=1e-12)
        for result in doc["results"]:
            assert result["normal_residual_rel"] <= 1e-14
            assert result["ortho_loss"] <= 1e-14

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("GSQR_SEED", "9")
        code, out, _ = run(
            capsys,
            "glued",
            "--m",
            "12",
            "--nglued",
            "3",
            "--nbglued",
            "2",
            "--cond-a",
            "1.0",
            "--cond-a-glob",
            "0.5",
            "--report",
            "json",
        )
        assert code == 0
        assert json.loads(out)["seed"] == 9


class TestVerify:
    def test_default_configuration_regression(self, capsys):
        # 20 trials at 30x10, kappa 100: everything passes and the
        # normal-equations audit sits far inside its bound
        code, out, _ = run(
            capsys, "verify", "--seed", "0", "--report", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["trials"] == 20 and doc["m"] == 30 and doc["n"] == 10
        assert doc["all_pass"] is True
        assert doc["worst_ratios"]["normal"] < 0.1

    def test_high_kappa_within_assumption(self, capsys):
        # kappa 1e5 at 50x20 keeps the conditioning predicate satisfied and
        # the orthogonality audit inside slack 10
        code, out, _ = run(
            capsys,
            "verify",
            "--trials",
            "1",
            "--m",
            "50",
            "--n",
            "20",
            "--kappa",
            "1e5",
            "--seed",
            "2",
            "--report",
            "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_pass"] is True
        assert doc["trial_summaries"][0]["assumption_satisfied"] is True
        assert doc["worst_ratios"]["ortho"] < 10.0

    def test_small_sweep_passes(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "--trials",
            "3",
            "--m",
            "10",
            "--n",
            "4",
            "--kappa",
            "10",
            "--seed",
            "1",
            "--report",
            "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_pass"] is True
        assert doc["total_prefixes"] == 12
        assert set(doc["pass_counts"]) == {"backward", "normal", "mu", "ortho", "q_norm"}
        assert all(v < 10.0 for v in doc["worst_ratios"].values())

    def test_kappa_precondition_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["verify", "--kappa", "1e6"])

    def test_orthonormal_input_near_machine_precision(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "--trials",
            "1",
            "--m",
            "5",
            "--n",
            "5",
            "--kappa",
            "1",
            "--seed",
            "3",
            "--report",
            "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["trial_summaries"][0]["kappa_r_full"] == pytest.approx(1.0, rel=1e-10)


class TestReportPlumbing:
    def test_markdown_to_file(self, tmp_path, capsys):
        dest = tmp_path / "table.md"
        code, out, _ = run(capsys, "example1", "--report", str(dest))
        assert code == 0
        assert dest.read_text().startswith("###")
        assert "report written to" in out

    def test_csv_format_flag(self, capsys):
        code, out, _ = run(capsys, "example1", "--report", "csv")
        assert code == 0
        assert out.splitlines()[0].startswith("algorithm,")
