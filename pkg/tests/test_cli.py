"""Command-line behavior: flags, config, provenance, exit codes."""

import math

import pytest

from qaoa_linear.circuit import interpret_circuit
from qaoa_linear.cli import (
    EXIT_CHECK,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    THREADS_ENV,
    UsageError,
    main,
    parse_angle,
    parse_angle_list,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def value_of(out, key):
    for line in out.splitlines():
        if line.startswith(f"{key}="):
            return line.split("=", 1)[1]
    raise KeyError(f"{key} not found in output:\n{out}")


class TestParseAngle:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("0", 0.0),
            ("1.5", 1.5),
            ("-0.25", -0.25),
            ("pi", math.pi),
            ("PI", math.pi),
            ("π", math.pi),
            ("-pi", -math.pi),
            ("pi/4", math.pi / 4),
            ("π/6", math.pi / 6),
            ("-pi/2", -math.pi / 2),
            ("3pi/4", 3 * math.pi / 4),
            ("2pi", 2 * math.pi),
            ("0.5pi", math.pi / 2),
        ],
    )
    def test_accepted_forms(self, text, expected):
        assert parse_angle(text) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("bad", ["", "pie", "pi/", "x", "1..2", "pi/pi"])
    def test_rejected_forms(self, bad):
        with pytest.raises(UsageError):
            parse_angle(bad)

    def test_list(self):
        assert parse_angle_list("0,pi/2") == pytest.approx((0.0, math.pi / 2))
        with pytest.raises(UsageError):
            parse_angle_list("1,,2")


class TestProb:
    def test_zero_angles(self, capsys):
        code, out, _ = run(capsys, "prob", "--model", "1,2", "--gamma", "0", "--beta", "0")
        assert code == EXIT_OK
        assert float(value_of(out, "prob_opt")) == pytest.approx(0.25, abs=1e-12)

    def test_pi_literal_perfect_recovery(self, capsys):
        code, out, _ = run(
            capsys, "prob", "--model", "1", "--gamma", "pi/4", "--beta", "π/4"
        )
        assert code == EXIT_OK
        assert float(value_of(out, "prob_opt")) == pytest.approx(1.0, abs=1e-12)

    def test_replicated_model_squares_probability(self, capsys):
        args = ("--gamma", "0.3", "--beta", "0.8")
        _, out_base, _ = run(capsys, "prob", "--model", "1,2", *args)
        _, out_rep, _ = run(capsys, "prob", "--model", "1,2,1,2", *args)
        base = float(value_of(out_base, "prob_opt"))
        rep = float(value_of(out_rep, "prob_opt"))
        assert rep == pytest.approx(base**2, abs=1e-12)

    def test_log_flag(self, capsys):
        code, out, _ = run(
            capsys, "prob", "--model", "1,2", "--gamma", "0", "--beta", "0", "--log"
        )
        assert code == EXIT_OK
        assert float(value_of(out, "log_prob_opt")) == pytest.approx(
            math.log(0.25), abs=1e-9
        )

    def test_m_shorthand(self, capsys):
        _, out_a, _ = run(capsys, "prob", "--m", "2", "--gamma", "0.2", "--beta", "0.5")
        _, out_b, _ = run(capsys, "prob", "--model", "1,2", "--gamma", "0.2", "--beta", "0.5")
        assert value_of(out_a, "prob_opt") == value_of(out_b, "prob_opt")

    def test_provenance_lines(self, capsys):
        _, out, _ = run(capsys, "prob", "--model", "1,2", "--gamma", "0", "--beta", "0")
        assert "# model=1,2 (flag)" in out
        assert "# log=false (default)" in out

    def test_missing_angles_usage_error(self, capsys):
        code, _, err = run(capsys, "prob", "--model", "1,2")
        assert code == EXIT_USAGE
        assert "error" in err

    def test_mismatched_lengths_usage_error(self, capsys):
        code, _, _ = run(
            capsys, "prob", "--model", "1", "--gamma", "0,0", "--beta", "0"
        )
        assert code == EXIT_USAGE

    def test_model_and_m_conflict(self, capsys):
        code, _, _ = run(
            capsys, "prob", "--model", "1", "--m", "2", "--gamma", "0", "--beta", "0"
        )
        assert code == EXIT_USAGE


class TestOptimize:
    def test_single_method_lean(self, capsys):
        code, out, _ = run(
            capsys,
            "optimize", "--m", "1", "--p", "1",
            "--method", "nelder-mead", "--budget", "2000", "--restarts", "2",
        )
        assert code == EXIT_OK
        assert float(value_of(out, "best_value")) >= 1.0 - 1e-6
        assert value_of(out, "method") == "nelder-mead"
        assert len(parse_angle_list(value_of(out, "best_gammas"))) == 1

    def test_portfolio_default(self, capsys):
        code, out, _ = run(
            capsys, "optimize", "--m", "2", "--p", "1", "--budget", "1500", "--restarts", "2"
        )
        assert code == EXIT_OK
        assert float(value_of(out, "best_value")) == pytest.approx(0.882385, abs=1e-3)
        assert int(value_of(out, "evaluations_used")) <= 4 * 1500 * 2

    def test_unknown_method_usage_error(self, capsys):
        code, _, _ = run(capsys, "optimize", "--m", "1", "--p", "1", "--method", "newton")
        assert code == EXIT_USAGE

    def test_missing_p_usage_error(self, capsys):
        code, _, _ = run(capsys, "optimize", "--m", "1")
        assert code == EXIT_USAGE


class TestTable:
    def test_single_cell_csv(self, capsys):
        code, out, _ = run(
            capsys, "table", "--M", "1", "--P", "1", "--budget", "400", "--restarts", "1"
        )
        assert code == EXIT_OK
        assert "m,p,prob,base" in out
        assert "1,1,1.000000,1.00000" in out
        assert "# cells=1" in out

    def test_byte_identical_reruns(self, capsys, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            code, _, _ = run(
                capsys,
                "table", "--M", "2", "--P", "1", "--seed", "9",
                "--budget", "400", "--restarts", "1", "--out", str(path),
            )
            assert code == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert b"\r" not in paths[0].read_bytes()

    def test_structured_format(self, capsys):
        code, out, _ = run(
            capsys,
            "table", "--M", "1", "--P", "2", "--budget", "400", "--restarts", "1",
            "--format", "structured",
        )
        assert code == EXIT_OK
        assert "m=1 p=1 prob=" in out
        assert "m=1 p=2 prob=" in out

    def test_threads_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "3")
        _, out, _ = run(
            capsys, "table", "--M", "1", "--P", "1", "--budget", "200", "--restarts", "1"
        )
        assert "# threads=3 (env)" in out

    def test_threads_flag_beats_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "3")
        _, out, _ = run(
            capsys,
            "table", "--M", "1", "--P", "1", "--budget", "200", "--restarts", "1",
            "--threads", "2",
        )
        assert "# threads=2 (flag)" in out

    def test_unwritable_path_io_error(self, capsys):
        code, _, err = run(
            capsys,
            "table", "--M", "1", "--P", "1", "--budget", "100", "--restarts", "1",
            "--out", "/nonexistent-dir/table.csv",
        )
        assert code == EXIT_IO
        assert "io error" in err

    def test_missing_dimensions_usage_error(self, capsys):
        code, _, _ = run(capsys, "table", "--M", "2")
        assert code == EXIT_USAGE


class TestSample:
    def test_perfect_recovery_mean_one(self, capsys):
        code, out, _ = run(
            capsys,
            "sample", "--model", "1", "--gamma", "pi/4", "--beta", "pi/4",
            "--runs", "100",
        )
        assert code == EXIT_OK
        assert float(value_of(out, "mean_trials")) == 1.0
        assert float(value_of(out, "true_prob")) == pytest.approx(1.0, abs=1e-12)

    def test_auto_optimizes_first(self, capsys):
        code, out, _ = run(
            capsys,
            "sample", "--m", "1", "--p", "1", "--auto", "--runs", "50",
            "--method", "nelder-mead", "--budget", "2000", "--restarts", "2",
        )
        assert code == EXIT_OK
        assert float(value_of(out, "mean_trials")) == 1.0

    def test_refuses_degenerate(self, capsys):
        model = ",".join(["1"] * 40)
        code, _, err = run(
            capsys,
            "sample", "--model", model, "--gamma", "0", "--beta", "0", "--runs", "10",
        )
        assert code == EXIT_CHECK
        assert "refused" in err

    def test_auto_conflicts_with_angles(self, capsys):
        code, _, _ = run(
            capsys,
            "sample", "--m", "1", "--p", "1", "--auto", "--gamma", "0",
            "--beta", "0", "--runs", "10",
        )
        assert code == EXIT_USAGE

    def test_report_written_to_file(self, capsys, tmp_path):
        path = tmp_path / "report.txt"
        code, out, _ = run(
            capsys,
            "sample", "--model", "1", "--gamma", "pi/4", "--beta", "pi/4",
            "--runs", "20", "--out", str(path),
        )
        assert code == EXIT_OK
        text = path.read_text()
        assert "mean_trials=1" in text
        assert "runs=20" in text


class TestEmitCircuit:
    def test_writes_interpretable_file(self, capsys, tmp_path):
        path = tmp_path / "circuit.txt"
        code, _, _ = run(
            capsys, "emit-circuit", "--model", "3,-1", "--width", "4", "--out", str(path)
        )
        assert code == EXIT_OK
        assert interpret_circuit(path.read_text()) == (0, 1)

    def test_stdout_is_interpretable_despite_provenance(self, capsys):
        code, out, _ = run(capsys, "emit-circuit", "--model", "1", "--width", "2")
        assert code == EXIT_OK
        assert interpret_circuit(out) == (0,)

    def test_non_integer_usage_error(self, capsys):
        code, _, err = run(capsys, "emit-circuit", "--model", "1.5", "--width", "4")
        assert code == EXIT_USAGE
        assert "coefficient 1" in err

    def test_overflow_names_coefficient(self, capsys):
        code, _, err = run(capsys, "emit-circuit", "--model", "1,9", "--width", "4")
        assert code == EXIT_USAGE
        assert "coefficient 2" in err


class TestVerify:
    def test_all_checks_pass(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == EXIT_OK
        assert out.count("PASS") == 5
        assert "FAIL" not in out
        assert "# checks=5 failures=0" in out

    def test_seed_insensitive(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", "9")
        assert code == EXIT_OK
        assert "FAIL" not in out


class TestScan:
    def test_p1_profile(self, capsys):
        code, out, _ = run(
            capsys,
            "scan", "--p", "1", "--m-max", "2",
            "--method", "nelder-mead", "--budget", "2000", "--restarts", "2",
        )
        assert code == EXIT_OK
        lines = [l for l in out.splitlines() if l.startswith("m=")]
        assert "below_one=false" in lines[0]
        assert "below_one=true" in lines[1]
        assert "# anomalies=0" in out


class TestConfigFile:
    def test_config_supplies_values(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# a comment\nmodel=1,2\ngamma=0\nbeta=0\n")
        code, out, _ = run(capsys, "prob", "--config", str(cfg))
        assert code == EXIT_OK
        assert float(value_of(out, "prob_opt")) == pytest.approx(0.25, abs=1e-12)
        assert "# model=1,2 (config)" in out

    def test_flag_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("model=1\ngamma=0\nbeta=0\n")
        code, out, _ = run(capsys, "prob", "--config", str(cfg), "--gamma", "pi/4", "--beta", "pi/4")
        assert code == EXIT_OK
        assert "# gamma=pi/4 (flag)" in out
        assert float(value_of(out, "prob_opt")) == pytest.approx(1.0, abs=1e-12)

    def test_unknown_key_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("model=1\ngamma=0\nbeta=0\nbananas=3\n")
        code, _, err = run(capsys, "prob", "--config", str(cfg))
        assert code == EXIT_USAGE
        assert "bananas" in err

    def test_missing_config_io_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "prob", "--config", str(tmp_path / "absent.cfg"))
        assert code == EXIT_IO

    def test_malformed_line_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("model 1,2\n")
        code, _, _ = run(capsys, "prob", "--config", str(cfg))
        assert code == EXIT_USAGE


class TestTopLevel:
    def test_no_arguments_usage_error(self, capsys):
        assert run(capsys, )[0] == EXIT_USAGE

    def test_unknown_command_usage_error(self, capsys):
        assert run(capsys, "frobnicate")[0] == EXIT_USAGE

    def test_help_exits_zero(self, capsys):
        assert run(capsys, "--help")[0] == EXIT_OK
