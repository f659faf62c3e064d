"""Harness tests: sweep reports, serialization determinism, exit codes."""

import pytest

from qdel.cli import Report, ReportEntry, SweepConfig, emit_report, main, run_sweep


class TestSweepConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError, match="trials"):
            SweepConfig("verify-q4", trials=0, seed=0, tol=1e-9)
        with pytest.raises(ValueError, match="tolerance"):
            SweepConfig("verify-q4", trials=1, seed=0, tol=0.0)
        with pytest.raises(ValueError, match="unknown command"):
            SweepConfig("bogus", trials=1, seed=0, tol=1e-9)
        with pytest.raises(ValueError, match="level"):
            SweepConfig("verify-general", trials=1, seed=0, tol=1e-9, level=5)
        with pytest.raises(ValueError, match="step3"):
            SweepConfig("verify-q4", trials=1, seed=0, tol=1e-9, step3="x")


class TestSweeps:
    def test_verify_q4_passes(self):
        report = run_sweep(SweepConfig("verify-q4", trials=5, seed=42, tol=1e-9))
        assert report.passed
        assert [e.label for e in report.entries] == ["1", "2", "3", "4"]
        assert max(e.max_infidelity for e in report.entries) <= 1e-10

    def test_verify_q4_corrected_variant(self):
        report = run_sweep(
            SweepConfig("verify-q4", trials=5, seed=42, tol=1e-9, step3="corrected")
        )
        assert report.passed

    def test_verify_general_passes(self):
        report = run_sweep(SweepConfig("verify-general", trials=3, seed=7, tol=1e-9, level=3))
        assert report.passed
        assert len(report.entries) == 8

    def test_lemma1_passes_at_strict_tolerance(self):
        report = run_sweep(SweepConfig("lemma1", trials=20, seed=3, tol=1e-12))
        assert report.passed

    def test_circuit_check_passes(self):
        report = run_sweep(SweepConfig("circuit-check", trials=20, seed=0, tol=1e-10))
        assert report.passed
        labels = [e.label for e in report.entries]
        assert "encoder-equivalence" in labels
        assert "encoder-cnot-table" in labels

    def test_impossible_tolerance_fails_cleanly(self):
        report = run_sweep(SweepConfig("verify-q4", trials=2, seed=0, tol=1e-30))
        assert not report.passed
        assert all(e.error is None for e in report.entries)


class TestEmission:
    def _report(self, seed=11):
        return run_sweep(SweepConfig("verify-q4", trials=3, seed=seed, tol=1e-9))

    @pytest.mark.parametrize("fmt", ["json", "csv", "text"])
    def test_byte_identical_for_same_config(self, fmt):
        a = emit_report(self._report(), fmt)
        b = emit_report(self._report(), fmt)
        assert a.encode() == b.encode()

    def test_json_shape(self):
        out = emit_report(self._report(), "json")
        assert '"pass": true' in out
        assert out.count('"position"') == 4
        import json

        parsed = json.loads(out)
        assert parsed["command"] == "verify-q4"
        assert parsed["seed"] == 11
        assert len(parsed["entries"]) == 4

    def test_csv_header_fixed(self):
        out = emit_report(self._report(), "csv")
        assert out.splitlines()[0] == "command,seed,trials,position,max_infidelity,pass"
        assert len(out.splitlines()) == 5

    def test_text_one_line_per_position(self):
        out = emit_report(self._report(), "text")
        lines = out.splitlines()
        assert sum(1 for ln in lines if ln.startswith(("1:", "2:", "3:", "4:"))) == 4
        assert lines[-1] == "result: PASS"

    def test_numbers_use_six_significant_digits(self):
        report = Report("verify-q4", 0, 1, 1e-9, None, "literal")
        report.entries.append(ReportEntry("1", 1.2345678e-11, 0.0, None, True))
        report.passed = True
        assert "1.23457e-11" in emit_report(report, "csv")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report(self._report(), "xml")

    def test_wall_time_not_serialized(self):
        report = self._report()
        assert report.wall_time_s > 0
        for fmt in ("json", "csv", "text"):
            assert "wall" not in emit_report(report, fmt)


class TestMain:
    def test_pass_exit_code_and_stdout(self, capsys):
        assert main(["verify-q4", "--trials", "3", "--seed", "5"]) == 0
        out = capsys.readouterr()
        assert '"pass": true' in out.out
        assert out.err == ""

    def test_failure_names_first_check_on_stderr(self, capsys):
        assert main(["verify-q4", "--trials", "2", "--tol", "1e-30"]) == 1
        err = capsys.readouterr().err
        assert "check failed" in err
        assert "verify-q4 1" in err

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        assert main(["lemma1", "--trials", "3", "--out", str(target)]) == 0
        assert '"command": "lemma1"' in target.read_text()
        assert capsys.readouterr().out == ""

    def test_formats(self, capsys):
        assert main(["verify-q4", "--trials", "2", "--format", "csv"]) == 0
        assert capsys.readouterr().out.startswith("command,seed,trials")

    def test_verify_general_level_flag(self, capsys):
        assert main(["verify-general", "--trials", "2", "--l", "2"]) == 0
        assert '"l": 2' in capsys.readouterr().out

    def test_invalid_config_exit_2(self, capsys):
        assert main(["verify-general", "--trials", "2", "--l", "9"]) == 2
        assert "invalid configuration" in capsys.readouterr().err

    def test_parse_round_trip(self, tmp_path, capsys):
        src = tmp_path / "circ.txt"
        src.write_text("qubits 4\nCU 1 2\nCV 2 1\nH 3\n# tail comment\n")
        assert main(["parse", str(src)]) == 0
        assert capsys.readouterr().out == "qubits 4\nCU 1 2\nCV 2 1\nH 3\n"

    def test_parse_error_positioned(self, tmp_path, capsys):
        src = tmp_path / "bad.txt"
        src.write_text("qubits 2\nCX 2 5\n")
        assert main(["parse", str(src)]) == 2
        err = capsys.readouterr().err
        assert "line 2" in err and "out of range" in err

    def test_parse_missing_file(self, tmp_path, capsys):
        assert main(["parse", str(tmp_path / "nope.txt")]) == 2
        assert "cannot read" in capsys.readouterr().err


class TestDeterminism:
    def test_same_seed_same_report_object(self):
        a = run_sweep(SweepConfig("verify-general", trials=2, seed=9, tol=1e-9, level=2))
        b = run_sweep(SweepConfig("verify-general", trials=2, seed=9, tol=1e-9, level=2))
        assert emit_report(a, "json") == emit_report(b, "json")

    def test_different_seed_changes_nothing_about_pass(self):
        for seed in (0, 1, 2):
            report = run_sweep(SweepConfig("verify-q4", trials=2, seed=seed, tol=1e-9))
            assert report.passed
