"""Command-line interface: subcommands, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from specdiff.cli import main
from specdiff.report import parse_report
from specdiff.suite import get_suite
from specdiff.symexpr import from_text, type_of
from specdiff.sigdsl import render_ty


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_bundled_suite(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--suite", "finite_set")
        assert code == 0
        assert "finite_set" in out and "7 ops" in out and "immutable" in out
        assert "bool, int, int list" in out

    def test_sig_file(self, capsys, tmp_path):
        path = tmp_path / "pair.sig"
        path.write_text(
            "signature pair\nabstract t\nop make : int -> int -> t\n"
            "op first : t -> int\nend"
        )
        code, out, _ = run_cli(capsys, "validate", "--sig", str(path))
        assert code == 0
        assert "pair" in out and "2 ops" in out

    def test_invalid_sig_file(self, capsys, tmp_path):
        path = tmp_path / "bad.sig"
        path.write_text("signature bad\nop f : t -> t\nend")
        code, _, err = run_cli(capsys, "validate", "--sig", str(path))
        assert code == 2
        assert "error:" in err

    def test_unknown_suite(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--suite", "nope")
        assert code == 2
        assert "finite_set" in err  # lists what is available

    def test_missing_source_flag(self, capsys):
        code, _, err = run_cli(capsys, "validate")
        assert code == 2


class TestSample:
    def test_samples_typecheck(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sample", "--suite", "finite_set", "--type", "bool",
            "--count", "3", "--size", "5", "--seed", "1",
        )
        assert code == 0
        sig = get_suite("finite_set").signature
        lines = out.strip().splitlines()
        assert len(lines) == 3
        for line in lines:
            assert render_ty(type_of(from_text(line, sig), sig)) == "bool"

    def test_deterministic(self, capsys):
        args = ("sample", "--suite", "bst_map", "--type", "int", "--count", "5",
                "--size", "9", "--seed", "3")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_unknown_type(self, capsys):
        code, _, err = run_cli(
            capsys, "sample", "--suite", "counter", "--type", "string"
        )
        assert code == 2
        assert "error:" in err


class TestCheck:
    def test_references_pass(self, capsys, tmp_path):
        report = tmp_path / "out.jsonl"
        code, out, _ = run_cli(
            capsys,
            "check", "--suite", "finite_set", "--impl-a", "listset",
            "--impl-b", "bstset", "--trials", "500", "--report", str(report),
        )
        assert code == 0
        text = report.read_text()
        assert len(text.splitlines()) == 501  # trials + summary
        assert "0 failures" in out or "passed" in out

    def test_bug_detected_exits_one(self, capsys, tmp_path):
        report = tmp_path / "fail.jsonl"
        code, out, _ = run_cli(
            capsys,
            "check", "--suite", "bst_map", "--impl-a", "correct",
            "--impl-b", "b1", "--trials", "300", "--report", str(report),
        )
        assert code == 1
        assert "FAIL" in out
        parsed = parse_report(report.read_text())
        assert any(line.status == "failed" for line in parsed.trials)
        assert parsed.summaries[0]["failures"] >= 1

    def test_report_dash_streams_to_stdout(self, capsys):
        code, out, err = run_cli(
            capsys,
            "check", "--suite", "counter", "--impl-a", "int_counter",
            "--impl-b", "list_counter", "--trials", "50", "--report", "-",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 51
        assert all(json.loads(line) for line in lines)
        assert err  # the human-readable summary moves to stderr

    def test_check_without_report_writes_no_jsonl(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "check", "--suite", "counter", "--impl-a", "int_counter",
            "--impl-b", "int_counter", "--trials", "40",
        )
        assert code == 0
        assert not any(line.startswith("{") for line in out.splitlines())

    def test_stop_on_failure(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "check", "--suite", "bst_map", "--impl-a", "correct",
            "--impl-b", "b1", "--trials", "5000", "--stop-on-failure",
        )
        assert code == 1
        summary = [l for l in out.splitlines() if "trial" in l.lower()]
        assert summary

    def test_deterministic_stdout(self, capsys):
        args = (
            "check", "--suite", "bst_map", "--impl-a", "correct",
            "--impl-b", "b5", "--trials", "400", "--seed", "11", "--report", "-",
        )
        code1, first, err1 = run_cli(capsys, *args)
        code2, second, err2 = run_cli(capsys, *args)
        assert (code1, first, err1) == (code2, second, err2)

    def test_seed_env_override_and_flag_priority(self, capsys, monkeypatch):
        base = (
            "check", "--suite", "finite_set", "--impl-a", "listset",
            "--impl-b", "bstset", "--trials", "30", "--report", "-",
        )
        _, default_out, _ = run_cli(capsys, *base)
        monkeypatch.setenv("SPECDIFF_SEED", "99")
        _, env_out, _ = run_cli(capsys, *base)
        assert env_out != default_out  # env var changes the seed
        _, flag_out, _ = run_cli(capsys, *base, "--seed", "0")
        assert flag_out == default_out  # explicit flag beats the env var
        monkeypatch.delenv("SPECDIFF_SEED")

    def test_unknown_implementation(self, capsys):
        code, _, err = run_cli(
            capsys,
            "check", "--suite", "finite_set", "--impl-a", "listset",
            "--impl-b", "avl",
        )
        assert code == 2
        assert "error:" in err and "bstset" in err


class TestBench:
    def test_bench_table_and_output_file(self, capsys, tmp_path):
        out_path = tmp_path / "bench.jsonl"
        code, out, _ = run_cli(
            capsys,
            "bench", "--suite", "bst_map", "--runs", "5", "--trial-cap", "2000",
            "--seed", "0", "--output", str(out_path),
        )
        assert code == 0
        for column in (f"b{i}" for i in range(1, 9)):
            assert column in out
        for label in ("Min", "Mean", "Max"):
            assert label in out
        parsed = parse_report(out_path.read_text())
        assert len(parsed.benches) == 5 * 8
        assert {b.property.split(":")[-1] for b in parsed.benches} == {
            f"b{i}" for i in range(1, 9)
        }

    def test_bench_output_dash(self, capsys):
        code, out, err = run_cli(
            capsys,
            "bench", "--suite", "counter", "--runs", "3", "--trial-cap", "3000",
            "--output", "-",
        )
        assert code == 0
        for line in out.strip().splitlines():
            assert json.loads(line)["type"] == "bench"
        assert "saturating" in err  # table goes to stderr when stdout is data

    def test_deterministic(self, capsys):
        args = ("bench", "--suite", "finite_set", "--runs", "4",
                "--trial-cap", "500", "--seed", "5")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second


class TestSummarize:
    def test_summarize_report_file(self, capsys, tmp_path):
        report = tmp_path / "campaign.jsonl"
        run_cli(
            capsys,
            "check", "--suite", "bst_map", "--impl-a", "correct",
            "--impl-b", "b2", "--trials", "400", "--report", str(report),
        )
        code, out, _ = run_cli(capsys, "summarize", "--report", str(report))
        assert code == 0
        assert "depth histogram" in out
        assert "Mean" in out

    def test_summarize_bench_output(self, capsys, tmp_path):
        out_path = tmp_path / "bench.jsonl"
        run_cli(
            capsys,
            "bench", "--suite", "counter", "--runs", "3", "--trial-cap", "2000",
            "--output", str(out_path),
        )
        code, out, _ = run_cli(capsys, "summarize", "--report", str(out_path))
        assert code == 0
        assert "saturating" in out

    def test_malformed_report(self, capsys, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"nope"\n')
        code, _, err = run_cli(capsys, "summarize", "--report", str(bad))
        assert code == 2
        assert "line 1" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "summarize", "--report", str(tmp_path / "absent.jsonl"))
        assert code == 2


class TestTopLevel:
    def test_no_arguments_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys)
        assert code == 2

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 2

    def test_help_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "--help")
        assert code == 0
        for sub in ("check", "sample", "validate", "bench", "summarize"):
            assert sub in out
