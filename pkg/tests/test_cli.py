from __future__ import annotations

import json
import math

import pytest

from trigcoef.cli import RunConfig, main, parse_alphas, run

LIT = "poly 0.5 0 0;1 1.0 0.0;2 0.0 0.5"


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAlphas:
    def test_range(self):
        a = parse_alphas("2^-4..2^-20")
        assert len(a) == 17 and a[0] == 2**-4 and a[-1] == 2**-20

    def test_list(self):
        assert parse_alphas("0.1, 2^-3") == [0.1, 0.125]


class TestExitCodes:
    def test_no_source(self, capsys):
        code, _, err = call(capsys, "recover", "--K", "2")
        assert code == 2 and "--preset/--series-file/--literal" in err

    def test_two_sources(self, capsys):
        code, _, err = call(capsys, "eval", "--preset", "fatou", "--literal", LIT, "--x", "1")
        assert code == 2

    def test_odd_N(self, capsys):
        code, _, err = call(capsys, "recover", "--literal", LIT, "--N", "101")
        assert code == 2 and "--N" in err

    def test_negative_K(self, capsys):
        code, _, err = call(capsys, "recover", "--literal", LIT, "--K", "-1")
        assert code == 2 and "--K" in err

    def test_negative_tol(self, capsys):
        code, _, err = call(capsys, "recover", "--literal", LIT, "--quad-tol", "-1", "--method", "classical")
        assert code == 2 and "--quad-tol" in err

    def test_bad_preset(self, capsys):
        code, _, err = call(capsys, "eval", "--preset", "nope", "--x", "1")
        assert code == 2 and "--preset" in err

    def test_bad_literal(self, capsys):
        code, _, err = call(capsys, "eval", "--literal", "garbage here", "--x", "1")
        assert code == 2 and "--literal" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = call(capsys, "eval", "--series-file", str(tmp_path / "none.txt"), "--x", "1")
        assert code == 2 and "--series-file" in err

    def test_bad_schedule(self, capsys):
        code, _, err = call(capsys, "derive", "--literal", LIT, "--x", "1", "--ratio", "2")
        assert code == 2 and "schedule" in err

    def test_argparse_choice(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["recover", "--literal", LIT, "--format", "xml"])
        assert info.value.code == 2

    def test_unknown_subcommand(self, capsys):
        assert run(RunConfig("frobnicate")) == 2

    def test_nonconvergent_budget(self, capsys):
        code, out, err = call(capsys, "gallery", "fatou", "--alphas", "0.1,1e-6", "--term-budget", "10000")
        assert code == 3 and "BudgetExhausted" in err
        assert "0.1" in out


class TestCommands:
    def test_recover_literal(self, capsys):
        code, out, _ = call(capsys, "recover", "--literal", LIT, "--K", "2", "--N", "256", "--format", "json")
        assert code == 0
        data = json.loads(out)
        rows = {r[0]: r for r in data["rows"]}
        cols = data["columns"]
        assert rows[0][cols.index("a")] == pytest.approx(1.0, abs=1e-9)
        assert rows[1][cols.index("a")] == pytest.approx(1.0, abs=1e-9)
        assert rows[2][cols.index("b")] == pytest.approx(0.5, abs=1e-9)

    def test_recover_classical(self, capsys):
        code, out, _ = call(capsys, "recover", "--literal", LIT, "--K", "2", "--method", "classical", "--format", "csv")
        assert code == 0 and out.splitlines()[1].startswith("k,")

    def test_eval_integrated(self, capsys):
        code, out, _ = call(capsys, "eval", "--literal", LIT, "--x", "0.5", "--integrate", "1", "--format", "json")
        assert code == 0
        assert json.loads(out)["meta"]["integrate"] == 1

    def test_derive_schwarz(self, capsys):
        code, out, _ = call(capsys, "derive", "--literal", LIT, "--x", "0.3", "--format", "json")
        assert code == 0
        data = json.loads(out)
        cols = data["columns"]
        row = data["rows"][0]
        exact = 0.5 + math.cos(0.3) + 0.5 * math.sin(0.6)
        assert abs(row[cols.index("value")] - exact) <= 1e-6

    def test_divdiff(self, capsys):
        code, out, _ = call(capsys, "divdiff", "--check", "identity17", "--trials", "1000")
        assert code == 0 and "1000/1000 within 1e-12" in out

    def test_solve_check(self, capsys):
        code, out, _ = call(capsys, "solve", "--literal", LIT, "--N", "256", "--check", "--format", "csv")
        assert code == 0

    def test_gallery_james(self, capsys):
        code, out, _ = call(capsys, "gallery", "james")
        assert code == 0

    def test_gallery_skvortsov(self, capsys):
        code, out, _ = call(capsys, "gallery", "skvortsov")
        assert code == 0 and "additivity fails" in out

    def test_gallery_fatou_short(self, capsys):
        code, out, _ = call(capsys, "gallery", "fatou", "--alphas", "2^-4..2^-10")
        assert code == 0 and "divergence-consistent" in out

    def test_series_file(self, capsys, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text(LIT.replace(";", "\n"))
        code, out, _ = call(capsys, "eval", "--series-file", str(p), "--x", "0", "--format", "csv")
        assert code == 0
        assert float(out.splitlines()[-1].split(",")[1]) == pytest.approx(1.5)

    def test_output_file(self, capsys, tmp_path):
        p = tmp_path / "out.csv"
        code, out, _ = call(capsys, "recover", "--literal", LIT, "--K", "2", "--N", "64", "--format", "csv", "--output", str(p))
        assert code == 0 and out == ""
        assert p.read_text().startswith("#")


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["recover", "--literal", LIT, "--K", "2", "--N", "128", "--format", "csv"],
            ["divdiff", "--trials", "50", "--format", "json"],
            ["derive", "--literal", LIT, "--grid", "-1", "1", "5", "--kind", "sym-cesaro", "--integrate", "1"],
        ],
    )
    def test_byte_stable(self, capsys, argv):
        first = call(capsys, *argv)
        second = call(capsys, *argv)
        assert first == second and first[0] == 0
