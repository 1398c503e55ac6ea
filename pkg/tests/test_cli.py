"""End-to-end tests of the command line interface (in-process)."""

import json
import subprocess
import sys

import pytest

from ncpart.cli import entry


def run_cli(capsys, *args):
    code = entry(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# enum
# ---------------------------------------------------------------------------


def test_enum_text(capsys):
    code, out, err = run_cli(capsys, "enum", "--n", "3")
    assert code == 0 and err == ""
    assert out.splitlines() == ["111", "112", "121", "122", "123"]


def test_enum_json_n0(capsys):
    code, out, _ = run_cli(capsys, "enum", "--n", "0", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"n": 0, "count": 1, "partitions": [""]}


def test_enum_over_limit_is_a_clean_error(capsys):
    code, out, err = run_cli(capsys, "enum", "--n", "99")
    assert code == 2 and out == ""
    assert err.startswith("error:")


# ---------------------------------------------------------------------------
# dist / series
# ---------------------------------------------------------------------------


def test_dist_single_n(capsys):
    code, out, _ = run_cli(capsys, "dist", "--pattern", "112", "--n", "3")
    assert code == 0
    assert out.strip() == "4 + q"


def test_dist_constant_pattern(capsys):
    code, out, _ = run_cli(capsys, "dist", "--pattern", "212", "--n", "8")
    assert code == 0
    assert out.strip() == "1430"


def test_dist_series_text(capsys):
    code, out, _ = run_cli(
        capsys, "dist", "--pattern", "112", "--order", "5"
    )
    assert code == 0
    assert out.strip() == (
        "(1) + (1)*x^1 + (2)*x^2 + (4 + q)*x^3 + (9 + 5*q)*x^4 + O(x^5)"
    )


def test_dist_methods_agree_in_json(capsys):
    args = ["dist", "--pattern", "122", "--order", "9", "--format", "json"]
    _, brute, _ = run_cli(capsys, *args, "--method", "brute")
    _, closed, _ = run_cli(capsys, *args, "--method", "closed")
    _, recur, _ = run_cli(capsys, *args, "--method", "recurrence")
    assert (
        json.loads(brute)["series"]
        == json.loads(closed)["series"]
        == json.loads(recur)["series"]
    )


def test_dist_requires_exactly_one_of_n_and_order(capsys):
    code, _, err = run_cli(
        capsys, "dist", "--pattern", "112", "--n", "3", "--order", "5"
    )
    assert code == 2 and "exactly one" in err
    code, _, err = run_cli(capsys, "dist", "--pattern", "112")
    assert code == 2 and "exactly one" in err


def test_dist_rejects_inapplicable_method(capsys):
    code, _, err = run_cli(
        capsys, "dist", "--pattern", "212", "--n", "5", "--method", "closed"
    )
    assert code == 2
    assert "applicable methods" in err


def test_dist_rejects_recurrence_outside_staircase_tail(capsys):
    code, _, err = run_cli(
        capsys, "dist", "--pattern", "11", "--n", "5", "--method", "recurrence"
    )
    assert code == 2
    assert "applicable methods" in err


def test_series_family_flags(capsys):
    code, out, _ = run_cli(
        capsys,
        *("series --family staircase-tail --m 2 --a 2 --order 5".split()),
    )
    assert code == 0
    assert out.strip() == (
        "(1) + (1)*x^1 + (2)*x^2 + (4 + q)*x^3 + (9 + 5*q)*x^4 + O(x^5)"
    )


def test_series_with_repetition_marker_collapses_at_one(capsys):
    base = "series --family staircase-tail --m 2 --a 2 --order 7".split()
    _, plain, _ = run_cli(capsys, *base, "--format", "json")
    code, at_one, _ = run_cli(capsys, *base, "--v", "1", "--format", "json")
    assert code == 0
    assert json.loads(at_one)["series"] == json.loads(plain)["series"]


def test_series_v_marker_requires_staircase_tail(capsys):
    code, _, err = run_cli(
        capsys, "series", "--pattern", "11", "--order", "5", "--v", "2"
    )
    assert code == 2 and "error:" in err


def test_pattern_and_family_are_exclusive(capsys):
    code, _, err = run_cli(
        capsys,
        "dist", "--pattern", "11", "--family", "run", "--a", "2", "--n", "4",
    )
    assert code == 2 and "error:" in err


# ---------------------------------------------------------------------------
# total
# ---------------------------------------------------------------------------


def test_total_auto_uses_closed_form(capsys):
    code, out, _ = run_cli(
        capsys, "total", "--pattern", "11", "--n", "4", "--format", "json"
    )
    assert code == 0
    assert json.loads(out) == {
        "pattern": "11",
        "n": 4,
        "method": "closed",
        "total": 15,
    }


def test_total_auto_falls_back_to_brute(capsys):
    code, out, _ = run_cli(
        capsys, "total", "--pattern", "212", "--n", "6", "--format", "json"
    )
    assert code == 0
    assert json.loads(out) == {
        "pattern": "212",
        "n": 6,
        "method": "brute",
        "total": 0,
    }


def test_total_methods_agree(capsys):
    for pattern in ("11", "112", "122", "1231"):
        _, closed, _ = run_cli(
            capsys, "total", "--pattern", pattern, "--n", "7",
            "--method", "closed",
        )
        _, brute, _ = run_cli(
            capsys, "total", "--pattern", pattern, "--n", "7",
            "--method", "brute",
        )
        assert closed.strip() == brute.strip(), pattern


# ---------------------------------------------------------------------------
# bij
# ---------------------------------------------------------------------------


def test_bij_f_worked_example(capsys):
    code, out, _ = run_cli(
        capsys,
        "bij", "--map", "f",
        "--pi", "1,2,3,1,1,4,5,1,6,7,8,6,6,1,9",
        "--tau", "231", "--tau2", "221",
    )
    assert code == 0
    assert out.strip() == "122113314554617"


def test_bij_g_worked_example(capsys):
    code, out, _ = run_cli(
        capsys,
        "bij", "--map", "g", "--pi", "122322114115", "--sigma", "", "--b", "2",
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out) == {
        "map": "g",
        "pi": "122322114115",
        "sigma": "",
        "b": 2,
        "result": "122332214415",
    }


def test_bij_equiv(capsys):
    code, out, _ = run_cli(
        capsys,
        "bij", "--map", "equiv", "--pi", "121133",
        "--tau", "211", "--tau2", "221",
    )
    assert code == 0
    assert out.strip() == "122133"


def test_bij_runrev(capsys):
    code, out, _ = run_cli(
        capsys,
        "bij", "--map", "runrev", "--pi", "1121",
        "--a", "1", "--rho", "1", "--b", "2",
    )
    assert code == 0
    assert out.strip() == "1211"


def test_bij_descent_code(capsys):
    code, out, _ = run_cli(
        capsys, "bij", "--map", "descent-code", "--pi", "1213311"
    )
    assert code == 0
    assert out.strip() == "1211311"


def test_bij_missing_arguments(capsys):
    code, _, err = run_cli(capsys, "bij", "--map", "f", "--pi", "121")
    assert code == 2 and "needs --tau" in err
    code, _, err = run_cli(capsys, "bij", "--map", "g", "--pi", "121")
    assert code == 2 and "needs --sigma" in err
    code, _, err = run_cli(capsys, "bij", "--map", "runrev", "--pi", "121")
    assert code == 2 and "needs --a" in err


def test_bij_invalid_input_is_a_clean_error(capsys):
    code, _, err = run_cli(
        capsys, "bij", "--map", "descent-code", "--pi", "1312"
    )
    assert code == 2 and err.startswith("error:")


# ---------------------------------------------------------------------------
# equivclasses
# ---------------------------------------------------------------------------


def test_equivclasses_length_three(capsys):
    code, out, _ = run_cli(capsys, "equivclasses", "--len", "3", "--n", "2..9")
    assert code == 0
    assert out.splitlines() == [
        "111",
        "112 122",
        "121",
        "123",
        "132 212 312",
        "211 221 231",
        "213",
        "321",
    ]


def test_equivclasses_json_contains_known_class(capsys):
    code, out, _ = run_cli(
        capsys, "equivclasses", "--len", "4", "--n", "2..8",
        "--format", "json",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["length"] == 4 and obj["n_min"] == 2 and obj["n_max"] == 8
    assert ["1121", "1211", "1221", "1231"] in obj["classes"]


def test_equivclasses_bounds(capsys):
    code, _, err = run_cli(capsys, "equivclasses", "--len", "6", "--n", "2..8")
    assert code == 2 and "error:" in err
    code, _, err = run_cli(capsys, "equivclasses", "--len", "3", "--n", "2..11")
    assert code == 2 and "error:" in err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_target_passes_and_writes_report(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "verify", "--target", "table1", "--order", "6",
        "--out", str(out_file),
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("target table1: pass (")
    assert lines[-1] == "verification passed"
    report = json.loads(out_file.read_text())
    assert report["target"] == "table1"
    assert report["order"] == 6
    assert report["status"] == "pass"
    assert report["cells"] and all(
        c["status"] == "pass" for c in report["cells"]
    )


def test_verify_order_out_of_bounds(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--target", "table1", "--order", "17"
    )
    assert code == 2 and "error:" in err


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def test_cache_is_a_pure_optimization(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("NCPART_CACHE", str(tmp_path))
    args = ["dist", "--pattern", "112", "--order", "7", "--format", "json"]
    _, cold, _ = run_cli(capsys, *args)
    cached_files = list(tmp_path.rglob("*.json"))
    assert cached_files, "expected per-row cache files to be written"
    _, warm, _ = run_cli(capsys, *args)
    _, bypass, _ = run_cli(capsys, *args, "--no-cache")
    assert cold == warm == bypass


def test_cache_disabled_writes_nothing(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("NCPART_CACHE", str(tmp_path))
    run_cli(capsys, "dist", "--pattern", "112", "--n", "6", "--no-cache")
    assert not list(tmp_path.rglob("*.json"))


# ---------------------------------------------------------------------------
# configuration invariants
# ---------------------------------------------------------------------------


def test_order_cap(capsys):
    code, _, err = run_cli(
        capsys, "dist", "--pattern", "112", "--order", "25"
    )
    assert code == 2 and "error:" in err


def test_enumeration_cap(capsys):
    code, _, err = run_cli(capsys, "dist", "--pattern", "112", "--n", "17")
    assert code == 2 and "error:" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncpart", "enum", "--n", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["111", "112", "121", "122", "123"]
