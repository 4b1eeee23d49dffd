import json
import subprocess
import sys

import pytest

from hecke_forge.cli import EXIT_OK, EXIT_USAGE, main, parse_r
from hecke_forge.report import INCONCLUSIVE, Report, dumps, merge


def run_json(capsys, argv):
    code = main(argv + ["--output", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_lucas_json_schema(capsys):
    code, data, _ = run_json(capsys, ["lucas"])
    assert code == EXIT_OK
    assert data["schema"] == 1 and data["suite"] == "lucas"
    assert set(data) == {"schema", "suite", "params", "checks", "summary"}
    for c in data["checks"]:
        assert set(c) == {"name", "label", "status", "normative", "witness"}
        assert c["status"] == "pass"
    assert data["summary"]["fail"] == 0 and data["summary"]["total"] == len(data["checks"])


@pytest.mark.parametrize("argv", [
    ["selfext", "--p", "2", "--r", "0"],
    ["selfext", "--p", "4"],
    ["relations", "--mode", "qp", "--f", "2"],
    ["selfext", "--p", "5", "--r", "1", "--mode", "qp"],
    ["selfext", "--p", "5", "--f", "2"],
    ["psi", "--p", "3", "--f", "2", "--r", "1,2"],
    ["p1", "--p", "3", "--f", "2", "--r", "2,2"],
    ["psi", "--p", "3", "--f", "2", "--r", "9"],
    ["psi", "--p", "5", "--f", "1"],
    ["comparison", "--p", "3", "--f", "2", "--r", "9,13", "--mode", "qp"],
    ["relations", "--depth", "-1"],
    ["selfext", "--p", "5", "--mode", "qp", "--depth", "1", "--buffer", "2"],
    ["psi", "--r", "nine"],
])
def test_invalid_configurations_exit_with_usage(argv, capsys):
    assert main(argv) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "error" in err


def test_parse_r():
    assert parse_r("0", 5, 1) == ("zero", (0,))
    assert parse_r("p-1", 5, 1) == ("q-1", (4,))
    assert parse_r("4", 5, 1) == ("q-1", (4,))
    assert parse_r("9,13", 3, 2) == ("profile", (9, 13))
    assert parse_r(None, 3, 2) == ("default", ())


def test_relations_text_output(capsys):
    assert main(["relations", "--p", "3", "--f", "1", "--depth", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "quadratic relation" in out and "0 failed" in out


def test_json_is_deterministic(capsys):
    argv = ["selfext", "--p", "3", "--mode", "qp", "--depth", "2", "--buffer", "1"]
    _, _, first = run_json(capsys, argv)
    _, data, second = run_json(capsys, argv)
    assert first == second
    assert data["summary"]["fail"] == 0


def test_comparison_small_depth(capsys):
    code, data, _ = run_json(capsys, ["comparison", "--p", "3", "--f", "2", "--r", "9,13", "--depth", "1"])
    assert code == EXIT_OK
    assert data["params"]["r"] == [9, 13]


def test_strict_mode_fails_on_inconclusive():
    rep = Report("x", {})
    rep.add("a", "b", True)
    rep.add("c", "d", INCONCLUSIVE)
    assert rep.ok() and not rep.ok(strict=True)
    rep.add("e", "f", False, normative=False)
    assert rep.ok()
    rep.add("g", "h", False)
    assert not rep.ok()
    assert rep.status_of("g") == "fail"
    with pytest.raises(KeyError):
        rep.get("zzz")


def test_merge_and_dumps():
    a, b = Report("a", {}), Report("b", {})
    a.add("x", "l", True)
    b.add("y", "l", False)
    m = merge("all", {"p": 3}, [a, b])
    assert m["summary"]["pass"] == 1 and m["summary"]["fail"] == 1 and m["summary"]["total"] == 2
    s = dumps(m)
    assert s.endswith("\n") and json.loads(s) == m


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hecke_forge", "selfext", "--p", "2", "--r", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_USAGE
    assert "odd prime" in proc.stderr
