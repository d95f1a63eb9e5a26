import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from pathgames.cli import main
from pathgames.exactlp import format_rational, parse_rational


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out


def fx(name):
    return str(FIXTURES / f"{name}.json")


def test_nucleolus_g3(capsys):
    status, out = run(capsys, "nucleolus", "--game", "edge", "--input", fx("G3"))
    assert status == 0
    assert out.strip() == '{"nucleolus": {"e1": "1/2", "e2": "1/2"}}'


def test_least_core_nonempty(capsys):
    status, out = run(capsys, "least-core", "--game", "edge", "--input", fx("G2"))
    doc = json.loads(out)
    assert status == 0 and doc["core"] == "nonempty" and doc["epsilon"] == "0"


def test_least_core_empty(capsys):
    status, out = run(capsys, "least-core", "--input", fx("G4"), "--brute-check")
    doc = json.loads(out)
    assert status == 0 and doc["epsilon"] == "-1/2" and doc["f_star"] == 2


@pytest.mark.parametrize("name, kind", [
    ("G1", "edge"), ("G2", "edge"), ("G3", "edge"), ("G4", "edge"), ("G5", "edge"),
    ("vertex_diamond", "vertex"), ("chain", "vertex"), ("G4", "vertex"), ("undirected_triangle", "edge"),
])
def test_check_all_fixtures(capsys, name, kind):
    for mode in ("generate", "enumerate"):
        status, out = run(capsys, "check", "--game", kind, "--input", fx(name), "--mode", mode)
        assert status == 0 and json.loads(out) == {"agreement": True}


def test_trace_and_round_trip(capsys):
    status, out = run(capsys, "nucleolus", "--input", fx("G5"), "--trace")
    doc = json.loads(out)
    assert status == 0 and len(doc["trace"]) == 2
    values = list(doc["nucleolus"].values())
    values += [r["epsilon"] for r in doc["trace"]]
    assert all(format_rational(parse_rational(v)) == v for v in values)


def test_other_verbs(capsys):
    status, out = run(capsys, "core", "--input", fx("G1"), "--brute-check")
    assert status == 0 and json.loads(out)["veto"] == ["e"]
    status, out = run(capsys, "cs-core", "--game", "vertex", "--input", fx("vertex_diamond"), "--brute-check")
    assert status == 0 and json.loads(out)["cs_core"]["min_cut"] == ["a", "b"]
    status, out = run(capsys, "flow-nucleolus", "--game", "vertex", "--input", fx("G4"), "--brute-check")
    assert status == 0 and set(json.loads(out)["flow_nucleolus"].values()) == {"1/2"}


def test_undirected_keys_are_original_ids(capsys):
    status, out = run(capsys, "nucleolus", "--input", fx("undirected_triangle"))
    assert status == 0 and set(json.loads(out)["nucleolus"]) == {"sa", "at", "st"}


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "nucleolus", "--input", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "loop.json"
    bad.write_text('{"source": "s", "sink": "t", "edges": [{"id": "l", "tail": "s", "head": "s"}]}')
    status = main(["nucleolus", "--input", str(bad)])
    err = capsys.readouterr().err
    assert status == 1 and "'l'" in err
    assert run(capsys, "nucleolus", "--game", "vertex", "--input", fx("G3"))[0] == 1
    assert run(capsys, "nucleolus", "--input", fx("G5"), "--mode", "enumerate", "--path-budget", "2")[0] == 2
    wide = tmp_path / "wide.json"
    wide.write_text(json.dumps({"source": "s", "sink": "t",
                                "edges": [{"id": f"e{i:02}", "tail": "s", "head": "t"} for i in range(13)]}))
    assert run(capsys, "check", "--input", str(wide))[0] == 2


def test_mismatch_exit(capsys, monkeypatch):
    import pathgames.cli as cli
    monkeypatch.setattr(cli, "brute_nucleolus", lambda g: {p: 0 for p in g.players})
    status, out = run(capsys, "check", "--input", fx("G3"))
    assert status == 3 and json.loads(out)["agreement"] is False


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "pathgames.cli", "nucleolus", "--input", fx("G5"), "--trace"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == subprocess.run(cmd, capture_output=True, check=True).stdout
