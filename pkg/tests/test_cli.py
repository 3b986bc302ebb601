import json
import subprocess
import sys

import pytest

from pontrjagin.cli import main


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_a_valuation_exits_zero(capsys):
    code, out, _ = run(["verify", "--lemma", "a-valuation", "--i-max", "128"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"] == {"checked": 128, "failed": 0, "passed": 128}
    first = doc["records"][0]
    assert set(first) >= {"check", "params", "value", "nu2", "bound", "pass"}
    assert "/" in first["value"]


def test_index_prints_exact_value_and_verdict(capsys):
    code, out, _ = run(["index", "--k", "2", "--m", "1,0"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["index"] == "25/9" and doc["index_expansion"] == "25/9"
    assert doc["verdict"] == "INDEX_NOT_ONE"


def test_index_trivial_bundle(capsys):
    code, out, _ = run(["index", "--k", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["index"] == "1/1"
    assert doc["verdict"] == "DIVISIBLE_BY_16_CONFIRMED" and doc["congruence_margin"] == "inf"


@pytest.mark.parametrize("args", [
    ["verify", "--lemma", "nonexistent"],
    ["frobnicate"],
    ["verify", "--i-max", "0"],
    ["index", "--k", "2", "--m", "1,2,3"],
    ["index", "--k", "1", "--m", "1/2"],
    ["index"],
    ["verify", "--command", "index"],
    ["--bogus-flag"],
])
def test_config_errors_exit_two(args, capsys):
    assert main(args) == 2


def test_unwritable_output_exits_two(tmp_path, capsys):
    assert main(["verify", "--lemma", "a-valuation", "--i-max", "4", "--out", str(tmp_path / "missing" / "r.json")]) == 2
    assert main(["verify", "--lemma", "a-valuation", "--i-max", "4", "--out", str(tmp_path)]) == 2


def test_output_file_and_csv(tmp_path, capsys):
    path = tmp_path / "r.csv"
    assert main(["verify", "--lemma", "c1-valuation", "--k-max", "6", "--format", "csv", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "check,params,value,nu2,relation,bound,pass"
    assert len(lines) == 7


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "index", "k": 2, "m": [3, 2]}))
    code, out, _ = run(["--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["congruence_margin"] == 8
    # flags override the file
    code, out, _ = run(["--config", str(cfg), "--m", "1,0"], capsys)
    assert json.loads(out)["index"] == "25/9"


def test_config_file_rejects_unknown_fields(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "verify", "colour": "blue"}))
    assert main(["--config", str(cfg)]) == 2
    cfg.write_text(json.dumps({"command": "verify", "i_max": "many"}))
    assert main(["--config", str(cfg)]) == 2


def test_parallel_output_is_identical(capsys):
    args = ["verify", "--lemma", "series-properties", "--cases", "30", "--seed", "7"]
    _, serial, _ = run(args + ["--jobs", "1"], capsys)
    _, parallel, _ = run(args + ["--jobs", "2"], capsys)
    assert serial == parallel


def test_search(capsys):
    code, out, _ = run(["search", "--k", "1", "--box", "5"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["checked"] == 11 and not doc["partial"]
    assert {"DIVISIBLE_BY_16_CONFIRMED"} == {s["verdict"] for s in doc["solutions"]}


def test_dump_series(capsys):
    code, out, _ = run(["dump-series", "--i-max", "3"], capsys)
    rows = json.loads(out)
    assert code == 0
    assert rows[1] == {"i": 1, "a_i": "1/3", "nu2_a_i": 0, "b_i": "1/3", "nu2_b_i": 0, "kappa2_i": 1}
    assert rows[2]["b_i"] == "-1/3"
    code, out, _ = run(["dump-series", "--series", "tanh", "--precision", "5", "--format", "csv"], capsys)
    assert out.splitlines()[4] == "3,-1/3"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pontrjagin", "index", "--k", "1", "--m", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["index"] == "11/3"
