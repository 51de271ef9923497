import csv
import json
import math
import subprocess
import sys

import pytest

from ghzeig.cli import main

UPPER_EDGE = (math.sqrt(2 * (75 + 7 * math.sqrt(5))) - (7 + math.sqrt(5))) / 6


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_json(tmp_path, data, name="h.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_conditions_eigenstate(capsys):
    code, out, _ = run(["conditions", "--model", "symmetric-ring4", "--jx", "1", "--jz", "-1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["is_plus_eigenstate"] and rep["phi_bar_norm"] > 0


def test_conditions_violated(capsys):
    code, out, _ = run(["conditions", "--model", "ring-xz4", "--jx", "1,0,0,0", "--jz", "0,0,0,0"], capsys)
    assert code == 1 and not json.loads(out)["is_plus_eigenstate"]


def test_conditions_bad_file(tmp_path, capsys):
    path = write_json(tmp_path, {"n": 5, "m": 2, "terms": [{"coeff": 1.0, "string": "XXXXX"}]})
    code, _, err = run(["conditions", "--input", path], capsys)
    assert code == 2 and "XXXXX" in err


def test_spectrum_ring4(capsys):
    code, out, _ = run(["spectrum", "--model", "symmetric-ring4", "--jx", "0.5", "--jz", "-1"], capsys)
    assert code == 0
    t = json.loads(out)["targets"][0]
    assert (t["name"], t["eigenvalue"], t["rank"], t["multiplicity"]) == ("ghz+", -1.0, 1, 1)


def test_spectrum_five_qubit(capsys):
    code, out, _ = run(["spectrum", "--model", "five-qubit-3body", "--jx", "0", "--jz", "-1"], capsys)
    t = json.loads(out)["targets"][0]
    assert code == 0 and t["rank"] == 0 and t["multiplicity"] == 2


def test_spectrum_empty_file(tmp_path, capsys):
    code, _, err = run(["spectrum", "--input", write_json(tmp_path, {"n": 3, "terms": []})], capsys)
    assert code == 2 and "empty" in err


def test_spectrum_dump_limit(tmp_path, capsys):
    path = write_json(tmp_path, {"n": 7, "terms": [{"coeff": 1.0, "string": "ZZIIIII"}]})
    assert run(["spectrum", "--input", path, "--dump-amplitudes"], capsys)[0] == 2
    code, out, _ = run(["spectrum", "--model", "symmetric-ring4", "--jz", "-1", "--dump-amplitudes"], capsys)
    assert code == 0 and len(json.loads(out)["eigenvectors"]) == 16


@pytest.mark.parametrize(
    "argv,expect",
    [
        (["--n", "6", "--m", "2", "--samples", "100", "--seed", "7"], 0),
        (["--n", "4", "--m", "2"], 2),
        (["--n", "5", "--m", "2", "--samples", "100"], 0),
    ],
)
def test_verify_theorem(argv, expect, capsys):
    code, out, err = run(["verify-theorem", *argv], capsys)
    assert code == expect
    if expect == 2:
        assert "m* = [(n+1)/2] = 2" in err
    else:
        rep = json.loads(out)
        assert rep["all_passed"] and set(rep) >= {"n", "m", "m_star", "samples", "seed", "max_residual"}


def test_scan_five_qubit(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(["scan", "--model", "five-qubit-3body", "--jz", "-1", "--ratios", "-1:1:0.05",
                      "--out", str(out)], capsys)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["ratio", "jz", "jx", "ghz_eigenvalue", "rank", "multiplicity", "in_window"]
    assert [float(r["ratio"]) for r in rows] == sorted(float(r["ratio"]) for r in rows)
    footer = json.loads((tmp_path / "scan.endpoints.json").read_text())
    lo, hi = (float(v) for v in footer["window"])
    assert abs(lo - (-2 + 2 / math.sqrt(3))) < 1e-5
    assert abs(hi - UPPER_EDGE) < 1e-5


def test_scan_ring4(capsys):
    code, out, err = run(["scan", "--model", "symmetric-ring4", "--jz", "-1", "--ratios", "-1.5:1.5:0.1"], capsys)
    assert code == 0 and out.startswith("ratio,")
    lo, hi = (float(v) for v in json.loads(err)["window"])
    assert abs(lo + 1) < 1e-5 and abs(hi - 1) < 1e-5


@pytest.mark.parametrize("ratios", ["", " "])
def test_scan_empty_grid(ratios, capsys):
    assert run(["scan", "--model", "symmetric-ring4", "--jz", "-1", "--ratios", ratios], capsys)[0] == 2


def test_scan_rejects_positive_jz(capsys):
    assert run(["scan", "--model", "symmetric-ring4", "--jz", "1", "--ratios", "0:1:0.5"], capsys)[0] == 2


def test_usage_errors(capsys):
    assert run(["conditions"], capsys)[0] == 2
    assert run(["conditions", "--model", "symmetric-ring4", "--input", "x.json"], capsys)[0] == 2
    assert run(["conditions", "--model", "ring-xz4", "--jx", "1,2", "--jz", "0,0,0,0"], capsys)[0] == 2
    assert run(["conditions", "--input", "/nonexistent/h.json"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    assert run(["witness", "--n", "5", "--m", "2"], capsys)[0] == 2


def test_nullspace_ring_family(capsys):
    code, out, _ = run(["nullspace", "--n", "4", "--m", "2", "--family", "ring-xz4"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["rank"] == 2 and rep["dimension"] == 6


def test_witness_and_decompose(capsys):
    code, out, _ = run(["witness", "--n", "4", "--m", "2"], capsys)
    assert code == 0 and json.loads(out)["multiplicity"] == 1
    code, out, _ = run(["decompose", "--model", "symmetric-ring4", "--jx", "1", "--jz", "0"], capsys)
    assert json.loads(out)["minus"]["buckets"]["a[(1,2)]"] == {"re": 0.5, "im": 0.0}


def test_census_exit(capsys):
    code, out, _ = run(["census", "--model", "symmetric-ring4", "--jx", "0.5", "--jz", "-1"], capsys)
    assert code == 0 and len(json.loads(out)["ghz_states"]) == 4
    assert run(["census", "--model", "symmetric-ring4", "--jz", "-1"], capsys)[0] == 1


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "ghzeig", *args], capture_output=True, text=True)


@pytest.mark.parametrize(
    "args",
    [
        ("verify-theorem", "--n", "5", "--m", "2", "--samples", "20", "--seed", "3"),
        ("witness", "--n", "6", "--m", "3", "--seed", "1"),
        ("spectrum", "--model", "five-qubit-3body", "--jx", "0.3", "--jz", "-1"),
        ("scan", "--model", "symmetric-ring4", "--jz", "-1", "--ratios", "-1.2:1.2:0.2"),
    ],
)
def test_byte_identical_reruns(args):
    first, second = _cli(*args), _cli(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout and first.stderr == second.stderr
    assert first.stdout
