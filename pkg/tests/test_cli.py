from __future__ import annotations

import csv
import json

import pytest

from lcacodes.cli import run
from lcacodes.files import write_json


@pytest.fixture
def qubit_file(tmp_path):
    path = tmp_path / "qubit.json"
    run(["simple", "--c", "3", "--d", "2", "--theta", "0", "--out", str(path)])
    return path


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        run(["--version"])
    assert e.value.code == 0
    assert "lcacodes" in capsys.readouterr().out


def test_list_strategies():
    with pytest.raises(SystemExit) as e:
        run(["--list-strategies"])
    assert e.value.code == 0


def test_simple_then_verify(tmp_path, qubit_file):
    assert json.loads(qubit_file.read_text())["K"] == 2
    report = tmp_path / "report.json"
    run(["verify", str(qubit_file), "--out", str(report)])
    data = json.loads(report.read_text())
    assert data["passed"]
    assert data["K"] == 2


def test_general_form_verifies(tmp_path):
    path = tmp_path / "general.json"
    run(["simple", "--c", "3", "--d", "2", "--theta", "1", "--general", "--out", str(path)])
    assert json.loads(path.read_text())["kind"] == "general"
    run(["verify", str(path), "--out", str(tmp_path / "report.json")])


def test_tampered_code_exits_2(tmp_path, qubit_file):
    data = json.loads(qubit_file.read_text())
    data["K"] = 3
    write_json(data, qubit_file)
    with pytest.raises(SystemExit) as e:
        run(["verify", str(qubit_file), "--out", str(tmp_path / "report.json")])
    assert e.value.code == 2


def test_missing_file_exits_1(tmp_path):
    with pytest.raises(SystemExit) as e:
        run(["verify", str(tmp_path / "missing.json")])
    assert e.value.code == 1


def test_invalid_code_exits_1(tmp_path):
    with pytest.raises(SystemExit) as e:
        run(["simple", "--c", "4", "--d", "2", "--theta", "0", "--out", str(tmp_path / "x.json")])
    assert e.value.code == 1


def test_noiseless_monte_carlo(tmp_path, qubit_file):
    out = tmp_path / "mc.csv"
    run(["decode-mc", str(qubit_file), "--trials", "100", "--seed", "7", "--out", str(out)])
    with open(out, newline="") as f:
        (row,) = csv.DictReader(f)
    assert row["strategy"] == "qudit"
    assert row["trials"] == "100"
    assert row["failures"] == "0"


def test_monte_carlo_physical_sigma(tmp_path, qubit_file):
    out = tmp_path / "mc.csv"
    run(
        [
            "decode-mc", str(qubit_file), "--strategy", "pure", "--sigma", "0 quadrature",
            "--trials", "10", "--out", str(out),
        ]
    )
    with open(out, newline="") as f:
        (row,) = csv.DictReader(f)
    assert row["strategy"] == "pure"
    assert row["failures"] == "0"


def test_bad_sigma_unit(qubit_file):
    with pytest.raises(SystemExit) as e:
        run(["decode-mc", str(qubit_file), "--sigma", "1 meter"])
    assert e.value.code == 1


def test_decode_sweep(tmp_path, qubit_file):
    out = tmp_path / "sweep.csv"
    run(["decode-sweep", str(qubit_file), "--strategy", "pure", "--grid", "3", "--out", str(out)])
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 9
    assert all(row["success"] == "1" for row in rows)


def test_smith(tmp_path):
    matrix = tmp_path / "a.json"
    write_json({"rows": [["0", "-2/3"], ["2/3", "0"]]}, matrix)
    out = tmp_path / "smith.json"
    run(["smith", "--a", str(matrix), "--out", str(out)])
    data = json.loads(out.read_text())
    assert data["m"] == 3
    assert (data["c"], data["d"]) == (["3"], ["2"])


def test_hadamard(tmp_path, qubit_file):
    out = tmp_path / "gate.json"
    run(["hadamard", str(qubit_file), "--out", str(out)])
    data = json.loads(out.read_text())
    assert data["report"]["passed"]
    assert data["gate"]["V_dv"]["rows"] == [["0", "2"], ["1", "0"]]


def test_catalog_square_verifies(tmp_path):
    path = tmp_path / "square.json"
    run(["catalog", "square", "--modes", "2", "--out", str(path)])
    assert json.loads(path.read_text())["K"] == 4
    run(["verify", str(path), "--out", str(tmp_path / "report.json")])


def test_catalog_e8(tmp_path):
    out = tmp_path / "e8.json"
    run(["catalog", "e8", "--out", str(out)])
    assert len(json.loads(out.read_text())["rows"]) == 8
