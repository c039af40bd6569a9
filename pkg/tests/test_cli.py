import csv
import json

import pytest

from run_experiments import run

EPS = ["--eps1", "1", "--eps2", "3", "--eps3", "3"]


@pytest.fixture
def common(tmp_path):
    return ["--defaults", str(tmp_path / "run_defaults.json"), "--output-dir", str(tmp_path / "out")]


def _report(tmp_path):
    return json.loads((tmp_path / "out" / "report.json").read_text())


def test_oscillator_export_then_verify(tmp_path, common):
    exported = tmp_path / "oscillator.json"
    assert run(["oscillator", *EPS, "--export-pair", str(exported), *common]) == 0
    report = _report(tmp_path)
    assert report["passed"]
    assert report["details"]["superdimension"] == [6, 6]
    assert any(not e["consistent"] for e in report["details"]["errata"])
    assert (tmp_path / "out" / "summary.txt").exists()

    assert run(["verify", str(exported), *common]) == 0
    assert _report(tmp_path)["details"]["pair"]["n1"] == 3


def test_corrupted_pair_fails_with_witness(tmp_path, common):
    exported = tmp_path / "oscillator.json"
    assert run(["oscillator", *EPS, "--export-pair", str(exported), *common]) == 0
    doc = json.loads(exported.read_text())
    doc["m1"][0][4] += 1
    exported.write_text(json.dumps(doc))
    assert run(["verify", str(exported), *common]) == 1
    report = _report(tmp_path)
    assert not report["passed"]
    failures = [item for r in report["reports"] for item in r["identities"] if not item["passed"]]
    assert failures and any(item["witness"] for item in failures)


def test_malformed_input_exits_2(tmp_path, common):
    broken = tmp_path / "broken.json"
    broken.write_text("{\"n1\": ")
    assert run(["verify", str(broken), *common]) == 2
    assert run(["verify", str(tmp_path / "missing.json"), *common]) == 2


def test_usage_errors_exit_2(common):
    assert run(["transmogrify"]) == 2
    assert run(["oscillator", "--eps1", "1", "--eps2", "0", "--eps3", "3", *common]) == 2


def test_classical_writes_trajectory(tmp_path, common):
    args = ["classical", *EPS, "--state", "1", "0", "2", "0", "1", "1", "--t-end", "1", "--dt", "5e-4",
            "--sample-every", "10", *common]
    assert run(args) == 0
    with open(tmp_path / "out" / "trajectory.csv", newline='') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["t", "P", "Q", "R", "A", "B", "C", "I1sq", "I2sq", "L", "Lambda", "theta", "chi", "xi"]
    assert len(rows) == 202
    report = _report(tmp_path)
    assert report["checks"]["xi_slope"]
    assert report["details"]["reduction"]["available"]


def test_quantum_subpair(tmp_path, common):
    args = ["quantum", *EPS, "--subpair", "--t-end", "1", "--dt", "1e-3", "--sample-every", "10", "--operators",
            *common]
    assert run(args) == 0
    report = _report(tmp_path)
    assert report["details"]["hidden_hamiltonian"]["classification"] == "confirmed"
    assert report["checks"]["conjugation_agrees"]
    assert (tmp_path / "out" / "relations.csv").exists()
    first = json.loads((tmp_path / "out" / "operators.jsonl").read_text().splitlines()[0])
    assert first["t"] == 0.0 and first["P"][2][0] == 1.0


def test_appendix(tmp_path, common, data_dir):
    args = ["appendix", "--g", str(data_dir / "sl2.json"), "--bunch", str(data_dir / "bunch_sl2_c2.json"),
            "--isorep", str(data_dir / "isorep_two_dim.json"), *common]
    assert run(args) == 0
    details = _report(tmp_path)["details"]
    assert details["bunch"]["complete"]
    assert details["standard_isorep"] == {"q_invertible": True, "intertwiner_dimension": 1}
    assert details["isorep"]["intertwiner_dimension"] == 1


def test_failed_search_exits_1(tmp_path, common):
    args = ["search", *EPS, "--subpair", "--d1", "1", "--d2", "1", "--seeds", "4", "--max-iters", "100", *common]
    assert run(args) == 1
    result = json.loads((tmp_path / "out" / "search_result.json").read_text())
    assert result["success"] is False
    assert len(result["attempts"]) == 4
