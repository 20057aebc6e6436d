from __future__ import annotations

import argparse
import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from argus.cli import main, parse_grid, parse_region, parse_tolerance, worker_count
from argus.factory import Cofactor, FactorySpec
from argus.geometry import Region, ZeroRecord


def _run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def _strip(report: dict) -> dict:
    report = dict(report)
    report.pop("timestamp")
    return report


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("geometric:0.25:0.001:12")[[0, -1]], [0.25, 0.001])
    np.testing.assert_allclose(parse_grid("linear:0.9:0.1:5"), [0.9, 0.7, 0.5, 0.3, 0.1])
    np.testing.assert_allclose(parse_grid("0.5,0.25"), [0.5, 0.25])
    for bad in ("geometric:0:1:4", "linear:0.9:0.1:1", "spiral:0.9:0.1:4"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_grid(bad)


def test_parse_tolerance_and_region():
    assert parse_tolerance("1e-8") == 1e-8
    for bad in ("1e-13", "0.1"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_tolerance(bad)
    assert parse_region("cone:2") == Region.cone(2.0)
    assert parse_region("half-plane:0:1") == Region.half_plane(1j)
    assert parse_region("cone-infinity") == Region.cone_infinity()
    with pytest.raises(argparse.ArgumentTypeError):
        parse_region("wedge")


def test_out_of_range_tolerance_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["index-profile", "--tolerance", "1"])
    assert info.value.code == 2


def test_index_profile_csv_has_constant_scaled_column(capsys):
    code, out = _run(["index-profile", "--builtin", "counterexample", "--grid", "geometric:0.25:0.001:12",
                      "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["r", "I", "err", "I_sqrt_r"]
    assert len(rows) == 12
    scaled = np.array([float(r["I_sqrt_r"]) for r in rows])
    np.testing.assert_allclose(scaled, 1 / (math.sqrt(2) * math.pi), rtol=1e-6)
    # full double precision in the text
    assert float(rows[0]["r"]) == 0.25
    assert all(len(r["I"].replace(".", "").replace("-", "").split("e")[0].lstrip("0")) >= 15 for r in rows)


def test_blaschke_cert_json(capsys):
    code, out = _run(["blaschke-cert", "--M", "10", "--N", "10"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == 1
    assert report["command"] == "blaschke-cert"
    assert report["all_pass"] is True
    assert report["tolerance"] == 1e-8
    assert all({"name", "paper_anchor", "measured", "expected", "tolerance", "pass"} <= set(c) for c in report["checks"])


def test_reports_are_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["jump-check", "--builtin", "mixed-two-radii", "--output", str(path)]) == 0
    assert _strip(json.loads(a.read_text())) == _strip(json.loads(b.read_text()))


def test_function_spec_file(capsys, tmp_path):
    spec = FactorySpec((ZeroRecord(0.5), ZeroRecord(0.5j)), Cofactor(exp_poly=(0, 1)), name="from-file")
    path = tmp_path / "spec.json"
    path.write_text(spec.to_json())
    code, out = _run(["jump-check", "--function-spec", str(path), "--tolerance", "1e-10"], capsys)
    assert code == 0
    report = json.loads(out)
    (check,) = report["checks"]
    assert check["expected"] == 1.5
    assert abs(check["measured"] - 1.5) < 1e-3


def test_engine_error_exits_two(capsys):
    code = main(["index-profile", "--builtin", "boundary-pair", "--grid", "0.9,0.5,0.2"])
    captured = capsys.readouterr()
    assert code == 2
    report = json.loads(captured.out)
    assert report["error"]["type"] == "ZeroOnPath"
    assert report["all_pass"] is False
    assert captured.err.startswith("argus: ZeroOnPath")


def test_check_failure_exits_one(capsys):
    code, out = _run(["cone-certify", "--builtin", "counterexample", "--interval", "0.01:0.9",
                      "--region", "cone:1"], capsys)
    assert code == 1
    assert json.loads(out)["all_pass"] is False
    code, _ = _run(["vanishing-order", "--builtin", "counterexample", "--expect", "order-3"], capsys)
    assert code == 1
    code, _ = _run(["vanishing-order", "--builtin", "counterexample", "--expect", "infinite-order-up-to(40)"], capsys)
    assert code == 0


def test_cusp_envelope_and_summation(capsys):
    code, out = _run(["cusp-envelope", "--coeffs", "1,0.5,0.25", "--leading", "3", "--a", "0.4"], capsys)
    assert code == 0
    code, out = _run(["summation-check", "--builtin", "three-radius", "--N", "3", "--inner-radius", "0.1",
                      "--region", "cone-infinity", "--tolerance", "1e-10"], capsys)
    assert code == 0
    assert json.loads(out)["all_pass"]


def test_worker_count(monkeypatch):
    monkeypatch.setenv("ARGUS_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("ARGUS_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.delenv("ARGUS_THREADS")
    assert worker_count() >= 1


def test_verify_all_passes_and_is_independent_of_workers(tmp_path, monkeypatch):
    reports = []
    for threads in ("1", "4"):
        monkeypatch.setenv("ARGUS_THREADS", threads)
        out = tmp_path / f"verify-{threads}.json"
        assert main(["verify-all", "--output", str(out)]) == 0
        reports.append(_strip(json.loads(out.read_text())))
    assert reports[0] == reports[1]
    names = [c["name"] for c in reports[0]["checks"]]
    assert len(names) == len(set(names)) >= 90


def test_injected_failure_is_reported(tmp_path, monkeypatch):
    monkeypatch.setenv("ARGUS_THREADS", "1")
    out = tmp_path / "inject.json"
    assert main(["verify-all", "--inject-failure", "jump-law", "--output", str(out)]) == 1
    report = json.loads(out.read_text())
    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    assert failed == ["jump-law/broken-ledger/r=0.5"]
    assert report["data"]["injected"] == ["jump-law"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "argus", "blaschke-cert", "--M", "2", "--N", "2", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "name,measured,expected,tolerance,pass"
