import csv
import io
import json

import pytest

from deltahomog.cli import CHECKS, EXIT_FAIL, EXIT_OK, EXIT_PLAUSIBLE, EXIT_USAGE, main, phase_ratios
from deltahomog.metric import split_to_dict
from deltahomog.so5 import build_so5_u2
from deltahomog.metric import MetricParams

FAST = ["--oracle-restarts", "6", "--oracle-steps", "200"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_dump(capsys):
    code, out, _ = run(capsys, "roots", "B", "2")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert (doc["root_count"], doc["long"], doc["short"]) == (8, 4, 4)
    assert len(doc["basis"]) == 10


@pytest.mark.parametrize("argv", [("roots", "G2", "3"), ("roots", "E", "6"), ("roots", "B", "x")])
def test_roots_bad_input(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and "error" in err


@pytest.mark.parametrize("x2,expected", [(1.5, EXIT_OK), (2.5, EXIT_FAIL), (1.0, EXIT_OK), (0.8, EXIT_FAIL)])
def test_check_exit_codes(capsys, x2, expected):
    code, out, _ = run(capsys, "check", "so5_u2", "--x1", "1", "--x2", str(x2), "--all", *FAST)
    assert code == expected
    doc = json.loads(out)
    assert [r["condition_id"] for r in doc["reports"]] == list(CHECKS)
    assert doc["exit_code"] == code


def test_check_normal_skips(capsys):
    _, out, _ = run(capsys, "check", "so5_u2", "--ratio", "1", "--checks", "t31_4,param_range")
    assert [r.get("skipped") for r in json.loads(out)["reports"]] == ["normal metric"] * 2


def test_check_strict_plausible(capsys):
    code, _, _ = run(capsys, "check", "so5_u2", "--ratio", "1.5", "--checks", "delta_vector", "--strict", *FAST)
    assert code == EXIT_PLAUSIBLE


def test_check_csv_and_out(tmp_path, capsys):
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "check", "so5_u2", "--ratio", "2.5", "--checks", "param_range,ncdo",
                       "--format", "csv", "--out", str(target))
    assert code == EXIT_FAIL and out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert [r["condition_id"] for r in rows] == ["param_range", "ncdo"]
    assert rows[0]["holds"] == "False"


@pytest.mark.parametrize("argv", [
    ("check", "so5_u2"),
    ("check", "so5_u2", "--ratio", "1.5", "--checks", "bogus"),
    ("check", "so5_u2", "--x1", "-1", "--x2", "1"),
    ("check", "/nonexistent.json", "--ratio", "1.5"),
    ("check", "so5_u2", "--ratio", "1.5", "--oracle-restarts", "0"),
    ("check", "so5_u2", "--ratio", "1.5", "--config", "/nonexistent.json"),
    ("phase", "2", "1", "3"),
    ("phase", "1", "2", "1"),
    ("frobnicate",),
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_check_space_file(tmp_path, capsys):
    path = tmp_path / "space.json"
    path.write_text(json.dumps(split_to_dict(build_so5_u2(MetricParams(1.0, 1.5)).split)))
    code, out, _ = run(capsys, "check", str(path), "--ratio", "1.5", "--checks", "geodesic,param_range")
    assert code == EXIT_OK
    assert all(r["holds"] for r in json.loads(out)["reports"])


def test_phase_single_and_boundary(capsys):
    code, out, _ = run(capsys, "phase", "1", "1", "1")
    rows = json.loads(out)
    assert code == EXIT_OK and len(rows) == 1 and rows[0]["verdict"] is True
    code, out, _ = run(capsys, "phase", "2", "3", "3", "--no-timing", *FAST)
    assert [r["verdict"] for r in json.loads(out)] == [True, False, False]


def test_phase_is_byte_stable(capsys):
    a = run(capsys, "phase", "1.5", "2.5", "3", "--no-timing", *FAST)[1]
    b = run(capsys, "phase", "1.5", "2.5", "3", "--no-timing", *FAST)[1]
    assert a == b


def test_phase_csv_has_no_witness(capsys):
    _, out, _ = run(capsys, "phase", "2.5", "2.5", "1", "--format", "csv", *FAST)
    header = out.splitlines()[0]
    assert header == "ratio,verdict,method,worst_excess,runtime_ms"


def test_phase_ratios():
    assert phase_ratios(0.8, 2.4, 17)[2] == 1.0
    assert phase_ratios(1.0, 1.0, 1) == [1.0]
