import csv
import json

import numpy as np
import pytest

from eventloc.cli import RECORD_FIELDS, main, parse_config, run
from eventloc.errors import UnsupportedDimension
from eventloc.problems import builtin
from eventloc.surface import emit_surface_samples


def _jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_single_run_jsonl(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["--problem", "example1", "--s", "1,2", "--steps", "10", "--format", "jsonl", "-o", str(out)]) == 0
    recs = _jsonl(out)
    assert [(r["s"], r["k"]) for r in recs] == [(1, 1), (2, 2)]
    for r in recs:
        assert list(r) == RECORD_FIELDS
        assert abs(r["g_residual"]) <= 5e-14
        assert r["wall_time"] is None


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for path in (a, b):
        main(["--problem", "example2", "--s", "2", "--k", "4", "--format", "jsonl", "-o", str(path)])
    assert a.read_text() == b.read_text()


def test_timing_flag(tmp_path):
    out = tmp_path / "t.jsonl"
    main(["--problem", "example1", "--steps", "5", "--format", "jsonl", "--timing", "-o", str(out)])
    assert _jsonl(out)[0]["wall_time"] > 0


def test_csv_header(tmp_path):
    out = tmp_path / "r.csv"
    main(["--problem", "example2", "--table2", "--s", "1,2", "--format", "csv", "-o", str(out)])
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == RECORD_FIELDS
    assert len(rows) == 4
    assert float(rows[0]["g_residual"]) == pytest.approx(1.1148e-05, rel=5e-4)


def test_table1_layout(capsys):
    assert main(["--problem", "example1", "--table1", "--s", "1,2,3", "--levels", "6"]) == 0
    text = capsys.readouterr().out
    lines = text.splitlines()
    assert "s=1,k=1" in lines[0] and "s=3,k=3" in lines[0]
    assert "g(x_n*)" in lines[1] and "e_n*" in lines[1] and "rate" in lines[1]
    assert len(lines) == 2 + 6
    assert "1.99e-04" in lines[3]
    assert "***" in lines[-1]


def test_table1_records(tmp_path):
    out = tmp_path / "t1.jsonl"
    main(["--problem", "example1", "--table1", "--s", "1", "--levels", "3", "--format", "jsonl", "-o", str(out)])
    recs = _jsonl(out)
    assert [r["N"] for r in recs] == [10, 20, 40]
    assert recs[0]["error"] is None and recs[0]["rate"] is None
    assert recs[2]["rate"] == pytest.approx(2.0, abs=0.1)


def test_dump_trajectory(tmp_path):
    traj = tmp_path / "traj.csv"
    rec = tmp_path / "rec.jsonl"
    assert main(["--problem", "example3", "--s", "3", "--k", "11", "--steps", "200",
                 "--dump-trajectory", str(traj), "--format", "jsonl", "-o", str(rec)]) == 0
    rows = list(csv.reader(traj.open()))
    assert rows[0] == ["t", "omega", "x1", "x2", "x3", "g", "H"]
    assert len(rows) == 202
    last = [float(v) for v in rows[-1]]
    assert last[0] == pytest.approx(1.563) and abs(last[5]) <= 1e-12 and abs(last[6]) <= 1e-12
    assert abs(_jsonl(rec)[0]["g_residual"]) <= 1e-12


def test_dump_trajectory_default_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    main(["--problem", "example1", "--steps", "4", "--dump-trajectory"])
    assert (tmp_path / "trajectory.csv").exists()


def test_k_below_s_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--problem", "example1", "--s", "2", "--k", "1"])
    assert info.value.code != 0
    assert "k must be >= s" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["--problem", "nope"], ["--problem", "example1", "--bogus"],
                                  ["--problem", "example1", "--s", "a,b"], ["--problem", "example1", "--steps", "0"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_numerical_error_exit_status(capsys):
    assert main(["--problem", "example2", "--s", "2", "--fp-max-iter", "2"]) == 1
    assert "NoConvergence" in capsys.readouterr().err


def test_run_returns_records():
    status, recs = run(parse_config(["--problem", "example3", "--example3", "--steps", "500"]))
    assert status == 0
    assert [(r["s"], r["k"]) for r in recs] == [(3, 11), (3, 3)]
    assert recs[1]["error"] > 0


def test_surface_file(tmp_path):
    out = tmp_path / "surf.csv"
    main(["--problem", "example3", "--steps", "200", "--s", "3", "--k", "11", "--surface", str(out), "--resolution", "8"])
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape[1] == 4 and data.shape[0] > 0


def test_surface_samples_on_event_set():
    p = builtin("example3")
    pts = emit_surface_samples(p, bounds=((-4, 4),) * 3, resolution=12)
    assert pts.shape[0] > 0
    for x1, x2, x3, g in pts:
        assert abs(p.g(np.array([x1, x2, x3]))) <= 1e-10
        assert g == p.g(np.array([x1, x2, x3]))


def test_surface_grid_has_both_signs():
    p = builtin("example3")
    grid = np.linspace(-4, 4, 9)
    vals = [p.g(np.array([a, b, c])) for a in grid for b in grid for c in grid]
    assert min(vals) < 0 < max(vals)


def test_surface_requires_3d():
    with pytest.raises(UnsupportedDimension):
        emit_surface_samples(builtin("example1"))


def test_dense_trajectory(tmp_path):
    traj = tmp_path / "dense.csv"
    main(["--problem", "example2", "--s", "2", "--k", "4", "--steps", "10", "--dense", "--dump-trajectory", str(traj)])
    rows = list(csv.reader(traj.open()))[1:]
    assert len(rows) == 11 + 10 * 4
    ts = [float(r[0]) for r in rows]
    assert np.all(np.diff(ts) > 0)
    # endpoints sit on the grid; stage omegas drift by the O(alpha h) correction only
    ends = rows[::5]
    assert all(float(r[0]) == float(r[1]) for r in ends)
    assert all(abs(float(r[0]) - float(r[1])) <= 1e-6 for r in rows)


PARABOLA = """
import numpy as np

def f(x):
    return np.array([1.0, 1.0])

def g(x):
    return x[0] ** 2 + x[1] - 1.0

def grad_g(x):
    return np.array([2 * x[0], 1.0])

x0 = [0.0, 0.0]
poly_degree = 2
"""


def test_problem_file(tmp_path):
    path = tmp_path / "parabola.py"
    path.write_text(PARABOLA)
    out = tmp_path / "r.jsonl"
    assert main(["--problem", str(path), "--s", "2", "--steps", "8", "--format", "jsonl", "-o", str(out)]) == 0
    rec = _jsonl(out)[0]
    assert rec["problem"] == str(path)
    assert abs(rec["g_residual"]) <= 5e-14


def test_problem_file_missing_names(tmp_path):
    from eventloc.errors import UnknownProblem
    from eventloc.problems import load_file

    path = tmp_path / "bad.py"
    path.write_text("x0 = [0.0]\n")
    with pytest.raises(UnknownProblem, match="grad_g"):
        load_file(path)
