"""Command-line runs, snapshot files and option handling."""

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aweno.cli import (MIN_CELLS, cells_from_resolution, main, parse_mesh, read_config_file,
                       read_snapshot, write_snapshot)
from aweno.errors import ConfigurationError
from aweno.grid import Grid1D, Grid2D
from aweno.models import burgers_model, euler1d_model, euler2d_model, get_problem


def _run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_burgers_snapshot_columns(tmp_path):
    grid = Grid1D(0.0, 1.0, 4)
    U = np.array([[0.1, -0.2, 0.3, 0.4]])
    path = write_snapshot(U, grid, burgers_model(), tmp_path / "b.csv")
    snap = read_snapshot(path)
    assert snap.columns == ("x", "u")
    assert snap.data.shape == (4, 2)


def test_euler_snapshot_columns(tmp_path):
    grid = Grid1D(0.0, 1.0, 5)
    m = euler1d_model()
    U = m.conservative(np.array([[1.0, 2, 3, 4, 5], [0.1] * 5, [1.0] * 5]))
    snap = read_snapshot(write_snapshot(U, grid, m, tmp_path / "e.csv"))
    assert snap.columns == ("x", "rho", "mom", "E", "u", "p")


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False, allow_subnormal=True),
                min_size=12, max_size=12))
def test_snapshot_roundtrip_bitwise(tmp_path_factory, values):
    grid = Grid1D(0.0, 1.0, 12)
    U = np.array([values])
    path = tmp_path_factory.mktemp("snap") / "s.csv"
    back = read_snapshot(write_snapshot(U, grid, burgers_model(), path)).field(1, (12,))
    assert np.array_equal(back, U)


def test_snapshot_roundtrip_2d(tmp_path, rng):
    grid = Grid2D(Grid1D(0.0, 1.0, 6), Grid1D(0.0, 2.0, 4))
    m = euler2d_model()
    V = np.stack([1 + rng.random((6, 4)), rng.standard_normal((6, 4)),
                  rng.standard_normal((6, 4)), 1 + rng.random((6, 4))])
    U = m.conservative(V)
    snap = read_snapshot(write_snapshot(U, grid, m, tmp_path / "s.csv", {"k": "v"}))
    assert snap.columns[:2] == ("x", "y")
    assert np.array_equal(snap.field(4, (6, 4)), U)
    # row-major over (nx, ny): y varies fastest
    assert np.array_equal(snap.data[:4, 0], np.full(4, grid.x.centers[0]))
    assert snap.metadata == {"k": "v"}


def test_run_burgers_writes_final_snapshot(tmp_path):
    code, text = _run(["run", "--problem", "burgers", "--scheme", "new", "--nx", "40",
                       "--out", str(tmp_path)])
    assert code == 0
    files = sorted(tmp_path.glob("*.csv"))
    assert [f.name for f in files] == ["burgers-new-t0.4.csv"]
    snap = read_snapshot(files[0])
    assert snap.data.shape == (40, 2)
    assert float(snap.metadata["time"]) == 0.4
    assert snap.metadata["problem"] == "burgers"
    assert snap.metadata["scheme"] == "new"
    assert snap.metadata["cells"] == "40"
    assert snap.metadata["cfl"] == "0.45"


def test_run_is_deterministic(tmp_path):
    args = ["run", "--problem", "burgers", "--nx", "20", "--t-final", "0.1"]
    _run(args + ["--out", str(tmp_path / "a")])
    _run(args + ["--out", str(tmp_path / "b")])
    a = (tmp_path / "a" / "burgers-new-t0.1.csv").read_bytes()
    b = (tmp_path / "b" / "burgers-new-t0.1.csv").read_bytes()
    assert a == b


def test_run_snapshot_times(tmp_path):
    code, _ = _run(["run", "--problem", "burgers", "--cells", "16", "--t-final", "0.2",
                    "--snapshots", "0.05,0.1", "--out", str(tmp_path)])
    assert code == 0
    names = sorted(f.name for f in tmp_path.glob("*.csv"))
    assert names == ["burgers-new-t0.05.csv", "burgers-new-t0.1.csv", "burgers-new-t0.2.csv"]


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nproblem = burgers\nscheme=old\nt-final=0.05\ncells=16\n")
    code, _ = _run(["run", "--config", str(cfg), "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "burgers-old-t0.05.csv").exists()
    code, _ = _run(["run", "--config", str(cfg), "--scheme", "new", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "burgers-new-t0.05.csv").exists()


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("problem=burgers\ncolour=blue\n")
    assert _run(["run", "--config", str(cfg)])[0] == 2
    assert "colour" in capsys.readouterr().err


def test_read_config_file_syntax(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("a-b = 1  # trailing\n\n")
    assert read_config_file(cfg) == {"a_b": "1"}
    cfg.write_text("no equals sign\n")
    with pytest.raises(ConfigurationError):
        read_config_file(cfg)


def test_unknown_problem_exit_code(capsys):
    assert _run(["run", "--problem", "nope"])[0] == 2
    assert "usage" in capsys.readouterr().err


def test_missing_problem_exit_code():
    assert _run(["bench"])[0] == 2


def test_unknown_flag_exits():
    with pytest.raises(SystemExit) as info:
        main(["run", "--problem", "burgers", "--bogus"], io.StringIO())
    assert info.value.code != 0


def test_too_few_cells_rejected():
    assert _run(["run", "--problem", "burgers", "--cells", str(MIN_CELLS - 1)])[0] == 2


def test_mesh_fractions():
    assert parse_mesh("400/3") * 3 == 400
    p = get_problem("scalar-source")
    assert cells_from_resolution(p, "10") == (40,)
    with pytest.raises(ConfigurationError):
        cells_from_resolution(get_problem("burgers"), "40/3")
    with pytest.raises(ConfigurationError):
        parse_mesh("-4")
    assert cells_from_resolution(get_problem("implosion"), "400/3") == (40, 40)


def test_list_catalog():
    code, text = _run(["list"])
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0].startswith("name,dims,t_final")
    names = [line.split(",")[0] for line in lines[1:]]
    assert names == ["burgers", "buckley-leverett", "scalar-source", "euler-smooth",
                     "shock-entropy", "blast", "implosion", "multifluid-explosion"]


def test_converge_table_shape(capsys):
    code, text = _run(["converge", "--problem", "burgers", "--meshes", "20,40,80",
                       "--t-final", "0.05", "--schemes", "new", "--variables", "u"])
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "variant,dx,u_error,u_rate"
    assert len(lines) == 2 and lines[1].startswith("new,0.0125,")


def test_bench_table(tmp_path):
    out = tmp_path / "bench.csv"
    code, text = _run(["bench", "--problem", "burgers", "--cells", "64", "--reps", "1",
                       "--steps", "3", "--output", str(out)])
    assert code == 0
    assert out.read_text().splitlines()[0].startswith("variant")
